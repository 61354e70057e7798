use clap::Parser;
use lockbench::args::Args;
use std::io;
use std::process;

fn main() {
    // clap itself exits 2 on unparseable flags.
    let args = Args::parse();
    let stdout = io::stdout();
    let mut stderr = io::stderr();
    process::exit(lockbench::execute(&args, stdout.lock(), &mut stderr));
}
