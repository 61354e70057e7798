#![allow(dead_code)]

use std::cell::UnsafeCell;
use std::sync::{Mutex, MutexGuard};

use locks::RawLock;

/// Deliberately unsynchronized counter: the mutual exclusion of the lock
/// under test is the only thing keeping increments race-free, so a broken
/// lock loses counts (or trips tsan/miri) instead of passing silently.
pub struct RacyCounter(UnsafeCell<u64>);

unsafe impl Sync for RacyCounter {}

impl RacyCounter {
    pub const fn new() -> Self {
        RacyCounter(UnsafeCell::new(0))
    }

    /// Caller must hold the lock under test.
    pub fn bump(&self) {
        unsafe { *self.0.get() += 1 }
    }

    pub fn get(&self) -> u64 {
        unsafe { *self.0.get() }
    }
}

/// Append-only log written under the lock under test; push order is
/// acquisition order.
pub struct RacyLog(UnsafeCell<Vec<u64>>);

unsafe impl Sync for RacyLog {}

impl RacyLog {
    pub fn with_capacity(n: usize) -> Self {
        RacyLog(UnsafeCell::new(Vec::with_capacity(n)))
    }

    /// Caller must hold the lock under test.
    pub fn push(&self, v: u64) {
        unsafe { (*self.0.get()).push(v) }
    }

    pub fn take(self) -> Vec<u64> {
        self.0.into_inner()
    }
}

/// Serializes spin-heavy tests within one test binary so parallel test
/// threads do not multiply the oversubscription.
pub fn serial() -> MutexGuard<'static, ()> {
    static GUARD: Mutex<()> = Mutex::new(());
    GUARD.lock().unwrap_or_else(|e| e.into_inner())
}

/// T threads × N balanced acquire/release pairs around a racy counter;
/// asserts the final count is exactly T×N. A start barrier keeps the
/// threads' loops overlapping — on a single-CPU host, threads spawned
/// one by one otherwise tend to run their whole loop to completion
/// uncontended.
pub fn exclusion_suite<L: RawLock>(lock: &L, threads: usize, per_thread: u64) {
    let counter = RacyCounter::new();
    let start = std::sync::Barrier::new(threads);
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| {
                start.wait();
                for _ in 0..per_thread {
                    lock.acquire();
                    counter.bump();
                    lock.release();
                }
            });
        }
    });
    assert_eq!(counter.get(), threads as u64 * per_thread);
}

/// Runs `work` on a helper thread and panics if it has not finished
/// within `secs`. The helper leaks on timeout, which is acceptable in a
/// failing test.
pub fn within_secs<F: FnOnce() + Send + 'static>(secs: u64, what: &str, work: F) {
    let (tx, rx) = std::sync::mpsc::channel();
    std::thread::spawn(move || {
        work();
        let _ = tx.send(());
    });
    rx.recv_timeout(std::time::Duration::from_secs(secs))
        .unwrap_or_else(|_| panic!("{what}: deadlocked or overran the {secs} s watchdog"));
}
