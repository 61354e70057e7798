//! Spin lock implementations organized around ticket dispensing.
//!
//! The centerpiece is [`TwaLock`], a ticket lock augmented with a shared
//! [`WaitingArray`]: waiters that are far from their turn watch a hashed
//! slot of the array instead of hammering the lock's grant field, so a
//! release invalidates the cache line of at most a couple of waiters
//! instead of all of them. The crate also provides the classic
//! [`TicketLock`] (plus a 32-bit [`CompactTicketLock`]), an MCS queue
//! lock with an internal node pool ([`McsLock`]), a plain test-and-set
//! lock ([`TasLock`]), and three related designs: [`TktDualLock`] (two
//! grant fields in separate cache sectors), [`TwaIdLock`] (waiting array
//! slots hold thread identities instead of counters), and
//! [`ThreeStageLock`] (a ticket/TAS composite).
//!
//! All locks share the same unscoped interface: `acquire` and `release`
//! take only `&self`, with no guard object or per-call context. Waiting
//! is always busy-waiting with a CPU relax hint on every iteration; there
//! is deliberately no backoff and no yielding. Debug builds assert that
//! `release` is called by the current holder.

mod pad;
mod tid;

pub mod mcs;
pub mod tas;
pub mod three_stage;
pub mod ticket;
pub mod tktdual;
pub mod twa;
pub mod twaid;
pub mod waiting_array;

pub use mcs::McsLock;
pub use pad::{CacheSector, SECTOR_BYTES};
pub use tas::TasLock;
pub use three_stage::ThreeStageLock;
pub use ticket::{CompactTicketLock, TicketLock};
pub use tid::thread_token;
pub use tktdual::TktDualLock;
pub use twa::TwaLock;
pub use twaid::{IdentityArray, TwaIdLock};
pub use waiting_array::WaitingArray;

/// Minimal mutual-exclusion interface shared by every lock in this crate.
///
/// `release` must be called by the thread that acquired the lock, exactly
/// once per acquisition. Implementations that hand out tickets expose the
/// ticket through an inherent `acquire` method; the trait discards it so
/// generic driver code can treat all locks uniformly.
pub trait RawLock: Send + Sync {
    fn acquire(&self);
    fn release(&self);
}
