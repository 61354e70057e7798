//! Shared array of notification counters for long-term waiting.
//!
//! A waiter that is still far from the head of a ticket queue parks on
//! one slot of this array instead of the lock's grant field. The slot is
//! chosen by [`slot_index`] from the lock's identity and the waiter's
//! ticket; the releasing thread bumps the slot of the ticket that has
//! just come within the admission threshold. Slot values carry no
//! meaning beyond "changed": a waiter records the value it saw and waits
//! for it to differ, so collisions — two tickets or even two unrelated
//! locks hashing to one slot — cost a spurious recheck, never a missed
//! wakeup.
//!
//! One array serves the whole process by default ([`WaitingArray::global`]);
//! private instances are constructible for isolation experiments.

use core::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::pad::SECTOR_BYTES;

/// Default number of slots in the process-global array: 4096 slots of
/// 8 bytes, 32 KiB total.
pub const DEFAULT_LEN: usize = 4096;

/// Stride multiplier for [`slot_index`]. 127 is odd (so ticket values
/// walk the whole power-of-two index space) and prime, and it steps
/// adjacent tickets 127 slots apart so they never share a 128-byte
/// sector; an irregular stride also defeats stride-based prefetchers.
pub const MULTIPLIER: usize = 127;

const SLOTS_PER_SECTOR: usize = SECTOR_BYTES / core::mem::size_of::<AtomicU64>();

#[repr(C, align(128))]
pub(crate) struct SlotSector(pub(crate) [AtomicU64; SLOTS_PER_SECTOR]);

impl SlotSector {
    pub(crate) fn zeroed() -> Self {
        SlotSector(core::array::from_fn(|_| AtomicU64::new(0)))
    }
}

/// Slot index for a (lock, ticket) pair: `((ticket * 127) ^ lockIdentity) & mask`.
///
/// `mask` must be a power of two minus one. Only the low bits of the
/// product survive the mask, so the wrapping multiply is exact.
pub fn slot_index(mask: usize, lock_identity: usize, ticket: u32) -> usize {
    ((ticket as usize).wrapping_mul(MULTIPLIER) ^ lock_identity) & mask
}

pub struct WaitingArray {
    sectors: Box<[SlotSector]>,
    mask: usize,
    len: usize,
    /// Per-slot count of waiter-side loads; diagnostics for tests that
    /// need to observe where (and whether) a thread is long-term waiting.
    #[cfg(debug_assertions)]
    loads: Box<[AtomicU64]>,
}

impl WaitingArray {
    /// Creates an array with `len` slots. `len` must be a power of two
    /// (1 is legal and makes every ticket collide, which is correct but
    /// slow). Backing storage is allocated once, sector-aligned; the
    /// array never allocates after construction.
    pub fn new(len: usize) -> Self {
        assert!(
            len.is_power_of_two(),
            "waiting array length must be a power of two, got {len}"
        );
        let n_sectors = len.div_ceil(SLOTS_PER_SECTOR);
        let sectors: Box<[SlotSector]> = (0..n_sectors).map(|_| SlotSector::zeroed()).collect();
        WaitingArray {
            sectors,
            mask: len - 1,
            len,
            #[cfg(debug_assertions)]
            loads: (0..len).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    /// The process-wide shared array (4096 slots), built on first use.
    pub fn global() -> Arc<WaitingArray> {
        static GLOBAL: OnceLock<Arc<WaitingArray>> = OnceLock::new();
        GLOBAL
            .get_or_init(|| Arc::new(WaitingArray::new(DEFAULT_LEN)))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, lock_identity: usize, ticket: u32) -> usize {
        slot_index(self.mask, lock_identity, ticket)
    }

    fn slot(&self, at: usize) -> &AtomicU64 {
        &self.sectors[at / SLOTS_PER_SECTOR].0[at % SLOTS_PER_SECTOR]
    }

    /// Waiter-side read of a slot. Acquire: a waiter that observes a
    /// releaser's bump must also observe the grant store that preceded it.
    pub fn load(&self, at: usize) -> u64 {
        #[cfg(debug_assertions)]
        self.loads[at].fetch_add(1, Ordering::Relaxed);
        self.slot(at).load(Ordering::Acquire)
    }

    /// Reads a slot without counting as waiter traffic; for tests and
    /// diagnostics only.
    pub fn peek(&self, at: usize) -> u64 {
        self.slot(at).load(Ordering::Acquire)
    }

    /// Bumps the slot for `ticket` of the lock identified by
    /// `lock_identity`. Called by releasers; the increment is an atomic
    /// RMW so concurrent releasers hashing to the same slot both take
    /// effect.
    pub fn notify_ticket(&self, lock_identity: usize, ticket: u32) {
        self.notify(self.index(lock_identity, ticket));
    }

    pub fn notify(&self, at: usize) {
        self.slot(at).fetch_add(1, Ordering::SeqCst);
    }

    /// How many times waiters have loaded slot `at` (debug builds only).
    #[cfg(debug_assertions)]
    pub fn load_count(&self, at: usize) -> u64 {
        self.loads[at].load(Ordering::Relaxed)
    }

    /// Total waiter-side loads across all slots (debug builds only).
    #[cfg(debug_assertions)]
    pub fn total_loads(&self) -> u64 {
        self.loads.iter().map(|c| c.load(Ordering::Relaxed)).sum()
    }
}

impl Default for WaitingArray {
    fn default() -> Self {
        Self::new(DEFAULT_LEN)
    }
}
