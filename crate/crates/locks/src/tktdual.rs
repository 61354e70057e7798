//! Ticket lock with two grant fields in separate cache sectors.
//!
//! Waiters near the head of the queue (within the threshold) poll
//! `grant_short`; everyone else polls `grant_long`, which the releaser
//! publishes as an admission horizon of `grant_short + threshold`. A
//! release therefore invalidates the long-grant line for the distant
//! herd only when it moves, and at most `threshold` threads ever poll
//! the short grant — the field that gates the actual handover.
//! `grant_short` is the ground truth; `grant_long` is advisory and may
//! run past the dispenser when there are no waiters, which is harmless
//! because admission always funnels back through `grant_short`.

use core::sync::atomic::{AtomicU32, Ordering};

use crate::pad::CacheSector;
use crate::RawLock;

pub struct TktDualLock {
    ticket: AtomicU32,
    threshold: u32,
    #[cfg(debug_assertions)]
    holder: crate::tid::Holder,
    /// Each grant is the sole occupant of its own 128-byte sector so the
    /// two waiting populations do not invalidate each other.
    grant_short: CacheSector<AtomicU32>,
    grant_long: CacheSector<AtomicU32>,
}

impl TktDualLock {
    pub fn new() -> Self {
        Self::with_threshold(1)
    }

    pub fn with_threshold(threshold: u32) -> Self {
        assert!(threshold >= 1, "threshold must be at least 1");
        TktDualLock {
            ticket: AtomicU32::new(0),
            threshold,
            #[cfg(debug_assertions)]
            holder: crate::tid::Holder::new(),
            grant_short: CacheSector::new(AtomicU32::new(0)),
            grant_long: CacheSector::new(AtomicU32::new(threshold)),
        }
    }

    pub fn acquire(&self) -> u32 {
        let tx = self.ticket.fetch_add(1, Ordering::SeqCst);
        let dx = tx.wrapping_sub(self.grant_short.load(Ordering::Acquire));
        if dx > self.threshold {
            // Long tier: wait for the admission horizon to reach us.
            // Signed distance handles the (never exercised) wrap.
            while (tx.wrapping_sub(self.grant_long.load(Ordering::Acquire)) as i32) > 0 {
                core::hint::spin_loop();
            }
        }
        // At most `threshold` distinct tickets can be past the horizon
        // and short of the grant, so at most that many threads spin here.
        debug_assert!(tx.wrapping_sub(self.grant_short.load(Ordering::Acquire)) <= self.threshold);
        while self.grant_short.load(Ordering::Acquire) != tx {
            core::hint::spin_loop();
        }
        #[cfg(debug_assertions)]
        self.holder.acquired();
        tx
    }

    pub fn release(&self) {
        #[cfg(debug_assertions)]
        self.holder.released();
        // Handover first on the ground-truth field, then publish the new
        // horizon. Both are plain stores: only the holder writes them.
        let k = self.grant_short.load(Ordering::Relaxed).wrapping_add(1);
        self.grant_short.store(k, Ordering::Release);
        self.grant_long
            .store(k.wrapping_add(self.threshold), Ordering::Release);
    }

    pub fn is_locked(&self) -> bool {
        self.ticket.load(Ordering::Relaxed) != self.grant_short.load(Ordering::Relaxed)
    }

    pub fn ticket_value(&self) -> u32 {
        self.ticket.load(Ordering::Acquire)
    }

    pub fn grant_short_value(&self) -> u32 {
        self.grant_short.load(Ordering::Acquire)
    }

    pub fn grant_long_value(&self) -> u32 {
        self.grant_long.load(Ordering::Acquire)
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }
}

impl Default for TktDualLock {
    fn default() -> Self {
        Self::new()
    }
}

impl RawLock for TktDualLock {
    fn acquire(&self) {
        TktDualLock::acquire(self);
    }

    fn release(&self) {
        TktDualLock::release(self);
    }
}
