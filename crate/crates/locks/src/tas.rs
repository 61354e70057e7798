//! Polite test-and-set lock: one word, no admission order. Included as
//! the simplest baseline and as the building block of
//! [`crate::ThreeStageLock`].

use core::sync::atomic::{AtomicBool, Ordering};

use crate::RawLock;

pub struct TasLock {
    /// false = free, true = held.
    held: AtomicBool,
    #[cfg(debug_assertions)]
    holder: crate::tid::Holder,
}

impl TasLock {
    pub const fn new() -> Self {
        TasLock {
            held: AtomicBool::new(false),
            #[cfg(debug_assertions)]
            holder: crate::tid::Holder::new(),
        }
    }

    /// One atomic swap; true on success. Safe to call whether or not the
    /// lock is held.
    pub fn try_acquire(&self) -> bool {
        let won = !self.held.swap(true, Ordering::Acquire);
        #[cfg(debug_assertions)]
        if won {
            self.holder.acquired();
        }
        won
    }

    pub fn acquire(&self) {
        while !self.try_acquire() {
            core::hint::spin_loop();
        }
    }

    pub fn release(&self) {
        #[cfg(debug_assertions)]
        self.holder.released();
        self.held.store(false, Ordering::Release);
    }

    pub fn is_locked(&self) -> bool {
        self.held.load(Ordering::Relaxed)
    }
}

impl Default for TasLock {
    fn default() -> Self {
        Self::new()
    }
}

impl RawLock for TasLock {
    fn acquire(&self) {
        TasLock::acquire(self);
    }

    fn release(&self) {
        TasLock::release(self);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn try_acquire_swaps_and_reports() {
        let l = TasLock::new();
        assert!(l.try_acquire());
        assert!(l.is_locked());
        assert!(!l.try_acquire());
        l.release();
        assert!(!l.is_locked());
        assert!(l.try_acquire());
        l.release();
    }
}
