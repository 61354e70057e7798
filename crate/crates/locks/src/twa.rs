//! Ticket lock augmented with a waiting array.
//!
//! The fast path is exactly the ticket lock: take a ticket, and if the
//! grant already matches, the lock is held after one atomic RMW and no
//! array traffic. A waiter computes its distance `dx = ticket - grant`;
//! while `dx` exceeds the long-term threshold it watches a hashed slot
//! of the [`WaitingArray`] instead of the grant field, so the herd of
//! distant waiters stops sharing the grant cache line. Once within the
//! threshold it reverts to ordinary grant polling, which preserves exact
//! FIFO admission.
//!
//! Release increments the grant first — ownership hands over with the
//! same latency as a plain ticket lock — and only then bumps the array
//! slot of the ticket that has just come within the threshold.

use core::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;

use crate::waiting_array::WaitingArray;
use crate::RawLock;

/// Default admission distance at which a waiter moves from the waiting
/// array to polling the grant field directly.
pub const DEFAULT_THRESHOLD: u32 = 1;

pub struct TwaLock {
    ticket: AtomicU32,
    grant: AtomicU32,
    threshold: u32,
    array: Arc<WaitingArray>,
    /// Count of ticket RMWs issued by acquires; diagnostics for the
    /// fast-path tests.
    #[cfg(debug_assertions)]
    ticket_rmws: AtomicU32,
    #[cfg(debug_assertions)]
    holder: crate::tid::Holder,
}

impl TwaLock {
    /// Lock on the process-global waiting array with the default
    /// threshold of 1.
    pub fn new() -> Self {
        Self::with_array(WaitingArray::global(), DEFAULT_THRESHOLD)
    }

    pub fn with_threshold(threshold: u32) -> Self {
        Self::with_array(WaitingArray::global(), threshold)
    }

    /// Lock bound to a caller-supplied (possibly private) array.
    ///
    /// `threshold` must be at least 1 and smaller than the array length.
    /// A single-slot array is exempt from the length bound: every ticket
    /// hashes to slot 0 there, so the slot-separation the bound protects
    /// is vacuous and the lock degrades to benign always-colliding mode.
    pub fn with_array(array: Arc<WaitingArray>, threshold: u32) -> Self {
        assert!(threshold >= 1, "long-term threshold must be at least 1");
        assert!(
            array.len() == 1 || (threshold as usize) < array.len(),
            "long-term threshold {threshold} must be below array length {}",
            array.len()
        );
        TwaLock {
            ticket: AtomicU32::new(0),
            grant: AtomicU32::new(0),
            threshold,
            array,
            #[cfg(debug_assertions)]
            ticket_rmws: AtomicU32::new(0),
            #[cfg(debug_assertions)]
            holder: crate::tid::Holder::new(),
        }
    }

    /// The value hashed together with tickets to pick array slots: this
    /// instance's address. A lock must therefore not be moved while any
    /// thread is acquiring or holding it — which safe code cannot do
    /// anyway, since those threads hold `&self`.
    fn identity(&self) -> usize {
        self as *const TwaLock as usize
    }

    pub fn acquire(&self) -> u32 {
        let tx = self.ticket.fetch_add(1, Ordering::SeqCst);
        #[cfg(debug_assertions)]
        self.ticket_rmws.fetch_add(1, Ordering::Relaxed);
        let mut g = self.grant.load(Ordering::Acquire);
        let mut dx = tx.wrapping_sub(g);
        if dx == 0 {
            #[cfg(debug_assertions)]
            self.holder.acquired();
            return tx;
        }
        while dx > self.threshold {
            // Long-term: baseline the slot, then recheck the grant. If a
            // release slipped in between our ticket fetch and the slot
            // read, its bump is already folded into `seen` and waiting
            // for the *next* change could strand us; rereading the grant
            // catches that case. The recheck is ordered: observing a
            // bumped slot value (Acquire) means observing the grant store
            // that preceded the bump in the releaser.
            let at = self.array.index(self.identity(), tx);
            let seen = self.array.load(at);
            let g2 = self.grant.load(Ordering::Acquire);
            if g2 != g {
                g = g2;
                dx = tx.wrapping_sub(g);
                continue;
            }
            while self.array.load(at) == seen {
                core::hint::spin_loop();
            }
            g = self.grant.load(Ordering::Acquire);
            dx = tx.wrapping_sub(g);
        }
        // Short-term gate: a thread only ever leaves the long-term loop
        // within the admission threshold.
        debug_assert!(dx <= self.threshold);
        while self.grant.load(Ordering::Acquire) != tx {
            core::hint::spin_loop();
        }
        #[cfg(debug_assertions)]
        self.holder.acquired();
        tx
    }

    pub fn release(&self) {
        #[cfg(debug_assertions)]
        self.holder.released();
        // Handover first: the grant store must be visible no later than
        // the slot bump that wakes the long-term waiter it admits.
        let k = self.grant.load(Ordering::Relaxed).wrapping_add(1);
        self.grant.store(k, Ordering::Release);
        self.array
            .notify_ticket(self.identity(), k.wrapping_add(self.threshold));
    }

    pub fn is_locked(&self) -> bool {
        self.ticket.load(Ordering::Relaxed) != self.grant.load(Ordering::Relaxed)
    }

    pub fn waiters(&self) -> u32 {
        let t = self.ticket.load(Ordering::Relaxed);
        let g = self.grant.load(Ordering::Relaxed);
        t.wrapping_sub(g).saturating_sub(1)
    }

    pub fn ticket_value(&self) -> u32 {
        self.ticket.load(Ordering::Acquire)
    }

    pub fn grant_value(&self) -> u32 {
        self.grant.load(Ordering::Acquire)
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    pub fn array(&self) -> &WaitingArray {
        &self.array
    }

    /// Total ticket RMWs issued by acquires so far (debug builds only).
    #[cfg(debug_assertions)]
    pub fn ticket_rmw_count(&self) -> u32 {
        self.ticket_rmws.load(Ordering::Relaxed)
    }
}

impl Default for TwaLock {
    fn default() -> Self {
        Self::new()
    }
}

impl RawLock for TwaLock {
    fn acquire(&self) {
        TwaLock::acquire(self);
    }

    fn release(&self) {
        TwaLock::release(self);
    }
}
