//! Waiting-array lock where slots hold thread identities.
//!
//! A variation on [`crate::TwaLock`]: instead of watching a counter for
//! any change, a long-term waiter writes its own identity token into the
//! hashed slot and spins while the slot still equals that token. The
//! releaser wakes it with a plain store of 0 — no atomic RMW anywhere in
//! the release path. Collisions stay benign: a second waiter overwriting
//! the slot just breaks the first waiter's spin early, which sends it
//! back through the grant recheck.
//!
//! Ordering is stricter here than in the counter variant. The waiter does
//! {store id; load grant} while the releaser does {store grant; store 0};
//! with plain release/acquire the waiter's recheck may read the old grant
//! while its id store lands after the releaser's clear (store-buffer
//! interleaving), and both sides then wait forever. All four of those
//! accesses are SeqCst so that interleaving is unsatisfiable. The counter
//! variant does not need this: its recheck baseline comes from a load,
//! and reading a bumped counter already synchronizes with the release.

use core::sync::atomic::{AtomicU32, AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::tid::thread_token;
use crate::waiting_array::{slot_index, SlotSector, DEFAULT_LEN};
use crate::RawLock;

/// Array of identity slots: 0 means "no waiter", anything else is some
/// thread's token (see [`thread_token`]).
pub struct IdentityArray {
    sectors: Box<[SlotSector]>,
    mask: usize,
    len: usize,
}

impl IdentityArray {
    pub fn new(len: usize) -> Self {
        assert!(
            len.is_power_of_two(),
            "identity array length must be a power of two, got {len}"
        );
        let per = 128 / core::mem::size_of::<AtomicU64>();
        let sectors: Box<[SlotSector]> = (0..len.div_ceil(per))
            .map(|_| SlotSector::zeroed())
            .collect();
        IdentityArray {
            sectors,
            mask: len - 1,
            len,
        }
    }

    /// Process-wide shared instance, separate from the counter array used
    /// by [`crate::TwaLock`] (the two slot disciplines must not mix).
    pub fn global() -> Arc<IdentityArray> {
        static GLOBAL: OnceLock<Arc<IdentityArray>> = OnceLock::new();
        GLOBAL
            .get_or_init(|| Arc::new(IdentityArray::new(DEFAULT_LEN)))
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
        let per = 128 / core::mem::size_of::<AtomicU64>();
        &self.sectors[at / per].0[at % per]
    }

    fn publish(&self, at: usize, id: u64) {
        self.slot(at).store(id, Ordering::SeqCst);
    }

    fn clear(&self, at: usize) {
        self.slot(at).store(0, Ordering::SeqCst);
    }

    fn load(&self, at: usize) -> u64 {
        self.slot(at).load(Ordering::Acquire)
    }

    /// Test/diagnostic read.
    pub fn peek(&self, at: usize) -> u64 {
        self.slot(at).load(Ordering::Acquire)
    }
}

pub struct TwaIdLock {
    ticket: AtomicU32,
    grant: AtomicU32,
    threshold: u32,
    array: Arc<IdentityArray>,
    #[cfg(debug_assertions)]
    holder: crate::tid::Holder,
}

impl TwaIdLock {
    pub fn new() -> Self {
        Self::with_array(IdentityArray::global(), 1)
    }

    /// As with [`crate::TwaLock`], the threshold must stay below the array
    /// length except for the degenerate single-slot array, where the bound
    /// is vacuous.
    pub fn with_array(array: Arc<IdentityArray>, threshold: u32) -> Self {
        assert!(threshold >= 1, "long-term threshold must be at least 1");
        assert!(
            array.len() == 1 || (threshold as usize) < array.len(),
            "long-term threshold {threshold} must be below array length {}",
            array.len()
        );
        TwaIdLock {
            ticket: AtomicU32::new(0),
            grant: AtomicU32::new(0),
            threshold,
            array,
            #[cfg(debug_assertions)]
            holder: crate::tid::Holder::new(),
        }
    }

    fn identity(&self) -> usize {
        self as *const TwaIdLock as usize
    }

    pub fn acquire(&self) -> u32 {
        let tx = self.ticket.fetch_add(1, Ordering::SeqCst);
        let mut g = self.grant.load(Ordering::Acquire);
        let mut dx = tx.wrapping_sub(g);
        if dx == 0 {
            #[cfg(debug_assertions)]
            self.holder.acquired();
            return tx;
        }
        let me = thread_token();
        while dx > self.threshold {
            let at = self.array.index(self.identity(), tx);
            // Publish identity, then recheck the grant; both SeqCst (see
            // module docs). Re-entering the loop republishes after any
            // overwrite by a colliding waiter.
            self.array.publish(at, me);
            let g2 = self.grant.load(Ordering::SeqCst);
            if g2 != g {
                g = g2;
                dx = tx.wrapping_sub(g);
                continue;
            }
            while self.array.load(at) == me {
                core::hint::spin_loop();
            }
            g = self.grant.load(Ordering::Acquire);
            dx = tx.wrapping_sub(g);
        }
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
        // Handover first, then wake the slot of the newly admitted
        // ticket with a plain store — no RMW in this path.
        let k = self.grant.load(Ordering::Relaxed).wrapping_add(1);
        self.grant.store(k, Ordering::SeqCst);
        let at = self
            .array
            .index(self.identity(), k.wrapping_add(self.threshold));
        self.array.clear(at);
    }

    pub fn is_locked(&self) -> bool {
        self.ticket.load(Ordering::Relaxed) != self.grant.load(Ordering::Relaxed)
    }

    pub fn ticket_value(&self) -> u32 {
        self.ticket.load(Ordering::Acquire)
    }

    pub fn grant_value(&self) -> u32 {
        self.grant.load(Ordering::Acquire)
    }

    pub fn array(&self) -> &IdentityArray {
        &self.array
    }
}

impl Default for TwaIdLock {
    fn default() -> Self {
        Self::new()
    }
}

impl RawLock for TwaIdLock {
    fn acquire(&self) {
        TwaIdLock::acquire(self);
    }

    fn release(&self) {
        TwaIdLock::release(self);
    }
}
