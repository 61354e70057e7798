//! Classic ticket lock.
//!
//! Arrivals atomically take a ticket from the dispenser; the grant field
//! names the ticket that currently owns the lock, so a thread waits until
//! grant equals its ticket. Admission is strictly FIFO in ticket order,
//! and the doorway (one fetch-and-increment) is wait-free. The cost under
//! contention is the flip side: every release invalidates the grant line
//! that all waiters are polling.

use core::sync::atomic::{AtomicU16, AtomicU32, Ordering};

use crate::RawLock;

/// Ticket lock over two 32-bit fields. Ticket values wrap; distance
/// arithmetic is wrapping so this stays correct in principle, though no
/// realistic run exercises the wrap.
pub struct TicketLock {
    ticket: AtomicU32,
    grant: AtomicU32,
    #[cfg(debug_assertions)]
    holder: crate::tid::Holder,
}

impl TicketLock {
    pub const fn new() -> Self {
        TicketLock {
            ticket: AtomicU32::new(0),
            grant: AtomicU32::new(0),
            #[cfg(debug_assertions)]
            holder: crate::tid::Holder::new(),
        }
    }

    /// Takes a ticket and waits for it to be granted. Returns the ticket,
    /// which doubles as an acquisition-order witness: the k-th acquisition
    /// of this lock returns k.
    pub fn acquire(&self) -> u32 {
        let tx = self.ticket.fetch_add(1, Ordering::SeqCst);
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
        // Only the holder writes grant, so a plain load/increment/store
        // pair is enough; no atomic RMW in the release path.
        let g = self.grant.load(Ordering::Relaxed);
        self.grant.store(g.wrapping_add(1), Ordering::Release);
    }

    pub fn is_locked(&self) -> bool {
        self.ticket.load(Ordering::Relaxed) != self.grant.load(Ordering::Relaxed)
    }

    /// Number of threads waiting (holder excluded). A sampled snapshot:
    /// exact only while arrivals are quiescent.
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
}

impl Default for TicketLock {
    fn default() -> Self {
        Self::new()
    }
}

impl RawLock for TicketLock {
    fn acquire(&self) {
        TicketLock::acquire(self);
    }

    fn release(&self) {
        TicketLock::release(self);
    }
}

#[cfg(not(debug_assertions))]
const _: () = assert!(core::mem::size_of::<TicketLock>() == 8);

/// Ticket lock packed into a single 32-bit word: a 16-bit dispenser next
/// to a 16-bit grant. The two halves are separate `AtomicU16`s so the
/// dispenser's fetch-and-increment wraps within its own field instead of
/// carrying into the grant. The price of the packing is a hard cap of
/// 65535 concurrently outstanding acquisitions; debug builds count them
/// and assert the cap, release builds trust the caller.
#[repr(C, align(4))]
pub struct CompactTicketLock {
    ticket: AtomicU16,
    grant: AtomicU16,
    #[cfg(debug_assertions)]
    outstanding: AtomicU32,
    #[cfg(debug_assertions)]
    holder: crate::tid::Holder,
}

impl CompactTicketLock {
    pub const fn new() -> Self {
        CompactTicketLock {
            ticket: AtomicU16::new(0),
            grant: AtomicU16::new(0),
            #[cfg(debug_assertions)]
            outstanding: AtomicU32::new(0),
            #[cfg(debug_assertions)]
            holder: crate::tid::Holder::new(),
        }
    }

    pub fn acquire(&self) -> u16 {
        let tx = self.ticket.fetch_add(1, Ordering::SeqCst);
        #[cfg(debug_assertions)]
        {
            let n = self.outstanding.fetch_add(1, Ordering::Relaxed) + 1;
            debug_assert!(n <= u16::MAX as u32, "compact ticket lock oversubscribed");
        }
        while self.grant.load(Ordering::Acquire) != tx {
            core::hint::spin_loop();
        }
        #[cfg(debug_assertions)]
        self.holder.acquired();
        tx
    }

    pub fn release(&self) {
        #[cfg(debug_assertions)]
        {
            self.holder.released();
            self.outstanding.fetch_sub(1, Ordering::Relaxed);
        }
        let g = self.grant.load(Ordering::Relaxed);
        self.grant.store(g.wrapping_add(1), Ordering::Release);
    }

    pub fn is_locked(&self) -> bool {
        self.ticket.load(Ordering::Relaxed) != self.grant.load(Ordering::Relaxed)
    }
}

impl Default for CompactTicketLock {
    fn default() -> Self {
        Self::new()
    }
}

impl RawLock for CompactTicketLock {
    fn acquire(&self) {
        CompactTicketLock::acquire(self);
    }

    fn release(&self) {
        CompactTicketLock::release(self);
    }
}

#[cfg(not(debug_assertions))]
const _: () = assert!(core::mem::size_of::<CompactTicketLock>() == 4);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uncontended_acquire_returns_consecutive_tickets() {
        let l = TicketLock::new();
        assert!(!l.is_locked());
        assert_eq!(l.acquire(), 0);
        assert!(l.is_locked());
        assert_eq!((l.ticket_value(), l.grant_value()), (1, 0));
        l.release();
        assert_eq!((l.ticket_value(), l.grant_value()), (1, 1));
        assert!(!l.is_locked());
        assert_eq!(l.acquire(), 1);
        l.release();
    }

    #[test]
    fn waiters_counts_queue_behind_holder() {
        let l = std::sync::Arc::new(TicketLock::new());
        l.acquire();
        let ws: Vec<_> = (0..2)
            .map(|_| {
                let l = l.clone();
                std::thread::spawn(move || {
                    l.acquire();
                    l.release();
                })
            })
            .collect();
        while l.ticket_value() != 3 {
            std::thread::yield_now();
        }
        assert_eq!(l.waiters(), 2);
        l.release();
        for w in ws {
            w.join().unwrap();
        }
        assert_eq!(l.waiters(), 0);
        assert_eq!(l.grant_value(), 3);
    }

    #[test]
    fn compact_lock_matches_full_lock_single_threaded() {
        let l = CompactTicketLock::new();
        for k in 0..5u16 {
            assert_eq!(l.acquire(), k);
            assert!(l.is_locked());
            l.release();
        }
        assert!(!l.is_locked());
    }

    #[test]
    fn compact_grant_wraps_within_its_own_field() {
        // Drive the 16-bit fields close to wrap and across it; the
        // dispenser increment must never disturb the grant half.
        let l = CompactTicketLock::new();
        for _ in 0..u16::MAX as u32 + 10 {
            l.acquire();
            l.release();
        }
        assert!(!l.is_locked());
    }
}
