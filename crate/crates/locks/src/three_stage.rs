//! Three-stage composite lock.
//!
//! Waiting is split across three sub-locks so that at any moment at most
//! one thread spins on the innermost lock, at most one on the relay, and
//! everyone else queues FIFO on the admission ticket lock:
//!
//! acquire = admission.acquire; relay.acquire; admission.release;
//!           inner.acquire; relay.release
//! release = inner.release
//!
//! Holding the relay across the admission release and the inner acquire
//! is what serializes entry to the inner lock, so inner acquisition
//! order equals admission (ticket) order and the composite inherits
//! FIFO — unless the optional trylock fast path is enabled, which trades
//! FIFO for a cheap uncontended grab of the inner lock.

use crate::tas::TasLock;
use crate::ticket::TicketLock;
use crate::RawLock;

pub struct ThreeStageLock {
    admission: TicketLock,
    relay: TasLock,
    inner: TasLock,
    fast_path: bool,
}

impl ThreeStageLock {
    /// Default configuration: fast path disabled, FIFO holds.
    pub fn new() -> Self {
        ThreeStageLock {
            admission: TicketLock::new(),
            relay: TasLock::new(),
            inner: TasLock::new(),
            fast_path: false,
        }
    }

    /// Enables the trylock-on-inner fast path. Mutual exclusion still
    /// holds (the inner lock is the one that protects the resource), but
    /// admission order is no longer FIFO.
    pub fn with_fast_path() -> Self {
        ThreeStageLock {
            fast_path: true,
            ..Self::new()
        }
    }

    pub fn acquire(&self) {
        if self.fast_path && self.inner.try_acquire() {
            return;
        }
        self.staged_acquire();
    }

    /// Acquire returning the admission ticket, the acquisition-order
    /// witness for FIFO tests. Only meaningful without the fast path.
    pub fn acquire_ordered(&self) -> u32 {
        assert!(
            !self.fast_path,
            "admission order is not a FIFO witness when the fast path is on"
        );
        self.staged_acquire()
    }

    fn staged_acquire(&self) -> u32 {
        let tx = self.admission.acquire();
        self.relay.acquire();
        self.admission.release();
        self.inner.acquire();
        self.relay.release();
        tx
    }

    pub fn release(&self) {
        self.inner.release();
    }

    pub fn is_locked(&self) -> bool {
        self.inner.is_locked()
    }

    /// Diagnostics for waiting-profile tests: with N threads blocked on
    /// the composite, N−2 queue here, one holds the relay while spinning
    /// on the inner lock, and one holds admission while spinning on the
    /// relay.
    pub fn admission_waiters(&self) -> u32 {
        self.admission.waiters()
    }

    pub fn relay_locked(&self) -> bool {
        self.relay.is_locked()
    }
}

impl Default for ThreeStageLock {
    fn default() -> Self {
        Self::new()
    }
}

impl RawLock for ThreeStageLock {
    fn acquire(&self) {
        ThreeStageLock::acquire(self);
    }

    fn release(&self) {
        ThreeStageLock::release(self);
    }
}
