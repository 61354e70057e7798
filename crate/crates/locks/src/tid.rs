//! Per-thread identity tokens.

use core::sync::atomic::{AtomicU64, Ordering};

static NEXT_TOKEN: AtomicU64 = AtomicU64::new(1);

thread_local! {
    static TOKEN: u64 = NEXT_TOKEN.fetch_add(1, Ordering::Relaxed);
}

/// Process-unique nonzero 64-bit identity of the calling thread, assigned
/// on first use. Nonzero matters: [`crate::TwaIdLock`] publishes tokens
/// into waiting-array slots where zero means "no waiter".
pub fn thread_token() -> u64 {
    TOKEN.with(|t| *t)
}

/// Debug-build record of which thread holds a lock. All accesses are
/// serialized by the lock the holder is embedded in, so relaxed ordering
/// suffices.
#[cfg(debug_assertions)]
pub(crate) struct Holder(AtomicU64);

#[cfg(debug_assertions)]
impl Holder {
    pub const fn new() -> Self {
        Holder(AtomicU64::new(0))
    }

    pub fn acquired(&self) {
        let prev = self.0.swap(thread_token(), Ordering::Relaxed);
        debug_assert_eq!(prev, 0, "lock acquired while already held");
    }

    pub fn released(&self) {
        let prev = self.0.swap(0, Ordering::Relaxed);
        debug_assert_eq!(
            prev,
            thread_token(),
            "lock released by a thread that does not hold it"
        );
    }
}
