//! Interior mutability for data guarded by an external lock.

use std::cell::UnsafeCell;

/// A `Sync` wrapper around [`UnsafeCell`] for state that worker threads
/// mutate only while holding one of the benchmark locks. The locks in
/// this workspace are unscoped (no guard object), so the borrow cannot be
/// tied to the lock by type — callers take on the obligation instead.
pub struct SyncCell<T>(UnsafeCell<T>);

unsafe impl<T: Send> Sync for SyncCell<T> {}

impl<T> SyncCell<T> {
    pub fn new(value: T) -> Self {
        SyncCell(UnsafeCell::new(value))
    }

    /// # Safety
    /// The caller must hold the lock that guards this cell (or otherwise
    /// be the only thread with access), for the whole lifetime of the
    /// returned reference.
    #[allow(clippy::mut_from_ref)]
    pub unsafe fn get_mut(&self) -> &mut T {
        &mut *self.0.get()
    }

    pub fn into_inner(self) -> T {
        self.0.into_inner()
    }
}
