//! Cache-sector padding.
//!
//! Targets with adjacent-line prefetch effectively move data in 128-byte
//! sectors (two 64-byte lines), so that is the false-sharing granule used
//! throughout this crate and its benchmarks.

/// Size in bytes of the unit of false sharing we defend against.
pub const SECTOR_BYTES: usize = 128;

/// Wraps a value so it starts on a 128-byte boundary and shares its
/// sector with nothing else (the type's size is rounded up to the
/// alignment). Deliberately fixed at 128 on every target: the point is a
/// reproducible layout, not a per-arch guess.
#[repr(C, align(128))]
#[derive(Debug, Default)]
pub struct CacheSector<T>(pub T);

impl<T> CacheSector<T> {
    pub const fn new(value: T) -> Self {
        CacheSector(value)
    }

    pub fn into_inner(self) -> T {
        self.0
    }
}

impl<T> core::ops::Deref for CacheSector<T> {
    type Target = T;

    fn deref(&self) -> &T {
        &self.0
    }
}

impl<T> core::ops::DerefMut for CacheSector<T> {
    fn deref_mut(&mut self) -> &mut T {
        &mut self.0
    }
}

const _: () = {
    assert!(core::mem::size_of::<CacheSector<u8>>() == SECTOR_BYTES);
    assert!(core::mem::align_of::<CacheSector<u8>>() == SECTOR_BYTES);
};
