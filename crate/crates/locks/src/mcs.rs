//! MCS queue lock with an internal per-thread node pool.
//!
//! Arrivals append a queue node by swapping themselves into the tail,
//! then spin on a flag in their own node, so each waiter polls a private
//! cache sector and a release invalidates exactly one waiter's line.
//! Admission follows queue (tail-swap) order.
//!
//! The textbook interface threads a node through acquire and release;
//! here the interface is unscoped (`acquire`/`release` on `&self` only),
//! so nodes come from a per-thread free pool and the lock records the
//! owner's node internally for release to find.

use core::cell::RefCell;
use core::ptr;
use core::sync::atomic::{AtomicBool, AtomicPtr, Ordering};

#[cfg(debug_assertions)]
use core::sync::atomic::{AtomicI64, AtomicU64};

use crate::RawLock;

/// Queue node, padded to its own 128-byte sector so spinning waiters do
/// not false-share.
#[repr(align(128))]
struct Node {
    next: AtomicPtr<Node>,
    /// False while the owner ahead of us still holds the lock.
    ready: AtomicBool,
    /// Enqueue sequence number (debug builds): predecessor's rank + 1,
    /// zero while unassigned. See `acquire_impl` for how it is derived
    /// without widening the tail swap.
    #[cfg(debug_assertions)]
    rank: AtomicU64,
}

const _: () = assert!(core::mem::size_of::<Node>() == 128);

impl Node {
    fn new() -> Self {
        Node {
            next: AtomicPtr::new(ptr::null_mut()),
            ready: AtomicBool::new(false),
            #[cfg(debug_assertions)]
            rank: AtomicU64::new(0),
        }
    }
}

thread_local! {
    // Box per node, not Vec<Node>: a queued node is reached through raw
    // pointers held by other threads, so its address must survive pool
    // growth.
    #[allow(clippy::vec_box)]
    static POOL: RefCell<Vec<Box<Node>>> = const { RefCell::new(Vec::new()) };
}

/// Nodes currently out of every pool (debug builds). Zero whenever no
/// thread is inside acquire/release and no lock is held.
#[cfg(debug_assertions)]
static NODES_IN_FLIGHT: AtomicI64 = AtomicI64::new(0);

#[cfg(debug_assertions)]
pub fn nodes_in_flight() -> i64 {
    NODES_IN_FLIGHT.load(Ordering::Relaxed)
}

fn take_node() -> *mut Node {
    let boxed = POOL
        .with(|p| p.borrow_mut().pop())
        .unwrap_or_else(|| Box::new(Node::new()));
    #[cfg(debug_assertions)]
    NODES_IN_FLIGHT.fetch_add(1, Ordering::Relaxed);
    Box::into_raw(boxed)
}

/// SAFETY: `node` must have come from `take_node` and no other thread may
/// reference it anymore.
unsafe fn recycle(node: *mut Node) {
    #[cfg(debug_assertions)]
    NODES_IN_FLIGHT.fetch_sub(1, Ordering::Relaxed);
    let boxed = unsafe { Box::from_raw(node) };
    POOL.with(|p| p.borrow_mut().push(boxed));
}

pub struct McsLock {
    tail: AtomicPtr<Node>,
    /// Node of the current holder; only ever touched by the holder, so
    /// accesses are serialized by the lock itself.
    owner: AtomicPtr<Node>,
    /// Rank of the most recent release (debug builds); read by acquires
    /// that find the queue empty, published before the emptying CAS.
    #[cfg(debug_assertions)]
    last_rank: AtomicU64,
    #[cfg(debug_assertions)]
    holder: crate::tid::Holder,
}

impl McsLock {
    pub const fn new() -> Self {
        McsLock {
            tail: AtomicPtr::new(ptr::null_mut()),
            owner: AtomicPtr::new(ptr::null_mut()),
            #[cfg(debug_assertions)]
            last_rank: AtomicU64::new(0),
            #[cfg(debug_assertions)]
            holder: crate::tid::Holder::new(),
        }
    }

    pub fn acquire(&self) {
        self.acquire_impl();
    }

    /// Acquire returning the enqueue sequence number (1, 2, 3, … in tail
    /// order); debug builds only. FIFO means acquisition order equals
    /// rank order, which tests check directly.
    #[cfg(debug_assertions)]
    pub fn acquire_ranked(&self) -> u64 {
        self.acquire_impl()
    }

    fn acquire_impl(&self) -> u64 {
        let me = take_node();
        // Reinitialize before publication; once the swap lands, the
        // successor may write `next` at any moment.
        unsafe {
            (*me).next.store(ptr::null_mut(), Ordering::Relaxed);
            (*me).ready.store(false, Ordering::Relaxed);
            #[cfg(debug_assertions)]
            (*me).rank.store(0, Ordering::Relaxed);
        }
        let prev = self.tail.swap(me, Ordering::SeqCst);

        let rank: u64;
        #[cfg(not(debug_assertions))]
        {
            rank = 0;
        }
        #[cfg(debug_assertions)]
        {
            rank = if prev.is_null() {
                // The release that emptied the queue published its rank
                // before the CAS our swap just read from.
                self.last_rank.load(Ordering::Relaxed) + 1
            } else {
                // Until we store the link below, the predecessor cannot
                // finish releasing, so its node is pinned; its rank store
                // trails its own swap by a few instructions at most.
                loop {
                    let r = unsafe { (*prev).rank.load(Ordering::Relaxed) };
                    if r != 0 {
                        break r + 1;
                    }
                    core::hint::spin_loop();
                }
            };
            unsafe { (*me).rank.store(rank, Ordering::Relaxed) };
        }

        if !prev.is_null() {
            // SAFETY: predecessor is pinned until this store (see above).
            unsafe { (*prev).next.store(me, Ordering::Release) };
            // Local spinning: the only thing read while queued is our own
            // node's flag.
            while unsafe { !(*me).ready.load(Ordering::Acquire) } {
                core::hint::spin_loop();
            }
        }
        self.owner.store(me, Ordering::Relaxed);
        #[cfg(debug_assertions)]
        self.holder.acquired();
        rank
    }

    pub fn release(&self) {
        #[cfg(debug_assertions)]
        self.holder.released();
        let me = self.owner.load(Ordering::Relaxed);
        debug_assert!(!me.is_null(), "release of an unheld lock");
        #[cfg(debug_assertions)]
        self.last_rank.store(
            unsafe { (*me).rank.load(Ordering::Relaxed) },
            Ordering::Relaxed,
        );
        unsafe {
            let mut next = (*me).next.load(Ordering::Acquire);
            if next.is_null() {
                if self
                    .tail
                    .compare_exchange(me, ptr::null_mut(), Ordering::SeqCst, Ordering::SeqCst)
                    .is_ok()
                {
                    // Queue empty; nobody else can reference our node.
                    recycle(me);
                    return;
                }
                // A successor swapped into the tail but has not linked
                // itself behind us yet; its store is imminent.
                loop {
                    next = (*me).next.load(Ordering::Acquire);
                    if !next.is_null() {
                        break;
                    }
                    core::hint::spin_loop();
                }
            }
            (*next).ready.store(true, Ordering::Release);
            // The successor wrote our `next` before we read it and never
            // touches our node again; safe to recycle.
            recycle(me);
        }
    }

    pub fn is_locked(&self) -> bool {
        !self.tail.load(Ordering::Relaxed).is_null()
    }

    /// Raw tail pointer as an integer; diagnostic aid for tests that
    /// stage arrivals one at a time (the value changes when a waiter
    /// enqueues).
    pub fn tail_addr(&self) -> usize {
        self.tail.load(Ordering::Relaxed) as usize
    }
}

impl Default for McsLock {
    fn default() -> Self {
        Self::new()
    }
}

impl RawLock for McsLock {
    fn acquire(&self) {
        McsLock::acquire(self);
    }

    fn release(&self) {
        McsLock::release(self);
    }
}
