//! Behavioral checks for the waiting-array lock: who watches the array,
//! who polls the grant, and how a release moves one waiter from the
//! first group to the second.

mod common;

use common::{exclusion_suite, serial, within_secs};
use locks::{TwaLock, WaitingArray};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Duration;

fn private(len: usize, threshold: u32) -> TwaLock {
    TwaLock::with_array(Arc::new(WaitingArray::new(len)), threshold)
}

fn poll_until(what: &str, cond: impl Fn() -> bool) {
    let deadline = std::time::Instant::now() + Duration::from_secs(30);
    while !cond() {
        assert!(
            std::time::Instant::now() < deadline,
            "timed out waiting: {what}"
        );
        std::thread::yield_now();
    }
}

/// Waits for a debug counter to go quiet: two consecutive 10 ms windows
/// with no growth.
#[cfg(debug_assertions)]
fn poll_until_stable(count: impl Fn() -> u64) -> u64 {
    loop {
        let before = count();
        std::thread::sleep(Duration::from_millis(10));
        if count() == before {
            std::thread::sleep(Duration::from_millis(10));
            if count() == before {
                return before;
            }
        }
    }
}

/// Three threads contend; the third one's admission distance (2) exceeds
/// the threshold (1), so it parks on its hashed slot while the second
/// polls the grant. The holder's release bumps exactly that slot, which
/// demotes the third thread to grant polling before it can acquire.
#[cfg(debug_assertions)]
#[test]
fn third_arrival_parks_on_the_array_until_released_within_threshold() {
    let _g = serial();
    within_secs(60, "two-waiter handover trace", || {
        let lock = private(256, 1);
        let id = &lock as *const TwaLock as usize;
        let at1 = lock.array().index(id, 1);
        let at2 = lock.array().index(id, 2);
        assert_ne!(at1, at2);

        let a_in = AtomicBool::new(false);
        let a_go = AtomicBool::new(false);
        let b_in = AtomicBool::new(false);

        lock.acquire(); // ticket 0, held for the whole staging phase
        std::thread::scope(|s| {
            s.spawn(|| {
                assert_eq!(lock.acquire(), 1); // dx 1: grant polling only
                a_in.store(true, Ordering::Release);
                while !a_go.load(Ordering::Acquire) {
                    std::thread::yield_now();
                }
                lock.release();
            });
            poll_until("ticket 1 taken", || lock.ticket_value() == 2);
            s.spawn(|| {
                assert_eq!(lock.acquire(), 2); // dx 2: long-term at first
                b_in.store(true, Ordering::Release);
                lock.release();
            });
            poll_until("ticket 2 taken", || lock.ticket_value() == 3);

            // The far waiter is parked on its own slot; the near waiter
            // has touched no slot at all.
            poll_until("far waiter watching its slot", || {
                lock.array().load_count(at2) > 0
            });
            assert_eq!(lock.array().load_count(at1), 0);
            assert_eq!(lock.array().total_loads(), lock.array().load_count(at2));
            assert_eq!(lock.array().peek(at2), 0, "slot bumped before any release");
            assert!(!a_in.load(Ordering::Acquire));
            assert!(!b_in.load(Ordering::Acquire));

            // Release: grant moves to 1 and slot hash(1 + threshold) — the
            // far waiter's — is bumped, bringing it within the threshold.
            lock.release();
            poll_until("near waiter acquired", || a_in.load(Ordering::Acquire));
            assert_eq!(lock.array().peek(at2), 1);
            // Demoted: the far waiter stops reading the array even though
            // it still cannot acquire (the near waiter holds the lock).
            poll_until_stable(|| lock.array().load_count(at2));
            assert!(!b_in.load(Ordering::Acquire));

            a_go.store(true, Ordering::Release);
            poll_until("far waiter acquired", || b_in.load(Ordering::Acquire));
        });
        assert_eq!(lock.grant_value(), 3);
        assert_eq!(lock.waiters(), 0);
    });
}

/// Every long-term waiter watches its own hashed slot, not a common one.
#[cfg(debug_assertions)]
#[test]
fn far_waiters_watch_distinct_slots() {
    let _g = serial();
    within_secs(60, "distinct-slot staging", || {
        let lock = private(256, 1);
        let id = &lock as *const TwaLock as usize;
        lock.acquire();
        std::thread::scope(|s| {
            for t in 1..=4u32 {
                s.spawn(|| {
                    lock.acquire();
                    lock.release();
                });
                poll_until("ticket taken", || lock.ticket_value() == t + 1);
            }
            // Tickets 2..=4 are beyond the threshold; each must show up
            // on its own slot.
            let slots: Vec<usize> = (2..=4).map(|t| lock.array().index(id, t)).collect();
            for (i, &at) in slots.iter().enumerate() {
                for &other in &slots[i + 1..] {
                    assert_ne!(at, other);
                }
                poll_until("waiter on its slot", || lock.array().load_count(at) > 0);
            }
            assert_eq!(lock.array().load_count(lock.array().index(id, 1)), 0);
            lock.release();
        });
        assert_eq!(lock.grant_value(), 5);
    });
}

/// With a threshold of 3, three waiters all sit within the admission
/// distance and the array is never read.
#[cfg(debug_assertions)]
#[test]
fn waiters_within_threshold_never_touch_the_array() {
    let _g = serial();
    within_secs(60, "short-term-only staging", || {
        let lock = private(256, 3);
        lock.acquire();
        std::thread::scope(|s| {
            for t in 1..=3u32 {
                s.spawn(|| {
                    lock.acquire();
                    lock.release();
                });
                poll_until("ticket taken", || lock.ticket_value() == t + 1);
            }
            std::thread::sleep(Duration::from_millis(30));
            assert_eq!(lock.array().total_loads(), 0);
            lock.release();
        });
        assert_eq!(lock.grant_value(), 4);
        assert_eq!(lock.array().total_loads(), 0);
    });
}

/// Tiny arrays force every waiter onto a handful of slots, so unrelated
/// releases bump the slot a waiter is parked on (spurious wakeups) and
/// the baseline/recheck path runs constantly. Wakeups must never be lost:
/// the run finishes with the exact count well inside the watchdog.
#[test]
fn collisions_cause_no_lost_wakeups() {
    let _g = serial();
    for len in [1, 2, 4] {
        for threshold in [1, 2] {
            if len > 1 && threshold as usize >= len {
                continue;
            }
            within_secs(120, "collision-heavy exclusion run", move || {
                let lock = private(len, threshold);
                exclusion_suite(&lock, 4, 2_500);
            });
        }
    }
}
