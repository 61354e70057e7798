//! 32-bit Mersenne Twister (MT19937).
//!
//! The generator algorithm is part of the workload contract: benchmark
//! inner loops are specified as "advance the PRNG k steps", and runs must
//! be reproducible from a seed alone, bit for bit, across machines. A
//! general-purpose RNG dependency would leave the exact sequence at the
//! mercy of someone else's versioning policy, so the twister is written
//! out here and pinned by tests against outputs of an independent
//! reference implementation.

/// Degree of recurrence: state words per twist block.
const N: usize = 624;
/// Middle word offset.
const M: usize = 397;
/// Twist matrix constant.
const MATRIX_A: u32 = 0x9908_b0df;
const UPPER_MASK: u32 = 0x8000_0000;
const LOWER_MASK: u32 = 0x7fff_ffff;

/// Seed used when callers do not supply one (the classical default).
pub const DEFAULT_SEED: u32 = 5489;

pub struct Mt19937 {
    state: [u32; N],
    /// Next state word to temper; N means "twist before next output".
    idx: usize,
}

impl Mt19937 {
    pub fn new(seed: u32) -> Self {
        let mut state = [0u32; N];
        state[0] = seed;
        for i in 1..N {
            state[i] = 1_812_433_253u32
                .wrapping_mul(state[i - 1] ^ (state[i - 1] >> 30))
                .wrapping_add(i as u32);
        }
        Mt19937 { state, idx: N }
    }

    /// Regenerates the whole state block.
    fn twist(&mut self) {
        for i in 0..N {
            let y = (self.state[i] & UPPER_MASK) | (self.state[(i + 1) % N] & LOWER_MASK);
            let mut next = y >> 1;
            if y & 1 != 0 {
                next ^= MATRIX_A;
            }
            self.state[i] = self.state[(i + M) % N] ^ next;
        }
        self.idx = 0;
    }

    pub fn next_u32(&mut self) -> u32 {
        if self.idx >= N {
            self.twist();
        }
        let mut y = self.state[self.idx];
        self.idx += 1;
        y ^= y >> 11;
        y ^= (y << 7) & 0x9d2c_5680;
        y ^= (y << 15) & 0xefc6_0000;
        y ^ (y >> 18)
    }

    /// Consumes exactly `steps` outputs and returns the last one (0 when
    /// `steps` is 0, with the state untouched).
    pub fn advance(&mut self, steps: u64) -> u32 {
        let mut last = 0;
        for _ in 0..steps {
            last = self.next_u32();
        }
        last
    }

    /// Uniform draw from `[0, bound)` by one-step modulo reduction.
    /// The modulo bias at the bounds used here (≤ a few hundred) is below
    /// 1e-7 and irrelevant to delay-loop workloads; what matters is that
    /// the draw is deterministic and consumes exactly one output.
    pub fn next_below(&mut self, bound: u32) -> u32 {
        debug_assert!(bound > 0);
        self.next_u32() % bound
    }

    /// FNV-1a fold of the generator state, for cheap "same state?"
    /// comparisons in determinism checks.
    pub fn state_digest(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        for &w in &self.state {
            for b in w.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h ^= self.idx as u64;
        h.wrapping_mul(0x0000_0100_0000_01b3)
    }
}

impl Default for Mt19937 {
    fn default() -> Self {
        Self::new(DEFAULT_SEED)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Outputs recorded from an independent C++ `std::mt19937` run; any
    /// correct MT19937 must reproduce them exactly.
    #[test]
    fn matches_reference_outputs_for_default_seed() {
        let mut p = Mt19937::new(5489);
        let first_ten = [
            3499211612u32,
            581869302,
            3890346734,
            3586334585,
            545404204,
            4161255391,
            3922919429,
            949333985,
            2715962298,
            1323567403,
        ];
        for (i, &want) in first_ten.iter().enumerate() {
            assert_eq!(p.next_u32(), want, "output index {i}");
        }
    }

    /// Indices straddling the 624-word twist boundary, plus deep outputs.
    #[test]
    fn matches_reference_outputs_across_twists() {
        let mut p = Mt19937::new(5489);
        let spots = [
            (623u64, 4020325887u32),
            (624, 4178893912),
            (999, 1341017984),
            (9999, 4123659995),
        ];
        let mut at = 0u64;
        for (idx, want) in spots {
            while at < idx {
                p.next_u32();
                at += 1;
            }
            assert_eq!(p.next_u32(), want, "output index {idx}");
            at += 1;
        }
    }

    #[test]
    fn matches_reference_outputs_for_other_seeds() {
        assert_eq!(Mt19937::new(42).next_u32(), 1608637542);
        assert_eq!(Mt19937::new(0).next_u32(), 2357136044);
    }

    #[test]
    fn equal_seeds_stay_in_lockstep() {
        let mut a = Mt19937::new(12345);
        let mut b = Mt19937::new(12345);
        for _ in 0..2000 {
            assert_eq!(a.next_u32(), b.next_u32());
        }
        assert_eq!(a.state_digest(), b.state_digest());
    }

    #[test]
    fn advance_consumes_exactly_that_many_outputs() {
        let mut a = Mt19937::new(7);
        let mut b = Mt19937::new(7);
        let last = a.advance(100);
        let mut manual = 0;
        for _ in 0..100 {
            manual = b.next_u32();
        }
        assert_eq!(last, manual);
        assert_eq!(a.next_u32(), b.next_u32());
    }

    #[test]
    fn advance_zero_is_a_no_op() {
        let mut a = Mt19937::new(7);
        let before = a.state_digest();
        assert_eq!(a.advance(0), 0);
        assert_eq!(a.state_digest(), before);
    }

    #[test]
    fn next_below_stays_in_range_and_tracks_raw_outputs() {
        let mut a = Mt19937::new(99);
        let mut b = Mt19937::new(99);
        for _ in 0..1000 {
            let d = a.next_below(200);
            assert!(d < 200);
            assert_eq!(d, b.next_u32() % 200);
        }
    }

    #[test]
    fn different_seeds_diverge() {
        let mut a = Mt19937::new(1);
        let mut b = Mt19937::new(2);
        let same = (0..100).filter(|_| a.next_u32() == b.next_u32()).count();
        assert!(same < 5);
    }
}
