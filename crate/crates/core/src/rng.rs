//! Per-shot random streams and the draw interface the simulator consumes.
//!
//! Every shot owns an independent ChaCha stream keyed by
//! `(master_seed, shot_index)`, so a shot replays bit-exactly no matter which
//! worker runs it or in which order shots complete.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::pauli::Pauli;

/// Probability stored as a 32-bit comparison threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Prob(u64);

impl Prob {
    pub const ZERO: Prob = Prob(0);
    pub const ONE: Prob = Prob(1 << 32);

    pub fn new(p: f64) -> Prob {
        let p = p.clamp(0.0, 1.0);
        Prob((p * 4_294_967_296.0).round() as u64)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    fn hit(self, u: u32) -> bool {
        (u as u64) < self.0
    }
}

/// Source of every stochastic choice made while executing a shot.
///
/// Monte Carlo uses [`RandomStream`]; the fault scanner substitutes a
/// scripted source so that leakage-induced draws can be enumerated.
pub trait DrawSource {
    /// Bernoulli trial for a fresh noise event.
    fn event(&mut self, p: Prob) -> bool;
    /// Uniform index in `0..n`.
    fn choose(&mut self, n: usize) -> usize;
    /// One of the three non-identity single-qubit Paulis.
    fn nontrivial_pauli(&mut self) -> Pauli {
        Pauli::from_index(1 + self.choose(3))
    }
    /// One of the fifteen non-identity two-qubit Paulis.
    fn nontrivial_pauli_pair(&mut self) -> (Pauli, Pauli) {
        let k = 1 + self.choose(15);
        (Pauli::from_index(k >> 2), Pauli::from_index(k & 3))
    }
    /// Full depolarization of a qubit touched by a leaked partner: uniform over `{I,X,Y,Z}`.
    fn leak_depolarize(&mut self) -> Pauli;
    /// Outcome reported when measuring a leaked qubit under the random-bit policy.
    fn leaked_outcome(&mut self) -> bool;
}

/// Counter-based stream for one shot.
#[derive(Clone, Debug)]
pub struct RandomStream {
    master_seed: u64,
    shot_index: u64,
    draw_counter: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(master_seed: u64, shot_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(shot_index);
        RandomStream {
            master_seed,
            shot_index,
            draw_counter: 0,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn shot_index(&self) -> u64 {
        self.shot_index
    }

    pub fn draw_counter(&self) -> u64 {
        self.draw_counter
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        self.draw_counter += 1;
        self.rng.next_u32()
    }

    pub fn next_f64(&mut self) -> f64 {
        self.draw_counter += 1;
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl DrawSource for RandomStream {
    #[inline]
    fn event(&mut self, p: Prob) -> bool {
        if p.is_zero() {
            return false;
        }
        let u = self.next_u32();
        p.hit(u)
    }

    #[inline]
    fn choose(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        // Lemire's multiply-shift; bias is below 2^-28 for the small n used here.
        ((self.next_u32() as u64 * n as u64) >> 32) as usize
    }

    #[inline]
    fn leak_depolarize(&mut self) -> Pauli {
        Pauli::from_index((self.next_u32() >> 30) as usize)
    }

    #[inline]
    fn leaked_outcome(&mut self) -> bool {
        self.next_u32() >> 31 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_key_same_sequence() {
        let mut a = RandomStream::new(7, 42);
        let mut b = RandomStream::new(7, 42);
        for _ in 0..100 {
            assert_eq!(a.next_u32(), b.next_u32());
        }
        assert_eq!(a.draw_counter(), 100);
    }

    #[test]
    fn streams_differ_across_shots() {
        let mut a = RandomStream::new(7, 0);
        let mut b = RandomStream::new(7, 1);
        let va: Vec<u32> = (0..8).map(|_| a.next_u32()).collect();
        let vb: Vec<u32> = (0..8).map(|_| b.next_u32()).collect();
        assert_ne!(va, vb);
    }

    #[test]
    fn order_independent() {
        // Drawing shot 3 before shot 2 must not change either sequence.
        let first: Vec<u32> = {
            let mut s = RandomStream::new(1, 2);
            (0..4).map(|_| s.next_u32()).collect()
        };
        let mut s3 = RandomStream::new(1, 3);
        let _ = s3.next_u32();
        let mut s2 = RandomStream::new(1, 2);
        let again: Vec<u32> = (0..4).map(|_| s2.next_u32()).collect();
        assert_eq!(first, again);
    }

    #[test]
    fn prob_edges() {
        let mut s = RandomStream::new(0, 0);
        assert!((0..1000).all(|_| !s.event(Prob::ZERO)));
        assert!((0..1000).all(|_| s.event(Prob::ONE)));
        assert!((0..1000).all(|_| s.event(Prob::new(1.0))));
    }

    #[test]
    fn event_rate() {
        let mut s = RandomStream::new(99, 0);
        let n = 200_000;
        let hits = (0..n).filter(|_| s.event(Prob::new(0.1))).count();
        let rate = hits as f64 / n as f64;
        assert!((rate - 0.1).abs() < 0.005, "{rate}");
    }

    #[test]
    fn uniform_choices_cover_range() {
        let mut s = RandomStream::new(5, 5);
        let mut counts = [0usize; 15];
        for _ in 0..30_000 {
            let (a, b) = s.nontrivial_pauli_pair();
            assert!(!(a.is_identity() && b.is_identity()));
            counts[a.index() * 4 + b.index() - 1] += 1;
        }
        assert!(counts.iter().all(|&c| c > 1700 && c < 2300), "{counts:?}");
    }
}
