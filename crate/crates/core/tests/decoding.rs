//! Matching decoder against brute force and code-capacity correctability.

mod common;

use common::brute_force_matching;
use leaksim_core::decoder::{defect_distance, judge, match_defects, mwpm, Defect, DetectionEvents};
use leaksim_core::{Pauli, PauliFrame, ToricLattice};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn matching_equals_brute_force_on_1000_syndromes() {
    for (l, defects) in common::random_defect_sets(2024, 1000) {
        let n = defects.len();
        let d = l.distance();
        let pairs = match_defects(&l, &defects).unwrap();
        let mut used = vec![false; n];
        for &(i, j) in &pairs {
            assert!(!used[i] && !used[j]);
            used[i] = true;
            used[j] = true;
        }
        assert!(used.iter().all(|&u| u));
        let total: usize = pairs
            .iter()
            .map(|&(i, j)| defect_distance(&l, defects[i], defects[j]))
            .sum();
        assert_eq!(
            total,
            brute_force_matching(&l, &defects),
            "d={d} {defects:?}"
        );
    }
}

fn decode_data_error(l: &ToricLattice, f: &PauliFrame) -> bool {
    let s = l.syndrome_of(f).unwrap();
    let events = DetectionEvents {
        rounds: 0,
        z: s.z.ones().map(|c| (c, 0)).collect(),
        x: s.x.ones().map(|c| (c, 0)).collect(),
    };
    judge(&mwpm(&events, l).unwrap(), f, &l.logicals()).failed()
}

#[test]
fn every_weight_one_error_is_corrected_at_d3() {
    let l = ToricLattice::new(3, false).unwrap();
    for e in 0..l.num_data() {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            let mut f = PauliFrame::new(l.num_data());
            f.set(e, p);
            assert!(!decode_data_error(&l, &f), "{e} {p}");
        }
    }
}

#[test]
fn random_weight_two_errors_are_corrected_at_d5() {
    let l = ToricLattice::new(5, false).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let a = rng.random_range(0..l.num_data());
        let b = (a + rng.random_range(1..l.num_data())) % l.num_data();
        let mut f = PauliFrame::new(l.num_data());
        f.set(a, Pauli::from_index(rng.random_range(1..4)));
        f.set(b, Pauli::from_index(rng.random_range(1..4)));
        assert!(!decode_data_error(&l, &f), "{a} {b}");
    }
}

#[test]
fn decoding_is_deterministic() {
    let l = ToricLattice::new(5, false).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let mut z: Vec<Defect> = (0..8)
            .map(|_| (rng.random_range(0..25), rng.random_range(0..4)))
            .collect();
        z.sort_unstable();
        z.dedup();
        if z.len() % 2 == 1 {
            z.pop();
        }
        let events = DetectionEvents {
            rounds: 3,
            z,
            x: vec![],
        };
        assert_eq!(mwpm(&events, &l).unwrap(), mwpm(&events, &l).unwrap());
    }
}
