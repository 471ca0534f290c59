//! Reference implementations shared by the oracle tests.

#![allow(dead_code)]

use leaksim_core::decoder::{defect_distance, Defect};
use leaksim_core::{Pauli, PauliFrame, ToricLattice};
use num_complex::Complex64 as C;

pub const N: usize = 3;
const DIM: usize = 1 << N;

pub type Mat = Vec<Vec<C>>;

pub fn zeros() -> Mat {
    vec![vec![C::new(0.0, 0.0); DIM]; DIM]
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = zeros();
    for i in 0..DIM {
        for k in 0..DIM {
            if a[i][k] == C::new(0.0, 0.0) {
                continue;
            }
            for j in 0..DIM {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn dagger(a: &Mat) -> Mat {
    let mut out = zeros();
    for i in 0..DIM {
        for j in 0..DIM {
            out[j][i] = a[i][j].conj();
        }
    }
    out
}

pub fn pauli_2x2(p: Pauli) -> [[C; 2]; 2] {
    let o = C::new(0.0, 0.0);
    let l = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    match (p.x, p.z) {
        (false, false) => [[l, o], [o, l]],
        (true, false) => [[o, l], [l, o]],
        (true, true) => [[o, -i], [i, o]],
        (false, true) => [[l, o], [o, -l]],
    }
}

/// Qubit 0 is the most significant bit of the basis index.
pub fn bit(index: usize, q: usize) -> usize {
    index >> (N - 1 - q) & 1
}

pub fn pauli_string(ps: &[Pauli; N]) -> Mat {
    let mut m = zeros();
    for (r, row) in m.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = (0..N).fold(C::new(1.0, 0.0), |acc, q| {
                acc * pauli_2x2(ps[q])[bit(r, q)][bit(c, q)]
            });
        }
    }
    m
}

pub fn permutation(f: impl Fn(usize) -> usize) -> Mat {
    let mut m = zeros();
    for c in 0..DIM {
        m[f(c)][c] = C::new(1.0, 0.0);
    }
    m
}

pub fn cnot(control: usize, target: usize) -> Mat {
    permutation(|i| {
        if bit(i, control) == 1 {
            i ^ 1 << (N - 1 - target)
        } else {
            i
        }
    })
}

pub fn swap(a: usize, b: usize) -> Mat {
    permutation(|i| {
        let (ba, bb) = (bit(i, a), bit(i, b));
        let cleared = i & !(1 << (N - 1 - a)) & !(1 << (N - 1 - b));
        cleared | bb << (N - 1 - a) | ba << (N - 1 - b)
    })
}

pub fn hadamard(q: usize) -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = zeros();
    for (r, row) in m.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            let same_elsewhere = (0..N).filter(|&k| k != q).all(|k| bit(r, k) == bit(c, k));
            if same_elsewhere {
                let sign = if bit(r, q) & bit(c, q) == 1 { -s } else { s };
                *v = C::new(sign, 0.0);
            }
        }
    }
    m
}

/// True when `a = λ b` for some unit phase λ.
pub fn equal_up_to_phase(a: &Mat, b: &Mat) -> bool {
    let mut phase = None;
    for i in 0..DIM {
        for j in 0..DIM {
            let (x, y) = (a[i][j], b[i][j]);
            if (x.norm() - y.norm()).abs() > 1e-9 {
                return false;
            }
            if y.norm() > 1e-9 {
                let r = x / y;
                match phase {
                    None => phase = Some(r),
                    Some(p) if (p - r).norm() > 1e-9 => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug)]
pub enum Gate {
    H(usize),
    Cnot(usize, usize),
    Swap(usize, usize),
}

impl Gate {
    pub fn unitary(self) -> Mat {
        match self {
            Gate::H(q) => hadamard(q),
            Gate::Cnot(c, t) => cnot(c, t),
            Gate::Swap(a, b) => swap(a, b),
        }
    }

    pub fn propagate(self, f: &mut PauliFrame) {
        match self {
            Gate::H(q) => f.propagate_h(q),
            Gate::Cnot(c, t) => f.propagate_cnot(c, t),
            Gate::Swap(a, b) => f.propagate_swap(a, b),
        }
        .unwrap();
    }
}

pub fn all_gates() -> Vec<Gate> {
    let mut gates: Vec<Gate> = (0..N).map(Gate::H).collect();
    for a in 0..N {
        for b in 0..N {
            if a != b {
                gates.push(Gate::Cnot(a, b));
                if a < b {
                    gates.push(Gate::Swap(a, b));
                }
            }
        }
    }
    gates
}

pub fn all_strings() -> Vec<[Pauli; N]> {
    (0..64)
        .map(|i| {
            [
                Pauli::from_index(i >> 4),
                Pauli::from_index(i >> 2),
                Pauli::from_index(i),
            ]
        })
        .collect()
}

pub fn frame_of(ps: &[Pauli; N]) -> PauliFrame {
    PauliFrame::from_paulis(ps)
}

pub fn string_of(f: &PauliFrame) -> [Pauli; N] {
    [f.get(0), f.get(1), f.get(2)]
}

/// Minimum total distance over all perfect pairings of `defects`.
pub fn brute_force_matching(l: &ToricLattice, defects: &[Defect]) -> usize {
    fn go(l: &ToricLattice, defects: &[Defect], left: &mut Vec<usize>) -> usize {
        if left.is_empty() {
            return 0;
        }
        let a = left.remove(0);
        let mut best = usize::MAX;
        for k in 0..left.len() {
            let b = left.remove(k);
            best = best.min(defect_distance(l, defects[a], defects[b]) + go(l, defects, left));
            left.insert(k, b);
        }
        left.insert(0, a);
        best
    }
    go(l, defects, &mut (0..defects.len()).collect())
}

/// Propagates every 3-qubit Pauli string through every gate and compares
/// with `U P U†`. Returns the number of cases and the mismatching ones.
pub fn conjugation_mismatches() -> (usize, Vec<String>) {
    let mut cases = 0;
    let mut bad = Vec::new();
    for gate in all_gates() {
        let u = gate.unitary();
        let ud = dagger(&u);
        for ps in all_strings() {
            let expect = mul(&mul(&u, &pauli_string(&ps)), &ud);
            let mut f = frame_of(&ps);
            gate.propagate(&mut f);
            cases += 1;
            if !equal_up_to_phase(&expect, &pauli_string(&string_of(&f))) {
                bad.push(format!("{gate:?} on {ps:?} gave {:?}", string_of(&f)));
            }
        }
    }
    (cases, bad)
}

/// `count` random spacetime defect sets of even size up to 10 on d = 3, 5, 7.
pub fn random_defect_sets(seed: u64, count: usize) -> Vec<(ToricLattice, Vec<Defect>)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|trial| {
            let d = [3, 5, 7][trial % 3];
            let rounds = rng.random_range(1..=d);
            let n = 2 * rng.random_range(1..=5);
            let mut defects: Vec<Defect> = Vec::new();
            while defects.len() < n {
                let c = (rng.random_range(0..d * d), rng.random_range(0..=rounds));
                if !defects.contains(&c) {
                    defects.push(c);
                }
            }
            (ToricLattice::new(d, false).unwrap(), defects)
        })
        .collect()
}
