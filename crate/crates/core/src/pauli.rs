//! Phase-free Pauli algebra and the bit-packed error frame.
//!
//! A [`PauliFrame`] records, for every physical qubit, which Pauli error it
//! currently carries relative to the noiseless execution. Phases are never
//! tracked: syndromes and logical parities only depend on commutation.

use std::fmt;

use crate::error::Error;

/// Single-qubit Pauli modulo phase, stored as its `(x, z)` symplectic bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Pauli {
    pub x: bool,
    pub z: bool,
}

impl Pauli {
    pub const I: Pauli = Pauli { x: false, z: false };
    pub const X: Pauli = Pauli { x: true, z: false };
    pub const Z: Pauli = Pauli { x: false, z: true };
    pub const Y: Pauli = Pauli { x: true, z: true };

    /// All four Paulis in `I, X, Y, Z` order.
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Decodes the index used by [`Pauli::ALL`].
    pub fn from_index(i: usize) -> Pauli {
        Pauli::ALL[i & 3]
    }

    pub fn index(self) -> usize {
        match (self.x, self.z) {
            (false, false) => 0,
            (true, false) => 1,
            (true, true) => 2,
            (false, true) => 3,
        }
    }

    pub fn is_identity(self) -> bool {
        !self.x && !self.z
    }

    pub fn commutes(self, other: Pauli) -> bool {
        !((self.x & other.z) ^ (self.z & other.x))
    }
}

impl std::ops::Mul for Pauli {
    type Output = Pauli;

    fn mul(self, rhs: Pauli) -> Pauli {
        pauli_mul(self, rhs)
    }
}

impl fmt::Debug for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = ['I', 'X', 'Y', 'Z'][self.index()];
        write!(f, "{c}")
    }
}

impl std::str::FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Pauli, Error> {
        match s {
            "I" => Ok(Pauli::I),
            "X" => Ok(Pauli::X),
            "Y" => Ok(Pauli::Y),
            "Z" => Ok(Pauli::Z),
            _ => Err(Error::config("pauli", format!("unknown Pauli `{s}`"))),
        }
    }
}

impl serde::Serialize for Pauli {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Pauli {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Pauli, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Group product modulo phase.
pub fn pauli_mul(a: Pauli, b: Pauli) -> Pauli {
    Pauli {
        x: a.x ^ b.x,
        z: a.z ^ b.z,
    }
}

/// Fixed-length packed bit vector used for frame components and leak flags.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if v {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn any(&self) -> bool {
        self.words.iter().any(|&w| w != 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Accumulated Pauli error on every physical qubit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliFrame {
    xs: BitVec,
    zs: BitVec,
}

impl PauliFrame {
    pub fn new(num_qubits: usize) -> Self {
        PauliFrame {
            xs: BitVec::zeros(num_qubits),
            zs: BitVec::zeros(num_qubits),
        }
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut f = PauliFrame::new(paulis.len());
        for (q, &p) in paulis.iter().enumerate() {
            f.set(q, p);
        }
        f
    }

    pub fn num_qubits(&self) -> usize {
        self.xs.len()
    }

    #[inline]
    pub fn get(&self, q: usize) -> Pauli {
        Pauli {
            x: self.xs.get(q),
            z: self.zs.get(q),
        }
    }

    #[inline]
    pub fn set(&mut self, q: usize, p: Pauli) {
        self.xs.set(q, p.x);
        self.zs.set(q, p.z);
    }

    /// Multiplies `p` into the error already present on `q`.
    #[inline]
    pub fn apply(&mut self, q: usize, p: Pauli) {
        if p.x {
            self.xs.flip(q);
        }
        if p.z {
            self.zs.flip(q);
        }
    }

    pub fn xbits(&self) -> &BitVec {
        &self.xs
    }

    pub fn zbits(&self) -> &BitVec {
        &self.zs
    }

    pub fn compose(&mut self, other: &PauliFrame) {
        self.xs.xor_assign(&other.xs);
        self.zs.xor_assign(&other.zs);
    }

    pub fn clear(&mut self) {
        self.xs.clear();
        self.zs.clear();
    }

    pub fn is_identity(&self) -> bool {
        !self.xs.any() && !self.zs.any()
    }

    /// Number of qubits with a non-identity component.
    pub fn weight(&self) -> usize {
        (0..self.num_qubits())
            .filter(|&q| !self.get(q).is_identity())
            .count()
    }

    fn check(&self, q: usize) -> Result<(), Error> {
        if q >= self.num_qubits() {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                num_qubits: self.num_qubits(),
            });
        }
        Ok(())
    }

    /// Conjugates the frame by `CNOT(control, target)`.
    pub fn propagate_cnot(&mut self, control: usize, target: usize) -> Result<(), Error> {
        self.check(control)?;
        self.check(target)?;
        if control == target {
            return Err(Error::RepeatedQubit(control));
        }
        self.cnot_unchecked(control, target);
        Ok(())
    }

    #[inline]
    pub(crate) fn cnot_unchecked(&mut self, control: usize, target: usize) {
        if self.xs.get(control) {
            self.xs.flip(target);
        }
        if self.zs.get(target) {
            self.zs.flip(control);
        }
    }

    /// Conjugates the frame by a Hadamard on `q`.
    pub fn propagate_h(&mut self, q: usize) -> Result<(), Error> {
        self.check(q)?;
        self.h_unchecked(q);
        Ok(())
    }

    #[inline]
    pub(crate) fn h_unchecked(&mut self, q: usize) {
        let p = self.get(q);
        self.set(q, Pauli { x: p.z, z: p.x });
    }

    pub fn propagate_swap(&mut self, a: usize, b: usize) -> Result<(), Error> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(Error::RepeatedQubit(a));
        }
        self.swap_unchecked(a, b);
        Ok(())
    }

    #[inline]
    pub(crate) fn swap_unchecked(&mut self, a: usize, b: usize) {
        let pa = self.get(a);
        let pb = self.get(b);
        self.set(a, pb);
        self.set(b, pa);
    }
}

impl fmt::Debug for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.num_qubits() {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}

/// Per-qubit leaked flags evolved alongside a [`PauliFrame`].
///
/// Only preparation clears a flag; nothing in the gate set unleaks a qubit.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LeakageMask {
    leaked: BitVec,
}

impl LeakageMask {
    pub fn new(num_qubits: usize) -> Self {
        LeakageMask {
            leaked: BitVec::zeros(num_qubits),
        }
    }

    #[inline]
    pub fn is_leaked(&self, q: usize) -> bool {
        self.leaked.get(q)
    }

    #[inline]
    pub fn leak(&mut self, q: usize) {
        self.leaked.set(q, true);
    }

    #[inline]
    pub fn reset(&mut self, q: usize) {
        self.leaked.set(q, false);
    }

    pub fn count(&self) -> usize {
        self.leaked.count_ones()
    }

    pub fn is_clear(&self) -> bool {
        !self.leaked.any()
    }

    pub fn leaked_qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.leaked.ones()
    }

    pub fn clear(&mut self) {
        self.leaked.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_table() {
        assert_eq!(pauli_mul(Pauli::X, Pauli::X), Pauli::I);
        assert_eq!(pauli_mul(Pauli::X, Pauli::Z), Pauli::Y);
        assert_eq!(pauli_mul(Pauli::I, Pauli::Y), Pauli::Y);
        assert_eq!(Pauli::Y * Pauli::Z, Pauli::X);
    }

    #[test]
    fn commutation() {
        assert!(!Pauli::X.commutes(Pauli::Z));
        assert!(!Pauli::Y.commutes(Pauli::X));
        assert!(Pauli::Y.commutes(Pauli::Y));
        assert!(Pauli::I.commutes(Pauli::Z));
    }

    #[test]
    fn index_roundtrip() {
        for i in 0..4 {
            assert_eq!(Pauli::from_index(i).index(), i);
        }
    }

    #[test]
    fn cnot_rules() {
        let mut f = PauliFrame::from_paulis(&[Pauli::X, Pauli::I]);
        f.propagate_cnot(0, 1).unwrap();
        assert_eq!(f, PauliFrame::from_paulis(&[Pauli::X, Pauli::X]));

        let mut f = PauliFrame::from_paulis(&[Pauli::I, Pauli::Z]);
        f.propagate_cnot(0, 1).unwrap();
        assert_eq!(f, PauliFrame::from_paulis(&[Pauli::Z, Pauli::Z]));

        let mut f = PauliFrame::from_paulis(&[Pauli::Y, Pauli::I]);
        f.propagate_cnot(0, 1).unwrap();
        assert_eq!(f, PauliFrame::from_paulis(&[Pauli::Y, Pauli::X]));
    }

    #[test]
    fn hadamard_rules() {
        for (input, out) in [
            (Pauli::X, Pauli::Z),
            (Pauli::Y, Pauli::Y),
            (Pauli::I, Pauli::I),
        ] {
            let mut f = PauliFrame::from_paulis(&[input]);
            f.propagate_h(0).unwrap();
            assert_eq!(f.get(0), out);
        }
    }

    #[test]
    fn out_of_range() {
        let mut f = PauliFrame::new(2);
        assert!(matches!(
            f.propagate_cnot(0, 2),
            Err(Error::QubitOutOfRange { qubit: 2, .. })
        ));
        assert!(f.propagate_h(5).is_err());
        assert!(matches!(
            f.propagate_cnot(1, 1),
            Err(Error::RepeatedQubit(1))
        ));
    }

    #[test]
    fn frame_wider_than_one_word() {
        let mut f = PauliFrame::new(130);
        f.apply(129, Pauli::Y);
        f.apply(64, Pauli::X);
        f.propagate_cnot(64, 129).unwrap();
        assert_eq!(f.get(129), Pauli::Z);
        assert_eq!(f.weight(), 2);
    }

    #[test]
    fn leakage_mask_basics() {
        let mut m = LeakageMask::new(70);
        assert!(m.is_clear());
        m.leak(3);
        m.leak(69);
        assert_eq!(m.leaked_qubits().collect::<Vec<_>>(), vec![3, 69]);
        m.reset(3);
        assert_eq!(m.count(), 1);
    }
}
