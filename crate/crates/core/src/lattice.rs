//! Distance-`d` toric code geometry.
//!
//! Vertices of a `d x d` periodic grid host Z-checks, faces host X-checks and
//! edges host data qubits. Horizontal edge `h(i, j)` joins vertex `(i, j)` to
//! `(i, j+1)`; vertical edge `v(i, j)` joins `(i, j)` to `(i+1, j)`. Face
//! `(i, j)` is bounded by `h(i, j)`, `h(i+1, j)`, `v(i, j)` and `v(i, j+1)`.
//!
//! Physical qubits share one flat index space: data first, then Z-check
//! ancillas, X-check ancillas and (optionally) one spare per check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{BitVec, PauliFrame};

pub const LATTICE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CheckKind {
    /// Vertex check, product of Z on the four incident edges. Detects X errors.
    Z,
    /// Face check, product of X on the four bounding edges. Detects Z errors.
    X,
}

impl CheckKind {
    pub const BOTH: [CheckKind; 2] = [CheckKind::Z, CheckKind::X];

    pub fn slot(self) -> usize {
        match self {
            CheckKind::Z => 0,
            CheckKind::X => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CheckId {
    pub kind: CheckKind,
    pub index: usize,
}

/// Compass direction of a check's data neighbor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dir {
    N,
    W,
    E,
    S,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::N, Dir::W, Dir::E, Dir::S];

    pub fn opposite(self) -> Dir {
        match self {
            Dir::N => Dir::S,
            Dir::S => Dir::N,
            Dir::E => Dir::W,
            Dir::W => Dir::E,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeOrientation {
    Horizontal,
    Vertical,
}

/// Canonical logical representatives, indexed by logical qubit (0 or 1).
///
/// `x[k]` anticommutes with `z[k]` only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalOperators {
    pub x: [Vec<usize>; 2],
    pub z: [Vec<usize>; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricLattice {
    d: usize,
    with_spares: bool,
}

/// Ideal syndrome: one bit per Z-check and one per X-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syndrome {
    pub z: BitVec,
    pub x: BitVec,
}

impl Syndrome {
    pub fn of_kind(&self, kind: CheckKind) -> &BitVec {
        match kind {
            CheckKind::Z => &self.z,
            CheckKind::X => &self.x,
        }
    }

    pub fn is_zero(&self) -> bool {
        !self.z.any() && !self.x.any()
    }
}

impl ToricLattice {
    pub fn new(d: usize, with_spares: bool) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::InvalidDistance(d));
        }
        Ok(ToricLattice { d, with_spares })
    }

    pub fn distance(&self) -> usize {
        self.d
    }

    pub fn has_spares(&self) -> bool {
        self.with_spares
    }

    pub fn num_data(&self) -> usize {
        2 * self.d * self.d
    }

    pub fn num_checks(&self, _kind: CheckKind) -> usize {
        self.d * self.d
    }

    pub fn num_ancillas(&self) -> usize {
        2 * self.d * self.d
    }

    pub fn num_spares(&self) -> usize {
        if self.with_spares {
            2 * self.d * self.d
        } else {
            0
        }
    }

    pub fn num_physical(&self) -> usize {
        self.num_data() + self.num_ancillas() + self.num_spares()
    }

    pub fn checks(&self) -> impl Iterator<Item = CheckId> + '_ {
        CheckKind::BOTH
            .into_iter()
            .flat_map(move |kind| (0..self.d * self.d).map(move |index| CheckId { kind, index }))
    }

    fn wrap(&self, v: isize) -> usize {
        v.rem_euclid(self.d as isize) as usize
    }

    pub fn h_edge(&self, i: isize, j: isize) -> usize {
        self.wrap(i) * self.d + self.wrap(j)
    }

    pub fn v_edge(&self, i: isize, j: isize) -> usize {
        self.d * self.d + self.wrap(i) * self.d + self.wrap(j)
    }

    pub fn check_coords(&self, c: CheckId) -> (usize, usize) {
        (c.index / self.d, c.index % self.d)
    }

    pub fn check_at(&self, kind: CheckKind, row: isize, col: isize) -> CheckId {
        CheckId {
            kind,
            index: self.wrap(row) * self.d + self.wrap(col),
        }
    }

    /// `(row, col, orientation)` of a data edge.
    pub fn data_coords(&self, e: usize) -> (usize, usize, EdgeOrientation) {
        let dd = self.d * self.d;
        if e < dd {
            (e / self.d, e % self.d, EdgeOrientation::Horizontal)
        } else {
            (
                (e - dd) / self.d,
                (e - dd) % self.d,
                EdgeOrientation::Vertical,
            )
        }
    }

    /// Data qubit adjacent to `c` in direction `dir`.
    pub fn neighbor(&self, c: CheckId, dir: Dir) -> usize {
        let (r, k) = self.check_coords(c);
        let (i, j) = (r as isize, k as isize);
        match (c.kind, dir) {
            (CheckKind::Z, Dir::N) => self.v_edge(i - 1, j),
            (CheckKind::Z, Dir::S) => self.v_edge(i, j),
            (CheckKind::Z, Dir::W) => self.h_edge(i, j - 1),
            (CheckKind::Z, Dir::E) => self.h_edge(i, j),
            (CheckKind::X, Dir::N) => self.h_edge(i, j),
            (CheckKind::X, Dir::S) => self.h_edge(i + 1, j),
            (CheckKind::X, Dir::W) => self.v_edge(i, j),
            (CheckKind::X, Dir::E) => self.v_edge(i, j + 1),
        }
    }

    /// Support in `N, W, E, S` order.
    pub fn support(&self, c: CheckId) -> [usize; 4] {
        Dir::ALL.map(|dir| self.neighbor(c, dir))
    }

    /// The two checks of `kind` that contain data edge `e`.
    pub fn checks_of_data(&self, e: usize, kind: CheckKind) -> [CheckId; 2] {
        let (r, k, o) = self.data_coords(e);
        let (i, j) = (r as isize, k as isize);
        match (kind, o) {
            (CheckKind::Z, EdgeOrientation::Horizontal) => {
                [self.check_at(kind, i, j), self.check_at(kind, i, j + 1)]
            }
            (CheckKind::Z, EdgeOrientation::Vertical) => {
                [self.check_at(kind, i, j), self.check_at(kind, i + 1, j)]
            }
            (CheckKind::X, EdgeOrientation::Horizontal) => {
                [self.check_at(kind, i - 1, j), self.check_at(kind, i, j)]
            }
            (CheckKind::X, EdgeOrientation::Vertical) => {
                [self.check_at(kind, i, j - 1), self.check_at(kind, i, j)]
            }
        }
    }

    /// Initial physical index of a data site.
    pub fn data_physical(&self, e: usize) -> usize {
        e
    }

    /// Initial physical index of a check's ancilla.
    pub fn check_physical(&self, c: CheckId) -> usize {
        self.num_data() + c.kind.slot() * self.d * self.d + c.index
    }

    /// Initial physical index of a check's spare, if the lattice has spares.
    pub fn spare_physical(&self, c: CheckId) -> Option<usize> {
        self.with_spares.then(|| {
            self.num_data() + self.num_ancillas() + c.kind.slot() * self.d * self.d + c.index
        })
    }

    pub fn logicals(&self) -> LogicalOperators {
        let d = self.d as isize;
        LogicalOperators {
            x: [
                (0..d).map(|j| self.h_edge(0, j)).collect(),
                (0..d).map(|i| self.v_edge(i, 0)).collect(),
            ],
            z: [
                (0..d).map(|i| self.h_edge(i, 0)).collect(),
                (0..d).map(|j| self.v_edge(0, j)).collect(),
            ],
        }
    }

    /// Ideal syndrome of a data error. The frame may be indexed by data site
    /// (`num_data` qubits) or use the initial physical layout.
    pub fn syndrome_of(&self, frame: &PauliFrame) -> Result<Syndrome> {
        let n = frame.num_qubits();
        if n != self.num_data() && n != self.num_physical() {
            return Err(Error::SizeMismatch {
                expected: self.num_data(),
                got: n,
            });
        }
        let mut syn = Syndrome {
            z: BitVec::zeros(self.d * self.d),
            x: BitVec::zeros(self.d * self.d),
        };
        for c in self.checks() {
            let parity = self
                .support(c)
                .iter()
                .filter(|&&e| match c.kind {
                    CheckKind::Z => frame.get(e).x,
                    CheckKind::X => frame.get(e).z,
                })
                .count()
                % 2
                == 1;
            match c.kind {
                CheckKind::Z => syn.z.set(c.index, parity),
                CheckKind::X => syn.x.set(c.index, parity),
            }
        }
        Ok(syn)
    }

    /// Minimum over periodic images of the Manhattan separation.
    pub fn torus_distance(&self, a: CheckId, b: CheckId) -> Result<usize> {
        if a.kind != b.kind {
            return Err(Error::CheckTypeMismatch(format!(
                "{:?} vs {:?}",
                a.kind, b.kind
            )));
        }
        Ok(self.torus_distance_unchecked(a.index, b.index))
    }

    pub(crate) fn torus_distance_unchecked(&self, a: usize, b: usize) -> usize {
        let d = self.d;
        let axis = |x: usize, y: usize| {
            let t = x.abs_diff(y);
            t.min(d - t)
        };
        axis(a / d, b / d) + axis(a % d, b % d)
    }

    /// Data edges along a shortest path between two same-type checks:
    /// column moves first, then row moves. `d` is odd so the short way
    /// around each axis is unique.
    pub fn shortest_path(&self, a: CheckId, b: CheckId) -> Result<Vec<usize>> {
        if a.kind != b.kind {
            return Err(Error::CheckTypeMismatch(format!(
                "{:?} vs {:?}",
                a.kind, b.kind
            )));
        }
        let d = self.d as isize;
        let (ar, ac) = self.check_coords(a);
        let (br, bc) = self.check_coords(b);
        let step = |from: usize, to: usize| -> (isize, isize) {
            let fwd = (to as isize - from as isize).rem_euclid(d);
            if fwd <= d - fwd {
                (1, fwd)
            } else {
                (-1, d - fwd)
            }
        };
        let mut path = Vec::new();
        let (mut i, mut j) = (ar as isize, ac as isize);
        let (dc, nc) = step(ac, bc);
        for _ in 0..nc {
            let e = match (a.kind, dc) {
                (CheckKind::Z, 1) => self.h_edge(i, j),
                (CheckKind::Z, _) => self.h_edge(i, j - 1),
                (CheckKind::X, 1) => self.v_edge(i, j + 1),
                (CheckKind::X, _) => self.v_edge(i, j),
            };
            path.push(e);
            j += dc;
        }
        let (dr, nr) = step(ar, br);
        for _ in 0..nr {
            let e = match (a.kind, dr) {
                (CheckKind::Z, 1) => self.v_edge(i, j),
                (CheckKind::Z, _) => self.v_edge(i - 1, j),
                (CheckKind::X, 1) => self.h_edge(i + 1, j),
                (CheckKind::X, _) => self.h_edge(i, j),
            };
            path.push(e);
            i += dr;
        }
        Ok(path)
    }

    pub fn describe(&self) -> LatticeDescription {
        let mut sites = Vec::with_capacity(self.num_physical());
        for e in 0..self.num_data() {
            let (row, col, o) = self.data_coords(e);
            sites.push(SiteRecord {
                physical: self.data_physical(e),
                role: "data".into(),
                row,
                col,
                subtype: match o {
                    EdgeOrientation::Horizontal => "h".into(),
                    EdgeOrientation::Vertical => "v".into(),
                },
            });
        }
        for c in self.checks() {
            let (row, col) = self.check_coords(c);
            let subtype = match c.kind {
                CheckKind::Z => "z",
                CheckKind::X => "x",
            };
            sites.push(SiteRecord {
                physical: self.check_physical(c),
                role: "ancilla".into(),
                row,
                col,
                subtype: subtype.into(),
            });
        }
        for c in self.checks() {
            if let Some(p) = self.spare_physical(c) {
                let (row, col) = self.check_coords(c);
                sites.push(SiteRecord {
                    physical: p,
                    role: "spare".into(),
                    row,
                    col,
                    subtype: match c.kind {
                        CheckKind::Z => "z".into(),
                        CheckKind::X => "x".into(),
                    },
                });
            }
        }
        let checks = self
            .checks()
            .map(|c| CheckRecord {
                check: c,
                support: self.support(c),
            })
            .collect();
        LatticeDescription {
            version: LATTICE_FORMAT_VERSION,
            distance: self.d,
            with_spares: self.with_spares,
            num_physical: self.num_physical(),
            sites,
            checks,
            logicals: self.logicals(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteRecord {
    pub physical: usize,
    pub role: String,
    pub row: usize,
    pub col: usize,
    pub subtype: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: CheckId,
    /// Data sites in `N, W, E, S` order.
    pub support: [usize; 4],
}

/// Versioned description of a lattice instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDescription {
    pub version: u32,
    pub distance: usize,
    pub with_spares: bool,
    pub num_physical: usize,
    pub sites: Vec<SiteRecord>,
    pub checks: Vec<CheckRecord>,
    pub logicals: LogicalOperators,
}
