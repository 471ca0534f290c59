//! Detection events and exact matching decoding on the spacetime torus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CheckId, CheckKind, LogicalOperators, ToricLattice};
use crate::matching::min_weight_perfect_matching;
use crate::pauli::{BitVec, PauliFrame};
use crate::sim::SyndromeRecord;

/// A defect: check index within its type, and time slice `0..=rounds`.
pub type Defect = (usize, usize);

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionEvents {
    /// Noisy rounds; defects live on slices `0..=rounds`, the last one
    /// comparing against the closing perfect round.
    pub rounds: usize,
    pub z: Vec<Defect>,
    pub x: Vec<Defect>,
}

impl DetectionEvents {
    pub fn of_kind(&self, kind: CheckKind) -> &[Defect] {
        match kind {
            CheckKind::Z => &self.z,
            CheckKind::X => &self.x,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty() && self.x.is_empty()
    }
}

/// XORs consecutive outcomes of every stabilizer. Slice 0 compares the first
/// round against the code state; slice `rounds` compares the last round
/// against the final perfect readout.
pub fn extract_events(record: &SyndromeRecord, lattice: &ToricLattice) -> Result<DetectionEvents> {
    let dd = lattice.distance() * lattice.distance();
    if record.num_checks != 2 * dd {
        return Err(Error::SizeMismatch {
            expected: 2 * dd,
            got: record.num_checks,
        });
    }
    let mut events = DetectionEvents {
        rounds: record.rounds,
        ..DetectionEvents::default()
    };
    for flat in 0..2 * dd {
        let mut prev = false;
        for t in 0..=record.rounds {
            let cur = if t == record.rounds {
                record.final_syndrome.get(flat)
            } else {
                record.measured(t, flat)
            };
            if cur != prev {
                if flat < dd {
                    events.z.push((flat, t));
                } else {
                    events.x.push((flat - dd, t));
                }
            }
            prev = cur;
        }
    }
    events.z.sort_unstable_by_key(|&(c, t)| (t, c));
    events.x.sort_unstable_by_key(|&(c, t)| (t, c));
    for kind in CheckKind::BOTH {
        let n = events.of_kind(kind).len();
        if n % 2 == 1 {
            return Err(Error::OddDefects(n));
        }
    }
    Ok(events)
}

/// Unit-weight spacetime distance between two defects of one type.
pub fn defect_distance(lattice: &ToricLattice, a: Defect, b: Defect) -> usize {
    lattice.torus_distance_unchecked(a.0, b.0) + a.1.abs_diff(b.1)
}

/// Exact minimum-weight pairing of `defects`.
pub fn match_defects(lattice: &ToricLattice, defects: &[Defect]) -> Result<Vec<(usize, usize)>> {
    min_weight_perfect_matching(defects.len(), |i, j| {
        defect_distance(lattice, defects[i], defects[j]) as i64
    })
}

/// Data flips implied by a matching: `x` flips come from `Z`-check defects,
/// `z` flips from `X`-check defects. Indexed by data site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    pub x: BitVec,
    pub z: BitVec,
}

impl Correction {
    pub fn as_frame(&self) -> PauliFrame {
        let n = self.x.len();
        let mut f = PauliFrame::new(n);
        for e in 0..n {
            f.set(
                e,
                crate::pauli::Pauli {
                    x: self.x.get(e),
                    z: self.z.get(e),
                },
            );
        }
        f
    }
}

pub fn mwpm(events: &DetectionEvents, lattice: &ToricLattice) -> Result<Correction> {
    let mut correction = Correction {
        x: BitVec::zeros(lattice.num_data()),
        z: BitVec::zeros(lattice.num_data()),
    };
    for kind in CheckKind::BOTH {
        let defects = events.of_kind(kind);
        let flips = match kind {
            CheckKind::Z => &mut correction.x,
            CheckKind::X => &mut correction.z,
        };
        for (i, j) in match_defects(lattice, defects)? {
            let (a, b) = (defects[i].0, defects[j].0);
            if a == b {
                continue;
            }
            let path =
                lattice.shortest_path(CheckId { kind, index: a }, CheckId { kind, index: b })?;
            for e in path {
                flips.flip(e);
            }
        }
    }
    Ok(correction)
}

/// Logical outcome of one shot.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Judgement {
    /// Residual anticommutes with `X1, X2, Z1, Z2` respectively.
    pub flips: [bool; 4],
}

impl Judgement {
    pub fn failed(&self) -> bool {
        self.flips.iter().any(|&f| f)
    }
}

/// Compares the residual `frame * correction` against the four logicals.
pub fn judge(
    correction: &Correction,
    frame: &PauliFrame,
    logicals: &LogicalOperators,
) -> Judgement {
    let n = correction.x.len();
    let mut rx = correction.x.clone();
    let mut rz = correction.z.clone();
    for e in 0..n {
        let p = frame.get(e);
        if p.x {
            rx.flip(e);
        }
        if p.z {
            rz.flip(e);
        }
    }
    let parity = |bits: &BitVec, support: &[usize]| {
        support.iter().filter(|&&e| bits.get(e)).count() % 2 == 1
    };
    Judgement {
        flips: [
            parity(&rz, &logicals.x[0]),
            parity(&rz, &logicals.x[1]),
            parity(&rx, &logicals.z[0]),
            parity(&rx, &logicals.z[1]),
        ],
    }
}

/// Events, matching and judgement for one shot.
pub fn decode_record(
    record: &SyndromeRecord,
    lattice: &ToricLattice,
    logicals: &LogicalOperators,
) -> Result<Judgement> {
    let events = extract_events(record, lattice)?;
    let correction = mwpm(&events, lattice)?;
    Ok(judge(&correction, &record.data_frame, logicals))
}
