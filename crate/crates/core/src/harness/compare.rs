//! Pointwise ordering of two result tables on a shared grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::sweep::ResultRow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    A,
    B,
    Tie,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub d: usize,
    pub p: f64,
    pub p_logical_a: f64,
    pub p_logical_b: f64,
    pub lower: Winner,
    /// The two 95% intervals do not overlap.
    pub significant: bool,
}

/// Compares `a` and `b` point by point. Both tables must cover the same
/// `(d, p)` grid.
pub fn compare_variants(a: &[ResultRow], b: &[ResultRow]) -> Result<Vec<Comparison>> {
    let key = |r: &ResultRow| (r.d, r.p.to_bits());
    let mut ka: Vec<_> = a.iter().map(key).collect();
    let mut kb: Vec<_> = b.iter().map(key).collect();
    ka.sort_unstable();
    kb.sort_unstable();
    if ka != kb {
        return Err(Error::MismatchedGrids(format!(
            "{} points vs {} points with different (d, p) sets",
            a.len(),
            b.len()
        )));
    }
    if ka.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::MismatchedGrids("duplicate (d, p) point".into()));
    }
    let mut out = Vec::with_capacity(a.len());
    for ra in a {
        let rb = b.iter().find(|r| key(r) == key(ra)).expect("grids match");
        let lower = if ra.p_logical < rb.p_logical {
            Winner::A
        } else if rb.p_logical < ra.p_logical {
            Winner::B
        } else {
            Winner::Tie
        };
        let significant = ra.ci_high < rb.ci_low || rb.ci_high < ra.ci_low;
        out.push(Comparison {
            d: ra.d,
            p: ra.p,
            p_logical_a: ra.p_logical,
            p_logical_b: rb.p_logical,
            lower,
            significant,
        });
    }
    out.sort_by(|x, y| (x.d, x.p).partial_cmp(&(y.d, y.p)).expect("finite p"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fit::tests::synthetic;

    #[test]
    fn identical_tables_tie() {
        let t = vec![synthetic(0.001, 10, 1000), synthetic(0.002, 40, 1000)];
        let c = compare_variants(&t, &t).unwrap();
        assert!(c.iter().all(|x| x.lower == Winner::Tie && !x.significant));
    }

    #[test]
    fn significance_needs_disjoint_intervals() {
        let a = vec![synthetic(0.001, 10, 10_000)];
        let b = vec![synthetic(0.001, 200, 10_000)];
        let c = compare_variants(&a, &b).unwrap();
        assert_eq!(c[0].lower, Winner::A);
        assert!(c[0].significant);
        let b = vec![synthetic(0.001, 12, 10_000)];
        assert!(!compare_variants(&a, &b).unwrap()[0].significant);
    }

    #[test]
    fn grids_must_match() {
        let a = vec![synthetic(0.001, 10, 1000)];
        let b = vec![synthetic(0.002, 10, 1000)];
        assert!(matches!(
            compare_variants(&a, &b),
            Err(Error::MismatchedGrids(_))
        ));
    }
}
