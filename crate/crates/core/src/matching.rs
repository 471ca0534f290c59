//! Maximum-weight matching on general graphs (Edmonds' blossom algorithm,
//! primal-dual form, O(n^3)), and minimum-weight perfect matching on
//! complete graphs built on top of it.
//!
//! All arithmetic is on integers. Vertex duals start at the maximum edge
//! weight, so every slack `u_i + u_j - 2 w_ij` stays integral and blossom
//! deltas (half a slack between two S-vertices) are exact.

use crate::error::{Error, Result};

const NONE: usize = usize::MAX;

// Vertex/blossom labels.
const FREE: i8 = 0;
const S: i8 = 1;
const T: i8 = 2;
const BREADCRUMB: i8 = 5;

struct Matcher<'a> {
    edges: &'a [(usize, usize, i64)],
    nvertex: usize,
    max_cardinality: bool,
    /// `endpoint[p]` is the vertex at end `p` of edge `p / 2`.
    endpoint: Vec<usize>,
    /// Remote endpoints of the edges incident to each vertex.
    neighbend: Vec<Vec<usize>>,
    /// Remote endpoint of the matched edge, or `NONE`.
    mate: Vec<usize>,
    label: Vec<i8>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<usize>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<usize>,
    blossombestedges: Vec<Option<Vec<usize>>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<i64>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

#[inline]
fn wrap(j: isize, len: usize) -> usize {
    j.rem_euclid(len as isize) as usize
}

impl<'a> Matcher<'a> {
    fn new(nvertex: usize, edges: &'a [(usize, usize, i64)], max_cardinality: bool) -> Self {
        let maxweight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let mut endpoint = Vec::with_capacity(2 * edges.len());
        let mut neighbend = vec![Vec::new(); nvertex];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            endpoint.push(i);
            endpoint.push(j);
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let n2 = 2 * nvertex;
        let mut blossombase: Vec<usize> = (0..nvertex).collect();
        blossombase.resize(n2, NONE);
        let mut dualvar = vec![maxweight; nvertex];
        dualvar.resize(n2, 0);
        Matcher {
            edges,
            nvertex,
            max_cardinality,
            endpoint,
            neighbend,
            mate: vec![NONE; nvertex],
            label: vec![FREE; n2],
            labelend: vec![NONE; n2],
            inblossom: (0..nvertex).collect(),
            blossomparent: vec![NONE; n2],
            blossomchilds: vec![Vec::new(); n2],
            blossombase,
            blossomendps: vec![Vec::new(); n2],
            bestedge: vec![NONE; n2],
            blossombestedges: vec![None; n2],
            unusedblossoms: (nvertex..n2).collect(),
            dualvar,
            allowedge: vec![false; edges.len()],
            queue: Vec::new(),
        }
    }

    #[inline]
    fn slack(&self, k: usize) -> i64 {
        let (i, j, w) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2 * w
    }

    fn leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![b];
        while let Some(t) = stack.pop() {
            if t < self.nvertex {
                out.push(t);
            } else {
                stack.extend(self.blossomchilds[t].iter().rev().copied());
            }
        }
        out
    }

    fn assign_label(&mut self, w: usize, t: i8, p: usize) {
        let mut w = w;
        let mut t = t;
        let mut p = p;
        loop {
            let b = self.inblossom[w];
            debug_assert!(self.label[w] == FREE && self.label[b] == FREE);
            self.label[w] = t;
            self.label[b] = t;
            self.labelend[w] = p;
            self.labelend[b] = p;
            self.bestedge[w] = NONE;
            self.bestedge[b] = NONE;
            if t == S {
                let leaves = self.leaves(b);
                self.queue.extend(leaves);
                return;
            }
            // T-blossom: its base is matched; label the mate S.
            let base = self.blossombase[b];
            let m = self.mate[base];
            debug_assert!(m != NONE);
            w = self.endpoint[m];
            t = S;
            p = m ^ 1;
        }
    }

    /// Traces back from `v` and `w` to find a new blossom's base, or `NONE`
    /// when the two trees are disjoint (augmenting path).
    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let (mut v, mut w) = (v, w);
        while v != NONE || w != NONE {
            let mut b = self.inblossom[v];
            if self.label[b] & 4 != 0 {
                base = self.blossombase[b];
                break;
            }
            debug_assert_eq!(self.label[b], S);
            path.push(b);
            self.label[b] = BREADCRUMB;
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.labelend[b]];
                b = self.inblossom[v];
                debug_assert_eq!(self.label[b], T);
                v = self.endpoint[self.labelend[b]];
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = S;
        }
        base
    }

    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("blossom pool exhausted");
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b;
            path.push(bv);
            endps.push(self.labelend[bv]);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b;
            path.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }
        debug_assert_eq!(self.label[bb], S);
        self.blossomchilds[b] = path.clone();
        self.blossomendps[b] = endps;
        self.label[b] = S;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0;
        for v in self.leaves(b) {
            if self.label[self.inblossom[v]] == T {
                self.queue.push(v);
            }
            self.inblossom[v] = b;
        }
        // Least-slack edges from the new blossom to every other S-blossom.
        let mut bestedgeto = vec![NONE; 2 * self.nvertex];
        for &bv in &path {
            let lists: Vec<Vec<usize>> = match self.blossombestedges[bv].take() {
                Some(list) => vec![list],
                None => self
                    .leaves(bv)
                    .into_iter()
                    .map(|v| self.neighbend[v].iter().map(|p| p / 2).collect())
                    .collect(),
            };
            for list in lists {
                for k in list {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == S
                        && (bestedgeto[bj] == NONE || self.slack(k) < self.slack(bestedgeto[bj]))
                    {
                        bestedgeto[bj] = k;
                    }
                }
            }
            self.bestedge[bv] = NONE;
        }
        let best: Vec<usize> = bestedgeto.into_iter().filter(|&k| k != NONE).collect();
        self.bestedge[b] = NONE;
        for &k in &best {
            if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b]) {
                self.bestedge[b] = k;
            }
        }
        self.blossombestedges[b] = Some(best);
    }

    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.blossomchilds[b].clone();
        for &s in &childs {
            self.blossomparent[s] = NONE;
            if s < self.nvertex {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                for v in self.leaves(s) {
                    self.inblossom[v] = s;
                }
            }
        }
        if !endstage && self.label[b] == T {
            // Relabel the sub-blossoms on the even path from the entry child to the base.
            let len = childs.len();
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
            let mut j = childs.iter().position(|&c| c == entrychild).unwrap() as isize;
            let (jstep, endptrick): (isize, usize) = if j & 1 == 1 {
                j -= len as isize;
                (1, 0)
            } else {
                (-1, 1)
            };
            let endps = self.blossomendps[b].clone();
            let mut p = self.labelend[b];
            while j != 0 {
                self.label[self.endpoint[p ^ 1]] = FREE;
                let q = endps[wrap(j - endptrick as isize, len)] ^ endptrick ^ 1;
                self.label[self.endpoint[q]] = FREE;
                self.assign_label(self.endpoint[p ^ 1], T, p);
                self.allowedge[endps[wrap(j - endptrick as isize, len)] / 2] = true;
                j += jstep;
                p = endps[wrap(j - endptrick as isize, len)] ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            let bv = childs[wrap(j, len)];
            let ep = self.endpoint[p ^ 1];
            self.label[ep] = T;
            self.label[bv] = T;
            self.labelend[ep] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;
            j += jstep;
            while childs[wrap(j, len)] != entrychild {
                let bv = childs[wrap(j, len)];
                if self.label[bv] == S {
                    j += jstep;
                    continue;
                }
                let reached = self.leaves(bv).into_iter().find(|&v| self.label[v] != FREE);
                if let Some(v) = reached {
                    debug_assert_eq!(self.label[v], T);
                    debug_assert_eq!(self.inblossom[v], bv);
                    self.label[v] = FREE;
                    let m = self.mate[self.blossombase[bv]];
                    self.label[self.endpoint[m]] = FREE;
                    let le = self.labelend[v];
                    self.assign_label(v, T, le);
                }
                j += jstep;
            }
        }
        self.label[b] = -1;
        self.labelend[b] = NONE;
        self.blossomchilds[b].clear();
        self.blossomendps[b].clear();
        self.blossombase[b] = NONE;
        self.blossombestedges[b] = None;
        self.bestedge[b] = NONE;
        self.unusedblossoms.push(b);
    }

    /// Swaps matched and unmatched edges along the even path from `v` to the
    /// base of blossom `b`, making `v` the new base.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }
        if t >= self.nvertex {
            self.augment_blossom(t, v);
        }
        let len = self.blossomchilds[b].len();
        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap();
        let mut j = i as isize;
        let (jstep, endptrick): (isize, usize) = if i & 1 == 1 {
            j -= len as isize;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let t = self.blossomchilds[b][wrap(j, len)];
            let p = self.blossomendps[b][wrap(j - endptrick as isize, len)] ^ endptrick;
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p]);
            }
            j += jstep;
            let t = self.blossomchilds[b][wrap(j, len)];
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        debug_assert_eq!(self.blossombase[b], v);
    }

    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (s0, p0) in [(v, 2 * k + 1), (w, 2 * k)] {
            let (mut s, mut p) = (s0, p0);
            loop {
                let bs = self.inblossom[s];
                debug_assert_eq!(self.label[bs], S);
                if bs >= self.nvertex {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                debug_assert_eq!(self.label[bt], T);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];
                debug_assert_eq!(self.blossombase[bt], t);
                if bt >= self.nvertex {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn run(mut self) -> Vec<usize> {
        let n = self.nvertex;
        for _stage in 0..n {
            self.label.iter_mut().for_each(|l| *l = FREE);
            self.bestedge.iter_mut().for_each(|e| *e = NONE);
            for b in n..2 * n {
                self.blossombestedges[b] = None;
            }
            self.allowedge.iter_mut().for_each(|a| *a = false);
            self.queue.clear();
            for v in 0..n {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == FREE {
                    self.assign_label(v, S, NONE);
                }
            }
            let mut augmented = false;
            loop {
                while let Some(v) = (!augmented).then(|| self.queue.pop()).flatten() {
                    debug_assert_eq!(self.label[self.inblossom[v]], S);
                    let neighbors = self.neighbend[v].clone();
                    for p in neighbors {
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        let mut kslack = 0;
                        if !self.allowedge[k] {
                            kslack = self.slack(k);
                            if kslack <= 0 {
                                self.allowedge[k] = true;
                            }
                        }
                        if self.allowedge[k] {
                            let bw = self.inblossom[w];
                            if self.label[bw] == FREE {
                                self.assign_label(w, T, p ^ 1);
                            } else if self.label[bw] == S {
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == FREE {
                                debug_assert_eq!(self.label[bw], T);
                                self.label[w] = T;
                                self.labelend[w] = p ^ 1;
                            }
                        } else if self.label[self.inblossom[w]] == S {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE || kslack < self.slack(self.bestedge[b]) {
                                self.bestedge[b] = k;
                            }
                        } else if self.label[w] == FREE
                            && (self.bestedge[w] == NONE || kslack < self.slack(self.bestedge[w]))
                        {
                            self.bestedge[w] = k;
                        }
                    }
                }
                if augmented {
                    break;
                }

                // Dual adjustment.
                #[derive(PartialEq)]
                enum Delta {
                    None,
                    Vertex,
                    Edge(usize),
                    Blossom(usize),
                    Expand(usize),
                }
                let mut kind = Delta::None;
                let mut delta = 0i64;
                if !self.max_cardinality {
                    kind = Delta::Vertex;
                    delta = *self.dualvar[..n].iter().min().unwrap();
                }
                for v in 0..n {
                    if self.label[self.inblossom[v]] == FREE && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v]);
                        if kind == Delta::None || d < delta {
                            delta = d;
                            kind = Delta::Edge(self.bestedge[v]);
                        }
                    }
                }
                for b in 0..2 * n {
                    if self.blossomparent[b] == NONE
                        && self.label[b] == S
                        && self.bestedge[b] != NONE
                    {
                        let kslack = self.slack(self.bestedge[b]);
                        debug_assert_eq!(kslack % 2, 0);
                        let d = kslack / 2;
                        if kind == Delta::None || d < delta {
                            delta = d;
                            kind = Delta::Blossom(self.bestedge[b]);
                        }
                    }
                }
                for b in n..2 * n {
                    if self.blossombase[b] != NONE
                        && self.blossomparent[b] == NONE
                        && self.label[b] == T
                        && (kind == Delta::None || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        kind = Delta::Expand(b);
                    }
                }
                if kind == Delta::None {
                    // No further improvement possible; the matching has maximum cardinality.
                    kind = Delta::Vertex;
                    delta = (*self.dualvar[..n].iter().min().unwrap()).max(0);
                }
                for v in 0..n {
                    match self.label[self.inblossom[v]] {
                        S => self.dualvar[v] -= delta,
                        T => self.dualvar[v] += delta,
                        _ => {}
                    }
                }
                for b in n..2 * n {
                    if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            S => self.dualvar[b] += delta,
                            T => self.dualvar[b] -= delta,
                            _ => {}
                        }
                    }
                }
                match kind {
                    Delta::Vertex | Delta::None => break,
                    Delta::Edge(k) => {
                        self.allowedge[k] = true;
                        let (mut i, j, _) = self.edges[k];
                        if self.label[self.inblossom[i]] == FREE {
                            i = j;
                        }
                        debug_assert_eq!(self.label[self.inblossom[i]], S);
                        self.queue.push(i);
                    }
                    Delta::Blossom(k) => {
                        self.allowedge[k] = true;
                        let (i, _, _) = self.edges[k];
                        debug_assert_eq!(self.label[self.inblossom[i]], S);
                        self.queue.push(i);
                    }
                    Delta::Expand(b) => self.expand_blossom(b, false),
                }
            }
            if !augmented {
                break;
            }
            for b in n..2 * n {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == S
                    && self.dualvar[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
        self.mate
            .iter()
            .map(|&m| if m == NONE { NONE } else { self.endpoint[m] })
            .collect()
    }
}

/// Maximum-weight matching of an undirected graph on vertices `0..n`.
///
/// Returns `mate[v]`, the partner of `v` or `None`. With `max_cardinality`,
/// only matchings of maximum cardinality are considered.
pub fn max_weight_matching(
    n: usize,
    edges: &[(usize, usize, i64)],
    max_cardinality: bool,
) -> Vec<Option<usize>> {
    if edges.is_empty() {
        return vec![None; n];
    }
    for &(i, j, _) in edges {
        assert!(i < n && j < n && i != j, "bad edge ({i}, {j})");
    }
    Matcher::new(n, edges, max_cardinality)
        .run()
        .into_iter()
        .map(|m| (m != NONE).then_some(m))
        .collect()
}

/// Minimum-weight perfect matching of the complete graph on `0..n` with
/// non-negative integer weights `weight(i, j)`. Returns pairs `(i, j)` with
/// `i < j`, sorted.
pub fn min_weight_perfect_matching(
    n: usize,
    weight: impl Fn(usize, usize) -> i64,
) -> Result<Vec<(usize, usize)>> {
    if n % 2 == 1 {
        return Err(Error::OddDefects(n));
    }
    match n {
        0 => return Ok(Vec::new()),
        2 => return Ok(vec![(0, 1)]),
        _ => {}
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    let mut max_w = 0;
    for i in 0..n {
        for j in i + 1..n {
            let w = weight(i, j);
            debug_assert!(w >= 0);
            max_w = max_w.max(w);
            edges.push((i, j, w));
        }
    }
    // Every perfect matching has n/2 edges, so maximising sum(C - w) over
    // maximum-cardinality matchings minimises sum(w).
    for e in edges.iter_mut() {
        e.2 = max_w + 1 - e.2;
    }
    let mate = max_weight_matching(n, &edges, true);
    let mut pairs = Vec::with_capacity(n / 2);
    for (i, m) in mate.iter().enumerate() {
        let j = m.expect("complete graph on an even vertex set has a perfect matching");
        if i < j {
            pairs.push((i, j));
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mates(n: usize, edges: &[(usize, usize, i64)], maxcard: bool) -> Vec<Option<usize>> {
        max_weight_matching(n, edges, maxcard)
    }

    // Reference cases for the primal-dual blossom algorithm.

    #[test]
    fn single_edge() {
        assert_eq!(mates(2, &[(0, 1, 1)], false), vec![Some(1), Some(0)]);
    }

    #[test]
    fn path_prefers_heavier() {
        assert_eq!(
            mates(4, &[(1, 2, 10), (2, 3, 11)], false),
            vec![None, None, Some(3), Some(2)]
        );
    }

    #[test]
    fn max_cardinality_changes_answer() {
        let e = [(1, 2, 5), (2, 3, 11), (3, 4, 5)];
        assert_eq!(
            mates(5, &e, false),
            vec![None, None, Some(3), Some(2), None]
        );
        assert_eq!(
            mates(5, &e, true),
            vec![None, Some(2), Some(1), Some(4), Some(3)]
        );
    }

    #[test]
    fn negative_weights() {
        let e = [(1, 2, 2), (1, 3, -2), (2, 3, 1), (2, 4, -1), (3, 4, -6)];
        assert_eq!(
            mates(5, &e, false),
            vec![None, Some(2), Some(1), None, None]
        );
        assert_eq!(
            mates(5, &e, true),
            vec![None, Some(3), Some(4), Some(1), Some(2)]
        );
    }

    #[test]
    fn s_blossom() {
        let e = [(1, 2, 8), (1, 3, 9), (2, 3, 10), (3, 4, 7)];
        assert_eq!(
            mates(5, &e, false),
            vec![None, Some(2), Some(1), Some(4), Some(3)]
        );
        let e = [
            (1, 2, 8),
            (1, 3, 9),
            (2, 3, 10),
            (3, 4, 7),
            (1, 6, 5),
            (4, 5, 6),
        ];
        assert_eq!(
            mates(7, &e, false),
            vec![None, Some(6), Some(3), Some(2), Some(5), Some(4), Some(1)]
        );
    }

    #[test]
    fn t_blossom() {
        let e = [
            (1, 2, 9),
            (1, 3, 8),
            (2, 3, 10),
            (1, 4, 5),
            (4, 5, 4),
            (1, 6, 3),
        ];
        assert_eq!(
            mates(7, &e, false),
            vec![None, Some(6), Some(3), Some(2), Some(5), Some(4), Some(1)]
        );
        let e = [
            (1, 2, 9),
            (1, 3, 8),
            (2, 3, 10),
            (1, 4, 5),
            (4, 5, 3),
            (1, 6, 4),
        ];
        assert_eq!(
            mates(7, &e, false),
            vec![None, Some(6), Some(3), Some(2), Some(5), Some(4), Some(1)]
        );
        let e = [
            (1, 2, 9),
            (1, 3, 8),
            (2, 3, 10),
            (1, 4, 5),
            (4, 5, 3),
            (3, 6, 4),
        ];
        assert_eq!(
            mates(7, &e, false),
            vec![None, Some(2), Some(1), Some(6), Some(5), Some(4), Some(3)]
        );
    }

    #[test]
    fn nested_s_blossom() {
        let e = [
            (1, 2, 9),
            (1, 3, 9),
            (2, 3, 10),
            (2, 4, 8),
            (3, 5, 8),
            (4, 5, 10),
            (5, 6, 6),
        ];
        assert_eq!(
            mates(7, &e, false),
            vec![None, Some(3), Some(4), Some(1), Some(2), Some(6), Some(5)]
        );
    }

    #[test]
    fn relabel_nested_blossom() {
        let e = [
            (1, 2, 10),
            (1, 7, 10),
            (2, 3, 12),
            (3, 4, 20),
            (3, 5, 20),
            (4, 5, 25),
            (5, 6, 10),
            (6, 7, 10),
            (7, 8, 8),
        ];
        assert_eq!(
            mates(9, &e, false),
            vec![
                None,
                Some(2),
                Some(1),
                Some(4),
                Some(3),
                Some(6),
                Some(5),
                Some(8),
                Some(7)
            ]
        );
    }

    #[test]
    fn nested_expand() {
        let e = [
            (1, 2, 8),
            (1, 3, 8),
            (2, 3, 10),
            (2, 4, 12),
            (3, 5, 12),
            (4, 5, 14),
            (4, 6, 12),
            (5, 7, 12),
            (6, 7, 14),
            (7, 8, 12),
        ];
        assert_eq!(
            mates(9, &e, false),
            vec![
                None,
                Some(2),
                Some(1),
                Some(5),
                Some(6),
                Some(3),
                Some(4),
                Some(8),
                Some(7)
            ]
        );
    }

    #[test]
    fn s_blossom_relabel_expand() {
        let e = [
            (1, 2, 23),
            (1, 5, 22),
            (1, 6, 15),
            (2, 3, 25),
            (3, 4, 22),
            (4, 5, 25),
            (4, 8, 14),
            (5, 7, 13),
        ];
        assert_eq!(
            mates(9, &e, false),
            vec![
                None,
                Some(6),
                Some(3),
                Some(2),
                Some(8),
                Some(7),
                Some(1),
                Some(5),
                Some(4)
            ]
        );
    }

    #[test]
    fn nested_s_blossom_relabel_expand() {
        let e = [
            (1, 2, 19),
            (1, 3, 20),
            (1, 8, 8),
            (2, 3, 25),
            (2, 4, 18),
            (3, 5, 18),
            (4, 5, 13),
            (4, 7, 7),
            (5, 6, 7),
        ];
        assert_eq!(
            mates(9, &e, false),
            vec![
                None,
                Some(8),
                Some(3),
                Some(2),
                Some(7),
                Some(6),
                Some(5),
                Some(4),
                Some(1)
            ]
        );
    }

    #[test]
    fn blossom_with_least_slack_edge_into_expanded_t() {
        let e = [
            (1, 2, 45),
            (1, 5, 45),
            (2, 3, 50),
            (3, 4, 45),
            (4, 5, 50),
            (1, 6, 30),
            (3, 9, 35),
            (4, 8, 35),
            (5, 7, 26),
            (9, 10, 5),
        ];
        assert_eq!(
            mates(11, &e, false),
            vec![
                None,
                Some(6),
                Some(3),
                Some(2),
                Some(8),
                Some(7),
                Some(1),
                Some(5),
                Some(4),
                Some(10),
                Some(9)
            ]
        );
        let e = [
            (1, 2, 45),
            (1, 5, 45),
            (2, 3, 50),
            (3, 4, 45),
            (4, 5, 50),
            (1, 6, 30),
            (3, 9, 35),
            (4, 8, 26),
            (5, 7, 40),
            (9, 10, 5),
        ];
        assert_eq!(
            mates(11, &e, false),
            vec![
                None,
                Some(6),
                Some(3),
                Some(2),
                Some(8),
                Some(7),
                Some(1),
                Some(5),
                Some(4),
                Some(10),
                Some(9)
            ]
        );
        let e = [
            (1, 2, 45),
            (1, 5, 45),
            (2, 3, 50),
            (3, 4, 45),
            (4, 5, 50),
            (1, 6, 30),
            (3, 9, 35),
            (4, 8, 28),
            (5, 7, 26),
            (9, 10, 5),
        ];
        assert_eq!(
            mates(11, &e, false),
            vec![
                None,
                Some(6),
                Some(3),
                Some(2),
                Some(8),
                Some(7),
                Some(1),
                Some(5),
                Some(4),
                Some(10),
                Some(9)
            ]
        );
    }

    #[test]
    fn nested_blossom_expand_with_alternate_base() {
        let e = [
            (1, 2, 45),
            (1, 7, 45),
            (2, 3, 50),
            (3, 4, 45),
            (4, 5, 95),
            (4, 6, 94),
            (5, 6, 94),
            (6, 7, 50),
            (1, 8, 30),
            (3, 11, 35),
            (5, 9, 36),
            (7, 10, 26),
            (11, 12, 5),
        ];
        assert_eq!(
            mates(13, &e, false),
            vec![
                None,
                Some(8),
                Some(3),
                Some(2),
                Some(6),
                Some(9),
                Some(4),
                Some(10),
                Some(1),
                Some(5),
                Some(7),
                Some(12),
                Some(11)
            ]
        );
    }

    #[test]
    fn perfect_matching_small() {
        assert!(min_weight_perfect_matching(0, |_, _| 0).unwrap().is_empty());
        assert!(matches!(
            min_weight_perfect_matching(3, |_, _| 0),
            Err(Error::OddDefects(3))
        ));
        // Points on a line: 0, 1, 10, 11 -> pair neighbours.
        let pos = [0i64, 1, 10, 11];
        let pairs = min_weight_perfect_matching(4, |i, j| (pos[i] - pos[j]).abs()).unwrap();
        assert_eq!(pairs, vec![(0, 1), (2, 3)]);
    }
}
