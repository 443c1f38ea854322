//! Independence numbers of uniform hypergraphs and the Turán-type lower
//! bound on the number of edges forced by a small independence number.
//!
//! The bound is reported under two readings side by side:
//! `C(|X|,s)/C(q,s)` with `q = α(H)` as literally stated, and
//! `C(|X|,s)/C(q+1,s)`, the classical count for hypergraphs in which every
//! `(q+1)`-set spans an edge. Small cases separate them.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::{binomial_big, RationalPair};
use crate::error::{Error, Result};
use crate::setfam::{full_mask, Hypergraph, KSet, KSubsetMasks, MaskBits};

/// Ground-set cap for the exhaustive edge-minimization oracle.
pub const MAX_ORACLE_GROUND: u32 = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Independence {
    pub alpha: u32,
    pub witness: KSet,
}

/// Exact `α(H)` by include/exclude branch and bound over the ground set,
/// lowest vertex first, including before excluding.
pub fn independence_number(h: &Hypergraph) -> Independence {
    let vertices: Vec<u32> = MaskBits(h.ground()).collect();
    // edges indexed by their highest vertex position: an edge can only be
    // completed when its last vertex is added
    let mut closing: Vec<Vec<u64>> = vec![Vec::new(); vertices.len()];
    for e in h.edges().members() {
        let top = 63 - e.mask().leading_zeros();
        let pos = vertices.binary_search(&top).expect("edge inside ground");
        closing[pos].push(e.mask());
    }
    let mut search = IndependentSearch {
        vertices: &vertices,
        closing: &closing,
        best: 0,
        best_size: 0,
    };
    search.run(0, 0, 0);
    Independence {
        alpha: search.best_size,
        witness: KSet::raw(h.n(), search.best),
    }
}

struct IndependentSearch<'a> {
    vertices: &'a [u32],
    closing: &'a [Vec<u64>],
    best: u64,
    best_size: u32,
}

impl IndependentSearch<'_> {
    fn run(&mut self, pos: usize, current: u64, size: u32) {
        if size > self.best_size {
            self.best = current;
            self.best_size = size;
        }
        if pos == self.vertices.len() {
            return;
        }
        let remaining = (self.vertices.len() - pos) as u32;
        if size + remaining <= self.best_size {
            return;
        }
        let with = current | 1 << self.vertices[pos];
        if self.closing[pos].iter().all(|&e| e & !with != 0) {
            self.run(pos + 1, with, size + 1);
        }
        self.run(pos + 1, current, size);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub alpha: u32,
    pub witness: KSet,
    pub edge_count: usize,
    pub ground_size: u32,
    pub s: u32,
    /// `C(|X|,s)/C(q,s)` with `q = α`; absent when undefined.
    pub bound_as_stated: Option<RationalPair>,
    /// `(|X|/q)^s`.
    pub bound_weak: Option<f64>,
    /// `C(|X|,s)/C(q+1,s)`.
    pub bound_q_plus_one: Option<RationalPair>,
    pub meets_as_stated: Option<bool>,
    pub meets_weak: Option<bool>,
    pub meets_q_plus_one: Option<bool>,
    pub degenerate: Option<String>,
}

fn ratio(num: u64, num_r: u64, den: u64, den_r: u64) -> Option<BigRational> {
    let d = binomial_big(den, den_r);
    if d == 0u32.into() {
        return None;
    }
    Some(BigRational::new(
        BigInt::from(binomial_big(num, num_r)),
        BigInt::from(d),
    ))
}

pub fn kns_bound_report(h: &Hypergraph) -> IndependenceReport {
    let ind = independence_number(h);
    let x = h.ground_size() as u64;
    let s = h.uniformity() as u64;
    let q = ind.alpha as u64;
    let edges = h.edges().len();
    let edge_ratio = BigRational::from_integer(BigInt::from(edges));

    let mut report = IndependenceReport {
        alpha: ind.alpha,
        witness: ind.witness,
        edge_count: edges,
        ground_size: x as u32,
        s: s as u32,
        bound_as_stated: None,
        bound_weak: None,
        bound_q_plus_one: None,
        meets_as_stated: None,
        meets_weak: None,
        meets_q_plus_one: None,
        degenerate: None,
    };
    if edges == 0 {
        report.degenerate = Some("edgeless hypergraph".into());
        return report;
    }
    if q < s {
        report.degenerate = Some(format!("alpha = {q} < s = {s}"));
        return report;
    }
    let stated = ratio(x, s, q, s).expect("q >= s");
    let weak = (x as f64 / q as f64).powi(s as i32);
    let plus = ratio(x, s, q + 1, s).expect("q + 1 > s");
    report.meets_as_stated = Some(edge_ratio >= stated);
    report.meets_weak = Some(edges as f64 >= weak);
    report.meets_q_plus_one = Some(edge_ratio >= plus);
    report.bound_as_stated = Some((&stated).into());
    report.bound_weak = Some(weak);
    report.bound_q_plus_one = Some((&plus).into());
    report
}

/// Exact minimum number of edges of an `s`-uniform hypergraph on `[N]`
/// in which every `(q+1)`-set contains an edge, i.e. `α(H) ≤ q`.
///
/// Set-cover branch and bound: the first uncovered `(q+1)`-set must receive
/// one of its own s-subsets. At the root all those choices are equivalent
/// under permutations of the ground set, so only `{1..s}` is tried.
pub fn min_edges_for_alpha(n: u32, s: u32, q: u32) -> Result<u32> {
    if n > MAX_ORACLE_GROUND {
        return Err(Error::param(format!(
            "N = {n} exceeds the exhaustive-search cap {MAX_ORACLE_GROUND}"
        )));
    }
    if s == 0 || s > n {
        return Err(Error::param(format!(
            "need 1 <= s <= N, got s = {s}, N = {n}"
        )));
    }
    if q + 1 < s {
        return Err(Error::param(format!(
            "alpha <= {q} is impossible for {s}-uniform edges"
        )));
    }
    if q >= n {
        return Ok(0);
    }

    let targets: Vec<u64> = KSubsetMasks::new(n, q + 1).collect();
    let edges: Vec<u64> = KSubsetMasks::new(n, s).collect();
    debug_assert!(targets.len() <= 64 && edges.len() <= 64);
    let covers: Vec<u64> = edges
        .iter()
        .map(|&e| {
            targets
                .iter()
                .enumerate()
                .filter(|(_, &t)| e & !t == 0)
                .fold(0u64, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    // edges inside each target
    let inside: Vec<u64> = targets
        .iter()
        .map(|&t| {
            edges
                .iter()
                .enumerate()
                .filter(|(_, &e)| e & !t == 0)
                .fold(0u64, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    let all = full_mask(targets.len() as u32);
    let per_edge = covers[0].count_ones();

    let mut search = CoverSearch {
        covers: &covers,
        inside: &inside,
        all,
        per_edge,
        best: edges.len() as u32,
    };
    // root symmetry: first target is {1..q+1}, use edge {1..s} (index 0)
    search.run(covers[0], 1 << 0, 1);
    Ok(search.best)
}

struct CoverSearch<'a> {
    covers: &'a [u64],
    inside: &'a [u64],
    all: u64,
    per_edge: u32,
    best: u32,
}

impl CoverSearch<'_> {
    fn run(&mut self, covered: u64, forbidden: u64, used: u32) {
        if covered == self.all {
            self.best = self.best.min(used);
            return;
        }
        let uncovered = (self.all & !covered).count_ones();
        let lower = used + uncovered.div_ceil(self.per_edge);
        if lower >= self.best {
            return;
        }
        let target = (self.all & !covered).trailing_zeros() as usize;
        let mut options = self.inside[target] & !forbidden;
        let mut banned = forbidden;
        while options != 0 {
            let e = options.trailing_zeros() as usize;
            options &= options - 1;
            self.run(covered | self.covers[e], banned | 1 << e, used + 1);
            // later siblings exclude e, so each edge set is visited once
            banned |= 1 << e;
        }
    }
}

/// `C(N,s)/C(q+1,s)` as an exact rational.
pub fn turan_count_bound(n: u32, s: u32, q: u32) -> Option<BigRational> {
    ratio(n as u64, s as u64, q as u64 + 1, s as u64)
}
