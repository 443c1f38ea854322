//! Machinery of the `Ω(n log n)` lower bound for small `k`.
//!
//! Random lists of size `u/2` from `u ≈ n log₂ n / s²` colors are assigned
//! to the vertices of `KG(n,k)`. Every partition into `u` independent sets
//! lies in a tuple of type I / type II covers. For a fixed tuple, elements of
//! low type-I degree form a set `W`, an independent set `Y ⊆ W` of the
//! type-II hypergraph is found, and each k-subset of `Y` fails to be colored
//! with probability at least `C(u−z, u/2)/C(u, u/2)`.
//!
//! The statement is asymptotic: this module evaluates each inequality of the
//! chain numerically and checks the finite machinery exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binomial_big, binomial_u128};
use crate::coloring::{find_list_coloring, Color, ListAssignment};
use crate::cover::{CoverKind, CoverTuple};
use crate::error::{Error, Result};
use crate::random_map::trial_rng;
use crate::setfam::{build_kneser, GroundParams, Hypergraph, KSet, KneserGraph, SetFamily};

/// Vertex cap for Monte Carlo runs of the exact solver.
pub const MAX_MONTE_CARLO_VERTICES: u128 = 15;

/// `ε = 1/(2s²)`.
pub fn default_epsilon(s: u32) -> f64 {
    1.0 / (2.0 * (s as f64).powi(2))
}

fn exact_epsilon(epsilon: f64) -> Result<BigRational> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param(format!("epsilon = {epsilon} not in (0, 1)")));
    }
    BigRational::from_f64(epsilon).ok_or_else(|| Error::param("epsilon not finite"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdversaryParams {
    pub n: u128,
    pub k: u64,
    pub s: u32,
    pub epsilon: f64,
    pub u: u128,
}

impl AdversaryParams {
    /// Default `ε` and `u = color_budget(n, s)`.
    pub fn new(n: u128, k: u64, s: u32) -> Result<Self> {
        let u = color_budget(n, k, s)?;
        AdversaryParams::with(n, k, s, default_epsilon(s), u)
    }

    pub fn with(n: u128, k: u64, s: u32, epsilon: f64, u: u128) -> Result<Self> {
        if s < 3 {
            return Err(Error::param(format!("s must be at least 3, got {s}")));
        }
        if k == 0 || (k as u128) * 2 > n {
            return Err(Error::param(format!(
                "need n >= 2k > 0, got n = {n}, k = {k}"
            )));
        }
        exact_epsilon(epsilon)?;
        if u < 2 || !u.is_multiple_of(2) {
            return Err(Error::param(format!("u = {u} must be even and at least 2")));
        }
        Ok(AdversaryParams {
            n,
            k,
            s,
            epsilon,
            u,
        })
    }
}

/// `n · log₂ n / s²` as a real; exact for powers of two.
fn budget_real(n: u128, s: u32) -> f64 {
    n as f64 * (n as f64).log2() / (s as f64).powi(2)
}

/// Largest even integer not above `n log₂ n / s²`.
pub fn color_budget(n: u128, _k: u64, s: u32) -> Result<u128> {
    if n < 2 {
        return Err(Error::param("color budget needs n >= 2"));
    }
    if s < 2 {
        return Err(Error::param("color budget needs s >= 2"));
    }
    let s2 = (s as u128).pow(2);
    let raw = if n.is_power_of_two() {
        n.checked_mul(n.trailing_zeros() as u128)
            .map(|v| v / s2)
            .ok_or_else(|| Error::param("n log n overflows"))?
    } else {
        budget_real(n, s).floor() as u128
    };
    let u = raw - raw % 2;
    if u < 2 {
        return Err(Error::param(format!(
            "n log2 n / s^2 = {:.3} leaves fewer than 2 colors",
            budget_real(n, s)
        )));
    }
    Ok(u)
}

/// `(1/(2s²)) n log₂ n`.
pub fn choice_lower_bound(n: f64, s: u32) -> f64 {
    n * n.log2() / (2.0 * (s as f64).powi(2))
}

/// `k ≤ n^{1/2 − 1/s}` with `s ≥ 3`.
pub fn theorem_regime_applies(n: f64, k: f64, s: u32) -> bool {
    s >= 3 && k <= n.powf(0.5 - 1.0 / s as f64)
}

/// Independent uniform `(u/2)`-subsets of `{0, …, u−1}`, one per vertex.
pub fn sample_adversary_lists(
    graph: &KneserGraph,
    u: usize,
    rng_seed: u64,
) -> Result<ListAssignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    sample_adversary_lists_with(graph.vertex_count(), u, &mut rng)
}

pub(crate) fn sample_adversary_lists_with<R: rand::Rng>(
    vertices: usize,
    u: usize,
    rng: &mut R,
) -> Result<ListAssignment> {
    if u < 2 || !u.is_multiple_of(2) {
        return Err(Error::param(format!("u = {u} must be even and at least 2")));
    }
    let lists = (0..vertices)
        .map(|_| {
            index::sample(rng, u, u / 2)
                .into_iter()
                .map(|c| Color(c as u64))
                .collect()
        })
        .collect();
    ListAssignment::new(lists, Some(u / 2))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeReport {
    /// `d[ℓ]` = number of type-I parts whose blocking set contains ℓ (0-based).
    pub d: Vec<u64>,
    pub w: KSet,
    /// `(1−ε)^{−1}(s−1)u/n`.
    pub threshold: f64,
}

/// Type-I degrees of every element and the low-degree set `W`.
pub fn degree_vector_and_w(tuple: &CoverTuple, n: u32, epsilon: f64) -> Result<DegreeReport> {
    let eps = exact_epsilon(epsilon)?;
    let Some(s) = tuple.parts.first().map(|p| p.s) else {
        return Err(Error::param("cover tuple is empty"));
    };
    let u = tuple.len() as u64;
    let mut d = vec![0u64; n as usize];
    for (j, part) in tuple.parts.iter().enumerate() {
        if part.s != s {
            return Err(Error::validation(format!(
                "part {j} has s = {}, expected {s}",
                part.s
            )));
        }
        if let CoverKind::TypeI { blocking } = &part.kind {
            if blocking.len() != s - 1 {
                return Err(Error::validation(format!(
                    "type I part {j} has |I| = {}, expected s - 1 = {}",
                    blocking.len(),
                    s - 1
                )));
            }
            if blocking.ground() != n {
                return Err(Error::validation(format!(
                    "part {j} lives on a different ground set"
                )));
            }
            for e in blocking.elements() {
                d[e as usize] += 1;
            }
        }
    }
    let total: u64 = d.iter().sum();
    if total > (s as u64 - 1) * u {
        return Err(Error::invariant(format!(
            "sum of degrees {total} exceeds (s-1)u = {}",
            (s as u64 - 1) * u
        )));
    }
    // d_i <= (s-1)u / ((1-eps) n)  <=>  d_i (1-eps) n <= (s-1)u
    let one_minus = BigRational::one() - &eps;
    let rhs = BigRational::from_integer(BigInt::from((s as u64 - 1) * u));
    let nn = BigRational::from_integer(BigInt::from(n));
    let mut w = 0u64;
    for (i, &di) in d.iter().enumerate() {
        let lhs = BigRational::from_integer(BigInt::from(di)) * &one_minus * &nn;
        if lhs <= rhs {
            w |= 1 << i;
        }
    }
    let need = (eps * nn).ceil();
    if BigRational::from_integer(BigInt::from(w.count_ones())) < need {
        return Err(Error::invariant(format!(
            "|W| = {} below ceil(eps n) = {need}",
            w.count_ones()
        )));
    }
    let threshold = (s as f64 - 1.0) * u as f64 / ((1.0 - epsilon) * n as f64);
    Ok(DegreeReport {
        d,
        w: KSet::raw(n, w),
        threshold,
    })
}

/// All s-sets of type-II parts that lie inside `w`.
pub fn type_ii_hypergraph(tuple: &CoverTuple, w: &KSet, k: u32) -> Result<Hypergraph> {
    let n = w.ground();
    let Some(s) = tuple.parts.first().map(|p| p.s) else {
        return Hypergraph::new(n, w.mask(), 2, SetFamily::empty(n, Some(2)));
    };
    let mut sets: Vec<KSet> = tuple
        .parts
        .iter()
        .filter_map(|p| match &p.kind {
            CoverKind::TypeII { family } => Some(family.members().iter()),
            CoverKind::TypeI { .. } => None,
        })
        .flatten()
        .filter(|g| g.is_subset(w))
        .copied()
        .collect();
    sets.sort_unstable();
    sets.dedup();
    let cap = (k as u128).pow(s) * tuple.len() as u128;
    if sets.len() as u128 > cap {
        return Err(Error::invariant(format!(
            "hypergraph has {} edges, more than k^s u = {cap}",
            sets.len()
        )));
    }
    Hypergraph::new(n, w.mask(), s, SetFamily::new(n, sets, Some(s))?)
}

/// `C(u − z, u/2) / C(u, u/2)`: a uniform `(u/2)`-subset of `u` colors
/// avoids a fixed `z`-set.
pub fn uncolorable_prob(u: u64, z: u64) -> Result<BigRational> {
    if !u.is_multiple_of(2) {
        return Err(Error::param(format!("u = {u} must be even")));
    }
    if z > u {
        return Ok(BigRational::zero());
    }
    let num = binomial_big(u - z, u / 2);
    let den = binomial_big(u, u / 2);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// `∏_{j<z} (u/2 − j)/(u − j)`; zero once a factor vanishes.
pub fn uncolorable_prob_product(u: u64, z: u64) -> Result<BigRational> {
    if !u.is_multiple_of(2) {
        return Err(Error::param(format!("u = {u} must be even")));
    }
    let half = u / 2;
    let mut acc = BigRational::one();
    for j in 0..z {
        if j >= half {
            return Ok(BigRational::zero());
        }
        acc *= BigRational::new(BigInt::from(half - j), BigInt::from(u - j));
    }
    Ok(acc)
}

/// Float evaluation of the product form for large `u`.
fn uncolorable_prob_f64(u: f64, z: u64) -> f64 {
    let half = u / 2.0;
    (0..z)
        .map(|j| ((half - j as f64) / (u - j as f64)).max(0.0))
        .product()
}

/// Exponent in `P[A_K] ≤ exp(−n^e)` for the two ranges of `k`.
pub fn regime_exponent(k: u64, s: u32) -> Option<f64> {
    match k {
        3..=100 if s == 3 => Some(1.2),
        101.. => Some(k as f64 / (s as f64).powi(3)),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnionBound {
    /// `s·k^s·u·ln n − n^e`, the log of the final union bound.
    pub log_lhs: f64,
    pub verdict: bool,
}

/// Reals so the bound can be evaluated far beyond machine integers.
pub fn failure_union_bound(n: f64, k: f64, s: u32, u: f64, regime_exponent: f64) -> UnionBound {
    let log_lhs = s as f64 * k.powi(s as i32) * u * n.ln() - n.powf(regime_exponent);
    UnionBound {
        log_lhs,
        verdict: log_lhs < 0.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentChecks {
    /// `(1−ε)^{−1}(s−1)/s² ≤ 1/(s+1)`, exact.
    pub epsilon_constraint: bool,
    /// `z ≤ √n`.
    pub z_below_sqrt_n: bool,
    /// `C(u−⌈z⌉,u/2)/C(u,u/2) ≥ 2^{−⌈z⌉}(1 − ⌈z⌉/(u−⌈z⌉))^{⌈z⌉}`.
    pub hypergeometric_vs_power: bool,
    /// `2^{−z} ≥ n^{−k/(s+1)}`.
    pub p_above_target: bool,
    /// `k ≤ n^{1/2−1/s}`.
    pub theorem_regime: bool,
    /// `p (t/k)^k ≥ n^e`, when `k` falls in one of the two ranges.
    pub regime_chain: Option<bool>,
    /// Final union bound below 1.
    pub union_bound_closes: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofQuantities {
    pub n: f64,
    pub k: u64,
    pub s: u32,
    pub epsilon: f64,
    pub u: f64,
    /// `(1−ε)^{−1} k (s−1) u / n`.
    pub z: f64,
    pub z_ceil: u64,
    /// `εn / (k u^{1/s})`.
    pub t: f64,
    pub t_floor: f64,
    /// `(1−ε)^{−1}(s−1)u/n`.
    pub d_bound: f64,
    /// `2^{−z}`.
    pub p_lower: f64,
    /// Product form of the hypergeometric ratio at `⌈z⌉`.
    pub p_hypergeometric: f64,
    /// `ln(p (t/k)^k)`.
    pub log_chain_lhs: f64,
    pub regime_exponent: Option<f64>,
    pub log_union_bound: Option<f64>,
    pub lower_bound_value: f64,
    pub exponent_checks: ExponentChecks,
}

pub fn proof_quantities(params: &AdversaryParams) -> Result<ProofQuantities> {
    let eps = exact_epsilon(params.epsilon)?;
    let (n, k, s, epsilon) = (params.n as f64, params.k as f64, params.s, params.epsilon);
    let u = params.u as f64;
    let sf = s as f64;
    let amplify = 1.0 / (1.0 - epsilon);
    let d_bound = amplify * (sf - 1.0) * u / n;
    let z = k * d_bound;
    let z_ceil = z.ceil() as u64;
    let t = epsilon * n / (k * u.powf(1.0 / sf));
    let p_lower = (-z * std::f64::consts::LN_2).exp();
    let p_hypergeometric = uncolorable_prob_f64(u, z_ceil);

    let lhs = BigRational::from_integer(BigInt::from(s - 1))
        / (BigRational::one() - eps)
        / BigRational::from_integer(BigInt::from(s * s));
    let epsilon_constraint = lhs <= BigRational::new(BigInt::one(), BigInt::from(s + 1));

    let zc = z_ceil as f64;
    let power_form = if zc < u {
        (-zc * std::f64::consts::LN_2).exp() * (1.0 - zc / (u - zc)).max(0.0).powf(zc)
    } else {
        0.0
    };
    // relative slack for accumulated rounding in the float product
    let hypergeometric_vs_power = p_hypergeometric >= power_form * (1.0 - 1e-9);
    let log_target = -k / (sf + 1.0) * n.ln();
    let p_above_target = -z * std::f64::consts::LN_2 >= log_target;

    let log_chain_lhs = -z * std::f64::consts::LN_2 + k * (t / k).ln();
    let exponent = regime_exponent(params.k, s);
    let union = exponent.map(|e| failure_union_bound(n, k, s, u, e));

    Ok(ProofQuantities {
        n,
        k: params.k,
        s,
        epsilon,
        u,
        z,
        z_ceil,
        t,
        t_floor: t.floor(),
        d_bound,
        p_lower,
        p_hypergeometric,
        log_chain_lhs,
        regime_exponent: exponent,
        log_union_bound: union.map(|b| b.log_lhs),
        lower_bound_value: choice_lower_bound(n, s),
        exponent_checks: ExponentChecks {
            epsilon_constraint,
            z_below_sqrt_n: z <= n.sqrt(),
            hypergeometric_vs_power,
            p_above_target,
            theorem_regime: theorem_regime_applies(n, k, s),
            regime_chain: exponent.map(|e| log_chain_lhs >= e * n.ln()),
            union_bound_closes: union.map(|b| b.verdict),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub colorable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub n: u32,
    pub k: u32,
    pub u: u64,
    pub trials: u64,
    pub colorable: u64,
    pub colorable_fraction: f64,
    pub seed: u64,
    pub per_trial: Vec<TrialRecord>,
}

/// Empirical probability that random `(u/2)`-lists on `KG(n,k)` admit a
/// proper list coloring, decided exactly per trial.
pub fn monte_carlo_choosability(
    n: u32,
    k: u32,
    u: u64,
    trials: u64,
    rng_seed: u64,
) -> Result<MonteCarloReport> {
    let params = GroundParams::new(n, k);
    params.check_kneser()?;
    let count = binomial_u128(n as u64, k as u64);
    if count > MAX_MONTE_CARLO_VERTICES {
        return Err(Error::param(format!(
            "KG({n},{k}) has {count} vertices, over the exact-solver cap {MAX_MONTE_CARLO_VERTICES}"
        )));
    }
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    let graph = build_kneser(params)?;
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialRecord> {
            let mut rng = trial_rng(rng_seed, trial);
            let lists = sample_adversary_lists_with(graph.vertex_count(), u as usize, &mut rng)?;
            let colorable = find_list_coloring(&graph, &lists)?.is_some();
            Ok(TrialRecord { trial, colorable })
        })
        .collect::<Result<Vec<_>>>()?;
    let colorable = per_trial.iter().filter(|r| r.colorable).count() as u64;
    Ok(MonteCarloReport {
        n,
        k,
        u,
        trials,
        colorable,
        colorable_fraction: colorable as f64 / trials as f64,
        seed: rng_seed,
        per_trial,
    })
}
