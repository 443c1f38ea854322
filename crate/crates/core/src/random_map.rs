//! List coloring through a random map from colors to ground elements.
//!
//! A map `f: L → [n]` colors vertex `v` with a color `γ ∈ S(v)` whose image
//! lies in `v`. Two vertices sharing `γ` both contain `f(γ)`, so they are not
//! adjacent in the Kneser graph: every total induced coloring is proper.

use std::collections::BTreeMap;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::binomial_u128;
use crate::coloring::{is_proper, respects_lists, Color, Coloring, ListAssignment};
use crate::error::{Error, Result};
use crate::setfam::{GroundParams, KneserGraph};

pub const DEFAULT_MAX_ITERS: u64 = 1000;

/// Deterministic RNG for trial `trial` of a run seeded with `seed`.
pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Total map from a color pool to 0-based ground elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorMap {
    n: u32,
    images: BTreeMap<Color, u32>,
}

impl ColorMap {
    pub fn new(n: u32, images: BTreeMap<Color, u32>) -> Result<Self> {
        if let Some((c, e)) = images.iter().find(|(_, &e)| e >= n) {
            return Err(Error::validation(format!(
                "color {c:?} maps to {e}, outside [n]"
            )));
        }
        Ok(ColorMap { n, images })
    }

    /// 0-based image of `color`.
    pub fn image(&self, color: Color) -> Option<u32> {
        self.images.get(&color).copied()
    }

    pub fn ground(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

pub fn sample_color_map(pool: &[Color], n: u32, rng_seed: u64) -> Result<ColorMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    sample_color_map_with(pool, n, &mut rng)
}

pub fn sample_color_map_with<R: Rng>(pool: &[Color], n: u32, rng: &mut R) -> Result<ColorMap> {
    if pool.is_empty() {
        return Err(Error::param("color pool is empty"));
    }
    if n == 0 {
        return Err(Error::param("ground set is empty"));
    }
    let images = pool.iter().map(|&c| (c, rng.gen_range(0..n))).collect();
    Ok(ColorMap { n, images })
}

/// Colors each vertex with the smallest listed color mapped inside it.
pub fn induced_coloring(
    graph: &KneserGraph,
    lists: &ListAssignment,
    map: &ColorMap,
) -> Result<Coloring> {
    if lists.len() != graph.vertex_count() {
        return Err(Error::validation("lists must cover every vertex"));
    }
    let mut assignment = Vec::with_capacity(graph.vertex_count());
    for (v, set) in graph.vertices.iter().enumerate() {
        let mut pick = None;
        for &c in lists.list(v) {
            let e = map
                .image(c)
                .ok_or_else(|| Error::validation(format!("color {c:?} missing from the map")))?;
            if set.contains(e) {
                pick = Some(c);
                break;
            }
        }
        assignment.push(pick);
    }
    Ok(Coloring { assignment })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LasVegasOutcome {
    pub coloring: Option<Coloring>,
    pub iterations: u64,
}

pub fn las_vegas_list_coloring(
    graph: &KneserGraph,
    lists: &ListAssignment,
    max_iters: u64,
    rng_seed: u64,
) -> Result<LasVegasOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    las_vegas_with(graph, lists, max_iters, &mut rng)
}

pub(crate) fn las_vegas_with<R: Rng>(
    graph: &KneserGraph,
    lists: &ListAssignment,
    max_iters: u64,
    rng: &mut R,
) -> Result<LasVegasOutcome> {
    if max_iters == 0 {
        return Err(Error::param("max_iters must be at least 1"));
    }
    if lists.len() != graph.vertex_count() {
        return Err(Error::validation("lists must cover every vertex"));
    }
    if lists.lists().iter().any(Vec::is_empty) {
        return Ok(LasVegasOutcome {
            coloring: None,
            iterations: 0,
        });
    }
    let pool = lists.pool();
    for iter in 1..=max_iters {
        let map = sample_color_map_with(&pool, graph.params.n, rng)?;
        let coloring = induced_coloring(graph, lists, &map)?;
        if coloring.is_total() {
            if !is_proper(graph, &coloring)? || !respects_lists(&coloring, lists) {
                return Err(Error::invariant(
                    "induced total coloring is not a proper list coloring",
                ));
            }
            return Ok(LasVegasOutcome {
                coloring: Some(coloring),
                iterations: iter,
            });
        }
    }
    Ok(LasVegasOutcome {
        coloring: None,
        iterations: max_iters,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FailureBounds {
    /// `(1 − k/n)^m`, the chance a fixed vertex stays uncolored.
    pub per_vertex: f64,
    /// `C(n,k) · e^{−mk/n}`.
    pub union: f64,
}

pub fn failure_prob_bounds(n: u32, k: u32, m: u64) -> Result<FailureBounds> {
    if k == 0 || k > n {
        return Err(Error::param(format!(
            "need 1 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    let ratio = k as f64 / n as f64;
    let per_vertex = (1.0 - ratio).powf(m as f64);
    let vertices = binomial_u128(n as u64, k as u64) as f64;
    let union = (vertices.ln() - m as f64 * ratio).exp();
    Ok(FailureBounds { per_vertex, union })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpperBounds {
    /// `n ln(n/k) + n`.
    pub paper_bound: f64,
    /// `(n/k)(ln(n/k) + 1)`.
    pub sharp_bound: f64,
}

pub fn choice_upper_bound(n: u32, k: u32) -> Result<UpperBounds> {
    GroundParams::new(n, k).check_kneser()?;
    let (nf, kf) = (n as f64, k as f64);
    let paper_bound = nf * (nf / kf).ln() + nf;
    let sharp_bound = (nf / kf) * ((nf / kf).ln() + 1.0);
    // equal as reals when k = 1
    if sharp_bound > paper_bound * (1.0 + 1e-12) {
        return Err(Error::invariant("sharp threshold exceeds the stated bound"));
    }
    Ok(UpperBounds {
        paper_bound,
        sharp_bound,
    })
}

/// Smallest list size strictly above the sharp threshold, plus one.
pub fn trial_list_size(n: u32, k: u32) -> Result<u64> {
    Ok(choice_upper_bound(n, k)?.sharp_bound.ceil() as u64 + 1)
}

/// Uniform `m`-lists drawn without replacement from a pool of `pool_size` colors.
pub fn sample_pool_lists<R: Rng>(
    vertices: usize,
    m: usize,
    pool_size: usize,
    rng: &mut R,
) -> Result<ListAssignment> {
    if m > pool_size {
        return Err(Error::param(format!(
            "cannot draw {m} colors from a pool of {pool_size}"
        )));
    }
    let lists = (0..vertices)
        .map(|_| {
            index::sample(rng, pool_size, m)
                .into_iter()
                .map(|c| Color(c as u64))
                .collect()
        })
        .collect();
    ListAssignment::new(lists, Some(m))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub n: u32,
    pub k: u32,
    pub m: u64,
    pub trials: u64,
    pub successes: u64,
    pub mean_iters: f64,
    pub union_bound: f64,
    pub per_vertex_bound: f64,
    /// Trials whose first sampled map left a vertex uncolored.
    pub single_draw_failures: u64,
    pub seed: u64,
}

impl TrialReport {
    pub fn single_draw_failure_rate(&self) -> f64 {
        self.single_draw_failures as f64 / self.trials as f64
    }
}

/// Runs independent trials, each with fresh lists (pool `2m·C(n,k)`, or
/// `pool_size` if given) and its own RNG stream.
pub fn run_trials(
    params: GroundParams,
    m: u64,
    trials: u64,
    max_iters: u64,
    seed: u64,
    pool_size: Option<usize>,
) -> Result<TrialReport> {
    let graph = crate::setfam::build_kneser(params)?;
    if m == 0 {
        return Err(Error::param("list size m must be at least 1"));
    }
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    let bounds = failure_prob_bounds(params.n, params.k, m)?;
    let pool = pool_size.unwrap_or(2 * m as usize * graph.vertex_count());
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(bool, u64)> {
            let mut rng = trial_rng(seed, t);
            let lists = sample_pool_lists(graph.vertex_count(), m as usize, pool, &mut rng)?;
            let out = las_vegas_with(&graph, &lists, max_iters, &mut rng)?;
            Ok((out.coloring.is_some(), out.iterations))
        })
        .collect::<Result<Vec<_>>>()?;
    let successes = outcomes.iter().filter(|o| o.0).count() as u64;
    let single_draw_failures = outcomes.iter().filter(|o| !(o.0 && o.1 == 1)).count() as u64;
    let mean_iters = outcomes.iter().map(|o| o.1 as f64).sum::<f64>() / trials as f64;
    Ok(TrialReport {
        n: params.n,
        k: params.k,
        m,
        trials,
        successes,
        mean_iters,
        union_bound: bounds.union,
        per_vertex_bound: bounds.per_vertex,
        single_draw_failures,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::build_kneser;

    fn cs(ids: &[u64]) -> Vec<Color> {
        ids.iter().copied().map(Color).collect()
    }

    fn map(n: u32, pairs: &[(u64, u32)]) -> ColorMap {
        ColorMap::new(n, pairs.iter().map(|&(c, e)| (Color(c), e)).collect()).unwrap()
    }

    #[test]
    fn unique_map_on_one_element() {
        let m = sample_color_map(&cs(&[4]), 1, 3).unwrap();
        assert_eq!(m.image(Color(4)), Some(0));
        assert!(sample_color_map(&[], 3, 0).is_err());
    }

    #[test]
    fn map_is_seed_deterministic() {
        let pool = cs(&(0..50).collect::<Vec<_>>());
        assert_eq!(
            sample_color_map(&pool, 9, 11).unwrap(),
            sample_color_map(&pool, 9, 11).unwrap()
        );
    }

    #[test]
    fn map_images_are_uniform() {
        let n = 6u32;
        let pool = cs(&(0..10).collect::<Vec<_>>());
        let draws = 10_000u64;
        let mut counts = vec![0u64; n as usize];
        for seed in 0..draws {
            let m = sample_color_map(&pool, n, seed).unwrap();
            for c in &pool {
                counts[m.image(*c).unwrap() as usize] += 1;
            }
        }
        let total = draws * pool.len() as u64;
        let p = 1.0 / n as f64;
        let sigma = (total as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - total as f64 * p).abs() <= 3.0 * sigma, "{c}");
        }
    }

    #[test]
    fn induced_coloring_on_k2() {
        let g = build_kneser(GroundParams::new(2, 1)).unwrap();
        let lists = ListAssignment::uniform(2, cs(&[10, 20])).unwrap();
        let c = induced_coloring(&g, &lists, &map(2, &[(10, 0), (20, 1)])).unwrap();
        assert_eq!(c, Coloring::total(cs(&[10, 20])));
        let c = induced_coloring(&g, &lists, &map(2, &[(10, 0), (20, 0)])).unwrap();
        assert_eq!(c.assignment, vec![Some(Color(10)), None]);
    }

    #[test]
    fn lowest_color_wins() {
        let g = build_kneser(GroundParams::new(4, 2)).unwrap();
        let lists = ListAssignment::uniform(6, cs(&[1, 2, 3])).unwrap();
        let c = induced_coloring(&g, &lists, &map(4, &[(1, 3), (2, 0), (3, 0)])).unwrap();
        // {1,4} sees both 1 (-> 4) and 2 (-> 1); smallest id is 1
        let v = g
            .index_of(&crate::setfam::KSet::from_elements(4, [1, 4]).unwrap())
            .unwrap();
        assert_eq!(c.assignment[v], Some(Color(1)));
    }

    #[test]
    fn induced_colorings_are_proper_for_every_map() {
        // exhaustive over all maps of a 3-color pool on KG(n, k), n <= 6
        for (n, k) in [(4, 1), (4, 2), (5, 2), (6, 2), (6, 3)] {
            let g = build_kneser(GroundParams::new(n, k)).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64 * 10 + k as u64);
            let lists = sample_pool_lists(g.vertex_count(), 2, 3, &mut rng).unwrap();
            let total_maps = (n as u64).pow(3);
            for code in 0..total_maps {
                let images = (0..3u64)
                    .map(|c| {
                        (
                            Color(c),
                            ((code / (n as u64).pow(c as u32)) % n as u64) as u32,
                        )
                    })
                    .collect();
                let f = ColorMap::new(n, images).unwrap();
                let col = induced_coloring(&g, &lists, &f).unwrap();
                assert!(respects_lists(&col, &lists));
                for &(a, b) in &g.edges {
                    if let (Some(x), Some(y)) = (col.assignment[a], col.assignment[b]) {
                        assert_ne!(x, y);
                    }
                }
            }
        }
    }

    #[test]
    fn enlarging_lists_only_helps() {
        let g = build_kneser(GroundParams::new(6, 2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let small = sample_pool_lists(g.vertex_count(), 2, 8, &mut rng).unwrap();
            let big_lists = small
                .lists()
                .iter()
                .map(|l| {
                    let mut l = l.clone();
                    l.push(Color(100 + rng.gen_range(0..4)));
                    l
                })
                .collect();
            let big = ListAssignment::new(big_lists, None).unwrap();
            let pool = big.pool();
            let f = sample_color_map_with(&pool, 6, &mut rng).unwrap();
            let a = induced_coloring(&g, &small, &f).unwrap();
            let b = induced_coloring(&g, &big, &f).unwrap();
            for v in b.uncolored() {
                assert!(a.assignment[v].is_none());
            }
        }
    }

    #[test]
    fn las_vegas_on_k2_is_fast() {
        let g = build_kneser(GroundParams::new(2, 1)).unwrap();
        let lists = ListAssignment::uniform(2, cs(&[0, 1])).unwrap();
        for seed in 0..100 {
            let out = las_vegas_list_coloring(&g, &lists, 1000, seed).unwrap();
            assert!(out.coloring.is_some());
            assert!(out.iterations <= 10, "seed {seed} took {}", out.iterations);
        }
    }

    #[test]
    fn las_vegas_empty_list_is_immediate() {
        let g = build_kneser(GroundParams::new(2, 1)).unwrap();
        let lists = ListAssignment::new(vec![cs(&[0]), vec![]], None).unwrap();
        let out = las_vegas_list_coloring(&g, &lists, 10, 0).unwrap();
        assert_eq!(
            out,
            LasVegasOutcome {
                coloring: None,
                iterations: 0
            }
        );
        assert!(las_vegas_list_coloring(&g, &lists, 0, 0).is_err());
    }

    #[test]
    fn failure_bound_values() {
        let b = failure_prob_bounds(5, 2, 10).unwrap();
        assert!((b.per_vertex - 0.6f64.powi(10)).abs() < 1e-15);
        assert!((b.per_vertex - 6.0466e-3).abs() < 1e-6);
        assert!((b.union - 10.0 * (-4.0f64).exp()).abs() < 1e-12);
        assert!((b.union - 0.18316).abs() < 1e-5);
        assert_eq!(failure_prob_bounds(5, 2, 0).unwrap().per_vertex, 1.0);
    }

    #[test]
    fn per_vertex_strictly_below_exponential() {
        for n in 1..=30u32 {
            for k in 1..=n {
                for m in 1..=60u64 {
                    let b = failure_prob_bounds(n, k, m).unwrap();
                    let e = (-(m as f64) * k as f64 / n as f64).exp();
                    assert!(b.per_vertex < e, "n={n} k={k} m={m}");
                }
            }
        }
    }

    #[test]
    fn upper_bound_values() {
        let b = choice_upper_bound(5, 2).unwrap();
        assert!((b.paper_bound - 9.581).abs() < 1e-3);
        assert!((b.sharp_bound - 4.791).abs() < 1e-3);
        let b = choice_upper_bound(2, 1).unwrap();
        assert!((b.paper_bound - (2.0 * 2f64.ln() + 2.0)).abs() < 1e-12);
        assert!((b.paper_bound - 3.386).abs() < 1e-3);
        for k in 1..=10u32 {
            let b = choice_upper_bound(2 * k, k).unwrap();
            let kf = k as f64;
            assert!((b.paper_bound - (2.0 * kf * 2f64.ln() + 2.0 * kf)).abs() < 1e-9);
        }
        for n in 2..=64u32 {
            let b = choice_upper_bound(n, 1).unwrap();
            assert!((b.paper_bound - b.sharp_bound).abs() < 1e-9);
        }
        assert!(choice_upper_bound(3, 2).is_err());
    }

    #[test]
    fn monte_carlo_failure_rate_below_union_bound() {
        let p = GroundParams::new(6, 2);
        let m = trial_list_size(6, 2).unwrap();
        let r = run_trials(p, m, 10_000, 1, 5, None).unwrap();
        let rate = r.single_draw_failure_rate();
        let sigma = (r.union_bound.min(1.0) * (1.0 - r.union_bound.min(1.0)) / 10_000f64).sqrt();
        assert!(
            rate <= r.union_bound + 3.0 * sigma,
            "{rate} vs {}",
            r.union_bound
        );
    }

    #[test]
    fn trials_are_reproducible() {
        let p = GroundParams::new(6, 2);
        let a = run_trials(p, 13, 100, 1000, 7, None).unwrap();
        let b = run_trials(p, 13, 100, 1000, 7, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.successes, 100);
    }
}
