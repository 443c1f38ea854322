//! Exact choosability of small graphs.
//!
//! `G` is m-choosable iff every assignment of m-lists admits a proper list
//! coloring. Assignments are enumerated up to renaming of colors: each new
//! list takes any subset of the colors used so far plus the next unused ids
//! in order. Two reductions keep the space small and are sound for the
//! verdict:
//!
//! * a vertex with fewer than m neighbors can always be colored last, so it
//!   is removed (repeatedly);
//! * a graph is m-choosable iff each connected component is.
//!
//! What remains is checked exhaustively, behind a hard cap on the number of
//! canonical assignments.

use rayon::prelude::*;
use serde::Serialize;

use crate::coloring::{
    chromatic_number, solve_list_coloring, Color, ListAssignment, ListAssignmentJson, ListSolver,
};
use crate::error::{Error, Result};
use crate::random_map::choice_upper_bound;
use crate::setfam::{KSubsetMasks, KneserGraph, MaskBits};

/// Cap on canonical assignments per component.
pub const MAX_CANONICAL_ASSIGNMENTS: u128 = 20_000_000;

/// Colors are tracked in 64-bit masks during enumeration.
pub const MAX_UNIVERSE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoosabilityResult {
    pub m: usize,
    pub choosable: bool,
    pub witness_bad_lists: Option<ListAssignment>,
}

pub fn is_m_choosable(
    graph: &KneserGraph,
    m: usize,
    universe_size: Option<usize>,
) -> Result<ChoosabilityResult> {
    let adjacency = graph.adjacency();
    let witness = find_bad_assignment(&adjacency, m, universe_size)?;
    Ok(ChoosabilityResult {
        m,
        choosable: witness.is_none(),
        witness_bad_lists: witness,
    })
}

/// Number of canonical assignments of m-lists to `len` vertices from a
/// universe of `universe` colors (saturating).
pub fn canonical_assignment_count(len: usize, m: usize, universe: usize) -> u128 {
    use crate::arith::binomial_u128;
    // ways[c] = number of partial assignments using exactly c colors
    let mut ways = vec![0u128; universe + 1];
    if len == 0 {
        return 1;
    }
    if m > universe {
        return 0;
    }
    ways[m] = 1;
    for _ in 1..len {
        let mut next = vec![0u128; universe + 1];
        for (c, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for reused in m.saturating_sub(universe - c)..=m.min(c) {
                let fresh = m - reused;
                let mult = binomial_u128(c as u64, reused as u64);
                next[c + fresh] = next[c + fresh].saturating_add(w.saturating_mul(mult));
            }
        }
        ways = next;
    }
    ways.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

/// Searches for m-lists admitting no proper coloring. Returns the witness
/// over all vertices of `adjacency`, re-verified by the solver.
pub(crate) fn find_bad_assignment(
    adjacency: &[Vec<usize>],
    m: usize,
    universe_size: Option<usize>,
) -> Result<Option<ListAssignment>> {
    if m == 0 {
        return Err(Error::param("list size m must be at least 1"));
    }
    if let Some(u) = universe_size {
        if u < m {
            return Err(Error::param(format!(
                "universe of {u} colors is smaller than m = {m}"
            )));
        }
    }
    let nv = adjacency.len();
    let alive = degree_core(adjacency, m);
    for component in components(adjacency, &alive) {
        let universe = universe_size.unwrap_or(m * component.len());
        if universe > MAX_UNIVERSE {
            return Err(Error::param(format!(
                "universe of {universe} colors exceeds {MAX_UNIVERSE}"
            )));
        }
        let count = canonical_assignment_count(component.len(), m, universe);
        if count > MAX_CANONICAL_ASSIGNMENTS {
            return Err(Error::param(format!(
                "{}-vertex component with m = {m} over {universe} colors has {count} canonical \
                 list assignments, over the cap {MAX_CANONICAL_ASSIGNMENTS}",
                component.len()
            )));
        }
        if let Some(local) = search_component(adjacency, &component, m, universe) {
            let default: Vec<Color> = (0..m as u64).map(Color).collect();
            let mut lists = vec![default; nv];
            for (pos, &v) in component.iter().enumerate() {
                if let Some(l) = local.get(pos) {
                    lists[v] = l.iter().map(|&c| Color(c as u64)).collect();
                }
            }
            let witness = ListAssignment::new(lists, Some(m))?;
            if solve_list_coloring(adjacency, &witness).is_some() {
                return Err(Error::invariant("bad-list witness turned out colorable"));
            }
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// Vertices surviving repeated removal of those with degree below `m`.
fn degree_core(adjacency: &[Vec<usize>], m: usize) -> Vec<bool> {
    let mut alive = vec![true; adjacency.len()];
    let mut degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let mut stack: Vec<usize> = (0..adjacency.len()).filter(|&v| degree[v] < m).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in &adjacency[v] {
            if alive[w] {
                degree[w] -= 1;
                if degree[w] + 1 == m {
                    stack.push(w);
                }
            }
        }
    }
    alive
}

/// Connected components of the alive subgraph, each in BFS order from its
/// lowest vertex.
fn components(adjacency: &[Vec<usize>], alive: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adjacency.len()];
    let mut out = Vec::new();
    for start in 0..adjacency.len() {
        if !alive[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut order = vec![start];
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in &adjacency[v] {
                if alive[w] && !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
        out.push(order);
    }
    out
}

struct ComponentSearch {
    m: usize,
    universe: usize,
    /// prefix[j]: adjacency of the subgraph induced on positions 0..=j.
    prefix: Vec<Vec<Vec<usize>>>,
}

impl ComponentSearch {
    /// Candidate lists for a vertex when `used` colors are in play, most
    /// reuse first.
    fn candidates(&self, used: usize) -> Vec<Vec<u32>> {
        let m = self.m;
        let mut out = Vec::new();
        for reused in (m.saturating_sub(self.universe - used)..=m.min(used)).rev() {
            let fresh = (used..used + m - reused).map(|c| c as u32);
            for pick in KSubsetMasks::new(used as u32, reused as u32) {
                let mut list: Vec<u32> = MaskBits(pick).collect();
                list.extend(fresh.clone());
                out.push(list);
            }
        }
        out
    }

    fn colorable(&self, lists: &[Vec<u32>]) -> bool {
        let j = lists.len() - 1;
        ListSolver::new(&self.prefix[j], lists).solve().is_some()
    }

    /// Depth-first over canonical assignments; returns the first prefix
    /// that cannot be colored.
    fn dfs(&self, lists: &mut Vec<Vec<u32>>, used: usize) -> Option<Vec<Vec<u32>>> {
        if !self.colorable(lists) {
            return Some(lists.clone());
        }
        if lists.len() == self.prefix.len() {
            return None;
        }
        for cand in self.candidates(used) {
            let top = cand.iter().copied().max().map_or(0, |c| c as usize + 1);
            lists.push(cand);
            let found = self.dfs(lists, used.max(top));
            lists.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

fn search_component(
    adjacency: &[Vec<usize>],
    component: &[usize],
    m: usize,
    universe: usize,
) -> Option<Vec<Vec<u32>>> {
    let mut pos = vec![usize::MAX; adjacency.len()];
    for (i, &v) in component.iter().enumerate() {
        pos[v] = i;
    }
    let prefix = (0..component.len())
        .map(|j| {
            component[..=j]
                .iter()
                .map(|&v| {
                    let mut ns: Vec<usize> = adjacency[v]
                        .iter()
                        .map(|&w| pos[w])
                        .filter(|&p| p <= j)
                        .collect();
                    ns.sort_unstable();
                    ns
                })
                .collect()
        })
        .collect();
    let search = ComponentSearch {
        m,
        universe,
        prefix,
    };
    let first: Vec<u32> = (0..m as u32).collect();
    if component.len() == 1 {
        let lists = vec![first];
        return (!search.colorable(&lists)).then_some(lists);
    }
    // top-level subtrees: the second vertex's list
    search.candidates(m).into_par_iter().find_map_first(|cand| {
        let top = cand.iter().copied().max().map_or(0, |c| c as usize + 1);
        let mut lists = vec![first.clone(), cand];
        search.dfs(&mut lists, m.max(top))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceNumber {
    /// `None` when every `m ≤ m_max` admits a bad assignment.
    pub ch: Option<usize>,
    /// Bad lists of size `ch − 1` (or `m_max` when `ch` exceeds it).
    pub witness_below: Option<ListAssignment>,
}

pub fn choice_number(graph: &KneserGraph, m_max: usize) -> Result<ChoiceNumber> {
    let adjacency = graph.adjacency();
    let chi = chromatic_number(graph.params)? as usize;
    let mut witness_below = None;
    for m in 1..=m_max {
        match find_bad_assignment(&adjacency, m, None)? {
            Some(w) => witness_below = Some(w),
            None => {
                if m < chi {
                    return Err(Error::invariant(format!("ch = {m} below chi = {chi}")));
                }
                return Ok(ChoiceNumber {
                    ch: Some(m),
                    witness_below,
                });
            }
        }
    }
    Ok(ChoiceNumber {
        ch: None,
        witness_below,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactChReport {
    pub n: u32,
    pub k: u32,
    pub ch: Option<usize>,
    pub chi: u32,
    pub upper_bound: f64,
    pub witness_below: Option<ListAssignmentJson>,
}

/// `{n, k, ch, chi, upper_bound}` where `upper_bound` is the sharp threshold.
pub fn exact_ch_report(graph: &KneserGraph, m_max: usize) -> Result<ExactChReport> {
    let found = choice_number(graph, m_max)?;
    Ok(ExactChReport {
        n: graph.params.n,
        k: graph.params.k,
        ch: found.ch,
        witness_below: found
            .witness_below
            .as_ref()
            .map(|w| ListAssignmentJson::from_assignment(graph, w)),
        chi: chromatic_number(graph.params)?,
        upper_bound: choice_upper_bound(graph.params.n, graph.params.k)?.sharp_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::find_list_coloring;
    use crate::setfam::{build_kneser, GroundParams};

    fn kneser(n: u32, k: u32) -> KneserGraph {
        build_kneser(GroundParams::new(n, k)).unwrap()
    }

    fn graph(nv: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); nv];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    fn complete_bipartite(a: usize, b: usize) -> Vec<Vec<usize>> {
        let edges: Vec<_> = (0..a)
            .flat_map(|i| (a..a + b).map(move |j| (i, j)))
            .collect();
        graph(a + b, &edges)
    }

    fn cycle(n: usize) -> Vec<Vec<usize>> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        graph(n, &edges)
    }

    fn chooses(adj: &[Vec<usize>], m: usize) -> bool {
        find_bad_assignment(adj, m, None).unwrap().is_none()
    }

    #[test]
    fn k2_examples() {
        let g = kneser(2, 1);
        let r = is_m_choosable(&g, 1, None).unwrap();
        assert!(!r.choosable);
        let w = r.witness_bad_lists.unwrap();
        assert_eq!(w.lists(), &[vec![Color(0)], vec![Color(0)]]);
        assert!(is_m_choosable(&g, 2, Some(4)).unwrap().choosable);
    }

    #[test]
    fn matching_is_two_choosable() {
        let g = kneser(4, 2);
        assert!(is_m_choosable(&g, 2, None).unwrap().choosable);
        assert!(!is_m_choosable(&g, 1, None).unwrap().choosable);
    }

    #[test]
    fn small_choice_numbers() {
        for (n, k, ch) in [(2, 1, 2), (3, 1, 3), (4, 2, 2), (4, 1, 4)] {
            let g = kneser(n, k);
            let r = choice_number(&g, 6).unwrap();
            assert_eq!(r.ch, Some(ch), "KG({n},{k})");
            let w = r.witness_below.unwrap();
            assert_eq!(w.declared_size(), Some(ch - 1));
            assert!(find_list_coloring(&g, &w).unwrap().is_none());
        }
    }

    #[test]
    fn known_choice_numbers_of_small_graphs() {
        // C4 = K(2,2) and K(2,3) are 2-choosable; K(2,4), K(3,3), C5 are not
        assert!(chooses(&cycle(4), 2));
        assert!(chooses(&complete_bipartite(2, 3), 2));
        assert!(!chooses(&complete_bipartite(2, 4), 2));
        assert!(!chooses(&complete_bipartite(3, 3), 2));
        assert!(!chooses(&cycle(5), 2));
        assert!(chooses(&cycle(5), 3));
        assert!(chooses(&cycle(6), 2));
    }

    /// Every assignment of m-subsets of the universe, no symmetry reduction.
    fn naive_choosable(adj: &[Vec<usize>], m: usize, universe: usize) -> bool {
        let subsets: Vec<Vec<Color>> = KSubsetMasks::new(universe as u32, m as u32)
            .map(|mask| MaskBits(mask).map(|c| Color(c as u64)).collect())
            .collect();
        let nv = adj.len();
        let total = subsets.len().pow(nv as u32);
        (0..total).all(|mut code| {
            let lists = (0..nv)
                .map(|_| {
                    let l = subsets[code % subsets.len()].clone();
                    code /= subsets.len();
                    l
                })
                .collect();
            let la = ListAssignment::new(lists, Some(m)).unwrap();
            solve_list_coloring(adj, &la).is_some()
        })
    }

    #[test]
    fn canonical_matches_naive_enumeration() {
        let graphs = [
            graph(3, &[(0, 1), (1, 2)]),
            graph(3, &[(0, 1), (1, 2), (0, 2)]),
            cycle(4),
            graph(4, &[(0, 1), (1, 2), (2, 3), (0, 2)]),
        ];
        for adj in &graphs {
            for m in 1..=2 {
                for universe in [m, m + 1, 4, 5] {
                    if universe < m {
                        continue;
                    }
                    let fast = find_bad_assignment(adj, m, Some(universe))
                        .unwrap()
                        .is_none();
                    assert_eq!(
                        fast,
                        naive_choosable(adj, m, universe),
                        "{adj:?} m={m} U={universe}"
                    );
                }
            }
        }
    }

    #[test]
    fn universe_size_does_not_change_verdict() {
        let graphs = [
            cycle(4),
            cycle(5),
            complete_bipartite(2, 3),
            complete_bipartite(2, 4),
            graph(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]),
        ];
        for adj in &graphs {
            for m in 1..=3 {
                let base = m * adj.len();
                let a = find_bad_assignment(adj, m, Some(base)).unwrap().is_none();
                let b = find_bad_assignment(adj, m, Some(base + 1))
                    .unwrap()
                    .is_none();
                assert_eq!(a, b, "{adj:?} m={m}");
            }
        }
    }

    #[test]
    fn assignment_count() {
        assert_eq!(canonical_assignment_count(1, 2, 4), 1);
        // second vertex: reuse 2 (1 way), reuse 1 (2 ways), reuse 0 (1 way)
        assert_eq!(canonical_assignment_count(2, 2, 4), 4);
        assert_eq!(canonical_assignment_count(2, 2, 3), 3);
    }

    #[test]
    fn oversize_instances_are_refused() {
        let petersen = kneser(5, 2);
        match is_m_choosable(&petersen, 3, None) {
            Err(Error::Param(msg)) => assert!(msg.contains("canonical")),
            other => panic!("expected a size error, got {other:?}"),
        }
        assert!(is_m_choosable(&petersen, 2, Some(1)).is_err());
    }

    #[test]
    fn report_fields() {
        let r = exact_ch_report(&kneser(4, 2), 4).unwrap();
        assert_eq!((r.ch, r.chi), (Some(2), 2));
        assert!((r.upper_bound - 2.0 * (2f64.ln() + 1.0)).abs() < 1e-12);
    }
}
