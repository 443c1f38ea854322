//! Colorings, list assignments, the minimum-element coloring achieving
//! `χ(KG(n,k)) = n − 2k + 2`, and an exact backtracking list-coloring solver.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setfam::{enumerate_ksets, GroundParams, KSet, KneserGraph};

/// Opaque color identifier; only equality is meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Color(pub u64);

/// Possibly partial map from vertex index to color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring {
    pub assignment: Vec<Option<Color>>,
}

impl Coloring {
    pub fn total(colors: Vec<Color>) -> Self {
        Coloring {
            assignment: colors.into_iter().map(Some).collect(),
        }
    }

    pub fn is_total(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    pub fn uncolored(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.is_none().then_some(i))
    }

    pub fn distinct_colors(&self) -> usize {
        let mut cs: Vec<Color> = self.assignment.iter().flatten().copied().collect();
        cs.sort_unstable();
        cs.dedup();
        cs.len()
    }
}

/// Per-vertex color lists. Each list is kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    lists: Vec<Vec<Color>>,
    declared_size: Option<usize>,
}

impl ListAssignment {
    pub fn new(lists: Vec<Vec<Color>>, declared_size: Option<usize>) -> Result<Self> {
        let mut sorted = Vec::with_capacity(lists.len());
        for (v, mut list) in lists.into_iter().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::validation(format!(
                    "list of vertex {v} repeats a color"
                )));
            }
            if let Some(m) = declared_size {
                if list.len() != m {
                    return Err(Error::validation(format!(
                        "list of vertex {v} has {} colors, declared size is {m}",
                        list.len()
                    )));
                }
            }
            sorted.push(list);
        }
        Ok(ListAssignment {
            lists: sorted,
            declared_size,
        })
    }

    /// Every vertex gets the same list.
    pub fn uniform(vertices: usize, list: Vec<Color>) -> Result<Self> {
        let m = list.len();
        ListAssignment::new(vec![list; vertices], Some(m))
    }

    pub fn lists(&self) -> &[Vec<Color>] {
        &self.lists
    }

    pub fn list(&self, v: usize) -> &[Color] {
        &self.lists[v]
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn declared_size(&self) -> Option<usize> {
        self.declared_size
    }

    /// All colors appearing in some list, ascending.
    pub fn pool(&self) -> Vec<Color> {
        let mut p: Vec<Color> = self.lists.iter().flatten().copied().collect();
        p.sort_unstable();
        p.dedup();
        p
    }
}

/// JSON form of a list assignment: `{vertices: [...], lists: [[colorIds]...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListAssignmentJson {
    pub vertices: Vec<Vec<u32>>,
    pub lists: Vec<Vec<u64>>,
}

impl ListAssignmentJson {
    pub fn from_assignment(graph: &KneserGraph, lists: &ListAssignment) -> Self {
        ListAssignmentJson {
            vertices: graph.vertices.iter().map(KSet::to_one_based).collect(),
            lists: lists
                .lists()
                .iter()
                .map(|l| l.iter().map(|c| c.0).collect())
                .collect(),
        }
    }

    /// Reorders the lists to the graph's canonical vertex order.
    pub fn into_assignment(self, graph: &KneserGraph) -> Result<ListAssignment> {
        if self.vertices.len() != graph.vertex_count() || self.lists.len() != self.vertices.len() {
            return Err(Error::validation(
                "list assignment must cover every vertex exactly once",
            ));
        }
        let mut slots: Vec<Option<Vec<Color>>> = vec![None; graph.vertex_count()];
        for (vertex, list) in self.vertices.iter().zip(self.lists) {
            let set = KSet::from_elements(graph.params.n, vertex.iter().copied())?;
            let idx = graph
                .index_of(&set)
                .ok_or_else(|| Error::validation(format!("{set:?} is not a vertex")))?;
            if slots[idx].is_some() {
                return Err(Error::validation(format!("vertex {set:?} listed twice")));
            }
            slots[idx] = Some(list.into_iter().map(Color).collect());
        }
        ListAssignment::new(slots.into_iter().map(Option::unwrap).collect(), None)
    }
}

pub fn is_proper(graph: &KneserGraph, coloring: &Coloring) -> Result<bool> {
    if coloring.assignment.len() != graph.vertex_count() || !coloring.is_total() {
        return Err(Error::validation("is_proper needs a total coloring"));
    }
    Ok(graph
        .edges
        .iter()
        .all(|&(a, b)| coloring.assignment[a] != coloring.assignment[b]))
}

/// True iff every colored vertex uses a color from its own list.
pub fn respects_lists(coloring: &Coloring, lists: &ListAssignment) -> bool {
    coloring
        .assignment
        .iter()
        .enumerate()
        .all(|(v, c)| match c {
            None => true,
            Some(c) => v < lists.len() && lists.list(v).binary_search(c).is_ok(),
        })
}

/// Colors every set with minimum element `i` (1-based) by `i` for
/// `i ≤ n − 2k + 1`; the remaining sets lie inside `{n−2k+2, …, n}`,
/// are pairwise intersecting, and share color `n − 2k + 2`.
pub fn greedy_min_element_coloring(params: GroundParams) -> Result<Coloring> {
    params.check_kneser()?;
    let last = (params.n - 2 * params.k + 2) as u64;
    let colors = enumerate_ksets(params)?
        .iter()
        .map(|s| {
            let min = s.min_element().expect("k >= 1") as u64 + 1;
            Color(min.min(last))
        })
        .collect();
    Ok(Coloring::total(colors))
}

pub fn chromatic_number(params: GroundParams) -> Result<u32> {
    params.check_kneser()?;
    Ok(params.n - 2 * params.k + 2)
}

/// Exact list coloring of a Kneser graph. `None` proves that no proper
/// list-respecting coloring exists.
pub fn find_list_coloring(graph: &KneserGraph, lists: &ListAssignment) -> Result<Option<Coloring>> {
    if lists.len() != graph.vertex_count() {
        return Err(Error::validation(format!(
            "{} lists for {} vertices",
            lists.len(),
            graph.vertex_count()
        )));
    }
    let adjacency = graph.adjacency();
    let found = solve_list_coloring(&adjacency, lists);
    if let Some(coloring) = &found {
        if !is_proper(graph, coloring)? || !respects_lists(coloring, lists) {
            return Err(Error::invariant("solver returned an invalid list coloring"));
        }
    }
    Ok(found)
}

/// Backtracking over an arbitrary adjacency structure.
pub(crate) fn solve_list_coloring(
    adjacency: &[Vec<usize>],
    lists: &ListAssignment,
) -> Option<Coloring> {
    let (dense, palette) = intern(lists);
    let chosen = ListSolver::new(adjacency, &dense).solve()?;
    Some(Coloring::total(
        chosen.into_iter().map(|c| palette[c as usize]).collect(),
    ))
}

/// Maps colors to dense ids `0..|L|`; lists stay sorted.
fn intern(lists: &ListAssignment) -> (Vec<Vec<u32>>, Vec<Color>) {
    let palette = lists.pool();
    let ids: BTreeMap<Color, u32> = palette
        .iter()
        .enumerate()
        .map(|(i, c)| (*c, i as u32))
        .collect();
    let dense = lists
        .lists()
        .iter()
        .map(|l| l.iter().map(|c| ids[c]).collect())
        .collect();
    (dense, palette)
}

/// Fail-first search: always branch on the uncolored vertex with the fewest
/// available colors, ties to the lowest index.
pub(crate) struct ListSolver<'a> {
    adjacency: &'a [Vec<usize>],
    lists: &'a [Vec<u32>],
    assigned: Vec<Option<u32>>,
    // blocked[v][i] counts colored neighbors that use lists[v][i]
    blocked: Vec<Vec<u32>>,
    available: Vec<usize>,
}

impl<'a> ListSolver<'a> {
    pub(crate) fn new(adjacency: &'a [Vec<usize>], lists: &'a [Vec<u32>]) -> Self {
        debug_assert_eq!(adjacency.len(), lists.len());
        ListSolver {
            adjacency,
            lists,
            assigned: vec![None; lists.len()],
            blocked: lists.iter().map(|l| vec![0; l.len()]).collect(),
            available: lists.iter().map(Vec::len).collect(),
        }
    }

    pub(crate) fn solve(mut self) -> Option<Vec<u32>> {
        if self.available.contains(&0) {
            return None;
        }
        if self.search() {
            Some(self.assigned.into_iter().map(Option::unwrap).collect())
        } else {
            None
        }
    }

    fn pick(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for v in 0..self.lists.len() {
            if self.assigned[v].is_none()
                && best.is_none_or(|b| self.available[v] < self.available[b])
            {
                best = Some(v);
            }
        }
        best
    }

    fn search(&mut self) -> bool {
        let Some(v) = self.pick() else {
            return true;
        };
        if self.available[v] == 0 {
            return false;
        }
        for i in 0..self.lists[v].len() {
            if self.blocked[v][i] > 0 {
                continue;
            }
            let c = self.lists[v][i];
            self.assigned[v] = Some(c);
            let mut dead_end = false;
            for &w in self.adjacency[v].iter() {
                if self.assigned[w].is_none() {
                    if let Ok(p) = self.lists[w].binary_search(&c) {
                        self.blocked[w][p] += 1;
                        if self.blocked[w][p] == 1 {
                            self.available[w] -= 1;
                            dead_end |= self.available[w] == 0;
                        }
                    }
                }
            }
            if !dead_end && self.search() {
                return true;
            }
            for &w in self.adjacency[v].iter() {
                if self.assigned[w].is_none() {
                    if let Ok(p) = self.lists[w].binary_search(&c) {
                        self.blocked[w][p] -= 1;
                        if self.blocked[w][p] == 0 {
                            self.available[w] += 1;
                        }
                    }
                }
            }
            self.assigned[v] = None;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::build_kneser;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn colors(ids: &[u64]) -> Vec<Color> {
        ids.iter().copied().map(Color).collect()
    }

    fn k2() -> KneserGraph {
        build_kneser(GroundParams::new(2, 1)).unwrap()
    }

    #[test]
    fn proper_on_k2() {
        let g = k2();
        assert!(is_proper(&g, &Coloring::total(colors(&[0, 1]))).unwrap());
        assert!(!is_proper(&g, &Coloring::total(colors(&[0, 0]))).unwrap());
        let partial = Coloring {
            assignment: vec![Some(Color(0)), None],
        };
        assert!(matches!(is_proper(&g, &partial), Err(Error::Validation(_))));
    }

    #[test]
    fn list_respect() {
        let lists = ListAssignment::new(vec![colors(&[3, 5])], None).unwrap();
        assert!(respects_lists(&Coloring::total(colors(&[3])), &lists));
        assert!(!respects_lists(&Coloring::total(colors(&[4])), &lists));
        let empty = Coloring {
            assignment: vec![None],
        };
        assert!(respects_lists(&empty, &lists));
        assert!(respects_lists(&Coloring { assignment: vec![] }, &lists));
    }

    #[test]
    fn greedy_on_petersen() {
        let p = GroundParams::new(5, 2);
        let g = build_kneser(p).unwrap();
        let c = greedy_min_element_coloring(p).unwrap();
        assert!(is_proper(&g, &c).unwrap());
        assert_eq!(c.distinct_colors(), 3);
        let color_of = |els: [u32; 2]| {
            let s = KSet::from_elements(5, els).unwrap();
            c.assignment[g.index_of(&s).unwrap()].unwrap()
        };
        assert_eq!(color_of([1, 3]), Color(1));
        assert_eq!(color_of([2, 5]), Color(2));
        assert_eq!(color_of([3, 4]), Color(3));
    }

    #[test]
    fn greedy_small_cases() {
        let c = greedy_min_element_coloring(GroundParams::new(2, 1)).unwrap();
        assert_eq!(c, Coloring::total(colors(&[1, 2])));
        let p = GroundParams::new(4, 2);
        let g = build_kneser(p).unwrap();
        let c = greedy_min_element_coloring(p).unwrap();
        // colex order: 12 13 23 14 24 34
        assert_eq!(c, Coloring::total(colors(&[1, 1, 2, 1, 2, 2])));
        assert!(is_proper(&g, &c).unwrap());
    }

    #[test]
    fn chromatic_formula() {
        assert_eq!(chromatic_number(GroundParams::new(5, 2)).unwrap(), 3);
        assert_eq!(chromatic_number(GroundParams::new(2, 1)).unwrap(), 2);
        assert_eq!(chromatic_number(GroundParams::new(6, 3)).unwrap(), 2);
        assert!(chromatic_number(GroundParams::new(5, 3)).is_err());
    }

    #[test]
    fn solver_small_cases() {
        let g = k2();
        let both = ListAssignment::uniform(2, colors(&[0, 1])).unwrap();
        assert!(find_list_coloring(&g, &both).unwrap().is_some());
        let same = ListAssignment::uniform(2, colors(&[0])).unwrap();
        assert!(find_list_coloring(&g, &same).unwrap().is_none());
        let empty = ListAssignment::new(vec![vec![], colors(&[1])], None).unwrap();
        assert!(find_list_coloring(&g, &empty).unwrap().is_none());

        let m = build_kneser(GroundParams::new(4, 2)).unwrap();
        let lists = ListAssignment::uniform(6, colors(&[0, 1])).unwrap();
        let c = find_list_coloring(&m, &lists).unwrap().unwrap();
        assert!(is_proper(&m, &c).unwrap() && respects_lists(&c, &lists));
    }

    #[test]
    fn triangle_needs_three_colors() {
        let k3 = build_kneser(GroundParams::new(3, 1)).unwrap();
        let two = ListAssignment::uniform(3, colors(&[7, 9])).unwrap();
        assert!(find_list_coloring(&k3, &two).unwrap().is_none());
        let three = ListAssignment::uniform(3, colors(&[7, 8, 9])).unwrap();
        assert!(find_list_coloring(&k3, &three).unwrap().is_some());
    }

    /// Tries every element of the product of lists.
    fn brute_force_colorable(adj: &[Vec<usize>], lists: &[Vec<Color>]) -> bool {
        fn rec(v: usize, adj: &[Vec<usize>], lists: &[Vec<Color>], cur: &mut Vec<Color>) -> bool {
            if v == lists.len() {
                return adj
                    .iter()
                    .enumerate()
                    .all(|(a, ns)| ns.iter().all(|&b| cur[a] != cur[b]));
            }
            for &c in &lists[v] {
                cur.push(c);
                if rec(v + 1, adj, lists, cur) {
                    return true;
                }
                cur.pop();
            }
            false
        }
        rec(0, adj, lists, &mut Vec::new())
    }

    #[test]
    fn solver_matches_brute_force_on_random_small_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..3000 {
            let nv = rng.gen_range(1..=8);
            let density = rng.gen_range(0.2..0.9);
            let mut adj = vec![Vec::new(); nv];
            for a in 0..nv {
                for b in a + 1..nv {
                    if rng.gen_bool(density) {
                        adj[a].push(b);
                        adj[b].push(a);
                    }
                }
            }
            let palette = rng.gen_range(1..=5u64);
            let lists: Vec<Vec<Color>> = (0..nv)
                .map(|_| {
                    let size = rng.gen_range(1..=3usize.min(palette as usize));
                    let picks = rand::seq::index::sample(&mut rng, palette as usize, size);
                    picks.into_iter().map(|c| Color(c as u64)).collect()
                })
                .collect();
            let la = ListAssignment::new(lists.clone(), None).unwrap();
            let got = solve_list_coloring(&adj, &la);
            assert_eq!(
                got.is_some(),
                brute_force_colorable(&adj, la.lists()),
                "{adj:?} {lists:?}"
            );
            if let Some(c) = got {
                assert!(respects_lists(&c, &la));
                assert!(adj
                    .iter()
                    .enumerate()
                    .all(|(a, ns)| ns.iter().all(|&b| c.assignment[a] != c.assignment[b])));
            }
        }
    }

    #[test]
    fn list_json_reorders_to_canonical() {
        let g = k2();
        let json = ListAssignmentJson {
            vertices: vec![vec![2], vec![1]],
            lists: vec![vec![5], vec![4, 3]],
        };
        let la = json.into_assignment(&g).unwrap();
        assert_eq!(la.list(0), &colors(&[3, 4])[..]);
        assert_eq!(la.list(1), &colors(&[5])[..]);
        let back = ListAssignmentJson::from_assignment(&g, &la);
        assert_eq!(back.vertices, vec![vec![1], vec![2]]);
        let c = Coloring {
            assignment: vec![Some(Color(3)), None],
        };
        assert_eq!(serde_json::to_string(&c).unwrap(), "[3,null]");
    }
}
