//! Ground-set combinatorics: k-sets as bitmasks, Kneser and Schrijver
//! graphs, uniform hypergraphs, intersecting-family predicates.
//!
//! Elements are 0-based inside masks and 1-based whenever a set crosses
//! the serialization boundary.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::arith::binomial_u128;
use crate::error::{Error, Result};

/// Largest ground set representable in a single-word mask.
pub const MAX_GROUND: u32 = 64;

/// Vertex cap for materialized Kneser graphs.
pub const MAX_KNESER_VERTICES: u128 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GroundParams {
    pub n: u32,
    pub k: u32,
}

impl GroundParams {
    pub fn new(n: u32, k: u32) -> Self {
        GroundParams { n, k }
    }

    /// Checks `1 ≤ k ≤ n ≤ 64`.
    pub fn check_subsets(&self) -> Result<()> {
        if self.n > MAX_GROUND {
            return Err(Error::param(format!(
                "n = {} exceeds the bitmask cap of {MAX_GROUND}",
                self.n
            )));
        }
        if self.k == 0 {
            return Err(Error::param("k must be at least 1"));
        }
        if self.k > self.n {
            return Err(Error::param(format!(
                "k = {} exceeds n = {}",
                self.k, self.n
            )));
        }
        Ok(())
    }

    /// Checks the Kneser standing assumption `n ≥ 2k > 0`.
    pub fn check_kneser(&self) -> Result<()> {
        self.check_subsets()?;
        if self.n < 2 * self.k {
            return Err(Error::param(format!(
                "Kneser graph needs n >= 2k, got n = {}, k = {}",
                self.n, self.k
            )));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> u128 {
        binomial_u128(self.n as u64, self.k as u64)
    }
}

/// Mask with the low `n` bits set.
pub(crate) fn full_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of `[n]` stored as its characteristic bit vector.
///
/// Ordering is by mask value, which is colexicographic order on sets.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KSet {
    mask: u64,
    n: u8,
}

impl KSet {
    pub fn from_mask(n: u32, mask: u64) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::param(format!("n = {n} exceeds {MAX_GROUND}")));
        }
        if mask & !full_mask(n) != 0 {
            return Err(Error::validation(format!(
                "mask {mask:#x} is not a subset of [{n}]"
            )));
        }
        Ok(KSet { mask, n: n as u8 })
    }

    /// Builds a set from 1-based elements.
    pub fn from_elements<I>(n: u32, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = u32>,
    {
        let mut mask = 0u64;
        for e in elements {
            if e == 0 || e > n {
                return Err(Error::validation(format!("element {e} outside [1, {n}]")));
            }
            let bit = 1u64 << (e - 1);
            if mask & bit != 0 {
                return Err(Error::validation(format!("element {e} repeated")));
            }
            mask |= bit;
        }
        KSet::from_mask(n, mask)
    }

    pub(crate) fn raw(n: u32, mask: u64) -> Self {
        debug_assert!(n <= MAX_GROUND && mask & !full_mask(n) == 0);
        KSet { mask, n: n as u8 }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn ground(&self) -> u32 {
        self.n as u32
    }

    pub fn len(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// 0-based membership test.
    pub fn contains(&self, element: u32) -> bool {
        element < 64 && self.mask >> element & 1 == 1
    }

    pub fn is_disjoint(&self, other: &KSet) -> bool {
        self.mask & other.mask == 0
    }

    pub fn is_subset(&self, other: &KSet) -> bool {
        self.mask & !other.mask == 0
    }

    /// Smallest 0-based element.
    pub fn min_element(&self) -> Option<u32> {
        (self.mask != 0).then(|| self.mask.trailing_zeros())
    }

    /// 0-based elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        MaskBits(self.mask)
    }

    pub fn to_one_based(&self) -> Vec<u32> {
        self.elements().map(|e| e + 1).collect()
    }
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.to_one_based()).finish()
    }
}

impl Serialize for KSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len() as usize))?;
        for e in self.elements() {
            seq.serialize_element(&(e + 1))?;
        }
        seq.end()
    }
}

/// Iterates the set bits of a mask, lowest first.
pub(crate) struct MaskBits(pub u64);

impl Iterator for MaskBits {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let bit = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(bit)
    }
}

/// All `k`-bit masks below `2^n`, in increasing (colex) order.
///
/// Gosper's hack; `n` up to 64.
pub(crate) struct KSubsetMasks {
    next: Option<u64>,
    limit: u128,
}

impl KSubsetMasks {
    pub(crate) fn new(n: u32, k: u32) -> Self {
        let limit = 1u128 << n;
        let next = if k > n {
            None
        } else if k == 0 {
            Some(0)
        } else {
            Some(full_mask(k))
        };
        KSubsetMasks { next, limit }
    }
}

impl Iterator for KSubsetMasks {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur as u128 + c as u128;
            if r >= self.limit {
                None
            } else {
                let r = r as u64;
                Some((((r ^ cur) >> 2) / c) | r)
            }
        };
        Some(cur)
    }
}

/// All `k`-subsets of `[n]` in canonical colex order.
pub fn enumerate_ksets(params: GroundParams) -> Result<Vec<KSet>> {
    params.check_subsets()?;
    let count = params.vertex_count();
    if count > MAX_KNESER_VERTICES {
        return Err(Error::param(format!(
            "C({}, {}) = {count} sets exceeds the enumeration cap {MAX_KNESER_VERTICES}",
            params.n, params.k
        )));
    }
    Ok(KSubsetMasks::new(params.n, params.k)
        .map(|m| KSet::raw(params.n, m))
        .collect())
}

/// `KG(n, k)`: vertices are k-sets in colex order, edges join disjoint sets.
#[derive(Debug, Clone, Serialize)]
pub struct KneserGraph {
    #[serde(flatten)]
    pub params: GroundParams,
    pub vertices: Vec<KSet>,
    pub edges: Vec<(usize, usize)>,
}

impl KneserGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Neighbor lists indexed like `vertices`, each sorted.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn index_of(&self, set: &KSet) -> Option<usize> {
        self.vertices.binary_search(set).ok()
    }
}

pub fn build_kneser(params: GroundParams) -> Result<KneserGraph> {
    params.check_kneser()?;
    let vertices = enumerate_ksets(params)?;
    let mut edges = Vec::new();
    for (i, a) in vertices.iter().enumerate() {
        for (j, b) in vertices.iter().enumerate().skip(i + 1) {
            if a.is_disjoint(b) {
                edges.push((i, j));
            }
        }
    }
    Ok(KneserGraph {
        params,
        vertices,
        edges,
    })
}

/// Vertex set of the Schrijver graph: k-sets with no two cyclically
/// consecutive elements of `[n]`.
pub fn build_schrijver_vertices(params: GroundParams) -> Result<SetFamily> {
    params.check_kneser()?;
    let n = params.n;
    let members = enumerate_ksets(params)?
        .into_iter()
        .filter(|s| {
            let m = s.mask();
            // rotate left by one within n bits: bit i -> bit (i+1) mod n
            let rotated = ((m << 1) | (m >> (n - 1))) & full_mask(n);
            n == 1 || m & rotated == 0
        })
        .collect();
    SetFamily::new(n, members, Some(params.k))
}

/// Duplicate-free ordered list of subsets of a common ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    n: u32,
    members: Vec<KSet>,
    uniformity: Option<u32>,
}

impl SetFamily {
    pub fn new(n: u32, members: Vec<KSet>, uniformity: Option<u32>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for m in &members {
            if m.ground() != n {
                return Err(Error::validation(format!(
                    "member {m:?} lives on [{}], family on [{n}]",
                    m.ground()
                )));
            }
            if let Some(k) = uniformity {
                if m.len() != k {
                    return Err(Error::validation(format!("member {m:?} is not a {k}-set")));
                }
            }
            if !seen.insert(*m) {
                return Err(Error::validation(format!("duplicate member {m:?}")));
            }
        }
        Ok(SetFamily {
            n,
            members,
            uniformity,
        })
    }

    /// Builds a family from 1-based element lists.
    pub fn from_lists(n: u32, lists: &[Vec<u32>], uniformity: Option<u32>) -> Result<Self> {
        let members = lists
            .iter()
            .map(|l| KSet::from_elements(n, l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(n, members, uniformity)
    }

    pub fn empty(n: u32, uniformity: Option<u32>) -> Self {
        SetFamily {
            n,
            members: Vec::new(),
            uniformity,
        }
    }

    pub fn ground(&self) -> u32 {
        self.n
    }

    pub fn members(&self) -> &[KSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn uniformity(&self) -> Option<u32> {
        self.uniformity
    }

    /// The declared uniformity, or the common size of all members if they agree.
    pub fn effective_uniformity(&self) -> Option<u32> {
        self.uniformity.or_else(|| {
            let first = self.members.first()?.len();
            self.members
                .iter()
                .all(|m| m.len() == first)
                .then_some(first)
        })
    }

    /// Union of all members as a mask.
    pub fn support(&self) -> u64 {
        self.members.iter().fold(0, |acc, m| acc | m.mask())
    }

    pub fn to_lists(&self) -> Vec<Vec<u32>> {
        self.members.iter().map(KSet::to_one_based).collect()
    }
}

impl Serialize for SetFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(serializer)
    }
}

pub fn is_intersecting(family: &SetFamily) -> bool {
    let ms = family.members();
    ms.iter()
        .enumerate()
        .all(|(i, a)| ms[i + 1..].iter().all(|b| !a.is_disjoint(b)))
}

/// An `s`-uniform hypergraph whose edges lie inside `ground`.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    n: u32,
    ground: u64,
    s: u32,
    edges: SetFamily,
}

impl Hypergraph {
    pub fn new(n: u32, ground: u64, s: u32, edges: SetFamily) -> Result<Self> {
        if ground & !full_mask(n) != 0 {
            return Err(Error::validation("hypergraph ground exceeds [n]"));
        }
        if edges.ground() != n {
            return Err(Error::validation(
                "edge family lives on a different ground set",
            ));
        }
        for e in edges.members() {
            if e.len() != s {
                return Err(Error::validation(format!("edge {e:?} is not an {s}-set")));
            }
            if e.mask() & !ground != 0 {
                return Err(Error::validation(format!(
                    "edge {e:?} leaves the ground set"
                )));
            }
        }
        Ok(Hypergraph {
            n,
            ground,
            s,
            edges,
        })
    }

    /// Hypergraph on all of `[n]`.
    pub fn on_full_ground(n: u32, s: u32, edges: SetFamily) -> Result<Self> {
        Hypergraph::new(n, full_mask(n), s, edges)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ground(&self) -> u64 {
        self.ground
    }

    pub fn ground_size(&self) -> u32 {
        self.ground.count_ones()
    }

    pub fn uniformity(&self) -> u32 {
        self.s
    }

    pub fn edges(&self) -> &SetFamily {
        &self.edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(n: u32, lists: &[&[u32]]) -> Vec<KSet> {
        lists
            .iter()
            .map(|l| KSet::from_elements(n, l.iter().copied()).unwrap())
            .collect()
    }

    #[test]
    fn two_singletons() {
        let v = enumerate_ksets(GroundParams::new(2, 1)).unwrap();
        assert_eq!(v, sets(2, &[&[1], &[2]]));
    }

    #[test]
    fn colex_order_for_four_choose_two() {
        let v = enumerate_ksets(GroundParams::new(4, 2)).unwrap();
        let expect = sets(4, &[&[1, 2], &[1, 3], &[2, 3], &[1, 4], &[2, 4], &[3, 4]]);
        assert_eq!(v, expect);
        assert_eq!(enumerate_ksets(GroundParams::new(5, 2)).unwrap().len(), 10);
    }

    #[test]
    fn enumerate_rejects_bad_params() {
        assert!(matches!(
            enumerate_ksets(GroundParams::new(3, 0)),
            Err(Error::Param(_))
        ));
        assert!(matches!(
            enumerate_ksets(GroundParams::new(3, 4)),
            Err(Error::Param(_))
        ));
        assert!(matches!(
            enumerate_ksets(GroundParams::new(65, 1)),
            Err(Error::Param(_))
        ));
    }

    #[test]
    fn full_word_ground_set() {
        let v = enumerate_ksets(GroundParams::new(64, 1)).unwrap();
        assert_eq!(v.len(), 64);
        assert_eq!(v[63].mask(), 1 << 63);
        assert_eq!(enumerate_ksets(GroundParams::new(64, 64)).unwrap().len(), 1);
    }

    #[test]
    fn small_kneser_graphs() {
        let k2 = build_kneser(GroundParams::new(2, 1)).unwrap();
        assert_eq!((k2.vertex_count(), k2.edges.len()), (2, 1));
        let matching = build_kneser(GroundParams::new(4, 2)).unwrap();
        assert_eq!((matching.vertex_count(), matching.edges.len()), (6, 3));
        assert!(matching.adjacency().iter().all(|a| a.len() == 1));
        let petersen = build_kneser(GroundParams::new(5, 2)).unwrap();
        assert_eq!((petersen.vertex_count(), petersen.edges.len()), (10, 15));
        assert!(petersen.adjacency().iter().all(|a| a.len() == 3));
    }

    #[test]
    fn kneser_requires_n_at_least_2k() {
        assert!(matches!(
            build_kneser(GroundParams::new(3, 2)),
            Err(Error::Param(_))
        ));
    }

    #[test]
    fn schrijver_vertices() {
        let s = build_schrijver_vertices(GroundParams::new(4, 2)).unwrap();
        assert_eq!(s.members(), &sets(4, &[&[1, 3], &[2, 4]])[..]);
        let s = build_schrijver_vertices(GroundParams::new(5, 2)).unwrap();
        let mut got = s.to_lists();
        got.sort();
        assert_eq!(
            got,
            vec![vec![1, 3], vec![1, 4], vec![2, 4], vec![2, 5], vec![3, 5]]
        );
        let s = build_schrijver_vertices(GroundParams::new(6, 1)).unwrap();
        assert_eq!(s.len(), 6);
    }

    #[test]
    fn intersecting_examples() {
        let f = SetFamily::from_lists(3, &[vec![1, 2], vec![1, 3], vec![2, 3]], Some(2)).unwrap();
        assert!(is_intersecting(&f));
        let f = SetFamily::from_lists(4, &[vec![1, 2], vec![3, 4]], Some(2)).unwrap();
        assert!(!is_intersecting(&f));
        assert!(is_intersecting(&SetFamily::empty(4, None)));
    }

    #[test]
    fn family_rejects_duplicates_and_wrong_sizes() {
        let dup = SetFamily::from_lists(3, &[vec![1, 2], vec![2, 1]], None);
        assert!(matches!(dup, Err(Error::Validation(_))));
        let wrong = SetFamily::from_lists(3, &[vec![1, 2], vec![3]], Some(2));
        assert!(matches!(wrong, Err(Error::Validation(_))));
    }

    #[test]
    fn kset_json_is_one_based() {
        let s = KSet::from_elements(5, [3, 1]).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,3]");
        let g = build_kneser(GroundParams::new(2, 1)).unwrap();
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"n":2,"k":1,"vertices":[[1],[2]],"edges":[[0,1]]}"#
        );
    }

    #[test]
    fn hypergraph_edges_must_fit() {
        let e = SetFamily::from_lists(5, &[vec![1, 2, 5]], Some(3)).unwrap();
        assert!(Hypergraph::new(5, 0b01111, 3, e.clone()).is_err());
        assert!(Hypergraph::new(5, 0b11111, 3, e.clone()).is_ok());
        assert!(Hypergraph::new(5, 0b11111, 2, e).is_err());
    }
}
