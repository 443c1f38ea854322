//! Covers of intersecting families.
//!
//! For an intersecting k-uniform family and `s ≥ 2`, either a set of at most
//! `s − 1` elements meets every member (type I), or at most `k^s` s-sets are
//! such that every member contains one of them (type II). The type II family
//! is grown one element at a time: start from the singletons of one member,
//! then extend each partial set `G` by the elements of some member disjoint
//! from `G`, which exists as long as `|G|` is below the covering number.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{binomial_big, ln_big};
use crate::error::{Error, Result};
use crate::setfam::{
    enumerate_ksets, is_intersecting, GroundParams, KSet, KSubsetMasks, MaskBits, SetFamily,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub size: u32,
    pub witness: KSet,
}

/// Minimum cover, searched by increasing size over the family's support.
/// The witness is the colex-first cover of minimum size.
pub fn covering_number(family: &SetFamily) -> Cover {
    let n = family.ground();
    if family.is_empty() {
        return Cover {
            size: 0,
            witness: KSet::raw(n, 0),
        };
    }
    let support: Vec<u32> = MaskBits(family.support()).collect();
    let covers = |c: u64| family.members().iter().all(|f| f.mask() & c != 0);
    for size in 1..=support.len() as u32 {
        for pick in KSubsetMasks::new(support.len() as u32, size) {
            let cand = MaskBits(pick).fold(0u64, |acc, i| acc | 1 << support[i as usize]);
            if covers(cand) {
                return Cover {
                    size,
                    witness: KSet::raw(n, cand),
                };
            }
        }
    }
    unreachable!("the support of a nonempty family covers it")
}

/// `F(S)`: members containing `s`.
pub fn subfamily_containing(family: &SetFamily, s: &KSet) -> SetFamily {
    let members = family
        .members()
        .iter()
        .filter(|f| s.is_subset(f))
        .copied()
        .collect();
    SetFamily::new(family.ground(), members, family.uniformity())
        .expect("subfamily of a valid family")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverKind {
    /// Every member meets `blocking`.
    TypeI { blocking: KSet },
    /// Every member contains some set of `family`.
    TypeII { family: SetFamily },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverDescriptor {
    pub s: u32,
    pub kind: CoverKind,
}

impl CoverDescriptor {
    pub fn is_type_i(&self) -> bool {
        matches!(self.kind, CoverKind::TypeI { .. })
    }

    pub fn blocking_set(&self) -> Option<&KSet> {
        match &self.kind {
            CoverKind::TypeI { blocking } => Some(blocking),
            CoverKind::TypeII { .. } => None,
        }
    }

    pub fn s_sets(&self) -> Option<&SetFamily> {
        match &self.kind {
            CoverKind::TypeI { .. } => None,
            CoverKind::TypeII { family } => Some(family),
        }
    }
}

impl Serialize for CoverDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CoverDescriptor", 3)?;
        match &self.kind {
            CoverKind::TypeI { blocking } => {
                st.serialize_field("type", "I")?;
                st.serialize_field("s", &self.s)?;
                st.serialize_field("I", blocking)?;
            }
            CoverKind::TypeII { family } => {
                st.serialize_field("type", "II")?;
                st.serialize_field("s", &self.s)?;
                st.serialize_field("G", family)?;
            }
        }
        st.end()
    }
}

/// One descriptor per color class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CoverTuple {
    pub parts: Vec<CoverDescriptor>,
}

impl CoverTuple {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

fn checked_power(k: u32, s: u32) -> Result<u64> {
    (k as u64)
        .checked_pow(s)
        .ok_or_else(|| Error::param(format!("k^s = {k}^{s} overflows")))
}

pub fn structural_cover(family: &SetFamily, s: u32) -> Result<CoverDescriptor> {
    if s < 2 {
        return Err(Error::param(format!("s must be at least 2, got {s}")));
    }
    if !is_intersecting(family) {
        return Err(Error::validation("family is not intersecting"));
    }
    let n = family.ground();
    let Some(k) = family
        .effective_uniformity()
        .or(family.is_empty().then_some(0))
    else {
        return Err(Error::validation("family is not uniform"));
    };

    let tau = covering_number(family);
    if tau.size < s {
        return Ok(CoverDescriptor {
            s,
            kind: CoverKind::TypeI {
                blocking: tau.witness,
            },
        });
    }

    let mut canonical: Vec<KSet> = family.members().to_vec();
    canonical.sort_unstable();
    let seed = canonical[0];
    let mut level: BTreeSet<u64> = seed.elements().map(|e| 1u64 << e).collect();
    for ell in 1..s {
        let mut next = BTreeSet::new();
        for &g in &level {
            let witness = canonical
                .iter()
                .find(|f| f.mask() & g == 0)
                .ok_or_else(|| {
                    Error::invariant(format!(
                        "no member disjoint from {:?} although |G| = {ell} < tau = {}",
                        KSet::raw(n, g),
                        tau.size
                    ))
                })?;
            next.extend(witness.elements().map(|e| g | 1 << e));
        }
        if next.len() as u64 > checked_power(k, ell + 1)? {
            return Err(Error::invariant(format!(
                "level {} has {} sets, more than k^{} = {}",
                ell + 1,
                next.len(),
                ell + 1,
                checked_power(k, ell + 1)?
            )));
        }
        level = next;
    }
    let members = level.into_iter().map(|m| KSet::raw(n, m)).collect();
    let descriptor = CoverDescriptor {
        s,
        kind: CoverKind::TypeII {
            family: SetFamily::new(n, members, Some(s))?,
        },
    };
    if !verify_cover(family, &descriptor) {
        return Err(Error::invariant(
            "constructed type II family does not cover",
        ));
    }
    Ok(descriptor)
}

pub fn verify_cover(family: &SetFamily, d: &CoverDescriptor) -> bool {
    match &d.kind {
        CoverKind::TypeI { blocking } => family.members().iter().all(|f| !f.is_disjoint(blocking)),
        CoverKind::TypeII { family: g } => family
            .members()
            .iter()
            .all(|f| g.members().iter().any(|sset| sset.is_subset(f))),
    }
}

/// Pads a descriptor to the exact sizes `|I| = s − 1` and `|G| = k^s`,
/// adding the smallest missing elements or colex-first missing s-sets.
/// Padding only enlarges what the descriptor covers.
pub fn pad_descriptor(d: &CoverDescriptor, n: u32, k: u32) -> Result<CoverDescriptor> {
    let s = d.s;
    match &d.kind {
        CoverKind::TypeI { blocking } => {
            let target = s - 1;
            if blocking.len() > target {
                return Err(Error::validation(format!(
                    "type I set has {} elements, more than s - 1 = {target}",
                    blocking.len()
                )));
            }
            if target > n {
                return Err(Error::param(format!(
                    "cannot pad to {target} elements of [{n}]"
                )));
            }
            let mut mask = blocking.mask();
            let mut e = 0;
            while mask.count_ones() < target {
                mask |= 1 << e;
                e += 1;
            }
            Ok(CoverDescriptor {
                s,
                kind: CoverKind::TypeI {
                    blocking: KSet::raw(n, mask),
                },
            })
        }
        CoverKind::TypeII { family } => {
            let target = checked_power(k, s)?;
            if family.len() as u64 > target {
                return Err(Error::validation(format!(
                    "type II family has {} sets, more than k^s = {target}",
                    family.len()
                )));
            }
            let mut members = family.members().to_vec();
            let present: BTreeSet<KSet> = members.iter().copied().collect();
            for cand in KSubsetMasks::new(n, s) {
                if members.len() as u64 >= target {
                    break;
                }
                let c = KSet::raw(n, cand);
                if !present.contains(&c) {
                    members.push(c);
                }
            }
            if (members.len() as u64) < target {
                return Err(Error::param(format!(
                    "C({n}, {s}) < k^s = {target}; cannot pad the type II family"
                )));
            }
            members.sort_unstable();
            Ok(CoverDescriptor {
                s,
                kind: CoverKind::TypeII {
                    family: SetFamily::new(n, members, Some(s))?,
                },
            })
        }
    }
}

/// Random intersecting k-uniform family: k-sets in random order, each kept
/// if it meets everything kept so far, up to `max_size` members.
pub fn random_intersecting_family<R: Rng>(
    n: u32,
    k: u32,
    max_size: usize,
    rng: &mut R,
) -> Result<SetFamily> {
    let mut all = enumerate_ksets(GroundParams::new(n, k))?;
    all.shuffle(rng);
    let mut kept: Vec<KSet> = Vec::new();
    for cand in all {
        if kept.len() >= max_size {
            break;
        }
        if kept.iter().all(|f| !f.is_disjoint(&cand)) {
            kept.push(cand);
        }
    }
    kept.sort_unstable();
    SetFamily::new(n, kept, Some(k))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverCountBounds {
    /// `ln(n^{s−1} + C(n,s)^{k^s})`.
    pub count_log: f64,
    /// `s·k^s·u·ln n`.
    pub eq1_rhs_log: f64,
    /// `(n^{s−1} + C(n,s)^{k^s})^u ≤ n^{s k^s u}`, decided exactly.
    pub holds: bool,
}

/// Exponent cap for the exact big-integer comparison.
const MAX_EXACT_EXPONENT: u64 = 1 << 20;

pub fn cover_count_bounds(n: u32, k: u32, s: u32, u: u64) -> Result<CoverCountBounds> {
    if n == 0 || k == 0 || u == 0 {
        return Err(Error::param("n, k, u must be positive"));
    }
    if s < 2 {
        return Err(Error::param("s must be at least 2"));
    }
    if s > n {
        return Err(Error::param(format!("s = {s} exceeds n = {n}")));
    }
    let ks = checked_power(k, s)?;
    let exponent = ks
        .checked_mul(s as u64)
        .filter(|&e| e <= MAX_EXACT_EXPONENT)
        .ok_or_else(|| Error::param("s·k^s too large for exact evaluation"))?;

    let nb = BigUint::from(n);
    let count: BigUint =
        Pow::pow(nb.clone(), (s - 1) as u64) + Pow::pow(binomial_big(n as u64, s as u64), ks);
    let rhs_single: BigUint = if n == 1 {
        BigUint::one()
    } else {
        Pow::pow(nb, exponent)
    };
    // count^u <= rhs^u  <=>  count <= rhs for u >= 1
    let holds = count <= rhs_single;
    let count_log = ln_big(&count);
    let eq1_rhs_log = exponent as f64 * u as f64 * (n as f64).ln();
    Ok(CoverCountBounds {
        count_log,
        eq1_rhs_log,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, lists: &[&[u32]]) -> SetFamily {
        let v: Vec<Vec<u32>> = lists.iter().map(|l| l.to_vec()).collect();
        SetFamily::from_lists(n, &v, None).unwrap()
    }

    fn triangle() -> SetFamily {
        fam(3, &[&[1, 2], &[1, 3], &[2, 3]])
    }

    #[test]
    fn covering_numbers() {
        let star = fam(5, &[&[1, 2], &[1, 3], &[1, 4], &[1, 5]]);
        let c = covering_number(&star);
        assert_eq!(c.size, 1);
        assert_eq!(c.witness.to_one_based(), vec![1]);
        assert_eq!(covering_number(&triangle()).size, 2);
        assert_eq!(covering_number(&fam(4, &[&[2, 4]])).size, 1);
        let e = covering_number(&SetFamily::empty(4, Some(2)));
        assert_eq!((e.size, e.witness.is_empty()), (0, true));
    }

    #[test]
    fn covering_number_is_minimum() {
        // brute force over all subsets of the support
        let fano = fam(
            7,
            &[
                &[1, 2, 4],
                &[2, 3, 5],
                &[3, 4, 6],
                &[4, 5, 7],
                &[1, 5, 6],
                &[2, 6, 7],
                &[1, 3, 7],
            ],
        );
        for f in [triangle(), fano] {
            let c = covering_number(&f);
            let best = (0u64..1 << f.ground())
                .filter(|&m| f.members().iter().all(|x| x.mask() & m != 0))
                .map(u64::count_ones)
                .min()
                .unwrap();
            assert_eq!(c.size, best);
            assert!(f.members().iter().all(|x| !x.is_disjoint(&c.witness)));
        }
    }

    #[test]
    fn subfamilies() {
        let f = fam(3, &[&[1, 2], &[1, 3]]);
        let one = KSet::from_elements(3, [1]).unwrap();
        assert_eq!(subfamily_containing(&f, &one).len(), 2);
        let two_three = KSet::from_elements(3, [2, 3]).unwrap();
        assert!(subfamily_containing(&f, &two_three).is_empty());
        assert_eq!(subfamily_containing(&f, &KSet::from_mask(3, 0).unwrap()), f);
    }

    #[test]
    fn triangle_gives_type_ii() {
        let d = structural_cover(&triangle(), 2).unwrap();
        let g = d.s_sets().unwrap();
        assert_eq!(g.to_lists(), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert!(g.len() <= 4);
        assert!(verify_cover(&triangle(), &d));
    }

    #[test]
    fn stars_and_singletons_give_type_i() {
        let star = fam(5, &[&[1, 2], &[1, 3], &[1, 4]]);
        for s in 2..5 {
            let d = structural_cover(&star, s).unwrap();
            assert_eq!(d.blocking_set().unwrap().to_one_based(), vec![1]);
        }
        let single = fam(5, &[&[2, 4]]);
        let d = structural_cover(&single, 2).unwrap();
        let i = d.blocking_set().unwrap();
        assert_eq!(i.len(), 1);
        assert!(i.is_subset(&single.members()[0]));
    }

    #[test]
    fn rejects_non_intersecting() {
        let f = fam(4, &[&[1, 2], &[3, 4]]);
        assert!(matches!(structural_cover(&f, 2), Err(Error::Validation(_))));
        assert!(matches!(
            structural_cover(&triangle(), 1),
            Err(Error::Param(_))
        ));
    }

    #[test]
    fn verify_examples() {
        let ti = CoverDescriptor {
            s: 2,
            kind: CoverKind::TypeI {
                blocking: KSet::from_elements(3, [1]).unwrap(),
            },
        };
        assert!(!verify_cover(&triangle(), &ti));
        assert!(verify_cover(&SetFamily::empty(3, Some(2)), &ti));
    }

    #[test]
    fn descriptor_json() {
        let d = structural_cover(&triangle(), 2).unwrap();
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"type":"II","s":2,"G":[[1,2],[1,3],[2,3]]}"#
        );
        let star = fam(5, &[&[1, 2], &[1, 3]]);
        let d = structural_cover(&star, 3).unwrap();
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"type":"I","s":3,"I":[1]}"#
        );
    }

    #[test]
    fn padding_reaches_exact_sizes() {
        let star = fam(6, &[&[1, 2], &[1, 3]]);
        let d = structural_cover(&star, 3).unwrap();
        let p = pad_descriptor(&d, 6, 2).unwrap();
        assert_eq!(p.blocking_set().unwrap().len(), 2);
        assert!(p.blocking_set().unwrap().contains(0));
        assert!(verify_cover(&star, &p));

        let d = structural_cover(&triangle(), 2).unwrap();
        let t5 = fam(5, &[&[1, 2], &[1, 3], &[2, 3]]);
        let d5 = structural_cover(&t5, 2).unwrap();
        let p = pad_descriptor(&d5, 5, 2).unwrap();
        assert_eq!(p.s_sets().unwrap().len(), 4);
        assert!(verify_cover(&t5, &p));
        // C(3,2) = 3 < 2^2
        assert!(pad_descriptor(&d, 3, 2).is_err());
    }

    #[test]
    fn random_families_are_intersecting() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let f = random_intersecting_family(8, 3, 20, &mut rng).unwrap();
            assert!(is_intersecting(&f));
            assert!(!f.is_empty() && f.len() <= 20);
        }
    }

    #[test]
    fn eq1_example() {
        let b = cover_count_bounds(5, 2, 3, 1).unwrap();
        assert!((b.count_log - (1e8f64 + 25.0).ln()).abs() < 1e-9);
        assert!((b.eq1_rhs_log - 24.0 * 5f64.ln()).abs() < 1e-9);
        assert!(b.holds);
        assert!(cover_count_bounds(5, 2, 1, 1).is_err());
    }

    #[test]
    fn eq1_scan() {
        for n in 2..=10 {
            for k in 1..=3 {
                for s in 2..=3u32.min(n) {
                    for u in 1..=10 {
                        let b = cover_count_bounds(n, k, s, u).unwrap();
                        assert!(b.holds, "n={n} k={k} s={s} u={u}");
                        assert!(u as f64 * b.count_log <= b.eq1_rhs_log + 1e-9);
                    }
                }
            }
        }
    }
}
