//! The family `F_x` of subsets whose signed weight sum hits `x`, and checks
//! of the hypotheses of Milner's bound on intersecting antichains.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bounds::milner_bound;
use crate::error::{Error, Result};
use crate::rational::{common_denominator, Rational};

/// Enumeration limit for [`build_family`].
pub const FAMILY_CAP: u32 = 24;

/// Subsets of `[n]` as bitmasks (bit `i` is element `i + 1`), sorted and
/// deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct SubsetFamily {
    n: u32,
    members: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    n: u32,
    members: Vec<Vec<u32>>,
}

impl From<SubsetFamily> for FamilyRepr {
    fn from(f: SubsetFamily) -> Self {
        FamilyRepr {
            n: f.n,
            members: f.members.iter().map(|&m| elements(m)).collect(),
        }
    }
}

impl TryFrom<FamilyRepr> for SubsetFamily {
    type Error = Error;

    fn try_from(r: FamilyRepr) -> Result<Self> {
        let mut masks = Vec::with_capacity(r.members.len());
        for set in &r.members {
            let mut mask = 0u64;
            for &e in set {
                if e == 0 || e > r.n {
                    return Err(Error::InvalidParameter(format!(
                        "element {e} outside [1, {}]",
                        r.n
                    )));
                }
                mask |= 1 << (e - 1);
            }
            masks.push(mask);
        }
        SubsetFamily::new(r.n, masks)
    }
}

fn elements(mask: u64) -> Vec<u32> {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

impl SubsetFamily {
    pub fn new(n: u32, mut members: Vec<u64>) -> Result<Self> {
        if n > 64 {
            return Err(Error::InvalidParameter(format!(
                "ground set too large: {n}"
            )));
        }
        let universe = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if let Some(bad) = members.iter().find(|&&m| m & !universe != 0) {
            return Err(Error::InvalidParameter(format!(
                "mask {bad:#b} uses bits beyond n = {n}"
            )));
        }
        members.sort_unstable();
        members.dedup();
        Ok(SubsetFamily { n, members })
    }

    /// Builds a family from 1-based element lists.
    pub fn from_sets(n: u32, sets: &[&[u32]]) -> Result<Self> {
        FamilyRepr {
            n,
            members: sets.iter().map(|s| s.to_vec()).collect(),
        }
        .try_into()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn sets(&self) -> Vec<Vec<u32>> {
        self.members.iter().map(|&m| elements(m)).collect()
    }
}

/// `F_x = { A : sum_{i in A} v_i - sum_{i not in A} v_i = x }` for strictly
/// positive scalar weights.
pub fn build_family(weights: &[Rational], x: &Rational) -> Result<SubsetFamily> {
    build_family_capped(weights, x, FAMILY_CAP)
}

pub fn build_family_capped(weights: &[Rational], x: &Rational, cap: u32) -> Result<SubsetFamily> {
    if let Some(index) = weights.iter().position(|w| !w.is_positive()) {
        return Err(Error::InvalidWeight {
            index,
            reason: format!("weight {} is not strictly positive", weights[index]),
        });
    }
    let n = weights.len();
    if n as u64 > cap.min(63) as u64 {
        return Err(Error::CapExceeded {
            what: "subset family",
            size: n as u64,
            cap: cap.min(63) as u64,
        });
    }
    let den = common_denominator(weights.iter().chain(std::iter::once(x)));
    let scale = |r: &Rational| r.numer() * (&den / r.denom());
    let scaled: Vec<BigInt> = weights.iter().map(scale).collect();
    let total: BigInt = scaled.iter().sum();
    // s_A = 2 sigma_A - total, so s_A = x  <=>  2 sigma_A = total + x
    let goal = &total + scale(x);

    // Gray-code walk: consecutive masks differ in one element.
    let mut members = Vec::new();
    let mut twice_sigma = BigInt::zero();
    let mut prev = 0u64;
    for i in 0u64..(1u64 << n) {
        let mask = i ^ (i >> 1);
        let changed = mask ^ prev;
        if changed != 0 {
            let bit = changed.trailing_zeros() as usize;
            let step = &scaled[bit] * 2;
            if mask & changed != 0 {
                twice_sigma += step;
            } else {
                twice_sigma -= step;
            }
        }
        if twice_sigma == goal {
            members.push(mask);
        }
        prev = mask;
    }
    SubsetFamily::new(n as u32, members)
}

/// No member is a proper subset of another.
pub fn is_antichain(f: &SubsetFamily) -> bool {
    let m = f.members();
    m.iter()
        .enumerate()
        .all(|(i, &a)| m.iter().enumerate().all(|(j, &b)| i == j || a & b != a))
}

/// Every pair, `A` with itself included, shares at least `k` elements.
pub fn is_k_intersecting(f: &SubsetFamily, k: u32) -> bool {
    let m = f.members();
    m.iter()
        .enumerate()
        .all(|(i, &a)| m[i..].iter().all(|&b| (a & b).count_ones() >= k))
}

/// `|F| <= binom(n, ceil((n+k)/2))`, after checking that `F` is a
/// k-intersecting antichain.
pub fn verify_milner(f: &SubsetFamily, k: u32) -> Result<bool> {
    if !is_antichain(f) {
        return Err(Error::MilnerHypothesis("family is not an antichain".into()));
    }
    if !is_k_intersecting(f, k) {
        return Err(Error::MilnerHypothesis(format!(
            "family is not {k}-intersecting"
        )));
    }
    Ok(num_bigint::BigUint::from(f.len()) <= milner_bound(f.n() as u64, k as u64))
}

/// `sigma_A = sum_{i in A} v_i`.
pub fn sigma(weights: &[Rational], mask: u64) -> Rational {
    weights
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, w)| w.clone())
        .sum()
}

/// `s_A = sigma_A - sigma_{A^c}`.
pub fn signed_sum(weights: &[Rational], mask: u64) -> Rational {
    let all = if weights.len() == 64 {
        u64::MAX
    } else {
        (1u64 << weights.len()) - 1
    };
    sigma(weights, mask) - sigma(weights, all & !mask)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(ws: &[&str]) -> Vec<Rational> {
        ws.iter().map(|w| w.parse().unwrap()).collect()
    }

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn family_examples() {
        let f = build_family(&rs(&["1", "1", "1"]), &r("1")).unwrap();
        assert_eq!(f.sets(), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);

        let f = build_family(&rs(&["1", "1"]), &r("0")).unwrap();
        assert_eq!(f.sets(), vec![vec![1], vec![2]]);

        let f = build_family(&rs(&["1/2", "1"]), &r("3/2")).unwrap();
        assert_eq!(f.sets(), vec![vec![1, 2]]);

        assert!(matches!(
            build_family(&rs(&["1", "0"]), &r("1")),
            Err(Error::InvalidWeight { index: 1, .. })
        ));
        assert!(build_family(&rs(&["-1"]), &r("1")).is_err());
        assert!(build_family_capped(&rs(&["1"; 5]), &r("1"), 4).is_err());
    }

    #[test]
    fn family_matches_direct_enumeration() {
        let w = rs(&["1/2", "1/3", "3/4", "1", "1/6", "1/2"]);
        for x in ["1/6", "1/2", "5/4", "2", "0", "3/2"] {
            let x = r(x);
            let got = build_family(&w, &x).unwrap();
            let expect: Vec<u64> = (0..64u64).filter(|&m| signed_sum(&w, m) == x).collect();
            assert_eq!(got.members(), expect.as_slice());
        }
    }

    #[test]
    fn antichain_examples() {
        assert!(is_antichain(
            &SubsetFamily::from_sets(2, &[&[1], &[2]]).unwrap()
        ));
        assert!(!is_antichain(
            &SubsetFamily::from_sets(2, &[&[1], &[1, 2]]).unwrap()
        ));
        assert!(is_antichain(
            &build_family(&rs(&["1", "1", "1"]), &r("1")).unwrap()
        ));
    }

    #[test]
    fn intersecting_examples() {
        assert!(is_k_intersecting(
            &SubsetFamily::from_sets(3, &[&[1, 2], &[2, 3]]).unwrap(),
            1
        ));
        assert!(!is_k_intersecting(
            &SubsetFamily::from_sets(2, &[&[1], &[2]]).unwrap(),
            1
        ));
        let f = build_family(&rs(&["1", "1", "1"]), &r("1")).unwrap();
        assert!(is_k_intersecting(&f, 1));
        // the pair (A, A) counts: a single 1-set is not 2-intersecting
        assert!(!is_k_intersecting(
            &SubsetFamily::from_sets(3, &[&[1]]).unwrap(),
            2
        ));
    }

    #[test]
    fn milner_examples() {
        let f = build_family(&rs(&["1", "1", "1"]), &r("1")).unwrap();
        assert_eq!(verify_milner(&f, 1), Ok(true));

        let f = build_family(&rs(&["1", "1", "1", "1"]), &r("1")).unwrap();
        assert!(f.is_empty());
        assert_eq!(verify_milner(&f, 1), Ok(true));

        let f = build_family(&rs(&["1/2"; 4]), &r("1")).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(verify_milner(&f, 1), Ok(true));

        let chain = SubsetFamily::from_sets(2, &[&[1], &[1, 2]]).unwrap();
        assert!(matches!(
            verify_milner(&chain, 0),
            Err(Error::MilnerHypothesis(_))
        ));
        let disjoint = SubsetFamily::from_sets(2, &[&[1], &[2]]).unwrap();
        assert!(matches!(
            verify_milner(&disjoint, 1),
            Err(Error::MilnerHypothesis(_))
        ));
        // all 2-subsets of [4] form a 0-intersecting antichain of size 6 = binom(4,2)
        let pairs =
            SubsetFamily::new(4, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]).unwrap();
        assert_eq!(verify_milner(&pairs, 0), Ok(true));
        assert!(verify_milner(&pairs, 1).is_err());
    }

    #[test]
    fn family_validation_and_json() {
        assert!(SubsetFamily::new(2, vec![0b100]).is_err());
        assert!(SubsetFamily::from_sets(2, &[&[3]]).is_err());
        let f = SubsetFamily::new(3, vec![0b110, 0b011, 0b011]).unwrap();
        assert_eq!(f.len(), 2);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"n":3,"members":[[1,2],[2,3]]}"#);
        assert_eq!(serde_json::from_str::<SubsetFamily>(&text).unwrap(), f);
    }
}
