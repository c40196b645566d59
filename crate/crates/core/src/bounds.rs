//! Closed-form small-ball bounds, the dispatcher choosing the right one for a
//! target point, and the configurations that attain them.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::engine::{binomial, rademacher_atom, ApUniformSpec, Engine, WeightConfig};
use crate::error::{Error, Result};
use crate::rational::{ceil_norm, floor_norm, norm_sq, Rational, VecD};

/// Which inequality a [`BoundReport`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    /// Uniform bound `binom(n, n/2) / 2^n`.
    ErdosKleitman,
    /// Bound in terms of `k = ceil(||x||)`, for `x != 0`.
    NonUniform,
    /// `x = 0` with `n` odd.
    ZeroOdd,
    /// Supremum over `n` when zero weights are allowed.
    ZeroWeightsSup,
    /// `exp(-||x||^2 / 2n)`, floating point.
    Hoeffding,
    /// Conjectured bound for progression-uniform summands.
    Conjecture1,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u64,
    pub k: u64,
    pub delta: u8,
    pub bound: Rational,
    pub which_theorem: Theorem,
}

/// Parity correction: 0 iff `n + k` is even.
pub fn delta(n: i64, k: i64) -> u8 {
    (n + k).rem_euclid(2) as u8
}

fn delta_u(n: u64, k: u64) -> u8 {
    ((n ^ k) & 1) as u8
}

fn require_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(())
}

/// `binom(n, floor(n/2)) / 2^n`.
pub fn erdos_kleitman_bound(n: u64) -> Rational {
    rademacher_atom(n, delta_u(n, 0) as i64)
}

/// `P(R_n = level)` where `level` may exceed `n` (then 0).
fn rademacher_level(n: u64, level: u64) -> Rational {
    i64::try_from(level)
        .map(|j| rademacher_atom(n, j))
        .unwrap_or_else(|_| Rational::zero())
}

/// Bound on `P(S_n = x)` for `||x||^2 = norm_sq > 0`.
pub fn nonuniform_bound(n: u64, norm_sq: &Rational) -> Result<BoundReport> {
    require_n(n)?;
    if !norm_sq.is_positive() {
        return Err(if norm_sq.is_negative() {
            Error::NegativeNorm(norm_sq.to_string())
        } else {
            Error::ZeroNorm
        });
    }
    let k = ceil_norm(norm_sq)?;
    Ok(nonuniform_bound_for_level(n, k))
}

/// Same as [`nonuniform_bound`] once `k` is known.
pub fn nonuniform_bound_for_level(n: u64, k: u64) -> BoundReport {
    let delta = delta_u(n, k);
    let level = k.saturating_add(delta as u64);
    BoundReport {
        n,
        k,
        delta,
        bound: rademacher_level(n, level),
        which_theorem: Theorem::NonUniform,
    }
}

/// `P(R_{n-1}/2 + e_n = 0) = P(R_{n-1} = 2)` for odd `n`.
pub fn theorem4_bound(n: u64) -> Result<Rational> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "the odd zero-target bound needs odd n, got {n}"
        )));
    }
    Ok(rademacher_atom(n - 1, 2))
}

/// `P(R_{k^2} = k)` with `k = ceil(||x||)`.
pub fn zero_weights_sup(norm_sq: &Rational) -> Result<Rational> {
    Ok(zero_weights_sup_report(norm_sq)?.bound)
}

pub fn zero_weights_sup_report(norm_sq: &Rational) -> Result<BoundReport> {
    if !norm_sq.is_positive() {
        return Err(Error::ZeroNorm);
    }
    let k = ceil_norm(norm_sq)?;
    let n = k
        .checked_mul(k)
        .ok_or_else(|| Error::Overflow(format!("k = {k} is too large to square")))?;
    Ok(BoundReport {
        n,
        k,
        delta: delta_u(n, k),
        bound: rademacher_atom(n, k as i64),
        which_theorem: Theorem::ZeroWeightsSup,
    })
}

/// `exp(-||x||^2 / (2n))`; only ever used for comparison.
pub fn hoeffding_bound(n: u64, norm_sq: &Rational) -> f64 {
    (-norm_sq.to_f64() / (2.0 * n as f64)).exp()
}

/// Picks the applicable bound for `P(S_n = x)`.
pub fn bound_dispatch(n: u64, x: &VecD) -> Result<BoundReport> {
    require_n(n)?;
    if !x.is_zero() {
        return nonuniform_bound(n, &norm_sq(x));
    }
    let delta = delta_u(n, 0);
    if n.is_multiple_of(2) {
        Ok(BoundReport {
            n,
            k: 0,
            delta,
            bound: erdos_kleitman_bound(n),
            which_theorem: Theorem::ErdosKleitman,
        })
    } else {
        Ok(BoundReport {
            n,
            k: 0,
            delta,
            bound: theorem4_bound(n)?,
            which_theorem: Theorem::ZeroOdd,
        })
    }
}

/// `n` copies of `x / (k + delta_{n,k})`; attains the non-uniform bound at `x`.
pub fn extremal_config(n: u64, d: usize, x: &VecD) -> Result<WeightConfig> {
    require_n(n)?;
    if x.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: x.dim(),
        });
    }
    let q = norm_sq(x);
    if q.is_zero() {
        return Err(Error::ZeroNorm);
    }
    let k = ceil_norm(&q)?;
    let level = k + delta_u(n, k) as u64;
    if level > n {
        return Err(Error::ConstructionImpossible { n, level });
    }
    let w = x.scale(&Rational::new(1, level as i64));
    WeightConfig::new(vec![w; n as usize], false)
}

/// `k^2` copies of `x / k`; attains `P(R_{k^2} = k)` at `x`.
pub fn zero_weights_extremal(x: &VecD) -> Result<WeightConfig> {
    let report = zero_weights_sup_report(&norm_sq(x))?;
    let w = x.scale(&Rational::new(1, report.k as i64));
    WeightConfig::new(vec![w; report.n as usize], false)
}

/// Target point of the conjectured progression bound: `k` for odd `m`,
/// `k + delta_{n,k}` for even `m`.
pub fn conjecture1_level(n: u64, m: u32, k: u64) -> u64 {
    if m % 2 == 1 {
        k
    } else {
        k + delta_u(n, k) as u64
    }
}

/// `P(U_1 + ... + U_n = level)` with `k = floor(||x||)`.
pub fn conjecture1_bound(engine: &Engine, n: u64, m: u32, norm_sq: &Rational) -> Result<Rational> {
    Ok(conjecture1_report(engine, n, m, norm_sq)?.bound)
}

pub fn conjecture1_report(
    engine: &Engine,
    n: u64,
    m: u32,
    norm_sq: &Rational,
) -> Result<BoundReport> {
    require_n(n)?;
    if m < 3 {
        return Err(Error::InvalidParameter(format!(
            "the progression conjecture needs m >= 3, got {m}"
        )));
    }
    if !norm_sq.is_positive() {
        return Err(Error::ZeroNorm);
    }
    let k = floor_norm(norm_sq)?;
    let level = conjecture1_level(n, m, k);
    let law = unit_progression_law(engine, n, ApUniformSpec::new(m)?)?;
    Ok(BoundReport {
        n,
        k,
        delta: delta_u(n, k),
        bound: law.at(level),
        which_theorem: Theorem::Conjecture1,
    })
}

/// Law of `U_1 + ... + U_n` (unit weights), indexed by integer point.
#[derive(Debug, Clone)]
pub struct UnitProgressionLaw {
    law: crate::engine::AtomDistribution,
}

impl UnitProgressionLaw {
    pub fn at(&self, level: u64) -> Rational {
        match i64::try_from(level) {
            Ok(j) => self.law.probability(&VecD::from_ints(&[j])),
            Err(_) => Rational::zero(),
        }
    }
}

pub fn unit_progression_law(
    engine: &Engine,
    n: u64,
    spec: ApUniformSpec,
) -> Result<UnitProgressionLaw> {
    let ones = WeightConfig::scalars(&vec![Rational::one(); n as usize])?;
    Ok(UnitProgressionLaw {
        law: engine.ap_uniform_sum_distribution(spec, &ones)?,
    })
}

/// Milner's bound `binom(n, ceil((n+k)/2))` on a k-intersecting antichain.
pub fn milner_bound(n: u64, k: u64) -> BigUint {
    binomial(n, (n + k).div_ceil(2))
}
