//! Counterexample search for the two conjectured generalisations: sums of
//! weighted progression-uniform variables, and the Rademacher bound with
//! `||.||_2` replaced by another norm.
//!
//! Exploration ([`anneal`]) scores candidates in floating point; nothing it
//! finds is reported until [`certify`] has recomputed both sides exactly.

mod anneal;
mod ledger;

pub use anneal::{
    anneal, anneal_partial, resume, resume_partial, AnnealConfig, BestCandidate, ChainState,
    Checkpoint, Scored, SearchOutcome, TracePoint, MAX_SEARCH_DIM, NO_SCORE,
};
pub use ledger::{append_ledger, best_per_cell, read_ledger, Cell, LedgerEntry};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bounds::{conjecture1_level, nonuniform_bound_for_level, unit_progression_law};
use crate::engine::{ApUniformSpec, Engine, Summands, WeightConfig};
use crate::error::{Error, Result};
use crate::norm::NormSpec;
use crate::rational::{ceil_norm, floor_norm, norm_sq, Rational, VecD};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Conjecture {
    /// Weighted sums of uniform variables on `{-m+1, -m+3, ..., m-1}`.
    C1 { m: u32 },
    /// The non-uniform Rademacher bound measured in `norm`. Weights are
    /// constrained in `constraint`, which defaults to `norm`.
    C2 {
        norm: NormSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        constraint: Option<NormSpec>,
    },
}

impl Conjecture {
    pub fn c2(norm: NormSpec) -> Self {
        Conjecture::C2 {
            norm,
            constraint: None,
        }
    }

    /// Norm whose unit ball holds the weights.
    pub fn constraint_norm(&self) -> NormSpec {
        match self {
            Conjecture::C1 { .. } => NormSpec::L2,
            Conjecture::C2 { norm, constraint } => {
                constraint.clone().unwrap_or_else(|| norm.clone())
            }
        }
    }

    pub fn summands(&self) -> Summands {
        match self {
            Conjecture::C1 { m } => Summands::ApUniform { m: *m },
            Conjecture::C2 { .. } => Summands::Rademacher,
        }
    }

    /// Short cell label, e.g. `C1(m=3)` or `C2(linf)`.
    pub fn label(&self) -> String {
        match self {
            Conjecture::C1 { m } => format!("C1(m={m})"),
            Conjecture::C2 {
                norm,
                constraint: None,
            } => format!("C2({norm})"),
            Conjecture::C2 {
                norm,
                constraint: Some(c),
            } => format!("C2({norm};constraint={c})"),
        }
    }
}

/// One search cell. `n` is the largest number of summands explored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchProblem {
    pub conjecture: Conjecture,
    pub n: usize,
    pub d: usize,
    pub budget: u64,
    pub seed: u64,
}

impl SearchProblem {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidParameter("budget must be at least 1".into()));
        }
        if self.n == 0 || self.d == 0 {
            return Err(Error::InvalidParameter("n and d must be at least 1".into()));
        }
        match &self.conjecture {
            Conjecture::C1 { m } if *m < 3 => Err(Error::InvalidParameter(format!(
                "the progression conjecture needs m >= 3, got {m}"
            ))),
            Conjecture::C1 { .. } => Ok(()),
            Conjecture::C2 { norm, constraint } => {
                norm.validate(self.d)?;
                if let Some(c) = constraint {
                    c.validate(self.d)?;
                }
                Ok(())
            }
        }
    }

    /// Checks that `cfg` is admissible for this problem.
    pub fn check_config(&self, cfg: &WeightConfig) -> Result<()> {
        if cfg.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: cfg.dim(),
            });
        }
        if cfg.len() > self.n {
            return Err(Error::InvalidParameter(format!(
                "{} weights exceed the problem's n = {}",
                cfg.len(),
                self.n
            )));
        }
        let constraint = self.conjecture.constraint_norm();
        for (index, w) in cfg.weights().iter().enumerate() {
            if w.is_zero() {
                return Err(Error::InvalidWeight {
                    index,
                    reason: "zero weight not allowed".into(),
                });
            }
            if !constraint.within_unit_ball(w) {
                return Err(Error::InvalidWeight {
                    index,
                    reason: format!("{w} lies outside the {constraint} unit ball"),
                });
            }
        }
        Ok(())
    }
}

/// How `||x||` is rounded to the integer level in the progression bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rounding {
    /// Lower integer part, as the progression conjecture is stated.
    Down,
    /// Upper integer part, as in the Rademacher bound.
    Up,
}

/// The atom where `lhs - rhs` is largest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginAtom {
    pub x: VecD,
    pub lhs: Rational,
    pub rhs: Rational,
    pub margin: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Margin {
    /// `None` when every non-zero atom had a zero right-hand side.
    pub best: Option<MarginAtom>,
    /// Non-zero atoms skipped because the conjectured bound there is 0
    /// (a parity mismatch, flagged rather than counted as a violation).
    pub zero_rhs_atoms: u64,
}

impl Margin {
    pub fn margin(&self) -> Option<&Rational> {
        self.best.as_ref().map(|b| &b.margin)
    }

    pub fn is_violation(&self) -> bool {
        self.margin().is_some_and(Rational::is_positive)
    }
}

// Both laws are symmetric, so ties between x and -x go to the one whose
// first non-zero coordinate is positive.
fn leads_positive(x: &VecD) -> bool {
    x.coords()
        .iter()
        .find(|c| !c.is_zero())
        .is_some_and(Rational::is_positive)
}

fn best_margin<I>(atoms: I) -> Result<Margin>
where
    I: IntoIterator<Item = Result<(VecD, Rational, Rational, bool)>>,
{
    let mut best: Option<MarginAtom> = None;
    let mut zero_rhs_atoms = 0;
    for item in atoms {
        let (x, lhs, rhs, flag_zero) = item?;
        if flag_zero && rhs.is_zero() {
            zero_rhs_atoms += 1;
            continue;
        }
        let margin = &lhs - &rhs;
        let better = best.as_ref().is_none_or(|b| {
            (&margin, &lhs, leads_positive(&x)) > (&b.margin, &b.lhs, leads_positive(&b.x))
        });
        if better {
            best = Some(MarginAtom {
                x,
                lhs,
                rhs,
                margin,
            });
        }
    }
    Ok(Margin {
        best,
        zero_rhs_atoms,
    })
}

/// Rademacher sum against `P(R_n = k + delta_{n,k})`, `k = ceil(||x||)` in `norm`.
pub fn rademacher_margin(engine: &Engine, norm: &NormSpec, cfg: &WeightConfig) -> Result<Margin> {
    let n = cfg.len() as u64;
    let law = engine.full_distribution(cfg)?;
    let mut levels: BTreeMap<u64, Rational> = BTreeMap::new();
    best_margin(law.iter().filter(|(x, _)| !x.is_zero()).map(|(x, p)| {
        let k = norm.ceil(x)?;
        let rhs = levels
            .entry(k)
            .or_insert_with(|| nonuniform_bound_for_level(n, k).bound)
            .clone();
        Ok((x.clone(), p.clone(), rhs, false))
    }))
}

/// Progression sum against `P(U_1 + ... + U_n = level)` with the level
/// taken from the Euclidean norm of `x` under `rounding`. Accepts any
/// `m >= 2`; `m = 2` with [`Rounding::Up`] reproduces [`rademacher_margin`]
/// under `L2`.
pub fn progression_margin(
    engine: &Engine,
    m: u32,
    rounding: Rounding,
    cfg: &WeightConfig,
) -> Result<Margin> {
    let spec = ApUniformSpec::new(m)?;
    let n = cfg.len() as u64;
    let law = engine.ap_uniform_sum_distribution(spec, cfg)?;
    let unit = unit_progression_law(engine, n, spec)?;
    best_margin(law.iter().filter(|(x, _)| !x.is_zero()).map(|(x, p)| {
        let q = norm_sq(x);
        let k = match rounding {
            Rounding::Down => floor_norm(&q)?,
            Rounding::Up => ceil_norm(&q)?,
        };
        let rhs = unit.at(conjecture1_level(n, m, k));
        Ok((x.clone(), p.clone(), rhs, true))
    }))
}

/// Exact `lhs - rhs` over every non-zero atom of `cfg`.
pub fn violation_margin(
    engine: &Engine,
    problem: &SearchProblem,
    cfg: &WeightConfig,
) -> Result<Margin> {
    problem.validate()?;
    problem.check_config(cfg)?;
    match &problem.conjecture {
        Conjecture::C1 { m } => progression_margin(engine, *m, Rounding::Down, cfg),
        Conjecture::C2 { norm, .. } => rademacher_margin(engine, norm, cfg),
    }
}

/// What the explorer believed about a candidate.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub float_score: Option<f64>,
    pub lhs: Option<Rational>,
}

/// Machine-checkable witness that `P(S = x) > bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleCertificate {
    pub problem: SearchProblem,
    pub config: WeightConfig,
    pub x: VecD,
    pub lhs: Rational,
    pub rhs: Rational,
    pub margin: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RefutationReason {
    /// `lhs <= rhs` exactly.
    NonPositiveMargin,
    /// The conjectured bound is 0 at `x` (parity mismatch); flagged only.
    ZeroRhs,
}

/// A candidate that did not survive exact recomputation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refutation {
    pub problem: SearchProblem,
    pub config: WeightConfig,
    pub x: VecD,
    pub claimed_lhs: Option<Rational>,
    pub float_score: Option<f64>,
    pub lhs: Rational,
    pub rhs: Rational,
    pub margin: Rational,
    pub reason: RefutationReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Certification {
    Certified(CounterexampleCertificate),
    Refuted(Refutation),
}

/// Conjectured right-hand side at `x`, recomputed from scratch.
fn exact_rhs(engine: &Engine, problem: &SearchProblem, n: usize, x: &VecD) -> Result<Rational> {
    match &problem.conjecture {
        Conjecture::C1 { m } => {
            let k = floor_norm(&norm_sq(x))?;
            let law = unit_progression_law(engine, n as u64, ApUniformSpec::new(*m)?)?;
            Ok(law.at(conjecture1_level(n as u64, *m, k)))
        }
        Conjecture::C2 { norm, .. } => {
            Ok(nonuniform_bound_for_level(n as u64, norm.ceil(x)?).bound)
        }
    }
}

/// Recomputes both sides at `(cfg, x)` exactly (the left side by
/// meet-in-the-middle) and issues a certificate only for a positive margin.
pub fn certify(
    engine: &Engine,
    problem: &SearchProblem,
    cfg: &WeightConfig,
    x: &VecD,
    claim: &Claim,
) -> Result<Certification> {
    problem.validate()?;
    problem.check_config(cfg)?;
    if x.is_zero() {
        return Err(Error::InvalidParameter(
            "the conjectures concern x != 0".into(),
        ));
    }
    let lhs = engine.atom(problem.conjecture.summands(), cfg, x)?;
    let rhs = exact_rhs(engine, problem, cfg.len(), x)?;
    let margin = &lhs - &rhs;
    let zero_rhs = matches!(problem.conjecture, Conjecture::C1 { .. }) && rhs.is_zero();
    if margin.is_positive() && !zero_rhs {
        return Ok(Certification::Certified(CounterexampleCertificate {
            problem: problem.clone(),
            config: cfg.clone(),
            x: x.clone(),
            lhs,
            rhs,
            margin,
        }));
    }
    Ok(Certification::Refuted(Refutation {
        problem: problem.clone(),
        config: cfg.clone(),
        x: x.clone(),
        claimed_lhs: claim.lhs.clone(),
        float_score: claim.float_score,
        lhs,
        rhs,
        margin,
        reason: if zero_rhs {
            RefutationReason::ZeroRhs
        } else {
            RefutationReason::NonPositiveMargin
        },
    }))
}

impl CounterexampleCertificate {
    /// Independent re-check through the full law (not meet-in-the-middle).
    pub fn reverify(&self, engine: &Engine) -> Result<bool> {
        self.problem.validate()?;
        self.problem.check_config(&self.config)?;
        let law = engine.law(self.problem.conjecture.summands(), &self.config)?;
        let lhs = law.probability(&self.x);
        let rhs = exact_rhs(engine, &self.problem, self.config.len(), &self.x)?;
        let flagged = matches!(self.problem.conjecture, Conjecture::C1 { .. }) && rhs.is_zero();
        Ok(!flagged
            && lhs == self.lhs
            && rhs == self.rhs
            && self.margin == &lhs - &rhs
            && self.margin.is_positive())
    }
}
