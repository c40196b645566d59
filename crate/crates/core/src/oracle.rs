//! Brute-force verification of the proved inequalities against exact
//! enumeration, over seeded batches of grid configurations.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    erdos_kleitman_bound, extremal_config, nonuniform_bound_for_level, theorem4_bound,
    zero_weights_extremal, zero_weights_sup, Theorem,
};
use crate::engine::{Engine, WeightConfig};
use crate::error::{Error, Result};
use crate::parallel::{derive_seed, map_ordered};
use crate::rational::{ceil_norm, norm_sq, Rational, VecD};

/// Seeded source of weight configurations with coordinates `j / grid_denominator`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigGenerator {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub grid_denominator: u32,
    pub allow_zero: bool,
    pub count: usize,
}

impl ConfigGenerator {
    pub fn new(n: usize, d: usize, seed: u64, count: usize) -> Self {
        ConfigGenerator {
            n,
            d,
            seed,
            grid_denominator: 16,
            allow_zero: false,
            count,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 || self.grid_denominator == 0 {
            return Err(Error::InvalidParameter(
                "generator needs n, d and grid denominator >= 1".into(),
            ));
        }
        Ok(())
    }

    /// Rejection-samples grid points in the closed unit ball. With
    /// `allow_zero`, a quarter of the weights are forced to zero.
    pub fn configs(&self) -> Result<Vec<WeightConfig>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let g = self.grid_denominator as i64;
        let mut out = Vec::with_capacity(self.count);
        for _ in 0..self.count {
            let weights = (0..self.n)
                .map(|_| {
                    if self.allow_zero && rng.gen_ratio(1, 4) {
                        return VecD::zeros(self.d);
                    }
                    loop {
                        let coords: Vec<i64> = (0..self.d).map(|_| rng.gen_range(-g..=g)).collect();
                        let q: i64 = coords.iter().map(|c| c * c).sum();
                        if q > g * g || (q == 0 && !self.allow_zero) {
                            continue;
                        }
                        return VecD::new(
                            coords.into_iter().map(|c| Rational::new(c, g)).collect(),
                        );
                    }
                })
                .collect();
            out.push(WeightConfig::new(weights, self.allow_zero)?);
        }
        Ok(out)
    }
}

/// An exact counterexample to a checked inequality; `lhs > rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub config: WeightConfig,
    pub x: VecD,
    pub lhs: Rational,
    pub rhs: Rational,
    pub theorem: Theorem,
}

/// A configuration and target where a bound holds with equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityRecord {
    pub theorem: Theorem,
    pub n: usize,
    pub d: usize,
    pub k: u64,
    pub config: WeightConfig,
    pub x: VecD,
    pub value: Rational,
}

/// Largest observed atom probability for one `(theorem, n, d, k)` cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRow {
    pub theorem: Theorem,
    pub n: usize,
    pub d: usize,
    pub k: u64,
    pub lhs: Rational,
    pub rhs: Rational,
    pub equality: bool,
}

#[derive(Debug, Clone, Default)]
struct ConfigCheck {
    atoms_checked: u64,
    violations: Vec<ViolationRecord>,
    equalities: Vec<EqualityRecord>,
    /// Per `k`: largest atom probability and the bound it was checked against.
    cells: BTreeMap<u64, (Rational, Rational)>,
}

fn check_config(engine: &Engine, theorem: Theorem, cfg: &WeightConfig) -> Result<ConfigCheck> {
    let n = cfg.len();
    let zero_weights_ok = matches!(theorem, Theorem::ZeroWeightsSup);
    if !zero_weights_ok && cfg.has_zero_weight() {
        return Err(Error::InvalidParameter(format!(
            "{theorem:?} requires non-zero weights"
        )));
    }
    if theorem == Theorem::ZeroOdd && n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "the odd zero-target bound needs odd n, got {n}"
        )));
    }
    let law = engine.full_distribution(cfg)?;
    let mut out = ConfigCheck::default();
    let mut level_bounds: BTreeMap<u64, Rational> = BTreeMap::new();
    let mut check = |x: &VecD, lhs: &Rational, k: u64, rhs: Rational| {
        out.atoms_checked += 1;
        let cell = out
            .cells
            .entry(k)
            .or_insert_with(|| (Rational::zero(), rhs.clone()));
        if *lhs > cell.0 {
            cell.0 = lhs.clone();
        }
        if *lhs > rhs {
            out.violations.push(ViolationRecord {
                config: cfg.clone(),
                x: x.clone(),
                lhs: lhs.clone(),
                rhs,
                theorem,
            });
        } else if *lhs == rhs && lhs.is_positive() {
            out.equalities.push(EqualityRecord {
                theorem,
                n,
                d: cfg.dim(),
                k,
                config: cfg.clone(),
                x: x.clone(),
                value: rhs,
            });
        }
    };
    match theorem {
        Theorem::NonUniform => {
            for (x, p) in law.iter().filter(|(x, _)| !x.is_zero()) {
                let k = ceil_norm(&norm_sq(x))?;
                let rhs = level_bounds
                    .entry(k)
                    .or_insert_with(|| nonuniform_bound_for_level(n as u64, k).bound)
                    .clone();
                check(x, p, k, rhs);
            }
        }
        Theorem::ErdosKleitman => {
            let rhs = erdos_kleitman_bound(n as u64);
            for (x, p) in law.iter() {
                check(x, p, ceil_norm(&norm_sq(x))?, rhs.clone());
            }
        }
        Theorem::ZeroOdd => {
            let zero = VecD::zeros(cfg.dim());
            check(&zero, &law.probability(&zero), 0, theorem4_bound(n as u64)?);
        }
        Theorem::ZeroWeightsSup => {
            for (x, p) in law.iter().filter(|(x, _)| !x.is_zero()) {
                let q = norm_sq(x);
                let k = ceil_norm(&q)?;
                let rhs = match level_bounds.get(&k) {
                    Some(b) => b.clone(),
                    None => {
                        let b = zero_weights_sup(&q)?;
                        level_bounds.insert(k, b.clone());
                        b
                    }
                };
                check(x, p, k, rhs);
            }
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "{other:?} is not checked by the oracle"
            )))
        }
    }
    Ok(out)
}

/// Every non-zero atom against the non-uniform bound.
pub fn verify_theorem2(engine: &Engine, cfg: &WeightConfig) -> Result<Vec<ViolationRecord>> {
    Ok(check_config(engine, Theorem::NonUniform, cfg)?.violations)
}

/// The largest atom against `binom(n, n/2) / 2^n`.
pub fn verify_theorem1(engine: &Engine, cfg: &WeightConfig) -> Result<Vec<ViolationRecord>> {
    Ok(check_config(engine, Theorem::ErdosKleitman, cfg)?.violations)
}

/// `P(S_n = 0)` against `P(R_{n-1} = 2)` for odd `n`.
pub fn verify_theorem4(engine: &Engine, cfg: &WeightConfig) -> Result<Vec<ViolationRecord>> {
    Ok(check_config(engine, Theorem::ZeroOdd, cfg)?.violations)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem3Report {
    pub x: VecD,
    pub n_max: usize,
    pub sup: Rational,
    pub configs_checked: u64,
    pub atoms_checked: u64,
    pub violations: Vec<ViolationRecord>,
    /// `zero_weights_extremal(x)` hits the supremum exactly.
    pub extremal_attained: bool,
    pub label: String,
}

/// Samples zero-weight-allowed configurations for every `n <= n_max` and
/// checks all their non-zero atoms (and `x`) against `P(R_{k^2} = k)`.
pub fn verify_theorem3_sample(
    engine: &Engine,
    x: &VecD,
    n_max: usize,
    gen: &ConfigGenerator,
) -> Result<Theorem3Report> {
    if !gen.allow_zero {
        return Err(Error::InvalidParameter(
            "the zero-weights supremum is sampled with allow_zero = true".into(),
        ));
    }
    if x.dim() != gen.d {
        return Err(Error::DimensionMismatch {
            expected: gen.d,
            found: x.dim(),
        });
    }
    let q = norm_sq(x);
    let sup = zero_weights_sup(&q)?;
    let mut report = Theorem3Report {
        x: x.clone(),
        n_max,
        sup: sup.clone(),
        configs_checked: 0,
        atoms_checked: 0,
        violations: Vec::new(),
        extremal_attained: false,
        label: format!("supremum verified up to n_max = {n_max}"),
    };
    for n in 1..=n_max {
        let sub = ConfigGenerator {
            n,
            seed: derive_seed(gen.seed, n as u64),
            ..gen.clone()
        };
        let configs = sub.configs()?;
        let checks = map_ordered(&configs, |cfg| -> Result<(ConfigCheck, Rational)> {
            let check = check_config(engine, Theorem::ZeroWeightsSup, cfg)?;
            Ok((check, engine.atom_probability(cfg, x)?))
        });
        for (cfg, result) in configs.iter().zip(checks) {
            let (check, at_x) = result?;
            report.configs_checked += 1;
            report.atoms_checked += check.atoms_checked;
            report.violations.extend(check.violations);
            if at_x > sup {
                report.violations.push(ViolationRecord {
                    config: cfg.clone(),
                    x: x.clone(),
                    lhs: at_x,
                    rhs: sup.clone(),
                    theorem: Theorem::ZeroWeightsSup,
                });
            }
        }
    }
    let extremal = zero_weights_extremal(x)?;
    report.extremal_attained = engine.atom_probability(&extremal, x)? == sup;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignOptions {
    /// Add the equality-attaining configurations of each theorem to the batch.
    pub include_extremal: bool,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        CampaignOptions {
            include_extremal: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub theorems: Vec<Theorem>,
    pub generator: ConfigGenerator,
    pub options: CampaignOptions,
    pub configs_checked: u64,
    pub atoms_checked: u64,
    pub equality_cases: u64,
    pub violations: Vec<ViolationRecord>,
    /// Equality cases, kept as regression fixtures.
    pub fixtures: Vec<EqualityRecord>,
    pub cells: Vec<CellRow>,
}

impl CampaignReport {
    pub fn summary(&self) -> String {
        format!(
            "{} violations ({} configs, {} atoms, {} equality cases)",
            self.violations.len(),
            self.configs_checked,
            self.atoms_checked,
            self.equality_cases
        )
    }

    /// `n,d,k,lhs,rhs,equality` rows for plotting.
    pub fn cells_csv(&self) -> String {
        let mut out = String::from("theorem,n,d,k,lhs,rhs,equality\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{:?},{},{},{},{},{},{}\n",
                c.theorem, c.n, c.d, c.k, c.lhs, c.rhs, c.equality
            ));
        }
        out
    }
}

/// Configurations that attain `theorem`'s bound for this `(n, d)`.
pub fn extremal_family(theorem: Theorem, n: usize, d: usize) -> Result<Vec<WeightConfig>> {
    let e1 = |value: Rational| VecD::axis(d, 0, value);
    let mut out = Vec::new();
    match theorem {
        Theorem::NonUniform => {
            let mut targets: Vec<VecD> = (1..=n as i64).map(|k| e1(Rational::from(k))).collect();
            if d >= 2 {
                let mut diag = VecD::zeros(d).coords().to_vec();
                diag[0] = Rational::one();
                diag[1] = Rational::one();
                targets.push(VecD::new(diag));
            }
            for x in targets {
                match extremal_config(n as u64, d, &x) {
                    Ok(cfg) => out.push(cfg),
                    Err(Error::ConstructionImpossible { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Theorem::ErdosKleitman => {
            out.push(WeightConfig::new(vec![e1(Rational::one()); n], false)?);
        }
        Theorem::ZeroOdd => {
            let mut w = vec![e1(Rational::new(1, 2)); n];
            w[0] = e1(Rational::one());
            out.push(WeightConfig::new(w, false)?);
        }
        Theorem::ZeroWeightsSup => {
            let k = (n as f64).sqrt() as i64;
            if k >= 1 {
                out.push(zero_weights_extremal(&e1(Rational::from(k)))?);
            }
        }
        _ => {}
    }
    Ok(out)
}

/// Verifies every generated configuration against each theorem in `theorems`.
pub fn run_campaign(
    engine: &Engine,
    gen: &ConfigGenerator,
    theorems: &[Theorem],
    options: CampaignOptions,
) -> Result<CampaignReport> {
    let mut theorems = theorems.to_vec();
    theorems.sort();
    theorems.dedup();
    let mut report = CampaignReport {
        theorems: theorems.clone(),
        generator: gen.clone(),
        options,
        configs_checked: 0,
        atoms_checked: 0,
        equality_cases: 0,
        violations: Vec::new(),
        fixtures: Vec::new(),
        cells: Vec::new(),
    };
    let base = gen.configs()?;
    let mut cells: BTreeMap<(Theorem, usize, usize, u64), CellRow> = BTreeMap::new();
    for &theorem in &theorems {
        let mut configs = base.clone();
        if options.include_extremal {
            configs.extend(extremal_family(theorem, gen.n, gen.d)?);
        }
        let checks = map_ordered(&configs, |cfg| check_config(engine, theorem, cfg));
        for (cfg, check) in configs.iter().zip(checks) {
            let check = check?;
            report.configs_checked += 1;
            report.atoms_checked += check.atoms_checked;
            report.equality_cases += check.equalities.len() as u64;
            report.violations.extend(check.violations);
            report.fixtures.extend(check.equalities);
            for (k, (lhs, rhs)) in check.cells {
                let row = cells
                    .entry((theorem, cfg.len(), cfg.dim(), k))
                    .or_insert_with(|| CellRow {
                        theorem,
                        n: cfg.len(),
                        d: cfg.dim(),
                        k,
                        lhs: Rational::zero(),
                        rhs,
                        equality: false,
                    });
                if lhs > row.lhs {
                    row.lhs = lhs;
                }
                row.equality = row.lhs == row.rhs;
            }
        }
    }
    report.cells = cells.into_values().collect();
    Ok(report)
}
