//! Subcommand bodies. Each returns the rendered output and whether a
//! genuine violation was found.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use lolab_core::antichain::{build_family, is_antichain, is_k_intersecting, SubsetFamily};
use lolab_core::bounds::{
    self, bound_dispatch, conjecture1_report, extremal_config, milner_bound, nonuniform_bound,
    zero_weights_extremal, zero_weights_sup_report,
};
use lolab_core::oracle::{
    run_campaign, verify_theorem3_sample, CampaignOptions, ConfigGenerator, Theorem3Report,
};
use lolab_core::search::{
    anneal_partial, append_ledger, resume, resume_partial, AnnealConfig, Checkpoint, Conjecture,
    LedgerEntry, SearchOutcome, SearchProblem,
};
use lolab_core::{BoundReport, Engine, NormSpec, Rational, Summands, Theorem, VecD, WeightConfig};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::input;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub struct Ctx {
    pub engine: Engine,
    pub seed: u64,
    pub format: Format,
    pub grid_denominator: Option<u32>,
}

pub struct Rendered {
    /// Main output: to `--out`, or to standard output when there is no summary.
    pub body: String,
    /// Always printed to standard output.
    pub summary: Option<String>,
    pub violation: bool,
}

impl Rendered {
    fn plain(body: String) -> Self {
        Rendered {
            body,
            summary: None,
            violation: false,
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Args, Debug)]
pub struct WeightsArgs {
    /// Inline weights: `1,1/2,1`, `(1,0),(0,1)` or a JSON array.
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<String>,
    /// JSON array of vectors, or CSV with one vector per line.
    #[arg(long)]
    pub weights_file: Option<PathBuf>,
    /// Accept zero weights.
    #[arg(long)]
    pub allow_zero: bool,
}

impl WeightsArgs {
    fn config(&self) -> Result<WeightConfig> {
        let ws = input::weights(self.weights.as_deref(), self.weights_file.as_deref())?;
        Ok(WeightConfig::new(ws, self.allow_zero)?)
    }
}

fn summands(m: Option<u32>) -> Summands {
    m.map_or(Summands::Rademacher, |m| Summands::ApUniform { m })
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: u64,
    /// Squared norm of the target, e.g. `9/4`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["x", "zero"])]
    pub norm_sq: Option<Rational>,
    /// Target vector, e.g. `(1,1)`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "zero")]
    pub x: Option<VecD>,
    /// Target x = 0.
    #[arg(long)]
    pub zero: bool,
    /// Supremum over configurations that may contain zero weights (n is ignored).
    #[arg(long, conflicts_with = "m")]
    pub zero_weights: bool,
    /// Conjectured bound for sums of progression-uniform variables on m points.
    #[arg(long)]
    pub m: Option<u32>,
}

pub fn bound(ctx: &Ctx, a: &BoundArgs) -> Result<Rendered> {
    let q = match (&a.norm_sq, &a.x, a.zero) {
        (Some(q), None, false) => q.clone(),
        (None, Some(x), false) => x.norm_sq(),
        (None, None, true) => Rational::zero(),
        _ => bail!("give exactly one of --norm-sq, --x and --zero"),
    };
    let report: BoundReport = if a.zero_weights {
        zero_weights_sup_report(&q)?
    } else if let Some(m) = a.m {
        conjecture1_report(&ctx.engine, a.n, m, &q)?
    } else if q.is_zero() {
        bound_dispatch(a.n, &VecD::zeros(1))?
    } else {
        nonuniform_bound(a.n, &q)?
    };
    let body = match ctx.format {
        Format::Json => json(&report)?,
        Format::Csv => csv_table(
            &["n", "k", "delta", "bound", "which_theorem"],
            [vec![
                report.n.to_string(),
                report.k.to_string(),
                report.delta.to_string(),
                report.bound.to_string(),
                format!("{:?}", report.which_theorem),
            ]],
        )?,
    };
    Ok(Rendered::plain(body))
}

#[derive(Args, Debug)]
pub struct DistArgs {
    #[command(flatten)]
    pub weights: WeightsArgs,
    /// Use variables uniform on {-m+1, -m+3, ..., m-1} instead of signs.
    #[arg(long)]
    pub m: Option<u32>,
}

pub fn dist(ctx: &Ctx, a: &DistArgs) -> Result<Rendered> {
    let cfg = a.weights.config()?;
    let law = ctx.engine.law(summands(a.m), &cfg)?;
    let body = match ctx.format {
        Format::Json => json(&law)?,
        Format::Csv => {
            let mut header: Vec<String> = (1..=law.dim()).map(|i| format!("x{i}")).collect();
            header.push("probability".into());
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            csv_table(
                &header,
                law.iter().map(|(x, p)| {
                    let mut row: Vec<String> = x.coords().iter().map(ToString::to_string).collect();
                    row.push(p.to_string());
                    row
                }),
            )?
        }
    };
    Ok(Rendered::plain(body))
}

#[derive(Args, Debug)]
pub struct AtomArgs {
    #[command(flatten)]
    pub weights: WeightsArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: VecD,
    #[arg(long)]
    pub m: Option<u32>,
}

pub fn atom(ctx: &Ctx, a: &AtomArgs) -> Result<Rendered> {
    let cfg = a.weights.config()?;
    let p = ctx.engine.atom(summands(a.m), &cfg, &a.x)?;
    let body = match ctx.format {
        Format::Json => json(&p)?,
        Format::Csv => format!("{p}\n"),
    };
    Ok(Rendered::plain(body))
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// 1: uniform bound, 2: non-uniform bound, 3: zero-weights supremum, 4: zero target, odd n.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub theorem: u8,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Target for the zero-weights check (default: 2 e_1).
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<VecD>,
    /// Skip the known extremal configurations.
    #[arg(long)]
    pub no_extremal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VerifyReport {
    Campaign(lolab_core::oracle::CampaignReport),
    ZeroWeights(Theorem3Report),
}

pub fn verify(ctx: &Ctx, a: &VerifyArgs) -> Result<Rendered> {
    let mut gen = ConfigGenerator::new(a.n, a.d, ctx.seed, a.count);
    if let Some(g) = ctx.grid_denominator {
        gen.grid_denominator = g;
    }
    if a.theorem == 3 {
        gen.allow_zero = true;
        let x =
            a.x.clone()
                .unwrap_or_else(|| VecD::axis(a.d, 0, Rational::from_integer(2)));
        let report = verify_theorem3_sample(&ctx.engine, &x, a.n, &gen)?;
        let summary = format!(
            "{} violations ({} configs, {} atoms, supremum {} attained: {})",
            report.violations.len(),
            report.configs_checked,
            report.atoms_checked,
            report.sup,
            report.extremal_attained
        );
        let body = match ctx.format {
            Format::Json => json(&VerifyReport::ZeroWeights(report.clone()))?,
            Format::Csv => csv_table(
                &[
                    "x",
                    "n_max",
                    "sup",
                    "configs",
                    "atoms",
                    "violations",
                    "extremal_attained",
                ],
                [vec![
                    report.x.to_string(),
                    report.n_max.to_string(),
                    report.sup.to_string(),
                    report.configs_checked.to_string(),
                    report.atoms_checked.to_string(),
                    report.violations.len().to_string(),
                    report.extremal_attained.to_string(),
                ]],
            )?,
        };
        return Ok(Rendered {
            body,
            summary: Some(summary),
            violation: !report.violations.is_empty(),
        });
    }
    let theorem = match a.theorem {
        1 => Theorem::ErdosKleitman,
        2 => Theorem::NonUniform,
        _ => Theorem::ZeroOdd,
    };
    let options = CampaignOptions {
        include_extremal: !a.no_extremal,
    };
    let report = run_campaign(&ctx.engine, &gen, &[theorem], options)?;
    let body = match ctx.format {
        Format::Json => json(&VerifyReport::Campaign(report.clone()))?,
        Format::Csv => report.cells_csv(),
    };
    Ok(Rendered {
        body,
        summary: Some(report.summary()),
        violation: !report.violations.is_empty(),
    })
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// 1: progression-uniform summands, 2: Rademacher sums under another norm.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub conjecture: Option<u8>,
    /// Number of points of the progression (with `--conjecture 1`).
    #[arg(long, default_value_t = 3)]
    pub m: u32,
    /// Norm measuring x (with `--conjecture 2`): l1, l2, linf or wl2:w1,w2,...
    #[arg(long, default_value = "l2")]
    pub norm: NormSpec,
    /// Norm bounding the weights, if different from --norm.
    #[arg(long)]
    pub constraint: Option<NormSpec>,
    /// Largest number of summands.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,
    /// JSON file overriding annealing constants.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Where to write the search state.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Continue from a checkpoint file; problem flags are then ignored.
    #[arg(long)]
    pub resume: Option<PathBuf>,
    /// Stop each chain after this many iterations and write the checkpoint.
    #[arg(long, requires = "checkpoint")]
    pub stop_after: Option<u64>,
    /// Append-only JSON-lines results file.
    #[arg(long)]
    pub ledger: Option<PathBuf>,
}

impl SearchArgs {
    fn problem(&self, seed: u64) -> Result<SearchProblem> {
        let conjecture = match self.conjecture {
            Some(1) => Conjecture::C1 { m: self.m },
            Some(2) => Conjecture::C2 {
                norm: self.norm.clone(),
                constraint: self.constraint.clone().filter(|c| *c != self.norm),
            },
            _ => bail!("--conjecture is required unless --resume is given"),
        };
        let Some(n) = self.n else {
            bail!("--n is required unless --resume is given");
        };
        let problem = SearchProblem {
            conjecture,
            n,
            d: self.d,
            budget: self.budget,
            seed,
        };
        problem.validate()?;
        Ok(problem)
    }

    fn anneal_config(&self, grid: Option<u32>) -> Result<AnnealConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("malformed annealing config {}", path.display()))?
            }
            None => AnnealConfig::default(),
        };
        if let Some(g) = grid {
            config.grid_denominator = g;
        }
        Ok(config)
    }
}

/// Printed when a run stops before its budget is spent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialRun {
    pub complete: bool,
    pub checkpoint: PathBuf,
    pub iterations: Vec<u64>,
    pub best_scores: Vec<f64>,
}

fn write_checkpoint(path: &PathBuf, cp: &Checkpoint) -> Result<()> {
    std::fs::write(path, json(cp)?).with_context(|| format!("cannot write {}", path.display()))
}

pub fn search(ctx: &Ctx, a: &SearchArgs) -> Result<Rendered> {
    let checkpoint = match &a.resume {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read checkpoint {}", path.display()))?;
            let cp: Checkpoint = serde_json::from_str(&text)
                .with_context(|| format!("malformed checkpoint {}", path.display()))?;
            resume_partial(cp, a.stop_after.unwrap_or(u64::MAX))?
        }
        None => {
            let problem = a.problem(ctx.seed)?;
            let config = a.anneal_config(ctx.grid_denominator)?;
            anneal_partial(&problem, &config, a.stop_after.unwrap_or(u64::MAX))?
        }
    };
    if let Some(path) = &a.checkpoint {
        write_checkpoint(path, &checkpoint)?;
    }
    if !checkpoint.is_complete() {
        let partial = PartialRun {
            complete: false,
            checkpoint: a.checkpoint.clone().unwrap_or_default(),
            iterations: checkpoint.chains.iter().map(|c| c.iteration).collect(),
            best_scores: checkpoint.chains.iter().map(|c| c.best_score).collect(),
        };
        return Ok(Rendered::plain(json(&partial)?));
    }
    let outcome: SearchOutcome = resume(&ctx.engine, checkpoint)?;
    let entry = LedgerEntry::from_outcome(&outcome);
    if let Some(path) = &a.ledger {
        append_ledger(path, &entry)?;
    }
    let body = match ctx.format {
        Format::Json => json(&outcome)?,
        Format::Csv => csv_table(
            &["chain", "iteration", "score"],
            outcome.trace.iter().map(|t| {
                vec![
                    t.chain.to_string(),
                    t.iteration.to_string(),
                    t.score.to_string(),
                ]
            }),
        )?,
    };
    Ok(Rendered {
        body,
        summary: Some(serde_json::to_string(&entry)?),
        violation: !outcome.certificates.is_empty(),
    })
}

#[derive(Args, Debug)]
pub struct AntichainArgs {
    /// Positive scalar weights.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub weights_file: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntichainReport {
    pub n: u32,
    pub x: Rational,
    pub k: u64,
    pub family: SubsetFamily,
    pub size: usize,
    pub probability: Rational,
    pub antichain: bool,
    pub k_intersecting: bool,
    pub milner_bound: String,
    pub milner: bool,
}

pub fn antichain(ctx: &Ctx, a: &AntichainArgs) -> Result<Rendered> {
    let ws = input::weights(a.weights.as_deref(), a.weights_file.as_deref())?;
    let scalars = ws
        .iter()
        .map(|w| match w.coords() {
            [c] => Ok(c.clone()),
            _ => bail!("set families are built for scalar weights only"),
        })
        .collect::<Result<Vec<_>>>()?;
    let family = build_family(&scalars, &a.x)?;
    let n = scalars.len() as u32;
    let k = a.x.abs().ceil().try_into().context("target is too large")?;
    let bound = milner_bound(n as u64, k);
    let size = family.len();
    let probability = ctx.engine.atom_probability(
        &WeightConfig::scalars(&scalars)?,
        &VecD::scalar(a.x.clone()),
    )?;
    let report = AntichainReport {
        n,
        x: a.x.clone(),
        k,
        antichain: is_antichain(&family),
        k_intersecting: is_k_intersecting(&family, k as u32),
        milner: BigUint::from(size) <= bound,
        milner_bound: bound.to_string(),
        size,
        probability,
        family,
    };
    let body = match ctx.format {
        Format::Json => json(&report)?,
        Format::Csv => csv_table(
            &["set"],
            report.family.sets().into_iter().map(|s| {
                vec![s
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")]
            }),
        )?,
    };
    Ok(Rendered::plain(body))
}

#[derive(Args, Debug)]
pub struct ExtremalArgs {
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Target; a scalar is placed on the first axis.
    #[arg(long, allow_hyphen_values = true)]
    pub x: VecD,
    /// The zero-weights extremal configuration (n = k^2) instead.
    #[arg(long)]
    pub zero_weights: bool,
    /// Also write the weights as a weights file.
    #[arg(long)]
    pub weights_out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalReport {
    pub x: VecD,
    pub config: WeightConfig,
    pub probability: Rational,
    pub bound: BoundReport,
    pub equality: bool,
}

pub fn extremal(ctx: &Ctx, a: &ExtremalArgs) -> Result<Rendered> {
    let x = if a.x.dim() == 1 && a.d > 1 {
        VecD::axis(a.d, 0, a.x.coords()[0].clone())
    } else {
        a.x.clone()
    };
    let q = x.norm_sq();
    let (config, bound) = if a.zero_weights {
        (zero_weights_extremal(&x)?, zero_weights_sup_report(&q)?)
    } else {
        let Some(n) = a.n else {
            bail!("--n is required unless --zero-weights is given");
        };
        (
            extremal_config(n, x.dim(), &x)?,
            bounds::nonuniform_bound(n, &q)?,
        )
    };
    let probability = ctx.engine.atom_probability(&config, &x)?;
    if let Some(path) = &a.weights_out {
        input::write_weights_file(path, config.weights())?;
    }
    let report = ExtremalReport {
        equality: probability == bound.bound,
        x,
        config,
        probability,
        bound,
    };
    let body = match ctx.format {
        Format::Json => json(&report)?,
        Format::Csv => csv_table(
            &["weight"],
            report.config.weights().iter().map(|w| vec![w.to_string()]),
        )?,
    };
    Ok(Rendered::plain(body))
}
