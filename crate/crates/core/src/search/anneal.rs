//! Seeded simulated annealing over grid weight configurations.
//!
//! Candidates are weights with integer coordinates over a fixed grid
//! denominator, so the exact configuration behind every float score is
//! known. Scores are `max_x (P(S = x) - bound(x))` in `f64`; the best few
//! candidates are re-scored exactly and, if still positive, certified.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    certify, violation_margin, Certification, Claim, Conjecture, CounterexampleCertificate, Margin,
    Refutation, SearchProblem,
};
use crate::bounds::conjecture1_level;
use crate::engine::{rademacher_atom, Engine, WeightConfig};
use crate::error::{Error, Result};
use crate::norm::NormSpec;
use crate::parallel::{derive_seed, map_ordered};
use crate::rational::{Rational, VecD};

/// Score of a candidate without any eligible atom.
pub const NO_SCORE: f64 = -1.0;

/// Largest dimension the float scorer handles.
pub const MAX_SEARCH_DIM: usize = 4;

type Point = [i64; MAX_SEARCH_DIM];
type Grid = Vec<Vec<i64>>;

/// Annealing constants. Every field has a default, so a partial JSON file
/// overrides only what it names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnealConfig {
    /// Independent chains; the budget is split evenly between them.
    pub chains: u32,
    /// Weight coordinates are multiples of `1 / grid_denominator`.
    pub grid_denominator: u32,
    pub t_initial: f64,
    pub t_final: f64,
    /// Restart a chain after this fraction of its budget without improvement.
    pub restart_fraction: f64,
    /// Largest coordinate step, in grid units.
    pub max_step: u32,
    pub p_perturb: f64,
    pub p_boundary: f64,
    pub p_copy: f64,
    pub p_resize: f64,
    /// Candidates re-scored exactly at the end.
    pub rescore_top: usize,
    pub trace_every: u64,
    /// Sweep all-equal weight configurations before annealing (C1 only).
    pub structured_sweep: bool,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            chains: 4,
            grid_denominator: 60,
            t_initial: 0.05,
            t_final: 1e-4,
            restart_fraction: 0.1,
            max_step: 3,
            p_perturb: 0.5,
            p_boundary: 0.15,
            p_copy: 0.15,
            p_resize: 0.2,
            rescore_top: 8,
            trace_every: 250,
            structured_sweep: true,
        }
    }
}

impl AnnealConfig {
    fn validate(&self) -> Result<()> {
        let probs = [self.p_perturb, self.p_boundary, self.p_copy, self.p_resize];
        let ok = self.chains >= 1
            && self.grid_denominator >= 1
            && self.t_initial > 0.0
            && self.t_final > 0.0
            && self.t_final <= self.t_initial
            && self.restart_fraction > 0.0
            && self.max_step >= 1
            && self.trace_every >= 1
            && probs.iter().all(|p| p.is_finite() && *p >= 0.0)
            && probs.iter().sum::<f64>() > 0.0;
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "invalid annealing config {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub chain: u32,
    pub iteration: u64,
    pub score: f64,
}

/// A grid candidate with its float score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scored {
    pub weights: Grid,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub chain: u32,
    pub budget: u64,
    pub iteration: u64,
    pub rng_seed: u64,
    pub rng_word_pos: u128,
    pub current: Grid,
    pub current_score: f64,
    pub best: Grid,
    pub best_score: f64,
    pub since_improvement: u64,
    pub restarts: u64,
    pub top: Vec<Scored>,
    pub trace: Vec<TracePoint>,
}

/// Resumable search state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub problem: SearchProblem,
    pub config: AnnealConfig,
    pub sweep: Vec<Scored>,
    pub chains: Vec<ChainState>,
}

impl Checkpoint {
    pub fn is_complete(&self) -> bool {
        self.chains.iter().all(|c| c.iteration >= c.budget)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestCandidate {
    pub config: WeightConfig,
    pub float_score: f64,
    pub exact: Margin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub problem: SearchProblem,
    pub config: AnnealConfig,
    pub best: Option<BestCandidate>,
    pub certificates: Vec<CounterexampleCertificate>,
    /// Float-positive candidates whose exact margin is not positive.
    pub discrepancies: Vec<Refutation>,
    pub rescored: usize,
    pub restarts: u64,
    pub trace: Vec<TracePoint>,
}

impl SearchOutcome {
    pub fn best_margin(&self) -> Option<&Rational> {
        self.best.as_ref().and_then(|b| b.exact.margin())
    }
}

/// Fast evaluation of candidates in floating point.
struct Scorer {
    conjecture: Conjecture,
    d: usize,
    g: i64,
    multipliers: Vec<i64>,
    arity: f64,
    /// `rhs[n][level]`.
    rhs: Vec<Vec<f64>>,
    constraint: NormSpec,
}

impl Scorer {
    fn new(problem: &SearchProblem, config: &AnnealConfig) -> Result<Self> {
        let n_max = problem.n;
        let (multipliers, rhs): (Vec<i64>, Vec<Vec<f64>>) = match problem.conjecture {
            Conjecture::C1 { m } => {
                let support: Vec<i64> = (0..m as i64).map(|i| -(m as i64) + 1 + 2 * i).collect();
                let mut tables = vec![Vec::new()];
                // counts of U_1 + ... + U_n indexed by (sum + n(m-1)) / 2
                let mut counts: Vec<u128> = vec![1];
                for n in 1..=n_max {
                    let mut next = vec![0u128; counts.len() + m as usize - 1];
                    for (i, c) in counts.iter().enumerate() {
                        for j in 0..m as usize {
                            next[i + j] += c;
                        }
                    }
                    counts = next;
                    let total = (m as f64).powi(n as i32);
                    let offset = (n as i64) * (m as i64 - 1);
                    let top = offset as usize + 2;
                    let table = (0..=top)
                        .map(|level| {
                            let shifted = level as i64 + offset;
                            if shifted % 2 != 0 {
                                return 0.0;
                            }
                            counts
                                .get((shifted / 2) as usize)
                                .map_or(0.0, |&c| c as f64 / total)
                        })
                        .collect();
                    tables.push(table);
                }
                (support, tables)
            }
            Conjecture::C2 { .. } => {
                let tables = (0..=n_max)
                    .map(|n| {
                        (0..=n + 2)
                            .map(|level| rademacher_atom(n as u64, level as i64).to_f64())
                            .collect()
                    })
                    .collect();
                (vec![-1, 1], tables)
            }
        };
        let arity = multipliers.len() as f64;
        Ok(Scorer {
            conjecture: problem.conjecture.clone(),
            d: problem.d,
            g: config.grid_denominator as i64,
            multipliers,
            arity,
            rhs,
            constraint: problem.conjecture.constraint_norm(),
        })
    }

    fn to_vecd(&self, w: &[i64]) -> VecD {
        VecD::new(w.iter().map(|&c| Rational::new(c, self.g)).collect())
    }

    fn valid_weight(&self, w: &[i64]) -> bool {
        w.iter().any(|&c| c != 0) && self.constraint.within_unit_ball(&self.to_vecd(w))
    }

    fn level(&self, n: usize, p: &Point) -> usize {
        let g = self.g as f64;
        match &self.conjecture {
            Conjecture::C1 { m } => {
                let sq: f64 = p.iter().map(|&c| (c * c) as f64).sum();
                let k = (sq.sqrt() / g).floor() as u64;
                conjecture1_level(n as u64, *m, k) as usize
            }
            Conjecture::C2 { norm, .. } => {
                let x: Vec<f64> = p[..self.d].iter().map(|&c| c as f64).collect();
                let k = (norm.value_f64(&x) / g).ceil() as u64;
                (k + ((n as u64 + k) & 1)) as usize
            }
        }
    }

    fn score(&self, weights: &Grid) -> f64 {
        let n = weights.len();
        let mut law: Vec<(Point, u128)> = vec![([0; MAX_SEARCH_DIM], 1)];
        for w in weights {
            let mut next = Vec::with_capacity(law.len() * self.multipliers.len());
            for (p, c) in &law {
                for &u in &self.multipliers {
                    let mut q = *p;
                    for (qi, wi) in q.iter_mut().zip(w) {
                        *qi += u * wi;
                    }
                    next.push((q, *c));
                }
            }
            next.sort_unstable_by_key(|a| a.0);
            law.clear();
            for (p, c) in next {
                match law.last_mut() {
                    Some(last) if last.0 == p => last.1 += c,
                    _ => law.push((p, c)),
                }
            }
        }
        let total = self.arity.powi(n as i32);
        let table = &self.rhs[n];
        let flag_zero = matches!(self.conjecture, Conjecture::C1 { .. });
        let mut best = NO_SCORE;
        for (p, c) in &law {
            if p.iter().all(|&x| x == 0) {
                continue;
            }
            let rhs = table.get(self.level(n, p)).copied().unwrap_or(0.0);
            if flag_zero && rhs == 0.0 {
                continue;
            }
            best = best.max(*c as f64 / total - rhs);
        }
        best
    }

    fn random_weight(&self, rng: &mut ChaCha8Rng) -> Vec<i64> {
        loop {
            let w: Vec<i64> = (0..self.d)
                .map(|_| rng.gen_range(-self.g..=self.g))
                .collect();
            if self.valid_weight(&w) {
                return w;
            }
        }
    }

    fn random_state(&self, n_max: usize, rng: &mut ChaCha8Rng) -> Grid {
        let n = rng.gen_range(1..=n_max);
        (0..n).map(|_| self.random_weight(rng)).collect()
    }

    /// Moves `w` onto the boundary of the unit ball, truncating toward zero.
    fn to_boundary(&self, w: &[i64]) -> Vec<i64> {
        let x: Vec<f64> = w.iter().map(|&c| c as f64 / self.g as f64).collect();
        let len = self.constraint.value_f64(&x);
        if len == 0.0 {
            return w.to_vec();
        }
        let mut out: Vec<i64> = w.iter().map(|&c| (c as f64 / len).trunc() as i64).collect();
        while !self.valid_weight(&out) {
            let Some(i) = (0..out.len()).max_by_key(|&i| out[i].abs()) else {
                break;
            };
            if out[i] == 0 {
                return w.to_vec();
            }
            out[i] -= out[i].signum();
        }
        out
    }
}

/// Weights up to sign and order: the law of the sum is invariant under both.
fn canonical(weights: &Grid) -> Grid {
    let mut out: Grid = weights
        .iter()
        .map(|w| {
            let negative = w.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0);
            if negative {
                w.iter().map(|c| -c).collect()
            } else {
                w.clone()
            }
        })
        .collect();
    out.sort();
    out
}

fn rank(a: &Scored, b: &Scored) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.weights.cmp(&b.weights))
}

fn offer(top: &mut Vec<Scored>, weights: &Grid, score: f64, limit: usize) {
    if score <= NO_SCORE || limit == 0 {
        return;
    }
    let weights = canonical(weights);
    if top.iter().any(|s| s.weights == weights) {
        return;
    }
    if top.len() >= limit && top.last().is_some_and(|w| w.score >= score) {
        return;
    }
    top.push(Scored { weights, score });
    top.sort_by(rank);
    top.truncate(limit);
}

fn start(problem: &SearchProblem, config: &AnnealConfig) -> Result<Checkpoint> {
    problem.validate()?;
    config.validate()?;
    if problem.d > MAX_SEARCH_DIM {
        return Err(Error::InvalidParameter(format!(
            "search supports d <= {MAX_SEARCH_DIM}, got {}",
            problem.d
        )));
    }
    let scorer = Scorer::new(problem, config)?;
    let mut sweep = Vec::new();
    if config.structured_sweep && matches!(problem.conjecture, Conjecture::C1 { .. }) {
        for n in 1..=problem.n {
            for j in 1..=scorer.g {
                let mut directions = vec![{
                    let mut w = vec![0; problem.d];
                    w[0] = j;
                    w
                }];
                if problem.d >= 2 {
                    let mut w = vec![0; problem.d];
                    w[0] = j;
                    w[1] = j;
                    directions.push(w);
                }
                for w in directions.into_iter().filter(|w| scorer.valid_weight(w)) {
                    let state = vec![w; n];
                    let s = scorer.score(&state);
                    offer(&mut sweep, &state, s, config.rescore_top);
                }
            }
        }
    }
    let chains = config.chains as u64;
    let states = (0..chains)
        .map(|c| {
            let budget = problem.budget / chains + u64::from(c < problem.budget % chains);
            let rng_seed = derive_seed(problem.seed, c);
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            let current: Grid = (0..problem.n)
                .map(|_| scorer.random_weight(&mut rng))
                .collect();
            let score = scorer.score(&current);
            let mut top = Vec::new();
            offer(&mut top, &current, score, config.rescore_top);
            ChainState {
                chain: c as u32,
                budget,
                iteration: 0,
                rng_seed,
                rng_word_pos: rng.get_word_pos(),
                best: current.clone(),
                current,
                current_score: score,
                best_score: score,
                since_improvement: 0,
                restarts: 0,
                top,
                trace: vec![TracePoint {
                    chain: c as u32,
                    iteration: 0,
                    score,
                }],
            }
        })
        .collect();
    Ok(Checkpoint {
        problem: problem.clone(),
        config: config.clone(),
        sweep,
        chains: states,
    })
}

fn propose(
    scorer: &Scorer,
    config: &AnnealConfig,
    n_max: usize,
    state: &Grid,
    rng: &mut ChaCha8Rng,
) -> Grid {
    let total = config.p_perturb + config.p_boundary + config.p_copy + config.p_resize;
    let pick = rng.gen::<f64>() * total;
    let mut next = state.clone();
    let n = next.len();
    if pick < config.p_perturb {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..scorer.d);
        let step = rng.gen_range(1..=config.max_step as i64);
        next[i][j] += if rng.gen::<bool>() { step } else { -step };
        if !scorer.valid_weight(&next[i]) {
            return state.clone();
        }
    } else if pick < config.p_perturb + config.p_boundary {
        let i = rng.gen_range(0..n);
        next[i] = scorer.to_boundary(&next[i]);
    } else if pick < config.p_perturb + config.p_boundary + config.p_copy {
        if n >= 2 {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            next[i] = if rng.gen::<bool>() {
                next[j].clone()
            } else {
                next[j].iter().map(|c| -c).collect()
            };
        }
    } else if n < n_max && (n == 1 || rng.gen::<bool>()) {
        let w = if rng.gen::<bool>() {
            next[rng.gen_range(0..n)].clone()
        } else {
            scorer.random_weight(rng)
        };
        next.push(w);
    } else if n > 1 {
        next.remove(rng.gen_range(0..n));
    }
    next
}

fn advance_chain(
    scorer: &Scorer,
    problem: &SearchProblem,
    config: &AnnealConfig,
    mut st: ChainState,
    stop: u64,
) -> ChainState {
    let mut rng = ChaCha8Rng::seed_from_u64(st.rng_seed);
    rng.set_word_pos(st.rng_word_pos);
    let stop = stop.min(st.budget);
    let patience = ((st.budget as f64 * config.restart_fraction).ceil() as u64).max(1);
    let ratio = config.t_final / config.t_initial;
    while st.iteration < stop {
        let temperature = config.t_initial * ratio.powf(st.iteration as f64 / st.budget as f64);
        let candidate = propose(scorer, config, problem.n, &st.current, &mut rng);
        let score = if candidate == st.current {
            st.current_score
        } else {
            scorer.score(&candidate)
        };
        let delta = score - st.current_score;
        let uniform: f64 = rng.gen();
        if delta >= 0.0 || uniform < (delta / temperature).exp() {
            st.current = candidate;
            st.current_score = score;
        }
        st.iteration += 1;
        if score > st.best_score {
            st.best_score = score;
            st.best = st.current.clone();
            st.since_improvement = 0;
            st.trace.push(TracePoint {
                chain: st.chain,
                iteration: st.iteration,
                score,
            });
        } else {
            st.since_improvement += 1;
        }
        offer(
            &mut st.top,
            &st.current,
            st.current_score,
            config.rescore_top,
        );
        if st.iteration.is_multiple_of(config.trace_every) {
            st.trace.push(TracePoint {
                chain: st.chain,
                iteration: st.iteration,
                score: st.best_score,
            });
        }
        if st.since_improvement >= patience {
            st.current = scorer.random_state(problem.n, &mut rng);
            st.current_score = scorer.score(&st.current);
            st.since_improvement = 0;
            st.restarts += 1;
        }
    }
    st.rng_word_pos = rng.get_word_pos();
    st
}

fn advance(checkpoint: Checkpoint, stop: u64) -> Result<Checkpoint> {
    let scorer = Scorer::new(&checkpoint.problem, &checkpoint.config)?;
    let Checkpoint {
        problem,
        config,
        sweep,
        chains,
    } = checkpoint;
    let chains = map_ordered(&chains, |st| {
        advance_chain(&scorer, &problem, &config, st.clone(), stop)
    });
    Ok(Checkpoint {
        problem,
        config,
        sweep,
        chains,
    })
}

fn finish(engine: &Engine, checkpoint: &Checkpoint) -> Result<SearchOutcome> {
    let problem = &checkpoint.problem;
    let config = &checkpoint.config;
    let scorer = Scorer::new(problem, config)?;
    let mut pool: Vec<Scored> = Vec::new();
    for s in checkpoint
        .sweep
        .iter()
        .chain(checkpoint.chains.iter().flat_map(|c| c.top.iter()))
    {
        offer(&mut pool, &s.weights, s.score, config.rescore_top);
    }
    let constraint = problem.conjecture.constraint_norm();
    let mut best: Option<BestCandidate> = None;
    let mut certificates = Vec::new();
    let mut discrepancies = Vec::new();
    for cand in &pool {
        let weights = cand.weights.iter().map(|w| scorer.to_vecd(w)).collect();
        let cfg = WeightConfig::with_constraint(weights, false, constraint.clone())?;
        let exact = violation_margin(engine, problem, &cfg)?;
        if let Some(atom) = &exact.best {
            if atom.margin.is_positive() || cand.score > 0.0 {
                let claim = Claim {
                    float_score: Some(cand.score),
                    lhs: None,
                };
                match certify(engine, problem, &cfg, &atom.x, &claim)? {
                    Certification::Certified(c) => certificates.push(c),
                    Certification::Refuted(r) => discrepancies.push(r),
                }
            }
        }
        let better = match (&best, exact.margin()) {
            (None, _) => true,
            (Some(b), Some(m)) => b.exact.margin().is_none_or(|bm| m > bm),
            (Some(_), None) => false,
        };
        if better {
            best = Some(BestCandidate {
                config: cfg,
                float_score: cand.score,
                exact,
            });
        }
    }
    let mut trace: Vec<TracePoint> = checkpoint
        .chains
        .iter()
        .flat_map(|c| c.trace.iter().copied())
        .collect();
    trace.sort_by_key(|a| (a.chain, a.iteration));
    Ok(SearchOutcome {
        problem: problem.clone(),
        config: config.clone(),
        best,
        certificates,
        discrepancies,
        rescored: pool.len(),
        restarts: checkpoint.chains.iter().map(|c| c.restarts).sum(),
        trace,
    })
}

/// Runs the whole budget and certifies the best candidates.
pub fn anneal(
    engine: &Engine,
    problem: &SearchProblem,
    config: &AnnealConfig,
) -> Result<SearchOutcome> {
    let checkpoint = advance(start(problem, config)?, u64::MAX)?;
    finish(engine, &checkpoint)
}

/// Runs each chain for at most `stop_after` iterations and returns the state.
pub fn anneal_partial(
    problem: &SearchProblem,
    config: &AnnealConfig,
    stop_after: u64,
) -> Result<Checkpoint> {
    advance(start(problem, config)?, stop_after)
}

/// Continues a checkpoint until each chain has run `stop_after` iterations.
pub fn resume_partial(checkpoint: Checkpoint, stop_after: u64) -> Result<Checkpoint> {
    checkpoint.problem.validate()?;
    checkpoint.config.validate()?;
    advance(checkpoint, stop_after)
}

/// Continues a checkpoint to the end of its budget.
pub fn resume(engine: &Engine, checkpoint: Checkpoint) -> Result<SearchOutcome> {
    checkpoint.problem.validate()?;
    checkpoint.config.validate()?;
    let done = advance(checkpoint, u64::MAX)?;
    finish(engine, &done)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(conjecture: Conjecture, n: usize, d: usize, budget: u64) -> SearchProblem {
        SearchProblem {
            conjecture,
            n,
            d,
            budget,
            seed: 5,
        }
    }

    #[test]
    fn float_score_matches_exact_margin() {
        let e = Engine::default();
        let p = problem(Conjecture::c2(NormSpec::L2), 6, 2, 10);
        let config = AnnealConfig::default();
        let scorer = Scorer::new(&p, &config).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let state = scorer.random_state(6, &mut rng);
            let cfg = WeightConfig::new(state.iter().map(|w| scorer.to_vecd(w)).collect(), false)
                .unwrap();
            let exact = violation_margin(&e, &p, &cfg).unwrap();
            let float = scorer.score(&state);
            assert!((exact.margin().unwrap().to_f64() - float).abs() < 1e-12);
        }
    }

    #[test]
    fn c1_float_score_matches_exact_margin() {
        let e = Engine::default();
        for m in [3, 4] {
            let p = problem(Conjecture::C1 { m }, 4, 1, 10);
            let config = AnnealConfig::default();
            let scorer = Scorer::new(&p, &config).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
            for _ in 0..20 {
                let state = scorer.random_state(4, &mut rng);
                let cfg =
                    WeightConfig::new(state.iter().map(|w| scorer.to_vecd(w)).collect(), false)
                        .unwrap();
                let exact = violation_margin(&e, &p, &cfg).unwrap();
                let float = scorer.score(&state);
                match exact.margin() {
                    Some(mg) => assert!((mg.to_f64() - float).abs() < 1e-12),
                    None => assert_eq!(float, NO_SCORE),
                }
            }
        }
    }

    #[test]
    fn boundary_move_stays_inside() {
        let p = problem(Conjecture::c2(NormSpec::L1), 3, 3, 10);
        let scorer = Scorer::new(&p, &AnnealConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let w = scorer.random_weight(&mut rng);
            let b = scorer.to_boundary(&w);
            assert!(scorer.valid_weight(&b));
        }
    }

    #[test]
    fn canonical_form_ignores_sign_and_order() {
        let a = vec![vec![-1, 2], vec![3, 0]];
        let b = vec![vec![3, 0], vec![1, -2]];
        assert_eq!(canonical(&a), canonical(&b));
    }

    #[test]
    fn same_seed_same_trace() {
        let e = Engine::default();
        let p = problem(Conjecture::c2(NormSpec::Linf), 5, 2, 400);
        let cfg = AnnealConfig::default();
        let a = anneal(&e, &p, &cfg).unwrap();
        let b = anneal(&e, &p, &cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let other = anneal(&e, &SearchProblem { seed: 6, ..p }, &cfg).unwrap();
        assert_ne!(a.trace, other.trace);
    }

    #[test]
    fn resume_matches_uninterrupted_run() {
        let e = Engine::default();
        let p = problem(Conjecture::C1 { m: 3 }, 4, 1, 300);
        let cfg = AnnealConfig::default();
        let full = anneal(&e, &p, &cfg).unwrap();
        let half = anneal_partial(&p, &cfg, 40).unwrap();
        assert!(!half.is_complete());
        let text = serde_json::to_string(&half).unwrap();
        let restored: Checkpoint = serde_json::from_str(&text).unwrap();
        assert_eq!(restored, half);
        let resumed = resume(&e, restored).unwrap();
        assert_eq!(resumed, full);
    }

    #[test]
    fn config_file_overrides_only_named_fields() {
        let cfg: AnnealConfig = serde_json::from_str(r#"{"chains": 2, "t_final": 0.001}"#).unwrap();
        assert_eq!(cfg.chains, 2);
        assert_eq!(
            cfg.grid_denominator,
            AnnealConfig::default().grid_denominator
        );
        assert!(AnnealConfig {
            t_final: 1.0,
            ..AnnealConfig::default()
        }
        .validate()
        .is_err());
    }
}
