//! Exact laws of weighted Rademacher sums and of sums of weighted uniform
//! variables on an arithmetic progression.
//!
//! Internally every configuration is rescaled by the common denominator of
//! its coordinates, so that partial sums live on an integer lattice and
//! coincident atoms coalesce by plain integer equality. Counts are kept as
//! integers and only turned into probabilities at the end.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::NormSpec;
use crate::rational::{common_denominator, Rational, VecD};

/// Largest exponent accepted for any cap; counts are held in `u128`.
const MAX_CAP: u32 = 100;

/// Enumeration limits. `full` bounds the number of summands for a full law
/// (and `m^n <= 2^full` for progression sums); `mitm` bounds single-atom
/// queries answered by meet-in-the-middle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub full: u32,
    pub mitm: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { full: 24, mitm: 40 }
    }
}

impl Caps {
    pub fn new(full: u32, mitm: u32) -> Result<Self> {
        if full == 0 || mitm == 0 || full > MAX_CAP || mitm > MAX_CAP {
            return Err(Error::InvalidParameter(format!(
                "caps must lie in 1..={MAX_CAP}, got full={full}, mitm={mitm}"
            )));
        }
        Ok(Caps { full, mitm })
    }
}

/// The weights `v_1, ..., v_n` of a sum `v_1 e_1 + ... + v_n e_n`, each in
/// the closed unit ball of `constraint` (Euclidean unless stated otherwise).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConfig")]
pub struct WeightConfig {
    dim: usize,
    weights: Vec<VecD>,
    allow_zero: bool,
    #[serde(skip_serializing_if = "is_l2")]
    constraint: NormSpec,
}

fn is_l2(n: &NormSpec) -> bool {
    *n == NormSpec::L2
}

#[derive(Deserialize)]
struct RawConfig {
    #[serde(default)]
    dim: Option<usize>,
    weights: Vec<VecD>,
    #[serde(default)]
    allow_zero: bool,
    #[serde(default)]
    constraint: NormSpec,
}

impl TryFrom<RawConfig> for WeightConfig {
    type Error = Error;

    fn try_from(raw: RawConfig) -> Result<Self> {
        let cfg = WeightConfig::with_constraint(raw.weights, raw.allow_zero, raw.constraint)?;
        match raw.dim {
            Some(d) if d != cfg.dim => Err(Error::DimensionMismatch {
                expected: d,
                found: cfg.dim,
            }),
            _ => Ok(cfg),
        }
    }
}

impl WeightConfig {
    /// Validates `||v_i||_2 <= 1` exactly, a common dimension, and non-zero
    /// weights unless `allow_zero`.
    pub fn new(weights: Vec<VecD>, allow_zero: bool) -> Result<Self> {
        Self::with_constraint(weights, allow_zero, NormSpec::L2)
    }

    /// As [`WeightConfig::new`] with `||v_i|| <= 1` measured in `constraint`.
    pub fn with_constraint(
        weights: Vec<VecD>,
        allow_zero: bool,
        constraint: NormSpec,
    ) -> Result<Self> {
        let first = weights.first().ok_or_else(|| {
            Error::InvalidParameter("a configuration needs at least one weight".into())
        })?;
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "dimension must be at least 1".into(),
            ));
        }
        constraint.validate(dim)?;
        for (index, w) in weights.iter().enumerate() {
            if w.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: w.dim(),
                });
            }
            if !constraint.within_unit_ball(w) {
                return Err(Error::InvalidWeight {
                    index,
                    reason: format!("{w} lies outside the {constraint} unit ball"),
                });
            }
            if !allow_zero && w.is_zero() {
                return Err(Error::InvalidWeight {
                    index,
                    reason: "zero weight not allowed".into(),
                });
            }
        }
        Ok(WeightConfig {
            dim,
            weights,
            allow_zero,
            constraint,
        })
    }

    /// One-dimensional configuration from scalar weights.
    pub fn scalars(weights: &[Rational]) -> Result<Self> {
        Self::new(weights.iter().cloned().map(VecD::scalar).collect(), false)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[VecD] {
        &self.weights
    }

    pub fn allow_zero(&self) -> bool {
        self.allow_zero
    }

    pub fn constraint(&self) -> &NormSpec {
        &self.constraint
    }

    pub fn has_zero_weight(&self) -> bool {
        self.weights.iter().any(VecD::is_zero)
    }

    /// Replaces `v_index` by `-v_index`.
    pub fn flip_sign(&self, index: usize) -> WeightConfig {
        let mut out = self.clone();
        out.weights[index] = out.weights[index].neg();
        out
    }

    fn check_dim(&self, x: &VecD) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }
}

/// Uniform law on `{-m+1, -m+3, ..., m-3, m-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ApUniformSpec {
    m: u32,
}

impl ApUniformSpec {
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!(
                "progression needs m >= 2, got {m}"
            )));
        }
        Ok(ApUniformSpec { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn support(&self) -> Vec<i64> {
        let m = self.m as i64;
        (0..m).map(|i| -m + 1 + 2 * i).collect()
    }
}

/// Which family of symmetric summands a distribution was computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Summands {
    Rademacher,
    ApUniform { m: u32 },
}

impl Summands {
    fn multipliers(&self) -> Vec<i64> {
        match self {
            Summands::Rademacher => vec![-1, 1],
            Summands::ApUniform { m } => ApUniformSpec { m: *m }.support(),
        }
    }

    fn arity(&self) -> u32 {
        match self {
            Summands::Rademacher => 2,
            Summands::ApUniform { m } => *m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub x: VecD,
    pub p: Rational,
}

/// The exact law of a finite sum, atoms in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "DistributionRepr", from = "DistributionRepr")]
pub struct AtomDistribution {
    n: usize,
    dim: usize,
    summands: Summands,
    atoms: BTreeMap<VecD, Rational>,
}

#[derive(Serialize, Deserialize)]
struct DistributionRepr {
    n: usize,
    dim: usize,
    summands: Summands,
    atoms: Vec<Atom>,
}

impl From<AtomDistribution> for DistributionRepr {
    fn from(d: AtomDistribution) -> Self {
        DistributionRepr {
            n: d.n,
            dim: d.dim,
            summands: d.summands,
            atoms: d.atoms.into_iter().map(|(x, p)| Atom { x, p }).collect(),
        }
    }
}

impl From<DistributionRepr> for AtomDistribution {
    fn from(r: DistributionRepr) -> Self {
        AtomDistribution {
            n: r.n,
            dim: r.dim,
            summands: r.summands,
            atoms: r.atoms.into_iter().map(|a| (a.x, a.p)).collect(),
        }
    }
}

impl AtomDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn summands(&self) -> Summands {
        self.summands
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `P(S = x)`, zero off the support.
    pub fn probability(&self, x: &VecD) -> Rational {
        self.atoms.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VecD, &Rational)> {
        self.atoms.iter()
    }

    pub fn total(&self) -> Rational {
        self.atoms.values().cloned().sum()
    }

    pub fn max_probability(&self) -> Rational {
        self.atoms
            .values()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

/// A configuration rescaled to integer coordinates: `v_i = coords_i / den`.
struct Lattice {
    den: BigInt,
    dim: usize,
    points: Vec<Vec<BigInt>>,
}

type Key = Vec<BigInt>;

impl Lattice {
    fn new(cfg: &WeightConfig) -> Self {
        let den = common_denominator(cfg.weights.iter().flat_map(|w| w.coords()));
        let points = cfg
            .weights
            .iter()
            .map(|w| {
                w.coords()
                    .iter()
                    .map(|c| c.numer() * (&den / c.denom()))
                    .collect()
            })
            .collect();
        Lattice {
            den,
            dim: cfg.dim,
            points,
        }
    }

    /// Target in lattice units, or `None` if `x` is off the lattice (and so
    /// cannot be an atom).
    fn key_of(&self, x: &VecD) -> Option<Key> {
        x.coords()
            .iter()
            .map(|c| {
                let scaled = c * &Rational::from_integer(self.den.clone());
                scaled.is_integer().then(|| scaled.numer().clone())
            })
            .collect()
    }

    fn point_of(&self, key: &[BigInt]) -> VecD {
        VecD::new(
            key.iter()
                .map(|c| Rational::new(c.clone(), self.den.clone()))
                .collect(),
        )
    }

    /// Counts of every partial sum over `points[range]`.
    fn convolve(&self, range: std::ops::Range<usize>, multipliers: &[i64]) -> HashMap<Key, u128> {
        let mut law: HashMap<Key, u128> = HashMap::new();
        law.insert(vec![BigInt::zero(); self.dim], 1);
        for w in &self.points[range] {
            let steps: Vec<Key> = multipliers
                .iter()
                .map(|&u| w.iter().map(|c| c * u).collect())
                .collect();
            let mut next: HashMap<Key, u128> = HashMap::with_capacity(law.len() * steps.len());
            for (p, count) in &law {
                for step in &steps {
                    let q: Key = p.iter().zip(step).map(|(a, b)| a + b).collect();
                    *next.entry(q).or_insert(0) += count;
                }
            }
            law = next;
        }
        law
    }
}

fn outcome_count(summands: Summands, n: usize) -> BigUint {
    num_traits::pow(BigUint::from(summands.arity()), n)
}

/// Size check in units of `log2(arity^n) <= cap`.
fn check_cap(what: &'static str, summands: Summands, n: usize, cap: u32) -> Result<()> {
    let limit = BigUint::one() << cap;
    let size = outcome_count(summands, n);
    if size > limit {
        let reported = match summands {
            Summands::Rademacher => n as u64,
            Summands::ApUniform { .. } => size.bits(),
        };
        return Err(Error::CapExceeded {
            what,
            size: reported,
            cap: cap as u64,
        });
    }
    Ok(())
}

/// Entry point for exact computations, carrying the enumeration caps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Engine {
    pub caps: Caps,
}

impl Engine {
    pub fn new(caps: Caps) -> Self {
        Engine { caps }
    }

    /// Exact law of `sum v_i e_i` with Rademacher signs.
    pub fn full_distribution(&self, cfg: &WeightConfig) -> Result<AtomDistribution> {
        self.law(Summands::Rademacher, cfg)
    }

    /// Exact law of `sum v_i U_i` with `U_i` uniform on the progression.
    pub fn ap_uniform_sum_distribution(
        &self,
        spec: ApUniformSpec,
        cfg: &WeightConfig,
    ) -> Result<AtomDistribution> {
        self.law(Summands::ApUniform { m: spec.m }, cfg)
    }

    pub fn law(&self, summands: Summands, cfg: &WeightConfig) -> Result<AtomDistribution> {
        let n = cfg.len();
        check_cap("full distribution", summands, n, self.caps.full)?;
        let lattice = Lattice::new(cfg);
        let counts = lattice.convolve(0..n, &summands.multipliers());
        let total = outcome_count(summands, n);
        let atoms = counts
            .into_iter()
            .map(|(k, c)| (lattice.point_of(&k), Rational::from_count(c, &total)))
            .collect();
        Ok(AtomDistribution {
            n,
            dim: cfg.dim,
            summands,
            atoms,
        })
    }

    /// `P(S_n = x)` by meet-in-the-middle over the two halves of the weights.
    pub fn atom_probability(&self, cfg: &WeightConfig, x: &VecD) -> Result<Rational> {
        self.atom(Summands::Rademacher, cfg, x)
    }

    pub fn ap_atom_probability(
        &self,
        spec: ApUniformSpec,
        cfg: &WeightConfig,
        x: &VecD,
    ) -> Result<Rational> {
        self.atom(Summands::ApUniform { m: spec.m }, cfg, x)
    }

    pub fn atom(&self, summands: Summands, cfg: &WeightConfig, x: &VecD) -> Result<Rational> {
        cfg.check_dim(x)?;
        let n = cfg.len();
        check_cap("single atom", summands, n, self.caps.mitm)?;
        let lattice = Lattice::new(cfg);
        let Some(target) = lattice.key_of(x) else {
            return Ok(Rational::zero());
        };
        let multipliers = summands.multipliers();
        let split = n.div_ceil(2);
        let left = lattice.convolve(0..split, &multipliers);
        let right = lattice.convolve(split..n, &multipliers);
        let mut hits: u128 = 0;
        for (r, count) in &right {
            let need: Key = target.iter().zip(r).map(|(t, a)| t - a).collect();
            if let Some(l) = left.get(&need) {
                hits += l * count;
            }
        }
        Ok(Rational::from_count(hits, &outcome_count(summands, n)))
    }
}

/// `binom(n, k)`, zero for `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k.min(n - k)))
}

/// Closed form `P(R_n = j)`.
pub fn rademacher_atom(n: u64, j: i64) -> Rational {
    let n_signed = n as i128;
    let j = j as i128;
    if (n_signed + j).rem_euclid(2) != 0 || j.abs() > n_signed {
        return Rational::zero();
    }
    let up = ((n_signed + j) / 2) as u64;
    let total = BigUint::one() << n;
    Rational::new(BigInt::from(binomial(n, up)), BigInt::from(total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn v(s: &str) -> VecD {
        s.parse().unwrap()
    }

    fn cfg(ws: &[&str]) -> WeightConfig {
        WeightConfig::new(ws.iter().map(|w| v(w)).collect(), false).unwrap()
    }

    /// Reference law by enumerating every sign vector.
    fn brute_force(cfg: &WeightConfig) -> BTreeMap<VecD, Rational> {
        let n = cfg.len();
        let mut out: BTreeMap<VecD, Rational> = BTreeMap::new();
        let p = Rational::new(1, 1i64 << n);
        for mask in 0u64..(1 << n) {
            let mut s = VecD::zeros(cfg.dim());
            for (i, w) in cfg.weights().iter().enumerate() {
                s = if mask >> i & 1 == 1 {
                    s.add(w)
                } else {
                    s.add(&w.neg())
                };
            }
            *out.entry(s).or_insert_with(Rational::zero) += &p;
        }
        out
    }

    #[test]
    fn config_validation() {
        assert!(WeightConfig::new(vec![v("(1,1)")], false).is_err());
        assert!(WeightConfig::new(vec![v("0")], false).is_err());
        assert!(WeightConfig::new(vec![v("0")], true).is_ok());
        assert!(WeightConfig::new(vec![v("1"), v("(0,1)")], false).is_err());
        assert!(WeightConfig::new(vec![], false).is_err());
        assert!(WeightConfig::new(vec![v("(3/5,4/5)")], false).is_ok());
        let bad: std::result::Result<WeightConfig, _> =
            serde_json::from_str(r#"{"weights":[["2"]]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn single_rademacher() {
        let d = Engine::default().full_distribution(&cfg(&["1"])).unwrap();
        let atoms: Vec<_> = d
            .iter()
            .map(|(x, p)| (x.to_string(), p.to_string()))
            .collect();
        assert_eq!(
            atoms,
            [
                ("(-1)".into(), "1/2".into()),
                ("(1)".into(), "1/2".to_string())
            ]
        );
    }

    #[test]
    fn three_unit_weights() {
        let d = Engine::default()
            .full_distribution(&cfg(&["1", "1", "1"]))
            .unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d.probability(&v("-3")), r("1/8"));
        assert_eq!(d.probability(&v("-1")), r("3/8"));
        assert_eq!(d.probability(&v("1")), r("3/8"));
        assert_eq!(d.probability(&v("3")), r("1/8"));
        assert_eq!(d.total(), Rational::one());
    }

    #[test]
    fn orthogonal_pair() {
        let d = Engine::default()
            .full_distribution(&cfg(&["(1,0)", "(0,1)"]))
            .unwrap();
        assert_eq!(d.len(), 4);
        for x in ["(1,1)", "(1,-1)", "(-1,1)", "(-1,-1)"] {
            assert_eq!(d.probability(&v(x)), r("1/4"));
        }
    }

    #[test]
    fn atom_examples() {
        let e = Engine::default();
        assert_eq!(
            e.atom_probability(&cfg(&["1", "1", "1"]), &v("1")).unwrap(),
            r("3/8")
        );
        assert_eq!(
            e.atom_probability(&cfg(&["1", "1"]), &v("3")).unwrap(),
            Rational::zero()
        );
        assert_eq!(
            e.atom_probability(&cfg(&["(3/5,4/5)", "(3/5,4/5)"]), &v("(6/5,8/5)"))
                .unwrap(),
            r("1/4")
        );
        // off-lattice target
        assert_eq!(
            e.atom_probability(&cfg(&["1/2"]), &v("1/3")).unwrap(),
            Rational::zero()
        );
        assert!(matches!(
            e.atom_probability(&cfg(&["1"]), &v("(1,0)")),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn caps_are_enforced() {
        let e = Engine::new(Caps::new(3, 4).unwrap());
        let four = cfg(&["1", "1", "1", "1"]);
        assert!(matches!(
            e.full_distribution(&four),
            Err(Error::CapExceeded { .. })
        ));
        assert!(e.atom_probability(&four, &v("0")).is_ok());
        let five = cfg(&["1", "1", "1", "1", "1"]);
        assert!(matches!(
            e.atom_probability(&five, &v("1")),
            Err(Error::CapExceeded { .. })
        ));
        // 3^2 = 9 > 2^3
        let spec = ApUniformSpec::new(3).unwrap();
        assert!(e
            .ap_uniform_sum_distribution(spec, &cfg(&["1", "1"]))
            .is_err());
        assert!(Caps::new(0, 4).is_err());
    }

    #[test]
    fn rademacher_atom_examples() {
        assert_eq!(rademacher_atom(4, 0), r("6/16"));
        assert_eq!(rademacher_atom(4, 1), Rational::zero());
        assert_eq!(rademacher_atom(1, 1), r("1/2"));
        assert_eq!(rademacher_atom(2, -2), r("1/4"));
        assert_eq!(rademacher_atom(3, 5), Rational::zero());
        for n in 1..=10u64 {
            let ones = WeightConfig::scalars(&vec![Rational::one(); n as usize]).unwrap();
            let law = brute_force(&ones);
            for j in -(n as i64) - 1..=n as i64 + 1 {
                let expect = law.get(&VecD::from_ints(&[j])).cloned().unwrap_or_default();
                assert_eq!(rademacher_atom(n, j), expect, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn progression_support() {
        assert_eq!(ApUniformSpec::new(3).unwrap().support(), [-2, 0, 2]);
        assert_eq!(ApUniformSpec::new(4).unwrap().support(), [-3, -1, 1, 3]);
        assert!(ApUniformSpec::new(1).is_err());
    }

    #[test]
    fn progression_laws() {
        let e = Engine::default();
        let two = ApUniformSpec::new(2).unwrap();
        let ones = cfg(&["1", "1"]);
        let ap = e.ap_uniform_sum_distribution(two, &ones).unwrap();
        let rad = e.full_distribution(&ones).unwrap();
        assert_eq!(
            ap.iter().collect::<Vec<_>>(),
            rad.iter().collect::<Vec<_>>()
        );

        let three = ApUniformSpec::new(3).unwrap();
        let d = e.ap_uniform_sum_distribution(three, &cfg(&["1"])).unwrap();
        assert_eq!(d.probability(&v("-2")), r("1/3"));
        assert_eq!(d.probability(&v("0")), r("1/3"));
        assert_eq!(d.probability(&v("2")), r("1/3"));

        let d = e.ap_uniform_sum_distribution(three, &ones).unwrap();
        let expect = [
            ("-4", "1/9"),
            ("-2", "2/9"),
            ("0", "3/9"),
            ("2", "2/9"),
            ("4", "1/9"),
        ];
        assert_eq!(d.len(), 5);
        for (x, p) in expect {
            assert_eq!(d.probability(&v(x)), r(p));
            assert_eq!(e.ap_atom_probability(three, &ones, &v(x)).unwrap(), r(p));
        }
    }

    #[test]
    fn matches_brute_force() {
        let configs = [
            cfg(&["1", "1/2", "1/4", "1/8"]),
            cfg(&["(3/5,4/5)", "(4/5,3/5)", "(0,1)", "(-1/2,1/2)"]),
            cfg(&["(1/3,2/3,2/3)", "(1,0,0)", "(1/3,2/3,2/3)"]),
            cfg(&["1", "1", "1/2", "1/2", "3/4", "1/4", "1"]),
        ];
        let e = Engine::default();
        for c in configs {
            let expect = brute_force(&c);
            let got = e.full_distribution(&c).unwrap();
            assert_eq!(
                got.iter()
                    .map(|(x, p)| (x.clone(), p.clone()))
                    .collect::<BTreeMap<_, _>>(),
                expect
            );
            for (x, p) in &expect {
                assert_eq!(&e.atom_probability(&c, x).unwrap(), p);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let d = Engine::default()
            .full_distribution(&cfg(&["1", "1/2"]))
            .unwrap();
        let text = serde_json::to_string(&d).unwrap();
        let back: AtomDistribution = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
        let c = cfg(&["(3/5,4/5)", "(0,1)"]);
        let back: WeightConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
