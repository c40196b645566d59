//! Exact rational scalars and vectors.
//!
//! [`Rational`] wraps `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator, so equality and hashing on atoms
//! are well defined. The textual form is `p/q`, or just `p` for integers.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let denom = denom.into();
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(numer.into(), denom))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Exact value of a finite double.
    pub fn from_f64(value: f64) -> Option<Self> {
        BigRational::from_float(value).map(Rational)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn square(&self) -> Self {
        Rational(&self.0 * &self.0)
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// `count / 2^n` style probabilities.
    pub fn from_count(count: u128, total: &BigUint) -> Self {
        Rational::new(
            BigInt::from(count),
            BigInt::from_biguint(Sign::Plus, total.clone()),
        )
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p`, `p/q` and finite decimals such as `-0.75`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::parse("rational", s);
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Rational::new(p, q));
        }
        if let Some((int, frac)) = t.split_once('.') {
            let negative = int.starts_with('-');
            let digits = int.trim_start_matches(['-', '+']);
            let valid = |d: &str| d.chars().all(|c| c.is_ascii_digit());
            if !valid(digits) || !valid(frac) || (digits.is_empty() && frac.is_empty()) {
                return Err(bad());
            }
            let whole: BigInt = format!("{digits}{frac}").parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let value = Rational::new(whole, scale);
            return Ok(if negative { -value } else { value });
        }
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::from(n)),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// A point of R^d with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VecD(Vec<Rational>);

impl VecD {
    pub fn new(coords: Vec<Rational>) -> Self {
        VecD(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        VecD(vec![Rational::zero(); dim])
    }

    /// `value * e_axis` in R^dim.
    pub fn axis(dim: usize, axis: usize, value: Rational) -> Self {
        let mut v = VecD::zeros(dim);
        v.0[axis] = value;
        v
    }

    pub fn scalar(value: Rational) -> Self {
        VecD(vec![value])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        VecD(coords.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn norm_sq(&self) -> Rational {
        norm_sq(self)
    }

    pub fn scale(&self, factor: &Rational) -> VecD {
        VecD(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &VecD) -> VecD {
        debug_assert_eq!(self.dim(), other.dim());
        VecD(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> VecD {
        VecD(self.0.iter().map(|c| -c).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Rational::to_f64).collect()
    }
}

impl fmt::Display for VecD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for VecD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for VecD {
    type Err = Error;

    /// Accepts `(a,b)`, `[a,b]`, `a,b`, a bare scalar, or a JSON array of
    /// rational strings.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('[') {
            if let Ok(v) = serde_json::from_str::<VecD>(t) {
                return Ok(v);
            }
        }
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix('[').and_then(|r| r.strip_suffix(']')))
            .unwrap_or(t);
        let coords = inner
            .split(',')
            .map(|c| c.trim().trim_matches('"').parse::<Rational>())
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::parse("vector", s))?;
        Ok(VecD(coords))
    }
}

/// A list of weights: `1,1/2,1` (scalars), `(1,0),(0,1)`, or a JSON array
/// of vectors or of scalars.
pub fn parse_vec_list(text: &str) -> Result<Vec<VecD>> {
    let t = text.trim();
    if t.starts_with('[') {
        if let Ok(vs) = serde_json::from_str::<Vec<VecD>>(t) {
            return Ok(vs);
        }
        let scalars: Vec<Rational> =
            serde_json::from_str(t).map_err(|_| Error::parse("weights", t))?;
        return Ok(scalars.into_iter().map(VecD::scalar).collect());
    }
    if t.contains('(') {
        if !t.ends_with(')') {
            return Err(Error::parse("weights", t));
        }
        return t
            .split(')')
            .map(|part| part.trim().trim_start_matches(',').trim())
            .filter(|part| !part.is_empty())
            .map(|part| format!("{part})").parse::<VecD>())
            .collect();
    }
    t.split(',')
        .map(|c| c.trim().parse::<Rational>().map(VecD::scalar))
        .collect()
}

/// Squared Euclidean norm, exact.
pub fn norm_sq(v: &VecD) -> Rational {
    v.0.iter().map(Rational::square).sum()
}

fn floor_root_of(q: &Rational) -> Result<BigUint> {
    if q.is_negative() {
        return Err(Error::NegativeNorm(q.to_string()));
    }
    // k^2 <= q  <=>  k^2 <= floor(q) for integer k
    let whole = q.floor().to_biguint().expect("non-negative");
    Ok(whole.sqrt())
}

fn to_u64(k: BigUint) -> Result<u64> {
    k.to_u64()
        .ok_or_else(|| Error::Overflow(format!("integer part of norm {k} does not fit in u64")))
}

/// Smallest `k >= 0` with `k^2 >= q`, i.e. the upper integer part of `sqrt(q)`.
pub fn ceil_norm(q: &Rational) -> Result<u64> {
    let root = floor_root_of(q)?;
    let exact = Rational::from_integer(BigInt::from_biguint(Sign::Plus, &root * &root)) == *q;
    to_u64(if exact { root } else { root + 1u32 })
}

/// Largest `k >= 0` with `k^2 <= q`, i.e. the lower integer part of `sqrt(q)`.
pub fn floor_norm(q: &Rational) -> Result<u64> {
    to_u64(floor_root_of(q)?)
}

/// Least common multiple of the denominators of `values` (1 for none).
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
