//! Norms evaluable exactly on rational vectors.
//!
//! `L1` and `Linf` are rational on rational input. `L2` and the diagonal
//! weighted `L2` are handled through their squares, so integer parts are
//! found by integer comparisons and never through a square root.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{ceil_norm, floor_norm, Rational, VecD};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormSpec {
    L1,
    #[default]
    L2,
    Linf,
    /// `sqrt(sum_j w_j x_j^2)` with positive `w_j`.
    WeightedDiagonalL2 {
        weights: Vec<Rational>,
    },
}

impl NormSpec {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if let NormSpec::WeightedDiagonalL2 { weights } = self {
            if weights.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: weights.len(),
                });
            }
            if weights.iter().any(|w| !w.is_positive()) {
                return Err(Error::InvalidParameter(
                    "diagonal norm weights must be positive".into(),
                ));
            }
        }
        Ok(())
    }

    /// The exponent `p` such that [`NormSpec::powered`] returns `||x||^p`.
    pub fn power(&self) -> u32 {
        match self {
            NormSpec::L1 | NormSpec::Linf => 1,
            NormSpec::L2 | NormSpec::WeightedDiagonalL2 { .. } => 2,
        }
    }

    /// `||x||^p`, exact.
    pub fn powered(&self, x: &VecD) -> Rational {
        let c = x.coords();
        match self {
            NormSpec::L1 => c.iter().map(Rational::abs).sum(),
            NormSpec::Linf => c.iter().map(Rational::abs).max().unwrap_or_default(),
            NormSpec::L2 => c.iter().map(Rational::square).sum(),
            NormSpec::WeightedDiagonalL2 { weights } => {
                c.iter().zip(weights).map(|(x, w)| x.square() * w).sum()
            }
        }
    }

    /// Upper integer part of `||x||`.
    pub fn ceil(&self, x: &VecD) -> Result<u64> {
        let v = self.powered(x);
        match self.power() {
            1 => integer_part(v.ceil()),
            _ => ceil_norm(&v),
        }
    }

    /// Lower integer part of `||x||`.
    pub fn floor(&self, x: &VecD) -> Result<u64> {
        let v = self.powered(x);
        match self.power() {
            1 => integer_part(v.floor()),
            _ => floor_norm(&v),
        }
    }

    pub fn within_unit_ball(&self, x: &VecD) -> bool {
        self.powered(x) <= Rational::one()
    }

    pub fn value_f64(&self, x: &[f64]) -> f64 {
        match self {
            NormSpec::L1 => x.iter().map(|c| c.abs()).sum(),
            NormSpec::Linf => x.iter().fold(0.0, |m, c| m.max(c.abs())),
            NormSpec::L2 => x.iter().map(|c| c * c).sum::<f64>().sqrt(),
            NormSpec::WeightedDiagonalL2 { weights } => x
                .iter()
                .zip(weights)
                .map(|(c, w)| w.to_f64() * c * c)
                .sum::<f64>()
                .sqrt(),
        }
    }
}

fn integer_part(v: num_bigint::BigInt) -> Result<u64> {
    use num_traits::ToPrimitive;
    v.to_u64()
        .ok_or_else(|| Error::Overflow(format!("norm integer part {v} out of range")))
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::L1 => write!(f, "l1"),
            NormSpec::L2 => write!(f, "l2"),
            NormSpec::Linf => write!(f, "linf"),
            NormSpec::WeightedDiagonalL2 { weights } => {
                write!(f, "wl2:")?;
                for (i, w) in weights.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{w}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    /// `l1`, `l2`, `linf`, or `wl2:w1,w2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "l1" => Ok(NormSpec::L1),
            "l2" => Ok(NormSpec::L2),
            "linf" | "max" => Ok(NormSpec::Linf),
            _ => {
                let list = t
                    .strip_prefix("wl2:")
                    .ok_or_else(|| Error::parse("norm", s))?;
                let weights = list
                    .split(',')
                    .map(str::parse)
                    .collect::<Result<Vec<Rational>>>()
                    .map_err(|_| Error::parse("norm", s))?;
                if weights.is_empty() || weights.iter().any(|w| !w.is_positive()) {
                    return Err(Error::parse("norm", s));
                }
                Ok(NormSpec::WeightedDiagonalL2 { weights })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VecD {
        s.parse().unwrap()
    }

    #[test]
    fn evaluates_exactly() {
        let x = v("(3/5,-4/5)");
        assert_eq!(NormSpec::L1.powered(&x), "7/5".parse().unwrap());
        assert_eq!(NormSpec::Linf.powered(&x), "4/5".parse().unwrap());
        assert_eq!(NormSpec::L2.powered(&x), Rational::one());
        let w: NormSpec = "wl2:1,1/4".parse().unwrap();
        assert_eq!(w.powered(&x), "13/25".parse().unwrap());
    }

    #[test]
    fn integer_parts() {
        let x = v("(1,1)");
        assert_eq!(NormSpec::L2.ceil(&x).unwrap(), 2);
        assert_eq!(NormSpec::L2.floor(&x).unwrap(), 1);
        assert_eq!(NormSpec::L1.ceil(&x).unwrap(), 2);
        assert_eq!(NormSpec::L1.floor(&x).unwrap(), 2);
        assert_eq!(NormSpec::Linf.ceil(&x).unwrap(), 1);
        assert_eq!(NormSpec::Linf.ceil(&v("(3/2,0)")).unwrap(), 2);
        assert_eq!(NormSpec::Linf.floor(&v("(3/2,0)")).unwrap(), 1);
    }

    #[test]
    fn unit_ball() {
        assert!(NormSpec::Linf.within_unit_ball(&v("(1,1)")));
        assert!(!NormSpec::L2.within_unit_ball(&v("(1,1)")));
        assert!(!NormSpec::L1.within_unit_ball(&v("(3/5,4/5)")));
        assert!(NormSpec::L2.within_unit_ball(&v("(3/5,4/5)")));
    }

    #[test]
    fn parse_and_display() {
        for s in ["l1", "l2", "linf", "wl2:1,2/3"] {
            assert_eq!(s.parse::<NormSpec>().unwrap().to_string(), s);
        }
        assert!("l3".parse::<NormSpec>().is_err());
        assert!("wl2:1,-1".parse::<NormSpec>().is_err());
        assert!("wl2:1".parse::<NormSpec>().unwrap().validate(2).is_err());
    }
}
