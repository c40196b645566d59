//! Browser bindings. Each export takes plain strings and returns a JSON
//! string; the `*_json` functions behind them are ordinary Rust and are what
//! the native tests call.

use lolab_core::antichain::{build_family, is_antichain, is_k_intersecting};
use lolab_core::bounds::{erdos_kleitman_bound, hoeffding_bound, milner_bound, nonuniform_bound};
use lolab_core::rational::parse_vec_list;
use lolab_core::{Caps, Engine, Rational, Summands, VecD, WeightConfig};
use num_bigint::BigUint;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Kept small so the page stays responsive.
const PAGE_CAPS: Caps = Caps { full: 16, mitm: 32 };

#[derive(Serialize)]
struct CurvePoint {
    n: u64,
    k: u64,
    bound: Rational,
    bound_f64: f64,
    hoeffding: f64,
    uniform_f64: f64,
}

#[derive(Serialize)]
struct AtomRow {
    x: VecD,
    p: Rational,
    p_f64: f64,
    bound: Option<Rational>,
    bound_f64: Option<f64>,
}

#[derive(Serialize)]
struct Distribution {
    n: usize,
    dim: usize,
    max: Rational,
    atoms: Vec<AtomRow>,
}

#[derive(Serialize)]
struct AntichainView {
    n: u32,
    k: u64,
    sets: Vec<Vec<u32>>,
    size: usize,
    probability: Rational,
    antichain: bool,
    k_intersecting: bool,
    milner_bound: String,
    milner: bool,
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Exact bound and its Hoeffding envelope for `n = 1..=n_max`.
pub fn bound_curve_json(norm_sq: &str, n_max: u32) -> Result<String, String> {
    let q: Rational = norm_sq.trim().parse().map_err(err)?;
    if n_max == 0 || n_max > 400 {
        return Err("n_max must be between 1 and 400".into());
    }
    let points = (1..=n_max as u64)
        .map(|n| {
            let report = nonuniform_bound(n, &q)?;
            Ok(CurvePoint {
                n,
                k: report.k,
                bound_f64: report.bound.to_f64(),
                bound: report.bound,
                hoeffding: hoeffding_bound(n, &q),
                uniform_f64: erdos_kleitman_bound(n).to_f64(),
            })
        })
        .collect::<lolab_core::Result<Vec<_>>>()
        .map_err(err)?;
    to_json(&points)
}

/// Law of the weighted sum, each atom next to its bound (Rademacher only).
/// `m < 3` means random signs.
pub fn distribution_json(weights: &str, m: u32) -> Result<String, String> {
    let cfg = WeightConfig::new(parse_vec_list(weights).map_err(err)?, false).map_err(err)?;
    let summands = if m >= 3 {
        Summands::ApUniform { m }
    } else {
        Summands::Rademacher
    };
    let law = Engine::new(PAGE_CAPS).law(summands, &cfg).map_err(err)?;
    let n = cfg.len() as u64;
    let atoms = law
        .iter()
        .map(|(x, p)| {
            let bound = match summands {
                Summands::Rademacher if !x.is_zero() => {
                    Some(nonuniform_bound(n, &x.norm_sq())?.bound)
                }
                _ => None,
            };
            Ok(AtomRow {
                x: x.clone(),
                p: p.clone(),
                p_f64: p.to_f64(),
                bound_f64: bound.as_ref().map(Rational::to_f64),
                bound,
            })
        })
        .collect::<lolab_core::Result<Vec<_>>>()
        .map_err(err)?;
    to_json(&Distribution {
        n: cfg.len(),
        dim: cfg.dim(),
        max: law.max_probability(),
        atoms,
    })
}

/// The family of sets hitting a scalar target, with its three checks.
pub fn antichain_json(weights: &str, x: &str) -> Result<String, String> {
    let scalars = parse_vec_list(weights)
        .map_err(err)?
        .into_iter()
        .map(|w| match w.coords() {
            [c] => Ok(c.clone()),
            _ => Err("set families need scalar weights".to_string()),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let x: Rational = x.trim().parse().map_err(err)?;
    let family = build_family(&scalars, &x).map_err(err)?;
    let k = u64::try_from(x.abs().ceil()).map_err(err)?;
    let n = scalars.len() as u32;
    let bound = milner_bound(n as u64, k);
    let probability = Engine::new(PAGE_CAPS)
        .atom_probability(
            &WeightConfig::scalars(&scalars).map_err(err)?,
            &VecD::scalar(x),
        )
        .map_err(err)?;
    to_json(&AntichainView {
        n,
        k,
        size: family.len(),
        probability,
        antichain: is_antichain(&family),
        k_intersecting: is_k_intersecting(&family, k as u32),
        milner: BigUint::from(family.len()) <= bound,
        milner_bound: bound.to_string(),
        sets: family.sets(),
    })
}

#[wasm_bindgen]
pub fn bound_curve(norm_sq: &str, n_max: u32) -> Result<String, JsError> {
    bound_curve_json(norm_sq, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn distribution(weights: &str, m: u32) -> Result<String, JsError> {
    distribution_json(weights, m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn antichain(weights: &str, x: &str) -> Result<String, JsError> {
    antichain_json(weights, x).map_err(|e| JsError::new(&e))
}
