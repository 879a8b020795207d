//! Browser bindings. Each exported function returns a JSON string so the
//! page needs no generated type glue beyond the wasm-bindgen shim.

use pseudoatom::catalog::{excited_spectrum_in, ionization_potential_in, lookup, ElementRecord};
use pseudoatom::pseudopotential::{zeta, zeta_quadrature_oracle};
use pseudoatom::report::DIVERGENT_ZR;
use pseudoatom::units::HARTREE_EV;
use pseudoatom::{ModelKind, Orientation, RadialSolver, SolverConfig, ZetaTruncation};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MODELS: [ModelKind; 3] = [
    ModelKind::BareCoulomb,
    ModelKind::ConstantScreening,
    ModelKind::VaryingScreening,
];

/// Log-spaced radii on `[r_min, r_max]`.
fn log_grid(r_min: f64, r_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(r_min > 0.0 && r_max > r_min && points >= 2) {
        return Err(format!(
            "need 0 < r_min < r_max and at least 2 points, got {r_min}, {r_max}, {points}"
        ));
    }
    let (a, b) = (r_min.ln(), r_max.ln());
    Ok((0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect())
}

#[derive(Debug, Serialize)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct Curves {
    pub r: Vec<f64>,
    pub series: Vec<Series>,
}

fn element(symbol: &str, m: u32) -> Result<ElementRecord, String> {
    let el = lookup(symbol).map_err(|e| e.to_string())?;
    if m == 0 {
        Ok(el)
    } else {
        el.with_m(m).map_err(|e| e.to_string())
    }
}

/// Charge `-r V(r)` felt at radius `r` under each model (no centrifugal term).
pub fn charge_curves(symbol: &str, r_min: f64, r_max: f64, points: usize) -> Result<Curves, String> {
    let el = element(symbol, 0)?;
    let r = log_grid(r_min, r_max, points)?;
    let mut series = Vec::new();
    for kind in MODELS {
        let model = el.model(kind).map_err(|e| e.to_string())?;
        let values = r
            .iter()
            .map(|&x| f64::from(model.z()) - model.screening_charge(x))
            .collect();
        series.push(Series {
            name: kind.tag().to_owned(),
            values,
        });
    }
    Ok(Curves { r, series })
}

/// Closed-form screening factor and both quadrature orientations.
/// `k_max < 0` integrates the exact weight.
pub fn zeta_curves(z: u32, r_min: f64, r_max: f64, points: usize, k_max: i32) -> Result<Curves, String> {
    let r = log_grid(r_min, r_max, points)?;
    let trunc = if k_max < 0 {
        ZetaTruncation::exact()
    } else {
        ZetaTruncation {
            k_max: Some(k_max as u32),
            ..ZetaTruncation::first_order()
        }
    };
    let err = |e: pseudoatom::Error| e.to_string();
    let closed: Vec<f64> = r.iter().map(|&x| zeta(z, x)).collect::<Result<_, _>>().map_err(err)?;
    let oracle = |o: Orientation| -> Result<Vec<f64>, String> {
        r.iter()
            .map(|&x| zeta_quadrature_oracle(z, x, &trunc, o).map_err(err))
            .collect()
    };
    let divergent = r
        .iter()
        .map(|&x| if f64::from(z) * x < DIVERGENT_ZR { 1.0 } else { 0.0 })
        .collect();
    Ok(Curves {
        series: vec![
            Series { name: "closed form".into(), values: closed },
            Series { name: "oracle active".into(), values: oracle(Orientation::ActiveNumerator)? },
            Series { name: "oracle passive".into(), values: oracle(Orientation::PassiveNumerator)? },
            Series { name: "divergent".into(), values: divergent },
        ],
        r,
    })
}

#[derive(Debug, Serialize)]
pub struct Level {
    pub label: String,
    pub principal_n: u32,
    pub l: u32,
    pub energy_ev: f64,
}

#[derive(Debug, Serialize)]
pub struct ModelSummary {
    pub model: String,
    pub ip_ev: f64,
    pub levels: Vec<Level>,
}

#[derive(Debug, Serialize)]
pub struct ElementSummary {
    pub symbol: String,
    pub z: u32,
    pub n_electrons: u32,
    pub m: u32,
    pub reference_ip_ev: Option<f64>,
    pub splines: usize,
    pub models: Vec<ModelSummary>,
}

/// Ionization potential and the levels up to two shells above the outermost one.
/// `m = 0` keeps the tabulated occupancy.
pub fn element_summary(symbol: &str, m: u32, splines: usize) -> Result<ElementSummary, String> {
    let el = element(symbol, m)?;
    let err = |e: pseudoatom::Error| e.to_string();
    let solver = SolverConfig::with_auto_grid(splines, 200.0, 10)
        .and_then(RadialSolver::new)
        .map_err(err)?;
    let n_max = el.outermost.0 + 2;
    let mut models = Vec::new();
    for kind in [ModelKind::ConstantScreening, ModelKind::VaryingScreening] {
        let ip = ionization_potential_in(&el, kind, &solver, HARTREE_EV).map_err(err)?;
        let levels = excited_spectrum_in(&el, kind, n_max, 3.min(n_max - 1), &solver, HARTREE_EV)
            .map_err(err)?
            .into_iter()
            .map(|lv| Level {
                label: lv.label,
                principal_n: lv.principal_n,
                l: lv.l,
                energy_ev: lv.energy_scaled_ev,
            })
            .collect();
        models.push(ModelSummary {
            model: kind.tag().to_owned(),
            ip_ev: ip.ip_ev,
            levels,
        });
    }
    Ok(ElementSummary {
        symbol: el.symbol.clone(),
        z: el.z,
        n_electrons: el.n_electrons,
        m: el.m,
        reference_ip_ev: el.reference_ip_ev,
        splines,
        models,
    })
}

fn to_js<T: Serialize>(value: Result<T, String>) -> Result<String, JsValue> {
    value
        .and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = chargeCurves)]
pub fn charge_curves_js(symbol: &str, r_min: f64, r_max: f64, points: usize) -> Result<String, JsValue> {
    to_js(charge_curves(symbol, r_min, r_max, points))
}

#[wasm_bindgen(js_name = zetaCurves)]
pub fn zeta_curves_js(z: u32, r_min: f64, r_max: f64, points: usize, k_max: i32) -> Result<String, JsValue> {
    to_js(zeta_curves(z, r_min, r_max, points, k_max))
}

#[wasm_bindgen(js_name = elementSummary)]
pub fn element_summary_js(symbol: &str, m: u32, splines: usize) -> Result<String, JsValue> {
    to_js(element_summary(symbol, m, splines))
}
