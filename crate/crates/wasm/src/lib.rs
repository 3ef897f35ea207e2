//! Browser bindings. Each export returns a JSON document; failures come back
//! as `{"error": "..."}` so the page can show them inline.

use num_integer::binomial;
use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use verlinde::oracle::PrecisionConfig;
use verlinde::smatrix::{s_row_pgl, s_row_sl};
use verlinde::verlinde::{check_descent, Evaluator, ModuliQuery};
use verlinde::weights::{orbit_listing, LevelContext};

/// Largest `|P_k|` the page will evaluate.
pub const MAX_WEIGHTS: usize = 6000;

fn guard(r: usize, k: usize) -> Result<LevelContext, String> {
    let ctx = LevelContext::new(r, k).map_err(|e| e.to_string())?;
    let n = binomial(k + r - 1, r - 1);
    if n > MAX_WEIGHTS {
        return Err(format!(
            "{n} weights at r = {r}, k = {k}; the demo stops at {MAX_WEIGHTS}"
        ));
    }
    Ok(ctx)
}

fn render(v: Result<Value, String>) -> String {
    match v {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

#[derive(Serialize)]
struct DegreeRow {
    d: usize,
    sl: Option<String>,
    pgl: Option<String>,
    note: Option<String>,
}

pub fn dimensions_value(r: usize, k: usize, g: usize) -> Result<Value, String> {
    guard(r, k)?;
    let eval = Evaluator::new();
    let mut rows = Vec::with_capacity(r);
    for d in 0..r {
        let q = ModuliQuery::new(r, d as i64, k, g).map_err(|e| e.to_string())?;
        let sl = eval.sl_dimension(&q).map(|x| x.value.to_string());
        let pgl = eval.pgl_dimension(&q).map(|x| x.value.to_string());
        let note = match (&sl, &pgl) {
            (Err(e), _) => Some(e.to_string()),
            (Ok(_), Err(e)) => Some(e.to_string()),
            _ => None,
        };
        rows.push(DegreeRow {
            d,
            sl: sl.ok(),
            pgl: pgl.ok(),
            note,
        });
    }
    let sl_total = eval
        .sl_dimension_sum(r, k, g)
        .map(|x| x.value.to_string())
        .ok();
    let pgl_total = eval.pgl_total(r, k, g).map(|x| x.value.to_string()).ok();
    Ok(json!({
        "r": r, "k": k, "g": g,
        "degrees": rows,
        "sl_total": sl_total,
        "pgl_total": pgl_total,
    }))
}

pub fn s_matrix_row_value(r: usize, k: usize, pgl: bool) -> Result<Value, String> {
    let ctx = guard(r, k)?;
    let row = if pgl {
        check_descent(r, k).map_err(|e| e.to_string())?;
        s_row_pgl(&ctx)
    } else {
        s_row_sl(&ctx)
    }
    .map_err(|e| e.to_string())?;
    let cfg = PrecisionConfig::new(128, 1e-20, 1e-30).expect("valid precision");
    let entries: Vec<Value> = row
        .iter()
        .map(|e| {
            let rec = e.record(&cfg);
            json!({
                "label": rec.label,
                "s0_squared": rec.s0_squared.to_string(),
                "s0": rec.s0_float,
                "members": rec.orbit_members.len(),
            })
        })
        .collect();
    Ok(json!({ "r": r, "k": k, "pgl": pgl, "entries": entries }))
}

pub fn orbit_geometry_value(r: usize, k: usize) -> Result<Value, String> {
    let ctx = guard(r, k)?;
    let n = ctx.order() as f64;
    let points: Vec<Value> = orbit_listing(&ctx)
        .into_iter()
        .map(|o| {
            let angles: Vec<f64> = o
                .exponents
                .iter()
                .map(|&a| 2.0 * std::f64::consts::PI * a as f64 / n)
                .collect();
            json!({
                "marks": o.marks,
                "exponents": o.exponents,
                "angles": angles,
                "center_class": o.center_class,
                "in_root_lattice": o.in_root_lattice,
            })
        })
        .collect();
    Ok(json!({ "r": r, "k": k, "N": ctx.order(), "orbits": points }))
}

/// SL and PGL dimensions for every degree, with the totals where defined.
#[wasm_bindgen]
pub fn dimensions(r: usize, k: usize, g: usize) -> String {
    render(dimensions_value(r, k, g))
}

/// First row of the S-matrix as squared magnitudes and float magnitudes.
#[wasm_bindgen]
pub fn s_matrix_row(r: usize, k: usize, pgl: bool) -> String {
    render(s_matrix_row_value(r, k, pgl))
}

/// Each weight's diagonal entries as angles on the unit circle.
#[wasm_bindgen]
pub fn orbit_geometry(r: usize, k: usize) -> String {
    render(orbit_geometry_value(r, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn dimensions_rank_two() {
        let v = parse(dimensions(2, 4, 2));
        assert_eq!(v["degrees"][0]["sl"], "35");
        assert_eq!(v["degrees"][1]["pgl"], "4");
        assert_eq!(v["sl_total"], "54");
        assert_eq!(v["pgl_total"], "9");
    }

    #[test]
    fn dimensions_report_invalid_degrees() {
        let v = parse(dimensions(2, 3, 2));
        assert_eq!(v["degrees"][0]["sl"], "20");
        assert!(v["degrees"][1]["sl"].is_null());
        assert!(v["degrees"][1]["note"]
            .as_str()
            .unwrap()
            .contains("multiple"));
        assert!(v["pgl_total"].is_null());
        assert!(parse(dimensions(2, 4, 1))["error"].is_null());
        assert!(parse(dimensions(1, 4, 2))["error"].is_string());
    }

    #[test]
    fn s_row() {
        let v = parse(s_matrix_row(2, 4, true));
        let entries = v["entries"].as_array().unwrap();
        assert_eq!(entries.len(), 3);
        assert_eq!(entries[0]["s0_squared"], "1/3");
        let sl = parse(s_matrix_row(3, 3, false));
        let total: f64 = sl["entries"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| e["s0"].as_f64().unwrap().powi(2))
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(parse(s_matrix_row(2, 2, true))["error"].is_string());
    }

    #[test]
    fn geometry() {
        let v = parse(orbit_geometry(2, 0));
        assert_eq!(v["N"], 4);
        let a = v["orbits"][0]["angles"].as_array().unwrap();
        assert!((a[0].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(parse(orbit_geometry(5, 60))["error"]
            .as_str()
            .unwrap()
            .contains("demo stops"));
    }
}
