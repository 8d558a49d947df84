//! Browser bindings: draw a front, measure its density, count lattice points.

use serde_json::json;
use wasm_bindgen::prelude::*;
use wavefront_core::frontier::propagate_from;
use wavefront_core::io::{render_svg, series_csv, SvgOptions};
use wavefront_core::lattice::lattice_count;
use wavefront_core::metrics::density_report;
use wavefront_core::{Front, PropagationParams, SurfaceModel, SurfacePoint};

/// Keeps a single call from freezing the page.
pub const MAX_T: f64 = 200.0;

fn simulate(surface: &str, point: &str, t: f64) -> Result<Front, String> {
    if !(0.0..=MAX_T).contains(&t) {
        return Err(format!("t must lie in [0, {MAX_T}]"));
    }
    let surface: SurfaceModel = surface.parse().map_err(|e| format!("{e}"))?;
    let source: SurfacePoint = point.parse().map_err(|e| format!("{e}"))?;
    let params = PropagationParams::for_surface(&surface);
    propagate_from(surface, source, t, 256, params).map_err(|e| e.to_string())
}

pub fn front_svg_impl(surface: &str, point: &str, t: f64, width: u32) -> Result<String, String> {
    let front = simulate(surface, point, t)?;
    Ok(render_svg(
        &front,
        &SvgOptions {
            width_px: width,
            color_by_component: true,
        },
    ))
}

pub fn density_json_impl(surface: &str, point: &str, t: f64, eps: f64) -> Result<String, String> {
    let front = simulate(surface, point, t)?;
    let r = density_report(&front, eps).map_err(|e| e.to_string())?;
    Ok(json!({
        "t": r.t,
        "eps": r.eps,
        "cells_total": r.cells_total,
        "cells_hit": r.cells_hit,
        "covering_radius": r.covering_radius,
        "rate_bound": 3.0 / r.t.sqrt(),
        "length": r.length,
        "components": r.n_components,
        "distance_exact": r.distance_exact,
    })
    .to_string())
}

pub fn lattice_csv_impl(lo: f64, hi: f64, step: f64) -> Result<String, String> {
    if !(lo > 0.0 && hi >= lo && step > 0.0 && hi <= 2000.0) {
        return Err("need 0 < lo <= hi <= 2000 and step > 0".into());
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    let rows = (0..=n)
        .map(|k| {
            let t = lo + k as f64 * step;
            lattice_count(t, 1.0 / t.sqrt())
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(series_csv(&rows))
}

#[wasm_bindgen]
pub fn front_svg(surface: &str, point: &str, t: f64, width: u32) -> Result<String, JsError> {
    front_svg_impl(surface, point, t, width).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn density_json(surface: &str, point: &str, t: f64, eps: f64) -> Result<String, JsError> {
    density_json_impl(surface, point, t, eps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn lattice_csv(lo: f64, hi: f64, step: f64) -> Result<String, JsError> {
    lattice_csv_impl(lo, hi, step).map_err(|e| JsError::new(&e))
}
