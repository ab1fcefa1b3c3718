//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function returns a JSON string that the page plots on a
//! canvas. The `*_data` functions hold the logic and are plain Rust, so they
//! are tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use ringcons::consensus::{
    consensus_by_criterion, consensus_by_theorem, margin, max_real_nonstructural, system_spectrum,
    theorem_threshold,
};
use ringcons::spectra::{cassini_ovals, closed_form_spectrum};
use ringcons::{ComplexValue, Sign, Topology};

type Point = [f64; 2];

fn points(zs: &[ComplexValue]) -> Vec<Point> {
    zs.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Serialize)]
pub struct SpectrumView {
    pub n: usize,
    pub eigenvalues: Vec<Point>,
    pub outer: Vec<Point>,
    pub inner: Vec<Point>,
    pub max_residual: f64,
}

/// Laplacian eigenvalues of the alternating ring on `2m` agents with both
/// Cassini ovals.
pub fn spectrum_data(m: usize, negated: bool, samples: usize) -> ringcons::Result<SpectrumView> {
    let sign = if negated { Sign::Negated } else { Sign::Laplacian };
    let report = closed_form_spectrum(m, sign)?;
    let (outer, inner) = cassini_ovals(sign, samples.max(8));
    Ok(SpectrumView {
        n: 2 * m,
        eigenvalues: points(&report.eigenvalues),
        outer: points(&outer),
        inner: points(&inner),
        max_residual: report.max_cassini_residual.unwrap_or(0.0),
    })
}

#[derive(Debug, Serialize)]
pub struct RegionView {
    pub n: usize,
    pub gamma: f64,
    /// Eigenvalues of `−L`.
    pub eigenvalues: Vec<Point>,
    pub closed_loop: Vec<Point>,
    /// Upper half of the boundary `y² = −γ²x` on `x ∈ [x_min, 0]`.
    pub parabola: Vec<Point>,
    pub outer: Vec<Point>,
    pub inner: Vec<Point>,
    pub theorem: bool,
    pub criterion: bool,
    pub max_re: f64,
}

/// Ω-region of `s² + γs` against the spectrum of `−L`.
pub fn region_data(m: usize, gamma: f64) -> ringcons::Result<RegionView> {
    let lap = closed_form_spectrum(m, Sign::Laplacian)?.eigenvalues;
    let neg: Vec<ComplexValue> = lap.iter().map(|z| -z).collect();
    let (outer, inner) = cassini_ovals(Sign::Negated, 400);
    let x_min = -3.5;
    let parabola = (0..=200)
        .map(|i| {
            let x = x_min * i as f64 / 200.0;
            [x, gamma * (-x).sqrt()]
        })
        .collect();
    Ok(RegionView {
        n: 2 * m,
        gamma,
        eigenvalues: points(&neg),
        closed_loop: points(&system_spectrum(gamma, &lap)?),
        parabola,
        outer: points(&outer),
        inner: points(&inner),
        theorem: consensus_by_theorem(gamma),
        criterion: consensus_by_criterion(gamma, &lap)?,
        max_re: max_real_nonstructural(gamma, &lap)?,
    })
}

#[derive(Debug, Serialize)]
pub struct MarginRow {
    pub n: usize,
    pub margin: f64,
    pub max_re: f64,
}

#[derive(Debug, Serialize)]
pub struct MarginCurve {
    pub gamma: f64,
    pub threshold: f64,
    pub rows: Vec<MarginRow>,
}

/// Critical damping and closed-loop max Re at `gamma` for even
/// `n = 6, 8, …, n_max`.
pub fn margin_data(n_max: usize, gamma: f64) -> ringcons::Result<MarginCurve> {
    let mut rows = Vec::new();
    for n in (6..=n_max.max(6)).step_by(2) {
        let lap = closed_form_spectrum(n / 2, Sign::Laplacian)?.eigenvalues;
        rows.push(MarginRow {
            n,
            margin: margin(Topology::Alternating, n, 1e-6)?.gamma_star,
            max_re: max_real_nonstructural(gamma, &lap)?,
        });
    }
    Ok(MarginCurve { gamma, threshold: theorem_threshold(), rows })
}

fn to_js<T: Serialize>(r: ringcons::Result<T>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
        .and_then(|v| serde_json::to_string(&v).map_err(|e| JsValue::from_str(&e.to_string())))
}

#[wasm_bindgen]
pub fn spectrum(m: usize, negated: bool, samples: usize) -> Result<String, JsValue> {
    to_js(spectrum_data(m, negated, samples))
}

#[wasm_bindgen]
pub fn region(m: usize, gamma: f64) -> Result<String, JsValue> {
    to_js(region_data(m, gamma))
}

#[wasm_bindgen]
pub fn margin_curve(n_max: usize, gamma: f64) -> Result<String, JsValue> {
    to_js(margin_data(n_max, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_view_sizes() {
        let v = spectrum_data(8, false, 100).unwrap();
        assert_eq!(v.eigenvalues.len(), 16);
        assert_eq!(v.outer.len(), 100);
        assert!(v.max_residual <= 1e-9);
        assert!(spectrum_data(2, false, 100).is_err());
    }

    #[test]
    fn region_view_flags() {
        let v = region_data(25, 0.9).unwrap();
        assert!(!v.criterion && !v.theorem);
        assert!((v.max_re - 0.000633).abs() < 5e-5);
        assert_eq!(v.closed_loop.len(), 100);
        let v = region_data(25, 2.0).unwrap();
        assert!(v.criterion && v.theorem);
        assert!(region_data(25, 0.0).is_err());
    }

    #[test]
    fn margin_curve_rows() {
        let c = margin_data(20, theorem_threshold()).unwrap();
        let ns: Vec<usize> = c.rows.iter().map(|r| r.n).collect();
        assert_eq!(ns, vec![6, 8, 10, 12, 14, 16, 18, 20]);
        assert!(c.rows.iter().all(|r| r.margin < c.threshold && r.max_re < 0.0));
        let json = to_js(margin_data(10, 1.0)).unwrap();
        assert!(json.contains("\"threshold\""));
    }
}
