//! Reference checks behind `ringcons verify`.

use serde::Deserialize;

use crate::complex::pairing_gap;
use crate::consensus::{
    consensus_by_criterion, cyclic_margin_asymptote, margin, max_real_nonstructural, theorem_threshold,
};
use crate::error::{Error, Result};
use crate::roots::poly_roots;
use crate::spectra::{
    char_poly_alternating, closed_form_spectrum, dense_char_poly, laplacian_spectrum, Sign,
};
use crate::topology::{build_alternating_ring, laplacian, Topology};

/// The bundled fixture, `fixtures/reference.toml`.
pub const REFERENCE_TOML: &str = include_str!("../fixtures/reference.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct ReferenceValues {
    pub margins: MarginTable,
    pub spot: Vec<SpotValue>,
    pub thresholds: Thresholds,
}

#[derive(Debug, Clone, Deserialize)]
pub struct MarginTable {
    pub tolerance: f64,
    pub n: Vec<usize>,
    pub gamma: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SpotValue {
    pub n: usize,
    pub gamma: f64,
    pub max_re: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Thresholds {
    pub alternating: f64,
    pub cyclic: f64,
}

impl ReferenceValues {
    pub fn bundled() -> Result<Self> {
        Self::parse(REFERENCE_TOML)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let refs: Self = toml::from_str(text).map_err(|e| Error::Fixture(e.to_string()))?;
        if refs.margins.n.len() != refs.margins.gamma.len() {
            return Err(Error::Fixture("margin table columns differ in length".into()));
        }
        Ok(refs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self { name: name.into(), passed, detail }
    }

    fn failed(name: impl Into<String>, err: Error) -> Self {
        Self::new(name, false, format!("error: {err}"))
    }
}

/// Margin tolerance used by the checks.
const BISECTION_TOL: f64 = 1e-6;

/// Runs every reference check. Computation errors are reported as failed
/// checks rather than aborting the run.
pub fn run_reference_checks(refs: &ReferenceValues) -> Vec<CheckOutcome> {
    let mut out = Vec::new();

    let t = &refs.thresholds;
    out.push(CheckOutcome::new(
        "threshold sqrt(6/7)",
        (theorem_threshold() - t.alternating).abs() <= 1e-15,
        format!("computed {:.17}, reference {:.17}", theorem_threshold(), t.alternating),
    ));
    out.push(CheckOutcome::new(
        "threshold sqrt(2)",
        (cyclic_margin_asymptote() - t.cyclic).abs() <= 1e-15,
        format!("computed {:.17}, reference {:.17}", cyclic_margin_asymptote(), t.cyclic),
    ));

    let mut margins = Vec::new();
    for (&n, &want) in refs.margins.n.iter().zip(&refs.margins.gamma) {
        let name = format!("margin alternating n={n}");
        match margin(Topology::Alternating, n, BISECTION_TOL) {
            Ok(m) => {
                let diff = m.gamma_star - want;
                out.push(CheckOutcome::new(
                    name,
                    diff.abs() <= refs.margins.tolerance,
                    format!("gamma*={:.6}, reference {want}, diff {diff:+.2e}", m.gamma_star),
                ));
                margins.push(m.gamma_star);
            }
            Err(e) => out.push(CheckOutcome::failed(name, e)),
        }
    }
    let increasing = margins.windows(2).all(|w| w[0] < w[1]);
    let below = margins.iter().all(|&g| g < theorem_threshold());
    out.push(CheckOutcome::new(
        "margins increase toward sqrt(6/7)",
        increasing && below && margins.len() == refs.margins.n.len(),
        format!("increasing={increasing}, all below threshold={below}"),
    ));

    for s in &refs.spot {
        let name = format!("max Re n={} gamma={}", s.n, s.gamma);
        let value = laplacian_spectrum(Topology::Alternating, s.n, Sign::Laplacian)
            .and_then(|r| max_real_nonstructural(s.gamma, &r.eigenvalues));
        match value {
            Ok(v) => out.push(CheckOutcome::new(
                name,
                (v - s.max_re).abs() <= s.tolerance,
                format!("computed {v:.6e}, reference {:e}", s.max_re),
            )),
            Err(e) => out.push(CheckOutcome::failed(name, e)),
        }
    }

    out.push(cassini_check());
    out.push(oracle_check());

    let bidir = [6, 20, 50].iter().all(|&n| {
        laplacian_spectrum(Topology::Bidirectional, n, Sign::Laplacian)
            .and_then(|r| consensus_by_criterion(0.01, &r.eigenvalues))
            .unwrap_or(false)
    });
    out.push(CheckOutcome::new(
        "bidirectional consensus at gamma=0.01",
        bidir,
        "n in {6, 20, 50}".into(),
    ));
    out
}

fn cassini_check() -> CheckOutcome {
    let name = "Cassini locus m=3..64";
    let mut worst = 0.0f64;
    for m in 3..=64 {
        match closed_form_spectrum(m, Sign::Laplacian) {
            Ok(r) => worst = worst.max(r.max_cassini_residual.unwrap_or(f64::INFINITY)),
            Err(e) => return CheckOutcome::failed(name, e),
        }
    }
    CheckOutcome::new(name, worst <= 1e-9, format!("max residual {worst:.3e}"))
}

fn oracle_check() -> CheckOutcome {
    let name = "oracle equivalence m=3..20";
    let mut worst_gap = 0.0f64;
    for m in 3..=20 {
        let run = || -> Result<(f64, bool)> {
            let p = char_poly_alternating(m)?;
            let roots = poly_roots(&p, crate::roots::default_tolerance(p.degree()))?;
            let closed = closed_form_spectrum(m, Sign::Laplacian)?;
            let dense = dense_char_poly(laplacian(&build_alternating_ring(m)?).matrix())?;
            Ok((pairing_gap(&roots, &closed.eigenvalues), dense.relative_match(&p, 1e-6)))
        };
        match run() {
            Ok((gap, coeffs_match)) => {
                worst_gap = worst_gap.max(gap);
                if !coeffs_match {
                    return CheckOutcome::new(name, false, format!("dense coefficients differ at m={m}"));
                }
            }
            Err(e) => return CheckOutcome::failed(name, e),
        }
    }
    CheckOutcome::new(name, worst_gap <= 1e-8, format!("max pairing gap {worst_gap:.3e}"))
}
