//! Consensus tests for agents `x'' + γx' = u` under a Laplacian coupling.
//!
//! With `φ(s) = s² + γs`, the network reaches consensus iff every nonzero
//! eigenvalue `λ` of `−L` lies in the Ω-region `{λ : φ(s) − λ ≠ 0 for
//! Re s ≥ 0}`, the open interior of the parabola `y² = −γ²x`.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;

use crate::complex::principal_sqrt;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::spectra::{laplacian_spectrum, Sign};
use crate::topology::{Network, Topology};

/// Eigenvalues below this magnitude count as the Laplacian's zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-9;

/// Default bisection bracket for the critical damping.
pub const MARGIN_BRACKET: (f64, f64) = (1e-3, 2.0);

pub const MAX_BISECTIONS: usize = 64;

/// `√(6/7)`: above this damping the alternating ring reaches consensus for
/// every size.
pub fn theorem_threshold() -> f64 {
    (6.0f64 / 7.0).sqrt()
}

/// `√2`: the limiting margin of cyclic pursuit as `n → ∞`.
pub fn cyclic_margin_asymptote() -> f64 {
    std::f64::consts::SQRT_2
}

/// Nonzero root of `x² + (2 − γ²)x`, where the unit circle of the cyclic
/// pursuit spectrum meets the boundary parabola. It moves to the right
/// half-plane exactly when `γ` exceeds `√2`.
pub fn cyclic_intersection_root(gamma: f64) -> f64 {
    gamma * gamma - 2.0
}

/// A damped double integrator `ẋ = v, v̇ = −γv + u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AgentModel {
    gamma: f64,
}

impl AgentModel {
    pub fn new(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn a(&self) -> Matrix2<f64> {
        Matrix2::new(0.0, 1.0, 0.0, -self.gamma)
    }

    /// `B·K`, the coupling block: only `(2, 1)` is set.
    pub fn bk(&self) -> Matrix2<f64> {
        Matrix2::new(0.0, 0.0, 1.0, 0.0)
    }

    /// `φ(s) = s² + γs`.
    pub fn phi(&self, s: Complex64) -> Complex64 {
        s * s + s * self.gamma
    }
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "damping coefficient must be positive and finite, got {gamma}"
        )));
    }
    Ok(())
}

/// Roots of `s² + γs + μ`, the characteristic polynomial of the 2×2 block
/// `A − μBK`. The first root is the one of smaller magnitude.
pub fn mode_roots(gamma: f64, mu: Complex64) -> [Complex64; 2] {
    // q = −(γ + √(γ² − 4μ))/2 never cancels since Re √ ≥ 0; the other root
    // follows from the product μ.
    let q = -(principal_sqrt(Complex64::new(gamma * gamma, 0.0) - mu * 4.0) + gamma) * 0.5;
    [mu / q, q]
}

/// True iff `λ` is strictly inside the Ω-region of `s² + γs`: both roots
/// of `s² + γs − λ` have negative real part. Boundary points fail.
pub fn omega_contains(gamma: f64, lambda: Complex64) -> bool {
    // max Re of the roots is (−γ + Re√(γ² + 4λ))/2.
    principal_sqrt(Complex64::new(gamma * gamma, 0.0) + lambda * 4.0).re < gamma
}

/// The equivalent parabola test `x < −y²/γ²`, i.e. `γ²x + y² < 0`.
pub fn omega_contains_parabola(gamma: f64, lambda: Complex64) -> bool {
    gamma * gamma * lambda.re + lambda.im * lambda.im < 0.0
}

/// Index of the single zero eigenvalue of a Laplacian spectrum.
fn zero_index(lap_spectrum: &[Complex64]) -> Result<usize> {
    let zeros: Vec<usize> = lap_spectrum
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() <= ZERO_EIGENVALUE_TOL)
        .map(|(i, _)| i)
        .collect();
    match zeros.as_slice() {
        [i] => Ok(*i),
        _ => Err(Error::ZeroEigenvalueCount { count: zeros.len() }),
    }
}

/// Closed-loop spectrum of `F = I ⊗ A − L ⊗ BK` from the Laplacian spectrum:
/// every eigenvalue `μ` contributes the two roots of `s² + γs + μ`.
///
/// Requires `L` diagonalisable, which holds for all three ring topologies
/// (distinct eigenvalues for the alternating ring, normal matrices for the
/// other two).
pub fn system_spectrum(gamma: f64, lap_spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
    check_gamma(gamma)?;
    zero_index(lap_spectrum)?;
    Ok(lap_spectrum.iter().flat_map(|&mu| mode_roots(gamma, mu)).collect())
}

/// Largest real part among the `2n − 1` closed-loop eigenvalues left after
/// removing the structural `s = 0` root of the `μ = 0` block. Only that one
/// root is removed; other near-axis roots are kept.
pub fn max_real_nonstructural(gamma: f64, lap_spectrum: &[Complex64]) -> Result<f64> {
    check_gamma(gamma)?;
    let zero = zero_index(lap_spectrum)?;
    let mut max = f64::NEG_INFINITY;
    for (i, &mu) in lap_spectrum.iter().enumerate() {
        let [small, large] = mode_roots(gamma, mu);
        if i != zero {
            max = max.max(small.re);
        }
        max = max.max(large.re);
    }
    Ok(max)
}

/// Ω-region criterion: every nonzero eigenvalue of `−L` lies in Ω.
pub fn consensus_by_criterion(gamma: f64, lap_spectrum: &[Complex64]) -> Result<bool> {
    check_gamma(gamma)?;
    let zero = zero_index(lap_spectrum)?;
    Ok(lap_spectrum
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != zero)
        .all(|(_, &mu)| omega_contains(gamma, -mu)))
}

/// Size-independent sufficient test for the alternating ring: `γ > √(6/7)`.
pub fn consensus_by_theorem(gamma: f64) -> bool {
    gamma > theorem_threshold()
}

/// Cubic in `x` whose real roots are the abscissae where the boundary
/// parabola `y² = −γ²x` meets the ovals of `−L` (besides the origin):
/// `x³ + (6 − 2p)x² + (p² − 6p + 11)x + (6 − 7p)` with `p = γ²`.
pub fn intersection_cubic(gamma: f64) -> Polynomial {
    let p = gamma * gamma;
    Polynomial::new(vec![6.0 - 7.0 * p, p * p - 6.0 * p + 11.0, 6.0 - 2.0 * p, 1.0])
}

/// Samples both ovals of `−L` at `samples` angles each and reports whether
/// every point except the origin lies strictly inside the Ω-region.
pub fn ovals_inside_region(gamma: f64, samples: usize) -> bool {
    let (outer, inner) = crate::spectra::cassini_ovals(Sign::Negated, samples);
    outer
        .iter()
        .chain(inner.iter())
        .filter(|z| z.norm() > ZERO_EIGENVALUE_TOL)
        .all(|&z| omega_contains(gamma, z))
}

/// Size-free sufficient condition for each topology: `γ > √(6/7)` for the
/// alternating ring, `γ > √2` for cyclic pursuit, any `γ > 0` for the
/// bidirectional ring.
pub fn size_free_condition(topology: Topology, gamma: f64) -> bool {
    match topology {
        Topology::Alternating => consensus_by_theorem(gamma),
        Topology::Cyclic => gamma > cyclic_margin_asymptote(),
        Topology::Bidirectional => gamma > 0.0,
    }
}

/// Size-free condition and spectral criterion side by side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionReport {
    pub topology: Topology,
    pub n: usize,
    pub gamma: f64,
    pub size_free: bool,
    pub criterion: bool,
    pub max_re: f64,
}

pub fn region_report(topology: Topology, n: usize, gamma: f64) -> Result<RegionReport> {
    check_gamma(gamma)?;
    let network = Network::new(topology, n)?;
    let spectrum = laplacian_spectrum(topology, network.n(), Sign::Laplacian)?.eigenvalues;
    Ok(RegionReport {
        topology,
        n,
        gamma,
        size_free: size_free_condition(topology, gamma),
        criterion: consensus_by_criterion(gamma, &spectrum)?,
        max_re: max_real_nonstructural(gamma, &spectrum)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginResult {
    pub topology: Topology,
    pub n: usize,
    /// Consensus holds for every `γ > gamma_star`.
    pub gamma_star: f64,
    /// Final bracket width.
    pub bracket_width: f64,
    pub max_re_at_star: f64,
    /// Finite-difference slope of max Re across the final bracket.
    pub local_slope: f64,
    pub iterations: usize,
    /// Set when consensus holds across the whole bracket; `gamma_star` is 0.
    pub all_gamma: bool,
}

/// Critical damping for `topology` on `n` agents, by bisection on
/// [`MARGIN_BRACKET`] until the bracket is narrower than `tol`.
///
/// A bracket whose upper end is unstable is an error. If the lower end is
/// already stable (the bidirectional ring), the result is `gamma_star = 0`
/// with `all_gamma` set.
pub fn margin(topology: Topology, n: usize, tol: f64) -> Result<MarginResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let network = Network::new(topology, n)?;
    let spectrum = laplacian_spectrum(topology, network.n(), Sign::Laplacian)?.eigenvalues;
    let f = |g: f64| max_real_nonstructural(g, &spectrum);

    let (mut lo, mut hi) = MARGIN_BRACKET;
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if f_hi >= 0.0 {
        return Err(Error::BracketFailure { lo, hi, f_lo, f_hi });
    }
    if f_lo < 0.0 {
        return Ok(MarginResult {
            topology,
            n,
            gamma_star: 0.0,
            bracket_width: 0.0,
            max_re_at_star: f_lo,
            local_slope: 0.0,
            iterations: 0,
            all_gamma: true,
        });
    }

    let mut iterations = 0;
    while hi - lo > tol && iterations < MAX_BISECTIONS {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let star = 0.5 * (lo + hi);
    let width = hi - lo;
    let local_slope = if width > 0.0 { (f(hi)? - f(lo)?) / width } else { 0.0 };
    Ok(MarginResult {
        topology,
        n,
        gamma_star: star,
        bracket_width: width,
        max_re_at_star: f(star)?,
        local_slope,
        iterations,
        all_gamma: false,
    })
}
