//! Laplacian spectra of the ring topologies.
//!
//! The alternating ring on `2m` vertices has characteristic polynomial
//! `(Z₂(λ))^m − 1` with `Z₂(λ) = λ² − 3λ + 1`, so its eigenvalues solve
//! `Z₂(λ) = z_k` for the m-th roots of unity `z_k`:
//!
//! ```text
//! λ = 3/2 ± ½·√(5 + 4 z_k)
//! ```
//!
//! and lie on the quartic `((x − 3/2)² − y² − 5/4)² + 4y²(x − 3/2)² = 1`.
//! Two oracles independent of that factorisation are provided:
//! [`poly_roots`](crate::roots::poly_roots) on the expanded polynomial, and
//! [`dense_char_poly`] on the assembled matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::complex::{cis, principal_sqrt, sort_lex};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::roots::{default_tolerance, poly_roots};
use crate::topology::{Network, Topology};

/// Whether a spectrum belongs to `L` or to `−L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    #[default]
    Laplacian,
    Negated,
}

impl Sign {
    fn apply(self, z: Complex64) -> Complex64 {
        match self {
            Sign::Laplacian => z,
            Sign::Negated => -z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSource {
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub topology: Topology,
    pub sign: Sign,
    /// Sorted lexicographically by `(re, im)`.
    pub eigenvalues: Vec<Complex64>,
    pub source: SpectrumSource,
    /// Largest Cassini residual; only set for the alternating ring.
    pub max_cassini_residual: Option<f64>,
}

impl SpectrumReport {
    fn new(topology: Topology, sign: Sign, mut eigenvalues: Vec<Complex64>, source: SpectrumSource) -> Self {
        sort_lex(&mut eigenvalues);
        let max_cassini_residual = (topology == Topology::Alternating).then(|| {
            eigenvalues
                .iter()
                .map(|&z| cassini_residual(z, sign))
                .fold(0.0, f64::max)
        });
        Self { topology, sign, eigenvalues, source, max_cassini_residual }
    }

    /// Residual of each eigenvalue against its topology's locus.
    pub fn locus_residuals(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .map(|&z| locus_residual(self.topology, z, self.sign))
            .collect()
    }

    /// Smallest pairwise distance between eigenvalues.
    pub fn min_gap(&self) -> f64 {
        let ev = &self.eigenvalues;
        let mut gap = f64::INFINITY;
        for i in 0..ev.len() {
            for j in i + 1..ev.len() {
                gap = gap.min((ev[i] - ev[j]).norm());
            }
        }
        gap
    }
}

/// The m-th roots of unity `e^{j2πk/m}`, `k = 0..m`.
pub fn cyclotomic_roots(m: usize) -> Result<Vec<Complex64>> {
    if m < 1 {
        return Err(Error::TooSmall { what: "cyclotomic order m", got: m, min: 1, note: "" });
    }
    Ok((0..m).map(|k| cis(2.0 * PI * k as f64 / m as f64)).collect())
}

/// `Z_k` from `Z_0 = 1`, `Z_1 = λ − 1`, `Z_k = (λ − 2) Z_{k−1} − Z_{k−2}`.
pub fn chebyshev_z(k: usize) -> Polynomial {
    let shift = Polynomial::new(vec![-2.0, 1.0]);
    let mut prev = Polynomial::constant(1.0);
    if k == 0 {
        return prev;
    }
    let mut cur = Polynomial::new(vec![-1.0, 1.0]);
    for _ in 1..k {
        let next = &(&shift * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `(Z₂(λ))^m − 1`, expanded.
pub fn char_poly_alternating(m: usize) -> Result<Polynomial> {
    check_m(m)?;
    Ok(&chebyshev_z(2).pow(m as u32) - &Polynomial::constant(1.0))
}

fn check_m(m: usize) -> Result<()> {
    if m < 3 {
        return Err(Error::TooSmall {
            what: "alternating ring half-size m",
            got: m,
            min: 3,
            note: " (m = 1 admits no such graph and m = 2 has a purely real spectrum)",
        });
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::TooSmall { what: "ring size n", got: n, min: 3, note: "" });
    }
    Ok(())
}

/// Closed-form spectrum of the alternating ring on `2m` vertices.
pub fn closed_form_spectrum(m: usize, sign: Sign) -> Result<SpectrumReport> {
    check_m(m)?;
    let eigenvalues = cyclotomic_roots(m)?
        .into_iter()
        .flat_map(|z| {
            let r = principal_sqrt(Complex64::new(5.0, 0.0) + z * 4.0) * 0.5;
            let c = Complex64::new(1.5, 0.0);
            [sign.apply(c + r), sign.apply(c - r)]
        })
        .collect();
    Ok(SpectrumReport::new(Topology::Alternating, sign, eigenvalues, SpectrumSource::ClosedForm))
}

/// Spectrum of the cyclic pursuit Laplacian: `1 − e^{j2πk/n}`, a unit
/// circle through the origin.
pub fn circulant_spectrum(n: usize, sign: Sign) -> Result<SpectrumReport> {
    check_n(n)?;
    let eigenvalues = cyclotomic_roots(n)?
        .into_iter()
        .map(|z| sign.apply(Complex64::new(1.0, 0.0) - z))
        .collect();
    Ok(SpectrumReport::new(Topology::Cyclic, sign, eigenvalues, SpectrumSource::ClosedForm))
}

/// Spectrum of the bidirectional ring: `2 − 2cos(2πk/n)`, all real.
pub fn symmetric_ring_spectrum(n: usize, sign: Sign) -> Result<SpectrumReport> {
    check_n(n)?;
    let eigenvalues = (0..n)
        .map(|k| {
            let v = 2.0 - 2.0 * (2.0 * PI * k as f64 / n as f64).cos();
            sign.apply(Complex64::new(if k == 0 { 0.0 } else { v }, 0.0))
        })
        .collect();
    Ok(SpectrumReport::new(Topology::Bidirectional, sign, eigenvalues, SpectrumSource::ClosedForm))
}

/// Closed-form spectrum for any supported topology on `n` agents.
pub fn laplacian_spectrum(topology: Topology, n: usize, sign: Sign) -> Result<SpectrumReport> {
    match topology {
        Topology::Alternating => {
            // Validates parity and size.
            topology.build(n)?;
            closed_form_spectrum(n / 2, sign)
        }
        Topology::Cyclic => circulant_spectrum(n, sign),
        Topology::Bidirectional => symmetric_ring_spectrum(n, sign),
    }
}

/// Spectrum from the assembled Laplacian via Faddeev–LeVerrier and the root
/// finder, bypassing every closed form.
pub fn oracle_spectrum(network: &Network, sign: Sign) -> Result<SpectrumReport> {
    let mut m = network.laplacian().matrix().clone();
    if sign == Sign::Negated {
        m.neg_mut();
    }
    let p = dense_char_poly(&m)?;
    let roots = poly_roots(&p, default_tolerance(p.degree()))?;
    Ok(SpectrumReport::new(network.topology(), sign, roots, SpectrumSource::Oracle))
}

/// Largest matrix handled by [`dense_char_poly`].
pub const DENSE_CHAR_POLY_CAP: usize = 128;

/// Monic characteristic polynomial `det(λI − M)` by Faddeev–LeVerrier.
///
/// Integer matrices stay exact while intermediate entries remain below
/// 2⁵³, which holds for the alternating ring up to `m = 20`.
pub fn dense_char_poly(matrix: &DMatrix<f64>) -> Result<Polynomial> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: matrix.ncols() });
    }
    if n > DENSE_CHAR_POLY_CAP {
        return Err(Error::DimensionCap { dim: n, cap: DENSE_CHAR_POLY_CAP });
    }
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut m_k = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        let mut next = matrix * &m_k;
        for i in 0..n {
            next[(i, i)] += coeffs[n - k + 1];
        }
        m_k = next;
        coeffs[n - k] = -(matrix * &m_k).trace() / k as f64;
    }
    Ok(Polynomial::new(coeffs))
}

/// Distance-free residual of the alternating-ring locus at `z`:
/// `|((x ∓ 3/2)² − y² − 5/4)² + 4y²(x ∓ 3/2)² − 1|`, with `−` for the
/// Laplacian and `+` for its negation. Zero on the ovals.
pub fn cassini_residual(z: Complex64, sign: Sign) -> f64 {
    let u = match sign {
        Sign::Laplacian => z.re - 1.5,
        Sign::Negated => z.re + 1.5,
    };
    let y2 = z.im * z.im;
    let a = u * u - y2 - 1.25;
    (a * a + 4.0 * y2 * u * u - 1.0).abs()
}

/// Residual against the locus of each topology: Cassini ovals for the
/// alternating ring, the unit circle centred at `±1` for cyclic pursuit,
/// the real axis for the bidirectional ring.
pub fn locus_residual(topology: Topology, z: Complex64, sign: Sign) -> f64 {
    match topology {
        Topology::Alternating => cassini_residual(z, sign),
        Topology::Cyclic => {
            let centre = sign.apply(Complex64::new(1.0, 0.0));
            ((z - centre).norm_sqr() - 1.0).abs()
        }
        Topology::Bidirectional => z.im.abs(),
    }
}

/// The two Cassini ovals sampled at `samples` evenly spaced angles each.
/// Returns `(outer_branch, inner_branch)`: the `+√` and `−√` roots.
pub fn cassini_ovals(sign: Sign, samples: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let c = Complex64::new(1.5, 0.0);
    (0..samples)
        .map(|i| {
            let z = cis(2.0 * PI * i as f64 / samples as f64);
            let r = principal_sqrt(Complex64::new(5.0, 0.0) + z * 4.0) * 0.5;
            (sign.apply(c + r), sign.apply(c - r))
        })
        .unzip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::pairing_gap;
    use crate::topology::{build_alternating_ring, build_bidirectional_ring, laplacian};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cyclotomic() {
        assert_eq!(cyclotomic_roots(1).unwrap(), vec![c(1.0, 0.0)]);
        let r4 = cyclotomic_roots(4).unwrap();
        for (got, want) in r4.iter().zip([c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]) {
            assert!((got - want).norm() <= 1e-15);
        }
        let h = 3f64.sqrt() / 2.0;
        let r3 = cyclotomic_roots(3).unwrap();
        for (got, want) in r3.iter().zip([c(1.0, 0.0), c(-0.5, h), c(-0.5, -h)]) {
            assert!((got - want).norm() <= 1e-15);
        }
        for m in 1..50 {
            assert!(cyclotomic_roots(m).unwrap().iter().all(|z| (z.norm() - 1.0).abs() <= 1e-15));
        }
        assert!(cyclotomic_roots(0).is_err());
    }

    #[test]
    fn chebyshev_initial_terms() {
        assert_eq!(chebyshev_z(0).coeffs(), &[1.0]);
        assert_eq!(chebyshev_z(1).coeffs(), &[-1.0, 1.0]);
        assert_eq!(chebyshev_z(2).coeffs(), &[1.0, -3.0, 1.0]);
        for k in 0..12 {
            assert_eq!(chebyshev_z(k).degree(), k);
        }
        // Recursion holds for every k ≥ 2.
        let shift = Polynomial::new(vec![-2.0, 1.0]);
        for k in 2..12 {
            let rhs = &(&shift * &chebyshev_z(k - 1)) - &chebyshev_z(k - 2);
            assert_eq!(chebyshev_z(k), rhs);
        }
    }

    #[test]
    fn char_poly_m3() {
        // (λ² − 3λ + 1)³ by repeated convolution, computed by hand:
        // (λ⁴ − 6λ³ + 11λ² − 6λ + 1)(λ² − 3λ + 1)
        // = λ⁶ − 9λ⁵ + 30λ⁴ − 45λ³ + 30λ² − 9λ + 1
        let p = char_poly_alternating(3).unwrap();
        assert_eq!(p.coeffs(), &[0.0, -9.0, 30.0, -45.0, 30.0, -9.0, 1.0]);
        assert_eq!(p.eval(3.0), 0.0);
        for m in 3..15 {
            let p = char_poly_alternating(m).unwrap();
            assert_eq!(p.degree(), 2 * m);
            assert_eq!(p.eval(0.0), 0.0);
        }
        assert!(char_poly_alternating(2).is_err());
    }

    #[test]
    fn closed_form_m3() {
        let s = closed_form_spectrum(3, Sign::Laplacian).unwrap();
        assert_eq!(s.eigenvalues.len(), 6);
        assert!(s.eigenvalues.contains(&c(0.0, 0.0)));
        assert!(s.eigenvalues.contains(&c(3.0, 0.0)));
        // k = 1 branch, evaluated independently from z = e^{j2π/3}:
        // 5 + 4z = 3 + j2√3, √(3 + j2√3) = a + jb with a² − b² = 3, ab = √3.
        let a = ((3.0 + (9.0f64 + 12.0).sqrt()) / 2.0).sqrt();
        let b = 3f64.sqrt() / a;
        let want = [c(1.5 + a / 2.0, b / 2.0), c(1.5 - a / 2.0, -b / 2.0)];
        // Frozen from an independent complex-math evaluation of the formula.
        assert!((want[0] - c(2.4735614833535067, 0.4447718087620662)).norm() < 1e-14);
        assert!((want[1] - c(0.5264385166464933, -0.4447718087620662)).norm() < 1e-14);
        let p = char_poly_alternating(3).unwrap();
        for w in want {
            assert!(s.eigenvalues.iter().any(|e| (e - w).norm() < 1e-14));
            assert!(p.eval_complex(w).norm() <= 1e-9);
        }
    }

    #[test]
    fn closed_form_zeroes_char_poly() {
        // Expanded form, evaluated in double-double, while the rounding
        // floor ε²·Σ|aᵢ||λ|ⁱ stays well under the bound.
        for m in 3..=12 {
            let p = char_poly_alternating(m).unwrap();
            for sign in [Sign::Laplacian, Sign::Negated] {
                let s = closed_form_spectrum(m, sign).unwrap();
                for &e in &s.eigenvalues {
                    let lam = if sign == Sign::Negated { -e } else { e };
                    assert!(p.eval_accurate(lam).0.norm() <= 1e-9, "m={m} λ={lam}");
                }
            }
        }
        // Product form Z₂(λ)^m − 1 for every size.
        for m in 3..=64 {
            let z2 = chebyshev_z(2);
            for &lam in &closed_form_spectrum(m, Sign::Laplacian).unwrap().eigenvalues {
                let v = z2.eval_complex(lam).powu(m as u32) - 1.0;
                assert!(v.norm() <= 1e-9, "m={m} λ={lam}");
            }
        }
    }

    #[test]
    fn closed_form_is_sorted_distinct_and_conjugate_closed() {
        for m in 3..=64 {
            let s = closed_form_spectrum(m, Sign::Laplacian).unwrap();
            assert!(s.eigenvalues.windows(2).all(|w| crate::complex::lex_cmp(&w[0], &w[1]).is_le()));
            assert!(s.min_gap() > 1e-6, "m={m}");
            let conj: Vec<_> = s.eigenvalues.iter().map(|z| z.conj()).collect();
            assert!(pairing_gap(&s.eigenvalues, &conj) < 1e-12);
            assert!(s.max_cassini_residual.unwrap() <= 1e-9);
        }
    }

    #[test]
    fn cassini_examples() {
        assert_eq!(cassini_residual(c(0.0, 0.0), Sign::Laplacian), 0.0);
        assert_eq!(cassini_residual(c(3.0, 0.0), Sign::Laplacian), 0.0);
        assert_eq!(cassini_residual(c(0.0, 0.0), Sign::Negated), 0.0);
        assert_eq!(cassini_residual(c(-3.0, 0.0), Sign::Negated), 0.0);
        assert!(cassini_residual(c(1.5, 0.0), Sign::Laplacian) > 0.1);
        let s = closed_form_spectrum(22, Sign::Laplacian).unwrap();
        assert!(s.eigenvalues.iter().all(|&z| cassini_residual(z, Sign::Laplacian) <= 1e-9));
        let (outer, inner) = cassini_ovals(Sign::Negated, 200);
        assert!(outer.iter().chain(&inner).all(|&z| cassini_residual(z, Sign::Negated) <= 1e-12));
    }

    #[test]
    fn circulant() {
        let s = circulant_spectrum(4, Sign::Negated).unwrap();
        let want = [c(0.0, 0.0), c(-1.0, 1.0), c(-2.0, 0.0), c(-1.0, -1.0)];
        assert!(pairing_gap(&s.eigenvalues, &want) < 1e-15);
        let h = 3f64.sqrt() / 2.0;
        let s = circulant_spectrum(3, Sign::Laplacian).unwrap();
        assert!(pairing_gap(&s.eigenvalues, &[c(0.0, 0.0), c(1.5, h), c(1.5, -h)]) < 1e-15);
        for n in 3..40 {
            let s = circulant_spectrum(n, Sign::Negated).unwrap();
            assert!(s.eigenvalues.iter().all(|z| ((z + 1.0).norm() - 1.0).abs() < 1e-15));
            assert!(s.max_cassini_residual.is_none());
        }
        assert!(circulant_spectrum(2, Sign::Laplacian).is_err());
    }

    #[test]
    fn dense_char_poly_examples() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        assert_eq!(dense_char_poly(&m).unwrap().coeffs(), &[2.0, -3.0, 1.0]);
        assert_eq!(dense_char_poly(&DMatrix::zeros(3, 3)).unwrap().coeffs(), &[0.0, 0.0, 0.0, 1.0]);
        let l = laplacian(&build_alternating_ring(3).unwrap());
        assert_eq!(dense_char_poly(l.matrix()).unwrap(), char_poly_alternating(3).unwrap());
        assert!(matches!(
            dense_char_poly(&DMatrix::zeros(129, 129)),
            Err(Error::DimensionCap { .. })
        ));
        assert!(dense_char_poly(&DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn oracle_m3_matches_closed_form() {
        let roots = poly_roots(&char_poly_alternating(3).unwrap(), 1e-12).unwrap();
        let s = closed_form_spectrum(3, Sign::Laplacian).unwrap();
        assert!(pairing_gap(&roots, &s.eigenvalues) <= 1e-8);
    }

    #[test]
    fn bidirectional_spectrum_is_real() {
        for n in 3..=12 {
            let l = laplacian(&build_bidirectional_ring(n).unwrap());
            let p = dense_char_poly(l.matrix()).unwrap();
            let roots = poly_roots(&p, default_tolerance(p.degree())).unwrap();
            assert!(roots.iter().all(|z| z.im.abs() <= 1e-8), "n={n}: {roots:?}");
            let closed = symmetric_ring_spectrum(n, Sign::Laplacian).unwrap();
            assert!(pairing_gap(&roots, &closed.eigenvalues) <= 1e-7, "n={n}");
        }
    }
}
