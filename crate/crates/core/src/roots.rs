//! Simultaneous polynomial root finding (Aberth–Ehrlich).
//!
//! Used as an oracle for the closed-form spectra, so it deliberately knows
//! nothing about their structure: it sees only a coefficient list.

use num_complex::Complex64;

use crate::complex::cis;
use crate::error::{Error, Result};
use crate::poly::Polynomial;

pub const MAX_ITERATIONS: usize = 1000;

/// Angular offset of the initial configuration, keeps starting points off
/// the real axis and off the symmetry lines of cyclotomic-like polynomials.
const ANGLE_OFFSET: f64 = 0.4;

/// Residual tolerance used by [`poly_roots`] callers that have no better
/// choice: `1e-12`, relaxed to `1e-9` above degree 40.
pub fn default_tolerance(degree: usize) -> f64 {
    if degree > 40 {
        1e-9
    } else {
        1e-12
    }
}

/// All complex roots of `p`, with multiplicity.
///
/// Starts from `degree` points evenly spaced on a circle whose radius is
/// the Fujiwara bound of `p`, rotated by a fixed offset, so the result is a
/// pure function of the coefficients. Values and derivatives are evaluated
/// with compensated Horner. On exit every root must satisfy
/// `|p(r)| ≤ tol · (1 + max|coeff|)`.
pub fn poly_roots(p: &Polynomial, tol: f64) -> Result<Vec<Complex64>> {
    let degree = p.degree();
    if degree == 0 {
        return Err(Error::TooSmall {
            what: "polynomial degree",
            got: 0,
            min: 1,
            note: "",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "root tolerance must be positive, got {tol}"
        )));
    }
    if p.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidParameter("non-finite coefficient".into()));
    }

    let radius = fujiwara_bound(p);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + ANGLE_OFFSET;
            cis(theta) * radius
        })
        .collect();

    let mut converged = vec![false; degree];
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && converged.iter().any(|c| !c) {
        iterations += 1;
        for k in 0..degree {
            if converged[k] {
                continue;
            }
            let (v, dv) = p.eval_accurate(z[k]);
            if v.norm() == 0.0 {
                converged[k] = true;
                continue;
            }
            let newton = v / dv;
            let repulsion: Complex64 = z
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, zj)| (z[k] - zj).inv())
                .sum();
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                // Coincident estimates; nudge and retry next sweep.
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[k].norm());
                z[k] += bump;
                continue;
            }
            z[k] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(f64::MIN_POSITIVE) {
                converged[k] = true;
            }
        }
    }

    let allowed = tol * (1.0 + p.max_abs_coeff());
    let max_residual = z
        .iter()
        .map(|r| p.eval_accurate(*r).0.norm())
        .fold(0.0, f64::max);
    if !(max_residual <= allowed) {
        return Err(Error::NoConvergence { iterations, max_residual, allowed });
    }
    Ok(z)
}

/// `2 · max_k |a_{n−k} / a_n|^{1/k}`, with the constant term halved.
fn fujiwara_bound(p: &Polynomial) -> f64 {
    let c = p.coeffs();
    let n = p.degree();
    let lead = p.leading();
    let mut bound = 0.0f64;
    for k in 1..=n {
        let mut a = (c[n - k] / lead).abs();
        if k == n {
            a /= 2.0;
        }
        bound = bound.max(a.powf(1.0 / k as f64));
    }
    if bound == 0.0 {
        1.0
    } else {
        2.0 * bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{pairing_gap, sort_lex};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic_and_linear() {
        let mut r = poly_roots(&Polynomial::new(vec![-1.0, 0.0, 1.0]), 1e-12).unwrap();
        sort_lex(&mut r);
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-14);

        let r = poly_roots(&Polynomial::new(vec![1.0, 1.0]), 1e-12).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn zero_roots_and_complex_roots() {
        // λ³ + λ = λ(λ − j)(λ + j)
        let r = poly_roots(&Polynomial::new(vec![0.0, 1.0, 0.0, 1.0]), 1e-12).unwrap();
        let want = [c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
        assert!(pairing_gap(&r, &want) < 1e-12);
    }

    #[test]
    fn rejects_constants() {
        assert!(matches!(
            poly_roots(&Polynomial::constant(3.0), 1e-12),
            Err(Error::TooSmall { .. })
        ));
    }

    #[test]
    fn deterministic() {
        let p = Polynomial::new(vec![-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(poly_roots(&p, 1e-12).unwrap(), poly_roots(&p, 1e-12).unwrap());
    }

    #[test]
    fn roots_of_unity() {
        let n = 12;
        let mut coeffs = vec![0.0; n + 1];
        coeffs[0] = -1.0;
        coeffs[n] = 1.0;
        let r = poly_roots(&Polynomial::new(coeffs), 1e-12).unwrap();
        let want: Vec<_> = (0..n)
            .map(|k| cis(2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        assert!(pairing_gap(&r, &want) < 1e-13);
    }
}
