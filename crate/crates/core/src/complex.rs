//! Complex helpers shared by the spectral and consensus code.

use std::cmp::Ordering;

pub use num_complex::Complex64;

/// A point `x + jy` of the complex plane.
pub type ComplexValue = Complex64;

/// Principal square root (non-negative real part).
///
/// Computed from `|w|` rather than the polar form so that perfect squares
/// such as `-12 + 16j` come out exact; the Ω-region boundary test relies on
/// this.
pub fn principal_sqrt(w: Complex64) -> Complex64 {
    if w.re == 0.0 && w.im == 0.0 {
        return Complex64::new(0.0, w.im);
    }
    let r = w.re.hypot(w.im);
    if w.re >= 0.0 {
        let t = ((r + w.re) / 2.0).sqrt();
        Complex64::new(t, w.im / (2.0 * t))
    } else {
        let t = ((r - w.re) / 2.0).sqrt();
        Complex64::new(w.im.abs() / (2.0 * t), t.copysign(w.im))
    }
}

/// `e^{jθ}`.
pub fn cis(theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}

/// Lexicographic order on `(re, im)`.
pub fn lex_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub fn sort_lex(values: &mut [Complex64]) {
    values.sort_by(lex_cmp);
}

pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Largest distance between two multisets under greedy minimum-distance
/// pairing. Returns `f64::INFINITY` when the lengths differ.
pub fn pairing_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (idx, d) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("lengths match");
        used[idx] = true;
        worst = worst.max(d);
    }
    worst
}
