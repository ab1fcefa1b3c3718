//! Real-coefficient polynomials in ascending-degree storage.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Polynomial with real coefficients, `coeffs[i]` multiplying `λ^i`.
///
/// Trailing zeros are trimmed on construction, so the last stored
/// coefficient is the leading one. The zero polynomial is stored as `[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `λ^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().expect("never empty")
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(1.0);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(0.0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        )
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Value and first derivative at `z`, accumulated in double-double
    /// arithmetic (compensated Horner).
    ///
    /// Expanded products such as `(λ² − 3λ + 1)^m − 1` have exactly
    /// representable integer coefficients but lose nearly all significant
    /// digits under plain Horner near their roots; the extra word of
    /// precision keeps the evaluation error near `ε²·Σ|aᵢ||z|ⁱ`.
    pub fn eval_accurate(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = DdComplex::ZERO;
        let mut dp = DdComplex::ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp.mul(z).add(p);
            p = p.mul(z).add_real(c);
        }
        (p.to_complex(), dp.to_complex())
    }

    /// Coefficient-wise comparison: `|a − b| ≤ tol · max(|a|, |b|, 1)`.
    pub fn relative_match(&self, other: &Self, tol: f64) -> bool {
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        Polynomial::new(
            (0..len)
                .map(|i| get(&self.coeffs, i) + get(&rhs.coeffs, i))
                .collect(),
        )
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        quick_two_sum(s, e + self.lo + o.lo)
    }

    fn add_f64(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        quick_two_sum(s, e + self.lo)
    }

    fn mul_f64(self, b: f64) -> Dd {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p);
        quick_two_sum(p, e + self.lo * b)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

#[derive(Clone, Copy)]
struct DdComplex {
    re: Dd,
    im: Dd,
}

impl DdComplex {
    const ZERO: DdComplex = DdComplex { re: Dd::ZERO, im: Dd::ZERO };

    fn mul(self, z: Complex64) -> DdComplex {
        DdComplex {
            re: self.re.mul_f64(z.re).add(self.im.mul_f64(z.im).neg()),
            im: self.re.mul_f64(z.im).add(self.im.mul_f64(z.re)),
        }
    }

    fn add(self, o: DdComplex) -> DdComplex {
        DdComplex { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    fn add_real(self, c: f64) -> DdComplex {
        DdComplex { re: self.re.add_f64(c), im: self.im }
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self.re.hi + self.re.lo, self.im.hi + self.im.lo)
    }
}
