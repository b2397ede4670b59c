//! Truncated Taylor expansions ("jets") of analytic functions of one complex
//! variable.
//!
//! A jet of order `K` centred at `z0` stores `coeffs[k] = f^(k)(z0) / k!` for
//! `k = 0..=K`. Arithmetic on jets is exact truncation: the coefficient of
//! order `k` of a result depends only on coefficients of order `<= k` of the
//! operands, so every derivative up to `K` comes out of a single pass.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::Complex;

/// Smallest modulus accepted as a divisor.
pub const DIVISION_TOLERANCE: f64 = 1e-300;

/// Arguments of `log` (and of non-integer powers) must satisfy `Re > LOG_BRANCH_TOLERANCE`
/// so the principal branch stays analytic.
pub const LOG_BRANCH_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    center: Complex,
    coeffs: Vec<Complex>,
}

impl Jet {
    /// Builds a jet from raw Taylor coefficients.
    pub fn new(center: Complex, coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a jet needs at least one coefficient".into()));
        }
        Jet { center, coeffs }.finite("jet coefficients")
    }

    pub fn constant(center: Complex, value: Complex, order: usize) -> Self {
        let mut coeffs = vec![Complex::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        Jet { center, coeffs }
    }

    /// The identity function `z ↦ z` expanded at `center`.
    pub fn variable(center: Complex, order: usize) -> Self {
        let mut coeffs = vec![Complex::new(0.0, 0.0); order + 1];
        coeffs[0] = center;
        if order >= 1 {
            coeffs[1] = Complex::new(1.0, 0.0);
        }
        Jet { center, coeffs }
    }

    pub fn center(&self) -> Complex {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex> {
        self.coeffs
    }

    pub fn value(&self) -> Complex {
        self.coeffs[0]
    }

    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs[k]
    }

    /// `f^(k)(center) = k! * coeffs[k]`.
    pub fn derivative(&self, k: usize) -> Complex {
        let factorial: f64 = (2..=k).map(|i| i as f64).product();
        self.coeffs[k] * factorial
    }

    /// All derivatives `f, f', ..., f^(K)` at the centre.
    pub fn derivatives(&self) -> Vec<Complex> {
        let mut factorial = 1.0;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 1 {
                    factorial *= k as f64;
                }
                c * factorial
            })
            .collect()
    }

    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order + 1);
        self
    }

    pub fn scale(&self, c: Complex) -> Self {
        Jet {
            center: self.center,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add_scalar(&self, c: Complex) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Jet of the `n`-th derivative. The result has order `self.order() - n`.
    pub fn differentiate(&self, n: usize) -> Result<Self> {
        if n > self.order() {
            return Err(Error::InvalidInput(format!(
                "cannot take derivative {n} of a jet of order {}",
                self.order()
            )));
        }
        let coeffs = (0..=self.order() - n)
            .map(|m| {
                // (n + m)! / m!
                let rising: f64 = (m + 1..=m + n).map(|i| i as f64).product();
                self.coeffs[n + m] * rising
            })
            .collect();
        Ok(Jet { center: self.center, coeffs })
    }

    pub fn checked_div(&self, rhs: &Jet) -> Result<Self> {
        let b0 = rhs.coeffs[0];
        if b0.norm() < DIVISION_TOLERANCE {
            return Err(Error::Domain("division by zero".into()));
        }
        let order = self.order().min(rhs.order());
        let mut out: Vec<Complex> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= rhs.coeffs[j] * out[k - j];
            }
            out.push(acc / b0);
        }
        Jet { center: self.center, coeffs: out }.finite("quotient")
    }

    pub fn recip(&self) -> Result<Self> {
        Jet::constant(self.center, Complex::new(1.0, 0.0), self.order()).checked_div(self)
    }

    /// Principal logarithm. The argument must lie in the open right half-plane.
    pub fn ln(&self) -> Result<Self> {
        let b0 = self.coeffs[0];
        if b0.re <= LOG_BRANCH_TOLERANCE {
            return Err(Error::Domain(format!(
                "log argument {b0} is outside the principal right half-plane"
            )));
        }
        let order = self.order();
        let mut out: Vec<Complex> = Vec::with_capacity(order + 1);
        out.push(b0.ln());
        for k in 1..=order {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc -= out[j] * self.coeffs[k - j] * (j as f64 / k as f64);
            }
            out.push(acc / b0);
        }
        Jet { center: self.center, coeffs: out }.finite("log")
    }

    pub fn exp(&self) -> Result<Self> {
        let order = self.order();
        let mut out: Vec<Complex> = Vec::with_capacity(order + 1);
        out.push(self.coeffs[0].exp());
        for k in 1..=order {
            let mut acc = Complex::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * out[k - j] * j as f64;
            }
            out.push(acc / k as f64);
        }
        Jet { center: self.center, coeffs: out }.finite("exp")
    }

    /// Integer power by repeated squaring; negative exponents go through `recip`.
    pub fn powi(&self, exponent: i64) -> Result<Self> {
        let base = if exponent < 0 { self.recip()? } else { self.clone() };
        let mut e = exponent.unsigned_abs();
        let mut acc = Jet::constant(self.center, Complex::new(1.0, 0.0), self.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc.finite("integer power")
    }

    /// `self^q = exp(q * log(self))` on the principal branch.
    pub fn powc(&self, q: Complex) -> Result<Self> {
        self.ln()?.scale(q).exp()
    }

    /// Evaluates the truncated power series `sum_k outer[k] * w^k` at
    /// `w = self - self.value()`, i.e. composes an expansion taken at
    /// `self.value()` with this jet.
    pub fn compose(&self, outer: &[Complex]) -> Self {
        let order = self.order();
        let mut shifted = self.clone();
        shifted.coeffs[0] = Complex::new(0.0, 0.0);
        let mut acc = Jet::constant(self.center, Complex::new(0.0, 0.0), order);
        for c in outer.iter().take(order + 1).rev() {
            acc = (&acc * &shifted).add_scalar(*c);
        }
        acc
    }

    fn finite(self, what: &str) -> Result<Self> {
        if self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            Ok(self)
        } else {
            Err(Error::Domain(format!("non-finite {what}")))
        }
    }
}

impl Add for &Jet {
    type Output = Jet;

    fn add(self, rhs: &Jet) -> Jet {
        let order = self.order().min(rhs.order());
        Jet {
            center: self.center,
            coeffs: (0..=order).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;

    fn sub(self, rhs: &Jet) -> Jet {
        let order = self.order().min(rhs.order());
        Jet {
            center: self.center,
            coeffs: (0..=order).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;

    fn mul(self, rhs: &Jet) -> Jet {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| {
                (0..=k)
                    .map(|j| self.coeffs[j] * rhs.coeffs[k - j])
                    .fold(Complex::new(0.0, 0.0), |a, b| a + b)
            })
            .collect();
        Jet { center: self.center, coeffs }
    }
}

impl Neg for &Jet {
    type Output = Jet;

    fn neg(self) -> Jet {
        Jet {
            center: self.center,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        &self * &rhs
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn close(a: Complex, b: Complex, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn square_at_half() {
        let z = Jet::variable(c(0.5, 0.0), 2);
        let sq = &z * &z;
        assert_eq!(sq.coeffs(), &[c(0.25, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn geometric_series_at_zero() {
        let z = Jet::variable(c(0.0, 0.0), 3);
        let one = Jet::constant(z.center(), c(1.0, 0.0), 3);
        let f = one.checked_div(&(&one - &z.scale(c(0.5, 0.0)))).unwrap();
        let want = [1.0, 0.5, 0.25, 0.125];
        for (got, w) in f.coeffs().iter().zip(want) {
            assert!(close(*got, c(w, 0.0), 1e-15));
        }
    }

    #[test]
    fn exp_of_log_is_identity() {
        let z = Jet::variable(c(0.3, -0.2), 8);
        let g = z.add_scalar(c(1.5, 0.0));
        let back = g.ln().unwrap().exp().unwrap();
        for (a, b) in back.coeffs().iter().zip(g.coeffs()) {
            assert!(close(*a, *b, 1e-14));
        }
    }

    #[test]
    fn log_rejects_left_half_plane() {
        let z = Jet::variable(c(-0.5, 0.0), 2);
        assert!(matches!(z.ln(), Err(Error::Domain(_))));
    }

    #[test]
    fn division_by_zero_is_a_domain_error() {
        let z = Jet::variable(c(0.0, 0.0), 2);
        assert!(matches!(z.recip(), Err(Error::Domain(_))));
    }

    #[test]
    fn negative_integer_power_matches_reciprocal_cube() {
        let z = Jet::variable(c(0.2, 0.1), 5);
        let g = z.add_scalar(c(1.0, 0.0));
        let a = g.powi(-3).unwrap();
        let b = (&(&g * &g) * &g).recip().unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!(close(*x, *y, 1e-14));
        }
    }

    #[test]
    fn differentiate_shifts_coefficients() {
        // z^4 at 1: derivatives 1, 4, 12, 24, 24
        let z = Jet::variable(c(1.0, 0.0), 4);
        let f = z.powi(4).unwrap();
        let d2 = f.differentiate(2).unwrap();
        assert!(close(d2.derivative(0), c(12.0, 0.0), 1e-14));
        assert!(close(d2.derivative(1), c(24.0, 0.0), 1e-14));
        assert!(close(d2.derivative(2), c(24.0, 0.0), 1e-14));
    }

    #[test]
    fn compose_matches_direct_chain_rule() {
        // exp(w) expanded at w0 = phi(z0), composed with phi(z) = z^2 / 2.
        let z = Jet::variable(c(0.4, 0.3), 6);
        let phi = (&z * &z).scale(c(0.5, 0.0));
        let w0 = phi.value();
        let mut outer = Vec::new();
        let mut fact = 1.0;
        for k in 0..=6 {
            if k > 0 {
                fact *= k as f64;
            }
            outer.push(w0.exp() / fact);
        }
        let composed = phi.compose(&outer);
        let direct = phi.exp().unwrap();
        for (a, b) in composed.coeffs().iter().zip(direct.coeffs()) {
            assert!(close(*a, *b, 1e-14));
        }
    }
}
