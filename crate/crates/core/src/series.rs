//! Truncated power series `sum_j c_j z^j` centred at the origin.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gamma::binomial_series_coeff;
use crate::jet::Jet;
use crate::Complex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    coeffs: Vec<Complex>,
}

impl PowerSeries {
    /// An empty coefficient list is treated as the zero series.
    pub fn new(mut coeffs: Vec<Complex>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex::new(0.0, 0.0));
        }
        PowerSeries { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    /// Taylor expansion of `prefactor * (1 - conj(a) z)^(-q)` truncated after
    /// `z^terms`:
    /// `prefactor * sum_j Γ(j + q) / (j! Γ(q)) conj(a)^j z^j`.
    pub fn kernel_expansion(a: Complex, q: f64, prefactor: f64, terms: usize) -> Self {
        let abar = a.conj();
        let mut power = Complex::new(1.0, 0.0);
        let coeffs = (0..=terms)
            .map(|j| {
                if j > 0 {
                    power *= abar;
                }
                power * (prefactor * binomial_series_coeff(j, q))
            })
            .collect();
        PowerSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Highest stored power.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex::new(0.0, 0.0);
        let coeffs = (0..n)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(zero)
                    + other.coeffs.get(k).copied().unwrap_or(zero)
            })
            .collect();
        PowerSeries { coeffs }
    }

    pub fn scale(&self, c: Complex) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Full Cauchy product (degree adds).
    pub fn multiply(&self, other: &PowerSeries) -> PowerSeries {
        let mut coeffs = vec![Complex::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PowerSeries { coeffs }
    }

    pub fn differentiate(&self) -> PowerSeries {
        if self.coeffs.len() == 1 {
            return PowerSeries::new(vec![Complex::new(0.0, 0.0)]);
        }
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        }
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Taylor coefficients at `z` up to `order`, by repeated synthetic
    /// division (a Taylor shift restricted to the first `order + 1` terms).
    pub fn jet(&self, z: Complex, order: usize) -> Result<Jet> {
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(order + 1);
        for _ in 0..=order {
            if work.is_empty() {
                out.push(Complex::new(0.0, 0.0));
                continue;
            }
            // Division of the polynomial by (x - z): remainder is the value.
            let mut carry = Complex::new(0.0, 0.0);
            let mut quotient = vec![Complex::new(0.0, 0.0); work.len().saturating_sub(1)];
            for k in (0..work.len()).rev() {
                carry = carry * z + work[k];
                if k > 0 {
                    quotient[k - 1] = carry;
                }
            }
            out.push(carry);
            work = quotient;
        }
        Jet::new(z, out)
    }
}
