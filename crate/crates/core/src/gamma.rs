//! Gamma function via the Lanczos approximation (g = 7, nine coefficients).

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_COEFFS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEFFS[0], |acc, (i, c)| acc + c / (x + (i + 1) as f64))
}

/// `Γ(x)` for real `x`, using reflection below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * lanczos_sum(x)
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma is only defined here for positive arguments");
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the argument in the Lanczos range.
        return ln_gamma(x + 1.0) - x.ln();
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln()
}

/// `Γ(j + α) / (j! Γ(α))`, the Taylor coefficients of `(1 - w)^(-α)`.
///
/// Evaluated in the log domain so that large `j` does not overflow.
pub fn binomial_series_coeff(j: usize, alpha: f64) -> f64 {
    if j == 0 {
        return 1.0;
    }
    (ln_gamma(j as f64 + alpha) - ln_gamma(j as f64 + 1.0) - ln_gamma(alpha)).exp()
}

/// Pochhammer symbol `q (q + 1) ... (q + k - 1)`.
pub fn rising_factorial(q: f64, k: usize) -> f64 {
    (0..k).map(|i| q + i as f64).product()
}

/// `m (m - 1) ... (m - k + 1)`; zero once the product reaches a zero factor.
pub fn falling_factorial(m: u64, k: usize) -> f64 {
    if (k as u64) > m {
        return 0.0;
    }
    (0..k as u64).map(|i| (m - i) as f64).product()
}

/// `ln(m (m - 1) ... (m - k + 1))`, or `-inf` when the product vanishes.
pub fn ln_falling_factorial(m: u64, k: usize) -> f64 {
    if (k as u64) > m {
        return f64::NEG_INFINITY;
    }
    (0..k as u64).map(|i| ((m - i) as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_arguments_are_factorials() {
        let mut fact = 1.0;
        for n in 1..20 {
            if n > 1 {
                fact *= (n - 1) as f64;
            }
            let g = gamma(n as f64);
            assert!((g - fact).abs() <= 1e-13 * fact, "Γ({n}) = {g}, want {fact}");
        }
    }

    #[test]
    fn half_integer() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(1.5) - PI.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn ln_gamma_agrees_with_gamma() {
        for &x in &[0.1, 0.7, 1.7, 3.2, 10.5, 25.0] {
            let a = ln_gamma(x);
            let b = gamma(x).ln();
            assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "x = {x}");
        }
    }

    #[test]
    fn series_coeff_matches_product_recurrence() {
        for &alpha in &[0.5, 1.0, 1.7, 3.5] {
            let mut ratio = 1.0;
            for j in 1..=400 {
                ratio *= (j as f64 - 1.0 + alpha) / j as f64;
                let got = binomial_series_coeff(j, alpha);
                assert!((got - ratio).abs() <= 1e-11 * ratio, "j = {j}, α = {alpha}");
            }
        }
    }

    #[test]
    fn factorial_helpers() {
        assert_eq!(rising_factorial(0.5, 3), 0.5 * 1.5 * 2.5);
        assert_eq!(falling_factorial(5, 3), 60.0);
        assert_eq!(falling_factorial(2, 3), 0.0);
        assert!((ln_falling_factorial(5, 3) - 60f64.ln()).abs() < 1e-14);
        assert_eq!(ln_falling_factorial(2, 3), f64::NEG_INFINITY);
    }
}
