//! Gaver-Stehfest inversion from samples on the positive real axis:
//! `f(tau) ~ (ln 2 / tau) sum_k V_k F(k ln 2 / tau)`.

use super::dd::Dd;
use crate::error::{domain, Result};

/// Largest supported term count; the weights stay exact in `u128`.
pub const MAX_TERMS: usize = 20;

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// Stehfest weights `V_1 .. V_N` for even `N`.
pub fn stehfest_weights(terms: usize) -> Result<Vec<Dd>> {
    if terms < 2 || !terms.is_multiple_of(2) || terms > MAX_TERMS {
        return domain(format!("term count must be even and in 2..={MAX_TERMS}, got {terms}"));
    }
    let m = (terms / 2) as u32;
    let weights = (1..=terms as u32)
        .map(|k| {
            let mut sum = Dd::ZERO;
            for j in k.div_ceil(2)..=k.min(m) {
                let num = (j as u128).pow(m) * factorial(2 * j);
                let den = factorial(m - j) * factorial(j) * factorial(j - 1) * factorial(k - j) * factorial(2 * j - k);
                sum = sum + Dd::from_u128(num) / Dd::from_u128(den);
            }
            if (k + m) % 2 == 1 {
                -sum
            } else {
                sum
            }
        })
        .collect();
    Ok(weights)
}

/// Inverts `transform` at `tau > 0` using `terms` samples.
pub fn invert(transform: impl Fn(Dd) -> Result<Dd>, tau: f64, terms: usize) -> Result<Dd> {
    if !(tau > 0.0 && tau.is_finite()) {
        return domain(format!("inversion needs tau > 0, got {tau}"));
    }
    let weights = stehfest_weights(terms)?;
    let a = Dd::ln2() / tau;
    let mut sum = Dd::ZERO;
    for (k, w) in weights.iter().enumerate() {
        sum = sum + *w * transform(a * (k + 1) as f64)?;
    }
    Ok(sum * a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_zero() {
        // the inversion of F = 1/s must return 1, i.e. sum V_k / k = 1,
        // while sum V_k = 0 (the transform of a delta at the origin)
        for n in (2..=MAX_TERMS).step_by(2) {
            let w = stehfest_weights(n).unwrap();
            let total = w.iter().fold(Dd::ZERO, |acc, &v| acc + v);
            let scale = w.iter().fold(0.0f64, |m, v| m.max(v.hi.abs()));
            assert!(total.to_f64().abs() <= 1e-28 * scale, "n={n}");
            let one = w.iter().enumerate().fold(Dd::ZERO, |acc, (k, &v)| acc + v / (k + 1) as f64);
            assert!((one.to_f64() - 1.0).abs() < 1e-25, "n={n}");
        }
    }

    #[test]
    fn known_small_weights() {
        // N = 4: V = (-2, 26, -48, 24)
        let w: Vec<f64> = stehfest_weights(4).unwrap().iter().map(|d| d.to_f64()).collect();
        assert_eq!(w, vec![-2.0, 26.0, -48.0, 24.0]);
    }

    #[test]
    fn inverts_exponential_decay() {
        let f = |s: Dd| Ok((s + 1.0).recip());
        let approx = invert(f, 1.0, 18).unwrap().to_f64();
        assert!((approx - (-1.0f64).exp()).abs() <= 1e-8);
        let coarse = invert(f, 1.0, 14).unwrap().to_f64();
        assert!((coarse - (-1.0f64).exp()).abs() > 1e-7);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(stehfest_weights(7).is_err());
        assert!(stehfest_weights(22).is_err());
        assert!(invert(Ok, 0.0, 10).is_err());
    }
}
