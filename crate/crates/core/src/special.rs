//! Integer-argument special functions and Gauss–Laguerre quadrature.

use crate::error::{invalid, Error, Result};

/// Euler–Mascheroni constant, 0.57721566490153286061 (20 significant digits).
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// `H_n = 1 + 1/2 + ... + 1/n`, with `H_0 = 0`.
pub fn harmonic(n: u64) -> f64 {
    // smallest terms first
    (1..=n).rev().map(|k| 1.0 / k as f64).sum()
}

/// Digamma at a positive integer: `psi(n) = -gamma + H_{n-1}`.
pub fn digamma_int(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("digamma_int is defined for n >= 1"));
    }
    Ok(harmonic(n - 1) - EULER_GAMMA)
}

/// Associated Laguerre polynomial `L_k^alpha(x)` by the three-term recurrence
/// `(i+1) L_{i+1} = (2i+1+alpha-x) L_i - (i+alpha) L_{i-1}`.
pub fn laguerre_assoc(k: usize, alpha: u32, x: f64) -> f64 {
    LaguerreIter::new(alpha, x).nth(k).unwrap_or(0.0)
}

/// Yields `L_0^alpha(x), L_1^alpha(x), ...` in order.
pub(crate) struct LaguerreIter {
    alpha: f64,
    x: f64,
    i: usize,
    prev: f64,
    cur: f64,
}

impl LaguerreIter {
    pub(crate) fn new(alpha: u32, x: f64) -> Self {
        Self {
            alpha: alpha as f64,
            x,
            i: 0,
            prev: 0.0,
            cur: 1.0,
        }
    }
}

impl Iterator for LaguerreIter {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.cur;
        let i = self.i as f64;
        let next = if self.i == 0 {
            1.0 + self.alpha - self.x
        } else {
            ((2.0 * i + 1.0 + self.alpha - self.x) * self.cur - (i + self.alpha) * self.prev)
                / (i + 1.0)
        };
        self.prev = self.cur;
        self.cur = next;
        self.i += 1;
        Some(out)
    }
}

/// Gauss–Laguerre rule for the weight `e^{-x}` on `[0, inf)`.
///
/// The weight is part of the rule: integrands handed to [`QuadratureRule::integrate`]
/// must not include the exponential factor.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Approximates `int_0^inf f(x) e^{-x} dx`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

const NEWTON_MAX_ITER: usize = 100;

/// Builds the `order`-point Gauss–Laguerre rule, exact for polynomials of
/// degree `<= 2 order - 1` against `e^{-x}`.
///
/// Roots of `L_order` are found by Newton iteration from the usual asymptotic
/// starting guesses; weights are `x_i / ((n+1)^2 L_{n+1}(x_i)^2)` expressed
/// through the derivative.
pub fn gauss_laguerre_rule(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(invalid("quadrature order must be >= 1"));
    }
    let n = order as f64;
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    let mut z = 0.0_f64;

    for i in 0..order {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * n),
            1 => z + 15.0 / (1.0 + 2.5 * n),
            _ => {
                let ai = (i - 1) as f64;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2])
            }
        };

        let mut converged = false;
        let mut deriv = 0.0;
        let mut below = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            // p1 = L_n(z), p2 = L_{n-1}(z)
            let (mut p1, mut p2) = (1.0_f64, 0.0_f64);
            for j in 1..=order {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
            }
            deriv = n * (p1 - p2) / z;
            below = p2;
            let step = p1 / deriv;
            z -= step;
            if step.abs() <= 1e-13 * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                what: "Gauss-Laguerre node search",
                iterations: NEWTON_MAX_ITER,
            });
        }
        let w = -1.0 / (deriv * n * below);
        if !(z > 0.0 && w.is_finite() && w > 0.0) || nodes.last().is_some_and(|&prev| z <= prev)
        {
            return Err(Error::NoConvergence {
                what: "Gauss-Laguerre node search",
                iterations: NEWTON_MAX_ITER,
            });
        }
        nodes.push(z);
        weights.push(w);
    }
    Ok(QuadratureRule { nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    // exact rational H_n as (num, den)
    fn harmonic_rational(n: u64) -> (u128, u128) {
        fn gcd(a: u128, b: u128) -> u128 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let (mut num, mut den) = (0u128, 1u128);
        for k in 1..=n as u128 {
            num = num * k + den;
            den *= k;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
        (num, den)
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0), 0.0);
        close(harmonic(3), 1.0 + 0.5 + 1.0 / 3.0, 1e-15);
        let (num, den) = harmonic_rational(15);
        assert_eq!((num, den), (1195757, 360360));
        close(harmonic(15), num as f64 / den as f64, 1e-15);
        close(harmonic(15), 3.318_228_993_228_993, 1e-14);
    }

    #[test]
    fn harmonic_is_increasing_and_tracks_log() {
        let mut prev = harmonic(0);
        for n in 1..200 {
            let h = harmonic(n);
            assert!(h > prev);
            prev = h;
        }
        let n = 10_000u64;
        assert!((harmonic(n) - (n as f64).ln() - EULER_GAMMA).abs() < 1e-4);
        let gap = |n: u64| harmonic(n) - (n as f64).ln() - EULER_GAMMA;
        for n in [10u64, 100, 1000] {
            assert!(gap(n) > gap(10 * n));
        }
    }

    #[test]
    fn digamma_values() {
        close(digamma_int(1).unwrap(), -0.577_215_664_901_532_9, 1e-15);
        close(digamma_int(2).unwrap(), 0.422_784_335_098_467_1, 1e-15);
        close(digamma_int(4).unwrap(), 1.256_117_668_431_800_5, 1e-14);
        assert!(matches!(digamma_int(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre_assoc(0, 5, 3.7), 1.0);
        assert_eq!(laguerre_assoc(1, 1, 2.0), 0.0);
        close(laguerre_assoc(2, 1, 2.0), -1.0, 1e-15);
        // explicit degree-2 form: x^2/2 - (a+2) x + (a+2)(a+1)/2
        for a in 0..6u32 {
            for x in [0.0, 0.3, 2.0, 7.5] {
                let af = a as f64;
                let explicit = x * x / 2.0 - (af + 2.0) * x + (af + 2.0) * (af + 1.0) / 2.0;
                close(laguerre_assoc(2, a, x), explicit, 1e-12);
            }
        }
    }

    fn binom(n: u64, k: u64) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn laguerre_matches_explicit_sum() {
        for k in 0..=5u64 {
            for a in 0..=6u32 {
                for x in [0.0f64, 0.5, 1.7, 4.0, 9.3] {
                    let mut fact = 1.0;
                    let mut sum = 0.0;
                    for j in 0..=k {
                        if j > 0 {
                            fact *= j as f64;
                        }
                        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                        sum += sign * binom(k + a as u64, k - j) * x.powi(j as i32) / fact;
                    }
                    let rec = laguerre_assoc(k as usize, a, x);
                    assert!((rec - sum).abs() <= 1e-10 * sum.abs().max(1.0), "k={k} a={a} x={x}");
                }
            }
        }
    }

    #[test]
    fn rule_order_one() {
        let r = gauss_laguerre_rule(1).unwrap();
        close(r.nodes()[0], 1.0, 1e-14);
        close(r.weights()[0], 1.0, 1e-14);
        assert!(gauss_laguerre_rule(0).is_err());
    }

    #[test]
    fn rule_order_two_second_moment() {
        let r = gauss_laguerre_rule(2).unwrap();
        close(r.integrate(|x| x * x), 2.0, 1e-13);
    }

    #[test]
    fn rule_invariants_and_moments() {
        for order in [3, 8, 16, 32, 64, 96, 128] {
            let r = gauss_laguerre_rule(order).unwrap();
            assert_eq!(r.order(), order);
            assert_eq!(r.weights().len(), order);
            assert!(r.nodes()[0] > 0.0);
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(r.weights().iter().all(|&w| w > 0.0));
            close(r.integrate(|_| 1.0), 1.0, 1e-12);
            // factorial moments up to min(2 order - 1, 12)
            let mut fact = 1.0;
            for d in 1..=(2 * order - 1).min(12) {
                fact *= d as f64;
                let got = r.integrate(|x| x.powi(d as i32));
                assert!((got - fact).abs() <= 1e-11 * fact, "order {order} degree {d}");
            }
        }
        let r32 = gauss_laguerre_rule(32).unwrap();
        close(r32.integrate(|x| x.powi(5)), 120.0, 1e-9);
    }
}
