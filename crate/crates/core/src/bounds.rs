//! Closed-form bounds and design conditions.
//!
//! The product-channel lower bound is
//! `L1 ln(1 + q exp(g - 2 gamma))` with
//! `g = (1/L1) sum_{l=1}^{L1} (H_{L2-l} + H_{L3-l})`, where `(L1, L2, L3)` are
//! the antenna counts in ascending order. It combines Minkowski's determinant
//! inequality, Jensen's inequality and the expected log-determinant of a complex
//! Wishart matrix, and it is symmetric in `(M, K, N)`.
//!
//! The direct link is bounded above by Jensen: `M ln(1 + p N)`.

use crate::error::{invalid, Result};
use crate::matrices::AntennaConfig;
use crate::special::{harmonic, EULER_GAMMA};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundKind {
    LowerProduct(AntennaConfig),
    UpperDirect { m: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub value_nats: f64,
    /// `q` for the product bound, `p` for the direct bound (linear).
    pub power: f64,
}

fn check_power(x: f64, name: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {x}")))
    }
}

pub fn g_of_dims(config: &AntennaConfig) -> f64 {
    let (l1, l2, l3) = config.ordered();
    let sum: f64 = (1..=l1)
        .map(|l| harmonic((l2 - l) as u64) + harmonic((l3 - l) as u64))
        .sum();
    sum / l1 as f64
}

/// `exp(g - 2 gamma)`: the effective per-stream gain in the lower bound.
pub fn effective_gain(config: &AntennaConfig) -> f64 {
    (g_of_dims(config) - 2.0 * EULER_GAMMA).exp()
}

pub fn lower_bound_product(config: &AntennaConfig, q: f64) -> Result<BoundReport> {
    check_power(q, "q")?;
    let l1 = config.l1() as f64;
    Ok(BoundReport {
        kind: BoundKind::LowerProduct(*config),
        value_nats: l1 * (q * effective_gain(config)).ln_1p(),
        power: q,
    })
}

pub fn upper_bound_direct(m: usize, n: usize, p: f64) -> Result<BoundReport> {
    check_power(p, "p")?;
    if m == 0 || n == 0 {
        return Err(invalid("antenna counts must be >= 1"));
    }
    Ok(BoundReport {
        kind: BoundKind::UpperDirect { m, n },
        value_nats: m as f64 * (p * n as f64).ln_1p(),
        power: p,
    })
}

/// Received-SNR comparison: relayed SNR `q M K N` beats direct `p M N`.
pub fn snr_condition(q: f64, k: usize, p: f64) -> bool {
    q * k as f64 > p
}

/// The relay power at which the product lower bound reaches `target_nats`:
/// `(exp(target / L1) - 1) exp(2 gamma - g)`.
pub fn q_for_lower_bound(config: &AntennaConfig, target_nats: f64) -> f64 {
    let l1 = config.l1() as f64;
    (target_nats / l1).exp_m1() / effective_gain(config)
}

/// Smallest `q` for which the product lower bound meets the direct upper bound,
/// `((1 + p N)^{M/K} - 1) exp(2 gamma - g)`. Only defined for `K <= M <= N`:
/// the direct link's `(M, N)` cannot be permuted with `K`.
pub fn required_q_closed(config: &AntennaConfig, p: f64) -> Result<f64> {
    check_power(p, "p")?;
    let (m, k, n) = (config.m(), config.k(), config.n());
    if !(k <= m && m <= n) {
        return Err(invalid(format!(
            "closed-form relay power needs K <= M <= N, got {config}"
        )));
    }
    let growth = ((m as f64 / k as f64) * (p * n as f64).ln_1p()).exp_m1();
    Ok(growth / effective_gain(config))
}

/// Large-array form `(exp(p M N / K) - 1) / (M N)`, valid for `M, N >> K`.
pub fn required_q_approx(config: &AntennaConfig, p: f64) -> Result<f64> {
    check_power(p, "p")?;
    let mn = (config.m() * config.n()) as f64;
    Ok((p * mn / config.k() as f64).exp_m1() / mn)
}
