//! Linear precoding at the relay and the eigenvalue-density bound.
//!
//! With `Q1 Q1^H = E1 diag(lambda1) E1^H` and `Q2^H Q2 = E2 diag(lambda2) E2^H`
//! (eigenvalues descending), the precoder `P = E2 D^{1/2} E1^H` diagonalizes
//! the relayed link, so
//! `ln det(I + q (Q2 P Q1)^H (Q2 P Q1)) = sum_k ln(1 + q d_k lambda1_k lambda2_k)`.
//! Pairing both spectra in descending order maximizes that sum over pairings.
//!
//! The marginal density of one unordered eigenvalue of an `L1 x L1` complex
//! Wishart matrix with `L` degrees of freedom is
//! `lambda^{L-L1} e^{-lambda} / L1 * sum_{k<L1} k!/(k+L-L1)! [L_k^{L-L1}(lambda)]^2`.
//! [`integral_lower_bound`] averages `ln(1 + q lambda1 lambda2)` over two such
//! densities treated as independent. That is exact when `L1 = 1` (the keyhole
//! channel) and is reported as-is otherwise.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::capacity::{direct_capacity, monte_carlo, ErgodicEstimate, MonteCarloSettings};
use crate::error::{invalid, Error, Result};
use crate::matrices::{gram_pair, sample_channel_pair, AntennaConfig, ChannelPair, Complex64, ComplexMatrix};
use crate::special::{gauss_laguerre_rule, LaguerreIter, QuadratureRule};

/// Per-eigenmode power multipliers `d_k >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    d: Vec<f64>,
}

impl PowerAllocation {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        if d.is_empty() || d.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(invalid("power allocation entries must be finite and >= 0"));
        }
        Ok(Self { d })
    }

    /// `d_k = 1` for all `k`.
    pub fn equal(k: usize) -> Self {
        Self { d: vec![1.0; k] }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.d
    }

    pub fn total(&self) -> f64 {
        self.d.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationRule {
    WaterFilling,
    Equal,
}

/// Eigenvalues of `Q1 Q1^H` and `Q2^H Q2`, both descending, length `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectra {
    pub lambda1: Vec<f64>,
    pub lambda2: Vec<f64>,
}

impl EigenSpectra {
    /// `q lambda1_k lambda2_k` for each paired mode.
    pub fn gains(&self, q: f64) -> Vec<f64> {
        self.lambda1
            .iter()
            .zip(&self.lambda2)
            .map(|(a, b)| q * a * b)
            .collect()
    }
}

/// Descending eigen-decomposition; entries past `rank` are set to exactly 0.
fn eigh_desc(a: &ComplexMatrix, rank: usize) -> (Vec<f64>, ComplexMatrix) {
    let eig = SymmetricEigen::new(a.clone());
    let mut idx: Vec<usize> = (0..a.nrows()).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = idx
        .iter()
        .enumerate()
        .map(|(pos, &i)| if pos < rank { eig.eigenvalues[i].max(0.0) } else { 0.0 })
        .collect();
    let vectors = DMatrix::from_fn(a.nrows(), a.ncols(), |r, c| eig.eigenvectors[(r, idx[c])]);
    (values, vectors)
}

pub(crate) struct Decomposition {
    pub spectra: EigenSpectra,
    pub e1: ComplexMatrix,
    pub e2: ComplexMatrix,
}

pub(crate) fn decompose(pair: &ChannelPair) -> Decomposition {
    let cfg = pair.config();
    let (s1, s2) = gram_pair(pair);
    let (lambda1, e1) = eigh_desc(&s1, cfg.m().min(cfg.k()));
    let (lambda2, e2) = eigh_desc(&s2, cfg.n().min(cfg.k()));
    Decomposition {
        spectra: EigenSpectra { lambda1, lambda2 },
        e1,
        e2,
    }
}

pub fn spectra(pair: &ChannelPair) -> EigenSpectra {
    decompose(pair).spectra
}

/// `P = E2 D^{1/2} E1^H` (`K x K`).
pub fn optimal_precoder(pair: &ChannelPair, alloc: &PowerAllocation) -> Result<ComplexMatrix> {
    let k = pair.config().k();
    if alloc.len() != k {
        return Err(invalid(format!(
            "allocation has {} entries, relay has {k} antennas",
            alloc.len()
        )));
    }
    let dec = decompose(pair);
    let root = DVector::from_iterator(k, alloc.as_slice().iter().map(|d| Complex64::new(d.sqrt(), 0.0)));
    Ok(dec.e2 * DMatrix::from_diagonal(&root) * dec.e1.adjoint())
}

/// Capacity of `y = sqrt(q) Q2 P Q1 x + n` from the raw matrices.
pub fn precoded_capacity_raw(pair: &ChannelPair, precoder: &ComplexMatrix, q: f64) -> Result<f64> {
    direct_capacity(&(&pair.q2 * precoder * &pair.q1), q)
}

/// Maximizes `sum ln(1 + d_k g_k)` subject to `sum d_k = total`, `d_k >= 0`.
///
/// Active sets are tried from all positive gains downwards; the first water
/// level `mu = (total + sum 1/g_k) / |active|` that keeps every active
/// `mu - 1/g_k` positive is optimal.
pub fn water_fill(gains: &[f64], total: f64) -> Result<PowerAllocation> {
    if !(total > 0.0) || !total.is_finite() {
        return Err(invalid(format!("total power must be positive, got {total}")));
    }
    if gains.iter().any(|&g| !(g >= 0.0) || !g.is_finite()) {
        return Err(invalid("gains must be finite and >= 0"));
    }
    let mut order: Vec<usize> = (0..gains.len()).filter(|&i| gains[i] > 0.0).collect();
    if order.is_empty() {
        return Err(Error::AllGainsZero);
    }
    order.sort_by(|&a, &b| gains[b].total_cmp(&gains[a]));

    let mut active = order.len();
    let level = loop {
        let inv_sum: f64 = order[..active].iter().map(|&i| 1.0 / gains[i]).sum();
        let mu = (total + inv_sum) / active as f64;
        if mu - 1.0 / gains[order[active - 1]] > 0.0 || active == 1 {
            break mu;
        }
        active -= 1;
    };

    let mut d = vec![0.0; gains.len()];
    for &i in &order[..active] {
        d[i] = level - 1.0 / gains[i];
    }
    Ok(PowerAllocation { d })
}

/// Per-realization capacity `sum ln(1 + d_k g_k)` with `g_k = q lambda1_k lambda2_k`.
pub fn precoded_capacity(spectra: &EigenSpectra, q: f64, rule: AllocationRule) -> f64 {
    let gains = spectra.gains(q);
    match rule {
        AllocationRule::Equal => gains.iter().map(|g| g.ln_1p()).sum(),
        AllocationRule::WaterFilling => match water_fill(&gains, gains.len() as f64) {
            Ok(alloc) => gains
                .iter()
                .zip(alloc.as_slice())
                .map(|(g, d)| (g * d).ln_1p())
                .sum(),
            Err(_) => 0.0,
        },
    }
}

pub fn precoded_ergodic(
    config: &AntennaConfig,
    q: f64,
    rule: AllocationRule,
    mc: &MonteCarloSettings,
) -> Result<ErgodicEstimate> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(invalid(format!("q must be positive and finite, got {q}")));
    }
    let cfg = *config;
    let samples = monte_carlo(mc, |s| {
        let pair = sample_channel_pair(&cfg, s);
        precoded_capacity(&spectra(&pair), q, rule)
    });
    Ok(ErgodicEstimate::from_samples(&samples, mc.seed()))
}

/// Eigenvalue density with the `e^{-lambda}` factor removed, for use with a
/// Gauss–Laguerre rule.
fn density_without_exp(lambda: f64, l1: usize, lother: usize) -> f64 {
    let alpha = (lother - l1) as u32;
    let mut coef = 1.0 / (1..=alpha).map(f64::from).product::<f64>(); // 0!/alpha!
    let mut sum = 0.0;
    for (k, lag) in LaguerreIter::new(alpha, lambda).take(l1).enumerate() {
        if k > 0 {
            // k!/(k+alpha)! from (k-1)!/(k-1+alpha)!
            coef *= k as f64 / (k as f64 + alpha as f64);
        }
        sum += coef * lag * lag;
    }
    let power = if alpha == 0 { 1.0 } else { lambda.powi(alpha as i32) };
    power * sum / l1 as f64
}

fn check_density_dims(l1: usize, lother: usize) -> Result<()> {
    if l1 == 0 || lother < l1 {
        return Err(invalid(format!("density needs Lother >= L1 >= 1, got L1={l1}, Lother={lother}")));
    }
    Ok(())
}

/// Marginal density of an eigenvalue of an `L1 x L1` complex Wishart matrix
/// with `Lother` degrees of freedom.
pub fn eigen_density(lambda: f64, l1: usize, lother: usize) -> Result<f64> {
    check_density_dims(l1, lother)?;
    if !(lambda >= 0.0) {
        return Err(invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    Ok(density_without_exp(lambda, l1, lother) * (-lambda).exp())
}

/// `L1 * E[ln(1 + q lambda1 lambda2)]` with `lambda1 ~ p_(L1, L2)` and
/// `lambda2 ~ p_(L1, L3)` independent, by a tensor-product rule.
pub fn integral_lower_bound(config: &AntennaConfig, q: f64, rule: &QuadratureRule) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(invalid(format!("q must be positive and finite, got {q}")));
    }
    let (l1, l2, l3) = config.ordered();
    let weighted = |lother: usize| -> Vec<f64> {
        rule.nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&x, &w)| w * density_without_exp(x, l1, lother))
            .collect()
    };
    let f1 = weighted(l2);
    let f2 = weighted(l3);
    let nodes = rule.nodes();
    let mut total = 0.0;
    for (i, &x1) in nodes.iter().enumerate() {
        let inner: f64 = nodes
            .iter()
            .zip(&f2)
            .map(|(&x2, &w2)| w2 * (q * x1 * x2).ln_1p())
            .sum();
        total += f1[i] * inner;
    }
    Ok(l1 as f64 * total)
}

pub const DEFAULT_INTEGRAL_ORDER: usize = 96;
pub const REFERENCE_INTEGRAL_ORDER: usize = 64;

/// Double-integral bound together with its change from a lower-order rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralBound {
    pub value_nats: f64,
    pub order: usize,
    /// `value(order) - value(64)`.
    pub stabilization: f64,
}

pub fn integral_lower_bound_checked(config: &AntennaConfig, q: f64, order: usize) -> Result<IntegralBound> {
    let value = integral_lower_bound(config, q, &gauss_laguerre_rule(order)?)?;
    let reference = integral_lower_bound(config, q, &gauss_laguerre_rule(REFERENCE_INTEGRAL_ORDER)?)?;
    Ok(IntegralBound {
        value_nats: value,
        order,
        stabilization: value - reference,
    })
}
