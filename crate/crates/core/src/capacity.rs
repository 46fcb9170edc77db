//! Per-realization capacities of the direct and relayed links, and the Monte
//! Carlo estimator used as ground truth by the rest of the crate.
//!
//! Trial `t` always draws from `RandomStream::new(seed, t)` and the per-trial
//! values are reduced in trial order, so an estimate depends only on
//! `(seed, trials)` and not on how many threads evaluated it.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::matrices::{
    gram_pair, sample_channel_pair, sample_gaussian_matrix, AntennaConfig, ChannelPair,
    Complex64, ComplexMatrix, RandomStream,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarloSettings {
    trials: usize,
    seed: u64,
}

impl MonteCarloSettings {
    pub fn new(trials: usize, seed: u64) -> Result<Self> {
        if trials < 2 {
            return Err(invalid("at least 2 Monte Carlo trials are needed for a standard error"));
        }
        Ok(Self { trials, seed })
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }
}

/// Sample mean of a per-realization capacity with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicEstimate {
    pub mean_nats: f64,
    pub stderr_nats: f64,
    pub trials: usize,
    pub seed: u64,
}

impl ErgodicEstimate {
    pub fn from_samples(samples: &[f64], seed: u64) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            mean_nats: mean,
            stderr_nats: (var / n as f64).sqrt(),
            trials: n,
            seed,
        }
    }

    /// `sqrt(se_a^2 + se_b^2)`, the standard error of a difference of two
    /// independent estimates.
    pub fn combined_stderr(&self, other: &Self) -> f64 {
        self.stderr_nats.hypot(other.stderr_nats)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// `y = sqrt(p) H x + n`, `H` is `N x M`.
    Direct,
    /// `y = sqrt(q) Q2 Q1 x + n`.
    Product,
}

/// Runs `per_trial` on `RandomStream::new(seed, t)` for every trial `t`.
pub fn monte_carlo<F>(mc: &MonteCarloSettings, per_trial: F) -> Vec<f64>
where
    F: Fn(&mut RandomStream) -> f64 + Sync,
{
    (0..mc.trials as u64)
        .into_par_iter()
        .map(|t| per_trial(&mut RandomStream::new(mc.seed, t)))
        .collect()
}

/// Lower Cholesky factor of a Hermitian positive definite matrix. Only the
/// lower triangle of `a` is read.
pub(crate) fn cholesky(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(invalid("Cholesky needs a square matrix"));
    }
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let d = d.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// `ln det A` for Hermitian positive definite `A`, from its Cholesky factor.
pub fn logdet_hpd(a: &ComplexMatrix) -> Result<f64> {
    let l = cholesky(a)?;
    Ok(2.0 * l.diagonal().iter().map(|z| z.re.ln()).sum::<f64>())
}

/// `ln det(I + s G^H G)` evaluated on whichever Gram side is smaller.
fn logdet_identity_plus_gram(g: &ComplexMatrix, s: f64) -> f64 {
    let gram = if g.ncols() <= g.nrows() {
        g.adjoint() * g
    } else {
        g * g.adjoint()
    };
    let a = DMatrix::identity(gram.nrows(), gram.ncols()) + gram * Complex64::new(s, 0.0);
    // I + s G^H G with s >= 0 is always positive definite
    logdet_hpd(&a).unwrap_or(0.0)
}

/// `ln det(I_M + p H^H H)` in nats; `H` is `N x M`.
pub fn direct_capacity(h: &ComplexMatrix, p: f64) -> Result<f64> {
    if !(p >= 0.0) {
        return Err(invalid(format!("transmit power must be non-negative, got {p}")));
    }
    Ok(logdet_identity_plus_gram(h, p))
}

/// `ln det(I + q Q^H Q)` with `Q = Q2 Q1`, in nats.
///
/// When the relay is the narrowest point (`K < min(M, N)`) this is computed as
/// `ln det(I_K + q L^H Sigma2 L)` with `Sigma1 = L L^H`, which equals
/// `ln det(I_K + q Sigma1 Sigma2)`.
pub fn product_capacity(pair: &ChannelPair, q: f64) -> Result<f64> {
    if !(q >= 0.0) {
        return Err(invalid(format!("relay power must be non-negative, got {q}")));
    }
    let cfg = pair.config();
    if cfg.k() < cfg.m().min(cfg.n()) {
        let (sigma1, _) = gram_pair(pair);
        if let Ok(l) = cholesky(&sigma1) {
            return Ok(logdet_identity_plus_gram(&(&pair.q2 * l), q));
        }
    }
    Ok(logdet_identity_plus_gram(&pair.product(), q))
}

/// Eigenvalues of a Hermitian matrix, descending, clamped at zero.
pub(crate) fn hermitian_eigenvalues_desc(a: &ComplexMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(a.clone())
        .eigenvalues
        .iter()
        .map(|&x| x.max(0.0))
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Nonzero-mode gains of `H^H H` (the smaller Gram side), descending.
/// `direct_capacity(h, p) = sum ln(1 + p * gain)`.
pub fn direct_channel_gains(h: &ComplexMatrix) -> Vec<f64> {
    let gram = if h.ncols() <= h.nrows() {
        h.adjoint() * h
    } else {
        h * h.adjoint()
    };
    hermitian_eigenvalues_desc(&gram)
}

/// Eigenvalues of `Q^H Q` restricted to the smallest of the three Gram sides.
/// `product_capacity(pair, q) = sum ln(1 + q * gain)`.
pub fn product_channel_gains(pair: &ChannelPair) -> Vec<f64> {
    let cfg = pair.config();
    if cfg.k() < cfg.m().min(cfg.n()) {
        let (sigma1, _) = gram_pair(pair);
        if let Ok(l) = cholesky(&sigma1) {
            return direct_channel_gains(&(&pair.q2 * l));
        }
    }
    direct_channel_gains(&pair.product())
}

/// Monte Carlo ergodic capacity of either link. `power` is `p` for
/// [`Model::Direct`] (with `H` of size `N x M`) and `q` for [`Model::Product`].
pub fn ergodic_estimate(
    model: Model,
    config: &AntennaConfig,
    power: f64,
    mc: &MonteCarloSettings,
) -> Result<ErgodicEstimate> {
    if !(power > 0.0) || !power.is_finite() {
        return Err(invalid(format!("power must be positive and finite, got {power}")));
    }
    let cfg = *config;
    let samples = match model {
        Model::Direct => monte_carlo(mc, |s| {
            let h = sample_gaussian_matrix(cfg.n(), cfg.m(), s);
            logdet_identity_plus_gram(&h, power)
        }),
        Model::Product => monte_carlo(mc, |s| {
            let pair = sample_channel_pair(&cfg, s);
            product_capacity(&pair, power).unwrap_or(0.0)
        }),
    };
    Ok(ErgodicEstimate::from_samples(&samples, mc.seed))
}

/// Per-trial mode gains drawn once and reused for every power level. With the
/// draws held fixed the sample mean is a deterministic, strictly increasing
/// function of the power, which is what the minimal-power solver bisects on.
#[derive(Debug, Clone)]
pub struct CommonDraws {
    gains: Vec<Vec<f64>>,
    seed: u64,
}

impl CommonDraws {
    pub fn sample(model: Model, config: &AntennaConfig, mc: &MonteCarloSettings) -> Self {
        let cfg = *config;
        let gains: Vec<Vec<f64>> = (0..mc.trials as u64)
            .into_par_iter()
            .map(|t| {
                let mut s = RandomStream::new(mc.seed, t);
                match model {
                    Model::Direct => direct_channel_gains(&sample_gaussian_matrix(cfg.n(), cfg.m(), &mut s)),
                    Model::Product => product_channel_gains(&sample_channel_pair(&cfg, &mut s)),
                }
            })
            .collect();
        Self { gains, seed: mc.seed }
    }

    pub fn trials(&self) -> usize {
        self.gains.len()
    }

    pub fn estimate(&self, power: f64) -> ErgodicEstimate {
        let samples: Vec<f64> = self
            .gains
            .iter()
            .map(|g| g.iter().map(|&x| (power * x).ln_1p()).sum())
            .collect();
        ErgodicEstimate::from_samples(&samples, self.seed)
    }

    pub fn mean(&self, power: f64) -> f64 {
        self.gains
            .iter()
            .map(|g| g.iter().map(|&x| (power * x).ln_1p()).sum::<f64>())
            .sum::<f64>()
            / self.gains.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::digamma_int;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Laplace expansion along the first row.
    fn cofactor_det(a: &ComplexMatrix) -> Complex64 {
        let n = a.nrows();
        if n == 1 {
            return a[(0, 0)];
        }
        let mut det = c(0.0, 0.0);
        for j in 0..n {
            let minor = a.clone().remove_row(0).remove_column(j);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            det += a[(0, j)] * cofactor_det(&minor) * sign;
        }
        det
    }

    fn random_hpd(n: usize, seed: u64) -> ComplexMatrix {
        let g = sample_gaussian_matrix(n, n + 2, &mut RandomStream::new(seed, 0));
        &g * g.adjoint() + ComplexMatrix::identity(n, n) * c(0.1, 0.0)
    }

    #[test]
    fn logdet_examples() {
        assert_eq!(logdet_hpd(&ComplexMatrix::identity(5, 5)).unwrap(), 0.0);
        let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0, 0.0), c(8.0, 0.0)]));
        assert!((logdet_hpd(&d).unwrap() - 16f64.ln()).abs() < 1e-14);
        for seed in 0..5 {
            let a = random_hpd(4, seed);
            let oracle = cofactor_det(&a);
            assert!(oracle.im.abs() < 1e-9 * oracle.re);
            assert!((logdet_hpd(&a).unwrap() - oracle.re.ln()).abs() < 1e-10);
        }
    }

    #[test]
    fn logdet_rejects_indefinite() {
        let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]));
        assert!(matches!(logdet_hpd(&d), Err(Error::NotPositiveDefinite { index: 1, .. })));
        let z = ComplexMatrix::zeros(2, 2);
        assert!(matches!(logdet_hpd(&z), Err(Error::NotPositiveDefinite { index: 0, .. })));
    }

    #[test]
    fn direct_capacity_examples() {
        assert_eq!(direct_capacity(&ComplexMatrix::zeros(3, 2), 1.0).unwrap(), 0.0);
        let one = ComplexMatrix::from_element(1, 1, c(1.0, 0.0));
        assert!((direct_capacity(&one, 1.0).unwrap() - 2f64.ln()).abs() < 1e-15);

        let h = sample_gaussian_matrix(16, 4, &mut RandomStream::new(3, 3));
        let oracle: f64 = SymmetricEigen::new(h.adjoint() * &h)
            .eigenvalues
            .iter()
            .map(|&l| (0.1 * l).ln_1p())
            .sum();
        assert!((direct_capacity(&h, 0.1).unwrap() - oracle).abs() < 1e-9);
        assert!(direct_capacity(&h, -1.0).is_err());
    }

    fn full_size_product(pair: &ChannelPair, q: f64) -> f64 {
        let qm = pair.product();
        let m = qm.ncols();
        logdet_hpd(&(ComplexMatrix::identity(m, m) + qm.adjoint() * qm * c(q, 0.0))).unwrap()
    }

    #[test]
    fn product_capacity_examples() {
        let cfg = AntennaConfig::new(3, 2, 5).unwrap();
        let mut pair = sample_channel_pair(&cfg, &mut RandomStream::new(0, 0));
        pair.q1.fill(c(0.0, 0.0));
        assert_eq!(product_capacity(&pair, 2.0).unwrap(), 0.0);

        let (a, b) = (c(0.3, -1.1), c(0.7, 0.2));
        let pair = ChannelPair::new(
            ComplexMatrix::from_element(1, 1, a),
            ComplexMatrix::from_element(1, 1, b),
        )
        .unwrap();
        let want = (a.norm_sqr() * b.norm_sqr()).ln_1p();
        assert!((product_capacity(&pair, 1.0).unwrap() - want).abs() < 1e-15);

        // relay-side K x K evaluation vs full M x M determinant
        for (m, k, n) in [(4, 2, 16), (4, 4, 16), (6, 3, 2), (2, 5, 3)] {
            let cfg = AntennaConfig::new(m, k, n).unwrap();
            let pair = sample_channel_pair(&cfg, &mut RandomStream::new(17, 2));
            let got = product_capacity(&pair, 0.7).unwrap();
            assert!((got - full_size_product(&pair, 0.7)).abs() < 1e-9, "{cfg}");
            let from_gains: f64 = product_channel_gains(&pair).iter().map(|g| (0.7 * g).ln_1p()).sum();
            assert!((got - from_gains).abs() < 1e-9, "{cfg}");
        }
    }

    #[test]
    fn direct_vanishing_power() {
        let cfg = AntennaConfig::new(4, 1, 16).unwrap();
        let mc = MonteCarloSettings::new(1000, 0).unwrap();
        let e = ergodic_estimate(Model::Direct, &cfg, 1e-12, &mc).unwrap();
        assert!(e.mean_nats >= 0.0 && e.mean_nats < 1e-9);
        assert!(ergodic_estimate(Model::Direct, &cfg, 0.0, &mc).is_err());
        assert!(MonteCarloSettings::new(1, 0).is_err());
    }

    // Simpson's rule on [0, 60] for int ln(1 + x) e^{-x} dx
    fn scalar_rayleigh_oracle() -> f64 {
        let (a, b, n) = (0.0, 60.0, 600_000);
        let h = (b - a) / n as f64;
        let f = |x: f64| x.ln_1p() * (-x).exp();
        let mut s = f(a) + f(b);
        for i in 1..n {
            let x = a + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
        }
        s * h / 3.0
    }

    #[test]
    fn scalar_direct_matches_exponential_integral() {
        let oracle = scalar_rayleigh_oracle();
        assert!((oracle - 0.596_347_362_323_194).abs() < 1e-9);
        let cfg = AntennaConfig::new(1, 1, 1).unwrap();
        let mc = MonteCarloSettings::new(100_000, 5).unwrap();
        let e = ergodic_estimate(Model::Direct, &cfg, 1.0, &mc).unwrap();
        assert!((e.mean_nats - oracle).abs() <= 3.0 * e.stderr_nats, "{e:?}");
    }

    #[test]
    fn estimates_are_deterministic() {
        let cfg = AntennaConfig::new(2, 3, 4).unwrap();
        let mc = MonteCarloSettings::new(2000, 1).unwrap();
        let a = ergodic_estimate(Model::Product, &cfg, 1.0, &mc).unwrap();
        let b = ergodic_estimate(Model::Product, &cfg, 1.0, &mc).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c1 = pool.install(|| ergodic_estimate(Model::Product, &cfg, 1.0, &mc).unwrap());
        assert_eq!(a, c1);
    }

    #[test]
    fn monotone_in_power() {
        let cfg = AntennaConfig::new(3, 2, 4).unwrap();
        let mc = MonteCarloSettings::new(4000, 2).unwrap();
        for model in [Model::Direct, Model::Product] {
            let est: Vec<ErgodicEstimate> = [0.01, 0.1, 1.0, 10.0, 100.0]
                .iter()
                .map(|&p| ergodic_estimate(model, &cfg, p, &mc).unwrap())
                .collect();
            for w in est.windows(2) {
                assert!(w[1].mean_nats + 2.0 * w[1].combined_stderr(&w[0]) >= w[0].mean_nats);
            }
        }
    }

    #[test]
    fn wishart_logdet_identity() {
        let psi_sum = |k: usize, dof: usize| -> f64 {
            (1..=k as u64).map(|l| digamma_int(dof as u64 - l + 1).unwrap()).sum()
        };
        for (k, m) in [(2usize, 4usize), (3, 5), (4, 4)] {
            let n = m + 2;
            let cfg = AntennaConfig::new(m, k, n).unwrap();
            let mc = MonteCarloSettings::new(100_000, 8).unwrap();
            for (side, dof) in [(0, m), (1, n)] {
                let samples = monte_carlo(&mc, |s| {
                    let (s1, s2) = gram_pair(&sample_channel_pair(&cfg, s));
                    logdet_hpd(if side == 0 { &s1 } else { &s2 }).unwrap()
                });
                let e = ErgodicEstimate::from_samples(&samples, 8);
                let want = psi_sum(k, dof);
                assert!(
                    (e.mean_nats - want).abs() <= 4.0 * e.stderr_nats,
                    "K={k} dof={dof}: {e:?} vs {want}"
                );
            }
        }
    }

    #[test]
    fn received_snr_identity() {
        let cfg = AntennaConfig::new(3, 2, 5).unwrap();
        let mc = MonteCarloSettings::new(100_000, 4).unwrap();
        let q = 0.5;
        let prod = monte_carlo(&mc, |s| {
            let pair = sample_channel_pair(&cfg, s);
            let qm = pair.product();
            q * (&qm * qm.adjoint()).trace().re
        });
        let mean = prod.iter().sum::<f64>() / prod.len() as f64;
        assert!((mean / (q * 30.0) - 1.0).abs() < 0.01, "{mean}");

        let direct = monte_carlo(&mc, |s| {
            let h = sample_gaussian_matrix(5, 3, s);
            q * (&h * h.adjoint()).trace().re
        });
        let mean = direct.iter().sum::<f64>() / direct.len() as f64;
        assert!((mean / (q * 15.0) - 1.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn common_draws_match_direct_estimates() {
        let cfg = AntennaConfig::new(4, 2, 16).unwrap();
        let mc = MonteCarloSettings::new(500, 3).unwrap();
        for model in [Model::Direct, Model::Product] {
            let draws = CommonDraws::sample(model, &cfg, &mc);
            assert_eq!(draws.trials(), 500);
            for p in [0.1, 1.0] {
                let a = draws.estimate(p);
                let b = ergodic_estimate(model, &cfg, p, &mc).unwrap();
                assert!((a.mean_nats - b.mean_nats).abs() < 1e-9);
                assert!((a.mean_nats - draws.mean(p)).abs() < 1e-12);
            }
        }
    }
}
