//! Antenna configurations and seeded sampling of the Rayleigh channel factors.
//!
//! Every Monte Carlo trial owns a [`RandomStream`] keyed by `(seed, stream_id)`.
//! The stream is a ChaCha8 generator whose key comes from `seed` (via
//! `SeedableRng::seed_from_u64`) and whose 64-bit stream selector is
//! `stream_id`, so trials are independent of each other and of the order in
//! which they are evaluated.
//!
//! Complex Gaussian entries are drawn with Box–Muller, one pair of uniforms per
//! entry: `u1` then `u2`, giving `sqrt(-ln u1) * (cos 2 pi u2 + i sin 2 pi u2)`.
//! Real and imaginary parts each have variance 1/2. Matrices are filled in
//! row-major order.

use std::f64::consts::TAU;
use std::fmt;

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

pub type Complex64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Antenna counts `(M, K, N)`: users, relay, base station.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AntennaConfig {
    m: usize,
    k: usize,
    n: usize,
}

impl AntennaConfig {
    pub fn new(m: usize, k: usize, n: usize) -> Result<Self> {
        if m == 0 || k == 0 || n == 0 {
            return Err(invalid(format!(
                "antenna counts must be >= 1, got (M, K, N) = ({m}, {k}, {n})"
            )));
        }
        Ok(Self { m, k, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `(L1, L2, L3)`: the three counts sorted ascending.
    pub fn ordered(&self) -> (usize, usize, usize) {
        let mut d = [self.m, self.k, self.n];
        d.sort_unstable();
        (d[0], d[1], d[2])
    }

    /// Number of nonzero singular values of `Q2 Q1`.
    pub fn l1(&self) -> usize {
        self.ordered().0
    }

    /// Same `M` and `N` with a different relay size.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(self.m, k, self.n)
    }

    /// All orderings of `(M, K, N)`, including duplicates when counts repeat.
    pub fn permutations(&self) -> [AntennaConfig; 6] {
        let (m, k, n) = (self.m, self.k, self.n);
        [
            Self { m, k, n },
            Self { m, k: n, n: k },
            Self { m: k, k: m, n },
            Self { m: k, k: n, n: m },
            Self { m: n, k: m, n: k },
            Self { m: n, k, n: m },
        ]
    }
}

impl fmt::Display for AntennaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(M={}, K={}, N={})", self.m, self.k, self.n)
    }
}

/// One realization of the two hops: `Q1` is `K x M`, `Q2` is `N x K`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPair {
    pub q1: ComplexMatrix,
    pub q2: ComplexMatrix,
}

impl ChannelPair {
    pub fn new(q1: ComplexMatrix, q2: ComplexMatrix) -> Result<Self> {
        if q1.nrows() != q2.ncols() {
            return Err(invalid(format!(
                "relay dimension mismatch: Q1 is {}x{}, Q2 is {}x{}",
                q1.nrows(),
                q1.ncols(),
                q2.nrows(),
                q2.ncols()
            )));
        }
        Ok(Self { q1, q2 })
    }

    pub fn config(&self) -> AntennaConfig {
        AntennaConfig {
            m: self.q1.ncols(),
            k: self.q1.nrows(),
            n: self.q2.nrows(),
        }
    }

    /// `Q = Q2 Q1`, size `N x M`.
    pub fn product(&self) -> ComplexMatrix {
        &self.q2 * &self.q1
    }
}

/// Deterministic random source for one Monte Carlo trial.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Circularly-symmetric complex Gaussian with `E|z|^2 = 1`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = (-u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        Complex64::new(r * c, r * s)
    }
}

pub fn sample_gaussian_matrix(rows: usize, cols: usize, stream: &mut RandomStream) -> ComplexMatrix {
    DMatrix::from_row_iterator(rows, cols, (0..rows * cols).map(|_| stream.complex_normal()))
}

/// Draws `Q1` (`K x M`) and then `Q2` (`N x K`) from the same stream.
pub fn sample_channel_pair(config: &AntennaConfig, stream: &mut RandomStream) -> ChannelPair {
    let q1 = sample_gaussian_matrix(config.k, config.m, stream);
    let q2 = sample_gaussian_matrix(config.n, config.k, stream);
    ChannelPair { q1, q2 }
}

/// `(Sigma1, Sigma2) = (Q1 Q1^H, Q2^H Q2)`, both `K x K`.
pub fn gram_pair(pair: &ChannelPair) -> (ComplexMatrix, ComplexMatrix) {
    (&pair.q1 * pair.q1.adjoint(), pair.q2.adjoint() * &pair.q2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn config_validation_and_order() {
        assert!(AntennaConfig::new(0, 1, 1).is_err());
        let c = AntennaConfig::new(16, 2, 4).unwrap();
        assert_eq!(c.ordered(), (2, 4, 16));
        assert_eq!(c.l1(), 2);
        assert_eq!(c.to_string(), "(M=16, K=2, N=4)");
    }

    proptest! {
        #[test]
        fn ordered_dims_are_a_sorted_permutation(m in 1usize..50, k in 1usize..50, n in 1usize..50) {
            let c = AntennaConfig::new(m, k, n).unwrap();
            let (l1, l2, l3) = c.ordered();
            prop_assert!(l1 <= l2 && l2 <= l3);
            let mut a = [l1, l2, l3];
            let mut b = [m, k, n];
            a.sort_unstable();
            b.sort_unstable();
            prop_assert_eq!(a, b);
            for p in c.permutations() {
                prop_assert_eq!(p.ordered(), c.ordered());
            }
        }
    }

    #[test]
    fn entries_have_zero_mean_unit_variance() {
        let mut s = RandomStream::new(11, 0);
        let h = sample_gaussian_matrix(1000, 1000, &mut s);
        let count = h.len() as f64;
        let power: f64 = h.iter().map(|z| z.norm_sqr()).sum::<f64>() / count;
        let mean: Complex64 = h.iter().sum::<Complex64>() / count;
        let re_var: f64 = h.iter().map(|z| z.re * z.re).sum::<f64>() / count;
        assert!((power - 1.0).abs() < 0.005, "{power}");
        assert!(mean.re.abs() < 0.005 && mean.im.abs() < 0.005, "{mean}");
        assert!((re_var - 0.5).abs() < 0.005, "{re_var}");
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = sample_gaussian_matrix(3, 5, &mut RandomStream::new(42, 7));
        let b = sample_gaussian_matrix(3, 5, &mut RandomStream::new(42, 7));
        let c = sample_gaussian_matrix(3, 5, &mut RandomStream::new(42, 8));
        let d = sample_gaussian_matrix(3, 5, &mut RandomStream::new(43, 7));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn fill_order_is_row_major() {
        let mut s = RandomStream::new(5, 1);
        let m = sample_gaussian_matrix(2, 3, &mut s);
        let mut s = RandomStream::new(5, 1);
        let first: Vec<Complex64> = (0..6).map(|_| s.complex_normal()).collect();
        assert_eq!(m[(0, 0)], first[0]);
        assert_eq!(m[(0, 1)], first[1]);
        assert_eq!(m[(1, 0)], first[3]);
    }

    #[test]
    fn pair_shapes_and_q1_first() {
        let cfg = AntennaConfig::new(4, 2, 16).unwrap();
        let pair = sample_channel_pair(&cfg, &mut RandomStream::new(0, 3));
        assert_eq!(pair.q1.shape(), (2, 4));
        assert_eq!(pair.q2.shape(), (16, 2));
        assert_eq!(pair.config(), cfg);

        let mut s = RandomStream::new(0, 3);
        let q1 = sample_gaussian_matrix(2, 4, &mut s);
        let q2 = sample_gaussian_matrix(16, 2, &mut s);
        assert_eq!(pair.q1, q1);
        assert_eq!(pair.q2, q2);

        let other = sample_channel_pair(&cfg, &mut RandomStream::new(0, 4));
        assert_ne!(pair, other);
    }

    #[test]
    fn hops_are_uncorrelated() {
        let cfg = AntennaConfig::new(1, 1, 1).unwrap();
        let n = 1_000_000u64;
        let (mut sa, mut sb, mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for t in 0..n {
            let p = sample_channel_pair(&cfg, &mut RandomStream::new(9, t));
            let (a, b) = (p.q1[(0, 0)].re, p.q2[(0, 0)].re);
            sa += a;
            sb += b;
            sab += a * b;
            saa += a * a;
            sbb += b * b;
        }
        let nf = n as f64;
        let cov = sab / nf - sa * sb / nf / nf;
        let corr = cov / ((saa / nf - (sa / nf).powi(2)) * (sbb / nf - (sb / nf).powi(2))).sqrt();
        assert!(corr.abs() < 0.01, "{corr}");
    }

    #[test]
    fn gram_matrices() {
        let cfg = AntennaConfig::new(5, 1, 3).unwrap();
        let pair = sample_channel_pair(&cfg, &mut RandomStream::new(1, 1));
        let (s1, s2) = gram_pair(&pair);
        assert_eq!(s1.shape(), (1, 1));
        let row_norm: f64 = pair.q1.iter().map(|z| z.norm_sqr()).sum();
        assert!((s1[(0, 0)].re - row_norm).abs() < 1e-12);
        assert!(s1[(0, 0)].im.abs() < 1e-12);

        let cfg = AntennaConfig::new(3, 4, 6).unwrap();
        let pair = sample_channel_pair(&cfg, &mut RandomStream::new(1, 2));
        let (s1, s2b) = gram_pair(&pair);
        for s in [&s1, &s2b, &s2] {
            let asym = (s - s.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(asym < 1e-12);
        }
    }

    #[test]
    fn gram_trace_mean() {
        // E[tr Sigma1] = K M; oracle: sum of K M unit-mean |h|^2 terms
        let cfg = AntennaConfig::new(4, 3, 2).unwrap();
        let trials = 100_000u64;
        let traces: Vec<f64> = (0..trials)
            .map(|t| {
                let pair = sample_channel_pair(&cfg, &mut RandomStream::new(21, t));
                gram_pair(&pair).0.trace().re
            })
            .collect();
        let mean = traces.iter().sum::<f64>() / trials as f64;
        let var = traces.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let se = (var / trials as f64).sqrt();
        assert!((mean - 12.0).abs() <= 3.0 * se, "{mean} +- {se}");
    }
}
