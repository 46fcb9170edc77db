//! Expected log-determinant of a complex Wishart matrix, simulated and from
//! the digamma sum.

use uavcap::capacity::{logdet_hpd, monte_carlo, ErgodicEstimate, MonteCarloSettings};
use uavcap::matrices::{sample_gaussian_matrix, ComplexMatrix};
use uavcap::special::digamma_int;

pub fn run() {
    let mc = MonteCarloSettings::new(20_000, 4).unwrap();
    for (k, m) in [(2usize, 4usize), (3, 5), (4, 4), (4, 16)] {
        let samples = monte_carlo(&mc, |s| {
            let q: ComplexMatrix = sample_gaussian_matrix(k, m, s);
            logdet_hpd(&(&q * q.adjoint())).unwrap()
        });
        let e = ErgodicEstimate::from_samples(&samples, mc.seed());
        let exact: f64 = (1..=k).map(|l| digamma_int((m - l + 1) as u64).unwrap()).sum();
        println!("K={k}, M={m}: simulated {:.4} ± {:.4}, exact {exact:.4}", e.mean_nats, e.stderr_nats);
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
