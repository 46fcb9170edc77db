//! Marginal eigenvalue density of a complex Wishart matrix and the
//! double-integral capacity bound built from it.

use uavcap::bounds::lower_bound_product;
use uavcap::matrices::AntennaConfig;
use uavcap::precoding::{eigen_density, integral_lower_bound_checked};
use uavcap::special::gauss_laguerre_rule;

pub fn run() {
    let rule = gauss_laguerre_rule(96).unwrap();
    for (l1, lother) in [(1usize, 4usize), (2, 4), (4, 16)] {
        let f = |x: f64| eigen_density(x, l1, lother).unwrap() * x.exp();
        println!(
            "L1={l1}, Lother={lother}: mass {:.10}, mean {:.8}, pdf(1) = {:.4e}",
            rule.integrate(f),
            rule.integrate(|x| x * f(x)),
            eigen_density(1.0, l1, lother).unwrap()
        );
    }
    for (m, k, n) in [(4, 1, 16), (10, 4, 32)] {
        let cfg = AntennaConfig::new(m, k, n).unwrap();
        for q in [0.1, 1.0] {
            let ib = integral_lower_bound_checked(&cfg, q, 96).unwrap();
            let lb = lower_bound_product(&cfg, q).unwrap().value_nats;
            println!(
                "{cfg} q={q}: integral {:.6} (change from order 64: {:.1e}), closed form {lb:.6}",
                ib.value_nats, ib.stabilization
            );
        }
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
