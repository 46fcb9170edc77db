//! The relayed capacity depends on the antenna counts only as a multiset:
//! all six orderings of (2, 3, 4) give the same ergodic capacity.

use uavcap::bounds::lower_bound_product;
use uavcap::capacity::{ergodic_estimate, Model, MonteCarloSettings};
use uavcap::matrices::AntennaConfig;

pub fn run() {
    let mc = MonteCarloSettings::new(20_000, 3).unwrap();
    for cfg in AntennaConfig::new(2, 3, 4).unwrap().permutations() {
        let e = ergodic_estimate(Model::Product, &cfg, 1.0, &mc).unwrap();
        let lb = lower_bound_product(&cfg, 1.0).unwrap().value_nats;
        println!("{cfg}: {:.4} ± {:.4} nats (bound {lb:.4})", e.mean_nats, e.stderr_nats);
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
