//! The digamma-based lower bound on the relayed capacity and the Jensen upper
//! bound on the direct one, next to Monte Carlo values.

use uavcap::bounds::{lower_bound_product, required_q_approx, required_q_closed, upper_bound_direct};
use uavcap::capacity::{ergodic_estimate, Model, MonteCarloSettings};
use uavcap::matrices::AntennaConfig;

pub fn run() {
    let mc = MonteCarloSettings::new(10_000, 2).unwrap();
    let cfg = AntennaConfig::new(4, 4, 16).unwrap();
    println!("relay (M=4, K=4, N=16)");
    for q in [0.1, 1.0, 10.0, 100.0] {
        let lb = lower_bound_product(&cfg, q).unwrap().value_nats;
        let mcv = ergodic_estimate(Model::Product, &cfg, q, &mc).unwrap();
        println!("  q = {q:>6}: lower bound {lb:.4}, simulated {:.4} ± {:.4}", mcv.mean_nats, mcv.stderr_nats);
    }
    println!("direct (M=4, N=16)");
    for p in [0.1, 1.0, 10.0] {
        let ub = upper_bound_direct(4, 16, p).unwrap().value_nats;
        let mcv = ergodic_estimate(Model::Direct, &cfg, p, &mc).unwrap();
        println!("  p = {p:>6}: upper bound {ub:.4}, simulated {:.4} ± {:.4}", mcv.mean_nats, mcv.stderr_nats);
    }
    let cfg = AntennaConfig::new(64, 2, 64).unwrap();
    let p = 1e-4;
    println!(
        "relay power to match the direct bound, (64,2,64) at p = {p}: closed {:.4e}, large-array {:.4e}",
        required_q_closed(&cfg, p).unwrap(),
        required_q_approx(&cfg, p).unwrap()
    );
}

#[allow(dead_code)]
fn main() {
    run();
}
