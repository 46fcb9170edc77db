//! Monte Carlo ergodic capacity of the direct link and of the relayed
//! (product) link, with standard errors.
//!
//! `cargo run --release --example ergodic_capacity`

use uavcap::capacity::{ergodic_estimate, Model, MonteCarloSettings};
use uavcap::matrices::AntennaConfig;
use uavcap::units::{db_to_linear, nats_to_bits};

pub fn run() {
    let mc = MonteCarloSettings::new(20_000, 1).unwrap();
    println!("{:>6} {:>8} {:>22} {:>22}", "K", "p (dB)", "direct (nats)", "product q=10p (nats)");
    for k in [1, 2, 4] {
        let cfg = AntennaConfig::new(4, k, 16).unwrap();
        for db in [-10.0, 0.0, 10.0] {
            let p = db_to_linear(db);
            let direct = ergodic_estimate(Model::Direct, &cfg, p, &mc).unwrap();
            let product = ergodic_estimate(Model::Product, &cfg, 10.0 * p, &mc).unwrap();
            println!(
                "{k:>6} {db:>8} {:>13.4} ± {:.4} {:>13.4} ± {:.4}",
                direct.mean_nats, direct.stderr_nats, product.mean_nats, product.stderr_nats
            );
        }
    }
    let cfg = AntennaConfig::new(4, 2, 16).unwrap();
    let e = ergodic_estimate(Model::Product, &cfg, 1.0, &mc).unwrap();
    println!("(4,2,16) at q = 1: {:.4} bits", nats_to_bits(e.mean_nats));
}

#[allow(dead_code)]
fn main() {
    run();
}
