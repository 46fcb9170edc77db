//! How many relay antennas are worth it when the total relay power is fixed.

use uavcap::design::k0_optimize;
use uavcap::units::db_to_linear;

pub fn run() {
    for db in [-10.0, 0.0, 10.0] {
        let r = k0_optimize(12, 32, db_to_linear(db), 0.2, 8).unwrap();
        let ratios: Vec<String> = r.ratios.iter().map(|(_, x)| format!("{x:.3}")).collect();
        println!("q_hat = {db:>5} dB: K0 = {}, ratios [{}]", r.k0, ratios.join(", "));
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
