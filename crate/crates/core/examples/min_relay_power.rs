//! Smallest relay power that lets the relayed link match the direct one,
//! by bisection on common random numbers and from the closed form.

use uavcap::capacity::MonteCarloSettings;
use uavcap::design::min_q_numeric;
use uavcap::matrices::AntennaConfig;
use uavcap::units::db_to_linear;

pub fn run() {
    let mc = MonteCarloSettings::new(20_000, 6).unwrap();
    for k in [1, 2] {
        let cfg = AntennaConfig::new(4, k, 16).unwrap();
        for db in [-20.0, -10.0, 0.0, 10.0] {
            let r = min_q_numeric(&cfg, db_to_linear(db), &mc, 1e-6).unwrap();
            let closed = r.q_closed.map_or("n/a".to_string(), |q| format!("{:.4}", q / r.p));
            println!(
                "K={k}, p = {db:>5} dB: q/p numeric {:.4}, closed form {closed}",
                r.q_numeric / r.p
            );
        }
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
