//! Optimal linear precoding at the relay: builds the precoder for one channel
//! draw, checks it against the raw determinant formula, then compares equal
//! power and water-filling on average.

use uavcap::capacity::{ergodic_estimate, Model, MonteCarloSettings};
use uavcap::matrices::{sample_channel_pair, AntennaConfig, RandomStream};
use uavcap::precoding::{
    optimal_precoder, precoded_capacity, precoded_capacity_raw, precoded_ergodic, spectra, water_fill,
    AllocationRule, PowerAllocation,
};

pub fn run() {
    let cfg = AntennaConfig::new(10, 4, 32).unwrap();
    let q = 0.05;
    let pair = sample_channel_pair(&cfg, &mut RandomStream::new(5, 0));
    let s = spectra(&pair);
    let alloc = water_fill(&s.gains(q), cfg.k() as f64).unwrap();
    println!("mode gains {:.3?}", s.gains(q));
    println!("water-filling powers {:.3?}", alloc.as_slice());
    let p = optimal_precoder(&pair, &alloc).unwrap();
    println!(
        "one draw: from spectra {:.6}, from matrices {:.6}",
        precoded_capacity(&s, q, AllocationRule::WaterFilling),
        precoded_capacity_raw(&pair, &p, q).unwrap()
    );
    let eq = optimal_precoder(&pair, &PowerAllocation::equal(cfg.k())).unwrap();
    println!("equal power, same draw: {:.6}", precoded_capacity_raw(&pair, &eq, q).unwrap());

    let mc = MonteCarloSettings::new(5_000, 5).unwrap();
    for q in [0.01, 0.1, 1.0] {
        let plain = ergodic_estimate(Model::Product, &cfg, q, &mc).unwrap();
        let equal = precoded_ergodic(&cfg, q, AllocationRule::Equal, &mc).unwrap();
        let wf = precoded_ergodic(&cfg, q, AllocationRule::WaterFilling, &mc).unwrap();
        println!(
            "q = {q:>5}: identity {:.4}, precoded equal {:.4}, water-filling {:.4}",
            plain.mean_nats, equal.mean_nats, wf.mean_nats
        );
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
