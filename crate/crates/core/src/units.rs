//! Power and capacity unit conversions. Everything inside the crate is linear
//! power and nats; these helpers are used at the table/CLI boundary.

use std::f64::consts::LN_2;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / LN_2
}
