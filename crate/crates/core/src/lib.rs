//! Ergodic capacity of Rayleigh product MIMO channels.
//!
//! A relay (for example a UAV acting as an amplify-and-forward node) with `K`
//! antennas sits between `M` user antennas and `N` base-station antennas. The
//! effective channel is `Q = Q2 Q1` with i.i.d. unit-variance complex Gaussian
//! factors. This crate provides
//!
//! * Monte Carlo estimates of the direct and relayed ergodic capacities
//!   ([`capacity`]), driven by counter-keyed random streams ([`matrices`]),
//! * the closed-form Jensen upper bound for the direct link and the
//!   digamma-based lower bound for the product channel ([`bounds`]),
//! * optimal linear precoding at the relay, water-filling, marginal Wishart
//!   eigenvalue densities and the double-integral bound ([`precoding`]),
//! * the two design solvers (minimal relay power, useful antenna count) and
//!   sweep tables behind the figure presets ([`design`], [`table`]).
//!
//! All capacities are in nats. Conversion to bits happens only when a table is
//! rendered.
//!
//! ```
//! use uavcap::{bounds, matrices::AntennaConfig};
//!
//! let cfg = AntennaConfig::new(4, 1, 16).unwrap();
//! let lb = bounds::lower_bound_product(&cfg, 1.0).unwrap();
//! assert!((lb.value_nats - 4.0153326).abs() < 1e-6);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod bounds;
pub mod capacity;
pub mod cli;
pub mod design;
mod error;
pub mod matrices;
pub mod precoding;
pub mod special;
pub mod table;
pub mod units;

pub use error::{Error, Result};
