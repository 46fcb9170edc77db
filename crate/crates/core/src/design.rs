//! Relay design solvers and the parameter sweeps behind the figure presets.

use crate::bounds::{lower_bound_product, required_q_closed, upper_bound_direct};
use crate::capacity::{ergodic_estimate, CommonDraws, ErgodicEstimate, Model, MonteCarloSettings};
use crate::error::{invalid, Error, Result};
use crate::matrices::AntennaConfig;
use crate::precoding::{integral_lower_bound_checked, precoded_ergodic, AllocationRule, DEFAULT_INTEGRAL_ORDER};
use crate::table::{capacity_columns, capacity_values, SweepTable, Units};
use crate::units::{db_to_linear, linear_to_db};

const MAX_DOUBLINGS: usize = 60;
const MAX_BISECTIONS: usize = 200;

/// Minimal relay power for which the relayed ergodic capacity matches the
/// direct one.
#[derive(Debug, Clone, PartialEq)]
pub struct MinQResult {
    pub config: AntennaConfig,
    pub p: f64,
    /// Closed form from the bounds; `None` unless `K <= M <= N`.
    pub q_closed: Option<f64>,
    pub q_numeric: f64,
    pub tolerance_nats: f64,
    /// Direct-link estimate at `p`.
    pub direct: ErgodicEstimate,
    /// Relayed estimate at `q_numeric`, same draws as used by the bisection.
    pub product: ErgodicEstimate,
}

/// Bisection on `q` with common random numbers: both links are sampled once
/// from `mc`, so the relayed sample mean is a deterministic increasing
/// function of `q`. Stops once the capacity gap is below `tol` nats.
pub fn min_q_numeric(config: &AntennaConfig, p: f64, mc: &MonteCarloSettings, tol: f64) -> Result<MinQResult> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(invalid(format!("p must be positive and finite, got {p}")));
    }
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    let direct_draws = CommonDraws::sample(Model::Direct, config, mc);
    let product_draws = CommonDraws::sample(Model::Product, config, mc);
    let direct = direct_draws.estimate(p);
    let target = direct.mean_nats;
    let s = |q: f64| product_draws.mean(q);

    let (mut lo, mut hi) = (p, p);
    let mut n = 0;
    while s(hi) < target {
        hi *= 2.0;
        n += 1;
        if n > MAX_DOUBLINGS {
            return Err(Error::BracketFailure { target, doublings: MAX_DOUBLINGS });
        }
    }
    n = 0;
    while s(lo) > target {
        lo /= 2.0;
        n += 1;
        if n > MAX_DOUBLINGS {
            return Err(Error::BracketFailure { target, doublings: MAX_DOUBLINGS });
        }
    }

    let mut mid = (lo * hi).sqrt();
    for _ in 0..MAX_BISECTIONS {
        mid = (lo * hi).sqrt();
        let gap = s(mid) - target;
        if gap.abs() < tol {
            break;
        }
        if gap < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    Ok(MinQResult {
        config: *config,
        p,
        q_closed: required_q_closed(config, p).ok(),
        q_numeric: mid,
        tolerance_nats: tol,
        direct,
        product: product_draws.estimate(mid),
    })
}

/// Same as [`required_q_closed`].
pub fn min_q_closed(config: &AntennaConfig, p: f64) -> Result<f64> {
    required_q_closed(config, p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct K0Result {
    /// Largest antenna count whose increment from `K0 - 1` still clears `eta`.
    pub k0: usize,
    pub eta: f64,
    pub q_hat: f64,
    /// `(K, S(K+1)/S(K) - 1)` for `K = 1..=K_max`, with `S` the lower bound at
    /// `q = q_hat / K`.
    pub ratios: Vec<(usize, f64)>,
    /// `(K, S(K))` for `K = 1..=K_max + 1`.
    pub bounds: Vec<(usize, f64)>,
}

/// Useful relay size under a total power budget `q_hat = q K`.
///
/// The ratio at `K` is the relative capacity gain of adding the `(K+1)`-th
/// antenna. `K0` is the antenna count reached by the last increment within
/// `[1, K_max]` whose gain is at least `eta`; if even the second antenna is not
/// worth it, `K0 = 1`.
pub fn k0_optimize(m: usize, n: usize, q_hat: f64, eta: f64, k_max: usize) -> Result<K0Result> {
    if !(q_hat > 0.0) || !q_hat.is_finite() {
        return Err(invalid(format!("q_hat must be positive and finite, got {q_hat}")));
    }
    if !(eta > 0.0) {
        return Err(invalid(format!("eta must be positive, got {eta}")));
    }
    if k_max < 2 {
        return Err(invalid("K_max must be >= 2"));
    }
    let bounds = (1..=k_max + 1)
        .map(|k| {
            let cfg = AntennaConfig::new(m, k, n)?;
            Ok((k, lower_bound_product(&cfg, q_hat / k as f64)?.value_nats))
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<(usize, f64)> = bounds
        .windows(2)
        .map(|w| (w[0].0, w[1].1 / w[0].1 - 1.0))
        .collect();
    let k0 = ratios
        .iter()
        .filter(|&&(k, r)| k < k_max && r >= eta)
        .map(|&(k, _)| k + 1)
        .max()
        .unwrap_or(1);
    Ok(K0Result {
        k0,
        eta,
        q_hat,
        ratios,
        bounds,
    })
}

/// The swept parameter of a [`SweepSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// User power `p`.
    P,
    /// Relay power `q`.
    Q,
    /// Total relay power; `q = q_hat / K`.
    QHat,
    /// Relay antenna count.
    K,
}

/// How the relay power follows the other parameters at each grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelayPower {
    Fixed(f64),
    /// `q = factor * p`.
    TimesP(f64),
    /// `q = q_hat / K`.
    Total(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    DirectMc,
    DirectUpper,
    ProductMc,
    ProductLower,
    IntegralLower,
    PrecodedEqualMc,
    PrecodedWaterFillMc,
    /// Minimal `q` from bisection and from the closed form, plus `q / p`.
    MinQ,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    /// Linear powers, or antenna counts for [`Axis::K`].
    pub grid: Vec<f64>,
    pub config: AntennaConfig,
    pub p: f64,
    pub relay: RelayPower,
    pub quantities: Vec<Quantity>,
    pub mc: MonteCarloSettings,
    pub units: Units,
    pub min_q_tolerance: f64,
}

struct Point {
    config: AntennaConfig,
    p: f64,
    q: f64,
}

impl SweepSpec {
    fn point(&self, x: f64) -> Result<Point> {
        let mut config = self.config;
        let mut p = self.p;
        let mut relay = self.relay;
        match self.axis {
            Axis::P => p = x,
            Axis::Q => relay = RelayPower::Fixed(x),
            Axis::QHat => relay = RelayPower::Total(x),
            Axis::K => {
                if x < 1.0 || x.fract() != 0.0 {
                    return Err(invalid(format!("antenna count must be a positive integer, got {x}")));
                }
                config = config.with_k(x as usize)?;
            }
        }
        let q = match relay {
            RelayPower::Fixed(q) => q,
            RelayPower::TimesP(f) => f * p,
            RelayPower::Total(q_hat) => q_hat / config.k() as f64,
        };
        Ok(Point { config, p, q })
    }

    fn axis_columns(&self) -> Vec<String> {
        match self.axis {
            Axis::P => vec!["p".into(), "p_db".into()],
            Axis::Q => vec!["q".into(), "q_db".into()],
            Axis::QHat => vec!["q_hat".into(), "q_hat_db".into()],
            Axis::K => vec!["K".into()],
        }
    }

    fn columns(&self) -> Vec<String> {
        let u = self.units;
        let mut cols = self.axis_columns();
        for q in &self.quantities {
            let names: Vec<String> = match q {
                Quantity::DirectMc => [capacity_columns("direct_mean", u), capacity_columns("direct_stderr", u)].concat(),
                Quantity::DirectUpper => capacity_columns("direct_upper", u),
                Quantity::ProductMc => [capacity_columns("product_mean", u), capacity_columns("product_stderr", u)].concat(),
                Quantity::ProductLower => capacity_columns("product_lower", u),
                Quantity::IntegralLower => capacity_columns("integral_lower", u),
                Quantity::PrecodedEqualMc => [capacity_columns("equal_mean", u), capacity_columns("equal_stderr", u)].concat(),
                Quantity::PrecodedWaterFillMc => [capacity_columns("wf_mean", u), capacity_columns("wf_stderr", u)].concat(),
                Quantity::MinQ => vec![
                    "q_numeric".into(),
                    "q_closed".into(),
                    "q_numeric_over_p".into(),
                    "q_closed_over_p".into(),
                ],
            };
            cols.extend(names);
        }
        cols
    }
}

/// Seed for sweep row `row`; row 0 uses the base seed itself.
pub fn row_seed(seed: u64, row: usize) -> u64 {
    seed ^ (row as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    if spec.grid.is_empty() {
        return Err(invalid("sweep grid is empty"));
    }
    let mut table = SweepTable::new(spec.columns());
    table.metadata.push(format!("uavcap {}", env!("CARGO_PKG_VERSION")));
    table.metadata.push(format!("base config: {}", spec.config));
    table.metadata.push(format!("seed: {}", spec.mc.seed()));
    table.metadata.push(format!("trials: {}", spec.mc.trials()));

    let u = spec.units;
    let est_values = |e: ErgodicEstimate| [capacity_values(e.mean_nats, u), capacity_values(e.stderr_nats, u)].concat();

    for (row, &x) in spec.grid.iter().enumerate() {
        let pt = spec.point(x)?;
        let mc = spec.mc.with_seed(row_seed(spec.mc.seed(), row));
        let mut values = match spec.axis {
            Axis::K => vec![x],
            _ => vec![x, linear_to_db(x)],
        };
        for quantity in &spec.quantities {
            match quantity {
                Quantity::DirectMc => values.extend(est_values(ergodic_estimate(Model::Direct, &pt.config, pt.p, &mc)?)),
                Quantity::DirectUpper => values.extend(capacity_values(
                    upper_bound_direct(pt.config.m(), pt.config.n(), pt.p)?.value_nats,
                    u,
                )),
                Quantity::ProductMc => values.extend(est_values(ergodic_estimate(Model::Product, &pt.config, pt.q, &mc)?)),
                Quantity::ProductLower => {
                    values.extend(capacity_values(lower_bound_product(&pt.config, pt.q)?.value_nats, u))
                }
                Quantity::IntegralLower => values.extend(capacity_values(
                    integral_lower_bound_checked(&pt.config, pt.q, DEFAULT_INTEGRAL_ORDER)?.value_nats,
                    u,
                )),
                Quantity::PrecodedEqualMc => {
                    values.extend(est_values(precoded_ergodic(&pt.config, pt.q, AllocationRule::Equal, &mc)?))
                }
                Quantity::PrecodedWaterFillMc => values.extend(est_values(precoded_ergodic(
                    &pt.config,
                    pt.q,
                    AllocationRule::WaterFilling,
                    &mc,
                )?)),
                Quantity::MinQ => {
                    let r = min_q_numeric(&pt.config, pt.p, &mc, spec.min_q_tolerance)?;
                    let closed = r.q_closed.unwrap_or(f64::NAN);
                    values.extend([r.q_numeric, closed, r.q_numeric / pt.p, closed / pt.p]);
                }
            }
        }
        table.push_row(values)?;
    }
    Ok(table)
}

/// Grid `from, from + step, ..., to` in dB, returned in linear units.
pub fn db_grid(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = ((to - from) / step).round() as usize;
    (0..=n).map(|i| db_to_linear(from + i as f64 * step)).collect()
}

pub const SWEEP_TRIALS: usize = 10_000;
pub const POINT_TRIALS: usize = 100_000;
pub const DEFAULT_ETA: f64 = 0.2;
pub const DEFAULT_K_MAX: usize = 8;
pub const DEFAULT_MIN_Q_TOLERANCE: f64 = 1e-6;

fn per_k(
    template: &SweepSpec,
    ks: &[usize],
    shared: usize,
) -> Result<SweepTable> {
    let parts = ks
        .iter()
        .map(|&k| {
            let spec = SweepSpec {
                config: template.config.with_k(k)?,
                ..template.clone()
            };
            Ok((format!("_K{k}"), sweep(&spec)?))
        })
        .collect::<Result<Vec<_>>>()?;
    SweepTable::side_by_side(&parts, shared)
}

/// Capacity versus user power with `q = 10 p`, `(M, N) = (4, 16)`, `K in {1, 2, 4}`.
pub fn figure3(mc: &MonteCarloSettings, units: Units) -> Result<SweepTable> {
    let direct = SweepSpec {
        axis: Axis::P,
        grid: db_grid(-10.0, 20.0, 5.0),
        config: AntennaConfig::new(4, 1, 16)?,
        p: 1.0,
        relay: RelayPower::TimesP(10.0),
        quantities: vec![Quantity::DirectMc, Quantity::DirectUpper],
        mc: *mc,
        units,
        min_q_tolerance: DEFAULT_MIN_Q_TOLERANCE,
    };
    let product = SweepSpec {
        quantities: vec![Quantity::ProductMc, Quantity::ProductLower],
        ..direct.clone()
    };
    let d = sweep(&direct)?;
    let p = per_k(&product, &[1, 2, 4], 2)?;
    let mut t = SweepTable::side_by_side(&[(String::new(), d), (String::new(), p)], 2)?;
    t.metadata.push("figure 3: M=4, N=16, q=10p, K in {1,2,4}".into());
    Ok(t)
}

fn min_q_figure(mc: &MonteCarloSettings) -> Result<SweepTable> {
    let spec = SweepSpec {
        axis: Axis::P,
        grid: db_grid(-20.0, 10.0, 5.0),
        config: AntennaConfig::new(4, 1, 16)?,
        p: 1.0,
        relay: RelayPower::Fixed(1.0),
        quantities: vec![Quantity::MinQ],
        mc: *mc,
        units: Units::Nats,
        min_q_tolerance: DEFAULT_MIN_Q_TOLERANCE,
    };
    per_k(&spec, &[1, 2], 2)
}

/// Minimal relay power versus user power, `(M, N) = (4, 16)`, `K in {1, 2}`.
pub fn figure4(mc: &MonteCarloSettings) -> Result<SweepTable> {
    let t = min_q_figure(mc)?;
    let mut t = t.select(&["p", "p_db", "q_numeric_K1", "q_closed_K1", "q_numeric_K2", "q_closed_K2"])?;
    t.metadata.push("figure 4: minimal q with S = R, M=4, N=16, K in {1,2}".into());
    Ok(t)
}

/// Ratio `q / p` of the minimal relay power, same setting as [`figure4`].
pub fn figure7(mc: &MonteCarloSettings) -> Result<SweepTable> {
    let t = min_q_figure(mc)?;
    let mut t = t.select(&[
        "p",
        "p_db",
        "q_numeric_over_p_K1",
        "q_closed_over_p_K1",
        "q_numeric_over_p_K2",
        "q_closed_over_p_K2",
    ])?;
    t.metadata.push("figure 7: q/p of the minimal relay power, M=4, N=16, K in {1,2}".into());
    Ok(t)
}

/// Capacity versus total relay power `q_hat` (`q = q_hat / K`), with and
/// without precoding, `(M, N) = (10, 32)`, `K in {4, 8}`.
pub fn figure5(mc: &MonteCarloSettings, units: Units) -> Result<SweepTable> {
    let spec = SweepSpec {
        axis: Axis::QHat,
        grid: db_grid(-10.0, 20.0, 5.0),
        config: AntennaConfig::new(10, 4, 32)?,
        p: 1.0,
        relay: RelayPower::Total(1.0),
        quantities: vec![
            Quantity::ProductMc,
            Quantity::ProductLower,
            Quantity::IntegralLower,
            Quantity::PrecodedEqualMc,
            Quantity::PrecodedWaterFillMc,
        ],
        mc: *mc,
        units,
        min_q_tolerance: DEFAULT_MIN_Q_TOLERANCE,
    };
    let mut t = per_k(&spec, &[4, 8], 2)?;
    t.metadata.push("figure 5: M=10, N=32, q = q_hat/K, K in {4,8}".into());
    Ok(t)
}

/// Capacity-increment ratio of the lower bound for `K = 1..=8`, `(M, N) = (12, 32)`,
/// `q_hat in {-10, 0, 10} dB`.
pub fn figure6() -> Result<(SweepTable, Vec<K0Result>)> {
    let levels = [(-10.0, "ratio_at_minus10dB"), (0.0, "ratio_at_0dB"), (10.0, "ratio_at_10dB")];
    let results = levels
        .iter()
        .map(|&(db, _)| k0_optimize(12, 32, db_to_linear(db), DEFAULT_ETA, DEFAULT_K_MAX))
        .collect::<Result<Vec<_>>>()?;
    let mut cols = vec!["K".to_string()];
    cols.extend(levels.iter().map(|(_, name)| name.to_string()));
    let mut t = SweepTable::new(cols);
    t.metadata.push(format!("uavcap {}", env!("CARGO_PKG_VERSION")));
    t.metadata.push(format!("figure 6: M=12, N=32, eta={DEFAULT_ETA}, lower bound with q = q_hat/K"));
    for ((db, _), r) in levels.iter().zip(&results) {
        t.metadata.push(format!("K0 at q_hat={db}dB: {}", r.k0));
    }
    for i in 0..DEFAULT_K_MAX {
        let mut row = vec![(i + 1) as f64];
        row.extend(results.iter().map(|r| r.ratios[i].1));
        t.push_row(row)?;
    }
    Ok((t, results))
}
