//! Command-line front end. Every command writes a CSV table with `#` metadata
//! lines; see [`run`].

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::capacity::MonteCarloSettings;
use crate::design::{
    self, k0_optimize, sweep, Axis, Quantity, RelayPower, SweepSpec, DEFAULT_ETA, DEFAULT_K_MAX,
    DEFAULT_MIN_Q_TOLERANCE, POINT_TRIALS, SWEEP_TRIALS,
};
use crate::error::{invalid, Error, Result};
use crate::matrices::AntennaConfig;
use crate::precoding::{eigen_density, integral_lower_bound_checked, DEFAULT_INTEGRAL_ORDER};
use crate::table::{capacity_columns, capacity_values, SweepTable, Units};
use crate::units::{db_to_linear, linear_to_db};

#[derive(Debug, Parser)]
#[command(name = "uavcap", version, about = "Ergodic capacity of UAV-relayed (Rayleigh product) versus direct MIMO links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Monte Carlo trials [default: 100000 for single points, 10000 for sweeps]
    #[arg(long, global = true)]
    pub trials: Option<usize>,

    /// Write the table here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Units::Both)]
    pub units: Units,

    /// Read bare power values as dB (a `dB` suffix always means dB)
    #[arg(long, global = true)]
    pub db: bool,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct Dims {
    #[arg(long = "M", default_value_t = 4)]
    pub m: usize,
    #[arg(long = "K", default_value_t = 2)]
    pub k: usize,
    #[arg(long = "N", default_value_t = 16)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Direct,
    Product,
    PrecodedEqual,
    PrecodedWf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo ergodic capacity at one operating point
    Ergodic {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[command(flatten)]
        dims: Dims,
        /// User power (direct model)
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Relay power (product and precoded models)
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
    },
    /// Closed-form bounds
    Bound {
        /// Product-channel lower bound at relay power --q
        #[arg(long, conflicts_with = "upper", required_unless_present = "upper")]
        lower: bool,
        /// Direct-channel upper bound at user power --p
        #[arg(long)]
        upper: bool,
        #[command(flatten)]
        dims: Dims,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
    },
    /// Minimal relay power matching the direct capacity
    MinQ {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Capacity gap tolerance of the bisection, nats
        #[arg(long, default_value_t = DEFAULT_MIN_Q_TOLERANCE)]
        tol: f64,
    },
    /// Useful relay antenna count under a total relay power budget
    K0 {
        #[arg(long = "M", default_value_t = 12)]
        m: usize,
        #[arg(long = "N", default_value_t = 32)]
        n: usize,
        #[arg(long = "q-hat", allow_hyphen_values = true)]
        q_hat: String,
        #[arg(long, default_value_t = DEFAULT_ETA)]
        eta: f64,
        #[arg(long = "k-max", default_value_t = DEFAULT_K_MAX)]
        k_max: usize,
    },
    /// Marginal eigenvalue densities of the two Gram matrices
    Pdf {
        #[command(flatten)]
        dims: Dims,
        #[arg(long = "lambda-max", default_value_t = 40.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Double-integral lower bound by Gauss-Laguerre quadrature
    Integral {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, default_value_t = DEFAULT_INTEGRAL_ORDER)]
        order: usize,
    },
    /// Figure presets (3 to 7)
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(3..=7))]
        number: u8,
    },
}

/// Parses `"0.1"`, `"-10dB"` or `"-10 db"`. Bare numbers are dB when `db` is set.
pub fn parse_power(s: &str, db: bool) -> Result<f64> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    let (num, is_db) = match lower.strip_suffix("db") {
        Some(rest) => (rest.trim_end(), true),
        None => (t, db),
    };
    let v: f64 = num
        .parse()
        .map_err(|_| invalid(format!("cannot parse power {s:?}")))?;
    let linear = if is_db { db_to_linear(v) } else { v };
    if !(linear > 0.0) || !linear.is_finite() {
        return Err(invalid(format!("power must be positive and finite, got {s:?}")));
    }
    Ok(linear)
}

fn required_power(v: &Option<String>, name: &str, db: bool) -> Result<f64> {
    let s = v
        .as_ref()
        .ok_or_else(|| invalid(format!("--{name} is required here")))?;
    parse_power(s, db)
}

fn settings(cli: &Cli, default: usize) -> Result<MonteCarloSettings> {
    MonteCarloSettings::new(cli.trials.unwrap_or(default), cli.seed)
}

fn point_spec(cli: &Cli, dims: Dims, axis: Axis, x: f64, quantities: Vec<Quantity>) -> Result<SweepSpec> {
    Ok(SweepSpec {
        axis,
        grid: vec![x],
        config: AntennaConfig::new(dims.m, dims.k, dims.n)?,
        p: x,
        relay: RelayPower::Fixed(x),
        quantities,
        mc: settings(cli, POINT_TRIALS)?,
        units: cli.units,
        min_q_tolerance: DEFAULT_MIN_Q_TOLERANCE,
    })
}

fn header(t: &mut SweepTable, cli: &Cli, command: &str) {
    t.metadata.retain(|m| !m.starts_with("uavcap "));
    t.metadata.insert(0, format!("uavcap {} {command}", env!("CARGO_PKG_VERSION")));
    if !t.metadata.iter().any(|m| m.starts_with("seed:")) {
        t.metadata.push(format!("seed: {}", cli.seed));
    }
    t.metadata.push(format!("units: {:?}", cli.units).to_lowercase());
}

fn execute(cli: &Cli) -> Result<SweepTable> {
    let db = cli.db;
    let mut table = match &cli.command {
        Command::Ergodic { model, dims, p, q } => {
            let (axis, power, quantity) = match model {
                ModelArg::Direct => (Axis::P, required_power(p, "p", db)?, Quantity::DirectMc),
                ModelArg::Product => (Axis::Q, required_power(q, "q", db)?, Quantity::ProductMc),
                ModelArg::PrecodedEqual => (Axis::Q, required_power(q, "q", db)?, Quantity::PrecodedEqualMc),
                ModelArg::PrecodedWf => (Axis::Q, required_power(q, "q", db)?, Quantity::PrecodedWaterFillMc),
            };
            sweep(&point_spec(cli, *dims, axis, power, vec![quantity])?)?
        }
        Command::Bound { lower, dims, p, q, .. } => {
            if *lower {
                let q = required_power(q, "q", db)?;
                sweep(&point_spec(cli, *dims, Axis::Q, q, vec![Quantity::ProductLower])?)?
            } else {
                let p = required_power(p, "p", db)?;
                sweep(&point_spec(cli, *dims, Axis::P, p, vec![Quantity::DirectUpper])?)?
            }
        }
        Command::MinQ { dims, p, tol } => {
            let p = parse_power(p, db)?;
            let mut spec = point_spec(cli, *dims, Axis::P, p, vec![Quantity::MinQ])?;
            spec.min_q_tolerance = *tol;
            let mut t = sweep(&spec)?;
            t.metadata.push(format!("tolerance: {tol} nats"));
            t
        }
        Command::K0 { m, n, q_hat, eta, k_max } => {
            let q_hat = parse_power(q_hat, db)?;
            let r = k0_optimize(*m, *n, q_hat, *eta, *k_max)?;
            let mut cols = vec!["K".to_string(), "ratio".to_string()];
            cols.extend(capacity_columns("product_lower", cli.units));
            let mut t = SweepTable::new(cols);
            t.metadata.push(format!("M={m}, N={n}, q_hat={q_hat} ({:.2} dB), eta={eta}", linear_to_db(q_hat)));
            t.metadata.push(format!("K0: {}", r.k0));
            for (&(k, ratio), &(_, s)) in r.ratios.iter().zip(&r.bounds) {
                let mut row = vec![k as f64, ratio];
                row.extend(capacity_values(s, cli.units));
                t.push_row(row)?;
            }
            t
        }
        Command::Pdf { dims, lambda_max, points } => {
            let cfg = AntennaConfig::new(dims.m, dims.k, dims.n)?;
            if !(*lambda_max > 0.0) || *points < 2 {
                return Err(invalid("pdf grid needs --lambda-max > 0 and --points >= 2"));
            }
            let (l1, l2, l3) = cfg.ordered();
            let mut t = SweepTable::new(vec!["lambda".into(), "pdf_first".into(), "pdf_second".into()]);
            t.metadata.push(format!("{cfg}; first: L1={l1}, Lother={l2}; second: L1={l1}, Lother={l3}"));
            for i in 0..*points {
                let x = lambda_max * i as f64 / (*points - 1) as f64;
                t.push_row(vec![x, eigen_density(x, l1, l2)?, eigen_density(x, l1, l3)?])?;
            }
            t
        }
        Command::Integral { dims, q, order } => {
            let cfg = AntennaConfig::new(dims.m, dims.k, dims.n)?;
            let q = parse_power(q, db)?;
            let r = integral_lower_bound_checked(&cfg, q, *order)?;
            let mut cols = vec!["q".to_string(), "q_db".to_string()];
            cols.extend(capacity_columns("integral_lower", cli.units));
            cols.push("stabilization_nats".into());
            let mut t = SweepTable::new(cols);
            t.metadata.push(format!("{cfg}, Gauss-Laguerre order {order}"));
            let mut row = vec![q, linear_to_db(q)];
            row.extend(capacity_values(r.value_nats, cli.units));
            row.push(r.stabilization);
            t.push_row(row)?;
            t
        }
        Command::Figure { number } => {
            let mc = settings(cli, SWEEP_TRIALS)?;
            match number {
                3 => design::figure3(&mc, cli.units)?,
                4 => design::figure4(&mc)?,
                5 => design::figure5(&mc, cli.units)?,
                6 => design::figure6()?.0,
                _ => design::figure7(&mc)?,
            }
        }
    };
    let name = match &cli.command {
        Command::Ergodic { .. } => "ergodic".to_string(),
        Command::Bound { .. } => "bound".to_string(),
        Command::MinQ { .. } => "min-q".to_string(),
        Command::K0 { .. } => "k0".to_string(),
        Command::Pdf { .. } => "pdf".to_string(),
        Command::Integral { .. } => "integral".to_string(),
        Command::Figure { number } => format!("figure {number}"),
    };
    header(&mut table, cli, &name);
    Ok(table)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (including the program name), runs the command and writes the
/// table to `--out` or `out`. Diagnostics go to `err`. Returns the exit code:
/// 0 on success, 1 on a numerical failure, 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let table = match execute(&cli) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "uavcap: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cli.out {
        Some(path) => File::create(path).and_then(|f| table.write_csv(BufWriter::new(f))),
        None => table.write_csv(&mut *out),
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "uavcap: writing output: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_parsing() {
        assert_eq!(parse_power("0.5", false).unwrap(), 0.5);
        assert!((parse_power("-10dB", false).unwrap() - 0.1).abs() < 1e-15);
        assert!((parse_power("20 dB", false).unwrap() - 100.0).abs() < 1e-12);
        assert!((parse_power("10", true).unwrap() - 10.0).abs() < 1e-12);
        assert!(parse_power("0", false).is_err());
        assert!(parse_power("-1", false).is_err());
        assert!(parse_power("abc", false).is_err());
    }

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("uavcap").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bound_command() {
        let (code, out, _) = run_str(&["bound", "--lower", "--M", "1", "--K", "1", "--N", "1", "--q", "1", "--units", "nats"]);
        assert_eq!(code, 0);
        assert!(out.contains("q,q_db,product_lower_nats\n1,0,0.274016689\n"), "{out}");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str(&["bound", "--lower", "--M", "0", "--q", "1"]).0, 2);
        assert_eq!(run_str(&["ergodic", "--model", "product", "--trials", "1", "--q", "1"]).0, 2);
        assert_eq!(run_str(&["ergodic", "--model", "direct", "--q", "1"]).0, 2);
        assert_eq!(run_str(&["figure", "9"]).0, 2);
        assert_eq!(run_str(&["nonsense"]).0, 2);
        let (code, _, err) = run_str(&["bound", "--lower", "--q", "-3"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
    }
}
