//! Writes the figure presets as CSV files into a directory (default
//! `figures/`), with reduced trial counts. Pass `--full` for the default
//! 10^4 trials per point.

use std::fs::{self, File};
use std::path::Path;

use uavcap::capacity::MonteCarloSettings;
use uavcap::design;
use uavcap::table::Units;

pub fn run_into(dir: &Path, trials: usize) {
    fs::create_dir_all(dir).unwrap();
    let mc = MonteCarloSettings::new(trials, 0).unwrap();
    let tables = [
        ("figure3.csv", design::figure3(&mc, Units::Both).unwrap()),
        ("figure4.csv", design::figure4(&mc).unwrap()),
        ("figure5.csv", design::figure5(&mc, Units::Both).unwrap()),
        ("figure6.csv", design::figure6().unwrap().0),
        ("figure7.csv", design::figure7(&mc).unwrap()),
    ];
    for (name, t) in tables {
        let path = dir.join(name);
        t.write_csv(File::create(&path).unwrap()).unwrap();
        println!("{}: {} rows x {} columns", path.display(), t.rows.len(), t.columns.len());
    }
}

#[allow(dead_code)]
fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let full = args.iter().any(|a| a == "--full");
    let dir = args.iter().find(|a| !a.starts_with("--")).map_or("figures", String::as_str);
    run_into(Path::new(dir), if full { design::SWEEP_TRIALS } else { 1_000 });
}
