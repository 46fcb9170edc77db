//! Sweep tables and their CSV form.
//!
//! The file starts with `#`-prefixed metadata lines, then a mandatory header
//! row, then numeric rows. Numbers are written with 9 significant digits; `NaN`
//! marks a quantity that is undefined at that row.

use std::io::{self, Read, Write};

use crate::error::{invalid, Result};
use crate::units::nats_to_bits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Units {
    Nats,
    Bits,
    #[default]
    Both,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub metadata: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Formats `v` with 9 significant digits, fixed notation where that is short
/// and scientific otherwise.
pub fn format_sig9(v: f64) -> String {
    if v.is_nan() {
        return "NaN".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        // the rounded mantissa fixes the digit count; reuse it for fixed notation
        let rounded: f64 = sci.parse().expect("valid float");
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{rounded:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

impl SweepTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            metadata: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(invalid(format!(
                "row has {} values, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Keeps the named columns, in the given order.
    pub fn select(&self, names: &[&str]) -> Result<SweepTable> {
        let idx = names
            .iter()
            .map(|n| self.column_index(n).ok_or_else(|| invalid(format!("no column named {n}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(SweepTable {
            metadata: self.metadata.clone(),
            columns: names.iter().map(|s| s.to_string()).collect(),
            rows: self.rows.iter().map(|r| idx.iter().map(|&i| r[i]).collect()).collect(),
        })
    }

    /// Places tables side by side. The first `shared` columns of `parts[0]`
    /// are kept once; the remaining columns of every part get its suffix.
    pub fn side_by_side(parts: &[(String, SweepTable)], shared: usize) -> Result<SweepTable> {
        let first = &parts.first().ok_or_else(|| invalid("nothing to join"))?.1;
        let mut columns: Vec<String> = first.columns[..shared].to_vec();
        for (suffix, t) in parts {
            if t.rows.len() != first.rows.len() {
                return Err(invalid("joined tables must have the same number of rows"));
            }
            columns.extend(t.columns[shared..].iter().map(|c| format!("{c}{suffix}")));
        }
        let rows = (0..first.rows.len())
            .map(|i| {
                let mut row = first.rows[i][..shared].to_vec();
                for (_, t) in parts {
                    row.extend_from_slice(&t.rows[i][shared..]);
                }
                row
            })
            .collect();
        Ok(SweepTable {
            metadata: first.metadata.clone(),
            columns,
            rows,
        })
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for line in &self.metadata {
            writeln!(out, "# {line}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| format_sig9(v)))?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<SweepTable> {
        let mut text = String::new();
        let mut input = input;
        input
            .read_to_string(&mut text)
            .map_err(|e| invalid(format!("reading table: {e}")))?;
        let metadata = text
            .lines()
            .filter_map(|l| l.strip_prefix('#'))
            .map(|l| l.trim_start().to_string())
            .collect();
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let columns = r
            .headers()
            .map_err(|e| invalid(format!("bad header: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut table = SweepTable {
            metadata,
            columns,
            rows: Vec::new(),
        };
        for rec in r.records() {
            let rec = rec.map_err(|e| invalid(format!("bad row: {e}")))?;
            let row = rec
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| invalid(format!("bad number {f:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            table.push_row(row)?;
        }
        Ok(table)
    }
}

/// Column names and values for a capacity-valued quantity in the requested units.
pub(crate) fn capacity_columns(name: &str, units: Units) -> Vec<String> {
    match units {
        Units::Nats => vec![format!("{name}_nats")],
        Units::Bits => vec![format!("{name}_bits")],
        Units::Both => vec![format!("{name}_nats"), format!("{name}_bits")],
    }
}

pub(crate) fn capacity_values(nats: f64, units: Units) -> Vec<f64> {
    match units {
        Units::Nats => vec![nats],
        Units::Bits => vec![nats_to_bits(nats)],
        Units::Both => vec![nats, nats_to_bits(nats)],
    }
}
