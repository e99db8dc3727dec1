//! CSV and JSON encodings.

use std::io::Write;

use anyhow::Result;
use maxcut_core::SweepRecord;
use serde::{Deserialize, Serialize};

/// Rounds to 12 significant digits. The CSV writer then prints the shortest
/// decimal that round-trips, so every emitted number has at most 12 digits
/// and parses back to exactly this value.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn r12(x: Option<f64>) -> Option<f64> {
    x.map(round12)
}

/// One row of `opt` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "D")]
    pub degree: u32,
    pub qaoa1_impr: Option<f64>,
    pub qaoa2_impr: Option<f64>,
    pub thr1_impr: Option<f64>,
    pub thr2_impr: Option<f64>,
    pub qaoa1_gamma: Option<f64>,
    pub qaoa2_gamma1: Option<f64>,
    pub qaoa2_beta1: Option<f64>,
    pub qaoa2_gamma2: Option<f64>,
    pub qaoa2_beta2: Option<f64>,
    pub thr1_tau: Option<u32>,
    pub thr2_tau1: Option<u32>,
    pub thr2_tau2: Option<u32>,
    pub b_qaoa1: Option<f64>,
    pub b_qaoa2: Option<f64>,
    pub b_thr1: Option<f64>,
    pub b_thr2: Option<f64>,
    pub winner: Option<String>,
    pub window_violation: bool,
}

impl From<&SweepRecord> for SweepRow {
    fn from(r: &SweepRecord) -> Self {
        let angle = |i: usize| r.qaoa2_angles.map(|a| round12(a[i]));
        SweepRow {
            degree: r.degree,
            qaoa1_impr: r12(r.qaoa1_impr),
            qaoa2_impr: r12(r.qaoa2_impr),
            thr1_impr: r12(r.thr1_impr),
            thr2_impr: r12(r.thr2_impr),
            qaoa1_gamma: r12(r.qaoa1_gamma),
            qaoa2_gamma1: angle(0),
            qaoa2_beta1: angle(1),
            qaoa2_gamma2: angle(2),
            qaoa2_beta2: angle(3),
            thr1_tau: r.thr1_tau,
            thr2_tau1: r.thr2_taus.map(|t| t.0),
            thr2_tau2: r.thr2_taus.map(|t| t.1),
            b_qaoa1: r12(r.b_qaoa1),
            b_qaoa2: r12(r.b_qaoa2),
            b_thr1: r12(r.b_thr1),
            b_thr2: r12(r.b_thr2),
            winner: r.winner.map(|w| w.as_str().to_string()),
            window_violation: r.window_violation,
        }
    }
}

/// One row of `compare` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    #[serde(rename = "D")]
    pub degree: u32,
    pub b_qaoa1: f64,
    pub b_qaoa2: f64,
    pub b_thr1: f64,
    pub b_thr2: f64,
}

impl CompareRow {
    pub fn from_record(r: &SweepRecord) -> Option<Self> {
        Some(CompareRow {
            degree: r.degree,
            b_qaoa1: round12(r.b_qaoa1?),
            b_qaoa2: round12(r.b_qaoa2?),
            b_thr1: round12(r.b_thr1?),
            b_thr2: round12(r.b_thr2?),
        })
    }
}

pub fn write_csv<T: Serialize>(out: impl Write, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use maxcut_core::optimize::{compare_sweep, SweepConfig};

    #[test]
    fn round12_caps_digits() {
        let x = round12(std::f64::consts::PI);
        assert_eq!(x.to_string(), "3.14159265359");
        assert_eq!(round12(0.1), 0.1);
        assert_eq!(round12(1.0 / 3.0).to_string(), "0.333333333333");
        assert_eq!(round12(0.0), 0.0);
        assert_eq!(round12(round12(2.0f64.sqrt())), round12(2.0f64.sqrt()));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let cfg = SweepConfig { starts: 4, ..SweepConfig::default() };
        let rows: Vec<SweepRow> = compare_sweep(2, 6, &cfg).unwrap().iter().map(SweepRow::from).collect();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("D,qaoa1_impr,"));
        let back: Vec<SweepRow> =
            csv::Reader::from_reader(buf.as_slice()).deserialize().collect::<Result<_, _>>().unwrap();
        assert_eq!(back, rows);
        for field in text.lines().skip(1).flat_map(|l| l.split(',')) {
            let digits = field.trim_start_matches('-').chars().filter(char::is_ascii_digit).count();
            if field.contains('.') {
                assert!(digits <= 13, "{field}");
            }
        }
    }

    #[test]
    fn partial_rows_leave_blanks() {
        let cfg = SweepConfig { qaoa1: false, qaoa2: false, threshold1: false, ..SweepConfig::default() };
        let rows: Vec<SweepRow> = compare_sweep(3, 3, &cfg).unwrap().iter().map(SweepRow::from).collect();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let line = String::from_utf8(buf).unwrap().lines().nth(1).unwrap().to_string();
        assert!(line.starts_with("3,,,,0.24609375,"));
        assert!(CompareRow::from_record(&compare_sweep(3, 3, &cfg).unwrap()[0]).is_none());
    }
}
