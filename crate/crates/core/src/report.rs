//! Tab-separated reports: `X series label value reference_value abs_diff`,
//! one row per checkpoint and series row, numbers to 10 significant digits.

use std::fmt::Write as _;

use crate::analytic::li;
use crate::error::Result;
use crate::galois::Census;
use crate::moebius::SumSeries;

pub const HEADER: &str = "X\tseries\tlabel\tvalue\treference_value\tabs_diff";

/// Header comment stating the Li convention used by census rows.
pub const LI_CONVENTION: &str = "Li(x) = integral of dt/log t from 2 to x";

/// Formats `v` with 10 significant digits, trailing zeros trimmed.
/// Magnitudes outside [1e-5, 1e15) use exponent notation.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        trim_fraction(&format!("{v:.decimals$}"))
    } else {
        let s = format!("{v:.9e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent form");
        format!("{}e{exponent}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" { "0".into() } else { t.to_string() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// Blank for rows not tied to a norm bound.
    pub x: Option<u64>,
    pub series: String,
    pub label: String,
    pub value: f64,
    pub reference: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    comments: Vec<String>,
    rows: Vec<ReportRow>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a `# ` line above the header.
    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[ReportRow] {
        &self.rows
    }

    /// Appends every row of `series`, checkpoint-major.
    pub fn push_series(&mut self, series: &SumSeries) {
        for (i, &x) in series.checkpoints.iter().enumerate() {
            for row in &series.rows {
                self.rows.push(ReportRow {
                    x: Some(x),
                    series: row.kind.name().into(),
                    label: row.label.clone(),
                    value: row.values[i],
                    reference: row.reference[i],
                });
            }
        }
    }

    /// Appends π(K; X), per-class π_C against (|C|/|G|)·Li(X), class ratios
    /// against |C|/|G|, and the ramified-in-L count.
    pub fn push_census(&mut self, census: &Census) -> Result<()> {
        if !self.comments.iter().any(|c| c == LI_CONVENTION) {
            self.comment(LI_CONVENTION);
        }
        let x = census.x_max;
        let li_x = if x >= 2 { li(x as f64)? } else { 0.0 };
        let mut push = |series: &str, label: &str, value: f64, reference: Option<f64>| {
            self.rows.push(ReportRow {
                x: Some(x),
                series: series.into(),
                label: label.into(),
                value,
                reference,
            })
        };
        push("pi", "", census.total as f64, Some(li_x));
        push("ramified_in_L", "", census.ramified_in_l as f64, None);
        for c in &census.classes {
            push("pi_C", &c.label, c.count as f64, Some(c.weight * li_x));
            push("pi_C_ratio", &c.label, c.ratio, Some(c.weight));
        }
        Ok(())
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str(HEADER);
        out.push('\n');
        for r in &self.rows {
            let (reference, diff) = match r.reference {
                Some(v) => (format_value(v), format_value((r.value - v).abs())),
                None => (String::new(), String::new()),
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.x.map(|x| x.to_string()).unwrap_or_default(),
                r.series,
                r.label,
                format_value(r.value),
                reference,
                diff
            );
        }
        out
    }
}
