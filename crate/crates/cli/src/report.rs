//! CSV and JSON serialisation of reports.

use serde::Serialize;
use std::fmt::Write;

use crate::runner::{Grid, Report};

pub const CSV_HEADER: &str = "scenario,i_param,basepoint,point_tag,delta1,delta2,field_p,h0,h1,h2,F,status";

/// Nine significant digits in scientific notation, independent of locale.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

/// The CSV rows of one grid, in report order.
pub fn csv(report: &Report, grid: Grid) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for c in report.cells.iter().filter(|c| c.grid == grid) {
        let p = &c.profile;
        let tag = match c.tag {
            collapse_core::gh::PointTag::Endpoint => "endpoint",
            collapse_core::gh::PointTag::Interior => "interior",
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            report.scenario,
            fmt_float(c.i_param),
            fmt_float(p.basepoint),
            tag,
            fmt_float(p.deltas.0),
            fmt_float(p.deltas.1),
            p.field_p,
            p.h[0],
            p.h[1],
            p.h[2],
            p.f,
            p.status.as_str()
        )
        .expect("writing to a string");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub chi_expected: i64,
    pub chi_integral: Option<i64>,
    #[serde(rename = "match")]
    pub matches: bool,
    pub cells_total: usize,
    pub cells_conclusive: usize,
}

pub fn summary(report: &Report) -> Summary {
    Summary {
        scenario: report.scenario.clone(),
        chi_expected: report.chi_expected,
        chi_integral: report.chi_integral(),
        matches: report.chi_matches(),
        cells_total: report.verified_cells().count(),
        cells_conclusive: report.verified_cells().filter(|c| c.profile.is_conclusive()).count(),
    }
}

/// Human-readable notes: inconclusive cells with reasons and mismatches.
pub fn notes(report: &Report) -> String {
    let mut out = String::new();
    for m in &report.meshes {
        writeln!(
            out,
            "# i_param={} vertices={} chi={} epsilon={} hausdorff={} betti={:?}",
            fmt_float(m.i_param),
            m.vertices,
            m.euler_characteristic,
            fmt_float(m.epsilon),
            fmt_float(m.hausdorff),
            m.betti
        )
        .expect("writing to a string");
    }
    for c in report.verified_cells().filter(|c| !c.profile.is_conclusive()) {
        let p = &c.profile;
        writeln!(
            out,
            "inconclusive i_param={} x={} deltas=({}, {}) p={}: {}",
            fmt_float(c.i_param),
            fmt_float(p.basepoint),
            p.deltas.0,
            p.deltas.1,
            p.field_p,
            p.status.as_str()
        )
        .expect("writing to a string");
    }
    for a in &report.assemblies {
        let res = match &a.result {
            Ok((f, v)) => format!("{f:?} ∫F dχ = {v}"),
            Err(e) => format!("assembly failed: {e}"),
        };
        writeln!(
            out,
            "assembled i_param={} deltas=({}, {}) p={}: {res}",
            fmt_float(a.i_param),
            a.deltas.0,
            a.deltas.1,
            a.field_p
        )
        .expect("writing to a string");
    }
    for m in &report.mismatches {
        writeln!(out, "MISMATCH {m}").expect("writing to a string");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_nine_significant_digits() {
        assert_eq!(fmt_float(0.05), "5.00000000e-2");
        assert_eq!(fmt_float(1.0), "1.00000000e0");
        assert_eq!(fmt_float(0.0), "0.00000000e0");
        assert_eq!(fmt_float(1.0 / 3.0), "3.33333333e-1");
    }
}
