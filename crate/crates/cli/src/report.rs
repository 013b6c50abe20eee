//! Scan reports.

use serde::Serialize;

use slopelab::oracles::{Budget, BudgetSpent, Certificate, VerdictKind};
use slopelab::Slope;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Serialize)]
pub struct CertifyReport {
    pub schema: u32,
    pub presentation: String,
    pub element: String,
    pub verdict: VerdictKind,
    pub certificate: Certificate,
    pub budgets: BudgetSpent,
}

#[derive(Debug, Serialize)]
pub struct ScanRow {
    pub slope: Slope,
    pub verdict: VerdictKind,
    pub certificate: Certificate,
    pub budgets: BudgetSpent,
}

#[derive(Debug, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub budget: Budget,
}

impl Meta {
    pub fn new(budget: Budget) -> Self {
        Meta {
            tool: "slopelab",
            version: env!("CARGO_PKG_VERSION"),
            budget,
        }
    }
}

/// Rows are sorted by slope, with `1/0` last.
#[derive(Debug, Serialize)]
pub struct ScanReport {
    pub schema: u32,
    pub knot: String,
    pub element: String,
    pub rows: Vec<ScanRow>,
    pub meta: Meta,
}

impl ScanReport {
    pub fn new(knot: String, element: String, mut rows: Vec<ScanRow>, meta: Meta) -> Self {
        rows.sort_by_key(|r| r.slope);
        ScanReport {
            schema: SCHEMA,
            knot,
            element,
            rows,
            meta,
        }
    }

    pub fn to_csv(&self) -> Result<String, Box<dyn std::error::Error>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "slope",
            "verdict",
            "certificate",
            "summary",
            "cosets",
            "homs_tried",
            "search_nodes",
            "rewrite_nodes",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.slope.to_string(),
                r.verdict.to_string(),
                r.certificate.kind_name().to_string(),
                r.certificate.summary(),
                r.budgets.cosets.to_string(),
                r.budgets.homs_tried.to_string(),
                r.budgets.search_nodes.to_string(),
                r.budgets.rewrite_nodes.to_string(),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}
