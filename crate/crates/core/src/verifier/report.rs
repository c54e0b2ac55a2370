//! Check reports and their text and JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "legendre-dual/report-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
            Status::Error => "ERROR",
        }
    }
}

/// How an object used by the checks came to be.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub object: String,
    pub side: String,
    pub provenance: String,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateResult {
    pub id: String,
    pub description: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub threshold: f64,
    pub worst_point: Option<Vec<f64>>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub id: String,
    pub equation: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub threshold: f64,
    /// `"E"` for points `(x, y)`, `"E*"` for points `(x, p)`.
    pub point_side: String,
    pub worst_point: Option<Vec<f64>>,
    pub gates: Vec<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Footnote {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub engine_version: String,
    pub name: String,
    pub sha256: String,
    pub samples: usize,
    pub seed: u64,
    pub banners: Vec<String>,
    pub constructions: Vec<Construction>,
    pub gates: Vec<GateResult>,
    pub identities: Vec<IdentityResult>,
    pub footnotes: Vec<Footnote>,
}

impl Report {
    /// 0 when every identity passed or was skipped, 2 on any error, else 1.
    pub fn exit_code(&self) -> i32 {
        if self.identities.iter().any(|r| r.status == Status::Error) {
            2
        } else if self.identities.iter().any(|r| r.status == Status::Fail) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {}  samples {}  seed {}  sha256 {}", self.name, self.samples, self.seed, &self.sha256);
        for b in &self.banners {
            let _ = writeln!(out, "!! {b}");
        }
        if !self.constructions.is_empty() {
            out.push_str("\nconstructions\n");
            for c in &self.constructions {
                let _ = writeln!(out, "  {:<32} {:<3} {:<8} {}", c.object, c.side, c.provenance, c.method);
            }
        }
        if !self.gates.is_empty() {
            out.push_str("\ngates\n");
            let w = self.gates.iter().map(|g| g.id.chars().count()).max().unwrap_or(0);
            for g in &self.gates {
                let _ = writeln!(
                    out,
                    "  {}  {:>10}  {:>10}  {:<5}  {}",
                    pad(&g.id, w),
                    residual_cell(g.residual),
                    sci(g.threshold),
                    g.status.as_str(),
                    g.note.as_deref().unwrap_or(&g.description)
                );
            }
        }
        out.push_str("\nidentities\n");
        let wi = self.identities.iter().map(|r| r.id.chars().count()).max().unwrap_or(2).max(2);
        let we = self.identities.iter().map(|r| r.equation.chars().count()).max().unwrap_or(8).max(8);
        let _ = writeln!(out, "  {}  {}  {:>10}  {:>10}  STATUS", pad("ID", wi), pad("EQUATION", we), "RESIDUAL", "THRESHOLD");
        for r in &self.identities {
            let _ = writeln!(
                out,
                "  {}  {}  {:>10}  {:>10}  {}",
                pad(&r.id, wi),
                pad(&r.equation, we),
                residual_cell(r.residual),
                sci(r.threshold),
                r.status.as_str()
            );
        }
        let notes: Vec<&IdentityResult> = self.identities.iter().filter(|r| r.note.is_some()).collect();
        if !notes.is_empty() {
            out.push_str("\nnotes\n");
            for r in notes {
                let _ = writeln!(out, "  {}: {}", r.id, r.note.as_deref().unwrap_or_default());
            }
        }
        if !self.footnotes.is_empty() {
            out.push_str("\nfootnotes\n");
            for f in &self.footnotes {
                let _ = writeln!(out, "  {}: {}", f.id, f.text);
            }
        }
        out
    }
}

fn pad(s: &str, w: usize) -> String {
    let n = s.chars().count();
    format!("{s}{}", " ".repeat(w.saturating_sub(n)))
}

fn residual_cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), sci)
}

/// `printf("%.3e")` formatting: signed two-digit minimum exponent.
pub fn sci(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.3e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    let sign = if e < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", e.abs())
}
