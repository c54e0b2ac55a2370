use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::{Expr, Ns, Sym};
use super::field::ScalarField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Scenario key the diagnostic is about, e.g. `rho.1.2`.
    pub key: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}: {}", self.key, self.message)
    }
}

impl Diagnostic {
    pub fn error(key: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, key: key.into(), message: message.into() }
    }

    pub fn warning(key: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, key: key.into(), message: message.into() }
    }
}

/// Bundle dimensions: base `m`, algebroid rank `p`, fiber rank `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub m: usize,
    pub p: usize,
    pub r: usize,
}

impl Dims {
    pub fn len(&self, ns: Ns) -> usize {
        match ns {
            Ns::X | Ns::Chi => self.m,
            Ns::Y | Ns::P => self.r,
        }
    }
}

fn ns_words(ns: Ns) -> &'static str {
    match ns {
        Ns::X => "base coordinates x",
        Ns::Chi => "coordinates chi of N",
        Ns::Y => "fiber coordinates y",
        Ns::P => "momentum coordinates",
    }
}

/// Namespace discipline and index ranges for one field.
pub fn check_field(key: &str, role: &str, field: &ScalarField, allowed: &[Ns], dims: &Dims) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut flagged = Vec::new();
    for s in field.free_symbols() {
        match s {
            Sym::Other(name) => out.push(Diagnostic::error(key, format!("unknown symbol {name}"))),
            Sym::Coord(ns, i) => {
                if !allowed.contains(ns) {
                    if !flagged.contains(ns) {
                        flagged.push(*ns);
                        out.push(Diagnostic::error(key, format!("{role} may not reference {}", ns_words(*ns))));
                    }
                } else if *i >= dims.len(*ns) {
                    out.push(Diagnostic::error(
                        key,
                        format!("{s} is out of range ({} has {} coordinates)", ns.prefix(), dims.len(*ns)),
                    ));
                }
            }
        }
    }
    out
}

fn negations(a: &Expr, b: &Expr) -> bool {
    if a.is_zero_literal() && b.is_zero_literal() {
        return true;
    }
    matches!(a, Expr::Neg(inner) if **inner == *b) || matches!(b, Expr::Neg(inner) if **inner == *a)
}

/// Structural antisymmetry of `Lstruct[γ][α][β]` in `(α, β)`.
pub fn check_written_antisymmetry(lstruct: &[Vec<Vec<ScalarField>>]) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (g, slab) in lstruct.iter().enumerate() {
        let p = slab.len();
        for a in 0..p {
            for b in a..p {
                let (u, v) = (&slab[a][b], &slab[b][a]);
                if !negations(u.ast(), v.ast()) {
                    let key = format!("Lstruct.{}.{}.{}", g + 1, a + 1, b + 1);
                    out.push(Diagnostic::warning(
                        key,
                        format!(
                            "structure functions not antisymmetric as written: Lstruct.{g1}.{a1}.{b1} = {u}, Lstruct.{g1}.{b1}.{a1} = {v}",
                            g1 = g + 1,
                            a1 = a + 1,
                            b1 = b + 1
                        ),
                    ));
                }
            }
        }
    }
    out
}
