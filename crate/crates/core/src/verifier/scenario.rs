//! Scenario files: a sectioned TOML document whose values are expressions.
//!
//! Indexed entries are dotted keys with 1-based indices, `rho.1.2 = "chi1"`.
//! Omitted entries of a present section default to zero, except `h`, `eta`
//! and the morphisms `g`, which default to the identity.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebroid::AlgebroidData;
use crate::expr::{check_field, check_written_antisymmetry, Diagnostic, Dims, Ns, ScalarField, Severity};
use crate::legendre::{LegendrePair, Primary};
use crate::model::{ConnectionData, DLinearData, Geometry, MechanicsData, Side};
use crate::numeric::{NewtonConfig, SamplePlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `h = η = id`, `ρ = I`, vanishing structure functions, `p = m`.
    Classical,
    General,
}

/// Uniform sampling boxes for the two sample sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampling {
    pub count: usize,
    pub seed: u64,
    pub x: Vec<(f64, f64)>,
    pub y: Vec<(f64, f64)>,
    pub p: Vec<(f64, f64)>,
}

impl Sampling {
    /// Points `(x, y)` for E use `seed`; points `(x, p)` for E* use `seed + 1`.
    pub fn plan(&self, side: Side) -> SamplePlan {
        let (fiber, seed) = match side {
            Side::E => (&self.y, self.seed),
            Side::Estar => (&self.p, self.seed.wrapping_add(1)),
        };
        SamplePlan { count: self.count, seed, bounds: self.x.iter().chain(fiber).copied().collect() }
    }
}

/// Threshold overrides: `default` for identities, `gates` for gates, and
/// per-identity values keyed by canonical ID.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tolerances {
    pub default: Option<f64>,
    pub gates: Option<f64>,
    pub per_id: BTreeMap<String, f64>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub mode: Mode,
    pub geometry: Geometry,
    pub sampling: Sampling,
    pub tolerances: Tolerances,
    /// Requested identity IDs (canonical form); `None` means all applicable.
    pub ids: Option<Vec<String>>,
    /// Hex SHA-256 of the file bytes.
    pub digest: String,
    pub warnings: Vec<Diagnostic>,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{}", ValidationList(.0))]
    Validation(Vec<Diagnostic>),
}

struct ValidationList<'a>(&'a [Diagnostic]);

impl fmt::Display for ValidationList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scenario validation failed")?;
        for d in self.0 {
            write!(f, "\n  {d}")?;
        }
        Ok(())
    }
}

/// Canonical identity ID: `ID-` prefix, ASCII apostrophe for primes.
pub fn canonical_id(raw: &str) -> String {
    let t = raw.trim().replace('′', "'");
    let t = t.strip_prefix("ID-").or_else(|| t.strip_prefix("id-")).unwrap_or(&t);
    format!("ID-{t}")
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
    Scenario::parse(&text)
}

type Flat = BTreeMap<String, toml::Value>;

fn flatten(prefix: &str, t: &toml::Table, out: &mut Flat) {
    for (k, v) in t {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            toml::Value::Table(inner) => flatten(&key, inner, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, column)
}

/// Accumulates diagnostics while reading sections.
struct Reader {
    sections: BTreeMap<String, Flat>,
    diags: Vec<Diagnostic>,
}

const SECTIONS: &[&str] = &[
    "scenario",
    "algebroid",
    "lagrangian",
    "hamiltonian",
    "newton",
    "connection",
    "dual_connection",
    "dlinear",
    "dlinear_dual",
    "mechanics",
    "dual_mechanics",
    "sampling",
    "tolerances",
];

impl Reader {
    fn has(&self, section: &str) -> bool {
        self.sections.contains_key(section)
    }

    fn take(&mut self, section: &str, key: &str) -> Option<toml::Value> {
        self.sections.get_mut(section)?.remove(key)
    }

    fn err(&mut self, key: String, msg: impl Into<String>) {
        self.diags.push(Diagnostic::error(key, msg));
    }

    fn int(&mut self, section: &str, key: &str) -> Option<usize> {
        match self.take(section, key)? {
            toml::Value::Integer(i) if i >= 0 => Some(i as usize),
            _ => {
                self.err(format!("{section}.{key}"), "expected a non-negative integer");
                None
            }
        }
    }

    fn float(&mut self, section: &str, key: &str) -> Option<f64> {
        let full = format!("{section}.{key}");
        self.take(section, key).and_then(|v| self.number(&full, &v))
    }

    fn number(&mut self, key: &str, v: &toml::Value) -> Option<f64> {
        match v {
            toml::Value::Integer(i) => Some(*i as f64),
            toml::Value::Float(f) => Some(*f),
            _ => {
                self.err(key.to_string(), "expected a number");
                None
            }
        }
    }

    fn string(&mut self, section: &str, key: &str) -> Option<String> {
        match self.take(section, key)? {
            toml::Value::String(s) => Some(s),
            _ => {
                self.err(format!("{section}.{key}"), "expected a string");
                None
            }
        }
    }

    fn field(&mut self, key: &str, v: &toml::Value, role: &str, allowed: &[Ns], dims: &Dims) -> ScalarField {
        let parsed = match v {
            toml::Value::String(s) => ScalarField::parse(s).map_err(|e| e.to_string()),
            toml::Value::Integer(i) => Ok(ScalarField::constant(*i as f64)),
            toml::Value::Float(f) => Ok(ScalarField::constant(*f)),
            _ => Err("expected an expression string".to_string()),
        };
        match parsed {
            Ok(f) => {
                self.diags.extend(check_field(key, role, &f, allowed, dims));
                f
            }
            Err(msg) => {
                self.err(key.to_string(), msg);
                ScalarField::zero()
            }
        }
    }

    /// Removes every `name.i.j...` entry of `section` and returns them by
    /// 0-based index, after range checks against `ranges`.
    fn indexed(&mut self, section: &str, name: &str, ranges: &[usize]) -> Vec<(Vec<usize>, String, toml::Value)> {
        let Some(flat) = self.sections.get_mut(section) else { return Vec::new() };
        let prefix = format!("{name}.");
        let keys: Vec<String> = flat.keys().filter(|k| k.starts_with(&prefix) || *k == name).cloned().collect();
        let mut out = Vec::new();
        for k in keys {
            let v = flat.remove(&k).expect("listed key");
            let full = format!("{section}.{k}");
            let parts: Vec<&str> = k.split('.').skip(1).collect();
            let idx: Option<Vec<usize>> = parts.iter().map(|s| s.parse::<usize>().ok()).collect();
            match idx {
                Some(idx) if idx.len() == ranges.len() => {
                    if let Some((pos, _)) = idx.iter().zip(ranges).enumerate().find(|(_, (i, n))| **i == 0 || **i > **n) {
                        self.diags.push(Diagnostic::error(full, format!("index {} out of range 1..={}", idx[pos], ranges[pos])));
                    } else {
                        out.push((idx.iter().map(|i| i - 1).collect(), full, v));
                    }
                }
                _ => self.diags.push(Diagnostic::error(full, format!("expected {} 1-based indices after {name}", ranges.len()))),
            }
        }
        out
    }

    fn vector(&mut self, section: &str, name: &str, n: usize, role: &str, allowed: &[Ns], dims: &Dims, fill: impl Fn(usize) -> ScalarField) -> (Vec<ScalarField>, bool) {
        let entries = self.indexed(section, name, &[n]);
        let any = !entries.is_empty();
        let mut out: Vec<ScalarField> = (0..n).map(fill).collect();
        for (idx, key, v) in entries {
            out[idx[0]] = self.field(&key, &v, role, allowed, dims);
        }
        (out, any)
    }

    fn matrix(&mut self, section: &str, name: &str, shape: [usize; 2], role: &str, allowed: &[Ns], dims: &Dims, fill: impl Fn(usize, usize) -> ScalarField) -> (Vec<Vec<ScalarField>>, bool) {
        let entries = self.indexed(section, name, &shape);
        let any = !entries.is_empty();
        let mut out: Vec<Vec<ScalarField>> = (0..shape[0]).map(|i| (0..shape[1]).map(|j| fill(i, j)).collect()).collect();
        for (idx, key, v) in entries {
            out[idx[0]][idx[1]] = self.field(&key, &v, role, allowed, dims);
        }
        (out, any)
    }

    fn tensor(&mut self, section: &str, name: &str, shape: [usize; 3], role: &str, allowed: &[Ns], dims: &Dims) -> Vec<Vec<Vec<ScalarField>>> {
        let mut out = vec![vec![vec![ScalarField::zero(); shape[2]]; shape[1]]; shape[0]];
        for (idx, key, v) in self.indexed(section, name, &shape) {
            out[idx[0]][idx[1]][idx[2]] = self.field(&key, &v, role, allowed, dims);
        }
        out
    }

    fn bounds(&mut self, name: &str, n: usize, default: (f64, f64)) -> Vec<(f64, f64)> {
        let mut out = vec![default; n];
        if let Some(v) = self.take("sampling", name) {
            if let Some(b) = self.interval(&format!("sampling.{name}"), &v) {
                out = vec![b; n];
            }
        }
        for (i, slot) in out.iter_mut().enumerate() {
            let key = format!("{name}{}", i + 1);
            if let Some(v) = self.take("sampling", &key) {
                if let Some(b) = self.interval(&format!("sampling.{key}"), &v) {
                    *slot = b;
                }
            }
        }
        out
    }

    fn interval(&mut self, key: &str, v: &toml::Value) -> Option<(f64, f64)> {
        let arr = match v {
            toml::Value::Array(a) if a.len() == 2 => a,
            _ => {
                self.err(key.to_string(), "expected an interval [lo, hi]");
                return None;
            }
        };
        let lo = self.number(key, &arr[0])?;
        let hi = self.number(key, &arr[1])?;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            self.err(key.to_string(), format!("empty or non-finite interval [{lo}, {hi}]"));
            return None;
        }
        Some((lo, hi))
    }
}

fn coords(ns: &str, n: usize) -> impl Fn(usize) -> ScalarField + '_ {
    move |i| {
        debug_assert!(i < n);
        ScalarField::parse(&format!("{ns}{}", i + 1)).expect("coordinate symbol")
    }
}

fn identity_entry(i: usize, j: usize) -> ScalarField {
    ScalarField::constant(if i == j { 1.0 } else { 0.0 })
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let table: toml::Table = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
            ScenarioError::Parse { line, column, message: e.message().trim().to_string() }
        })?;
        let digest = format!("{:x}", Sha256::digest(text.as_bytes()));
        let mut rd = Reader { sections: BTreeMap::new(), diags: Vec::new() };
        for (name, v) in &table {
            match v {
                toml::Value::Table(t) if SECTIONS.contains(&name.as_str()) => {
                    let mut flat = Flat::new();
                    flatten("", t, &mut flat);
                    rd.sections.insert(name.clone(), flat);
                }
                toml::Value::Table(_) => rd.err(name.clone(), "unknown section"),
                _ => rd.err(name.clone(), "top-level entries must live in a section"),
            }
        }
        let sc = build(&mut rd, digest);
        for (section, rest) in &rd.sections {
            for key in rest.keys() {
                rd.diags.push(Diagnostic::error(format!("{section}.{key}"), "unknown key"));
            }
        }
        let (errors, warnings): (Vec<_>, Vec<_>) = rd.diags.into_iter().partition(|d| d.severity == Severity::Error);
        match sc {
            Some(mut sc) if errors.is_empty() => {
                sc.warnings = warnings;
                Ok(sc)
            }
            _ => Err(ScenarioError::Validation(errors)),
        }
    }
}

fn build(rd: &mut Reader, digest: String) -> Option<Scenario> {
    if !rd.has("scenario") {
        rd.err("scenario".into(), "missing [scenario] section");
        return None;
    }
    let name = rd.string("scenario", "name").unwrap_or_else(|| "unnamed".into());
    let mode = match rd.string("scenario", "mode").as_deref() {
        None | Some("general") => Mode::General,
        Some("classical") => Mode::Classical,
        Some(other) => {
            rd.err("scenario.mode".into(), format!("unknown mode {other:?}, expected \"classical\" or \"general\""));
            Mode::General
        }
    };
    let Some(m) = rd.int("scenario", "m") else {
        rd.err("scenario.m".into(), "base dimension m is required");
        return None;
    };
    let p = match (mode, rd.int("scenario", "p")) {
        (Mode::Classical, Some(p)) if p != m => {
            rd.err("scenario.p".into(), "classical mode requires p = m");
            m
        }
        (_, Some(p)) => p,
        (Mode::Classical, None) => m,
        (Mode::General, None) => {
            rd.err("scenario.p".into(), "algebroid rank p is required in general mode");
            return None;
        }
    };
    let r = rd.int("scenario", "r").unwrap_or(p);
    if m == 0 || p == 0 || r == 0 {
        rd.err("scenario".into(), "dimensions must be positive");
        return None;
    }
    let dims = Dims { m, p, r };
    let ids = match rd.take("scenario", "ids") {
        None => None,
        Some(toml::Value::Array(a)) => {
            let mut v = Vec::new();
            for item in a {
                match item {
                    toml::Value::String(s) => v.push(canonical_id(&s)),
                    _ => rd.err("scenario.ids".into(), "expected identity IDs as strings"),
                }
            }
            Some(v)
        }
        Some(_) => {
            rd.err("scenario.ids".into(), "expected an array of identity IDs");
            None
        }
    };
    let primary = rd.string("scenario", "primary");

    let alg = match mode {
        Mode::Classical => {
            if rd.has("algebroid") {
                rd.err("algebroid".into(), "classical mode fixes h, eta, rho and Lstruct; remove the [algebroid] section");
                rd.sections.remove("algebroid");
            }
            AlgebroidData::classical(m)
        }
        Mode::General => {
            let (h, _) = rd.vector("algebroid", "h", m, "h", &[Ns::X], &dims, coords("x", m));
            let (eta, _) = rd.vector("algebroid", "eta", m, "eta", &[Ns::Chi], &dims, coords("chi", m));
            let (rho, _) = rd.matrix("algebroid", "rho", [m, p], "anchor", &[Ns::Chi], &dims, |_, _| ScalarField::zero());
            let lstruct = rd.tensor("algebroid", "Lstruct", [p, p, p], "structure function", &[Ns::Chi], &dims);
            rd.diags.extend(check_written_antisymmetry(&lstruct));
            AlgebroidData { m, p, h, eta, rho, lstruct }
        }
    };

    let lag = rd.take("lagrangian", "L").map(|v| rd.field("lagrangian.L", &v, "Lagrangian", &[Ns::X, Ns::Y], &dims));
    let ham = rd.take("hamiltonian", "H").map(|v| rd.field("hamiltonian.H", &v, "Hamiltonian", &[Ns::X, Ns::P], &dims));
    let mut pair = match (lag, ham) {
        (None, None) => {
            rd.err("scenario".into(), "scenario defines neither a Lagrangian nor a Hamiltonian");
            None
        }
        (Some(l), None) => Some(LegendrePair::from_lagrangian(m, r, l)),
        (None, Some(h)) => Some(LegendrePair::from_hamiltonian(m, r, h)),
        (Some(l), Some(h)) => {
            let mut pr = LegendrePair::from_lagrangian(m, r, l);
            pr.hamiltonian = Some(h);
            Some(pr)
        }
    };
    if let Some(pr) = pair.as_mut() {
        match primary.as_deref() {
            None => {}
            Some("lagrangian") if pr.lagrangian.is_some() => pr.primary = Primary::Lagrangian,
            Some("hamiltonian") if pr.hamiltonian.is_some() => pr.primary = Primary::Hamiltonian,
            Some(other) => rd.err("scenario.primary".into(), format!("primary {other:?} is not defined by this scenario")),
        }
        let mut cfg = NewtonConfig::default();
        if let Some(t) = rd.float("newton", "tol") {
            cfg.tol = t;
        }
        if let Some(n) = rd.int("newton", "max_iter") {
            cfg.max_iter = n;
        }
        if let Some(n) = rd.int("newton", "max_halvings") {
            cfg.max_halvings = n;
        }
        pr.newton = cfg;
    }

    let mut geo = Geometry::new(alg, pair, r);
    let on_e = [Ns::X, Ns::Y];
    let on_s = [Ns::X, Ns::P];
    if rd.has("connection") {
        let (gamma, _) = rd.matrix("connection", "Gamma", [r, p], "connection", &on_e, &dims, |_, _| ScalarField::zero());
        geo.conn = Some(ConnectionData { gamma });
    }
    if rd.has("dual_connection") {
        let (gamma, _) = rd.matrix("dual_connection", "Gamma", [r, p], "dual connection", &on_s, &dims, |_, _| ScalarField::zero());
        geo.conn_star = Some(ConnectionData { gamma });
    }
    for (section, side, allowed) in [("dlinear", Side::E, &on_e), ("dlinear_dual", Side::Estar, &on_s)] {
        if !rd.has(section) {
            continue;
        }
        let vc = match side {
            Side::E => [p, p, r],
            Side::Estar => [p, r, p],
        };
        let d = DLinearData {
            hc: rd.tensor(section, "Hc", [p, p, p], "connection component", allowed, &dims),
            hv: rd.tensor(section, "Hv", [r, r, p], "connection component", allowed, &dims),
            vc: rd.tensor(section, "Vc", vc, "connection component", allowed, &dims),
            vv: rd.tensor(section, "Vv", [r, r, r], "connection component", allowed, &dims),
        };
        match side {
            Side::E => geo.dlin = Some(d),
            Side::Estar => geo.dlin_star = Some(d),
        }
    }
    for (section, side, allowed) in [("mechanics", Side::E, &on_e), ("dual_mechanics", Side::Estar, &on_s)] {
        if !rd.has(section) {
            continue;
        }
        let (g, any_g) = rd.matrix(section, "g", [r, r], "morphism g", &[Ns::Chi], &dims, identity_entry);
        let (spray, any_s) = rd.vector(section, "G", r, "semispray coefficient", allowed, &dims, |_| ScalarField::zero());
        let (force, any_f) = rd.vector(section, "F", r, "force", allowed, &dims, |_| ScalarField::zero());
        let given = any_s || any_f;
        let md = MechanicsData {
            spray: if given { spray } else { Vec::new() },
            force: if given { force } else { Vec::new() },
            morph: if any_g { g } else { Vec::new() },
        };
        match side {
            Side::E => geo.mech = Some(md),
            Side::Estar => geo.mech_star = Some(md),
        }
    }

    let count = rd.int("sampling", "count").unwrap_or(100);
    let seed = match rd.take("sampling", "seed") {
        None => 1,
        Some(toml::Value::Integer(i)) if i >= 0 => i as u64,
        Some(_) => {
            rd.err("sampling.seed".into(), "expected a non-negative integer");
            1
        }
    };
    let sampling = Sampling {
        count,
        seed,
        x: rd.bounds("x", m, (-1.0, 1.0)),
        y: rd.bounds("y", r, (-1.0, 1.0)),
        p: rd.bounds("p", r, (-1.0, 1.0)),
    };

    let mut tolerances = Tolerances { default: rd.float("tolerances", "default"), gates: rd.float("tolerances", "gates"), ..Default::default() };
    if let Some(rest) = rd.sections.remove("tolerances") {
        for (k, v) in rest {
            let key = format!("tolerances.{k}");
            if let Some(t) = rd.number(&key, &v) {
                tolerances.per_id.insert(canonical_id(&k), t);
            }
        }
    }

    Some(Scenario { name, mode, geometry: geo, sampling, tolerances, ids, digest, warnings: Vec::new() })
}
