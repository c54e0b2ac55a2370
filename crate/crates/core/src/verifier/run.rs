//! Batch evaluation of a scenario against the registry.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use super::registry::{identity, IdentityDef, Probe, GATES, GATE_THRESHOLD, IDENTITIES};
use super::report::{Construction, Footnote, GateResult, IdentityResult, Report, Status, SCHEMA};
use super::scenario::{canonical_id, Scenario};
use crate::connection::Provenance;
use crate::error::EvalError;
use crate::legendre::Primary;
use crate::model::{Ctx, Side};
use crate::numeric::sample_points;

/// Points per work unit. Fixed so that results do not depend on the thread count.
pub const CHUNK: usize = 32;

pub const THREADS_ENV: &str = "LEGENDRE_DUAL_THREADS";

/// Command-line overrides of the scenario's settings.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    /// Threshold for every identity.
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub ids: Option<Vec<String>>,
    /// Worker thread cap; `None` reads `LEGENDRE_DUAL_THREADS`, then uses all cores.
    pub threads: Option<usize>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("unknown identity {0}")]
    UnknownId(String),
    #[error("invalid sampling box: {0}")]
    Sampling(String),
    #[error("cannot start worker threads: {0}")]
    Threads(String),
}

fn thread_cap(cfg: &RunConfig) -> Option<usize> {
    cfg.threads.or_else(|| std::env::var(THREADS_ENV).ok()?.trim().parse().ok()).filter(|&n| n > 0)
}

/// Pointwise outcome reduced over a sample sequence.
#[derive(Debug, Clone)]
struct Reduced {
    residual: f64,
    worst: Vec<f64>,
}

#[derive(Debug, Clone)]
enum Outcome {
    Skipped(String),
    Failed(String),
    Done(Reduced),
}

type PointResult = Result<Vec<f64>, EvalError>;

pub fn run_checks(sc: &Scenario, cfg: &RunConfig) -> Result<Report, RunError> {
    let selected = select(sc, cfg)?;
    let mut plan = sc.sampling.clone();
    if let Some(n) = cfg.samples {
        plan.count = n;
    }
    if let Some(s) = cfg.seed {
        plan.seed = s;
    }
    let points = |side: Side| sample_points(&plan.plan(side)).map_err(|e| RunError::Sampling(e.to_string()));
    let pts_e = points(Side::E)?;
    let pts_s = points(Side::Estar)?;

    let mut gate_ids: BTreeSet<&str> = BTreeSet::new();
    if !selected.is_empty() {
        gate_ids.insert("gla-antisymmetry");
        gate_ids.insert("closed-form-H");
    }
    for d in &selected {
        gate_ids.extend(d.gates.iter().copied());
    }
    let gates: Vec<_> = GATES.iter().filter(|g| gate_ids.contains(g.id)).collect();
    let gate_probes: BTreeSet<Probe> = gates.iter().map(|g| g.probe).collect();
    let id_probes: BTreeSet<Probe> = selected.iter().map(|d| d.probe).filter(|p| !gate_probes.contains(p)).collect();

    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = thread_cap(cfg) {
            b = b.num_threads(n);
        }
        b.build().map_err(|e| RunError::Threads(e.to_string()))?
    };
    let mut probes: BTreeMap<Probe, Vec<Outcome>> = BTreeMap::new();
    for batch in [gate_probes, id_probes] {
        probes.extend(pool.install(|| evaluate(sc, &batch, &pts_e, &pts_s)));
    }

    let gate_thr = sc.tolerances.gates.unwrap_or(GATE_THRESHOLD);
    let gate_results: Vec<GateResult> = gates
        .iter()
        .map(|g| {
            let (status, residual, worst_point, note) = judge(&probes[&g.probe][g.slot], gate_thr);
            GateResult { id: g.id.into(), description: g.description.into(), status, residual, threshold: gate_thr, worst_point, note }
        })
        .collect();
    let gate_status: BTreeMap<&str, Status> = gate_results.iter().map(|g| (g.id.as_str(), g.status)).collect();

    let by_construction = by_construction(sc);
    let mut identities = Vec::new();
    let mut footnotes = Vec::new();
    for d in &selected {
        let thr = cfg.tol.or_else(|| sc.tolerances.per_id.get(d.id).copied()).or(sc.tolerances.default).unwrap_or(d.threshold);
        let (status, residual, worst_point, mut note) = judge(&probes[&d.probe][d.slot], thr);
        let mut extra = Vec::new();
        if let Some(why) = by_construction.get(d.id) {
            extra.push(format!("holds by construction ({why})"));
        }
        let failed: Vec<&str> = d.gates.iter().copied().filter(|g| gate_status.get(g) == Some(&Status::Fail)).collect();
        if !failed.is_empty() && status != Status::Skip {
            extra.push(format!("gate not satisfied: {}; identity not implied", failed.join(", ")));
        }
        if !extra.is_empty() {
            note = Some(note.into_iter().chain(extra).collect::<Vec<_>>().join("; "));
        }
        if let (Some(text), true) = (d.footnote, status != Status::Skip) {
            footnotes.push(Footnote { id: d.id.into(), text: text.into() });
        }
        identities.push(IdentityResult {
            id: d.id.into(),
            equation: d.equation.into(),
            status,
            residual,
            threshold: thr,
            point_side: side_label(d.probe.points()).into(),
            worst_point,
            gates: d.gates.iter().map(|g| g.to_string()).collect(),
            note,
        });
    }

    let mut banners: Vec<String> = sc.warnings.iter().map(|w| format!("{}: {}", w.key, w.message)).collect();
    if let Some(Outcome::Done(r)) = probes.get(&Probe::Algebroid).map(|o| &o[1]) {
        let anti = gate_results.iter().find(|g| g.id == "gla-antisymmetry").and_then(|g| g.residual).unwrap_or(0.0);
        if r.residual > gate_thr || anti > gate_thr {
            banners.push(format!(
                "not a Lie algebroid: antisymmetry residual {}, anchor compatibility residual {}",
                super::report::sci(anti),
                super::report::sci(r.residual)
            ));
        }
    }

    Ok(Report {
        schema: SCHEMA.into(),
        engine_version: env!("CARGO_PKG_VERSION").into(),
        name: sc.name.clone(),
        sha256: sc.digest.clone(),
        samples: plan.count,
        seed: plan.seed,
        banners,
        constructions: constructions(sc),
        gates: gate_results,
        identities,
        footnotes,
    })
}

fn select(sc: &Scenario, cfg: &RunConfig) -> Result<Vec<&'static IdentityDef>, RunError> {
    match cfg.ids.as_ref().or(sc.ids.as_ref()) {
        None => Ok(IDENTITIES.iter().collect()),
        Some(ids) => {
            let wanted: BTreeSet<String> = ids.iter().map(|s| canonical_id(s)).collect();
            for w in &wanted {
                if identity(w).is_none() {
                    return Err(RunError::UnknownId(w.clone()));
                }
            }
            Ok(IDENTITIES.iter().filter(|d| wanted.contains(d.id)).collect())
        }
    }
}

fn side_label(s: Side) -> &'static str {
    match s {
        Side::E => "E",
        Side::Estar => "E*",
    }
}

fn evaluate(sc: &Scenario, probes: &BTreeSet<Probe>, pts_e: &[Vec<f64>], pts_s: &[Vec<f64>]) -> Vec<(Probe, Vec<Outcome>)> {
    let geo = &sc.geometry;
    let mut tasks = Vec::new();
    for &probe in probes {
        if probe.missing(geo).is_none() {
            let pts = match probe.points() {
                Side::E => pts_e,
                Side::Estar => pts_s,
            };
            tasks.extend(pts.chunks(CHUNK).enumerate().map(|(k, c)| (probe, k, c)));
        }
    }
    let results: Vec<Vec<PointResult>> = tasks
        .par_iter()
        .map(|&(probe, _, chunk)| {
            let cx = Ctx::new(geo);
            chunk.iter().map(|pt| probe.eval(&cx, pt)).collect()
        })
        .collect();
    let mut per_probe: BTreeMap<Probe, Vec<(usize, &Vec<PointResult>)>> = BTreeMap::new();
    for ((probe, k, _), r) in tasks.iter().zip(&results) {
        per_probe.entry(*probe).or_default().push((*k, r));
    }
    probes
        .iter()
        .map(|&probe| {
            let slots = slot_count(probe);
            if let Some(need) = probe.missing(geo) {
                return (probe, vec![Outcome::Skipped(format!("missing ingredient: {}", need.describe())); slots]);
            }
            let pts = match probe.points() {
                Side::E => pts_e,
                Side::Estar => pts_s,
            };
            let chunks = per_probe.remove(&probe).unwrap_or_default();
            let outcomes = (0..slots).map(|s| reduce(&chunks, pts, s)).collect();
            (probe, outcomes)
        })
        .collect()
}

fn slot_count(p: Probe) -> usize {
    match p {
        Probe::Algebroid | Probe::Semispray(_) | Probe::Omega(_) => 2,
        Probe::Morphism(_) | Probe::DLinear(_) => 4,
        _ => 1,
    }
}

/// Ordered max over points: the first maximal point wins ties, the first
/// error in sample order wins over everything.
fn reduce(chunks: &[(usize, &Vec<PointResult>)], pts: &[Vec<f64>], slot: usize) -> Outcome {
    let mut best: Option<(f64, usize)> = None;
    for (k, results) in chunks {
        for (j, r) in results.iter().enumerate() {
            let idx = k * CHUNK + j;
            let v = match r {
                Err(e) => return Outcome::Failed(format!("{e} at sample {idx} {:?}", pts[idx])),
                Ok(v) => v[slot],
            };
            if !v.is_finite() {
                return Outcome::Failed(format!("non-finite residual at sample {idx} {:?}", pts[idx]));
            }
            if best.map_or(true, |(b, _)| v > b) {
                best = Some((v, idx));
            }
        }
    }
    match best {
        None => Outcome::Done(Reduced { residual: 0.0, worst: Vec::new() }),
        Some((residual, idx)) => Outcome::Done(Reduced { residual, worst: pts[idx].clone() }),
    }
}

type Judged = (Status, Option<f64>, Option<Vec<f64>>, Option<String>);

fn judge(o: &Outcome, thr: f64) -> Judged {
    match o {
        Outcome::Skipped(why) => (Status::Skip, None, None, Some(why.clone())),
        Outcome::Failed(why) => (Status::Error, None, None, Some(why.clone())),
        Outcome::Done(r) => {
            let status = if r.residual <= thr { Status::Pass } else { Status::Fail };
            let worst = (!r.worst.is_empty()).then(|| r.worst.clone());
            (status, Some(r.residual), worst, None)
        }
    }
}

/// Identities that hold by construction because one side was derived from them.
fn by_construction(sc: &Scenario) -> BTreeMap<&'static str, &'static str> {
    let cx = Ctx::new(&sc.geometry);
    let mut out = BTreeMap::new();
    let derived = |p: Option<Provenance>| p == Some(Provenance::Derived);
    if derived(cx.gamma_provenance(Side::Estar)) {
        out.insert("ID-5.2", "Γ* derived");
    }
    if derived(cx.gamma_provenance(Side::E)) {
        out.insert("ID-5.3", "Γ derived");
    }
    if derived(cx.dlin_provenance(Side::Estar)) {
        for id in ["ID-6.3", "ID-6.5", "ID-6.8", "ID-6.10"] {
            out.insert(id, "D* derived");
        }
    }
    if derived(cx.dlin_provenance(Side::E)) {
        for id in ["ID-6.4", "ID-6.5", "ID-6.6", "ID-6.7"] {
            out.insert(id, "D derived");
        }
    }
    if derived(cx.spray_provenance(Side::Estar)) {
        out.insert("ID-7.5", "dual semispray derived");
    }
    if derived(cx.spray_provenance(Side::E)) {
        out.insert("ID-7.7", "semispray derived");
    }
    out
}

fn constructions(sc: &Scenario) -> Vec<Construction> {
    let geo = &sc.geometry;
    let cx = Ctx::new(geo);
    let mut out = Vec::new();
    let row = |object: &str, side: Side, provenance: &str, method: &str| Construction {
        object: object.into(),
        side: side_label(side).into(),
        provenance: provenance.into(),
        method: method.into(),
    };
    if let Some(pr) = &geo.pair {
        let (given, derived, gs, ds, how) = match pr.primary {
            Primary::Lagrangian => ("Lagrangian L", "Hamiltonian H", Side::E, Side::Estar, "p·y − L with y solving p = ∂L/∂y (Newton)"),
            Primary::Hamiltonian => ("Hamiltonian H", "Lagrangian L", Side::Estar, Side::E, "y·p − H with p solving y = ∂H/∂p (Newton)"),
        };
        out.push(row(given, gs, "given", "scenario expression"));
        out.push(row(derived, ds, "derived", how));
        if pr.lagrangian.is_some() && pr.hamiltonian.is_some() {
            out.push(row("closed-form Hamiltonian", Side::Estar, "given", "cross-checked by gate closed-form-H"));
        }
    }
    let prov = |p: Option<Provenance>, object: &str, side: Side, from: &str| match p {
        Some(Provenance::Given) => Some(row(object, side, "given", "scenario expressions")),
        Some(Provenance::Derived) => Some(row(object, side, "derived", from)),
        None => None,
    };
    out.extend(prov(cx.gamma_provenance(Side::E), "nonlinear connection Γ", Side::E, "−[ρH_i + Γ*H^{..}]∘φ_L"));
    out.extend(prov(cx.gamma_provenance(Side::Estar), "nonlinear connection Γ*", Side::Estar, "[ρL_i. − ΓL_..]∘φ_H"));
    out.extend(prov(cx.dlin_provenance(Side::E), "distinguished connection D", Side::E, "transport of D* through φ_L"));
    out.extend(prov(cx.dlin_provenance(Side::Estar), "distinguished connection D*", Side::Estar, "transport of D through φ_H"));
    if geo.dims.p == geo.dims.r {
        out.extend(prov(cx.spray_provenance(Side::E), "semispray coefficients G − F/4", Side::E, "semispray correspondence through φ_L"));
        out.extend(prov(cx.spray_provenance(Side::Estar), "semispray coefficients G* − F*/4", Side::Estar, "semispray correspondence through φ_H"));
        for (side, m, name) in [(Side::E, &geo.mech, "morphism g^a_b"), (Side::Estar, &geo.mech_star, "morphism g^{ab}")] {
            let given = m.as_ref().is_some_and(|m| !m.morph.is_empty());
            out.push(row(name, side, if given { "given" } else { "default" }, if given { "scenario expressions over chi" } else { "identity" }));
        }
    }
    out
}
