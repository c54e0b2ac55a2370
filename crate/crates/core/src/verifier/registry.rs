//! The identity registry: every checked identity and gate, the probe that
//! evaluates it at a sample point, and what it needs from a scenario.

use crate::connection::identities as conn;
use crate::error::{EvalError, EvalResult};
use crate::mechanics::identities as mech;
use crate::model::{split_point, Ctx, Geometry, Side};
use crate::morphism::{morphism_identities, morphism_residual, MorphismSide};

/// Scenario ingredients a probe depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Need {
    Pair,
    /// A Lagrangian and a closed-form Hamiltonian side by side.
    ClosedForm,
    Connection,
    DLinear,
    Spray,
    /// `p = r`.
    Square,
}

impl Need {
    pub fn met(self, g: &Geometry) -> bool {
        let spray = |m: &Option<crate::model::MechanicsData>| m.as_ref().is_some_and(|m| !m.spray.is_empty());
        match self {
            Need::Pair => g.pair.is_some(),
            Need::ClosedForm => g.pair.as_ref().is_some_and(|p| p.lagrangian.is_some() && p.hamiltonian.is_some()),
            Need::Connection => g.conn.is_some() || g.conn_star.is_some(),
            Need::DLinear => g.dlin.is_some() || g.dlin_star.is_some(),
            Need::Spray => spray(&g.mech) || spray(&g.mech_star),
            Need::Square => g.dims.p == g.dims.r,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Need::Pair => "Lagrangian or Hamiltonian",
            Need::ClosedForm => "both a Lagrangian and a closed-form Hamiltonian",
            Need::Connection => "nonlinear connection on E or E*",
            Need::DLinear => "distinguished linear connection on E or E*",
            Need::Spray => "semispray coefficients on E or E*",
            Need::Square => "p = r",
        }
    }
}

/// A pointwise evaluator; one probe may feed several identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Probe {
    /// `[antisymmetry, anchor compatibility]` at the base point.
    Algebroid,
    CompositeAnchor,
    RoundTrip(SideKey),
    ClosedFormH,
    /// Bracket-preservation gate of the tangent map out of the given side.
    MorphismGate(SideKey),
    /// The four morphism identities stated at the given (target) side.
    Morphism(SideKey),
    Connection(SideKey),
    HessianDuality,
    AnchorTerm,
    Curvature(SideKey),
    FiberDerivatives(SideKey),
    Coframe(SideKey),
    HorizontalLift(SideKey),
    Covariant(SideKey),
    DLinear(SideKey),
    SemisprayGate(SideKey),
    Semispray(SideKey),
    ThetaGate(SideKey),
    Theta(SideKey),
    OmegaGate(SideKey),
    Omega(SideKey),
}

/// `Side` with an ordering, for use as a probe key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SideKey {
    E,
    Estar,
}

impl SideKey {
    pub fn side(self) -> Side {
        match self {
            SideKey::E => Side::E,
            SideKey::Estar => Side::Estar,
        }
    }
}

use SideKey::{Estar as S, E};

impl Probe {
    /// The sample sequence the probe is evaluated on.
    pub fn points(self) -> Side {
        use Probe::*;
        match self {
            Algebroid | CompositeAnchor => Side::E,
            ClosedFormH | HessianDuality | AnchorTerm => Side::Estar,
            MorphismGate(s) => s.side().other(),
            RoundTrip(s) | Morphism(s) | Connection(s) | Curvature(s) | FiberDerivatives(s) | Coframe(s)
            | HorizontalLift(s) | Covariant(s) | DLinear(s) | SemisprayGate(s) | Semispray(s) | ThetaGate(s)
            | Theta(s) | OmegaGate(s) | Omega(s) => s.side(),
        }
    }

    pub fn needs(self) -> &'static [Need] {
        use Probe::*;
        match self {
            Algebroid | CompositeAnchor => &[],
            ClosedFormH => &[Need::ClosedForm],
            RoundTrip(_) | MorphismGate(_) | Morphism(_) | HessianDuality | AnchorTerm => &[Need::Pair],
            Connection(_) | Curvature(_) | FiberDerivatives(_) | Coframe(_) | HorizontalLift(_) => {
                &[Need::Pair, Need::Connection]
            }
            Covariant(_) | DLinear(_) => &[Need::Pair, Need::Connection, Need::DLinear],
            SemisprayGate(_) | Semispray(_) => &[Need::Pair, Need::Square, Need::Spray],
            ThetaGate(_) | Theta(_) | OmegaGate(_) | Omega(_) => &[Need::Pair, Need::Square],
        }
    }

    /// First unmet ingredient, if any.
    pub fn missing(self, g: &Geometry) -> Option<Need> {
        self.needs().iter().copied().find(|n| !n.met(g))
    }

    pub fn eval(self, cx: &Ctx, at: &[f64]) -> EvalResult<Vec<f64>> {
        use Probe::*;
        let (x, f) = split_point(at, cx.m());
        let alg = &cx.geo.alg;
        let one = |v: f64| Ok(vec![v]);
        match self {
            Algebroid => Ok(vec![alg.antisymmetry_residual(x)?, alg.anchor_bracket_residual(x)?]),
            CompositeAnchor => one(alg.composite_anchor_residual(x)?),
            RoundTrip(E) => one(cx.pair()?.round_trip_e(x, f, &cx.warm)?),
            RoundTrip(S) => one(cx.pair()?.round_trip_estar(x, f, &cx.warm)?),
            ClosedFormH => {
                let pr = cx.pair()?;
                let closed = pr.closed_form_h(x, f)?;
                let computed = pr.hamiltonian(x, f, &cx.warm)?;
                if !closed.is_finite() {
                    return Err(EvalError::domain("closed-form Hamiltonian is not finite"));
                }
                one((closed - computed).abs())
            }
            MorphismGate(s) => one(morphism_residual(cx, MorphismSide::from_source(s.side()), at)?),
            Morphism(s) => Ok(morphism_identities(cx, s.side(), at)?.to_vec()),
            Connection(s) => one(conn::connection_transfer(cx, s.side(), at)?),
            HessianDuality => one(cx.pair()?.hessian_duality(x, f, &cx.warm)?),
            AnchorTerm => one(conn::anchor_term(cx, at)?),
            Curvature(s) => one(conn::curvature_transfer(cx, s.side(), at)?),
            FiberDerivatives(s) => one(conn::connection_fiber_derivatives(cx, s.side(), at)?),
            Coframe(s) => one(conn::coframe_pullback(cx, s.side(), at)?),
            HorizontalLift(s) => one(conn::horizontal_lift_gate(cx, s.side(), at)?),
            Covariant(s) => one(conn::covariant_gate(cx, s.side(), at)?),
            DLinear(s) => Ok(conn::dlinear_transfer(cx, s.side(), at)?.to_vec()),
            SemisprayGate(s) => one(mech::semispray_gate(cx, s.side(), at)?),
            Semispray(s) => Ok(mech::semispray_transfer(cx, s.side(), at)?.to_vec()),
            ThetaGate(s) => one(mech::theta_gate(cx, s.side(), at)?),
            Theta(s) => one(mech::theta_transfer(cx, s.side(), at)?),
            OmegaGate(s) => one(mech::omega_gate(cx, s.side(), at)?),
            Omega(s) => Ok(mech::omega_transfer(cx, s.side(), at)?.to_vec()),
        }
    }
}

/// A gate: a hypothesis under which a group of identities is implied.
#[derive(Debug, Clone, Copy)]
pub struct GateDef {
    pub id: &'static str,
    pub description: &'static str,
    pub probe: Probe,
    pub slot: usize,
}

pub const GATE_THRESHOLD: f64 = 1e-8;

pub const GATES: &[GateDef] = &[
    GateDef { id: "gla-antisymmetry", description: "L^γ_{αβ} + L^γ_{βα} = 0", probe: Probe::Algebroid, slot: 0 },
    GateDef { id: "closed-form-H", description: "supplied H equals the Legendre transform of L", probe: Probe::ClosedFormH, slot: 0 },
    GateDef { id: "morphism-L", description: "Tφ_L preserves prolongation brackets", probe: Probe::MorphismGate(E), slot: 0 },
    GateDef { id: "morphism-H", description: "Tφ_H preserves prolongation brackets", probe: Probe::MorphismGate(S), slot: 0 },
    GateDef { id: "hl-L", description: "Tφ_L maps δ̃_α to δ̃*_α", probe: Probe::HorizontalLift(E), slot: 0 },
    GateDef { id: "hl-H", description: "Tφ_H maps δ̃*_α to δ̃_α", probe: Probe::HorizontalLift(S), slot: 0 },
    GateDef { id: "dconn-L", description: "Tφ_L intertwines D and D*", probe: Probe::Covariant(E), slot: 0 },
    GateDef { id: "dconn-H", description: "Tφ_H intertwines D* and D", probe: Probe::Covariant(S), slot: 0 },
    GateDef { id: "semispray-L", description: "Tφ_L maps S to S*", probe: Probe::SemisprayGate(E), slot: 0 },
    GateDef { id: "semispray-H", description: "Tφ_H maps S* to S", probe: Probe::SemisprayGate(S), slot: 0 },
    GateDef { id: "theta-L", description: "φ_L pulls θ_H back to θ_L", probe: Probe::ThetaGate(E), slot: 0 },
    GateDef { id: "theta-H", description: "φ_H pulls θ_L back to θ_H", probe: Probe::ThetaGate(S), slot: 0 },
    GateDef { id: "omega-L", description: "φ_L pulls ω_H back to ω_L", probe: Probe::OmegaGate(E), slot: 0 },
    GateDef { id: "omega-H", description: "φ_H pulls ω_L back to ω_H", probe: Probe::OmegaGate(S), slot: 0 },
];

pub fn gate(id: &str) -> Option<&'static GateDef> {
    GATES.iter().find(|g| g.id == id)
}

#[derive(Debug, Clone, Copy)]
pub struct IdentityDef {
    pub id: &'static str,
    pub equation: &'static str,
    pub probe: Probe,
    pub slot: usize,
    pub gates: &'static [&'static str],
    pub threshold: f64,
    /// The form actually checked, where it differs from the naive reading.
    pub footnote: Option<&'static str>,
}

const DIRECT: f64 = 1e-8;
const COMPOSED: f64 = 1e-6;

const HL: &[&str] = &["morphism-L", "morphism-H", "hl-L", "hl-H"];
const HL_D: &[&str] = &["morphism-L", "morphism-H", "hl-L", "hl-H", "dconn-L"];
const HL_DH: &[&str] = &["morphism-L", "morphism-H", "hl-L", "hl-H", "dconn-H"];

macro_rules! ids {
    ($( $id:literal, $eq:literal, $probe:expr, $slot:literal, $gates:expr, $thr:expr, $note:expr; )*) => {
        &[$( IdentityDef { id: $id, equation: $eq, probe: $probe, slot: $slot, gates: $gates, threshold: $thr, footnote: $note } ),*]
    };
}

pub const IDENTITIES: &[IdentityDef] = ids![
    "ID-2.4", "Th∘ρ evaluated at h(x) equals θ∘h", Probe::CompositeAnchor, 0, &[], DIRECT, None;
    "ID-2.5", "L^γ_{αβ}ρ^k_γ = ρ_α(ρ^k_β) − ρ_β(ρ^k_α) at h(x)", Probe::Algebroid, 1, &[], DIRECT, None;
    "ID-3.6", "φ_H∘φ_L = id on E", Probe::RoundTrip(E), 0, &[], 1e-9, None;
    "ID-3.7", "φ_L∘φ_H = id on E*", Probe::RoundTrip(S), 0, &[], 1e-9, None;
    "ID-4.8", "structure functions preserved by Tφ_L", Probe::Morphism(S), 0, &["morphism-L"], COMPOSED,
        Some("Holds identically: structure functions are pulled back along the identity on the base.");
    "ID-4.9", "Tφ_L on [∂̃_α, ∂̃_β], ∂̇̃^b component", Probe::Morphism(S), 1, &["morphism-L"], COMPOSED, None;
    "ID-4.10", "Tφ_L on [∂̃_α, ∂̇̃_a]", Probe::Morphism(S), 2, &["morphism-L"], COMPOSED,
        Some("Middle coefficient is A_αc = (ρ^i_α L_ic)∘φ_H.");
    "ID-4.11", "Tφ_L on [∂̇̃_a, ∂̇̃_b]", Probe::Morphism(S), 3, &["morphism-L"], COMPOSED, None;
    "ID-4.12", "structure functions preserved by Tφ_H", Probe::Morphism(E), 0, &["morphism-H"], COMPOSED, None;
    "ID-4.13", "Tφ_H on [∂̃*_α, ∂̃*_β], ∂̇̃_b component", Probe::Morphism(E), 1, &["morphism-H"], COMPOSED,
        Some("Right side composed once with φ_L.");
    "ID-4.14", "Tφ_H on [∂̃*_α, ∂̇̃^a]", Probe::Morphism(E), 2, &["morphism-H"], COMPOSED, None;
    "ID-4.15", "Tφ_H on [∂̇̃^a, ∂̇̃^b]", Probe::Morphism(E), 3, &["morphism-H"], COMPOSED, None;
    "ID-5.2", "Γ_{bα} = [ρ^i_α L_ib − Γ^a_α L_ab]∘φ_H", Probe::Connection(S), 0, HL, DIRECT, None;
    "ID-5.3", "Γ^a_α = −[ρ^i_α H_i^a + Γ_{bα} H^{ba}]∘φ_L", Probe::Connection(E), 0, HL, DIRECT, None;
    "ID-5.4", "inverse of H^{ab} equals L_ab∘φ_H", Probe::HessianDuality, 0, &[], DIRECT, None;
    "ID-5.5", "(ρ^i_α L_ia)∘φ_H + ρ^i_α H_i^b H̃_ba = 0", Probe::AnchorTerm, 0, &[], DIRECT, None;
    "ID-5.7", "R_{bαβ} = (R^a_{αβ} L_ab)∘φ_H", Probe::Curvature(S), 0, HL, COMPOSED, None;
    "ID-5.8", "R^a_{αβ} = (R_{bαβ} H^{ba})∘φ_L", Probe::Curvature(E), 0, HL, COMPOSED, None;
    "ID-5.9", "fiber derivatives of Γ through φ_H", Probe::FiberDerivatives(S), 0, HL, COMPOSED,
        Some("Checked as (∂_{y^b}Γ^a_α L_ac)∘φ_H = ρ^i_α∂_iℓ_bc + Γ_aα∂_{p_a}ℓ_bc − ℓ_ba∂_{p_a}Γ_cα.");
    "ID-5.10", "fiber derivatives of Γ* through φ_L", Probe::FiberDerivatives(E), 0, HL, COMPOSED,
        Some("Checked as −(∂_{p_a}Γ_bα H^{bc})∘φ_L = k^{ab}∂_{y^b}Γ^c_α + ρ^i_α∂_i k^{ac} − Γ^b_α∂_{y^b}k^{ac}.");
    "ID-5.12", "φ_L pulls δp̃_a back to L_ab δỹ^b", Probe::Coframe(E), 0, &["hl-L"], COMPOSED, None;
    "ID-5.12'", "φ_H pulls δỹ^a back to H^{ab} δp̃_b", Probe::Coframe(S), 0, &["hl-H"], COMPOSED, None;
    "ID-6.3", "H*^α_{βγ} = H^α_{βγ}∘φ_H", Probe::DLinear(S), 0, HL_D, COMPOSED, None;
    "ID-6.4", "H*^a_{bγ} from H^a_{bγ} through φ_H", Probe::DLinear(S), 1, HL_D, COMPOSED,
        Some("Checked as (H^a_{bγ}L_ac)∘φ_H = ρ^k_γ∂_kℓ_bc + Γ_eγ∂_{p_e}ℓ_bc + ℓ_ba H*^a_{cγ}.");
    "ID-6.5", "V^α_{βd}∘φ_H = V*^{αc}_β ℓ_cd", Probe::DLinear(S), 2, HL_D, COMPOSED, None;
    "ID-6.6", "V*^{bc}_a from V^a_{bc} through φ_H", Probe::DLinear(S), 3, HL_D, COMPOSED,
        Some("Checked as (V^a_{bc}L_ad)∘φ_H = ℓ_ce∂_{p_e}ℓ_bd + ℓ_ce V*^{fe}_d ℓ_bf.");
    "ID-6.7", "H^α_{βγ} = H*^α_{βγ}∘φ_L", Probe::DLinear(E), 0, HL_DH, COMPOSED, None;
    "ID-6.8", "H^a_{bγ} from H*^a_{bγ} through φ_L", Probe::DLinear(E), 1, HL_DH, COMPOSED,
        Some("Checked as (H*^a_{bγ}H^{bc})∘φ_L = ρ^k_γ∂_k k^{ac} − Γ^b_γ∂_{y^b}k^{ac} + k^{ab}H^c_{bγ}.");
    "ID-6.9", "V*^{αc}_β∘φ_L = V^α_{βd} k^{cd}", Probe::DLinear(E), 2, HL_DH, COMPOSED, None;
    "ID-6.10", "V^a_{bc} from V*^{bc}_a through φ_L", Probe::DLinear(E), 3, HL_DH, COMPOSED,
        Some("Checked as (V*^{bc}_a H^{ad})∘φ_L = k^{ce}∂_{y^e}k^{bd} + k^{ce}V^d_{fe}k^{bf}.");
    "ID-7.4", "(y^b g^a_b)∘φ_H = p_b g^{ab}", Probe::Semispray(S), 0, &["semispray-L"], COMPOSED, None;
    "ID-7.5", "2K_b = [2K^a L_ab − y^c g^a_c ρ^i_a L_ib]∘φ_H, K = G − F/4", Probe::Semispray(S), 1, &["semispray-L"], COMPOSED, None;
    "ID-7.6", "(p_b g^{ab})∘φ_L = y^b g^a_b", Probe::Semispray(E), 0, &["semispray-H"], COMPOSED,
        Some("Horizontal part of S* taken as p_b g^{ab}.");
    "ID-7.7", "2K^b = [2K_a H^{ab} − p_c g^{ac} ρ^i_a H_i^b]∘φ_L, K = G − F/4", Probe::Semispray(E), 1, &["semispray-H"], COMPOSED, None;
    "ID-8.3", "θ_H,a∘φ_L = θ_L,a", Probe::Theta(E), 0, &["theta-L"], COMPOSED, None;
    "ID-8.3'", "θ_L,a∘φ_H = θ_H,a", Probe::Theta(S), 0, &["theta-H"], COMPOSED, None;
    "ID-8.6", "ω_L(∂̃_a, ∂̃_b) = ω_H(Tφ_L ∂̃_a, Tφ_L ∂̃_b)∘φ_L", Probe::Omega(E), 0, &["omega-L"], COMPOSED,
        Some("Component form; the fiber-derivative terms C_ad ∂θ_H/∂p_d enter with a plus sign.");
    "ID-8.7", "L_bc ∂_{p_c}θ_H,a∘φ_L = ∂_{y^b}θ_L,a", Probe::Omega(E), 1, &["omega-L"], COMPOSED, None;
    "ID-8.8", "ω_H(∂̃*_a, ∂̃*_b) = ω_L(Tφ_H ∂̃*_a, Tφ_H ∂̃*_b)∘φ_H", Probe::Omega(S), 0, &["omega-H"], COMPOSED,
        Some("Component form; the fiber-derivative terms C_ad ∂θ_L/∂y^d enter with a plus sign.");
    "ID-8.9", "H^{bc} ∂_{y^c}θ_L,a∘φ_H = ∂_{p_b}θ_H,a", Probe::Omega(S), 1, &["omega-H"], COMPOSED, None;
];

pub fn identity(id: &str) -> Option<&'static IdentityDef> {
    IDENTITIES.iter().find(|d| d.id == id)
}
