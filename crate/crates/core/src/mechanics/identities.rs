//! Pointwise residuals of the semispray and Poincaré–Cartan correspondences.

use super::{PoincareCartan, PoincareCartan2, Semispray};
use crate::algebroid::SectionField;
use crate::connection::identities::image_point;
use crate::error::EvalResult;
use crate::model::{split_point, Ctx, Side};
use crate::morphism::{natural_basis, pullback_one, pullback_two, push_at, OneForm, TwoForm};
use crate::numeric::Jet1;

/// Semispray gate at a source point: `‖push S − S^{other}‖` at the image.
pub fn semispray_gate(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<f64> {
    let (w, v) = push_at(cx, &Semispray(side), at)?;
    let t = Semispray(side.other()).eval(cx, &w)?;
    Ok(v.max_abs_diff(&t))
}

/// Semispray transfer identities at a point of `side`, horizontal then
/// vertical part.
///
/// At `w` on E*: `y^b g^a_b ∘φ_H = p_b g^{ab}` and
/// `2K_b = [2K^a L_{ab} − y^c g^a_c ρ^i_a L_{ib}]∘φ_H`.
/// At `u` on E: `p_b g^{ab} ∘φ_L = y^b g^a_b` and
/// `2K^b = [2K_a H^{ab} − p_c g^{ac} ρ^i_a H_i^b]∘φ_L`, with `K = G − ¼F`.
pub fn semispray_transfer(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<[f64; 2]> {
    cx.require_square()?;
    let m = cx.m();
    let (x, f) = split_point(at, m);
    let g = cx.map_point(side, x, f)?;
    let own = cx.spray_horizontal(side, x, f)?;
    let far = cx.spray_horizontal(side.other(), x, &g)?;
    let h = own.iter().zip(&far).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let k = cx.spray_term(side, x, f)?;
    let kf = cx.spray_term_from_other(side.other(), x, &g)?;
    let v = k.iter().zip(&kf).map(|(a, b)| 2.0 * (a - b).abs()).fold(0.0, f64::max);
    Ok([h, v])
}

/// `θ` pullback gate at a source point: over the natural basis,
/// `|θ^{other}(push X) − θ(X)|`.
pub fn theta_gate(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<f64> {
    let own = PoincareCartan(side);
    let far = PoincareCartan(side.other());
    let mut out: f64 = 0.0;
    for b in natural_basis(side, cx.p(), cx.r()) {
        let lhs = pullback_one(cx, &far, &b, at)?;
        let rhs = own.apply(cx, at, &b.eval(cx, at)?)?;
        out = out.max((lhs - rhs).abs());
    }
    Ok(out)
}

/// `θ` component transfer at a point of `side`: `θ^{other}_a∘φ = θ_a`.
pub fn theta_transfer(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<f64> {
    let w = image_point(cx, side, at)?;
    let own = PoincareCartan(side).components(cx, at)?;
    let far = PoincareCartan(side.other()).components(cx, &w)?;
    Ok(own.max_abs_diff(&far))
}

/// `ω` pullback gate at a source point: over natural basis pairs,
/// `|ω^{other}(push U, push V) − ω(U, V)|`.
pub fn omega_gate(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<f64> {
    let basis = natural_basis(side, cx.p(), cx.r());
    let own = PoincareCartan2(side);
    let far = PoincareCartan2(side.other());
    let mut out: f64 = 0.0;
    for (i, u) in basis.iter().enumerate() {
        for v in &basis[i + 1..] {
            let lhs = pullback_two(cx, &far, u, v, at)?;
            let rhs = own.apply(cx, u, v, at)?;
            out = out.max((lhs - rhs).abs());
        }
    }
    Ok(out)
}

/// The two `ω` component identities at a point of `side` (own point `o`,
/// image point `t`, `θ` the own form and `θ'` the other one):
///
/// `[ρ^i_a ∂_i θ'_b − ρ^j_b ∂_j θ'_a − L^c_{ab} θ'_c + C_{ad} ∂_{f_d} θ'_b − C_{bd} ∂_{f_d} θ'_a](t)
///  = [ρ^i_a ∂_i θ_b − ρ^j_b ∂_j θ_a − L^c_{ab} θ_c](o)`
/// and `D_{bc}(o) ∂_{f_c} θ'_a(t) = ∂_{f_b} θ_a(o)`,
/// where `D` is `L` on E or `H` on E*, `C_{ad} = ρ^i_a D_{id}(o)` and `∂_f`
/// differentiates along the fiber of the point it is taken at.
pub fn omega_transfer(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<[f64; 2]> {
    cx.require_square()?;
    let (m, r) = (cx.m(), cx.r());
    let (x, f) = split_point(at, m);
    let w = image_point(cx, side, at)?;
    let own: Vec<Jet1<f64>> = PoincareCartan(side).components(cx, &Jet1::seed(at))?.z;
    let far: Vec<Jet1<f64>> = PoincareCartan(side.other()).components(cx, &Jet1::seed(&w))?.z;
    let d = cx.derivs(side, x, f)?;
    let rho = cx.rho_h(x)?;
    let l = cx.lstruct_h(x)?;
    let rd = |a: usize, j: &Jet1<f64>| (0..m).map(|i| rho.at(i, a) * j.grad(i)).sum::<f64>();
    let c = |a: usize, dd: usize| (0..m).map(|i| rho.at(i, a) * d.mixed(i, dd)).sum::<f64>();
    let fib = |j: &Jet1<f64>, e: usize| j.grad(m + e);
    let mut s0: f64 = 0.0;
    let mut s1: f64 = 0.0;
    for a in 0..r {
        for b in 0..r {
            let mut lhs = rd(a, &far[b]) - rd(b, &far[a]);
            let mut rhs = rd(a, &own[b]) - rd(b, &own[a]);
            for k in 0..r {
                lhs -= l.get(k, a, b) * far[k].v;
                rhs -= l.get(k, a, b) * own[k].v;
                lhs += c(a, k) * fib(&far[b], k) - c(b, k) * fib(&far[a], k);
            }
            s0 = s0.max((lhs - rhs).abs());
            let lhs: f64 = (0..r).map(|k| d.ff(b, k) * fib(&far[a], k)).sum();
            s1 = s1.max((lhs - fib(&own[a], b)).abs());
        }
    }
    Ok([s0, s1])
}
