//! Pointwise residuals of the connection duality identities and of the two
//! gates they are conditioned on (horizontal-lift and covariant-derivative
//! correspondence under the Legendre maps).
//!
//! Every function takes the point on the side where the identity is stated
//! and returns `max |lhs − rhs|` over all free indices.

use super::dlinear::{hterm, vterm, Covariant};
use super::{adapted_frame, covariant_derivative, curvature, Adapted, AdaptedCoframe};
use crate::algebroid::SectionField;
use crate::error::EvalResult;
use crate::model::{split_point, Ctx, Side};
use crate::morphism::{pullback_one, push_at, transported, OneForm, Pushed};
use crate::numeric::Jet1;

/// The point `φ(at)` as a full `(x, fiber)` vector.
pub fn image_point(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<Vec<f64>> {
    let (x, f) = split_point(at, cx.m());
    let mut w = x.to_vec();
    w.extend(cx.map_point(side, x, f)?);
    Ok(w)
}

fn max_diff(a: impl IntoIterator<Item = f64>) -> f64 {
    a.into_iter().map(f64::abs).fold(0.0, f64::max)
}

/// Connection transfer. At `w` on E*: `Γ_{bα}(w)` against
/// `[ρ^i_α L_{ib} − Γ^a_α L_{ab}](φ_H(w))`. At `u` on E: `Γ^a_α(u)` against
/// `−[ρ^i_α H_i^a + Γ_{bα} H^{ba}](φ_L(u))`.
pub fn connection_transfer(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<f64> {
    let (x, f) = split_point(at, cx.m());
    let g = cx.map_point(side, x, f)?;
    let (own, other) = match side {
        Side::Estar => (cx.gamma_star(x, f)?, cx.gamma_star_from_e(x, &g)?),
        Side::E => (cx.gamma(x, f)?, cx.gamma_from_star(x, &g)?),
    };
    Ok(own.re().max_abs_diff(&other.re()))
}

/// Anchor term transfer at `w`: `[ρ^i_α L_{ia}](φ_H(w)) + ρ^i_α H_i^b H̃_{ba}(w)`.
pub fn anchor_term(cx: &Ctx, w: &[f64]) -> EvalResult<f64> {
    let (m, p, r) = (cx.m(), cx.p(), cx.r());
    let (x, q) = split_point(w, m);
    let y = cx.fiber_y(x, q)?;
    let l = cx.lag(x, &y)?;
    let h = cx.ham(x, q)?;
    let ht = h.ff_matrix(r).invert()?;
    let rho = cx.rho_h(x)?;
    let mut out: f64 = 0.0;
    for al in 0..p {
        for a in 0..r {
            let mut v = 0.0;
            for i in 0..m {
                v += rho.at(i, al) * l.mixed(i, a);
                for b in 0..r {
                    v += rho.at(i, al) * h.mixed(i, b) * ht.at(b, a);
                }
            }
            out = out.max(v.abs());
        }
    }
    Ok(out)
}

/// Curvature transfer. At `w`: `R_{bαβ}(w)` against `R^a_{αβ} L_{ab}` at
/// `φ_H(w)`. At `u`: `R^a_{αβ}(u)` against `R_{bαβ} H^{ba}` at `φ_L(u)`.
pub fn curvature_transfer(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<f64> {
    let (p, r) = (cx.p(), cx.r());
    let other = image_point(cx, side, at)?;
    let own = curvature(cx, side, at)?;
    let far = curvature(cx, side.other(), &other)?;
    let (x, f) = split_point(&other, cx.m());
    let hess = cx.derivs(side.other(), x, f)?;
    let mut out: f64 = 0.0;
    for al in 0..p {
        for be in 0..p {
            for b in 0..r {
                let t: f64 = (0..r).map(|a| far[al][be][a] * hess.ff(a, b)).sum();
                out = out.max((own[al][be][b] - t).abs());
            }
        }
    }
    Ok(out)
}

/// Fiber derivatives of the connections, at `w` on E*:
/// `(∂_{y^b}Γ^a_α L_{ac})∘φ_H = ρ^i_α ∂_i ℓ_{bc} + Γ_{aα} ∂_{p_a} ℓ_{bc} − ℓ_{ba} ∂_{p_a} Γ_{cα}`,
/// and at `u` on E:
/// `−(∂_{p_a}Γ_{bα} H^{bc})∘φ_L = k^{ab} ∂_{y^b} Γ^c_α + ρ^i_α ∂_i k^{ac} − Γ^b_α ∂_{y^b} k^{ac}`.
pub fn connection_fiber_derivatives(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<f64> {
    let (m, p, r) = (cx.m(), cx.p(), cx.r());
    let t = transported(cx, side, at)?;
    let seeded = Jet1::seed(at);
    let (xj, fj) = split_point(&seeded, m);
    let own = cx.gamma_on(side, xj, fj)?;
    let other_pt = image_point(cx, side, at)?;
    let os = Jet1::seed(&other_pt);
    let (ox, of) = split_point(&os, m);
    let far = cx.gamma_on(side.other(), ox, of)?;
    let (x, f) = split_point(&other_pt, m);
    let hess = cx.derivs(side.other(), x, f)?;
    let rho = cx.rho_h(&at[..m])?;
    let fib = |j: &Jet1<f64>, e: usize| j.grad(m + e);
    let rho_d = |j: &Jet1<f64>, al: usize| (0..m).map(|i| rho.at(i, al) * j.grad(i)).sum::<f64>();
    let mut out: f64 = 0.0;
    for al in 0..p {
        for b in 0..r {
            for c in 0..r {
                let (lhs, rhs) = match side {
                    Side::Estar => {
                        let lhs: f64 = (0..r).map(|a| fib(&far.at(a, al), b) * hess.ff(a, c)).sum();
                        let mut rhs = rho_d(&t.l[b][c], al);
                        for a in 0..r {
                            rhs += own.at(a, al).v * fib(&t.l[b][c], a) - t.l[b][a].v * fib(&own.at(c, al), a);
                        }
                        (lhs, rhs)
                    }
                    Side::E => {
                        // free indices (a, c) are (b, c) here
                        let a = b;
                        let lhs: f64 = -(0..r).map(|bb| fib(&far.at(bb, al), a) * hess.ff(bb, c)).sum::<f64>();
                        let mut rhs = rho_d(&t.l[a][c], al);
                        for bb in 0..r {
                            rhs += t.l[a][bb].v * fib(&own.at(c, al), bb) - own.at(bb, al).v * fib(&t.l[a][c], bb);
                        }
                        (lhs, rhs)
                    }
                };
                out = out.max((lhs - rhs).abs());
            }
        }
    }
    Ok(out)
}

/// Coframe correspondence on the adapted frame of `side`, at a point of
/// `side`: from E, `φ_L*(δp̃_a) = L_{ab} δỹ^b`; from E*,
/// `φ_H*(δỹ^a) = H^{ab} δp̃_b`.
pub fn coframe_pullback(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<f64> {
    let r = cx.r();
    let (x, f) = split_point(at, cx.m());
    let hess = cx.derivs(side, x, f)?;
    let mut out: f64 = 0.0;
    for xs in adapted_frame(side, cx.p(), r) {
        let v = xs.eval(cx, at)?;
        let own: Vec<f64> = (0..r).map(|b| AdaptedCoframe(side, b).apply(cx, at, &v)).collect::<EvalResult<_>>()?;
        for a in 0..r {
            let lhs = pullback_one(cx, &AdaptedCoframe(side.other(), a), &xs, at)?;
            let rhs: f64 = (0..r).map(|b| hess.ff(a, b) * own[b]).sum();
            out = out.max((lhs - rhs).abs());
        }
    }
    Ok(out)
}

/// Horizontal-lift gate at a source point: `‖push δ̃_α − δ̃^{other}_α‖` at
/// the image point.
pub fn horizontal_lift_gate(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<f64> {
    let mut out: f64 = 0.0;
    for al in 0..cx.p() {
        let (w, v) = push_at(cx, &Adapted::Horizontal(side, al), at)?;
        let t = Adapted::Horizontal(side.other(), al).eval(cx, &w)?;
        out = out.max(v.max_abs_diff(&t));
    }
    Ok(out)
}

/// Covariant-derivative gate at a source point: over adapted frame pairs,
/// `‖push(D_X T) − D^{other}_{push X}(push T)‖` at the image point.
pub fn covariant_gate(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<f64> {
    let frame = adapted_frame(side, cx.p(), cx.r());
    let mut out: f64 = 0.0;
    for xs in &frame {
        for ts in &frame {
            let (w, lhs) = push_at(cx, &Covariant { x: xs, t: ts }, at)?;
            let rhs = covariant_derivative(cx, &Pushed(xs), &Pushed(ts), &w)?;
            out = out.max(lhs.max_abs_diff(&rhs));
        }
    }
    Ok(out)
}

/// The four distinguished-connection transfer identities at a point of
/// `side`, in order (horizontal-horizontal, horizontal-vertical,
/// vertical-horizontal, vertical-vertical).
///
/// At `w` on E*, with `u = φ_H(w)`:
/// `H^α_{βγ}(u) = H*^α_{βγ}(w)`, `H^a_{bγ} L_{ac}(u) = T_{E*}(b,c,γ)(w)`,
/// `V^α_{βd}(u) = V*^{αc}_β(w) L_{cd}(u)`, `V^a_{bc} L_{ad}(u) = W_{E*}(b,c,d)(w)`.
/// At `u` on E, with `w = φ_L(u)`:
/// `H*^α_{βγ}(w) = H^α_{βγ}(u)`, `H*^a_{bγ} H^{bc}(w) = T_E(a,c,γ)(u)`,
/// `V*^{αc}_β(w) = V^α_{βd}(u) H^{cd}(w)`, `V*^{bc}_a H^{ad}(w) = W_E(b,c,d)(u)`.
pub fn dlinear_transfer(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<[f64; 4]> {
    let (m, p, r) = (cx.m(), cx.p(), cx.r());
    let (x, f) = split_point(at, m);
    let other = image_point(cx, side, at)?;
    let g = &other[m..];
    let own = cx.dlin_on(side, x, f)?;
    let far = cx.dlin_on(side.other(), x, g)?;
    let ht = hterm(cx, side, at, &own)?;
    let vt = vterm(cx, side, at, &own)?;
    // Hessian of the far side at the far point
    let fh = cx.derivs(side.other(), x, g)?;
    let s0 = max_diff(own.hc.data.iter().zip(&far.hc.data).map(|(a, b)| a - b));
    let mut s1: f64 = 0.0;
    let mut s2: f64 = 0.0;
    let mut s3: f64 = 0.0;
    for i in 0..r {
        for j in 0..r {
            for ga in 0..p {
                let lhs: f64 = match side {
                    Side::Estar => (0..r).map(|a| far.hv.get(a, i, ga) * fh.ff(a, j)).sum(),
                    Side::E => (0..r).map(|b| far.hv.get(i, b, ga) * fh.ff(b, j)).sum(),
                };
                s1 = s1.max((lhs - ht.get(i, j, ga)).abs());
            }
            for k in 0..r {
                let lhs: f64 = match side {
                    Side::Estar => (0..r).map(|a| far.vv.get(a, i, j) * fh.ff(a, k)).sum(),
                    Side::E => (0..r).map(|a| far.vv.get(i, j, a) * fh.ff(a, k)).sum(),
                };
                s3 = s3.max((lhs - vt.get(i, j, k)).abs());
            }
        }
    }
    for al in 0..p {
        for be in 0..p {
            for c in 0..r {
                let (lhs, rhs) = match side {
                    Side::Estar => {
                        let rhs: f64 = (0..r).map(|e| own.vc.get(al, e, be) * fh.ff(e, c)).sum();
                        (far.vc.get(al, be, c), rhs)
                    }
                    Side::E => {
                        let rhs: f64 = (0..r).map(|d| own.vc.get(al, be, d) * fh.ff(c, d)).sum();
                        (far.vc.get(al, c, be), rhs)
                    }
                };
                s2 = s2.max((lhs - rhs).abs());
            }
        }
    }
    Ok([s0, s1, s2, s3])
}
