//! Distinguished linear connections and the covariant derivative they induce.
//!
//! A side the scenario leaves undefined is solved for from the duality
//! relations with the other side:
//! `H*^α_{βγ} = H^α_{βγ}∘φ_H`, `V*^{αc}_β = V^α_{βd} H^{dc}`,
//! `H*^a_{bγ} = T^{ac}_γ L_{cb}`, `V*^{bc}_a = W^{bcd} L_{da}`,
//! where `T` and `W` are the transport tensors of [`hterm`] and [`vterm`]
//! evaluated at `φ_H(w)`; symmetrically for the unstarred side.

use super::{from_adapted, to_adapted, Provenance};
use crate::algebroid::{anchor_direction, directional, SecVal, SectionField};
use crate::error::{EvalError, EvalResult};
use crate::model::{env_side, split_point, Ctx, DLinearData, DLinearValue, Side, Tensor3};
use crate::morphism::transported;
use crate::numeric::{Jet1, Scalar};

impl<S: Scalar> DLinearValue<S> {
    pub fn eval(d: &DLinearData, side: Side, x: &[S], f: &[S]) -> EvalResult<Self> {
        let env = env_side(side, x, f);
        Ok(DLinearValue {
            hc: Tensor3::eval(&d.hc, &env)?,
            hv: Tensor3::eval(&d.hv, &env)?,
            vc: Tensor3::eval(&d.vc, &env)?,
            vv: Tensor3::eval(&d.vv, &env)?,
        })
    }

    /// All-zero components with the layout of `side`.
    pub fn zeros(side: Side, p: usize, r: usize) -> Self {
        let vc = match side {
            Side::E => [p, p, r],
            Side::Estar => [p, r, p],
        };
        DLinearValue {
            hc: Tensor3::zeros([p, p, p]),
            hv: Tensor3::zeros([r, r, p]),
            vc: Tensor3::zeros(vc),
            vv: Tensor3::zeros([r, r, r]),
        }
    }
}

impl<'a> Ctx<'a> {
    pub fn dlin_provenance(&self, side: Side) -> Option<Provenance> {
        let (own, other) = match side {
            Side::E => (&self.geo.dlin, &self.geo.dlin_star),
            Side::Estar => (&self.geo.dlin_star, &self.geo.dlin),
        };
        match (own.is_some(), other.is_some()) {
            (true, _) => Some(Provenance::Given),
            (false, true) => Some(Provenance::Derived),
            _ => None,
        }
    }

    /// Components of the distinguished linear connection of `side` at `(x, f)`.
    pub fn dlin_on<S: Scalar>(&self, side: Side, x: &[S], f: &[S]) -> EvalResult<DLinearValue<S>> {
        let (own, other) = match side {
            Side::E => (&self.geo.dlin, &self.geo.dlin_star),
            Side::Estar => (&self.geo.dlin_star, &self.geo.dlin),
        };
        if let Some(d) = own {
            return DLinearValue::eval(d, side, x, f);
        }
        let d = other.as_ref().ok_or_else(|| EvalError::Missing("distinguished linear connection".into()))?;
        let (p, r) = (self.p(), self.r());
        let g = self.map_point(side, x, f)?;
        let mut at: Vec<S> = x.to_vec();
        at.extend(g.iter().cloned());
        let src = DLinearValue::eval(d, side.other(), x, &g)?;
        let ht = hterm(self, side.other(), &at, &src)?;
        let vt = vterm(self, side.other(), &at, &src)?;
        let own_hess = self.derivs(side, x, f)?;
        let mut out = DLinearValue::zeros(side, p, r);
        out.hc = src.hc.clone();
        match side {
            Side::Estar => {
                // own_hess = H^{..}(w); L(u) is the other side's Hessian.
                let other_hess = self.derivs(Side::E, x, &g)?;
                for al in 0..p {
                    for be in 0..p {
                        for c in 0..r {
                            let v = (0..r).fold(S::zero(), |acc, dd| acc + src.vc.get(al, be, dd) * own_hess.ff(dd, c));
                            out.vc.set(al, c, be, v);
                        }
                    }
                }
                for a in 0..r {
                    for b in 0..r {
                        for ga in 0..p {
                            let v = (0..r).fold(S::zero(), |acc, c| acc + ht.get(a, c, ga) * other_hess.ff(c, b));
                            out.hv.set(a, b, ga, v);
                        }
                        for c in 0..r {
                            let v = (0..r).fold(S::zero(), |acc, dd| acc + vt.get(a, b, dd) * other_hess.ff(dd, c));
                            out.vv.set(a, b, c, v);
                        }
                    }
                }
            }
            Side::E => {
                // own_hess = L(u); H(w) is the other side's Hessian.
                let other_hess = self.derivs(Side::Estar, x, &g)?;
                for al in 0..p {
                    for be in 0..p {
                        for dd in 0..r {
                            let v = (0..r).fold(S::zero(), |acc, c| acc + src.vc.get(al, c, be) * own_hess.ff(c, dd));
                            out.vc.set(al, be, dd, v);
                        }
                    }
                }
                for a in 0..r {
                    for b in 0..r {
                        for ga in 0..p {
                            let v = (0..r).fold(S::zero(), |acc, c| acc + ht.get(b, c, ga) * other_hess.ff(c, a));
                            out.hv.set(a, b, ga, v);
                        }
                        for c in 0..r {
                            let v = (0..r).fold(S::zero(), |acc, dd| acc + vt.get(b, c, dd) * other_hess.ff(dd, a));
                            out.vv.set(a, b, c, v);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Horizontal transport tensor at a point of `side`, with `k` the other
/// side's Hessian carried over by the Legendre map (jets over the point):
///
/// on E, `T(a,c,γ) = ρ^i_γ ∂_i k^{ac} − Γ^b_γ ∂_{y^b} k^{ac} + k^{ab} H^c_{bγ}`;
/// on E*, `T(b,c,γ) = ρ^i_γ ∂_i ℓ_{bc} + Γ_{eγ} ∂_{p_e} ℓ_{bc} + ℓ_{be} H*^e_{cγ}`.
pub fn hterm<S: Scalar>(cx: &Ctx, side: Side, at: &[S], d: &DLinearValue<S>) -> EvalResult<Tensor3<S>> {
    let (m, p, r) = (cx.m(), cx.p(), cx.r());
    let (x, f) = split_point(at, m);
    let t = transported(cx, side, at)?;
    let rho = cx.rho_h(x)?;
    let g = cx.gamma_on(side, x, f)?;
    let sign = S::from_f64(super::frame_sign(side));
    let mut out = Tensor3::zeros([r, r, p]);
    for i in 0..r {
        for j in 0..r {
            let k = &t.l[i][j];
            for ga in 0..p {
                let mut v = (0..m).fold(S::zero(), |acc, q| acc + rho.at(q, ga) * k.grad(q));
                for e in 0..r {
                    v = v + sign.clone() * g.at(e, ga) * k.grad(m + e);
                    v = v + match side {
                        Side::E => t.l[i][e].v.clone() * d.hv.get(j, e, ga),
                        Side::Estar => t.l[i][e].v.clone() * d.hv.get(e, j, ga),
                    };
                }
                out.set(i, j, ga, v);
            }
        }
    }
    Ok(out)
}

/// Vertical transport tensor at a point of `side`:
///
/// on E, `W(b,c,d) = k^{ce} ∂_{y^e} k^{bd} + k^{ce} V^d_{fe} k^{bf}`;
/// on E*, `W(b,c,d) = ℓ_{ce} ∂_{p_e} ℓ_{bd} + ℓ_{ce} V*^{fe}_d ℓ_{bf}`.
pub fn vterm<S: Scalar>(cx: &Ctx, side: Side, at: &[S], d: &DLinearValue<S>) -> EvalResult<Tensor3<S>> {
    let (m, r) = (cx.m(), cx.r());
    let t = transported(cx, side, at)?;
    let l = |i: usize, j: usize| t.l[i][j].v.clone();
    let mut out = Tensor3::zeros([r, r, r]);
    for b in 0..r {
        for c in 0..r {
            for dd in 0..r {
                let mut v = S::zero();
                for e in 0..r {
                    v = v + l(c, e) * t.l[b][dd].grad(m + e);
                    for f in 0..r {
                        let coef = match side {
                            Side::E => d.vv.get(dd, f, e),
                            Side::Estar => d.vv.get(f, e, dd),
                        };
                        v = v + l(c, e) * coef * l(b, f);
                    }
                }
                out.set(b, c, dd, v);
            }
        }
    }
    Ok(out)
}

/// `D_X T` at `at`, natural components.
///
/// Computed in the adapted frame: horizontal components
/// `X(T^α) + T^β (X^γ H^α_{βγ} + X^c V^α_{βc})`, vertical components
/// `X(T^a) + T^b (X^γ H^a_{bγ} + X^c V^a_{bc})` on E and
/// `X(T_b) + T_a (X^γ H*^a_{bγ} + X_c V*^{ac}_b)` on E*, with `X(f)` the anchor
/// action and `X^c`, `T^a` the adapted vertical components.
pub fn covariant_derivative<S: Scalar, X: SectionField, T: SectionField>(
    cx: &Ctx,
    xs: &X,
    ts: &T,
    at: &[S],
) -> EvalResult<SecVal<S>> {
    let side = ts.side();
    let (m, p, r) = (cx.m(), cx.p(), cx.r());
    let (x, f) = split_point(at, m);
    let seeded = Jet1::seed(at);
    let (xj, fj) = split_point(&seeded, m);
    let gj = cx.gamma_on(side, xj, fj)?;
    let tj = to_adapted(side, &gj, &ts.eval(cx, &seeded)?);
    let g = gj.map(|j| j.v.clone());
    let xv = xs.eval(cx, at)?;
    let xa = to_adapted(side, &g, &xv);
    let dir = anchor_direction(cx, x, &xv)?;
    let d = cx.dlin_on(side, x, f)?;
    let z = (0..p)
        .map(|al| {
            let mut acc = directional(&dir, &tj.z[al]);
            for be in 0..p {
                let mut k = (0..p).fold(S::zero(), |s, ga| s + xa.z[ga].clone() * d.hc.get(al, be, ga));
                for c in 0..r {
                    let v = match side {
                        Side::E => d.vc.get(al, be, c),
                        Side::Estar => d.vc.get(al, c, be),
                    };
                    k = k + xa.y[c].clone() * v;
                }
                acc = acc + tj.z[be].v.clone() * k;
            }
            acc
        })
        .collect();
    let y = (0..r)
        .map(|a| {
            let mut acc = directional(&dir, &tj.y[a]);
            for b in 0..r {
                let hv = |ga: usize| match side {
                    Side::E => d.hv.get(a, b, ga),
                    Side::Estar => d.hv.get(b, a, ga),
                };
                let vv = |c: usize| match side {
                    Side::E => d.vv.get(a, b, c),
                    Side::Estar => d.vv.get(b, c, a),
                };
                let mut k = (0..p).fold(S::zero(), |s, ga| s + xa.z[ga].clone() * hv(ga));
                for c in 0..r {
                    k = k + xa.y[c].clone() * vv(c);
                }
                acc = acc + tj.y[b].v.clone() * k;
            }
            acc
        })
        .collect();
    Ok(from_adapted(side, &g, &SecVal { z, y }))
}

/// `D_X T` as a section.
#[derive(Debug, Clone)]
pub struct Covariant<X, T> {
    pub x: X,
    pub t: T,
}

impl<X: SectionField, T: SectionField> SectionField for Covariant<X, T> {
    fn side(&self) -> Side {
        self.t.side()
    }

    fn eval<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>> {
        covariant_derivative(cx, &self.x, &self.t, at)
    }
}
