//! Mechanical systems on E and E*: almost tangent structures, Liouville
//! sections, semisprays, Poincaré–Cartan forms, and the residuals relating
//! the two sides under the Legendre maps.
//!
//! These objects identify the algebroid index with the fiber index, so every
//! entry point here requires `p = r`.

pub mod identities;

use crate::algebroid::{anchor_direction, directional, prolong_bracket, SecVal, SectionField};
use crate::connection::Provenance;
use crate::error::{EvalError, EvalResult};
use crate::expr::Env;
use crate::model::{env_side, split_point, Ctx, MechanicsData, Side};
use crate::morphism::{pair, OneForm, TwoForm};
use crate::numeric::{Jet1, Matrix, Scalar};

impl<'a> Ctx<'a> {
    pub fn require_square(&self) -> EvalResult<()> {
        if self.p() != self.r() {
            return Err(EvalError::Dimension(format!(
                "mechanical systems need p = r, got p = {} and r = {}",
                self.p(),
                self.r()
            )));
        }
        Ok(())
    }

    fn mech(&self, side: Side) -> Option<&'a MechanicsData> {
        match side {
            Side::E => self.geo.mech.as_ref(),
            Side::Estar => self.geo.mech_star.as_ref(),
        }
    }

    /// `g^a_b` (E) or `g^{ab}` (E*) at `h(x)`; the identity when not given.
    pub fn morph<S: Scalar>(&self, side: Side, x: &[S]) -> EvalResult<Matrix<S>> {
        let r = self.r();
        match self.mech(side).filter(|m| !m.morph.is_empty()) {
            None => Ok(Matrix::identity(r)),
            Some(m) => {
                let chi = self.geo.alg.h_at(x)?;
                let env = Env { x, chi: &chi, y: &[], p: &[] };
                let mut out = Matrix::zeros(r, r);
                for (a, row) in m.morph.iter().enumerate() {
                    for (b, f) in row.iter().enumerate() {
                        out.set(a, b, f.eval(&env)?);
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn spray_provenance(&self, side: Side) -> Option<Provenance> {
        let given = |s: Side| self.mech(s).is_some_and(|m| !m.spray.is_empty());
        if given(side) {
            Some(Provenance::Given)
        } else if given(side.other()) {
            Some(Provenance::Derived)
        } else {
            None
        }
    }

    /// `G − ¼F` on `side` at `(x, f)`. A side without semispray coefficients
    /// takes them from the other side's semispray through the Legendre map;
    /// with neither side given they vanish.
    pub fn spray_term<S: Scalar>(&self, side: Side, x: &[S], f: &[S]) -> EvalResult<Vec<S>> {
        let r = self.r();
        match self.spray_provenance(side) {
            None => Ok(vec![S::zero(); r]),
            Some(Provenance::Given) => {
                let m = self.mech(side).expect("given spray has data");
                let env = env_side(side, x, f);
                (0..r)
                    .map(|a| {
                        let g = m.spray[a].eval(&env)?;
                        let fo = match m.force.get(a) {
                            Some(fe) => fe.eval(&env)?,
                            None => S::zero(),
                        };
                        Ok(g - fo.scale(0.25))
                    })
                    .collect()
            }
            Some(Provenance::Derived) => {
                let g = self.map_point(side, x, f)?;
                self.spray_term_from_other(side.other(), x, &g)
            }
        }
    }

    /// The other side's `G − ¼F` at `φ(x, f)` forced by the semispray
    /// correspondence, from `side`'s data at `(x, f)`:
    /// from E, `K_b = K^a L_{ab} − ½ y^c g^a_c ρ^i_a L_{ib}`;
    /// from E*, `K^b = K_a H^{ab} − ½ p_c g^{ac} ρ^i_a H_i^b`.
    pub fn spray_term_from_other<S: Scalar>(&self, side: Side, x: &[S], f: &[S]) -> EvalResult<Vec<S>> {
        self.require_square()?;
        let (m, r) = (self.m(), self.r());
        let k = self.spray_term(side, x, f)?;
        let d = self.derivs(side, x, f)?;
        let g = self.morph(side, x)?;
        let rho = self.rho_h(x)?;
        Ok((0..r)
            .map(|b| {
                let mut acc = (0..r).fold(S::zero(), |s, a| s + k[a].clone() * d.ff(a, b));
                for a in 0..r {
                    let gz = (0..r).fold(S::zero(), |s, c| s + f[c].clone() * g.at(a, c));
                    let rd = (0..m).fold(S::zero(), |s, i| s + rho.at(i, a) * d.mixed(i, b));
                    acc = acc - (gz * rd).scale(0.5);
                }
                acc
            })
            .collect())
    }

    /// Horizontal part of the semispray, `y^b g^a_b` on E and `p_b g^{ab}` on E*.
    pub fn spray_horizontal<S: Scalar>(&self, side: Side, x: &[S], f: &[S]) -> EvalResult<Vec<S>> {
        let r = self.r();
        let g = self.morph(side, x)?;
        Ok((0..r).map(|a| (0..r).fold(S::zero(), |s, b| s + f[b].clone() * g.at(a, b))).collect())
    }
}

/// `S = y^b g^a_b ∂̃_a − 2(G^a − ¼F^a) ∂̇̃_a` on E, and
/// `S* = p_b g^{ab} ∂̃*_a − 2(G_a − ¼F_a) ∂̇̃^a` on E*.
#[derive(Debug, Clone, Copy)]
pub struct Semispray(pub Side);

impl SectionField for Semispray {
    fn side(&self) -> Side {
        self.0
    }

    fn eval<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>> {
        cx.require_square()?;
        let (x, f) = split_point(at, cx.m());
        let z = cx.spray_horizontal(self.0, x, f)?;
        let y = cx.spray_term(self.0, x, f)?.into_iter().map(|k| k.scale(-2.0)).collect();
        Ok(SecVal { z, y })
    }
}

/// `ℂ = y^a ∂̇̃_a` on E, `ℂ* = p_b ∂̇̃^b` on E*.
#[derive(Debug, Clone, Copy)]
pub struct Liouville(pub Side);

impl SectionField for Liouville {
    fn side(&self) -> Side {
        self.0
    }

    fn eval<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>> {
        let (_, f) = split_point(at, cx.m());
        Ok(SecVal { z: vec![S::zero(); cx.p()], y: f.to_vec() })
    }
}

/// Almost tangent structure: `J(Z^a ∂̃_a + Y^b ∂̇̃_b) = g̃^b_a Z^a ∂̇̃_b`, with
/// `g̃` the inverse of the side's morphism.
pub fn almost_tangent<S: Scalar>(cx: &Ctx, side: Side, x: &[S], v: &SecVal<S>) -> EvalResult<SecVal<S>> {
    cx.require_square()?;
    let r = cx.r();
    let gi = cx.morph(side, x)?.invert()?;
    let y = (0..r).map(|b| (0..r).fold(S::zero(), |s, a| s + gi.at(b, a) * v.z[a].clone())).collect();
    Ok(SecVal { z: vec![S::zero(); cx.p()], y })
}

/// `J(T)` as a section.
#[derive(Debug, Clone)]
pub struct AlmostTangent<T>(pub T);

impl<T: SectionField> SectionField for AlmostTangent<T> {
    fn side(&self) -> Side {
        self.0.side()
    }

    fn eval<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>> {
        let v = self.0.eval(cx, at)?;
        almost_tangent(cx, self.side(), &at[..cx.m()], &v)
    }
}

/// Poincaré–Cartan 1-form: `θ_L = g̃^e_a L_e d̃z^a` on E,
/// `θ_H = g̃_{ae} H^e d̃z^a` on E*.
#[derive(Debug, Clone, Copy)]
pub struct PoincareCartan(pub Side);

impl OneForm for PoincareCartan {
    fn side(&self) -> Side {
        self.0
    }

    fn components<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>> {
        cx.require_square()?;
        let r = cx.r();
        let (x, f) = split_point(at, cx.m());
        let d = cx.derivs(self.0, x, f)?;
        let gi = cx.morph(self.0, x)?.invert()?;
        let z = (0..r)
            .map(|a| {
                (0..r).fold(S::zero(), |s, e| {
                    let c = match self.0 {
                        Side::E => gi.at(e, a),
                        Side::Estar => gi.at(a, e),
                    };
                    s + c * d.df(e)
                })
            })
            .collect();
        Ok(SecVal { z, y: vec![S::zero(); r] })
    }
}

/// Poincaré–Cartan 2-form `ω = dθ`:
/// `ω(U, V) = ρ̃(U)(θ(V)) − ρ̃(V)(θ(U)) − θ([U, V])`.
#[derive(Debug, Clone, Copy)]
pub struct PoincareCartan2(pub Side);

impl TwoForm for PoincareCartan2 {
    fn side(&self) -> Side {
        self.0
    }

    fn apply<S: Scalar, A: SectionField, B: SectionField>(&self, cx: &Ctx, a: &A, b: &B, at: &[S]) -> EvalResult<S> {
        let theta = PoincareCartan(self.0);
        let seeded = Jet1::seed(at);
        let c = theta.components(cx, &seeded)?;
        let va = a.eval(cx, &seeded)?;
        let vb = b.eval(cx, &seeded)?;
        let ta = pair(&c, &va);
        let tb = pair(&c, &vb);
        let x = &at[..cx.m()];
        let da = anchor_direction(cx, x, &values(&va))?;
        let db = anchor_direction(cx, x, &values(&vb))?;
        let br = prolong_bracket(cx, a, b, at)?;
        let tbr = pair(&values(&c), &br);
        Ok(directional(&da, &tb) - directional(&db, &ta) - tbr)
    }
}

fn values<S: Scalar>(v: &SecVal<Jet1<S>>) -> SecVal<S> {
    SecVal { z: v.z.iter().map(|j| j.v.clone()).collect(), y: v.y.iter().map(|j| j.v.clone()).collect() }
}

#[cfg(test)]
mod tests;
