//! Nonlinear connections on E and E*, adapted frames and coframes, curvature
//! from brackets, distinguished linear connections and covariant derivatives.
//!
//! A connection that the scenario does not define is derived from the other
//! side through the Legendre maps:
//! `Γ_{bα} = [ρ^i_α L_{ib} − Γ^a_α L_{ab}]∘φ_H` and
//! `Γ^a_α = −[ρ^i_α H_i^a + Γ_{bα} H^{ba}]∘φ_L`.

pub mod dlinear;
pub mod identities;

use crate::algebroid::{prolong_bracket, SecVal, SectionField};
use crate::error::{EvalError, EvalResult};
use crate::model::{env_e, env_s, eval_matrix, split_point, Ctx, Side};
use crate::morphism::OneForm;
use crate::numeric::{Matrix, Scalar};

pub use dlinear::{covariant_derivative, Covariant};

/// Where a connection's values come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Given,
    /// Derived from the other side's connection through the Legendre maps.
    Derived,
}

impl<'a> Ctx<'a> {
    pub fn gamma_provenance(&self, side: Side) -> Option<Provenance> {
        let (own, other) = match side {
            Side::E => (&self.geo.conn, &self.geo.conn_star),
            Side::Estar => (&self.geo.conn_star, &self.geo.conn),
        };
        match (own.is_some(), other.is_some()) {
            (true, _) => Some(Provenance::Given),
            (false, true) => Some(Provenance::Derived),
            _ => None,
        }
    }

    /// `Γ^a_α(x, y)` as an `r×p` matrix.
    pub fn gamma<S: Scalar>(&self, x: &[S], y: &[S]) -> EvalResult<Matrix<S>> {
        if let Some(c) = &self.geo.conn {
            return eval_matrix(&c.gamma, &env_e(x, y));
        }
        if self.geo.conn_star.is_none() {
            return Err(EvalError::Missing("connection".into()));
        }
        let p = self.fiber_p(x, y)?;
        self.gamma_from_star(x, &p)
    }

    /// `Γ_{bα}(x, p)` as an `r×p` matrix.
    pub fn gamma_star<S: Scalar>(&self, x: &[S], p: &[S]) -> EvalResult<Matrix<S>> {
        if let Some(c) = &self.geo.conn_star {
            return eval_matrix(&c.gamma, &env_s(x, p));
        }
        if self.geo.conn.is_none() {
            return Err(EvalError::Missing("connection".into()));
        }
        let y = self.fiber_y(x, p)?;
        self.gamma_star_from_e(x, &y)
    }

    /// `−[ρ^i_α H_i^a + Γ_{bα} H^{ba}](x, p)`: the E-side connection at
    /// `φ_H(x, p)` determined by the E*-side one.
    pub fn gamma_from_star<S: Scalar>(&self, x: &[S], p: &[S]) -> EvalResult<Matrix<S>> {
        let h = self.ham(x, p)?;
        let gs = self.gamma_star(x, p)?;
        let rho = self.rho_h(x)?;
        let (m, pp, r) = (self.m(), self.p(), self.r());
        Ok(Matrix::from_fn(r, pp, |a, al| {
            let mut acc = S::zero();
            for i in 0..m {
                acc = acc + rho.at(i, al) * h.mixed(i, a);
            }
            for b in 0..r {
                acc = acc + gs.at(b, al) * h.ff(b, a);
            }
            -acc
        }))
    }

    /// `[ρ^i_α L_{ib} − Γ^a_α L_{ab}](x, y)`: the E*-side connection at
    /// `φ_L(x, y)` determined by the E-side one.
    pub fn gamma_star_from_e<S: Scalar>(&self, x: &[S], y: &[S]) -> EvalResult<Matrix<S>> {
        let l = self.lag(x, y)?;
        let g = self.gamma(x, y)?;
        let rho = self.rho_h(x)?;
        let (m, pp, r) = (self.m(), self.p(), self.r());
        Ok(Matrix::from_fn(r, pp, |b, al| {
            let mut acc = S::zero();
            for i in 0..m {
                acc = acc + rho.at(i, al) * l.mixed(i, b);
            }
            for a in 0..r {
                acc = acc - g.at(a, al) * l.ff(a, b);
            }
            acc
        }))
    }

    /// Connection of either side at a point `(x, fiber)`.
    pub fn gamma_on<S: Scalar>(&self, side: Side, x: &[S], f: &[S]) -> EvalResult<Matrix<S>> {
        match side {
            Side::E => self.gamma(x, f),
            Side::Estar => self.gamma_star(x, f),
        }
    }
}

/// Sign of the connection term in the horizontal adapted section:
/// `δ̃_α = ∂̃_α − Γ^a_α ∂̇̃_a` on E, `δ̃*_α = ∂̃*_α + Γ_{bα} ∂̇̃^b` on E*.
pub fn frame_sign(side: Side) -> f64 {
    match side {
        Side::E => -1.0,
        Side::Estar => 1.0,
    }
}

/// Adapted frame element: `δ̃_α` (or `δ̃*_α`) for `Horizontal(α)`, the natural
/// vertical section for `Vertical(a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adapted {
    Horizontal(Side, usize),
    Vertical(Side, usize),
}

impl SectionField for Adapted {
    fn side(&self) -> Side {
        match *self {
            Adapted::Horizontal(s, _) | Adapted::Vertical(s, _) => s,
        }
    }

    fn eval<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>> {
        let mut v = SecVal::zeros(cx.p(), cx.r());
        match *self {
            Adapted::Horizontal(side, al) => {
                let (x, f) = split_point(at, cx.m());
                let g = cx.gamma_on(side, x, f)?;
                v.z[al] = S::one();
                for a in 0..cx.r() {
                    v.y[a] = g.at(a, al).scale(frame_sign(side));
                }
            }
            Adapted::Vertical(_, a) => v.y[a] = S::one(),
        }
        Ok(v)
    }
}

/// Adapted frame of one side: `p` horizontal then `r` vertical elements.
pub fn adapted_frame(side: Side, p: usize, r: usize) -> Vec<Adapted> {
    (0..p).map(|a| Adapted::Horizontal(side, a)).chain((0..r).map(|a| Adapted::Vertical(side, a))).collect()
}

/// Natural components converted to adapted ones: horizontal part unchanged,
/// vertical part `Y^a + Γ^a_α Z^α` on E and `Y_b − Γ_{bα} Z^α` on E*.
pub fn to_adapted<S: Scalar>(side: Side, gamma: &Matrix<S>, v: &SecVal<S>) -> SecVal<S> {
    let k = -frame_sign(side);
    let y = (0..v.y.len())
        .map(|a| {
            let t = (0..v.z.len()).fold(S::zero(), |acc, al| acc + gamma.at(a, al) * v.z[al].clone());
            v.y[a].clone() + t.scale(k)
        })
        .collect();
    SecVal { z: v.z.clone(), y }
}

/// Inverse of [`to_adapted`].
pub fn from_adapted<S: Scalar>(side: Side, gamma: &Matrix<S>, v: &SecVal<S>) -> SecVal<S> {
    let k = frame_sign(side);
    let y = (0..v.y.len())
        .map(|a| {
            let t = (0..v.z.len()).fold(S::zero(), |acc, al| acc + gamma.at(a, al) * v.z[al].clone());
            v.y[a].clone() + t.scale(k)
        })
        .collect();
    SecVal { z: v.z.clone(), y }
}

/// Adapted coframe element `δỹ^a = Γ^a_α d̃z^α + d̃y^a` on E, or
/// `δp̃_a = −Γ_{aα} d̃z^α + d̃p_a` on E*.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdaptedCoframe(pub Side, pub usize);

impl OneForm for AdaptedCoframe {
    fn side(&self) -> Side {
        self.0
    }

    fn components<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>> {
        let (x, f) = split_point(at, cx.m());
        let g = cx.gamma_on(self.0, x, f)?;
        let mut c = SecVal::zeros(cx.p(), cx.r());
        for al in 0..cx.p() {
            c.z[al] = g.at(self.1, al).scale(-frame_sign(self.0));
        }
        c.y[self.1] = S::one();
        Ok(c)
    }
}

/// Curvature components `R[α][β][a]` at a point of `side`, extracted from
/// `[δ̃_α, δ̃_β] = L^γ_{αβ} δ̃_γ + R_{αβ}` for `α < β` and antisymmetrized.
pub fn curvature(cx: &Ctx, side: Side, at: &[f64]) -> EvalResult<Vec<Vec<Vec<f64>>>> {
    let (p, r) = (cx.p(), cx.r());
    let (x, f) = split_point(at, cx.m());
    let g = cx.gamma_on(side, x, f)?;
    let l = cx.lstruct_h(x)?;
    let mut out = vec![vec![vec![0.0; r]; p]; p];
    for a in 0..p {
        for b in a + 1..p {
            let br = prolong_bracket(cx, &Adapted::Horizontal(side, a), &Adapted::Horizontal(side, b), at)?;
            for k in 0..r {
                let horizontal: f64 = (0..p).map(|c| l.get(c, a, b) * g.at(k, c)).sum();
                let v = br.y[k] - frame_sign(side) * horizontal;
                out[a][b][k] = v;
                out[b][a][k] = -v;
            }
        }
    }
    Ok(out)
}
