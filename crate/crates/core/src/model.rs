//! The geometric configuration a check runs against, and the evaluation
//! context that carries it together with the solver warm start.

use crate::algebroid::{AlgebroidData, Structure};
use crate::error::{EvalError, EvalResult};
use crate::expr::{Dims, Env, ScalarField};
use crate::legendre::{Derivs, LegendrePair, WarmStart};
use crate::numeric::{Matrix, Scalar};

/// Which prolongation a section, point or form lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `(ρ,η)TE`, points `(x, y)`.
    E,
    /// `(ρ,η)TE*`, points `(x, p)`.
    Estar,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::E => Side::Estar,
            Side::Estar => Side::E,
        }
    }
}

/// Nonlinear connection coefficients, `gamma[a][α]`: `Γ^a_α` over `(x, y)` on
/// E, `Γ_{aα}` over `(x, p)` on E*.
#[derive(Debug, Clone)]
pub struct ConnectionData {
    pub gamma: Vec<Vec<ScalarField>>,
}

/// Distinguished linear connection components, upper indices first.
///
/// On E: `hc[α][β][γ] = H^α_{βγ}`, `hv[a][b][γ] = H^a_{bγ}`,
/// `vc[α][β][c] = V^α_{βc}`, `vv[a][b][c] = V^a_{bc}`.
/// On E*: `hc[α][β][γ] = H*^α_{βγ}`, `hv[a][b][γ] = H*^a_{bγ}`,
/// `vc[α][c][β] = V*^{αc}_β`, `vv[b][c][a] = V*^{bc}_a`.
#[derive(Debug, Clone)]
pub struct DLinearData {
    pub hc: Vec<Vec<Vec<ScalarField>>>,
    pub hv: Vec<Vec<Vec<ScalarField>>>,
    pub vc: Vec<Vec<Vec<ScalarField>>>,
    pub vv: Vec<Vec<Vec<ScalarField>>>,
}

/// Mechanical system: semispray coefficients, external force and the
/// morphism `g` (`g^a_b` on E, `g^{ab}` on E*), the latter over chi.
#[derive(Debug, Clone)]
pub struct MechanicsData {
    pub spray: Vec<ScalarField>,
    pub force: Vec<ScalarField>,
    pub morph: Vec<Vec<ScalarField>>,
}

/// Everything a scenario may define. Absent pieces are derived where the
/// duality relations determine them.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub dims: Dims,
    pub alg: AlgebroidData,
    pub pair: Option<LegendrePair>,
    pub conn: Option<ConnectionData>,
    pub conn_star: Option<ConnectionData>,
    pub dlin: Option<DLinearData>,
    pub dlin_star: Option<DLinearData>,
    pub mech: Option<MechanicsData>,
    pub mech_star: Option<MechanicsData>,
}

impl Geometry {
    pub fn new(alg: AlgebroidData, pair: Option<LegendrePair>, r: usize) -> Self {
        let dims = Dims { m: alg.m, p: alg.p, r };
        Geometry { dims, alg, pair, conn: None, conn_star: None, dlin: None, dlin_star: None, mech: None, mech_star: None }
    }
}

/// Value of a 3-index array at a point, stored row-major in the declared order.
#[derive(Debug, Clone)]
pub struct Tensor3<S> {
    pub dims: [usize; 3],
    pub data: Vec<S>,
}

impl<S: Scalar> Tensor3<S> {
    pub fn zeros(dims: [usize; 3]) -> Self {
        Tensor3 { dims, data: vec![S::zero(); dims[0] * dims[1] * dims[2]] }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> S {
        self.data[(i * self.dims[1] + j) * self.dims[2] + k].clone()
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: S) {
        self.data[(i * self.dims[1] + j) * self.dims[2] + k] = v;
    }

    pub fn eval(fields: &[Vec<Vec<ScalarField>>], env: &Env<S>) -> EvalResult<Self> {
        let d0 = fields.len();
        let d1 = fields.first().map_or(0, Vec::len);
        let d2 = fields.first().and_then(|s| s.first()).map_or(0, Vec::len);
        let mut data = Vec::with_capacity(d0 * d1 * d2);
        for slab in fields {
            for row in slab {
                for f in row {
                    data.push(f.eval(env)?);
                }
            }
        }
        Ok(Tensor3 { dims: [d0, d1, d2], data })
    }
}

/// Distinguished linear connection components at a point.
#[derive(Debug, Clone)]
pub struct DLinearValue<S> {
    pub hc: Tensor3<S>,
    pub hv: Tensor3<S>,
    pub vc: Tensor3<S>,
    pub vv: Tensor3<S>,
}

pub(crate) fn env_e<'a, S>(x: &'a [S], y: &'a [S]) -> Env<'a, S> {
    Env { x, chi: &[], y, p: &[] }
}

pub(crate) fn env_s<'a, S>(x: &'a [S], p: &'a [S]) -> Env<'a, S> {
    Env { x, chi: &[], y: &[], p }
}

pub(crate) fn env_side<'a, S>(side: Side, x: &'a [S], f: &'a [S]) -> Env<'a, S> {
    match side {
        Side::E => env_e(x, f),
        Side::Estar => env_s(x, f),
    }
}

pub(crate) fn eval_matrix<S: Scalar>(fields: &[Vec<ScalarField>], env: &Env<S>) -> EvalResult<Matrix<S>> {
    let rows = fields.len();
    let cols = fields.first().map_or(0, Vec::len);
    let mut data = Vec::with_capacity(rows * cols);
    for row in fields {
        for f in row {
            data.push(f.eval(env)?);
        }
    }
    Ok(Matrix::from_vec(rows, cols, data))
}

/// A geometry plus the per-sequence solver state.
pub struct Ctx<'a> {
    pub geo: &'a Geometry,
    pub warm: WarmStart,
}

impl<'a> Ctx<'a> {
    pub fn new(geo: &'a Geometry) -> Self {
        Ctx { geo, warm: WarmStart::new() }
    }

    pub fn m(&self) -> usize {
        self.geo.dims.m
    }

    pub fn p(&self) -> usize {
        self.geo.dims.p
    }

    pub fn r(&self) -> usize {
        self.geo.dims.r
    }

    pub fn pair(&self) -> EvalResult<&'a LegendrePair> {
        self.geo.pair.as_ref().ok_or_else(|| EvalError::Missing("Lagrangian or Hamiltonian".into()))
    }

    /// `ρ^i_α ∘ h` at base point `x`.
    pub fn rho_h<S: Scalar>(&self, x: &[S]) -> EvalResult<Matrix<S>> {
        self.geo.alg.rho_h(x)
    }

    /// `L^γ_{αβ} ∘ h` at base point `x`.
    pub fn lstruct_h<S: Scalar>(&self, x: &[S]) -> EvalResult<Structure<S>> {
        self.geo.alg.lstruct_h(x)
    }

    /// Fiber of `φ_H(x, p)`.
    pub fn fiber_y<S: Scalar>(&self, x: &[S], p: &[S]) -> EvalResult<Vec<S>> {
        self.pair()?.fiber_y(x, p, &self.warm)
    }

    /// Fiber of `φ_L(x, y)`.
    pub fn fiber_p<S: Scalar>(&self, x: &[S], y: &[S]) -> EvalResult<Vec<S>> {
        self.pair()?.fiber_p(x, y, &self.warm)
    }

    /// The image of a point under `φ_L` (from E) or `φ_H` (from E*).
    pub fn map_point<S: Scalar>(&self, from: Side, x: &[S], f: &[S]) -> EvalResult<Vec<S>> {
        match from {
            Side::E => self.fiber_p(x, f),
            Side::Estar => self.fiber_y(x, f),
        }
    }

    pub fn lag<S: Scalar>(&self, x: &[S], y: &[S]) -> EvalResult<Derivs<S>> {
        self.pair()?.lag_derivs(x, y, &self.warm)
    }

    pub fn ham<S: Scalar>(&self, x: &[S], p: &[S]) -> EvalResult<Derivs<S>> {
        self.pair()?.ham_derivs(x, p, &self.warm)
    }

    /// Derivatives of `L` on E or of `H` on E*.
    pub fn derivs<S: Scalar>(&self, side: Side, x: &[S], f: &[S]) -> EvalResult<Derivs<S>> {
        match side {
            Side::E => self.lag(x, f),
            Side::Estar => self.ham(x, f),
        }
    }
}

/// Splits a concatenated point `(x, fiber)`.
pub fn split_point<S>(at: &[S], m: usize) -> (&[S], &[S]) {
    at.split_at(m)
}
