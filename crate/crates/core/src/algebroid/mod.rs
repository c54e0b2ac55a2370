//! Generalized Lie algebroids in a single chart, and the prolongation
//! brackets and anchors over E and E*.

pub mod prolong;

use crate::error::EvalResult;
use crate::expr::{Env, ScalarField};
use crate::numeric::{DenseMatrix, Jet1, Matrix, Scalar};

pub use prolong::{
    anchor_action_on, anchor_direction, directional, prolong_anchor, prolong_bracket, Basis, Bracket, Combo,
    ProlongSection, Scaled, SecVal, SectionField,
};

/// Anchor `ρ^i_α`, structure functions `L^γ_{αβ}` and the maps `h: M → N`, `η: N → M`.
#[derive(Debug, Clone)]
pub struct AlgebroidData {
    pub m: usize,
    pub p: usize,
    /// `h^ĩ` over x.
    pub h: Vec<ScalarField>,
    /// `η^i` over chi.
    pub eta: Vec<ScalarField>,
    /// `rho[i][α]` over chi.
    pub rho: Vec<Vec<ScalarField>>,
    /// `lstruct[γ][α][β]` over chi.
    pub lstruct: Vec<Vec<Vec<ScalarField>>>,
}

/// `L^γ_{αβ}` at a point, indexed `(γ, α, β)`.
#[derive(Debug, Clone)]
pub struct Structure<S> {
    p: usize,
    data: Vec<S>,
}

impl<S: Scalar> Structure<S> {
    pub fn get(&self, g: usize, a: usize, b: usize) -> S {
        self.data[(g * self.p + a) * self.p + b].clone()
    }
}

fn chi_env<S>(chi: &[S]) -> Env<'_, S> {
    Env { x: &[], chi, y: &[], p: &[] }
}

fn x_env<S>(x: &[S]) -> Env<'_, S> {
    Env { x, chi: &[], y: &[], p: &[] }
}

impl AlgebroidData {
    /// Lie algebroid structure of `TM`: `h = η = id`, `ρ = I`, zero brackets.
    pub fn classical(m: usize) -> Self {
        let id = |ns: &str| (0..m).map(|i| ScalarField::parse(&format!("{ns}{}", i + 1)).expect("coordinate")).collect();
        AlgebroidData {
            m,
            p: m,
            h: id("x"),
            eta: id("chi"),
            rho: (0..m)
                .map(|i| (0..m).map(|a| ScalarField::constant(if i == a { 1.0 } else { 0.0 })).collect())
                .collect(),
            lstruct: vec![vec![vec![ScalarField::zero(); m]; m]; m],
        }
    }

    pub fn h_at<S: Scalar>(&self, x: &[S]) -> EvalResult<Vec<S>> {
        self.h.iter().map(|f| f.eval(&x_env(x))).collect()
    }

    pub fn eta_at<S: Scalar>(&self, chi: &[S]) -> EvalResult<Vec<S>> {
        self.eta.iter().map(|f| f.eval(&chi_env(chi))).collect()
    }

    /// `ρ^i_α(chi)` as an `m×p` matrix.
    pub fn rho_at<S: Scalar>(&self, chi: &[S]) -> EvalResult<Matrix<S>> {
        let env = chi_env(chi);
        let mut data = Vec::with_capacity(self.m * self.p);
        for row in &self.rho {
            for f in row {
                data.push(f.eval(&env)?);
            }
        }
        Ok(Matrix::from_vec(self.m, self.p, data))
    }

    pub fn lstruct_at<S: Scalar>(&self, chi: &[S]) -> EvalResult<Structure<S>> {
        let env = chi_env(chi);
        let mut data = Vec::with_capacity(self.p.pow(3));
        for slab in &self.lstruct {
            for row in slab {
                for f in row {
                    data.push(f.eval(&env)?);
                }
            }
        }
        Ok(Structure { p: self.p, data })
    }

    /// `ρ^i_α ∘ h` at a base point of M.
    pub fn rho_h<S: Scalar>(&self, x: &[S]) -> EvalResult<Matrix<S>> {
        self.rho_at(&self.h_at(x)?)
    }

    /// `L^γ_{αβ} ∘ h` at a base point of M.
    pub fn lstruct_h<S: Scalar>(&self, x: &[S]) -> EvalResult<Structure<S>> {
        self.lstruct_at(&self.h_at(x)?)
    }

    /// Jacobian `∂h^ĩ/∂x^i` at `x`.
    pub fn dh(&self, x: &[f64]) -> EvalResult<DenseMatrix> {
        let hx = self.h_at(&Jet1::seed(x))?;
        Ok(DenseMatrix::from_fn(self.m, self.m, |k, i| hx[k].grad(i)))
    }

    /// `θ^ĩ_α(chi) = ∂h^ĩ/∂x^i(η(chi)) ρ^i_α(chi)`, the anchor `Th∘ρ` as an `m×p` matrix.
    pub fn theta_at(&self, chi: &[f64]) -> EvalResult<DenseMatrix> {
        let dh = self.dh(&self.eta_at(chi)?)?;
        Ok(dh.matmul(&self.rho_at(chi)?))
    }

    /// Action of the section `z^α t_α` on `f ∈ F(N)` at `chi`:
    /// `θ^ĩ_α z^α ∂f/∂chi^ĩ`, with the derivative of `f` taken at `h(η(chi))`.
    pub fn anchor_action(&self, z: &[ScalarField], f: &ScalarField, chi: &[f64]) -> EvalResult<f64> {
        let theta = self.theta_at(chi)?;
        let zs: Vec<f64> = z.iter().map(|zf| zf.eval(&chi_env(chi))).collect::<EvalResult<_>>()?;
        let target = self.h_at(&self.eta_at(chi)?)?;
        let df = f.eval(&chi_env(&Jet1::seed(&target)))?;
        let mut acc = 0.0;
        for k in 0..self.m {
            for a in 0..self.p {
                acc += theta.at(k, a) * zs[a] * df.grad(k);
            }
        }
        Ok(acc)
    }

    /// `max |L^γ_{αβ} + L^γ_{βα}|` at `h(x)`.
    pub fn antisymmetry_residual(&self, x: &[f64]) -> EvalResult<f64> {
        let l = self.lstruct_h(x)?;
        let mut worst: f64 = 0.0;
        for g in 0..self.p {
            for a in 0..self.p {
                for b in a..self.p {
                    worst = worst.max((l.get(g, a, b) + l.get(g, b, a)).abs());
                }
            }
        }
        Ok(worst)
    }

    /// Anchor compatibility residual at `x`:
    /// `(L^γ_{αβ}∘h)(ρ^k_γ∘h) − [(ρ^i_α∘h)∂_i(ρ^k_β∘h) − (ρ^j_β∘h)∂_j(ρ^k_α∘h)]`.
    pub fn anchor_bracket_residual(&self, x: &[f64]) -> EvalResult<f64> {
        let rho = self.rho_h(&Jet1::seed(x))?;
        let l = self.lstruct_h(x)?;
        let mut worst: f64 = 0.0;
        for a in 0..self.p {
            for b in 0..self.p {
                for k in 0..self.m {
                    let lhs: f64 = (0..self.p).map(|g| l.get(g, a, b) * rho.at(k, g).v).sum();
                    let rhs: f64 = (0..self.m)
                        .map(|i| rho.at(i, a).v * rho.at(k, b).grad(i) - rho.at(i, b).v * rho.at(k, a).grad(i))
                        .sum();
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        Ok(worst)
    }

    /// Compares `(ρ^i_α∘h) ∂(f∘h)/∂x^i` with `(θ^ĩ_α ∂f/∂chi^ĩ)∘h` on the
    /// coordinate functions `f = chi^k`.
    pub fn composite_anchor_residual(&self, x: &[f64]) -> EvalResult<f64> {
        let direct = self.dh(x)?.matmul(&self.rho_h(x)?);
        let theta = self.theta_at(&self.h_at(x)?)?;
        Ok(direct.max_abs_diff(&theta))
    }

    /// `(antisymmetry, anchor compatibility)` maxima over the given base points.
    pub fn check_gla(&self, xs: &[Vec<f64>]) -> EvalResult<(f64, f64)> {
        let mut out = (0.0f64, 0.0f64);
        for x in xs {
            out.0 = out.0.max(self.antisymmetry_residual(x)?);
            out.1 = out.1.max(self.anchor_bracket_residual(x)?);
        }
        Ok(out)
    }
}
