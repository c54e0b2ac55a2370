//! Legendre transformations `L ↔ H` and the fiber maps `φ_L`, `φ_H`.
//!
//! One of `L`, `H` is primary and evaluated from its expression; the other is
//! a procedure that inverts the fiber gradient by Newton iteration. Jets of
//! the inverse are obtained by Newton steps taken in jet arithmetic with the
//! frozen base-point Jacobian: each step fixes one more derivative order.

use std::cell::RefCell;

use crate::error::{EvalError, EvalResult};
use crate::expr::{Env, Ns, ScalarField};
use crate::numeric::{dot, newton_solve, DenseMatrix, Jet1, Jet2, Matrix, NewtonConfig, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primary {
    Lagrangian,
    Hamiltonian,
}

/// A Lagrangian `L(x, y)` and/or a Hamiltonian `H(x, p)` of fiber rank `r`.
#[derive(Debug, Clone)]
pub struct LegendrePair {
    pub m: usize,
    pub r: usize,
    pub lagrangian: Option<ScalarField>,
    pub hamiltonian: Option<ScalarField>,
    pub primary: Primary,
    pub newton: NewtonConfig,
}

/// Last fiber solutions, used to seed the next inversion.
///
/// One instance per evaluation sequence; never shared across threads.
#[derive(Debug, Default)]
pub struct WarmStart {
    y: RefCell<Option<Vec<f64>>>,
    p: RefCell<Option<Vec<f64>>>,
}

impl WarmStart {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Jet of `L` over `(x, y)` or of `H` over `(x, p)`.
#[derive(Debug, Clone)]
pub struct Derivs<S> {
    m: usize,
    jet: Jet2<S>,
}

impl<S: Scalar> Derivs<S> {
    pub fn value(&self) -> S {
        self.jet.v.clone()
    }

    /// `∂/∂x^i`.
    pub fn dx(&self, i: usize) -> S {
        self.jet.grad(i)
    }

    /// `∂/∂y^a` or `∂/∂p_a`.
    pub fn df(&self, a: usize) -> S {
        self.jet.grad(self.m + a)
    }

    /// `∂²/∂x^i∂y^a` or `∂²/∂x^i∂p_a`.
    pub fn mixed(&self, i: usize, a: usize) -> S {
        self.jet.hess(i, self.m + a)
    }

    /// Fiber Hessian entry.
    pub fn ff(&self, a: usize, b: usize) -> S {
        self.jet.hess(self.m + a, self.m + b)
    }

    pub fn ff_matrix(&self, r: usize) -> Matrix<S> {
        Matrix::from_fn(r, r, |a, b| self.ff(a, b))
    }

    pub fn mixed_matrix(&self, r: usize) -> Matrix<S> {
        Matrix::from_fn(self.m, r, |i, a| self.mixed(i, a))
    }

    pub fn jet(&self) -> &Jet2<S> {
        &self.jet
    }
}

fn env_for<'a, S>(ns: Ns, x: &'a [S], fib: &'a [S]) -> Env<'a, S> {
    match ns {
        Ns::P => Env { x, chi: &[], y: &[], p: fib },
        _ => Env { x, chi: &[], y: fib, p: &[] },
    }
}

/// Fiber gradient of `f` at `(x, fib)`.
fn fiber_gradient<S: Scalar>(f: &ScalarField, ns: Ns, x: &[S], fib: &[S]) -> EvalResult<Vec<S>> {
    let xs: Vec<Jet1<S>> = x.iter().cloned().map(Jet1::constant).collect();
    let fs = Jet1::seed(fib);
    let out = f.eval(&env_for(ns, &xs, &fs))?;
    Ok((0..fib.len()).map(|k| out.grad(k)).collect())
}

/// Fiber gradient and Hessian at a plain point.
fn fiber_gradient_hessian(f: &ScalarField, ns: Ns, x: &[f64], fib: &[f64]) -> EvalResult<(Vec<f64>, DenseMatrix)> {
    let xs: Vec<Jet2<f64>> = x.iter().copied().map(Jet2::constant).collect();
    let fs = Jet2::seed(fib);
    let out = f.eval(&env_for(ns, &xs, &fs))?;
    let n = fib.len();
    let g = (0..n).map(|k| out.grad(k)).collect();
    Ok((g, DenseMatrix::from_fn(n, n, |a, b| out.hess(a, b))))
}

fn re_vec<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(Scalar::re).collect()
}

/// Solves `∇_fib f(x, fib) = target` for `fib`, returning the solution in
/// `S` arithmetic and its base value.
fn invert_gradient<S: Scalar>(
    f: &ScalarField,
    ns: Ns,
    x: &[S],
    target: &[S],
    seed: &[f64],
    cfg: &NewtonConfig,
) -> EvalResult<(Vec<S>, Vec<f64>)> {
    let x0 = re_vec(x);
    let t0 = re_vec(target);
    let out = newton_solve(
        |z| {
            let (g, h) = fiber_gradient_hessian(f, ns, &x0, z)?;
            Ok((g.iter().zip(&t0).map(|(a, b)| a - b).collect(), h))
        },
        seed,
        cfg,
    )?;
    let z0 = out.z;
    let mut z: Vec<S> = z0.iter().map(|&v| S::from_f64(v)).collect();
    if S::ORDER > 0 {
        let (_, jac) = fiber_gradient_hessian(f, ns, &x0, &z0)?;
        let jinv = jac.invert().map_err(|e| match e {
            EvalError::SingularMatrix { cond } => EvalError::SingularJacobian { cond },
            other => other,
        })?;
        for _ in 0..S::ORDER {
            let g = fiber_gradient(f, ns, x, &z)?;
            let res: Vec<S> = g.into_iter().zip(target).map(|(a, b)| a - b.clone()).collect();
            z = z
                .iter()
                .enumerate()
                .map(|(j, zj)| {
                    let step = (0..res.len()).fold(S::zero(), |acc, k| acc + res[k].scale(jinv.at(j, k)));
                    zj.clone() - step
                })
                .collect();
        }
    }
    Ok((z, z0))
}

impl LegendrePair {
    pub fn from_lagrangian(m: usize, r: usize, l: ScalarField) -> Self {
        LegendrePair { m, r, lagrangian: Some(l), hamiltonian: None, primary: Primary::Lagrangian, newton: NewtonConfig::default() }
    }

    pub fn from_hamiltonian(m: usize, r: usize, h: ScalarField) -> Self {
        LegendrePair { m, r, lagrangian: None, hamiltonian: Some(h), primary: Primary::Hamiltonian, newton: NewtonConfig::default() }
    }

    fn l_field(&self) -> EvalResult<&ScalarField> {
        self.lagrangian.as_ref().ok_or_else(|| EvalError::Missing("Lagrangian".into()))
    }

    fn h_field(&self) -> EvalResult<&ScalarField> {
        self.hamiltonian.as_ref().ok_or_else(|| EvalError::Missing("Hamiltonian".into()))
    }

    fn seed(&self, cell: &RefCell<Option<Vec<f64>>>, fallback: &[f64]) -> Vec<f64> {
        match &*cell.borrow() {
            Some(v) if v.len() == self.r => v.clone(),
            _ => fallback.to_vec(),
        }
    }

    /// Closed-form `H(x, p)`, when the scenario supplies one.
    pub fn closed_form_h<S: Scalar>(&self, x: &[S], p: &[S]) -> EvalResult<S> {
        self.h_field()?.eval(&env_for(Ns::P, x, p))
    }

    /// Fiber part of `φ_H(x, p)`: `y^a = H^a(x, p)`.
    pub fn fiber_y<S: Scalar>(&self, x: &[S], p: &[S], warm: &WarmStart) -> EvalResult<Vec<S>> {
        match self.primary {
            Primary::Hamiltonian => fiber_gradient(self.h_field()?, Ns::P, x, p),
            Primary::Lagrangian => {
                let seed = self.seed(&warm.y, &re_vec(p));
                let (y, y0) = invert_gradient(self.l_field()?, Ns::Y, x, p, &seed, &self.newton)?;
                *warm.y.borrow_mut() = Some(y0);
                Ok(y)
            }
        }
    }

    /// Fiber part of `φ_L(x, y)`: `p_a = L_a(x, y)`.
    pub fn fiber_p<S: Scalar>(&self, x: &[S], y: &[S], warm: &WarmStart) -> EvalResult<Vec<S>> {
        match self.primary {
            Primary::Lagrangian => fiber_gradient(self.l_field()?, Ns::Y, x, y),
            Primary::Hamiltonian => {
                let seed = self.seed(&warm.p, &re_vec(y));
                let (p, p0) = invert_gradient(self.h_field()?, Ns::P, x, y, &seed, &self.newton)?;
                *warm.p.borrow_mut() = Some(p0);
                Ok(p)
            }
        }
    }

    /// `L(x, y)`, or `y^a p_a − H(x, p)` with `p` solving `y^a = H^a(x, p)`.
    pub fn lagrangian<S: Scalar>(&self, x: &[S], y: &[S], warm: &WarmStart) -> EvalResult<S> {
        match self.primary {
            Primary::Lagrangian => self.l_field()?.eval(&env_for(Ns::Y, x, y)),
            Primary::Hamiltonian => {
                let p = self.fiber_p(x, y, warm)?;
                Ok(dot(y, &p) - self.h_field()?.eval(&env_for(Ns::P, x, &p))?)
            }
        }
    }

    /// `H(x, p)`, or `p_a y^a − L(x, y)` with `y` solving `p_a = L_a(x, y)`.
    pub fn hamiltonian<S: Scalar>(&self, x: &[S], p: &[S], warm: &WarmStart) -> EvalResult<S> {
        match self.primary {
            Primary::Hamiltonian => self.h_field()?.eval(&env_for(Ns::P, x, p)),
            Primary::Lagrangian => {
                let y = self.fiber_y(x, p, warm)?;
                Ok(dot(p, &y) - self.l_field()?.eval(&env_for(Ns::Y, x, &y))?)
            }
        }
    }

    /// `L_i, L_a, L_{ib}, L_{ab}` (and `L_{ij}`) at `(x, y)`.
    pub fn lag_derivs<S: Scalar>(&self, x: &[S], y: &[S], warm: &WarmStart) -> EvalResult<Derivs<S>> {
        let (xs, ys) = seed_split(x, y);
        Ok(Derivs { m: self.m, jet: self.lagrangian(&xs, &ys, warm)? })
    }

    /// `H_i, H^a, H_i^b, H^{ab}` (and `H_{ij}`) at `(x, p)`.
    pub fn ham_derivs<S: Scalar>(&self, x: &[S], p: &[S], warm: &WarmStart) -> EvalResult<Derivs<S>> {
        let (xs, ps) = seed_split(x, p);
        Ok(Derivs { m: self.m, jet: self.hamiltonian(&xs, &ps, warm)? })
    }

    /// `φ_L(u)` for `u = (x, y)`.
    pub fn phi_l(&self, x: &[f64], y: &[f64], warm: &WarmStart) -> EvalResult<(Vec<f64>, Vec<f64>)> {
        Ok((x.to_vec(), self.fiber_p(x, y, warm)?))
    }

    /// `φ_H(w)` for `w = (x, p)`.
    pub fn phi_h(&self, x: &[f64], p: &[f64], warm: &WarmStart) -> EvalResult<(Vec<f64>, Vec<f64>)> {
        Ok((x.to_vec(), self.fiber_y(x, p, warm)?))
    }

    /// `‖φ_H(φ_L(u)) − u‖_∞`.
    pub fn round_trip_e(&self, x: &[f64], y: &[f64], warm: &WarmStart) -> EvalResult<f64> {
        let p = self.fiber_p(x, y, warm)?;
        let back = self.fiber_y(x, &p, warm)?;
        Ok(back.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// `‖φ_L(φ_H(w)) − w‖_∞`.
    pub fn round_trip_estar(&self, x: &[f64], p: &[f64], warm: &WarmStart) -> EvalResult<f64> {
        let y = self.fiber_y(x, p, warm)?;
        let back = self.fiber_p(x, &y, warm)?;
        Ok(back.iter().zip(p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// `‖invert(H^{ab}) − L_{ab}∘φ_H‖_∞` at `w = (x, p)`.
    pub fn hessian_duality(&self, x: &[f64], p: &[f64], warm: &WarmStart) -> EvalResult<f64> {
        let hd = self.ham_derivs(x, p, warm)?;
        let htilde = hd.ff_matrix(self.r).invert()?;
        let y = self.fiber_y(x, p, warm)?;
        let ld = self.lag_derivs(x, &y, warm)?;
        Ok(htilde.max_abs_diff(&ld.ff_matrix(self.r)))
    }
}

/// Seeds `(x, f)` as `m + r` independent second-order variables.
fn seed_split<S: Scalar>(x: &[S], f: &[S]) -> (Vec<Jet2<S>>, Vec<Jet2<S>>) {
    let all: Vec<S> = x.iter().chain(f).cloned().collect();
    let mut seeded = Jet2::seed(&all);
    let fs = seeded.split_off(x.len());
    (seeded, fs)
}
