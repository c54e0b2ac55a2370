//! Sections of the prolongations `(ρ,η)TE` and `(ρ,η)TE*`, their bracket and
//! anchor.
//!
//! A section is anything that yields natural-frame components `(Z^α, Y^a)`
//! (or `(Z^α, Y_a)` on E*) at a point `(x, fiber)`, in any scalar type. The
//! bracket differentiates its arguments by evaluating them on first-order jets
//! seeded over the whole point, so brackets of brackets, pushforwards and
//! solver-backed coefficients all compose.

use crate::error::EvalResult;
use crate::expr::ScalarField;
use crate::model::{env_side, split_point, Ctx, Side};
use crate::numeric::{Jet1, Scalar, SplitMix64};

/// Natural-frame components of a section at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct SecVal<S> {
    pub z: Vec<S>,
    pub y: Vec<S>,
}

impl<S: Scalar> SecVal<S> {
    pub fn zeros(p: usize, r: usize) -> Self {
        SecVal { z: vec![S::zero(); p], y: vec![S::zero(); r] }
    }

    pub fn scale(&self, k: &S) -> Self {
        SecVal {
            z: self.z.iter().map(|v| v.clone() * k.clone()).collect(),
            y: self.y.iter().map(|v| v.clone() * k.clone()).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        SecVal {
            z: self.z.iter().zip(&o.z).map(|(a, b)| a.clone() + b.clone()).collect(),
            y: self.y.iter().zip(&o.y).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&S::from_f64(-1.0)))
    }

    pub fn re(&self) -> SecVal<f64> {
        SecVal { z: self.z.iter().map(Scalar::re).collect(), y: self.y.iter().map(Scalar::re).collect() }
    }
}

impl SecVal<f64> {
    /// `max |a − b|` over all components.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.z.iter().zip(&o.z).chain(self.y.iter().zip(&o.y)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.z.iter().chain(&self.y).map(|v| v.abs()).fold(0.0, f64::max)
    }
}

/// A section of one of the two prolongations.
pub trait SectionField {
    fn side(&self) -> Side;

    /// Natural components at `at = (x, fiber)`.
    fn eval<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>>;
}

impl<T: SectionField + ?Sized> SectionField for &T {
    fn side(&self) -> Side {
        (**self).side()
    }

    fn eval<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>> {
        (**self).eval(cx, at)
    }
}

/// Natural basis section: `∂̃_α` (or `∂̃*_α`) for `Horizontal(α)`, `∂̇̃_a` (or
/// `∂̇̃^a`) for `Vertical(a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Horizontal(Side, usize),
    Vertical(Side, usize),
}

impl SectionField for Basis {
    fn side(&self) -> Side {
        match *self {
            Basis::Horizontal(s, _) | Basis::Vertical(s, _) => s,
        }
    }

    fn eval<S: Scalar>(&self, cx: &Ctx, _at: &[S]) -> EvalResult<SecVal<S>> {
        let mut v = SecVal::zeros(cx.p(), cx.r());
        match *self {
            Basis::Horizontal(_, a) => v.z[a] = S::one(),
            Basis::Vertical(_, a) => v.y[a] = S::one(),
        }
        Ok(v)
    }
}

/// Section with expression coefficients over the coordinates of its side.
#[derive(Debug, Clone)]
pub struct ProlongSection {
    pub side: Side,
    pub z: Vec<ScalarField>,
    pub y: Vec<ScalarField>,
}

impl ProlongSection {
    /// Random section whose coefficients are polynomials of degree ≤ 2 in the
    /// `m + r` point coordinates, coefficients uniform in `[-1, 1]`.
    pub fn random_polynomial(side: Side, m: usize, p: usize, r: usize, rng: &mut SplitMix64) -> Self {
        let fib = match side {
            Side::E => "y",
            Side::Estar => "p",
        };
        let names: Vec<String> =
            (0..m).map(|i| format!("x{}", i + 1)).chain((0..r).map(|a| format!("{fib}{}", a + 1))).collect();
        let mut poly = || {
            let mut c = || 2.0 * rng.next_f64() - 1.0;
            let mut terms = vec![format!("({:?})", c())];
            for (i, u) in names.iter().enumerate() {
                terms.push(format!("({:?})*{u}", c()));
                for v in &names[i..] {
                    terms.push(format!("({:?})*{u}*{v}", c()));
                }
            }
            ScalarField::parse(&terms.join(" + ")).expect("generated polynomial parses")
        };
        let z = (0..p).map(|_| poly()).collect();
        let y = (0..r).map(|_| poly()).collect();
        ProlongSection { side, z, y }
    }
}

impl SectionField for ProlongSection {
    fn side(&self) -> Side {
        self.side
    }

    fn eval<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>> {
        let (x, f) = split_point(at, cx.m());
        let env = env_side(self.side, x, f);
        Ok(SecVal {
            z: self.z.iter().map(|c| c.eval(&env)).collect::<EvalResult<_>>()?,
            y: self.y.iter().map(|c| c.eval(&env)).collect::<EvalResult<_>>()?,
        })
    }
}

/// `f · X` for a scalar field `f` over the coordinates of `X`'s side.
#[derive(Debug, Clone)]
pub struct Scaled<T> {
    pub f: ScalarField,
    pub inner: T,
}

impl<T: SectionField> SectionField for Scaled<T> {
    fn side(&self) -> Side {
        self.inner.side()
    }

    fn eval<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>> {
        let (x, f) = split_point(at, cx.m());
        let k = self.f.eval(&env_side(self.side(), x, f))?;
        Ok(self.inner.eval(cx, at)?.scale(&k))
    }
}

/// `a·X + b·Y` with real `a`, `b`.
#[derive(Debug, Clone)]
pub struct Combo<A, B> {
    pub a: f64,
    pub x: A,
    pub b: f64,
    pub y: B,
}

impl<A: SectionField, B: SectionField> SectionField for Combo<A, B> {
    fn side(&self) -> Side {
        self.x.side()
    }

    fn eval<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>> {
        let u = self.x.eval(cx, at)?.scale(&S::from_f64(self.a));
        let v = self.y.eval(cx, at)?.scale(&S::from_f64(self.b));
        Ok(u.add(&v))
    }
}

/// Anchor image of section components at a point: `(Z^α ρ^i_α(h(x)), Y)`,
/// as one direction over all `m + r` point coordinates.
pub fn anchor_direction<S: Scalar>(cx: &Ctx, x: &[S], v: &SecVal<S>) -> EvalResult<Vec<S>> {
    let rho = cx.rho_h(x)?;
    let mut dir: Vec<S> = (0..cx.m())
        .map(|i| (0..cx.p()).fold(S::zero(), |acc, a| acc + rho.at(i, a) * v.z[a].clone()))
        .collect();
    dir.extend(v.y.iter().cloned());
    Ok(dir)
}

/// `Σ_k dir_k ∂f/∂u^k` for a jet `f` seeded over the point.
pub fn directional<S: Scalar>(dir: &[S], f: &Jet1<S>) -> S {
    dir.iter().enumerate().fold(S::zero(), |acc, (k, d)| acc + d.clone() * f.grad(k))
}

fn values<S: Scalar>(v: &SecVal<Jet1<S>>) -> SecVal<S> {
    SecVal { z: v.z.iter().map(|j| j.v.clone()).collect(), y: v.y.iter().map(|j| j.v.clone()).collect() }
}

/// Anchor `ρ̃(X)` at `at`: base components then fiber components.
pub fn prolong_anchor<S: Scalar, X: SectionField>(cx: &Ctx, x: &X, at: &[S]) -> EvalResult<Vec<S>> {
    let v = x.eval(cx, at)?;
    anchor_direction(cx, &at[..cx.m()], &v)
}

/// Action `ρ̃(X)(f)` of a section on a function, given the function's jet
/// seeded over the point.
pub fn anchor_action_on<S: Scalar, X: SectionField>(cx: &Ctx, x: &X, at: &[S], f: &Jet1<S>) -> EvalResult<S> {
    Ok(directional(&prolong_anchor(cx, x, at)?, f))
}

/// `[X, Y]` on either prolongation:
/// `z^γ = L^γ_{αβ}(h(x)) Z₁^α Z₂^β + ρ̃(X)(Z₂^γ) − ρ̃(Y)(Z₁^γ)`,
/// `y^b = ρ̃(X)(Y₂^b) − ρ̃(Y)(Y₁^b)`.
pub fn prolong_bracket<S: Scalar, A: SectionField, B: SectionField>(
    cx: &Ctx,
    a: &A,
    b: &B,
    at: &[S],
) -> EvalResult<SecVal<S>> {
    let seeded = Jet1::seed(at);
    let ja = a.eval(cx, &seeded)?;
    let jb = b.eval(cx, &seeded)?;
    let (va, vb) = (values(&ja), values(&jb));
    let x = &at[..cx.m()];
    let da = anchor_direction(cx, x, &va)?;
    let db = anchor_direction(cx, x, &vb)?;
    let l = cx.lstruct_h(x)?;
    let p = cx.p();
    let z = (0..p)
        .map(|g| {
            let mut acc = directional(&da, &jb.z[g]) - directional(&db, &ja.z[g]);
            for al in 0..p {
                for be in 0..p {
                    acc = acc + l.get(g, al, be) * va.z[al].clone() * vb.z[be].clone();
                }
            }
            acc
        })
        .collect();
    let y = (0..cx.r()).map(|k| directional(&da, &jb.y[k]) - directional(&db, &ja.y[k])).collect();
    Ok(SecVal { z, y })
}

/// `[A, B]` as a section in its own right.
#[derive(Debug, Clone)]
pub struct Bracket<A, B>(pub A, pub B);

impl<A: SectionField, B: SectionField> SectionField for Bracket<A, B> {
    fn side(&self) -> Side {
        self.0.side()
    }

    fn eval<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>> {
        prolong_bracket(cx, &self.0, &self.1, at)
    }
}

#[cfg(test)]
mod tests;
