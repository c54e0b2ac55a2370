//! Tangent applications of the Legendre maps: pushforward of prolongation
//! sections along `φ_L` (E → E*) or `φ_H` (E* → E), pullback of forms, and the
//! residuals of the algebroid-morphism identities.

use crate::algebroid::{directional, prolong_bracket, Basis, SecVal, SectionField};
use crate::error::EvalResult;
use crate::model::{split_point, Ctx, Side};
use crate::numeric::{Jet1, Scalar};

/// Direction of a tangent application.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MorphismSide {
    /// `(ρ,η)Tφ_L : (ρ,η)TE → (ρ,η)TE*`.
    LtoStar,
    /// `(ρ,η)Tφ_H : (ρ,η)TE* → (ρ,η)TE`.
    HtoE,
}

impl MorphismSide {
    pub fn source(self) -> Side {
        match self {
            MorphismSide::LtoStar => Side::E,
            MorphismSide::HtoE => Side::Estar,
        }
    }

    pub fn target(self) -> Side {
        self.source().other()
    }

    pub fn from_source(side: Side) -> Self {
        match side {
            Side::E => MorphismSide::LtoStar,
            Side::Estar => MorphismSide::HtoE,
        }
    }
}

/// Image components of `v` (given at the source point `(x, f)`):
/// `Z* = Z`, `Y*_b = ρ^i_α Z^α D_{ib} + Y^a D_{ab}` with `D = L` from E and
/// `D = H` from E*.
pub fn push_components<S: Scalar>(cx: &Ctx, from: Side, x: &[S], f: &[S], v: &SecVal<S>) -> EvalResult<SecVal<S>> {
    let d = cx.derivs(from, x, f)?;
    let rho = cx.rho_h(x)?;
    let (m, p, r) = (cx.m(), cx.p(), cx.r());
    let y = (0..r)
        .map(|b| {
            let mut acc = S::zero();
            for al in 0..p {
                let mut rz = S::zero();
                for i in 0..m {
                    rz = rz + rho.at(i, al) * d.mixed(i, b);
                }
                acc = acc + rz * v.z[al].clone();
            }
            for a in 0..r {
                acc = acc + v.y[a].clone() * d.ff(a, b);
            }
            acc
        })
        .collect();
    Ok(SecVal { z: v.z.clone(), y })
}

/// Pushforward evaluated from a source point: the image point and the
/// image components there.
pub fn push_at<S: Scalar, T: SectionField>(cx: &Ctx, sec: &T, at: &[S]) -> EvalResult<(Vec<S>, SecVal<S>)> {
    let (x, f) = split_point(at, cx.m());
    let v = sec.eval(cx, at)?;
    let img = push_components(cx, sec.side(), x, f, &v)?;
    let mut w = x.to_vec();
    w.extend(cx.map_point(sec.side(), x, f)?);
    Ok((w, img))
}

/// `Γ((ρ,η)Tφ, φ)(T)` as a section of the other prolongation. Evaluating at a
/// target point inverts the Legendre map there.
#[derive(Debug, Clone)]
pub struct Pushed<T>(pub T);

impl<T: SectionField> SectionField for Pushed<T> {
    fn side(&self) -> Side {
        self.0.side().other()
    }

    fn eval<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>> {
        let (x, q) = split_point(at, cx.m());
        let src = self.0.side();
        let f = cx.map_point(src.other(), x, q)?;
        let mut u = x.to_vec();
        u.extend(f.iter().cloned());
        let v = self.0.eval(cx, &u)?;
        push_components(cx, src, x, &f, &v)
    }
}

/// Pushforward of `sec` read at a point of the target side.
pub fn pushforward<S: Scalar, T: SectionField>(cx: &Ctx, sec: &T, at: &[S]) -> EvalResult<SecVal<S>> {
    Pushed(sec).eval(cx, at)
}

/// A 1-form given by its components on the natural coframe.
pub trait OneForm {
    fn side(&self) -> Side;

    fn components<S: Scalar>(&self, cx: &Ctx, at: &[S]) -> EvalResult<SecVal<S>>;

    fn apply<S: Scalar>(&self, cx: &Ctx, at: &[S], v: &SecVal<S>) -> EvalResult<S> {
        let c = self.components(cx, at)?;
        Ok(pair(&c, v))
    }
}

/// A 2-form evaluated on a pair of sections.
pub trait TwoForm {
    fn side(&self) -> Side;

    fn apply<S: Scalar, A: SectionField, B: SectionField>(&self, cx: &Ctx, a: &A, b: &B, at: &[S]) -> EvalResult<S>;
}

/// Pairing of covector and vector components.
pub fn pair<S: Scalar>(c: &SecVal<S>, v: &SecVal<S>) -> S {
    c.z.iter().zip(&v.z).chain(c.y.iter().zip(&v.y)).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// Natural coframe element: `d̃z^α` or `d̃y^a` / `d̃p_a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coframe {
    Dz(Side, usize),
    Dfiber(Side, usize),
}

impl OneForm for Coframe {
    fn side(&self) -> Side {
        match *self {
            Coframe::Dz(s, _) | Coframe::Dfiber(s, _) => s,
        }
    }

    fn components<S: Scalar>(&self, cx: &Ctx, _at: &[S]) -> EvalResult<SecVal<S>> {
        let mut c = SecVal::zeros(cx.p(), cx.r());
        match *self {
            Coframe::Dz(_, a) => c.z[a] = S::one(),
            Coframe::Dfiber(_, a) => c.y[a] = S::one(),
        }
        Ok(c)
    }
}

/// The zero 1-form.
#[derive(Debug, Clone, Copy)]
pub struct ZeroForm(pub Side);

impl OneForm for ZeroForm {
    fn side(&self) -> Side {
        self.0
    }

    fn components<S: Scalar>(&self, cx: &Ctx, _at: &[S]) -> EvalResult<SecVal<S>> {
        Ok(SecVal::zeros(cx.p(), cx.r()))
    }
}

/// `((ρ,η)Tφ, φ)*(ω)(X)` at a source point `at`: `ω(push X)` at `φ(at)`.
pub fn pullback_one<S: Scalar, F: OneForm, T: SectionField>(cx: &Ctx, form: &F, sec: &T, at: &[S]) -> EvalResult<S> {
    let (w, v) = push_at(cx, sec, at)?;
    form.apply(cx, &w, &v)
}

/// `((ρ,η)Tφ, φ)*(ω)(X, Y)` at a source point `at`.
pub fn pullback_two<F: TwoForm, A: SectionField, B: SectionField>(
    cx: &Ctx,
    form: &F,
    a: &A,
    b: &B,
    at: &[f64],
) -> EvalResult<f64> {
    let (x, f) = split_point(at, cx.m());
    let mut w = x.to_vec();
    w.extend(cx.map_point(a.side(), x, f)?);
    form.apply(cx, &Pushed(a), &Pushed(b), &w)
}

/// Natural basis of one prolongation: `p` horizontal then `r` vertical sections.
pub fn natural_basis(side: Side, p: usize, r: usize) -> Vec<Basis> {
    (0..p).map(|a| Basis::Horizontal(side, a)).chain((0..r).map(|a| Basis::Vertical(side, a))).collect()
}

/// Morphism residual at a target point `at`: the maximum over basis pairs of
/// `‖push([A, B]) − [push A, push B]‖`.
pub fn morphism_residual(cx: &Ctx, side: MorphismSide, at: &[f64]) -> EvalResult<f64> {
    let basis = natural_basis(side.source(), cx.p(), cx.r());
    let mut worst: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            let lhs = pushforward(cx, &crate::algebroid::Bracket(a, b), at)?;
            let rhs = prolong_bracket(cx, &Pushed(a), &Pushed(b), at)?;
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
    }
    Ok(worst)
}

/// `A_{αb} = ρ^i_α(h(x)) D_{ib}∘φ` and `ℓ_{ab} = D_{ab}∘φ` as jets over a
/// target point, with `D` the source-side function (`L` when the target is E*).
pub struct Transported<S> {
    pub a: Vec<Vec<Jet1<S>>>,
    pub l: Vec<Vec<Jet1<S>>>,
}

pub fn transported<S: Scalar>(cx: &Ctx, target: Side, at: &[S]) -> EvalResult<Transported<S>> {
    let seeded = Jet1::seed(at);
    let (x, q) = split_point(&seeded, cx.m());
    let f = cx.map_point(target, x, q)?;
    let d = cx.derivs(target.other(), x, &f)?;
    let rho = cx.rho_h(x)?;
    let (m, p, r) = (cx.m(), cx.p(), cx.r());
    let a = (0..p)
        .map(|al| {
            (0..r)
                .map(|b| (0..m).fold(Jet1::constant(S::zero()), |acc, i| acc + rho.at(i, al) * d.mixed(i, b)))
                .collect()
        })
        .collect();
    let l = (0..r).map(|a| (0..r).map(|b| d.ff(a, b)).collect()).collect();
    Ok(Transported { a, l })
}

/// Residuals of the four morphism identities at a target point, in order
/// (structure functions, horizontal pair, mixed pair, vertical pair).
///
/// Target E* gives the Lagrangian-side identities evaluated at `w = (x, p)`,
/// target E the Hamiltonian-side ones at `u = (x, y)`.
pub fn morphism_identities(cx: &Ctx, target: Side, at: &[f64]) -> EvalResult<[f64; 4]> {
    let (m, p, r) = (cx.m(), cx.p(), cx.r());
    let x = &at[..m];
    // (ρ,η)-structure functions are pulled back along the identity on the base
    let l_src = cx.lstruct_h(x)?;
    let l_tgt = cx.lstruct_h(&at[..m])?;
    let mut s0: f64 = 0.0;
    for g in 0..p {
        for a in 0..p {
            for b in 0..p {
                s0 = s0.max((l_src.get(g, a, b) - l_tgt.get(g, a, b)).abs());
            }
        }
    }
    let t = transported(cx, target, at)?;
    let rho = cx.rho_h(x)?;
    let rho_dir = |al: usize, f: &Jet1<f64>| (0..m).map(|i| rho.at(i, al) * f.grad(i)).sum::<f64>();
    let fib = |c: usize, f: &Jet1<f64>| f.grad(m + c);
    // unseeded source derivatives for the left side of the horizontal pair
    let d = {
        let fv = cx.map_point(target, x, &at[m..])?;
        cx.derivs(target.other(), x, &fv)?
    };
    let mut s1: f64 = 0.0;
    for al in 0..p {
        for be in 0..p {
            for b in 0..r {
                let mut lhs = 0.0;
                for g in 0..p {
                    for k in 0..m {
                        lhs += l_src.get(g, al, be) * rho.at(k, g) * d.mixed(k, b);
                    }
                }
                let mut rhs = rho_dir(al, &t.a[be][b]) - rho_dir(be, &t.a[al][b]);
                for a in 0..r {
                    rhs += t.a[al][a].v * fib(a, &t.a[be][b]) - t.a[be][a].v * fib(a, &t.a[al][b]);
                }
                s1 = s1.max((lhs - rhs).abs());
            }
        }
    }
    let mut s2: f64 = 0.0;
    for al in 0..p {
        for a in 0..r {
            for b in 0..r {
                let mut v = rho_dir(al, &t.l[b][a]);
                for c in 0..r {
                    v += t.a[al][c].v * fib(c, &t.l[b][a]) - t.l[b][c].v * fib(c, &t.a[al][a]);
                }
                s2 = s2.max(v.abs());
            }
        }
    }
    let mut s3: f64 = 0.0;
    for a in 0..r {
        for b in 0..r {
            for dd in 0..r {
                let mut v = 0.0;
                for c in 0..r {
                    v += t.l[a][c].v * fib(c, &t.l[b][dd]) - t.l[b][c].v * fib(c, &t.l[a][dd]);
                }
                s3 = s3.max(v.abs());
            }
        }
    }
    Ok([s0, s1, s2, s3])
}

/// `ρ̃(X)(f)` for a function given as a jet over the point, and a section
/// already evaluated there.
pub fn act<S: Scalar>(cx: &Ctx, at: &[S], v: &SecVal<S>, f: &Jet1<S>) -> EvalResult<S> {
    let dir = crate::algebroid::anchor_direction(cx, &at[..cx.m()], v)?;
    Ok(directional(&dir, f))
}
