//! Truncated Taylor arithmetic.
//!
//! A jet with an empty gradient is a constant and mixes with jets of any width.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::scalar::Scalar;

/// Value and gradient.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet1<S> {
    pub v: S,
    pub g: Vec<S>,
}

/// Value, gradient and Hessian (upper triangle, row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2<S> {
    pub v: S,
    pub g: Vec<S>,
    pub h: Vec<S>,
}

fn tri(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Position of `(i, j)`, `i <= j`, in the packed upper triangle of an `n×n` matrix.
fn tri_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

fn width(a: usize, b: usize) -> usize {
    debug_assert!(a == 0 || b == 0 || a == b, "jet width mismatch {a} vs {b}");
    a.max(b)
}

fn get_or_zero<S: Scalar>(v: &[S], i: usize) -> S {
    v.get(i).cloned().unwrap_or_else(S::zero)
}

impl<S: Scalar> Jet1<S> {
    pub fn constant(v: S) -> Self {
        Jet1 { v, g: Vec::new() }
    }

    /// The `i`-th of `n` active variables, at value `v`.
    pub fn variable(v: S, i: usize, n: usize) -> Self {
        let mut g = vec![S::zero(); n];
        g[i] = S::one();
        Jet1 { v, g }
    }

    /// Seeds every entry of `vals` as an independent variable.
    pub fn seed(vals: &[S]) -> Vec<Self> {
        let n = vals.len();
        vals.iter().enumerate().map(|(i, v)| Self::variable(v.clone(), i, n)).collect()
    }

    pub fn grad(&self, i: usize) -> S {
        get_or_zero(&self.g, i)
    }

    fn chain(&self, f0: S, f1: S) -> Self {
        Jet1 { v: f0, g: self.g.iter().map(|d| f1.clone() * d.clone()).collect() }
    }
}

impl<S: Scalar> Jet2<S> {
    pub fn constant(v: S) -> Self {
        Jet2 { v, g: Vec::new(), h: Vec::new() }
    }

    pub fn variable(v: S, i: usize, n: usize) -> Self {
        let mut g = vec![S::zero(); n];
        g[i] = S::one();
        Jet2 { v, g, h: vec![S::zero(); tri(n)] }
    }

    pub fn seed(vals: &[S]) -> Vec<Self> {
        let n = vals.len();
        vals.iter().enumerate().map(|(i, v)| Self::variable(v.clone(), i, n)).collect()
    }

    pub fn n(&self) -> usize {
        self.g.len()
    }

    pub fn grad(&self, i: usize) -> S {
        get_or_zero(&self.g, i)
    }

    /// Hessian entry, mirrored from the stored upper triangle.
    pub fn hess(&self, i: usize, j: usize) -> S {
        if self.h.is_empty() {
            S::zero()
        } else {
            self.h[tri_index(self.n(), i, j)].clone()
        }
    }

    pub fn hess_matrix(&self) -> Vec<Vec<S>> {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| self.hess(i, j)).collect()).collect()
    }

    fn chain(&self, f0: S, f1: S, f2: S) -> Self {
        let n = self.n();
        let g: Vec<S> = self.g.iter().map(|d| f1.clone() * d.clone()).collect();
        let mut h = Vec::with_capacity(tri(n));
        for i in 0..n {
            for j in i..n {
                let k = tri_index(n, i, j);
                h.push(
                    f1.clone() * self.h[k].clone()
                        + f2.clone() * self.g[i].clone() * self.g[j].clone(),
                );
            }
        }
        Jet2 { v: f0, g, h }
    }
}

impl<S: Scalar> Add for Jet1<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let n = width(self.g.len(), o.g.len());
        let g = (0..n).map(|i| get_or_zero(&self.g, i) + get_or_zero(&o.g, i)).collect();
        Jet1 { v: self.v + o.v, g }
    }
}

impl<S: Scalar> Sub for Jet1<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let n = width(self.g.len(), o.g.len());
        let g = (0..n).map(|i| get_or_zero(&self.g, i) - get_or_zero(&o.g, i)).collect();
        Jet1 { v: self.v - o.v, g }
    }
}

impl<S: Scalar> Mul for Jet1<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let n = width(self.g.len(), o.g.len());
        let g = (0..n)
            .map(|i| match (self.g.get(i), o.g.get(i)) {
                (Some(a), Some(b)) => self.v.clone() * b.clone() + o.v.clone() * a.clone(),
                (Some(a), None) => o.v.clone() * a.clone(),
                (None, Some(b)) => self.v.clone() * b.clone(),
                (None, None) => S::zero(),
            })
            .collect();
        Jet1 { v: self.v * o.v, g }
    }
}

impl<S: Scalar> Div for Jet1<S> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl<S: Scalar> Neg for Jet1<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet1 { v: -self.v, g: self.g.into_iter().map(|d| -d).collect() }
    }
}

impl<S: Scalar> Scalar for Jet1<S> {
    const ORDER: usize = S::ORDER + 1;

    fn from_f64(v: f64) -> Self {
        Jet1::constant(S::from_f64(v))
    }

    fn re(&self) -> f64 {
        self.v.re()
    }

    fn exp(&self) -> Self {
        let e = self.v.exp();
        self.chain(e.clone(), e)
    }

    fn ln(&self) -> Self {
        self.chain(self.v.ln(), self.v.recip())
    }

    fn sin(&self) -> Self {
        self.chain(self.v.sin(), self.v.cos())
    }

    fn cos(&self) -> Self {
        self.chain(self.v.cos(), -self.v.sin())
    }

    fn sqrt(&self) -> Self {
        let s = self.v.sqrt();
        let d = s.recip().scale(0.5);
        self.chain(s, d)
    }

    fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Jet1::from_f64(1.0);
        }
        let d = self.v.powi(n - 1).scale(n as f64);
        self.chain(self.v.powi(n), d)
    }

    fn powf(&self, e: f64) -> Self {
        let d = self.v.powf(e - 1.0).scale(e);
        self.chain(self.v.powf(e), d)
    }

    fn recip(&self) -> Self {
        let r = self.v.recip();
        let d = -(r.clone() * r.clone());
        self.chain(r, d)
    }

    fn scale(&self, k: f64) -> Self {
        Jet1 { v: self.v.scale(k), g: self.g.iter().map(|d| d.scale(k)).collect() }
    }
}

impl<S: Scalar> Add for Jet2<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if o.g.is_empty() {
            return Jet2 { v: self.v + o.v, g: self.g, h: self.h };
        }
        if self.g.is_empty() {
            return Jet2 { v: self.v + o.v, g: o.g, h: o.h };
        }
        width(self.g.len(), o.g.len());
        let g = self.g.into_iter().zip(o.g).map(|(a, b)| a + b).collect();
        let h = self.h.into_iter().zip(o.h).map(|(a, b)| a + b).collect();
        Jet2 { v: self.v + o.v, g, h }
    }
}

impl<S: Scalar> Sub for Jet2<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<S: Scalar> Mul for Jet2<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if o.g.is_empty() {
            let k = o.v;
            return Jet2 {
                v: self.v * k.clone(),
                g: self.g.into_iter().map(|d| d * k.clone()).collect(),
                h: self.h.into_iter().map(|d| d * k.clone()).collect(),
            };
        }
        if self.g.is_empty() {
            return o * self;
        }
        let n = width(self.g.len(), o.g.len());
        let g = (0..n)
            .map(|i| self.v.clone() * o.g[i].clone() + o.v.clone() * self.g[i].clone())
            .collect();
        let mut h = Vec::with_capacity(tri(n));
        for i in 0..n {
            for j in i..n {
                let k = tri_index(n, i, j);
                h.push(
                    self.v.clone() * o.h[k].clone()
                        + o.v.clone() * self.h[k].clone()
                        + self.g[i].clone() * o.g[j].clone()
                        + self.g[j].clone() * o.g[i].clone(),
                );
            }
        }
        Jet2 { v: self.v * o.v, g, h }
    }
}

impl<S: Scalar> Div for Jet2<S> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        if o.g.is_empty() {
            let r = o.v.recip();
            return self * Jet2::constant(r);
        }
        self * o.recip()
    }
}

impl<S: Scalar> Neg for Jet2<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet2 {
            v: -self.v,
            g: self.g.into_iter().map(|d| -d).collect(),
            h: self.h.into_iter().map(|d| -d).collect(),
        }
    }
}

impl<S: Scalar> Scalar for Jet2<S> {
    const ORDER: usize = S::ORDER + 2;

    fn from_f64(v: f64) -> Self {
        Jet2::constant(S::from_f64(v))
    }

    fn re(&self) -> f64 {
        self.v.re()
    }

    fn exp(&self) -> Self {
        let e = self.v.exp();
        self.chain(e.clone(), e.clone(), e)
    }

    fn ln(&self) -> Self {
        let r = self.v.recip();
        let d2 = -(r.clone() * r.clone());
        self.chain(self.v.ln(), r, d2)
    }

    fn sin(&self) -> Self {
        let s = self.v.sin();
        self.chain(s.clone(), self.v.cos(), -s)
    }

    fn cos(&self) -> Self {
        let c = self.v.cos();
        self.chain(c.clone(), -self.v.sin(), -c)
    }

    fn sqrt(&self) -> Self {
        let s = self.v.sqrt();
        let r = s.recip();
        let d1 = r.scale(0.5);
        let d2 = (r.clone() * r.clone() * r).scale(-0.25);
        self.chain(s, d1, d2)
    }

    fn powi(&self, n: i32) -> Self {
        match n {
            0 => Jet2::from_f64(1.0),
            1 => self.clone(),
            _ => {
                let nf = n as f64;
                let d1 = self.v.powi(n - 1).scale(nf);
                let d2 = self.v.powi(n - 2).scale(nf * (nf - 1.0));
                self.chain(self.v.powi(n), d1, d2)
            }
        }
    }

    fn powf(&self, e: f64) -> Self {
        let d1 = self.v.powf(e - 1.0).scale(e);
        let d2 = self.v.powf(e - 2.0).scale(e * (e - 1.0));
        self.chain(self.v.powf(e), d1, d2)
    }

    fn recip(&self) -> Self {
        let r = self.v.recip();
        let r2 = r.clone() * r.clone();
        let d2 = (r2.clone() * r.clone()).scale(2.0);
        self.chain(r, -r2, d2)
    }

    fn scale(&self, k: f64) -> Self {
        Jet2 {
            v: self.v.scale(k),
            g: self.g.iter().map(|d| d.scale(k)).collect(),
            h: self.h.iter().map(|d| d.scale(k)).collect(),
        }
    }
}
