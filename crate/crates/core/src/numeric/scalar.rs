use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Float;

/// Real-like number the geometry is evaluated over.
///
/// Plain floats have `ORDER = 0`; each jet layer adds its truncation order, so
/// `Jet2<Jet2<f64>>` carries derivatives up to total order 4.
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const ORDER: usize;

    fn from_f64(v: f64) -> Self;

    /// Leading (base-point) value.
    fn re(&self) -> f64;

    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn powf(&self, e: f64) -> Self;
    fn recip(&self) -> Self;
    fn scale(&self, k: f64) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

macro_rules! float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            const ORDER: usize = 0;

            fn from_f64(v: f64) -> Self {
                v as $t
            }

            fn re(&self) -> f64 {
                *self as f64
            }

            fn exp(&self) -> Self {
                Float::exp(*self)
            }

            fn ln(&self) -> Self {
                Float::ln(*self)
            }

            fn sin(&self) -> Self {
                Float::sin(*self)
            }

            fn cos(&self) -> Self {
                Float::cos(*self)
            }

            fn sqrt(&self) -> Self {
                Float::sqrt(*self)
            }

            fn powi(&self, n: i32) -> Self {
                Float::powi(*self, n)
            }

            fn powf(&self, e: f64) -> Self {
                Float::powf(*self, e as $t)
            }

            fn recip(&self) -> Self {
                Float::recip(*self)
            }

            fn scale(&self, k: f64) -> Self {
                *self * (k as $t)
            }
        }
    )*};
}

float_scalar!(f32, f64);

/// Sum of a slice of scalars, `0` when empty.
pub fn sum<S: Scalar>(terms: impl IntoIterator<Item = S>) -> S {
    let mut it = terms.into_iter();
    match it.next() {
        None => S::zero(),
        Some(first) => it.fold(first, |acc, t| acc + t),
    }
}

/// `Σ_k a_k b_k`.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    sum(a.iter().zip(b).map(|(x, y)| x.clone() * y.clone()))
}
