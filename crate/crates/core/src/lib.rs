//! Legendre duality between Lagrangians and Hamiltonians on generalized Lie
//! algebroids, verified numerically as residuals over sampled points.

pub mod algebroid;
pub mod connection;
pub mod error;
pub mod expr;
pub mod legendre;
pub mod mechanics;
pub mod model;
pub mod morphism;
pub mod numeric;
pub mod verifier;

pub use error::{EvalError, EvalResult};
pub use numeric::{Jet1, Jet2, Scalar};

/// Second-order jet over `f64`, the default differentiation scalar.
pub type Jet = Jet2<f64>;
/// Second-order jet over `f32`.
pub type Jet32 = Jet2<f32>;
