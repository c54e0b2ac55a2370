//! Jets, small dense linear algebra, Newton iteration and sampling.

pub mod jet;
pub mod matrix;
pub mod newton;
pub mod sample;
pub mod scalar;

pub use jet::{Jet1, Jet2};
pub use matrix::{DenseMatrix, Matrix, COND_LIMIT};
pub use newton::{newton_solve, newton_solve_ad, NewtonConfig, NewtonOutcome};
pub use sample::{sample_points, SamplePlan, SplitMix64};
pub use scalar::{dot, sum, Scalar};
