use serde::{Deserialize, Serialize};

use crate::error::{EvalError, EvalResult};

/// SplitMix64 generator (Steele, Lea and Flood constants).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub count: usize,
    pub seed: u64,
    /// Closed interval per coordinate.
    pub bounds: Vec<(f64, f64)>,
}

/// Deterministic uniform points in the plan's box, coordinates drawn in order.
pub fn sample_points(plan: &SamplePlan) -> EvalResult<Vec<Vec<f64>>> {
    for (k, &(lo, hi)) in plan.bounds.iter().enumerate() {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(EvalError::InvalidBox(format!("coordinate {} has bounds [{lo}, {hi}]", k + 1)));
        }
    }
    let mut rng = SplitMix64::new(plan.seed);
    Ok((0..plan.count)
        .map(|_| plan.bounds.iter().map(|&(lo, hi)| lo + (hi - lo) * rng.next_f64()).collect())
        .collect())
}
