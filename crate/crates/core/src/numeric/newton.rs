use crate::error::{EvalError, EvalResult};

use super::jet::Jet1;
use super::matrix::{DenseMatrix, COND_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig { tol: 1e-11, max_iter: 60, max_halvings: 20 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub z: Vec<f64>,
    /// Newton steps taken from the successful start.
    pub iterations: usize,
    /// Index of the successful start in the ladder (0 is the caller's seed).
    pub start: usize,
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Caller seed, zero, then the corners of `[-1,1]^n` scaled by 1, 2 and 4.
pub fn start_ladder(seed: &[f64]) -> Vec<Vec<f64>> {
    let n = seed.len();
    let mut starts = vec![seed.to_vec(), vec![0.0; n]];
    if n <= 10 {
        for scale in [1.0, 2.0, 4.0] {
            for mask in 0..(1usize << n) {
                starts.push((0..n).map(|k| if mask >> k & 1 == 1 { scale } else { -scale }).collect());
            }
        }
    }
    starts
}

enum Attempt {
    Solved(Vec<f64>, usize),
    Singular(f64),
    Stalled(f64),
}

fn attempt<F>(f: &F, start: Vec<f64>, cfg: &NewtonConfig) -> Attempt
where
    F: Fn(&[f64]) -> EvalResult<(Vec<f64>, DenseMatrix)>,
{
    let mut z = start;
    let (mut r, mut jac) = match f(&z) {
        Ok(v) => v,
        Err(_) => return Attempt::Stalled(f64::INFINITY),
    };
    let mut rn = norm_inf(&r);
    for it in 0..=cfg.max_iter {
        if rn <= cfg.tol {
            return Attempt::Solved(z, it);
        }
        if it == cfg.max_iter {
            break;
        }
        let step = match jac.invert() {
            Ok(inv) => inv.matvec(&r),
            Err(EvalError::SingularMatrix { cond }) => return Attempt::Singular(cond),
            Err(_) => return Attempt::Singular(f64::INFINITY),
        };
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=cfg.max_halvings {
            let trial: Vec<f64> = z.iter().zip(&step).map(|(zi, si)| zi - lambda * si).collect();
            if let Ok((tr, tj)) = f(&trial) {
                let tn = norm_inf(&tr);
                if tn < rn {
                    accepted = Some((trial, tr, tj, tn));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((nz, nr, nj, nn)) => {
                z = nz;
                r = nr;
                jac = nj;
                rn = nn;
            }
            None => return Attempt::Stalled(rn),
        }
    }
    Attempt::Stalled(rn)
}

/// Damped Newton with a multi-start fallback.
///
/// `f` returns the residual and its Jacobian at a point.
pub fn newton_solve<F>(f: F, seed: &[f64], cfg: &NewtonConfig) -> EvalResult<NewtonOutcome>
where
    F: Fn(&[f64]) -> EvalResult<(Vec<f64>, DenseMatrix)>,
{
    let mut best = f64::INFINITY;
    let mut all_singular = true;
    let mut worst_cond: f64 = 0.0;
    for (k, start) in start_ladder(seed).into_iter().enumerate() {
        match attempt(&f, start, cfg) {
            Attempt::Solved(z, iterations) => return Ok(NewtonOutcome { z, iterations, start: k }),
            Attempt::Singular(cond) => worst_cond = worst_cond.max(cond),
            Attempt::Stalled(rn) => {
                all_singular = false;
                best = best.min(rn);
            }
        }
    }
    if all_singular {
        Err(EvalError::SingularJacobian { cond: worst_cond.max(COND_LIMIT) })
    } else {
        Err(EvalError::NoConvergence { best })
    }
}

/// [`newton_solve`] with the Jacobian taken by forward-mode differentiation of `f`.
pub fn newton_solve_ad<F>(f: F, seed: &[f64], cfg: &NewtonConfig) -> EvalResult<NewtonOutcome>
where
    F: Fn(&[Jet1<f64>]) -> EvalResult<Vec<Jet1<f64>>>,
{
    let n = seed.len();
    newton_solve(
        |z: &[f64]| {
            let out = f(&Jet1::seed(z))?;
            if out.len() != n {
                return Err(EvalError::Dimension(format!("residual has {} components for {n} unknowns", out.len())));
            }
            let r = out.iter().map(|j| j.v).collect();
            let jac = DenseMatrix::from_fn(n, n, |i, k| out[i].grad(k));
            Ok((r, jac))
        },
        seed,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::scalar::Scalar;

    fn scalar_fn(g: impl Fn(Jet1<f64>) -> Jet1<f64>) -> impl Fn(&[Jet1<f64>]) -> EvalResult<Vec<Jet1<f64>>> {
        move |z| Ok(vec![g(z[0].clone())])
    }

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(lo) < 0.0) == (f(mid) < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn linear_residual_takes_one_step() {
        let out = newton_solve_ad(scalar_fn(|y| y - Jet1::from_f64(2.0)), &[0.0], &NewtonConfig::default()).unwrap();
        assert_eq!(out.z, vec![2.0]);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn cubic_matches_bisection() {
        let oracle = bisect(|y| y * y * y + y - 10.0, 0.0, 10.0);
        let out = newton_solve_ad(
            scalar_fn(|y| y.powi(3) + y - Jet1::from_f64(10.0)),
            &[0.0],
            &NewtonConfig::default(),
        )
        .unwrap();
        assert!((out.z[0] - oracle).abs() < 1e-12);
        assert!((out.z[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_inverse() {
        let out = newton_solve_ad(scalar_fn(|y| y.exp() - Jet1::from_f64(5.0)), &[0.0], &NewtonConfig::default())
            .unwrap();
        assert!((out.z[0] - 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn feeding_the_answer_back_needs_at_most_one_step() {
        let cfg = NewtonConfig::default();
        let f = scalar_fn(|y| y.exp() - Jet1::from_f64(5.0));
        let first = newton_solve_ad(&f, &[0.0], &cfg).unwrap();
        let again = newton_solve_ad(&f, &first.z, &cfg).unwrap();
        assert!(again.iterations <= 1);
        assert_eq!(again.start, 0);
    }

    #[test]
    fn flat_residual_reports_singular_jacobian() {
        let err = newton_solve_ad(scalar_fn(|y| y.scale(0.0) + Jet1::from_f64(1.0)), &[0.0], &NewtonConfig::default())
            .unwrap_err();
        assert!(matches!(err, EvalError::SingularJacobian { .. }));
    }

    #[test]
    fn rootless_residual_reports_failure() {
        let err = newton_solve_ad(scalar_fn(|y| y.powi(2) + Jet1::from_f64(1.0)), &[0.3], &NewtonConfig::default())
            .unwrap_err();
        assert!(matches!(err, EvalError::NoConvergence { .. }));
    }

    #[test]
    fn ladder_order() {
        let l = start_ladder(&[0.5, 0.5]);
        assert_eq!(l.len(), 2 + 3 * 4);
        assert_eq!(l[0], vec![0.5, 0.5]);
        assert_eq!(l[1], vec![0.0, 0.0]);
        assert_eq!(l[2], vec![-1.0, -1.0]);
        assert_eq!(l[13], vec![4.0, 4.0]);
    }
}
