//! Simulation of the MAP decision, used to cross-check closed-form error
//! probabilities. Each call seeds its own generator.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};

use crate::error::{Error, Result};
use crate::models::check_prior;

pub type McRng = ChaCha8Rng;

pub const MIN_TRIALS: u64 = 10_000;

/// Seed used by the built-in verification suites.
pub const DEFAULT_SEED: u64 = 0x5EED_2024;

/// An i.i.d. observation model: sampling plus a log-density up to a constant
/// that does not depend on the parameter.
pub trait ObservationModel: Send + Sync {
    fn sample(&self, theta: f64, rng: &mut McRng) -> f64;
    fn log_density(&self, x: f64, theta: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    /// 95% binomial half-width.
    pub half_width: f64,
    pub trials: u64,
    pub errors: u64,
}

impl McEstimate {
    /// Whether `exact` lies within `k` half-widths; a zero half-width is
    /// widened to the resolution `1 / trials`.
    pub fn agrees_with(&self, exact: f64, k: f64) -> bool {
        let width = self.half_width.max(1.0 / self.trials as f64);
        (self.estimate - exact).abs() <= k * width
    }
}

/// Empirical error of the MAP rule between `theta0` (prior `q`) and `theta1`.
pub fn monte_carlo_pe(
    model: &dyn ObservationModel,
    q: f64,
    theta0: f64,
    theta1: f64,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_prior(q)?;
    if trials < MIN_TRIALS {
        return Err(Error::invalid(format!("at least {MIN_TRIALS} trials required, got {trials}")));
    }
    if n == 0 {
        return Err(Error::invalid("sample size must be positive"));
    }
    let mut rng = McRng::seed_from_u64(seed);
    let (lq0, lq1) = (q.ln(), (1.0 - q).ln());
    let mut errors = 0u64;
    for _ in 0..trials {
        let truth_is_zero = rng.gen::<f64>() < q;
        let theta = if truth_is_zero { theta0 } else { theta1 };
        let (mut ll0, mut ll1) = (0.0, 0.0);
        for _ in 0..n {
            let x = model.sample(theta, &mut rng);
            ll0 += model.log_density(x, theta0);
            ll1 += model.log_density(x, theta1);
        }
        let decide_one = lq1 + ll1 > lq0 + ll0;
        if decide_one == truth_is_zero {
            errors += 1;
        }
    }
    let p = errors as f64 / trials as f64;
    Ok(McEstimate { estimate: p, half_width: 1.96 * (p * (1.0 - p) / trials as f64).sqrt(), trials, errors })
}

#[derive(Debug, Clone, Copy)]
pub struct GaussianSampler {
    pub sigma: f64,
}

impl ObservationModel for GaussianSampler {
    fn sample(&self, theta: f64, rng: &mut McRng) -> f64 {
        Normal::new(theta, self.sigma).expect("positive sigma").sample(rng)
    }

    fn log_density(&self, x: f64, theta: f64) -> f64 {
        let z = (x - theta) / self.sigma;
        -0.5 * z * z
    }
}

/// Uniform on `[0, theta]`.
#[derive(Debug, Clone, Copy)]
pub struct UniformScaleSampler;

impl ObservationModel for UniformScaleSampler {
    fn sample(&self, theta: f64, rng: &mut McRng) -> f64 {
        rng.gen::<f64>() * theta
    }

    fn log_density(&self, x: f64, theta: f64) -> f64 {
        if (0.0..=theta).contains(&x) {
            -theta.ln()
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// Uniform on `[theta, theta + 1]`.
#[derive(Debug, Clone, Copy)]
pub struct UniformLocationSampler;

impl ObservationModel for UniformLocationSampler {
    fn sample(&self, theta: f64, rng: &mut McRng) -> f64 {
        theta + rng.gen::<f64>()
    }

    fn log_density(&self, x: f64, theta: f64) -> f64 {
        if x >= theta && x <= theta + 1.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// Exponential with rate `theta`.
#[derive(Debug, Clone, Copy)]
pub struct ExponentialSampler;

impl ObservationModel for ExponentialSampler {
    fn sample(&self, theta: f64, rng: &mut McRng) -> f64 {
        Exp::new(theta).expect("positive rate").sample(rng)
    }

    fn log_density(&self, x: f64, theta: f64) -> f64 {
        if x >= 0.0 {
            theta.ln() - theta * x
        } else {
            f64::NEG_INFINITY
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gaussian_tail;

    #[test]
    fn gaussian_agrees_with_tail() {
        let est = monte_carlo_pe(&GaussianSampler { sigma: 1.0 }, 0.5, 0.0, 1.0, 16, 20_000, DEFAULT_SEED).unwrap();
        assert!(est.agrees_with(gaussian_tail(2.0), 3.0), "{est:?}");
    }

    #[test]
    fn uniform_scale_agrees() {
        let est = monte_carlo_pe(&UniformScaleSampler, 0.5, 1.0, 1.1, 20, 20_000, DEFAULT_SEED).unwrap();
        let exact = 0.5f64.min(0.5 * (1.0f64 / 1.1).powi(20));
        assert!(est.agrees_with(exact, 3.0), "{est:?} vs {exact}");
    }

    #[test]
    fn zero_prior_never_errs() {
        let est = monte_carlo_pe(&GaussianSampler { sigma: 1.0 }, 0.0, 0.0, 0.1, 4, MIN_TRIALS, 7).unwrap();
        assert_eq!(est.errors, 0);
    }

    #[test]
    fn same_seed_same_result() {
        let a = monte_carlo_pe(&ExponentialSampler, 0.4, 1.0, 2.0, 1, MIN_TRIALS, 11).unwrap();
        let b = monte_carlo_pe(&ExponentialSampler, 0.4, 1.0, 2.0, 1, MIN_TRIALS, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_few_trials() {
        assert!(monte_carlo_pe(&UniformLocationSampler, 0.5, 0.0, 0.1, 1, 100, 1).is_err());
    }
}
