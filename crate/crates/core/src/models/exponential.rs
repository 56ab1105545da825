use crate::error::{Error, Result};
use crate::models::{canonical, check_finite, check_prior, BinaryErrorOracle};

/// MAP error between exponential rates `theta0 < theta1` from one observation.
pub fn exponential_rate_pe(q: f64, theta0: f64, theta1: f64) -> Result<f64> {
    check_rates(theta0, theta1)?;
    if theta0 >= theta1 {
        return Err(Error::invalid(format!(
            "exponential rates must satisfy theta0 < theta1, got {theta0} and {theta1}"
        )));
    }
    check_prior(q)?;
    Ok(ordered_pe(q, theta0, theta1, 1))
}

fn check_rates(theta0: f64, theta1: f64) -> Result<()> {
    check_finite("theta0", theta0)?;
    check_finite("theta1", theta1)?;
    if theta0 <= 0.0 || theta1 <= 0.0 {
        return Err(Error::invalid("exponential rates must be positive"));
    }
    Ok(())
}

/// `P(S >= x)` for `S` a sum of `n` exponentials of rate `rate`, i.e. the
/// Poisson probability of fewer than `n` arrivals by time `x`.
fn erlang_survival(n: u64, rate: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let lambda = rate * x;
    if n == 1 {
        return (-lambda).exp();
    }
    let ln_lambda = lambda.ln();
    let mut log_terms = Vec::with_capacity(n as usize);
    let mut log_term = -lambda;
    log_terms.push(log_term);
    for k in 1..n {
        log_term += ln_lambda - (k as f64).ln();
        log_terms.push(log_term);
    }
    let peak = log_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = log_terms.iter().map(|&l| (l - peak).exp()).sum();
    (peak + sum.ln()).exp().min(1.0)
}

/// Error of the LRT on the sufficient statistic `S = sum x_i`: decide the
/// larger rate when `S` falls below the threshold.
fn ordered_pe(q: f64, theta0: f64, theta1: f64, n: u64) -> f64 {
    if q <= 0.0 || q >= 1.0 {
        return 0.0;
    }
    let nf = n as f64;
    let threshold = (nf * (theta1 / theta0).ln() + ((1.0 - q) / q).ln()) / (theta1 - theta0);
    if threshold <= 0.0 {
        return 1.0 - q;
    }
    let h0_error = 1.0 - erlang_survival(n, theta0, threshold);
    let h1_error = erlang_survival(n, theta1, threshold);
    q * h0_error + (1.0 - q) * h1_error
}

/// `x_i ~ theta exp(-theta x)`, i.i.d.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExponentialRate;

impl BinaryErrorOracle for ExponentialRate {
    fn model_id(&self) -> &'static str {
        "exp-rate"
    }

    fn pe(&self, q: f64, theta0: f64, theta1: f64, n: u64) -> Result<f64> {
        check_rates(theta0, theta1)?;
        check_prior(q)?;
        if n == 0 {
            return Err(Error::invalid("sample size must be positive"));
        }
        if theta0 == theta1 {
            return Ok(q.min(1.0 - q));
        }
        let (q, lo, hi) = canonical(q, theta0, theta1);
        Ok(ordered_pe(q, lo, hi, n))
    }
}
