use crate::error::{Error, Result};
use crate::models::{canonical, check_finite, check_prior, BinaryErrorOracle, LocalErrorLimit};

/// `x_i ~ U[0, theta]`: `min{q, (1 - q) (theta0 / theta1)^n}` for `0 < theta0 < theta1`.
pub fn uniform_scale_pe(q: f64, theta0: f64, theta1: f64, n: u64) -> Result<f64> {
    check_finite("theta0", theta0)?;
    check_finite("theta1", theta1)?;
    if !(0.0 < theta0 && theta0 < theta1) {
        return Err(Error::invalid(format!("uniform scale needs 0 < theta0 < theta1, got {theta0} and {theta1}")));
    }
    check_prior(q)?;
    Ok(scale_pe(q, theta0, theta1, n))
}

fn scale_pe(q: f64, theta0: f64, theta1: f64, n: u64) -> f64 {
    // (theta0 / theta1)^n, accurate when the two are close
    let ratio_n = (-(n as f64) * ((theta1 - theta0) / theta0).ln_1p()).exp();
    q.min((1.0 - q) * ratio_n)
}

/// `x_i ~ U[theta, theta + 1]`: `(1 - (theta1 - theta0))^n min{q, 1 - q}`.
///
/// Coincident parameters are accepted and give `min{q, 1 - q}`.
pub fn uniform_location_pe(q: f64, theta0: f64, theta1: f64, n: u64) -> Result<f64> {
    check_finite("theta0", theta0)?;
    check_finite("theta1", theta1)?;
    let gap = theta1 - theta0;
    if !(0.0..1.0).contains(&gap) {
        return Err(Error::invalid(format!("uniform location spacing must lie in [0, 1), got {gap}")));
    }
    check_prior(q)?;
    Ok(location_pe(q, gap, n))
}

fn location_pe(q: f64, gap: f64, n: u64) -> f64 {
    if gap >= 1.0 {
        return 0.0;
    }
    (n as f64 * (-gap).ln_1p()).exp() * q.min(1.0 - q)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct UniformScale;

impl BinaryErrorOracle for UniformScale {
    fn model_id(&self) -> &'static str {
        "uniform-scale"
    }

    fn pe(&self, q: f64, theta0: f64, theta1: f64, n: u64) -> Result<f64> {
        check_finite("theta0", theta0)?;
        check_finite("theta1", theta1)?;
        if theta0 <= 0.0 || theta1 <= 0.0 {
            return Err(Error::invalid("uniform scale parameters must be positive"));
        }
        check_prior(q)?;
        let (q, lo, hi) = canonical(q, theta0, theta1);
        Ok(scale_pe(q, lo, hi, n))
    }
}

/// Separated parameters (`|theta1 - theta0| >= 1`) are told apart without error.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformLocation;

impl BinaryErrorOracle for UniformLocation {
    fn model_id(&self) -> &'static str {
        "uniform-location"
    }

    fn pe(&self, q: f64, theta0: f64, theta1: f64, n: u64) -> Result<f64> {
        check_finite("theta0", theta0)?;
        check_finite("theta1", theta1)?;
        check_prior(q)?;
        Ok(location_pe(q, (theta1 - theta0).abs(), n))
    }
}

/// `theta1 = theta (1 + 2 s / (theta n))`: the limit is `min{q, (1 - q) e^{-2 s / theta}}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformScaleLimit;

impl LocalErrorLimit for UniformScaleLimit {
    fn model_id(&self) -> &'static str {
        "uniform-scale"
    }

    fn xi_exponent(&self) -> f64 {
        1.0
    }

    fn validate_at(&self, theta: f64) -> Result<()> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::invalid(format!("uniform scale needs theta > 0, got {theta}")));
        }
        Ok(())
    }

    fn pe_limit(&self, theta: f64, s: f64, q: f64) -> f64 {
        let alpha = (-2.0 * s.abs() / theta).exp();
        if s >= 0.0 {
            q.min((1.0 - q) * alpha)
        } else {
            (q * alpha).min(1.0 - q)
        }
    }

    fn optimal_q(&self, theta: f64, s: f64) -> Option<f64> {
        let alpha = (-2.0 * s.abs() / theta).exp();
        Some(if s >= 0.0 { alpha / (1.0 + alpha) } else { 1.0 / (1.0 + alpha) })
    }
}

/// The limit is `e^{-2|s|} min{q, 1 - q}`, maximized at `q = 1/2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformLocationLimit;

impl LocalErrorLimit for UniformLocationLimit {
    fn model_id(&self) -> &'static str {
        "uniform-location"
    }

    fn xi_exponent(&self) -> f64 {
        1.0
    }

    fn pe_limit(&self, _theta: f64, s: f64, q: f64) -> f64 {
        (-2.0 * s.abs()).exp() * q.min(1.0 - q)
    }

    fn optimal_q(&self, _theta: f64, _s: f64) -> Option<f64> {
        Some(0.5)
    }
}
