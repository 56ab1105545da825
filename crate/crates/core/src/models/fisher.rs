use crate::error::{Error, Result};

/// Second derivative of a log-partition function by central differences,
/// Richardson-extrapolated over steps `h` and `h / 2`.
pub fn fisher_from_logz<F: Fn(f64) -> f64>(logz: F, theta: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("step must be positive, got {h}")));
    }
    let center = logz(theta);
    let second = |step: f64| -> Result<f64> {
        let plus = logz(theta + step);
        let minus = logz(theta - step);
        if !(plus.is_finite() && minus.is_finite() && center.is_finite()) {
            return Err(Error::NumericalFailure(format!(
                "log-partition not finite near theta = {theta} (step {step})"
            )));
        }
        Ok((plus - 2.0 * center + minus) / (step * step))
    };
    let coarse = second(h)?;
    let fine = second(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_natural_parameter() {
        let sigma: f64 = 1.3;
        let i = fisher_from_logz(|t| t * t * sigma * sigma / 2.0, 0.4, 1e-3).unwrap();
        assert!((i - sigma * sigma).abs() < 1e-6);
    }

    #[test]
    fn exponential_rate_form() {
        let i = fisher_from_logz(|t: f64| -(-t).ln(), -1.0, 1e-2).unwrap();
        assert!((i - 1.0).abs() < 1e-5, "{i}");
    }

    #[test]
    fn linear_has_no_curvature() {
        let i = fisher_from_logz(|t| 3.0 * t - 1.0, 2.0, 1e-2).unwrap();
        assert!(i.abs() < 1e-9);
    }

    #[test]
    fn failures() {
        assert!(fisher_from_logz(|t| t * t, 0.0, 0.0).is_err());
        let err = fisher_from_logz(|t: f64| -(-t).ln(), -0.001, 0.01).unwrap_err();
        assert!(err.is_numerical());
    }
}
