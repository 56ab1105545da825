//! Models whose binary test reduces to two Gaussians with a common variance:
//! location in white noise, continuous-time signals in AWGN, and regular
//! exponential families through the central limit theorem.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::loss::RateVariable;
use crate::models::{check_finite, check_prior, BinaryErrorOracle, LocalErrorLimit, VectorErrorOracle};
use crate::numerics::gaussian_tail;

/// MAP error between `N(0, 1)` and `N(d, 1)` with priors `(q, 1 - q)`.
///
/// With `l = ln(q / (1 - q))` the error is
/// `q Q(d/2 + l/d) + (1 - q) Q(d/2 - l/d)`.
pub fn gaussian_pair_pe(q: f64, d: f64) -> f64 {
    if q <= 0.0 || q >= 1.0 {
        return 0.0;
    }
    let d = d.abs();
    if d == 0.0 {
        return q.min(1.0 - q);
    }
    if q == 0.5 {
        return gaussian_tail(0.5 * d);
    }
    let l = (q / (1.0 - q)).ln();
    q * gaussian_tail(0.5 * d + l / d) + (1.0 - q) * gaussian_tail(0.5 * d - l / d)
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}

/// `x_i = theta + z_i`, `z_i ~ N(0, sigma^2)`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianLocation {
    sigma: f64,
}

impl GaussianLocation {
    pub fn new(sigma: f64) -> Result<Self> {
        check_positive("sigma", sigma)?;
        Ok(GaussianLocation { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl BinaryErrorOracle for GaussianLocation {
    fn model_id(&self) -> &'static str {
        "gauss-location"
    }

    fn pe(&self, q: f64, theta0: f64, theta1: f64, n: u64) -> Result<f64> {
        check_finite("theta0", theta0)?;
        check_finite("theta1", theta1)?;
        check_prior(q)?;
        let d = (n as f64).sqrt() * (theta1 - theta0).abs() / self.sigma;
        Ok(gaussian_pair_pe(q, d))
    }
}

/// `x_i = theta + z_i` with `theta` in `R^dim` and isotropic noise.
#[derive(Debug, Clone, Copy)]
pub struct IsotropicGaussian {
    sigma: f64,
    dim: usize,
}

impl IsotropicGaussian {
    pub fn new(sigma: f64, dim: usize) -> Result<Self> {
        check_positive("sigma", sigma)?;
        if dim == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        Ok(IsotropicGaussian { sigma, dim })
    }
}

impl VectorErrorOracle for IsotropicGaussian {
    fn dim(&self) -> usize {
        self.dim
    }

    fn pe(&self, q: f64, theta0: &[f64], theta1: &[f64], n: u64) -> Result<f64> {
        if theta0.len() != self.dim || theta1.len() != self.dim {
            return Err(Error::invalid(format!("parameters must have dimension {}", self.dim)));
        }
        check_prior(q)?;
        let dist = theta0.iter().zip(theta1).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        Ok(gaussian_pair_pe(q, (n as f64).sqrt() * dist / self.sigma))
    }
}

/// Half of the standardized separation as a function of the spacing scale `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Separation {
    /// `c |s|`
    Linear(f64),
    /// `sqrt(c |s|)`
    SqrtLinear(f64),
}

impl Separation {
    pub fn half(&self, s: f64) -> f64 {
        match *self {
            Separation::Linear(c) => c * s.abs(),
            Separation::SqrtLinear(c) => (c * s.abs()).sqrt(),
        }
    }
}

/// Limit `P_e = gaussian_pair_pe(q, 2 h(s))` for a separation law `h`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianShiftLimit {
    id: &'static str,
    xi_exponent: f64,
    variable: RateVariable,
    separation: Separation,
}

impl GaussianShiftLimit {
    pub fn separation(&self) -> Separation {
        self.separation
    }
}

impl LocalErrorLimit for GaussianShiftLimit {
    fn model_id(&self) -> &'static str {
        self.id
    }

    fn xi_exponent(&self) -> f64 {
        self.xi_exponent
    }

    fn rate_variable(&self) -> RateVariable {
        self.variable
    }

    fn pe_limit(&self, _theta: f64, s: f64, q: f64) -> f64 {
        gaussian_pair_pe(q, 2.0 * self.separation.half(s))
    }

    fn optimal_q(&self, _theta: f64, _s: f64) -> Option<f64> {
        Some(0.5)
    }
}

/// `P_e^inf(theta, s) = Q(s / sigma)` with `xi_n = n^{-1/2}`.
pub fn gaussian_location_limit(sigma: f64) -> Result<GaussianShiftLimit> {
    check_positive("sigma", sigma)?;
    Ok(GaussianShiftLimit {
        id: "gauss-location",
        xi_exponent: 0.5,
        variable: RateVariable::SampleSize,
        separation: Separation::Linear(1.0 / sigma),
    })
}

/// Constant-energy signal in white noise of two-sided density `N0 / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AwgnKind {
    /// Twice-differentiable signal whose derivative has power `pdot`.
    Smooth { pdot: f64, n0: f64 },
    /// Rectangular pulse of power `power` and duration `pulse`, delay parameter.
    Rect { power: f64, n0: f64, pulse: f64 },
}

/// Smooth signals: `Q(sqrt(2 Pdot / N0) s)` against `xi(T) = T^{-1/2}`.
/// Rectangular pulse: the correlation `1 - |d| / Delta` is linear in the offset,
/// giving `Q(sqrt(2 P s / (N0 Delta)))` against `xi(T) = 1/T`.
pub fn awgn_signal_limit(kind: AwgnKind) -> Result<GaussianShiftLimit> {
    match kind {
        AwgnKind::Smooth { pdot, n0 } => {
            check_positive("Pdot", pdot)?;
            check_positive("N0", n0)?;
            Ok(GaussianShiftLimit {
                id: "awgn-smooth",
                xi_exponent: 0.5,
                variable: RateVariable::ObservationTime,
                separation: Separation::Linear((2.0 * pdot / n0).sqrt()),
            })
        }
        AwgnKind::Rect { power, n0, pulse } => {
            check_positive("P", power)?;
            check_positive("N0", n0)?;
            check_positive("pulse duration", pulse)?;
            Ok(GaussianShiftLimit {
                id: "awgn-rect",
                xi_exponent: 1.0,
                variable: RateVariable::ObservationTime,
                separation: Separation::SqrtLinear(2.0 * power / (n0 * pulse)),
            })
        }
    }
}

type FisherFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One-parameter exponential family: `Q(s sqrt(I(theta)))` with `xi_n = n^{-1/2}`.
#[derive(Clone)]
pub struct ExpFamilyLimit {
    fisher: FisherFn,
}

impl ExpFamilyLimit {
    pub fn fisher(&self, theta: f64) -> f64 {
        (self.fisher)(theta)
    }
}

pub fn expfamily_limit<F>(fisher: F) -> ExpFamilyLimit
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    ExpFamilyLimit { fisher: Arc::new(fisher) }
}

impl LocalErrorLimit for ExpFamilyLimit {
    fn model_id(&self) -> &'static str {
        "exp-family"
    }

    fn xi_exponent(&self) -> f64 {
        0.5
    }

    fn validate_at(&self, theta: f64) -> Result<()> {
        let info = self.fisher(theta);
        if !info.is_finite() {
            return Err(Error::NumericalFailure(format!("Fisher information at {theta} is {info}")));
        }
        if info <= 0.0 {
            return Err(Error::invalid(format!("Fisher information at {theta} must be positive, got {info}")));
        }
        Ok(())
    }

    fn pe_limit(&self, theta: f64, s: f64, q: f64) -> f64 {
        gaussian_pair_pe(q, 2.0 * s.abs() * self.fisher(theta).sqrt())
    }

    fn optimal_q(&self, _theta: f64, _s: f64) -> Option<f64> {
        Some(0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::best_prior;
    use crate::models::test_support::assert_oracle_invariants;

    #[test]
    fn equal_prior_reduces_to_tail() {
        for &d in &[0.1, 1.0, 3.7] {
            assert!((gaussian_pair_pe(0.5, d) - gaussian_tail(d / 2.0)).abs() < 1e-15);
        }
        assert_eq!(gaussian_pair_pe(0.3, 0.0), 0.3);
    }

    #[test]
    fn location_limit_values() {
        let lim = gaussian_location_limit(2.0).unwrap();
        assert_eq!(lim.pe_inf(0.0, 0.0), 0.5);
        assert!((lim.pe_inf(0.0, 2.0) - 0.1587).abs() < 1e-4);
        assert!(gaussian_location_limit(0.0).is_err());
    }

    #[test]
    fn finite_n_matches_limit_exactly() {
        let sigma = 1.7;
        let oracle = GaussianLocation::new(sigma).unwrap();
        let lim = gaussian_location_limit(sigma).unwrap();
        let n = 400u64;
        for &s in &[0.3, 1.1, 2.4] {
            let delta = 2.0 * s / (n as f64).sqrt();
            let finite = oracle.pe(0.5, 0.2, 0.2 + delta, n).unwrap();
            let direct = gaussian_tail((n as f64).sqrt() * delta / (2.0 * sigma));
            assert!((finite - direct).abs() < 1e-15);
            assert!((finite - lim.pe_inf(0.2, s)).abs() < 1e-14);
        }
    }

    #[test]
    fn half_prior_is_optimal() {
        let oracle = GaussianLocation::new(1.0).unwrap();
        for &delta in &[0.05, 0.4, 1.5] {
            let (q, _) = best_prior(|q| oracle.pe(q, 0.0, delta, 9).unwrap());
            assert!((q - 0.5).abs() < 1e-6);
        }
        assert_oracle_invariants(&oracle, 0.0, 0.3, 16);
    }

    #[test]
    fn awgn_limits() {
        let smooth = awgn_signal_limit(AwgnKind::Smooth { pdot: 2.0, n0: 1.0 }).unwrap();
        assert_eq!(smooth.pe_inf(0.0, 0.0), 0.5);
        assert!((smooth.pe_inf(0.0, 0.5) - gaussian_tail(1.0)).abs() < 1e-15);
        let rect = awgn_signal_limit(AwgnKind::Rect { power: 1.0, n0: 2.0, pulse: 0.5 }).unwrap();
        assert!((rect.pe_inf(0.0, 0.5) - gaussian_tail(1.0)).abs() < 1e-15);
        assert_eq!(rect.xi_exponent(), 1.0);
        assert!(awgn_signal_limit(AwgnKind::Smooth { pdot: -1.0, n0: 1.0 }).is_err());
        assert!(awgn_signal_limit(AwgnKind::Rect { power: 1.0, n0: 1.0, pulse: 0.0 }).is_err());
    }

    #[test]
    fn exp_family_matches_gaussian_location() {
        let sigma = 0.6;
        let fam = expfamily_limit(move |_| 1.0 / (sigma * sigma));
        let loc = gaussian_location_limit(sigma).unwrap();
        for &s in &[0.0, 0.2, 0.9, 3.0] {
            assert!((fam.pe_inf(1.0, s) - loc.pe_inf(1.0, s)).abs() < 1e-15);
        }
        assert!(expfamily_limit(|_| -1.0).validate_at(0.0).is_err());
    }

    #[test]
    fn isotropic_depends_on_distance_only() {
        let o = IsotropicGaussian::new(1.0, 2).unwrap();
        let a = o.pe(0.4, &[0.0, 0.0], &[0.3, 0.4], 4).unwrap();
        let b = o.pe(0.4, &[1.0, 1.0], &[1.5, 1.0], 4).unwrap();
        assert!((a - b).abs() < 1e-15);
        assert!(o.pe(0.4, &[0.0], &[0.3, 0.4], 4).is_err());
    }
}
