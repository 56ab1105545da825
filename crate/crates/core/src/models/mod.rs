//! Parametric families exposing the error probability of the optimal MAP test
//! between two parameter values, and its limit as the values merge.

mod exponential;
mod fisher;
mod gaussian;
mod monte_carlo;
mod registry;
mod uniform;

pub use exponential::{exponential_rate_pe, ExponentialRate};
pub use fisher::fisher_from_logz;
pub use gaussian::{
    awgn_signal_limit, expfamily_limit, gaussian_location_limit, gaussian_pair_pe, AwgnKind, ExpFamilyLimit,
    GaussianLocation, GaussianShiftLimit, IsotropicGaussian, Separation,
};
pub use monte_carlo::{
    monte_carlo_pe, ExponentialSampler, GaussianSampler, McEstimate, McRng, ObservationModel, UniformLocationSampler,
    UniformScaleSampler, DEFAULT_SEED, MIN_TRIALS,
};
pub use registry::{
    build_model, descriptor, descriptors, ModelDescriptor, ModelInstance, NuisanceDescriptor, Params, MODEL_IDS,
};
pub use uniform::{
    uniform_location_pe, uniform_scale_pe, UniformLocation, UniformLocationLimit, UniformScale, UniformScaleLimit,
};

use crate::error::{Error, Result};
use crate::loss::{LossSpec, RatePower, RateVariable};
use crate::numerics::{maximize_concave_1d, Interval};

/// Exact `P_e(q, theta0, theta1)` at sample size `n`.
///
/// Implementations accept either ordering of the two parameters and satisfy
/// `pe(q, a, b) = pe(1 - q, b, a)`; coincident parameters give `min(q, 1 - q)`.
pub trait BinaryErrorOracle: Send + Sync {
    fn model_id(&self) -> &'static str;
    fn pe(&self, q: f64, theta0: f64, theta1: f64, n: u64) -> Result<f64>;
}

/// `P_e` for vector parameters, used by the transform-based bounds.
pub trait VectorErrorOracle: Send + Sync {
    fn dim(&self) -> usize;
    fn pe(&self, q: f64, theta0: &[f64], theta1: &[f64], n: u64) -> Result<f64>;
}

/// Lifts a scalar oracle to one-dimensional vector parameters.
pub struct ScalarAsVector<'a>(pub &'a dyn BinaryErrorOracle);

impl VectorErrorOracle for ScalarAsVector<'_> {
    fn dim(&self) -> usize {
        1
    }

    fn pe(&self, q: f64, theta0: &[f64], theta1: &[f64], n: u64) -> Result<f64> {
        match (theta0, theta1) {
            ([a], [b]) => self.0.pe(q, *a, *b, n),
            _ => Err(Error::invalid("scalar model expects one-dimensional parameters")),
        }
    }
}

/// Limit of `P_e(q, theta, theta + 2 s xi_n)` with `xi_n = n^-gamma`.
pub trait LocalErrorLimit: Send + Sync {
    fn model_id(&self) -> &'static str;

    /// The exponent `gamma` of the spacing sequence.
    fn xi_exponent(&self) -> f64;

    fn rate_variable(&self) -> RateVariable {
        RateVariable::SampleSize
    }

    /// Rejects working points where the limit is undefined.
    fn validate_at(&self, _theta: f64) -> Result<()> {
        Ok(())
    }

    /// Limit error probability for a general prior `q` on the lower point.
    fn pe_limit(&self, theta: f64, s: f64, q: f64) -> f64;

    /// The prior maximizing `pe_limit`, when known in closed form.
    fn optimal_q(&self, _theta: f64, _s: f64) -> Option<f64> {
        None
    }

    /// `max_q pe_limit(theta, s, q)`.
    fn pe_inf(&self, theta: f64, s: f64) -> f64 {
        match self.optimal_q(theta, s) {
            Some(q) => self.pe_limit(theta, s, q),
            None => best_prior(|q| self.pe_limit(theta, s, q)).1,
        }
    }

    fn pe_inf_halfprior(&self, theta: f64, s: f64) -> f64 {
        self.pe_limit(theta, s, 0.5)
    }

    fn rate(&self, loss: &LossSpec) -> Result<RatePower> {
        RatePower::for_loss(self.xi_exponent(), self.rate_variable(), loss)
    }
}

/// Maximizes a function of the prior that is concave on `[0, 1]`.
pub(crate) fn best_prior<F: Fn(f64) -> f64>(f: F) -> (f64, f64) {
    let unit = Interval { lo: 0.0, hi: 1.0 };
    let r = maximize_concave_1d(f, unit, 1e-10).expect("unit interval with positive tolerance");
    (r.x(), r.value)
}

pub(crate) fn check_prior(q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid(format!("prior must lie in [0, 1], got {q}")));
    }
    Ok(())
}

pub(crate) fn check_finite(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("{name} must be finite, got {x}")));
    }
    Ok(())
}

/// Orders a pair so the first parameter is the smaller, adjusting the prior.
#[inline]
pub(crate) fn canonical(q: f64, theta0: f64, theta1: f64) -> (f64, f64, f64) {
    if theta0 <= theta1 {
        (q, theta0, theta1)
    } else {
        (1.0 - q, theta1, theta0)
    }
}

/// Weighted min-integral `int min{a p0, b p1} = (a + b) P_e(a / (a + b))`.
pub(crate) fn weighted_min_integral<F: Fn(f64) -> f64>(a: f64, b: f64, pe: F) -> f64 {
    let total = a + b;
    if total <= 0.0 {
        0.0
    } else {
        total * pe(a / total)
    }
}
