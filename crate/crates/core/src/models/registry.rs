//! String-addressable model catalogue.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::models::monte_carlo::{ExponentialSampler, GaussianSampler, UniformLocationSampler, UniformScaleSampler};
use crate::models::{
    awgn_signal_limit, expfamily_limit, fisher_from_logz, gaussian_location_limit, AwgnKind, BinaryErrorOracle,
    ExponentialRate, GaussianLocation, IsotropicGaussian, LocalErrorLimit, ObservationModel, UniformLocation,
    UniformLocationLimit, UniformScale, UniformScaleLimit, VectorErrorOracle,
};
use crate::numerics::Interval;

pub const MODEL_IDS: [&str; 8] = [
    "exp-rate",
    "uniform-scale",
    "uniform-location",
    "gauss-location",
    "awgn-smooth",
    "awgn-rect",
    "exp-family",
    "nuisance-rotation",
];

/// Named real-valued model constants.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.0.insert(key.to_string(), value);
        self
    }

    pub fn insert(&mut self, key: &str, value: f64) {
        self.0.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.0.get(key).copied()
    }

    pub fn get_or(&self, key: &str, default: f64) -> f64 {
        self.get(key).unwrap_or(default)
    }

    pub fn require(&self, key: &str) -> Result<f64> {
        self.get(key).ok_or_else(|| Error::invalid(format!("missing parameter `{key}`")))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl FromIterator<(String, f64)> for Params {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        Params(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuisanceDescriptor {
    pub name: &'static str,
    pub space: Interval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelDescriptor {
    pub id: &'static str,
    pub parameter_space: Interval,
    pub nuisance: Option<NuisanceDescriptor>,
    /// Recognised constants besides the working point `theta`.
    pub params: &'static [&'static str],
    pub notes: &'static str,
}

const POSITIVE: Interval = Interval { lo: 0.0, hi: f64::INFINITY };
const REAL: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

static DESCRIPTORS: [ModelDescriptor; 8] = [
    ModelDescriptor {
        id: "exp-rate",
        parameter_space: POSITIVE,
        nuisance: None,
        params: &[],
        notes: "exponential observations with rate theta; local limit through I = 1/theta^2",
    },
    ModelDescriptor {
        id: "uniform-scale",
        parameter_space: POSITIVE,
        nuisance: None,
        params: &[],
        notes: "uniform on [0, theta]; spacing 1/n",
    },
    ModelDescriptor {
        id: "uniform-location",
        parameter_space: REAL,
        nuisance: None,
        params: &[],
        notes: "uniform on [theta, theta + 1]; spacing 1/n",
    },
    ModelDescriptor {
        id: "gauss-location",
        parameter_space: REAL,
        nuisance: None,
        params: &["sigma"],
        notes: "theta plus N(0, sigma^2) noise; spacing n^-1/2",
    },
    ModelDescriptor {
        id: "awgn-smooth",
        parameter_space: REAL,
        nuisance: None,
        params: &["pdot", "n0"],
        notes: "smooth constant-energy signal in white noise; derivative power pdot, spacing T^-1/2",
    },
    ModelDescriptor {
        id: "awgn-rect",
        parameter_space: REAL,
        nuisance: None,
        params: &["power", "n0", "pulse"],
        notes: "delay of a rectangular pulse in white noise; spacing 1/T",
    },
    ModelDescriptor {
        id: "exp-family",
        parameter_space: REAL,
        nuisance: None,
        params: &["fisher", "sigma"],
        notes: "regular exponential family; constant `fisher`, else I from ln Z = theta^2 sigma^2 / 2",
    },
    ModelDescriptor {
        id: "nuisance-rotation",
        parameter_space: REAL,
        nuisance: Some(NuisanceDescriptor { name: "zeta", space: Interval { lo: -1.0, hi: 1.0 } }),
        params: &["sigma", "delta"],
        notes: "mean (theta, theta + zeta) in isotropic planar noise; zeta in [-delta, delta]",
    },
];

pub fn descriptors() -> &'static [ModelDescriptor] {
    &DESCRIPTORS
}

pub fn descriptor(id: &str) -> Result<&'static ModelDescriptor> {
    DESCRIPTORS.iter().find(|d| d.id == id).ok_or_else(|| Error::UnknownId { kind: "model", id: id.to_string() })
}

/// A model with whichever evaluation paths it supports.
#[derive(Clone)]
pub struct ModelInstance {
    pub descriptor: ModelDescriptor,
    /// Working point for local bounds.
    pub theta: f64,
    pub oracle: Option<Arc<dyn BinaryErrorOracle>>,
    pub vector_oracle: Option<Arc<dyn VectorErrorOracle>>,
    pub limit: Option<Arc<dyn LocalErrorLimit>>,
    pub sampler: Option<Arc<dyn ObservationModel>>,
}

impl fmt::Debug for ModelInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModelInstance")
            .field("id", &self.descriptor.id)
            .field("theta", &self.theta)
            .field("oracle", &self.oracle.is_some())
            .field("vector_oracle", &self.vector_oracle.is_some())
            .field("limit", &self.limit.is_some())
            .field("sampler", &self.sampler.is_some())
            .finish()
    }
}

impl ModelInstance {
    pub fn id(&self) -> &'static str {
        self.descriptor.id
    }

    pub fn require_oracle(&self) -> Result<&dyn BinaryErrorOracle> {
        self.oracle
            .as_deref()
            .ok_or_else(|| Error::Unsupported(format!("model `{}` has no finite-sample oracle", self.id())))
    }

    pub fn require_limit(&self) -> Result<&dyn LocalErrorLimit> {
        self.limit.as_deref().ok_or_else(|| Error::Unsupported(format!("model `{}` has no local limit", self.id())))
    }

    pub fn require_vector_oracle(&self) -> Result<&dyn VectorErrorOracle> {
        self.vector_oracle
            .as_deref()
            .ok_or_else(|| Error::Unsupported(format!("model `{}` has no vector oracle", self.id())))
    }
}

const FISHER_STEP: f64 = 1e-3;

pub fn build_model(id: &str, params: &Params) -> Result<ModelInstance> {
    let desc = descriptor(id)?;
    if let Some(bad) = params.keys().find(|k| *k != "theta" && !desc.params.contains(k)) {
        return Err(Error::invalid(format!("model `{id}` does not take parameter `{bad}`")));
    }
    let default_theta = if desc.parameter_space.lo == 0.0 { 1.0 } else { 0.0 };
    let theta = params.get_or("theta", default_theta);
    if !theta.is_finite() || !desc.parameter_space.contains(theta) || (desc.parameter_space.lo == 0.0 && theta <= 0.0) {
        return Err(Error::invalid(format!("theta = {theta} outside the parameter space of `{id}`")));
    }
    let mut inst = ModelInstance {
        descriptor: desc.clone(),
        theta,
        oracle: None,
        vector_oracle: None,
        limit: None,
        sampler: None,
    };
    match id {
        "exp-rate" => {
            inst.oracle = Some(Arc::new(ExponentialRate));
            inst.limit = Some(Arc::new(expfamily_limit(|t| 1.0 / (t * t))));
            inst.sampler = Some(Arc::new(ExponentialSampler));
        }
        "uniform-scale" => {
            inst.oracle = Some(Arc::new(UniformScale));
            inst.limit = Some(Arc::new(UniformScaleLimit));
            inst.sampler = Some(Arc::new(UniformScaleSampler));
        }
        "uniform-location" => {
            inst.oracle = Some(Arc::new(UniformLocation));
            inst.limit = Some(Arc::new(UniformLocationLimit));
            inst.sampler = Some(Arc::new(UniformLocationSampler));
        }
        "gauss-location" => {
            let sigma = params.get_or("sigma", 1.0);
            inst.oracle = Some(Arc::new(GaussianLocation::new(sigma)?));
            inst.limit = Some(Arc::new(gaussian_location_limit(sigma)?));
            inst.sampler = Some(Arc::new(GaussianSampler { sigma }));
        }
        "awgn-smooth" => {
            let kind = AwgnKind::Smooth { pdot: params.get_or("pdot", 1.0), n0: params.get_or("n0", 1.0) };
            inst.limit = Some(Arc::new(awgn_signal_limit(kind)?));
        }
        "awgn-rect" => {
            let kind = AwgnKind::Rect {
                power: params.get_or("power", 1.0),
                n0: params.get_or("n0", 1.0),
                pulse: params.get_or("pulse", 1.0),
            };
            inst.limit = Some(Arc::new(awgn_signal_limit(kind)?));
        }
        "exp-family" => {
            let limit = match params.get("fisher") {
                Some(info) => expfamily_limit(move |_| info),
                None => {
                    let sigma = params.get_or("sigma", 1.0);
                    fisher_from_logz(|x| x * x * sigma * sigma / 2.0, theta, FISHER_STEP)?;
                    expfamily_limit(move |t| {
                        fisher_from_logz(|x| x * x * sigma * sigma / 2.0, t, FISHER_STEP).unwrap_or(f64::NAN)
                    })
                }
            };
            limit.validate_at(theta)?;
            inst.limit = Some(Arc::new(limit));
        }
        "nuisance-rotation" => {
            let sigma = params.get_or("sigma", 1.0);
            let delta = params.get_or("delta", 1.0);
            if !(delta > 0.0 && delta.is_finite()) {
                return Err(Error::invalid(format!("delta must be positive, got {delta}")));
            }
            inst.descriptor.nuisance = Some(NuisanceDescriptor { name: "zeta", space: Interval::new(-delta, delta)? });
            inst.vector_oracle = Some(Arc::new(IsotropicGaussian::new(sigma, 2)?));
            inst.limit = Some(Arc::new(gaussian_location_limit(sigma)?));
        }
        _ => unreachable!("descriptor lookup succeeded for {id}"),
    }
    Ok(inst)
}
