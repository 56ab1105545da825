//! Lower-bound engines. Each returns a [`BoundReport`] whose `argmax`, fed
//! back through the matching public objective, reproduces `value`.

mod moment;
mod pairwise;
mod three_point;
mod transform;
mod two_point;

use std::collections::BTreeMap;

pub use moment::{theorem3_local, theorem3_local_objective, theorem3_moment, theorem3_objective, RChoice};
pub use pairwise::{pairwise_allpairs_bound, pairwise_ring_bound};
pub use three_point::{
    theorem4_local, theorem4_local_objective, theorem4_three_point, three_point_exact_objective,
    three_point_exact_uniform, PairPriors, ThreePointOptions,
};
pub use transform::{
    corollary2_transform, example7_inner_integral, example7_nuisance_bound, example7_objective, theorem2_list_bound,
    TransformSet,
};
pub use two_point::{
    concave_two_point, corollary1_local, corollary1_objective, theorem1_objective, theorem1_two_point, PriorChoice,
};

use crate::error::{Error, Result};
use crate::loss::{LossSpec, RatePower};
use crate::numerics::Interval;

/// Default range of the local spacing scale `s`.
pub const DEFAULT_S_DOMAIN: Interval = Interval { lo: 0.0, hi: 20.0 };

/// Resolution of the scan over the outermost geometric parameter.
pub(crate) const OUTER_CELLS: usize = 256;
/// Resolution of scans nested inside another optimization.
pub(crate) const INNER_CELLS: usize = 64;
pub(crate) const OPT_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub bound_id: String,
    pub model_id: String,
    pub value: f64,
    /// Normalization `zeta` for local bounds; `None` for finite-sample bounds.
    pub rate: Option<RatePower>,
    pub argmax: BTreeMap<String, f64>,
    pub loss: LossSpec,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(bound_id: &str, model_id: &str, value: f64, loss: LossSpec) -> Self {
        BoundReport {
            bound_id: bound_id.to_string(),
            model_id: model_id.to_string(),
            value,
            rate: None,
            argmax: BTreeMap::new(),
            loss,
            notes: Vec::new(),
        }
    }

    pub fn with_arg(mut self, key: &str, value: f64) -> Self {
        self.argmax.insert(key.to_string(), value);
        self
    }

    pub fn with_rate(mut self, rate: RatePower) -> Self {
        self.rate = Some(rate);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn arg(&self, key: &str) -> Option<f64> {
        self.argmax.get(key).copied()
    }
}

pub(crate) fn check_radial_convex(loss: &LossSpec, bound: &str) -> Result<()> {
    if !(loss.convex && loss.symmetric) {
        return Err(Error::PreconditionViolation(format!(
            "{bound} needs a convex symmetric loss, `{}` is not; use the concave two-point bound",
            loss.describe()
        )));
    }
    Ok(())
}

pub(crate) fn check_s_domain(domain: Interval) -> Result<Interval> {
    if !(domain.lo >= 0.0 && domain.hi > domain.lo && domain.hi.is_finite()) {
        return Err(Error::invalid(format!(
            "spacing domain [{}, {}] must be a finite non-empty subset of [0, inf)",
            domain.lo, domain.hi
        )));
    }
    Ok(domain)
}

/// Maps a fallible evaluation into the optimizers' NaN-rejecting convention.
#[inline]
pub(crate) fn or_nan(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}
