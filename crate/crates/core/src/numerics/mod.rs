//! Special functions, quadrature, and derivative-free maximizers shared by
//! every bound computation.

mod optimize;
mod quadrature;
mod special;

pub use optimize::{
    maximize_1d, maximize_1d_with, maximize_concave_1d, maximize_simplex, maximize_simplex_with, OptResult,
    DEFAULT_GRID_CELLS, DEFAULT_SIMPLEX_DENSITY,
};
pub use quadrature::{integrate, integrate_semi_infinite, DEFAULT_QUAD_TOL};
pub use special::{erfc, gaussian_density, gaussian_tail};

use crate::error::{Error, Result};

/// Default refinement tolerance for the maximizers.
pub const DEFAULT_OPT_TOL: f64 = 1e-7;

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::invalid(format!("empty or malformed interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}
