//! Bounds built from norm-preserving transforms summing to zero, for vector
//! parameters and radial losses.

use std::cell::RefCell;
use std::f64::consts::PI;

use crate::bounds::{check_radial_convex, check_s_domain, BoundReport, OPT_TOL, OUTER_CELLS};
use crate::error::{Error, Result};
use crate::loss::{eval_rho, LossSpec, RatePower, RateVariable};
use crate::models::VectorErrorOracle;
use crate::numerics::{gaussian_tail, integrate_semi_infinite, maximize_1d_with, Interval};

const NORM_TOL: f64 = 1e-12;
const SUM_TOL: f64 = 1e-9;
const INTEGRAL_TOL: f64 = 1e-11;

/// Linear maps `T_0, ..., T_{m-1}` on `R^dim`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformSet {
    dim: usize,
    matrices: Vec<Vec<f64>>,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl TransformSet {
    /// Validates norm preservation and the zero-sum property on a test grid.
    pub fn new(dim: usize, matrices: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 || matrices.len() < 2 {
            return Err(Error::InvariantViolation("need at least two transforms of positive dimension".into()));
        }
        if let Some(bad) = matrices.iter().position(|m| m.len() != dim * dim) {
            return Err(Error::InvariantViolation(format!("transform {bad} is not {dim}x{dim}")));
        }
        let set = TransformSet { dim, matrices };
        for x in set.test_grid() {
            let nx = norm(&x);
            let mut total = vec![0.0; dim];
            for i in 0..set.m() {
                let y = set.apply(i, &x);
                if (norm(&y) - nx).abs() > NORM_TOL * nx {
                    return Err(Error::InvariantViolation(format!("transform {i} does not preserve norms")));
                }
                total.iter_mut().zip(&y).for_each(|(t, v)| *t += v);
            }
            if norm(&total) > SUM_TOL * nx {
                return Err(Error::InvariantViolation("transforms do not sum to zero".into()));
            }
        }
        Ok(set)
    }

    /// Rotations of the plane by `2 pi i / m`.
    pub fn rotations_2d(m: usize) -> Result<Self> {
        let mats = (0..m)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / m as f64;
                let (s, c) = a.sin_cos();
                vec![c, -s, s, c]
            })
            .collect();
        TransformSet::new(2, mats)
    }

    /// `{I, -I}` on `R^dim`.
    pub fn antipodal(dim: usize) -> Result<Self> {
        let eye: Vec<f64> = (0..dim * dim).map(|k| if k % (dim + 1) == 0 { 1.0 } else { 0.0 }).collect();
        let neg = eye.iter().map(|v| -v).collect();
        TransformSet::new(dim, vec![eye, neg])
    }

    pub fn m(&self) -> usize {
        self.matrices.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, i: usize, x: &[f64]) -> Vec<f64> {
        let m = &self.matrices[i];
        (0..self.dim).map(|r| (0..self.dim).map(|c| m[r * self.dim + c] * x[c]).sum()).collect()
    }

    fn test_grid(&self) -> Vec<Vec<f64>> {
        let d = self.dim;
        let mut grid: Vec<Vec<f64>> =
            (0..d).map(|j| (0..d).map(|k| if j == k { 1.0 } else { 0.0 }).collect()).collect();
        grid.push((0..d).map(|k| 1.0 + k as f64).collect());
        grid.push((0..d).map(|k| if k % 2 == 0 { -0.3 } else { 2.7 }).collect());
        grid
    }

    fn mean_of_first(&self, k: usize, x: &[f64]) -> Vec<f64> {
        let mut total = vec![0.0; self.dim];
        for i in 0..k {
            total.iter_mut().zip(self.apply(i, x)).for_each(|(t, v)| *t += v);
        }
        total.iter().map(|t| t / self.m() as f64).collect()
    }
}

/// `rho(|(1/m) sum_{i<k} T_i (vt0 - vt1)|) P_e(q, vt0, vt1) / (1 - a - q + 2 a q)`
/// with `a = k / m`.
#[allow(clippy::too_many_arguments)]
pub fn corollary2_transform(
    oracle: &dyn VectorErrorOracle,
    loss: &LossSpec,
    transforms: &TransformSet,
    vartheta0: &[f64],
    vartheta1: &[f64],
    k: usize,
    q: f64,
    n: u64,
) -> Result<BoundReport> {
    check_radial_convex(loss, "the transform bound")?;
    let m = transforms.m();
    if k == 0 || k >= m {
        return Err(Error::invalid(format!("k must satisfy 0 < k < m = {m}, got {k}")));
    }
    if vartheta0.len() != transforms.dim() || vartheta1.len() != transforms.dim() {
        return Err(Error::invalid("parameter dimension does not match the transforms"));
    }
    if oracle.dim() != transforms.dim() {
        return Err(Error::invalid("model dimension does not match the transforms"));
    }
    let alpha_frac = k as f64 / m as f64;
    let diff: Vec<f64> = vartheta0.iter().zip(vartheta1).map(|(a, b)| a - b).collect();
    let spread = norm(&transforms.mean_of_first(k, &diff));
    let pe = oracle.pe(q, vartheta0, vartheta1, n)?;
    let denom = 1.0 - alpha_frac - q + 2.0 * alpha_frac * q;
    let value = eval_rho(loss, spread) * pe / denom;
    Ok(BoundReport::new("corollary2", "vector", value, loss.clone())
        .with_arg("q", q)
        .with_arg("alpha_frac", alpha_frac)
        .with_arg("m", m as f64))
}

/// `m rho(|(1/m) sum T_i theta_i|) * list_error`, with the list-error
/// probability `int min_i q_i p(x | theta_i) dx` supplied by the caller.
pub fn theorem2_list_bound(
    loss: &LossSpec,
    transforms: &TransformSet,
    thetas: &[Vec<f64>],
    list_error: f64,
) -> Result<BoundReport> {
    check_radial_convex(loss, "the list-error bound")?;
    let m = transforms.m();
    if thetas.len() != m || thetas.iter().any(|t| t.len() != transforms.dim()) {
        return Err(Error::invalid(format!("need {m} test points of dimension {}", transforms.dim())));
    }
    if !(0.0..=1.0).contains(&list_error) {
        return Err(Error::invalid(format!("list-error probability must lie in [0, 1], got {list_error}")));
    }
    let mut total = vec![0.0; transforms.dim()];
    for (i, t) in thetas.iter().enumerate() {
        total.iter_mut().zip(transforms.apply(i, t)).for_each(|(a, v)| *a += v);
    }
    let center = norm(&total) / m as f64;
    let value = m as f64 * eval_rho(loss, center) * list_error;
    Ok(BoundReport::new("theorem2", "external", value, loss.clone()).with_arg("m", m as f64))
}

/// `(1/sqrt(2 pi)) int_0^inf exp(-(u + s)^2 / 2) (1 - 2 Q(u sqrt 3)) du`: the
/// limiting probability that the first of three rotated test points loses.
pub fn example7_inner_integral(s: f64) -> Result<f64> {
    let r3 = 3f64.sqrt();
    let c = 1.0 / (2.0 * PI).sqrt();
    integrate_semi_infinite(
        |u| c * (-(u + s) * (u + s) / 2.0).exp() * (1.0 - 2.0 * gaussian_tail(u * r3)),
        0.0,
        INTEGRAL_TOL,
    )
}

/// `3 s^2 I(s)`, the coefficient of `sigma^2 / n`.
pub fn example7_objective(s: f64) -> Result<f64> {
    Ok(3.0 * s * s * example7_inner_integral(s)?)
}

/// Three rotations by `2 pi i / 3` in the plane with a nuisance second
/// coordinate: risk `>= sigma^2 sup_s 3 s^2 I(s)` against `zeta_n = n`.
pub fn example7_nuisance_bound(sigma: f64, s_domain: Interval) -> Result<BoundReport> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    let domain = check_s_domain(s_domain)?;
    let failure = RefCell::new(None);
    let res = maximize_1d_with(
        |s| match example7_objective(s) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        domain,
        OPT_TOL,
        OUTER_CELLS,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let s = res?.x();
    let value = sigma * sigma * example7_objective(s)?;
    Ok(BoundReport::new("rotation3", "nuisance-rotation", value, LossSpec::mse())
        .with_rate(RatePower { xi_exponent: 0.5, zeta_exponent: 1.0, variable: RateVariable::SampleSize })
        .with_arg("s", s)
        .with_arg("sigma", sigma))
}
