//! MSE bounds from three test points `theta0 - delta, theta0, theta0 + delta`.

use crate::bounds::{check_s_domain, or_nan, BoundReport, INNER_CELLS, OPT_TOL, OUTER_CELLS};
use crate::error::{Error, Result};
use crate::loss::{LossSpec, RatePower, RateVariable};
use crate::models::{weighted_min_integral, BinaryErrorOracle, LocalErrorLimit};
use crate::numerics::{maximize_1d_with, maximize_concave_1d, maximize_simplex_with, Interval, OptResult};

const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };
const SIMPLEX_DENSITY: usize = 40;

/// How the middle point's weight `r` is split between the two pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairPriors {
    /// `u` and `v` maximize each pair term separately.
    Optimized,
    /// `u = q / (q + r)` and `v = w / (w + r)`, which gives both pairs an equal
    /// prior split; optimal when the pair error peaks at 1/2 and keeps the
    /// bound in the product form `max 4 s^2 P_e^inf(1/2) * max_simplex`.
    Balanced,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreePointOptions {
    pub pair_priors: PairPriors,
    /// Restrict to `w = 0`, which reduces the bound to the two-point MSE moment bound.
    pub w_zero: bool,
    pub domain: Interval,
}

impl ThreePointOptions {
    pub fn new(pair_priors: PairPriors, domain: Interval) -> Self {
        ThreePointOptions { pair_priors, w_zero: false, domain }
    }
}

/// `max_u M((1-u) a, u b)` with `M(x, y) = (x + y) P_e(x / (x + y))`; returns `(value, u)`.
fn pair_term<F: Fn(f64) -> f64>(a: f64, b: f64, policy: PairPriors, pe: &F) -> Result<(f64, f64)> {
    let m = |u: f64| weighted_min_integral((1.0 - u) * a, u * b, pe);
    let u = match policy {
        PairPriors::Balanced => {
            if a + b > 0.0 {
                a / (a + b)
            } else {
                0.5
            }
        }
        PairPriors::Optimized => maximize_concave_1d(m, UNIT, OPT_TOL)?.x(),
    };
    Ok((m(u), u))
}

struct Inner {
    value: f64,
    q: f64,
    r: f64,
    w: f64,
    u: f64,
    v: f64,
}

/// `lower(p)` is the error of the pair `(theta0 - delta, theta0)` with prior `p`
/// on the lower point, `upper(p)` that of `(theta0, theta0 + delta)` with prior
/// `p` on `theta0`.
fn maximize_weights<L, U>(gap: f64, opts: &ThreePointOptions, lower: &L, upper: &U) -> Result<Inner>
where
    L: Fn(f64) -> f64,
    U: Fn(f64) -> f64,
{
    let eval = |q: f64, r: f64, w: f64| -> Result<Inner> {
        let (lo, u) = pair_term(q, r, opts.pair_priors, lower)?;
        // For the upper pair the roles swap: weight v r on theta0, (1 - v) w on theta0 + delta.
        let (hi, one_minus_v) = pair_term(r, w, opts.pair_priors, upper)?;
        Ok(Inner { value: gap * gap * (lo + hi), q, r, w, u, v: 1.0 - one_minus_v })
    };
    let best: OptResult = if opts.w_zero {
        maximize_simplex_with(|x| eval(x[0], x[1], 0.0).map(|i| i.value).unwrap_or(f64::NAN), 2, OPT_TOL, 0)?
    } else {
        maximize_simplex_with(
            |x| eval(x[0], x[1], x[2]).map(|i| i.value).unwrap_or(f64::NAN),
            3,
            OPT_TOL,
            SIMPLEX_DENSITY,
        )?
    };
    let x = &best.argmax;
    eval(x[0], x[1], if opts.w_zero { 0.0 } else { x[2] })
}

#[allow(clippy::too_many_arguments)]
fn objective<L, U>(gap: f64, q: f64, r: f64, w: f64, u: f64, v: f64, lower: &L, upper: &U) -> f64
where
    L: Fn(f64) -> f64,
    U: Fn(f64) -> f64,
{
    let lo = weighted_min_integral((1.0 - u) * q, u * r, lower);
    let hi = weighted_min_integral(v * r, (1.0 - v) * w, upper);
    gap * gap * (lo + hi)
}

/// Local objective with `delta = 2 s xi_n`.
#[allow(clippy::too_many_arguments)]
pub fn theorem4_local_objective(
    limit: &dyn LocalErrorLimit,
    theta: f64,
    s: f64,
    q: f64,
    r: f64,
    w: f64,
    u: f64,
    v: f64,
) -> f64 {
    let pe = |p: f64| limit.pe_limit(theta, s, p);
    objective(2.0 * s, q, r, w, u, v, &pe, &pe)
}

fn report(inner: &Inner, bound_model: (&str, &str), geometry: (&str, f64)) -> Result<BoundReport> {
    Ok(BoundReport::new(bound_model.0, bound_model.1, inner.value, LossSpec::mse())
        .with_arg(geometry.0, geometry.1)
        .with_arg("q", inner.q)
        .with_arg("r", inner.r)
        .with_arg("w", inner.w)
        .with_arg("u", inner.u)
        .with_arg("v", inner.v))
}

pub fn theorem4_local(limit: &dyn LocalErrorLimit, theta: f64, opts: ThreePointOptions) -> Result<BoundReport> {
    limit.validate_at(theta)?;
    let domain = check_s_domain(opts.domain)?;
    let rate = limit.rate(&LossSpec::mse())?;
    let at = |s: f64| {
        let pe = |p: f64| limit.pe_limit(theta, s, p);
        maximize_weights(2.0 * s, &opts, &pe, &pe)
    };
    let res = maximize_1d_with(|s| at(s).map(|i| i.value).unwrap_or(f64::NAN), domain, OPT_TOL, OUTER_CELLS)?;
    let s = res.x();
    let mut inner = at(s)?;
    inner.value = theorem4_local_objective(limit, theta, s, inner.q, inner.r, inner.w, inner.u, inner.v);
    let mut rep = report(&inner, ("theorem4", limit.model_id()), ("s", s))?.with_arg("theta", theta).with_rate(rate);
    if opts.pair_priors == PairPriors::Balanced {
        rep = rep.with_note("pair priors balanced: u = q/(q+r), v = w/(w+r)");
    }
    if limit.model_id() == "uniform-scale" {
        rep = rep.with_note(format!(
            "value includes the factor theta0^2 = {}; the dimensionless coefficient is {}",
            theta * theta,
            inner.value / (theta * theta)
        ));
    }
    Ok(rep)
}

/// Finite-sample objective at test points `theta0 - delta, theta0, theta0 + delta`.
#[allow(clippy::too_many_arguments)]
pub fn theorem4_objective(
    oracle: &dyn BinaryErrorOracle,
    theta0: f64,
    delta: f64,
    n: u64,
    weights: [f64; 3],
    u: f64,
    v: f64,
) -> Result<f64> {
    oracle.pe(0.5, theta0 - delta, theta0, n)?;
    oracle.pe(0.5, theta0, theta0 + delta, n)?;
    let lower = |p: f64| or_nan(oracle.pe(p, theta0 - delta, theta0, n));
    let upper = |p: f64| or_nan(oracle.pe(p, theta0, theta0 + delta, n));
    Ok(objective(delta, weights[0], weights[1], weights[2], u, v, &lower, &upper))
}

pub fn theorem4_three_point(
    oracle: &dyn BinaryErrorOracle,
    theta0: f64,
    n: u64,
    opts: ThreePointOptions,
) -> Result<BoundReport> {
    let domain = opts.domain;
    if !(domain.lo >= 0.0 && domain.hi.is_finite()) {
        return Err(Error::invalid("spacing domain must be a finite subset of [0, inf)"));
    }
    for d in [domain.lo, domain.hi] {
        oracle.pe(0.5, theta0 - d, theta0, n)?;
        oracle.pe(0.5, theta0, theta0 + d, n)?;
    }
    let at = |d: f64| {
        let lower = |p: f64| or_nan(oracle.pe(p, theta0 - d, theta0, n));
        let upper = |p: f64| or_nan(oracle.pe(p, theta0, theta0 + d, n));
        maximize_weights(d, &opts, &lower, &upper)
    };
    let res = maximize_1d_with(|d| at(d).map(|i| i.value).unwrap_or(f64::NAN), domain, OPT_TOL, INNER_CELLS)?;
    let delta = res.x();
    let mut inner = at(delta)?;
    inner.value = theorem4_objective(oracle, theta0, delta, n, [inner.q, inner.r, inner.w], inner.u, inner.v)?;
    Ok(report(&inner, ("theorem4", oracle.model_id()), ("delta", delta))?.with_arg("theta0", theta0))
}

/// Exact local three-point MSE objective for the uniform scale family with
/// `theta1 = theta0 (1 + s/n)`, dimensionless (multiply by `theta0^2`).
pub fn three_point_exact_objective(s: f64, q: f64, r: f64, w: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let (e1, e2, em) = (s.exp(), (2.0 * s).exp(), (-s).exp());
    let den1 = q * e2 + r * e1 + w;
    let den2 = r * e1 + w;
    let first = if den1 > 0.0 { (q * r * e1 + 4.0 * q * w + r * w * em) / den1 } else { 0.0 };
    let second = if den2 > 0.0 { r * w * (1.0 - em) / den2 } else { 0.0 };
    s * s * (first + second)
}

pub fn three_point_exact_uniform(theta0: f64, s_domain: Interval) -> Result<BoundReport> {
    if !(theta0 > 0.0 && theta0.is_finite()) {
        return Err(Error::invalid(format!("uniform scale needs theta0 > 0, got {theta0}")));
    }
    let domain = check_s_domain(s_domain)?;
    let at = |s: f64| {
        maximize_simplex_with(|x| three_point_exact_objective(s, x[0], x[1], x[2]), 3, OPT_TOL, SIMPLEX_DENSITY)
    };
    let res = maximize_1d_with(|s| at(s).map(|r| r.value).unwrap_or(f64::NAN), domain, OPT_TOL, OUTER_CELLS)?;
    let s = res.x();
    let w = at(s)?.argmax;
    let scale = theta0 * theta0;
    let value = scale * three_point_exact_objective(s, w[0], w[1], w[2]);
    Ok(BoundReport::new("three-point-exact", "uniform-scale", value, LossSpec::mse())
        .with_rate(RatePower { xi_exponent: 1.0, zeta_exponent: 2.0, variable: RateVariable::SampleSize })
        .with_arg("s", s)
        .with_arg("q", w[0])
        .with_arg("r", w[1])
        .with_arg("w", w[2])
        .with_arg("theta0", theta0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{theorem3_local, RChoice, DEFAULT_S_DOMAIN};
    use crate::models::{gaussian_location_limit, GaussianLocation, UniformScaleLimit};

    #[test]
    fn gaussian_balanced_product_form() {
        let lim = gaussian_location_limit(1.0).unwrap();
        let r = theorem4_local(&lim, 0.0, ThreePointOptions::new(PairPriors::Balanced, DEFAULT_S_DOMAIN)).unwrap();
        assert!((r.value - 0.662_866 * 0.686_292).abs() < 1e-5, "{}", r.value);
        let [s, q, rr, w, u, v] = ["s", "q", "r", "w", "u", "v"].map(|k| r.arg(k).unwrap());
        let again = theorem4_local_objective(&lim, 0.0, s, q, rr, w, u, v);
        assert!((again - r.value).abs() <= 1e-9 * r.value);
    }

    #[test]
    fn gaussian_optimized_dominates_balanced() {
        let lim = gaussian_location_limit(1.0).unwrap();
        let b = theorem4_local(&lim, 0.0, ThreePointOptions::new(PairPriors::Balanced, DEFAULT_S_DOMAIN)).unwrap();
        let o = theorem4_local(&lim, 0.0, ThreePointOptions::new(PairPriors::Optimized, DEFAULT_S_DOMAIN)).unwrap();
        assert!(o.value >= b.value - 1e-9);
        assert!((o.value - 0.462_42).abs() < 1e-4, "{}", o.value);
    }

    #[test]
    fn uniform_scale_coefficient() {
        let r =
            theorem4_local(&UniformScaleLimit, 1.0, ThreePointOptions::new(PairPriors::Optimized, DEFAULT_S_DOMAIN))
                .unwrap();
        assert!((r.value - 0.390_928).abs() < 1e-4, "{}", r.value);
    }

    #[test]
    fn upper_weight_zero_recovers_moment_bound() {
        let mut opts = ThreePointOptions::new(PairPriors::Optimized, DEFAULT_S_DOMAIN);
        opts.w_zero = true;
        let a = theorem4_local(&UniformScaleLimit, 1.0, opts).unwrap();
        let b = theorem3_local(&UniformScaleLimit, 2.0, 1.0, DEFAULT_S_DOMAIN, RChoice::Optimize).unwrap();
        assert!((a.value - b.value).abs() < 1e-6, "{} vs {}", a.value, b.value);
        assert_eq!(a.arg("w"), Some(0.0));
    }

    #[test]
    fn exact_uniform_three_point() {
        let r = three_point_exact_uniform(1.0, DEFAULT_S_DOMAIN).unwrap();
        assert!((r.value - 0.462_429).abs() < 1e-4, "{}", r.value);
        assert_eq!(three_point_exact_objective(0.0, 0.3, 0.3, 0.4), 0.0);
        let two = three_point_exact_uniform(2.0, DEFAULT_S_DOMAIN).unwrap();
        assert!((two.value - 4.0 * r.value).abs() < 1e-6);
    }

    #[test]
    fn finite_gaussian_three_point() {
        let o = GaussianLocation::new(1.0).unwrap();
        let n = 100;
        let opts = ThreePointOptions::new(PairPriors::Balanced, Interval { lo: 0.0, hi: 1.0 });
        let r = theorem4_three_point(&o, 0.0, n, opts).unwrap();
        assert!((r.value * n as f64 - 0.4549).abs() < 1e-3, "{}", r.value * n as f64);
    }

    #[test]
    fn finite_domain_must_be_admissible() {
        let opts = ThreePointOptions::new(PairPriors::Optimized, Interval { lo: 0.0, hi: 2.0 });
        assert!(theorem4_three_point(&crate::models::UniformScale, 1.0, 4, opts).is_err());
    }
}
