//! Lower bounds on `E|error|^t` from two test points with a split weight `r`.

use crate::bounds::{check_s_domain, or_nan, BoundReport, INNER_CELLS, OPT_TOL, OUTER_CELLS};
use crate::error::{Error, Result};
use crate::loss::LossSpec;
use crate::models::{weighted_min_integral, BinaryErrorOracle, LocalErrorLimit};
use crate::numerics::{maximize_1d_with, maximize_concave_1d, Interval};

const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RChoice {
    Optimize,
    Fixed(f64),
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 1.0 && t.is_finite()) {
        return Err(Error::PreconditionViolation(format!("moment bound needs t >= 1, got {t}")));
    }
    Ok(())
}

fn check_r(r: RChoice) -> Result<()> {
    if let RChoice::Fixed(r) = r {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::invalid(format!("r must lie in [0, 1], got {r}")));
        }
    }
    Ok(())
}

/// `[(1-r)^{t-1} q + r^{t-1} (1-q)] P_e(prior)` through the perspective form.
#[inline]
fn weighted_pe<F: Fn(f64) -> f64>(t: f64, q: f64, r: f64, pe: F) -> f64 {
    let a = (1.0 - r).powf(t - 1.0) * q;
    let b = r.powf(t - 1.0) * (1.0 - q);
    weighted_min_integral(a, b, pe)
}

/// Objective with an arbitrary separation `gap` and prior-indexed error.
fn core<F: Fn(f64) -> f64>(t: f64, gap: f64, q: f64, r: f64, pe: F) -> f64 {
    gap.abs().powf(t) * weighted_pe(t, q, r, pe)
}

/// Maximizes over `(q, r)` at one separation; returns `(value, q, r)`.
fn maximize_qr<F: Fn(f64) -> f64>(t: f64, gap: f64, r_choice: RChoice, pe: &F) -> Result<(f64, f64, f64)> {
    let best_q = |r: f64| -> Result<(f64, f64)> {
        let res = maximize_concave_1d(|q| core(t, gap, q, r, pe), UNIT, OPT_TOL)?;
        Ok((res.value, res.x()))
    };
    let r = match r_choice {
        RChoice::Fixed(r) => r,
        RChoice::Optimize => {
            maximize_1d_with(|r| best_q(r).map(|v| v.0).unwrap_or(f64::NAN), UNIT, OPT_TOL, INNER_CELLS)?.x()
        }
    };
    let (_, q) = best_q(r)?;
    Ok((core(t, gap, q, r, pe), q, r))
}

/// Finite-sample objective at `theta1 = theta0 + delta`.
pub fn theorem3_objective(
    oracle: &dyn BinaryErrorOracle,
    t: f64,
    theta0: f64,
    delta: f64,
    n: u64,
    q: f64,
    r: f64,
) -> Result<f64> {
    oracle.pe(0.5, theta0, theta0 + delta, n)?;
    Ok(core(t, delta, q, r, |p| or_nan(oracle.pe(p, theta0, theta0 + delta, n))))
}

/// `sup |theta1 - theta0|^t [(1-r)^{t-1} q + r^{t-1} (1-q)] P_e(.)` over
/// `theta1 = theta0 + delta`, `delta` in `delta_domain`.
pub fn theorem3_moment(
    oracle: &dyn BinaryErrorOracle,
    t: f64,
    theta0: f64,
    delta_domain: Interval,
    n: u64,
    r_choice: RChoice,
) -> Result<BoundReport> {
    check_t(t)?;
    check_r(r_choice)?;
    for d in [delta_domain.lo, delta_domain.hi] {
        oracle.pe(0.5, theta0, theta0 + d, n)?;
    }
    let at = |d: f64| -> Result<(f64, f64, f64)> {
        let pe = |p: f64| or_nan(oracle.pe(p, theta0, theta0 + d, n));
        maximize_qr(t, d, r_choice, &pe)
    };
    let res = maximize_1d_with(|d| at(d).map(|v| v.0).unwrap_or(f64::NAN), delta_domain, OPT_TOL, OUTER_CELLS)?;
    let delta = res.x();
    let (_, q, r) = at(delta)?;
    let value = theorem3_objective(oracle, t, theta0, delta, n, q, r)?;
    Ok(BoundReport::new("theorem3", oracle.model_id(), value, LossSpec::power(t)?)
        .with_arg("delta", delta)
        .with_arg("q", q)
        .with_arg("r", r)
        .with_arg("theta0", theta0))
}

/// Local objective with `theta1 - theta0 = 2 s xi_n`.
pub fn theorem3_local_objective(limit: &dyn LocalErrorLimit, t: f64, theta: f64, s: f64, q: f64, r: f64) -> f64 {
    core(t, 2.0 * s, q, r, |p| limit.pe_limit(theta, s, p))
}

pub fn theorem3_local(
    limit: &dyn LocalErrorLimit,
    t: f64,
    theta: f64,
    s_domain: Interval,
    r_choice: RChoice,
) -> Result<BoundReport> {
    check_t(t)?;
    check_r(r_choice)?;
    limit.validate_at(theta)?;
    let domain = check_s_domain(s_domain)?;
    let loss = LossSpec::power(t)?;
    let rate = limit.rate(&loss)?;
    let at = |s: f64| maximize_qr(t, 2.0 * s, r_choice, &|p| limit.pe_limit(theta, s, p));
    let res = maximize_1d_with(|s| at(s).map(|v| v.0).unwrap_or(f64::NAN), domain, OPT_TOL, OUTER_CELLS)?;
    let s = res.x();
    let (_, q, r) = at(s)?;
    let value = theorem3_local_objective(limit, t, theta, s, q, r);
    Ok(BoundReport::new("theorem3", limit.model_id(), value, loss)
        .with_rate(rate)
        .with_arg("s", s)
        .with_arg("q", q)
        .with_arg("r", r)
        .with_arg("theta", theta))
}
