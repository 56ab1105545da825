use crate::bounds::{check_radial_convex, check_s_domain, BoundReport, OPT_TOL, OUTER_CELLS};
use crate::error::{Error, Result};
use crate::loss::{eval_rho, omega, LossSpec};
use crate::models::{BinaryErrorOracle, LocalErrorLimit};
use crate::numerics::{maximize_1d, maximize_1d_with, Interval};

const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

/// `2 rho((theta1 - theta0) / 2) P_e(q, theta0, theta1)`.
pub fn theorem1_objective(
    oracle: &dyn BinaryErrorOracle,
    loss: &LossSpec,
    theta0: f64,
    theta1: f64,
    n: u64,
    q: f64,
) -> Result<f64> {
    Ok(2.0 * eval_rho(loss, 0.5 * (theta1 - theta0)) * oracle.pe(q, theta0, theta1, n)?)
}

fn best_prior_finite(oracle: &dyn BinaryErrorOracle, theta0: f64, theta1: f64, n: u64) -> Result<(f64, f64)> {
    oracle.pe(0.5, theta0, theta1, n)?;
    let res = maximize_1d(|q| oracle.pe(q, theta0, theta1, n).unwrap_or(f64::NAN), UNIT, OPT_TOL)?;
    Ok((res.x(), res.value))
}

pub fn theorem1_two_point(
    oracle: &dyn BinaryErrorOracle,
    loss: &LossSpec,
    theta0: f64,
    theta1: f64,
    n: u64,
) -> Result<BoundReport> {
    check_radial_convex(loss, "the two-point bound")?;
    let (q, _) = best_prior_finite(oracle, theta0, theta1, n)?;
    let value = theorem1_objective(oracle, loss, theta0, theta1, n, q)?;
    Ok(BoundReport::new("theorem1", oracle.model_id(), value, loss.clone())
        .with_arg("q", q)
        .with_arg("theta0", theta0)
        .with_arg("theta1", theta1))
}

/// `max_q rho(theta1 - theta0) P_e(q, theta0, theta1)`, for concave losses
/// and losses that are minimal at the two test points.
pub fn concave_two_point(
    oracle: &dyn BinaryErrorOracle,
    loss: &LossSpec,
    theta0: f64,
    theta1: f64,
    n: u64,
) -> Result<BoundReport> {
    let (q, _) = best_prior_finite(oracle, theta0, theta1, n)?;
    let value = eval_rho(loss, theta1 - theta0) * oracle.pe(q, theta0, theta1, n)?;
    let mut report = BoundReport::new("concave", oracle.model_id(), value, loss.clone())
        .with_arg("q", q)
        .with_arg("theta0", theta0)
        .with_arg("theta1", theta1);
    if loss.convex && loss.power_exponent().is_none_or(|t| t > 1.0) {
        report = report.with_note("loss is not concave; the value is valid only if rho is edge-minimal");
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorChoice {
    /// Maximize the limit error over the prior at every `s`.
    Optimal,
    Fixed(f64),
}

/// `2 omega(s) P_e^inf(theta, s)` under the given prior choice.
pub fn corollary1_objective(
    limit: &dyn LocalErrorLimit,
    loss: &LossSpec,
    theta: f64,
    s: f64,
    prior: PriorChoice,
) -> Result<f64> {
    let pe = match prior {
        PriorChoice::Optimal => limit.pe_inf(theta, s),
        PriorChoice::Fixed(q) => limit.pe_limit(theta, s, q),
    };
    Ok(2.0 * omega(loss, s)? * pe)
}

pub fn corollary1_local(
    limit: &dyn LocalErrorLimit,
    loss: &LossSpec,
    theta: f64,
    s_domain: Interval,
    prior: PriorChoice,
) -> Result<BoundReport> {
    check_radial_convex(loss, "the local two-point bound")?;
    limit.validate_at(theta)?;
    let domain = check_s_domain(s_domain)?;
    if let PriorChoice::Fixed(q) = prior {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::invalid(format!("prior must lie in [0, 1], got {q}")));
        }
    }
    let rate = limit.rate(loss)?;
    omega(loss, 1.0)?;
    let res = maximize_1d_with(
        |s| corollary1_objective(limit, loss, theta, s, prior).unwrap_or(f64::NAN),
        domain,
        OPT_TOL,
        OUTER_CELLS * 2,
    )?;
    let s = res.x();
    let q = match prior {
        PriorChoice::Optimal => {
            limit.optimal_q(theta, s).unwrap_or_else(|| crate::models::best_prior(|q| limit.pe_limit(theta, s, q)).0)
        }
        PriorChoice::Fixed(q) => q,
    };
    let value = corollary1_objective(limit, loss, theta, s, prior)?;
    let id = match prior {
        PriorChoice::Optimal => "corollary1",
        PriorChoice::Fixed(_) => "corollary1-fixed-prior",
    };
    Ok(BoundReport::new(id, limit.model_id(), value, loss.clone())
        .with_rate(rate)
        .with_arg("s", s)
        .with_arg("q", q)
        .with_arg("theta", theta))
}
