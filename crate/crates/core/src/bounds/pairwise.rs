//! Multi-point bounds assembled from pairwise two-point terms.

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::loss::{eval_rho, LossSpec};
use crate::models::BinaryErrorOracle;

fn check_inputs(thetas: &[f64], weights: &[f64]) -> Result<()> {
    if thetas.len() < 2 {
        return Err(Error::invalid("need at least two test points"));
    }
    if thetas.len() != weights.len() {
        return Err(Error::invalid(format!("{} test points but {} weights", thetas.len(), weights.len())));
    }
    if weights.iter().any(|w| !(*w >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("weights must be non-negative and sum to one"));
    }
    Ok(())
}

/// `rho((tj - ti) / 2) (qi + qj) P_e(qi / (qi + qj), ti, tj)`.
fn pair(
    oracle: &dyn BinaryErrorOracle,
    loss: &LossSpec,
    (ti, qi): (f64, f64),
    (tj, qj): (f64, f64),
    n: u64,
) -> Result<f64> {
    let total = qi + qj;
    if total <= 0.0 {
        return Ok(0.0);
    }
    Ok(eval_rho(loss, 0.5 * (tj - ti)) * total * oracle.pe(qi / total, ti, tj, n)?)
}

/// Sum over neighbours `(i, i + 1 mod m)`. For `m = 2` the single pair is
/// visited twice, which restores the factor 2 of the two-point bound.
pub fn pairwise_ring_bound(
    oracle: &dyn BinaryErrorOracle,
    loss: &LossSpec,
    thetas: &[f64],
    weights: &[f64],
    n: u64,
) -> Result<BoundReport> {
    check_inputs(thetas, weights)?;
    let m = thetas.len();
    let mut value = 0.0;
    for i in 0..m {
        let j = (i + 1) % m;
        value += pair(oracle, loss, (thetas[i], weights[i]), (thetas[j], weights[j]), n)?;
    }
    Ok(BoundReport::new("ring", oracle.model_id(), value, loss.clone()).with_arg("m", m as f64))
}

/// `(1 / (m - 1)) sum_{i != j}` of the pairwise terms.
pub fn pairwise_allpairs_bound(
    oracle: &dyn BinaryErrorOracle,
    loss: &LossSpec,
    thetas: &[f64],
    weights: &[f64],
    n: u64,
) -> Result<BoundReport> {
    check_inputs(thetas, weights)?;
    let m = thetas.len();
    let mut value = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                value += pair(oracle, loss, (thetas[i], weights[i]), (thetas[j], weights[j]), n)?;
            }
        }
    }
    value /= (m - 1) as f64;
    Ok(BoundReport::new("all-pairs", oracle.model_id(), value, loss.clone()).with_arg("m", m as f64))
}
