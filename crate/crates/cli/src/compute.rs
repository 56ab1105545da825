use minimax_core::bounds::{
    concave_two_point, corollary1_local, corollary2_transform, example7_nuisance_bound, pairwise_allpairs_bound,
    pairwise_ring_bound, theorem1_two_point, theorem3_local, theorem3_moment, theorem4_local, theorem4_three_point,
    three_point_exact_uniform, BoundReport, PairPriors, PriorChoice, RChoice, ThreePointOptions, TransformSet,
    DEFAULT_S_DOMAIN,
};
use minimax_core::loss::LossSpec;
use minimax_core::models::{build_model, descriptor, monte_carlo_pe, ModelInstance, Params};
use minimax_core::numerics::{maximize_1d, Interval};
use minimax_core::Error;

use crate::{CliError, CliResult};

pub struct BoundSpec {
    pub id: &'static str,
    /// Parameters read by the bound in addition to those of the model.
    pub params: &'static [&'static str],
    pub summary: &'static str,
}

static BOUNDS: &[BoundSpec] = &[
    BoundSpec {
        id: "pe",
        params: &["theta0", "theta1", "n", "q"],
        summary: "MAP error probability, maximized over q unless q is given",
    },
    BoundSpec {
        id: "monte-carlo",
        params: &["theta0", "theta1", "n", "q", "trials"],
        summary: "simulated MAP error probability",
    },
    BoundSpec { id: "theorem1", params: &["theta0", "theta1", "gap", "n"], summary: "finite-sample two-point bound" },
    BoundSpec {
        id: "concave",
        params: &["theta0", "theta1", "gap", "n"],
        summary: "two-point bound for concave losses",
    },
    BoundSpec { id: "corollary1", params: &["q", "s-max"], summary: "local two-point coefficient" },
    BoundSpec {
        id: "theorem3",
        params: &["r", "s-max", "n", "delta-max"],
        summary: "moment bound; finite-sample when n is given",
    },
    BoundSpec {
        id: "theorem4",
        params: &["s-max", "w0", "n", "delta-max"],
        summary: "three-point MSE bound, pair priors optimized",
    },
    BoundSpec {
        id: "theorem4-balanced",
        params: &["s-max", "w0", "n", "delta-max"],
        summary: "three-point MSE bound, balanced pair priors",
    },
    BoundSpec {
        id: "three-point-exact",
        params: &["s-max"],
        summary: "exact local three-point MSE bound, uniform scale",
    },
    BoundSpec { id: "rotation3", params: &["s-max"], summary: "three-rotation nuisance bound" },
    BoundSpec {
        id: "corollary2",
        params: &["theta0", "theta1", "m", "k", "q", "n"],
        summary: "transform bound on the vector model",
    },
    BoundSpec {
        id: "ring",
        params: &["theta0", "gap", "m", "n"],
        summary: "neighbour pairwise bound on equally spaced points",
    },
    BoundSpec {
        id: "all-pairs",
        params: &["theta0", "gap", "m", "n"],
        summary: "all-pairs bound on equally spaced points",
    },
];

pub fn bound_specs() -> &'static [BoundSpec] {
    BOUNDS
}

fn bound_spec(id: &str) -> CliResult<&'static BoundSpec> {
    BOUNDS.iter().find(|b| b.id == id).ok_or_else(|| Error::UnknownId { kind: "bound", id: id.to_string() }.into())
}

/// A computed bound, with the binomial half-width for simulated entries.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: BoundReport,
    pub half_width: Option<f64>,
}

/// `mse`, `abs`, `power` (exponent from `t`), `power:<t>` or `threshold:<delta>`.
pub fn parse_loss(text: &str, t: Option<f64>) -> CliResult<LossSpec> {
    let number = |s: &str| s.parse::<f64>().map_err(|_| CliError::Usage(format!("bad number `{s}` in loss `{text}`")));
    let loss = match text.split_once(':') {
        None => match text {
            "mse" => LossSpec::mse(),
            "abs" => LossSpec::power(1.0)?,
            "power" => {
                let t = t.ok_or_else(|| CliError::Usage("loss `power` needs an exponent (--t)".into()))?;
                LossSpec::power(t)?
            }
            _ => return Err(CliError::Usage(format!("unknown loss `{text}`"))),
        },
        Some(("power", v)) => LossSpec::power(number(v)?)?,
        Some(("threshold", v)) => LossSpec::threshold(number(v)?)?,
        Some(_) => return Err(CliError::Usage(format!("unknown loss `{text}`"))),
    };
    Ok(loss)
}

fn count(params: &Params, key: &str, default: u64) -> CliResult<u64> {
    match params.get(key) {
        None => Ok(default),
        Some(v) if v >= 1.0 && v.fract() == 0.0 && v < 1e15 => Ok(v as u64),
        Some(v) => Err(CliError::Usage(format!("`{key}` must be a positive integer, got {v}"))),
    }
}

fn s_domain(params: &Params) -> CliResult<Interval> {
    match params.get("s-max") {
        None => Ok(DEFAULT_S_DOMAIN),
        Some(hi) => Ok(Interval::new(0.0, hi)?),
    }
}

fn delta_domain(params: &Params) -> CliResult<Interval> {
    let hi = params.get("delta-max").ok_or_else(|| CliError::Usage("finite-sample mode needs `delta-max`".into()))?;
    Ok(Interval::new(hi * 1e-6, hi)?)
}

fn test_points(model: &ModelInstance, params: &Params) -> (f64, f64) {
    let t0 = params.get_or("theta0", model.theta);
    let t1 = params.get("theta1").unwrap_or(t0 + params.get_or("gap", 1.0));
    (t0, t1)
}

fn mse_only(loss: &LossSpec, bound: &str) -> CliResult<()> {
    if loss.power_exponent() == Some(2.0) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("`{bound}` is defined for squared error only, not `{}`", loss.describe()))
            .into())
    }
}

fn three_point_opts(params: &Params, policy: PairPriors, domain: Interval) -> ThreePointOptions {
    let mut opts = ThreePointOptions::new(policy, domain);
    opts.w_zero = params.get_or("w0", 0.0) != 0.0;
    opts
}

/// Builds `model` and evaluates `bound` on it. Parameters not recognised by
/// either are rejected.
pub fn compute(model_id: &str, bound_id: &str, loss: &LossSpec, params: &Params, seed: u64) -> CliResult<Outcome> {
    let desc = descriptor(model_id)?;
    let spec = bound_spec(bound_id)?;
    let is_model_key = |k: &str| k == "theta" || desc.params.contains(&k);
    if let Some(k) = params.keys().find(|k| !is_model_key(k) && !spec.params.contains(k)) {
        return Err(CliError::Usage(format!(
            "parameter `{k}` is not used by model `{model_id}` or bound `{bound_id}`"
        )));
    }
    let model_params: Params =
        params.iter().filter(|(k, _)| is_model_key(k)).map(|(k, v)| (k.to_string(), v)).collect();
    let model = build_model(model_id, &model_params)?;
    let mut half_width = None;

    let report = match bound_id {
        "pe" => {
            let oracle = model.require_oracle()?;
            let (t0, t1) = test_points(&model, params);
            let n = count(params, "n", 1)?;
            let (q, value) = match params.get("q") {
                Some(q) => (q, oracle.pe(q, t0, t1, n)?),
                None => {
                    oracle.pe(0.5, t0, t1, n)?;
                    let unit = Interval::new(0.0, 1.0)?;
                    let res = maximize_1d(|q| oracle.pe(q, t0, t1, n).unwrap_or(f64::NAN), unit, 1e-10)?;
                    (res.x(), res.value)
                }
            };
            BoundReport::new("pe", model_id, value, loss.clone())
                .with_arg("q", q)
                .with_arg("theta0", t0)
                .with_arg("theta1", t1)
        }
        "monte-carlo" => {
            let sampler = model
                .sampler
                .as_deref()
                .ok_or_else(|| Error::Unsupported(format!("model `{model_id}` has no sampler")))?;
            let (t0, t1) = test_points(&model, params);
            let q = params.get_or("q", 0.5);
            let est =
                monte_carlo_pe(sampler, q, t0, t1, count(params, "n", 1)?, count(params, "trials", 100_000)?, seed)?;
            half_width = Some(est.half_width);
            BoundReport::new("monte-carlo", model_id, est.estimate, loss.clone())
                .with_arg("q", q)
                .with_arg("theta0", t0)
                .with_arg("theta1", t1)
                .with_note(format!("{} errors in {} trials, seed {seed}", est.errors, est.trials))
        }
        "theorem1" | "concave" => {
            let (t0, t1) = test_points(&model, params);
            let n = count(params, "n", 1)?;
            if bound_id == "theorem1" {
                theorem1_two_point(model.require_oracle()?, loss, t0, t1, n)?
            } else {
                concave_two_point(model.require_oracle()?, loss, t0, t1, n)?
            }
        }
        "corollary1" => {
            let prior = params.get("q").map_or(PriorChoice::Optimal, PriorChoice::Fixed);
            corollary1_local(model.require_limit()?, loss, model.theta, s_domain(params)?, prior)?
        }
        "theorem3" => {
            let t = loss
                .power_exponent()
                .ok_or_else(|| Error::Unsupported("the moment bound needs a power loss".into()))?;
            let r = params.get("r").map_or(RChoice::Optimize, RChoice::Fixed);
            if params.get("n").is_some() {
                theorem3_moment(
                    model.require_oracle()?,
                    t,
                    model.theta,
                    delta_domain(params)?,
                    count(params, "n", 1)?,
                    r,
                )?
            } else {
                theorem3_local(model.require_limit()?, t, model.theta, s_domain(params)?, r)?
            }
        }
        "theorem4" | "theorem4-balanced" => {
            mse_only(loss, bound_id)?;
            let policy = if bound_id == "theorem4" { PairPriors::Optimized } else { PairPriors::Balanced };
            if params.get("n").is_some() {
                let opts = three_point_opts(params, policy, delta_domain(params)?);
                theorem4_three_point(model.require_oracle()?, model.theta, count(params, "n", 1)?, opts)?
            } else {
                theorem4_local(
                    model.require_limit()?,
                    model.theta,
                    three_point_opts(params, policy, s_domain(params)?),
                )?
            }
        }
        "three-point-exact" => {
            mse_only(loss, bound_id)?;
            if model_id != "uniform-scale" {
                return Err(
                    Error::Unsupported("the exact three-point bound exists for uniform-scale only".into()).into()
                );
            }
            three_point_exact_uniform(model.theta, s_domain(params)?)?
        }
        "rotation3" => {
            mse_only(loss, bound_id)?;
            if model_id != "nuisance-rotation" {
                return Err(Error::Unsupported("the rotation bound exists for nuisance-rotation only".into()).into());
            }
            example7_nuisance_bound(params.get_or("sigma", 1.0), s_domain(params)?)?
        }
        "corollary2" => {
            let oracle = model.require_vector_oracle()?;
            let dim = oracle.dim();
            let set = if dim == 1 {
                TransformSet::antipodal(1)?
            } else {
                TransformSet::rotations_2d(count(params, "m", 3)? as usize)?
            };
            let (t0, t1) = test_points(&model, params);
            let mut v0 = vec![0.0; dim];
            let mut v1 = vec![0.0; dim];
            v0[0] = t0;
            v1[0] = t1;
            let k = count(params, "k", 1)? as usize;
            corollary2_transform(oracle, loss, &set, &v0, &v1, k, params.get_or("q", 0.5), count(params, "n", 1)?)?
        }
        "ring" | "all-pairs" => {
            let oracle = model.require_oracle()?;
            let m = count(params, "m", 3)? as usize;
            let t0 = params.get_or("theta0", model.theta);
            let gap = params.get_or("gap", 1.0);
            let thetas: Vec<f64> = (0..m).map(|i| t0 + gap * i as f64).collect();
            let weights = vec![1.0 / m as f64; m];
            let n = count(params, "n", 1)?;
            if bound_id == "ring" {
                pairwise_ring_bound(oracle, loss, &thetas, &weights, n)?
            } else {
                pairwise_allpairs_bound(oracle, loss, &thetas, &weights, n)?
            }
        }
        _ => unreachable!("bound table and dispatch disagree on `{bound_id}`"),
    };
    Ok(Outcome { report, half_width })
}
