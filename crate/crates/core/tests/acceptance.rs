//! Acceptance criteria: one PASS/FAIL line each, non-zero exit on any failure.

use std::process::ExitCode;

use minimax_core::bounds::{
    corollary1_local, example7_inner_integral, example7_nuisance_bound, theorem3_local, theorem4_local,
    three_point_exact_uniform, PairPriors, PriorChoice, RChoice, ThreePointOptions, DEFAULT_S_DOMAIN,
};
use minimax_core::loss::{LossSpec, RateVariable};
use minimax_core::models::{
    build_model, exponential_rate_pe, monte_carlo_pe, GaussianSampler, ObservationModel, Params,
    UniformLocationSampler, UniformScaleSampler, DEFAULT_SEED, MODEL_IDS,
};
use minimax_core::numerics::{maximize_1d, maximize_simplex, Interval};
use minimax_core::oracle::default_suite;
use minimax_core::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

/// Accumulates sub-checks of one criterion.
#[derive(Default)]
struct Criterion {
    parts: Vec<String>,
    pass: bool,
}

impl Criterion {
    fn new() -> Self {
        Criterion { parts: Vec::new(), pass: true }
    }

    fn close(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.pass &= ok;
        self.parts.push(format!("{what}={got:.6} (want {want}, tol {tol:e}){}", if ok { "" } else { " <-- off" }));
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.pass &= ok;
        self.parts.push(format!("{what}: {}", if ok { "ok" } else { "violated" }));
    }

    fn done(self) -> Result<Outcome> {
        Ok(Outcome { pass: self.pass, detail: self.parts.join("; ") })
    }
}

fn limit_of(id: &str, params: Params) -> Result<minimax_core::models::ModelInstance> {
    build_model(id, &params)
}

fn c1() -> Result<Outcome> {
    let mut c = Criterion::new();
    let res = maximize_1d(|q| exponential_rate_pe(q, 1.0, 2.0).unwrap_or(f64::NAN), Interval::new(0.0, 1.0)?, 1e-10)?;
    c.close("max_q Pe", res.value, 0.382, 5e-4);
    c.close("argmax q", res.x(), 0.5528, 2e-3);
    c.holds("Pe(1/2,1,2) = 3/8", exponential_rate_pe(0.5, 1.0, 2.0)? == 0.375);
    c.done()
}

fn c2() -> Result<Outcome> {
    let mut c = Criterion::new();
    let m = limit_of("uniform-scale", Params::new())?;
    let lim = m.require_limit()?;
    let r = corollary1_local(lim, &LossSpec::mse(), 1.0, DEFAULT_S_DOMAIN, PriorChoice::Optimal)?;
    c.close("optimal prior", r.value, 0.2414, 1e-3);
    let rate = r.rate.expect("local rate");
    c.holds("rate n^2", rate.zeta_exponent == 2.0 && rate.variable == RateVariable::SampleSize);
    let h = corollary1_local(lim, &LossSpec::mse(), 1.0, DEFAULT_S_DOMAIN, PriorChoice::Fixed(0.5))?;
    c.close("prior 1/2", h.value, 0.1353, 1e-3);
    c.done()
}

fn c3() -> Result<Outcome> {
    let mut c = Criterion::new();
    let m = limit_of("uniform-location", Params::new())?;
    for t in [1.0, 2.0, 3.0] {
        let r =
            corollary1_local(m.require_limit()?, &LossSpec::power(t)?, 0.0, DEFAULT_S_DOMAIN, PriorChoice::Optimal)?;
        c.close(&format!("t={t}"), r.value, (t / (2.0 * std::f64::consts::E)).powf(t), 1e-3);
        if t == 2.0 {
            c.close("t=2 printed", r.value, 0.1353, 1e-3);
        }
    }
    c.done()
}

fn gaussian_mse() -> Result<f64> {
    let m = limit_of("gauss-location", Params::new().with("sigma", 1.0))?;
    Ok(corollary1_local(m.require_limit()?, &LossSpec::mse(), 0.0, DEFAULT_S_DOMAIN, PriorChoice::Optimal)?.value)
}

fn c4() -> Result<Outcome> {
    let mut c = Criterion::new();
    let m = limit_of("gauss-location", Params::new().with("sigma", 1.0))?;
    let r = corollary1_local(m.require_limit()?, &LossSpec::mse(), 0.0, DEFAULT_S_DOMAIN, PriorChoice::Optimal)?;
    c.close("coefficient", r.value, 0.3314, 1e-3);
    c.holds("rate n^1", r.rate.map(|p| p.zeta_exponent) == Some(1.0));
    c.done()
}

fn c5() -> Result<Outcome> {
    let mut c = Criterion::new();
    let smooth = limit_of("awgn-smooth", Params::new().with("pdot", 1.0).with("n0", 1.0))?;
    let r = corollary1_local(smooth.require_limit()?, &LossSpec::mse(), 0.0, DEFAULT_S_DOMAIN, PriorChoice::Optimal)?;
    c.close("smooth", r.value, 0.1657, 1e-3);
    let rate = r.rate.expect("local rate");
    c.holds("smooth rate T^1", rate.zeta_exponent == 1.0 && rate.variable == RateVariable::ObservationTime);
    let rect = limit_of("awgn-rect", Params::new().with("power", 1.0).with("n0", 1.0).with("pulse", 1.0))?;
    let r = corollary1_local(rect.require_limit()?, &LossSpec::mse(), 0.0, DEFAULT_S_DOMAIN, PriorChoice::Optimal)?;
    c.close("rectangular", r.value, 0.1886, 1e-3);
    let rate = r.rate.expect("local rate");
    c.holds("rectangular rate T^2", rate.zeta_exponent == 2.0 && rate.variable == RateVariable::ObservationTime);
    c.done()
}

fn c6() -> Result<Outcome> {
    let mut c = Criterion::new();
    let sigma = 1.7;
    let m = limit_of("exp-family", Params::new().with("sigma", sigma))?;
    let r = corollary1_local(m.require_limit()?, &LossSpec::mse(), 0.2, DEFAULT_S_DOMAIN, PriorChoice::Optimal)?;
    let info = sigma * sigma;
    c.close("coefficient * I", r.value * info, gaussian_mse()?, 1e-3);
    c.close("coefficient * I printed", r.value * info, 0.3314, 1e-3);
    c.done()
}

fn c7() -> Result<Outcome> {
    let mut c = Criterion::new();
    let r = example7_nuisance_bound(1.0, DEFAULT_S_DOMAIN)?;
    c.close("coefficient", r.value, 0.2514, 1e-3);
    c.close("inner integral at s=0", example7_inner_integral(0.0)?, 1.0 / 3.0, 1e-6);
    c.done()
}

fn uniform_limit() -> Result<minimax_core::models::ModelInstance> {
    limit_of("uniform-scale", Params::new())
}

fn c8() -> Result<Outcome> {
    let mut c = Criterion::new();
    let m = uniform_limit()?;
    let lim = m.require_limit()?;
    let r = theorem3_local(lim, 2.0, 1.0, DEFAULT_S_DOMAIN, RChoice::Optimize)?;
    c.close("t=2", r.value, 0.3102, 1e-3);
    for t in [1.5, 3.0, 4.0] {
        let g = theorem3_local(lim, t, 1.0, DEFAULT_S_DOMAIN, RChoice::Optimize)?;
        c.close(&format!("prefactor t={t}"), g.value.powf(1.0 / t) / t, 0.2785, 5e-4);
    }
    let half = theorem3_local(lim, 2.0, 1.0, DEFAULT_S_DOMAIN, RChoice::Fixed(0.5))?;
    c.close("r=1/2 reduction", half.value, 0.2414, 1e-3);
    c.done()
}

fn c9() -> Result<Outcome> {
    let mut c = Criterion::new();
    let r = three_point_exact_uniform(1.0, DEFAULT_S_DOMAIN)?;
    c.close("exact three-point", r.value, 0.4624, 1e-3);
    c.done()
}

fn c10() -> Result<Outcome> {
    let mut c = Criterion::new();
    let g = limit_of("gauss-location", Params::new().with("sigma", 1.0))?;
    let gl = g.require_limit()?;
    let r = theorem4_local(gl, 0.0, ThreePointOptions::new(PairPriors::Balanced, DEFAULT_S_DOMAIN))?;
    c.close("gaussian", r.value, 0.4549, 1e-3);
    let geometric = maximize_1d(|s| 4.0 * s * s * gl.pe_inf_halfprior(0.0, s), DEFAULT_S_DOMAIN, 1e-10)?.value;
    let weights = maximize_simplex(
        |x| {
            let pair = |a: f64, b: f64| if a + b > 0.0 { 2.0 * a * b / (a + b) } else { 0.0 };
            pair(x[0], x[1]) + pair(x[2], x[1])
        },
        3,
        1e-10,
    )?
    .value;
    c.close("geometric factor", geometric, 0.6629, 1e-3);
    c.close("simplex factor", weights, 0.6862, 1e-3);
    c.close("product", geometric * weights, r.value, 1e-6);
    let u = uniform_limit()?;
    let r = theorem4_local(u.require_limit()?, 1.0, ThreePointOptions::new(PairPriors::Optimized, DEFAULT_S_DOMAIN))?;
    c.close("uniform scale", r.value, 0.3909, 1e-3);
    c.done()
}

fn mc_case(
    c: &mut Criterion,
    what: &str,
    model: &dyn ObservationModel,
    exact: f64,
    (q, t0, t1, n): (f64, f64, f64, u64),
) -> Result<()> {
    let est = monte_carlo_pe(model, q, t0, t1, n, 100_000, DEFAULT_SEED)?;
    c.holds(
        &format!("{what} MC {:.5} +- {:.5} vs {exact:.5}", est.estimate, est.half_width),
        est.agrees_with(exact, 3.0),
    );
    Ok(())
}

fn c11() -> Result<Outcome> {
    let mut c = Criterion::new();
    let mut invariant_ok = true;
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let pairs = [(0.5, 0.8, 3u64), (1.0, 2.0, 1), (2.0, 2.3, 10)];
    let mut checked = 0;
    for id in MODEL_IDS {
        let m = build_model(id, &Params::new())?;
        let Some(oracle) = m.oracle.as_deref() else { continue };
        for &(t0, t1, n) in &pairs {
            let pe: Vec<f64> = grid.iter().map(|&q| oracle.pe(q, t0, t1, n)).collect::<Result<_>>()?;
            invariant_ok &= pe[0] == 0.0 && pe[100] == 0.0;
            for i in 0..=100 {
                let q = grid[i];
                invariant_ok &= pe[i] <= q.min(1.0 - q) + 1e-12;
                invariant_ok &= (pe[i] - oracle.pe(1.0 - q, t1, t0, n)?).abs() < 1e-12;
                if i > 0 && i < 100 {
                    invariant_ok &= pe[i] >= 0.5 * (pe[i - 1] + pe[i + 1]) - 1e-9;
                }
            }
        }
        checked += 1;
    }
    c.holds(&format!("oracle invariants on {checked} models"), invariant_ok && checked >= 4);

    let u = uniform_limit()?;
    let ul = u.require_limit()?;
    let mse = LossSpec::mse();
    let chain = [
        corollary1_local(ul, &mse, 1.0, DEFAULT_S_DOMAIN, PriorChoice::Optimal)?.value,
        theorem3_local(ul, 2.0, 1.0, DEFAULT_S_DOMAIN, RChoice::Optimize)?.value,
        theorem4_local(ul, 1.0, ThreePointOptions::new(PairPriors::Optimized, DEFAULT_S_DOMAIN))?.value,
        three_point_exact_uniform(1.0, DEFAULT_S_DOMAIN)?.value,
    ];
    c.holds(
        &format!("uniform chain {:.4} < {:.4} < {:.4} < {:.4}", chain[0], chain[1], chain[2], chain[3]),
        chain.windows(2).all(|w| w[0] < w[1]),
    );
    let g = limit_of("gauss-location", Params::new())?;
    let g4 =
        theorem4_local(g.require_limit()?, 0.0, ThreePointOptions::new(PairPriors::Balanced, DEFAULT_S_DOMAIN))?.value;
    let g1 = gaussian_mse()?;
    c.holds(&format!("gaussian chain {g1:.4} < {g4:.4}"), g1 < g4);

    let suite = default_suite()?;
    let failed: Vec<String> = suite.iter().filter(|r| !r.pass).map(|r| r.to_string()).collect();
    c.holds(&format!("{} algebraic checks{}", suite.len(), failed.join(", ")), failed.is_empty());

    let gauss = GaussianSampler { sigma: 1.0 };
    let exact = minimax_core::numerics::gaussian_tail(2.0);
    mc_case(&mut c, "gaussian", &gauss, exact, (0.5, 0.0, 1.0, 16))?;
    let us = build_model("uniform-scale", &Params::new())?;
    let exact = us.require_oracle()?.pe(0.5, 1.0, 1.1, 20)?;
    mc_case(&mut c, "uniform scale", &UniformScaleSampler, exact, (0.5, 1.0, 1.1, 20))?;
    let ul = build_model("uniform-location", &Params::new())?;
    let exact = ul.require_oracle()?.pe(0.3, 0.0, 0.05, 10)?;
    mc_case(&mut c, "uniform location", &UniformLocationSampler, exact, (0.3, 0.0, 0.05, 10))?;
    c.done()
}

fn c12() -> Result<Outcome> {
    let mut c = Criterion::new();
    let m = uniform_limit()?;
    let lim = m.require_limit()?;
    let mut factorial = 1.0;
    for t in 2..=4u32 {
        factorial *= t as f64;
        let tf = t as f64;
        let bound = theorem3_local(lim, tf, 1.0, DEFAULT_S_DOMAIN, RChoice::Optimize)?.value;
        let ratio = factorial / bound;
        let stated = (2.0 * std::f64::consts::PI * tf).sqrt() * 1.3211f64.powf(tf);
        let rel = ratio / stated - 1.0;
        c.holds(&format!("t={t} gap {ratio:.4} vs {stated:.4} ({:+.2}%)", 100.0 * rel), rel.abs() <= 0.05);
    }
    c.done()
}

type Check = (&'static str, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Check; 12] = [
        ("C1  exponential-rate pair maximum", c1),
        ("C2  uniform scale, two points", c2),
        ("C3  uniform location, power losses", c3),
        ("C4  gaussian location", c4),
        ("C5  signals in white noise", c5),
        ("C6  exponential family via ln Z", c6),
        ("C7  three rotations with nuisance", c7),
        ("C8  moment bound", c8),
        ("C9  exact three-point, uniform scale", c9),
        ("C10 relaxed three-point bound", c10),
        ("C11 property suite", c11),
        ("C12 moment gap against the maximum", c12),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = std::time::Instant::now();
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!("{} {name} [{:.1}s] {detail}", if pass { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
    }
    println!("{} of 12 criteria passed", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
