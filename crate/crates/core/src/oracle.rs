//! Brute-force numerical checks of the closed-form identities and
//! inequalities the bound engines rely on.

use std::fmt;

use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::models::McRng;
use crate::numerics::{integrate, maximize_1d_with, maximize_concave_1d, maximize_simplex_with, Interval};

/// Seed of the default suite's random samples.
pub const ORACLE_SEED: u64 = 0x0A11_CE5E;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorMetric {
    Absolute,
    Relative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check_id: String,
    pub max_error: f64,
    pub metric: ErrorMetric,
    pub samples: usize,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    fn new(check_id: &str, metric: ErrorMetric, tolerance: f64) -> Self {
        CheckReport { check_id: check_id.to_string(), max_error: 0.0, metric, samples: 0, tolerance, pass: true }
    }

    fn record(&mut self, err: f64) {
        let err = if err.is_nan() { f64::INFINITY } else { err.abs() };
        self.max_error = self.max_error.max(err);
        self.samples += 1;
        self.pass = self.max_error <= self.tolerance;
    }

    fn merge(mut self, other: CheckReport) -> Self {
        self.max_error = self.max_error.max(other.max_error);
        self.samples += other.samples;
        self.pass = self.max_error <= self.tolerance;
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.metric {
            ErrorMetric::Absolute => "abs",
            ErrorMetric::Relative => "rel",
        };
        write!(
            f,
            "{} {:<24} max {kind} error {:.3e} (tol {:.1e}, {} samples)",
            if self.pass { "PASS" } else { "FAIL" },
            self.check_id,
            self.max_error,
            self.tolerance,
            self.samples
        )
    }
}

fn relative(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

/// Grid-minimizes `max_i a_i / r_i` over the simplex and compares with
/// `sum a_i`; also checks that `r_i = a_i / sum a` attains the sum.
pub fn check_lemma1(a: &[f64], grid_density: usize) -> Result<CheckReport> {
    if !(2..=3).contains(&a.len()) {
        return Err(Error::Unsupported(format!("check supports 2 or 3 terms, got {}", a.len())));
    }
    if a.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Error::invalid("all weights must be positive"));
    }
    let total: f64 = a.iter().sum();
    let worst = |r: &[f64]| a.iter().zip(r).map(|(ai, ri)| ai / ri).fold(f64::NEG_INFINITY, f64::max);
    let best = if a.len() == 2 {
        let res = maximize_1d_with(|r| -worst(&[r, 1.0 - r]), Interval::new(0.0, 1.0)?, 1e-12, grid_density)?;
        -res.value
    } else {
        -maximize_simplex_with(|r| -worst(r), 3, 1e-12, grid_density)?.value
    };
    let star: Vec<f64> = a.iter().map(|x| x / total).collect();
    let mut rep = CheckReport::new("lemma1", ErrorMetric::Absolute, 1e-3);
    rep.record(best - total);
    rep.record(worst(&star) - total);
    Ok(rep)
}

/// Minimizes `q p0 (x - theta0)^2 + (1 - q) p1 (x - theta1)^2` and compares
/// with the closed form `(theta1 - theta0)^2 A B / (A + B)`; the minimizer
/// must fall between the two test points.
pub fn check_psi_two_point(q: f64, p0: f64, p1: f64, theta0: f64, theta1: f64) -> Result<CheckReport> {
    if !(0.0..=1.0).contains(&q) || p0 < 0.0 || p1 < 0.0 {
        return Err(Error::invalid("need q in [0, 1] and non-negative densities"));
    }
    let (a, b) = (q * p0, (1.0 - q) * p1);
    let d = theta1 - theta0;
    let closed = if a + b > 0.0 { d * d * a * b / (a + b) } else { 0.0 };
    let f = |x: f64| a * (x - theta0).powi(2) + b * (x - theta1).powi(2);
    let (lo, hi) = (theta0.min(theta1), theta0.max(theta1));
    let pad = (hi - lo).max(1e-300);
    let res = maximize_1d_with(|x| -f(x), Interval::new(lo - pad, hi + pad)?, 1e-12, 256)?;
    let mut rep = CheckReport::new("psi-two-point", ErrorMetric::Relative, 1e-6);
    rep.record(relative(-res.value, closed));
    let x = res.x();
    let outside = (lo - x).max(x - hi).max(0.0);
    rep.record(if a + b > 0.0 { outside / pad } else { 0.0 });
    Ok(rep)
}

/// Three-point weighted quadratic against `(ab + bc + 4ac) D^2 / (a + b + c)`
/// and the minimizer `theta0 + (c - a) D / (a + b + c)`.
pub fn check_psi_three_point(a: f64, b: f64, c: f64, theta0: f64, delta: f64) -> Result<CheckReport> {
    if a < 0.0 || b < 0.0 || c < 0.0 || a + b + c <= 0.0 {
        return Err(Error::invalid("weights must be non-negative and not all zero"));
    }
    if !(delta > 0.0) {
        return Err(Error::invalid("spacing must be positive"));
    }
    let s = a + b + c;
    let closed = (a * b + b * c + 4.0 * a * c) * delta * delta / s;
    let arg = theta0 + (c - a) * delta / s;
    let f = |x: f64| a * (x - theta0 + delta).powi(2) + b * (x - theta0).powi(2) + c * (x - theta0 - delta).powi(2);
    let dom = Interval::new(theta0 - 2.0 * delta, theta0 + 2.0 * delta)?;
    let res = maximize_1d_with(|x| -f(x), dom, 1e-12, 256)?;
    let mut rep = CheckReport::new("psi-three-point", ErrorMetric::Relative, 1e-6);
    rep.record(relative(-res.value, closed));
    rep.record((res.x() - arg) / delta);
    Ok(rep)
}

fn max_min_split<F: Fn(f64) -> f64>(f: F) -> Result<f64> {
    Ok(maximize_concave_1d(f, Interval::new(0.0, 1.0)?, 1e-12)?.value)
}

/// Every step of the relaxation from `(ab + bc + 4ac) / (a + b + c)` down to
/// `(min{a, b} + min{b, c}) / 2`, along both routes. Records the largest
/// violation (an inequality running the wrong way, or an identity failing).
pub fn check_inequality_chain(a: f64, b: f64, c: f64) -> Result<CheckReport> {
    if a < 0.0 || b < 0.0 || c < 0.0 || a + b + c <= 0.0 {
        return Err(Error::invalid("weights must be non-negative and not all zero"));
    }
    let frac = |n: f64, d: f64| if d > 0.0 { n / d } else { 0.0 };
    let s = a + b + c;
    let l0 = frac(a * b + b * c + 4.0 * a * c, s);
    let l1 = frac(a * (b + 2.0 * c), s) + frac(c * (b + 2.0 * a), s);
    let l2 = frac(a * (b + 2.0 * c), a + b + 2.0 * c) + frac(c * (b + 2.0 * a), 2.0 * a + b + c);
    let l3 = frac(a * (b + 2.0 * c), 2.0 * a.max(b + 2.0 * c)) + frac(c * (b + 2.0 * a), 2.0 * (2.0 * a + b).max(c));
    let l4 = 0.5 * (a.min(b + 2.0 * c) + (2.0 * a + b).min(c));
    let l5 = 0.5 * (a.min(b) + b.min(c));
    let m2 = max_min_split(|u| ((1.0 - u) * a).min(u * (b + 2.0 * c)))?
        + max_min_split(|v| (v * (2.0 * a + b)).min((1.0 - v) * c))?;
    let m3 = max_min_split(|u| ((1.0 - u) * a).min(u * b))? + max_min_split(|v| (v * b).min((1.0 - v) * c))?;
    let scale = l0.max(1e-300);
    let slack = 1e-12;
    let mut rep = CheckReport::new("inequality-chain", ErrorMetric::Relative, 1e-9);
    for (lhs, rhs) in [(l1, l2), (l2, l3), (l4, l5), (m2, m3), (m3, l5)] {
        rep.record(((rhs - lhs) / scale - slack).max(0.0));
    }
    for (x, y) in [(l0, l1), (l3, l4), (l2, m2)] {
        rep.record((x - y) / scale);
    }
    Ok(rep)
}

/// Constant-energy phase family `s(t, theta) = sqrt(2E/T) sin(omega t + theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinusoidPhase {
    pub energy: f64,
    pub duration: f64,
    pub omega: f64,
}

impl SinusoidPhase {
    fn amplitude(&self) -> f64 {
        (2.0 * self.energy / self.duration).sqrt()
    }

    fn signal(&self, t: f64, theta: f64) -> f64 {
        self.amplitude() * (self.omega * t + theta).sin()
    }

    fn derivative(&self, t: f64, theta: f64) -> f64 {
        self.amplitude() * (self.omega * t + theta).cos()
    }
}

/// Checks `1 - corr(theta, theta + d) = d^2 Edot / (2E) + o(d^2)` for the
/// sinusoid phase family, with the correlation and `Edot` computed by
/// quadrature. The squared distance form `|s1 - s0|^2 / (2E)` avoids the
/// cancellation in `1 - corr` at small `d`.
pub fn check_phase_correlation(signal: SinusoidPhase, theta: f64, delta_grid: &[f64]) -> Result<CheckReport> {
    let SinusoidPhase { energy, duration, omega } = signal;
    if !(energy > 0.0 && duration > 0.0) {
        return Err(Error::invalid("energy and duration must be positive"));
    }
    let cycles = omega * duration / std::f64::consts::PI;
    if (cycles - cycles.round()).abs() > 1e-9 || cycles.round() == 0.0 {
        return Err(Error::PreconditionViolation(
            "energy depends on the phase unless omega T is a non-zero multiple of pi".into(),
        ));
    }
    if delta_grid.is_empty() || delta_grid.contains(&0.0) {
        return Err(Error::invalid("delta grid must be non-empty and exclude zero"));
    }
    let span = Interval::new(0.0, duration)?;
    let tol = 1e-13 * energy;
    let e_measured = integrate(|t| signal.signal(t, theta).powi(2), span, tol)?;
    let e_dot = integrate(|t| signal.derivative(t, theta).powi(2), span, tol)?;
    let gap = |d: f64| -> Result<f64> {
        Ok(integrate(
            |t| (signal.signal(t, theta + d) - signal.signal(t, theta)).powi(2),
            span,
            1e-11 * energy * d * d,
        )? / (2.0 * energy))
    };
    let corr = |d: f64| -> Result<f64> {
        Ok(integrate(|t| signal.signal(t, theta) * signal.signal(t, theta + d), span, tol)? / energy)
    };
    let mut rep = CheckReport::new("phase-correlation", ErrorMetric::Absolute, 1e-6);
    rep.record(e_measured / energy - 1.0);
    rep.record(corr(0.0)? - 1.0);
    let h = 1e-4;
    // First-order term vanishes; its own tolerance is 1e-8, rescaled to the report's.
    rep.record((corr(h)? - corr(-h)?) / (2.0 * h) * (rep.tolerance / 1e-8));
    let limit = e_dot / (2.0 * energy);
    let mut prev_err = f64::INFINITY;
    let mut sorted: Vec<f64> = delta_grid.iter().map(|d| d.abs()).collect();
    sorted.sort_by(|x, y| y.total_cmp(x));
    for &d in &sorted {
        let g = gap(d)?;
        rep.record(g - (1.0 - d.cos()));
        let err = (g / (d * d) - limit).abs();
        // The ratio must approach its limit as d shrinks and end within tolerance.
        if err > prev_err + 1e-12 {
            rep.record(err);
        }
        prev_err = err;
    }
    rep.record(prev_err);
    Ok(rep)
}

fn random_batch<F>(id: &str, count: usize, seed: u64, mut check: F) -> Result<CheckReport>
where
    F: FnMut(&mut McRng) -> Result<CheckReport>,
{
    let mut rng = McRng::seed_from_u64(seed);
    let mut total: Option<CheckReport> = None;
    for _ in 0..count {
        let rep = check(&mut rng)?;
        total = Some(match total {
            None => rep,
            Some(t) => t.merge(rep),
        });
    }
    let mut rep = total.ok_or_else(|| Error::invalid("empty batch"))?;
    rep.check_id = id.to_string();
    Ok(rep)
}

pub fn check_lemma1_random(count: usize, grid_density: usize, seed: u64) -> Result<CheckReport> {
    random_batch("lemma1-random", count, seed, |rng| {
        let a: Vec<f64> = (0..3).map(|_| 10.0 * (1.0 - rng.gen::<f64>())).collect();
        check_lemma1(&a, grid_density)
    })
}

pub fn check_psi_two_point_random(count: usize, seed: u64) -> Result<CheckReport> {
    random_batch("psi-two-point-random", count, seed, |rng| {
        let q = rng.gen::<f64>();
        let (p0, p1) = (5.0 * rng.gen::<f64>(), 5.0 * rng.gen::<f64>());
        let t0 = rng.gen_range(-3.0..3.0);
        let t1 = t0 + rng.gen_range(0.01..4.0);
        check_psi_two_point(q, p0, p1, t0, t1)
    })
}

pub fn check_psi_three_point_random(count: usize, seed: u64) -> Result<CheckReport> {
    random_batch("psi-three-point-random", count, seed, |rng| {
        let (a, b, c) = (rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>());
        check_psi_three_point(a + 1e-9, b, c, rng.gen_range(-2.0..2.0), rng.gen_range(0.01..3.0))
    })
}

pub fn check_inequality_chain_random(count: usize, seed: u64) -> Result<CheckReport> {
    random_batch("inequality-chain-random", count, seed, |rng| {
        // Mix scales so that each min/max branch is exercised.
        let mut draw = || 10f64.powf(rng.gen_range(-3.0..3.0));
        check_inequality_chain(draw(), draw(), draw())
    })
}

/// The checks run ahead of every reproduction, with fixed seeds.
pub fn default_suite() -> Result<Vec<CheckReport>> {
    let sinusoid = SinusoidPhase { energy: 2.0, duration: 1.0, omega: 2.0 * std::f64::consts::PI * 3.0 };
    Ok(vec![
        check_lemma1(&[1.0, 1.0], 400)?,
        check_lemma1(&[1.0, 2.0, 3.0], 400)?,
        check_lemma1_random(100, 400, ORACLE_SEED)?,
        check_psi_two_point_random(1000, ORACLE_SEED + 1)?,
        check_psi_three_point_random(1000, ORACLE_SEED + 2)?,
        check_inequality_chain_random(10_000, ORACLE_SEED + 3)?,
        check_phase_correlation(sinusoid, 0.3, &[0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001])?,
    ])
}
