//! Derivative-free maximizers: a coarse grid scan followed by golden-section
//! refinement on the line, and a barycentric scan plus pattern search on the
//! probability simplex.

use crate::error::{Error, Result};
use crate::numerics::Interval;

/// Number of grid cells scanned before golden-section refinement.
pub const DEFAULT_GRID_CELLS: usize = 512;
/// Default resolution of the barycentric scan for the 3-simplex.
pub const DEFAULT_SIMPLEX_DENSITY: usize = 48;

/// Safety cap on pattern-search sweeps.
const MAX_PATTERN_SWEEPS: usize = 5_000;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub argmax: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

impl OptResult {
    /// The scalar maximizer of a one-dimensional search.
    pub fn x(&self) -> f64 {
        self.argmax[0]
    }
}

/// NaN objective values never win a comparison.
#[inline]
fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Golden-section search for the maximum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `width`. Returns `(x, f(x), evaluations)` for the best
/// point seen, including the two end points.
fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, width: f64) -> (f64, f64, usize) {
    let fa = sanitize(f(a));
    let fb = sanitize(f(b));
    let (mut best_x, mut best_v) = if fb > fa { (b, fb) } else { (a, fa) };
    let mut evals = 2;

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = sanitize(f(x1));
    let mut f2 = sanitize(f(x2));
    evals += 2;
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best_v {
            best_x = x;
            best_v = v;
        }
    }

    // 200 iterations shrink any finite bracket far below f64 resolution.
    for _ in 0..200 {
        if b - a <= width {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = sanitize(f(x1));
            if f1 > best_v {
                best_x = x1;
                best_v = f1;
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = sanitize(f(x2));
            if f2 > best_v {
                best_x = x2;
                best_v = f2;
            }
        }
        evals += 1;
    }
    (best_x, best_v, evals)
}

/// Fails when no evaluation produced a number.
fn finish(argmax: Vec<f64>, value: f64, evaluations: usize) -> Result<OptResult> {
    if value == f64::NEG_INFINITY {
        return Err(Error::NumericalFailure(format!("objective was NaN at all {evaluations} evaluations")));
    }
    Ok(OptResult { argmax, value, evaluations })
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

fn check_domain(domain: &Interval) -> Result<()> {
    if !(domain.lo.is_finite() && domain.hi.is_finite() && domain.lo < domain.hi) {
        return Err(Error::invalid(format!(
            "optimization domain [{}, {}] must be a finite non-empty interval",
            domain.lo, domain.hi
        )));
    }
    Ok(())
}

/// Maximizes `f` over `domain` with the default 512-cell scan.
///
/// The best grid cell is refined by golden-section search until the bracket is
/// narrower than `tol` times the domain width. The returned value is always
/// `f(argmax)` and never falls below the best scanned grid value.
pub fn maximize_1d<F: Fn(f64) -> f64>(f: F, domain: Interval, tol: f64) -> Result<OptResult> {
    maximize_1d_with(f, domain, tol, DEFAULT_GRID_CELLS)
}

pub fn maximize_1d_with<F: Fn(f64) -> f64>(f: F, domain: Interval, tol: f64, cells: usize) -> Result<OptResult> {
    check_domain(&domain)?;
    check_tol(tol)?;
    if cells < 2 {
        return Err(Error::invalid("grid scan needs at least two cells"));
    }
    let (lo, hi) = (domain.lo, domain.hi);
    let h = (hi - lo) / cells as f64;
    let point = |i: usize| if i == cells { hi } else { lo + h * i as f64 };

    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..=cells {
        let v = sanitize(f(point(i)));
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut best_x = point(best_i);
    let a = point(best_i.saturating_sub(1));
    let b = point((best_i + 1).min(cells));
    let (gx, gv, evals) = golden_section(&f, a, b, tol * (hi - lo));
    if gv > best_v {
        best_x = gx;
        best_v = gv;
    }
    finish(vec![best_x], best_v, cells + 1 + evals)
}

/// Golden-section search over the whole domain, valid when `f` is concave
/// (or at least unimodal). Used for the inner prior maximizations, whose
/// objectives are integrals of minima of affine functions.
pub fn maximize_concave_1d<F: Fn(f64) -> f64>(f: F, domain: Interval, tol: f64) -> Result<OptResult> {
    check_domain(&domain)?;
    check_tol(tol)?;
    let (x, v, evals) = golden_section(&f, domain.lo, domain.hi, tol * (domain.hi - domain.lo));
    finish(vec![x], v, evals)
}

/// Maximizes `f` over the closed probability simplex of dimension 2 or 3.
pub fn maximize_simplex<F: Fn(&[f64]) -> f64>(f: F, dim: usize, tol: f64) -> Result<OptResult> {
    maximize_simplex_with(f, dim, tol, DEFAULT_SIMPLEX_DENSITY)
}

pub fn maximize_simplex_with<F: Fn(&[f64]) -> f64>(f: F, dim: usize, tol: f64, density: usize) -> Result<OptResult> {
    check_tol(tol)?;
    match dim {
        2 => {
            let g = |q: f64| f(&[q, 1.0 - q]);
            let res = maximize_1d(g, Interval::new(0.0, 1.0)?, tol)?;
            let q = res.x();
            Ok(OptResult { argmax: vec![q, 1.0 - q], value: res.value, evaluations: res.evaluations })
        }
        3 => simplex3(&f, tol, density.max(2)),
        _ => Err(Error::Unsupported(format!("simplex maximization supports dimension 2 or 3, got {dim}"))),
    }
}

fn simplex3<F: Fn(&[f64]) -> f64>(f: &F, tol: f64, n: usize) -> Result<OptResult> {
    let mut evals = 0;
    let mut best = [1.0, 0.0, 0.0];
    let mut best_v = f64::NEG_INFINITY;
    let nf = n as f64;
    for i in 0..=n {
        for j in 0..=(n - i) {
            let p = [i as f64 / nf, j as f64 / nf, (n - i - j) as f64 / nf];
            let v = sanitize(f(&p));
            evals += 1;
            if v > best_v {
                best_v = v;
                best = p;
            }
        }
    }

    // Pattern search along the six edge directions e_a - e_b; a step that would
    // leave the simplex is truncated at the boundary. Successful sweeps double
    // the step so ridges are followed at the scan resolution, failures halve it.
    const DIRS: [(usize, usize); 6] = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];
    let max_step = 1.0 / nf;
    let mut step = max_step;
    let mut sweeps = 0;
    while step > tol * 0.1 && sweeps < MAX_PATTERN_SWEEPS {
        sweeps += 1;
        let mut improved = false;
        for &(up, down) in &DIRS {
            let h = step.min(best[down]);
            if h <= 0.0 {
                continue;
            }
            let mut p = best;
            p[up] += h;
            p[down] -= h;
            if p[down] < 0.0 {
                p[down] = 0.0;
            }
            let v = sanitize(f(&p));
            evals += 1;
            if v > best_v {
                best_v = v;
                best = p;
                improved = true;
            }
        }
        step = if improved { (2.0 * step).min(max_step) } else { 0.5 * step };
    }
    finish(best.to_vec(), best_v, evals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gaussian_tail;

    fn unit() -> Interval {
        Interval::new(0.0, 2.0).unwrap()
    }

    #[test]
    fn quadratic_peak() {
        let r = maximize_1d(|x| -(x - 1.0) * (x - 1.0), unit(), 1e-9).unwrap();
        assert!((r.x() - 1.0).abs() < 1e-8);
        assert!(r.value.abs() < 1e-15);
        assert!(r.evaluations > 512);
    }

    #[test]
    fn gaussian_location_coefficient() {
        let r = maximize_1d(|u| 2.0 * u * u * gaussian_tail(u), Interval::new(0.0, 10.0).unwrap(), 1e-7).unwrap();
        assert!((r.value - 0.3314).abs() < 1e-3);
    }

    #[test]
    fn uniform_scale_coefficient() {
        let r = maximize_1d(|u| u * u / (2.0 * (1.0 + u.exp())), Interval::new(0.0, 20.0).unwrap(), 1e-7).unwrap();
        assert!((r.value - 0.2414).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(maximize_1d(|x| x, unit(), 0.0).is_err());
        assert!(maximize_1d(|x| x, Interval { lo: 1.0, hi: 1.0 }, 1e-6).is_err());
        assert!(matches!(maximize_simplex(|_| 0.0, 4, 1e-6), Err(Error::Unsupported(_))));
    }

    #[test]
    fn value_matches_objective_at_argmax() {
        let f = |x: f64| (3.0 * x).sin() * (-x).exp();
        let r = maximize_1d(f, unit(), 1e-7).unwrap();
        assert_eq!(f(r.x()), r.value);
    }

    #[test]
    fn all_nan_is_numerical_failure() {
        let e = maximize_1d(|_| f64::NAN, unit(), 1e-9).unwrap_err();
        assert!(e.is_numerical());
        assert!(maximize_concave_1d(|_| f64::NAN, unit(), 1e-9).unwrap_err().is_numerical());
        assert!(maximize_simplex(|_| f64::NAN, 3, 1e-9).unwrap_err().is_numerical());
    }

    #[test]
    fn nan_regions_are_skipped() {
        let f = |x: f64| if x < 0.5 { f64::NAN } else { -(x - 1.5) * (x - 1.5) };
        let r = maximize_1d(f, unit(), 1e-9).unwrap();
        assert!((r.x() - 1.5).abs() < 1e-7);
    }

    #[test]
    fn simplex_two_symmetric() {
        let r = maximize_simplex(|p| p[0] * p[1], 2, 1e-8).unwrap();
        assert!((r.argmax[0] - 0.5).abs() < 1e-6);
        assert!((r.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn simplex_three_harmonic_weights() {
        let f = |p: &[f64]| {
            let h = |a: f64, b: f64| if a + b > 0.0 { 2.0 * a * b / (a + b) } else { 0.0 };
            h(p[0], p[1]) + h(p[1], p[2])
        };
        let r = maximize_simplex(f, 3, 1e-8).unwrap();
        assert!((r.value - 0.6862).abs() < 1e-3, "{}", r.value);
        let sum: f64 = r.argmax.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(r.argmax.iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn simplex_linear_hits_vertex() {
        let r = maximize_simplex(|p| p[0], 3, 1e-8).unwrap();
        assert_eq!(r.argmax, vec![1.0, 0.0, 0.0]);
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn concave_search_handles_boundary_maximum() {
        let r = maximize_concave_1d(|x| x, Interval::new(0.0, 1.0).unwrap(), 1e-10).unwrap();
        assert_eq!(r.x(), 1.0);
    }
}
