//! Adaptive Gauss-Kronrod (7/15) quadrature on finite intervals and on
//! half-lines with Gaussian-dominated decay.

use crate::error::{Error, Result};
use crate::numerics::Interval;

pub const DEFAULT_QUAD_TOL: f64 = 1e-6;
const MAX_SUBDIVISIONS: usize = 2000;
const MAX_TAIL_BLOCKS: usize = 64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += wk * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment { a, b, value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// Globally adaptive integration of `f` over a finite interval to absolute
/// accuracy `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, domain: Interval, tol: f64) -> Result<f64> {
    if !(domain.lo.is_finite() && domain.hi.is_finite()) {
        return Err(Error::invalid("finite integration needs finite limits"));
    }
    integrate_segment(&f, domain.lo, domain.hi, tol)
}

fn integrate_segment<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("quadrature tolerance must be positive, got {tol}")));
    }
    let mut segments = vec![kronrod15(f, a, b)];
    for _ in 0..MAX_SUBDIVISIONS {
        let (total, err) = segments.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if !total.is_finite() {
            return Err(Error::NumericalFailure(format!("integrand is not finite on [{a}, {b}]")));
        }
        if err <= tol {
            return Ok(total);
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("segment list is never empty");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segments.push(kronrod15(f, s.a, mid));
        segments.push(kronrod15(f, mid, s.b));
    }
    let (estimate, error_estimate) = segments.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Err(Error::QuadratureFailure { estimate, error_estimate, tolerance: tol, subdivisions: MAX_SUBDIVISIONS })
}

/// Integrates `f` over `[lo, inf)`.
///
/// The half-line is covered by consecutive blocks of doubling width, each
/// integrated to `tol / 20`; integration stops at the first block whose
/// contribution is below `tol / 20`. For integrands that decay at least
/// exponentially this bounds the discarded tail by `tol / 10`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, lo: f64, tol: f64) -> Result<f64> {
    if !lo.is_finite() {
        return Err(Error::invalid("lower limit must be finite"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("quadrature tolerance must be positive, got {tol}")));
    }
    let block_tol = tol / 20.0;
    let mut total = 0.0;
    let mut a = lo;
    let mut width = 1.0;
    for _ in 0..MAX_TAIL_BLOCKS {
        let b = a + width;
        let block = integrate_segment(&f, a, b, block_tol)?;
        total += block;
        if block.abs() < block_tol {
            return Ok(total);
        }
        a = b;
        width *= 2.0;
    }
    Err(Error::QuadratureFailure {
        estimate: total,
        error_estimate: f64::INFINITY,
        tolerance: tol,
        subdivisions: MAX_TAIL_BLOCKS,
    })
}
