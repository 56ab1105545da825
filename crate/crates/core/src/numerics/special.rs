//! Gaussian tail function built on Cody's rational Chebyshev approximations
//! of the complementary error function.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

const ERF_SMALL: [f64; 5] = [
    3.161_123_743_870_565_6,
    113.864_154_151_050_16,
    377.485_237_685_302_02,
    3_209.377_589_138_469_5,
    0.185_777_706_184_603_15,
];
const ERF_SMALL_DEN: [f64; 4] =
    [23.601_290_952_344_12, 244.024_637_934_444_17, 1_282.616_526_077_372_3, 2_844.236_833_439_170_6];

const ERFC_MID: [f64; 9] = [
    0.564_188_496_988_670_1,
    8.883_149_794_388_376,
    66.119_190_637_141_63,
    298.635_138_197_400_13,
    881.952_221_241_769_1,
    1_712.047_612_634_070_6,
    2_051.078_377_826_071_5,
    1_230.339_354_797_997_2,
    2.153_115_354_744_038_5e-8,
];
const ERFC_MID_DEN: [f64; 8] = [
    15.744_926_110_709_835,
    117.693_950_891_312_5,
    537.181_101_862_009_9,
    1_621.389_574_566_690_2,
    3_290.799_235_733_459_7,
    4_362.619_090_143_247,
    3_439.367_674_143_721_6,
    1_230.339_354_803_749_4,
];

const ERFC_TAIL: [f64; 6] = [
    0.305_326_634_961_232_34,
    0.360_344_899_949_804_45,
    0.125_781_726_111_229_25,
    0.016_083_785_148_742_275,
    6.587_491_615_298_378e-4,
    0.016_315_387_137_302_097,
];
const ERFC_TAIL_DEN: [f64; 5] = [
    2.568_520_192_289_822,
    1.872_952_849_923_460_4,
    0.527_905_102_951_428_4,
    0.060_518_341_312_441_32,
    0.002_335_204_976_268_691_8,
];

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const SMALL_CUTOFF: f64 = 0.468_75;
const UNDERFLOW_CUTOFF: f64 = 26.543;

/// exp(-y^2) evaluated as a product of two exponentials so the rounding of
/// `y * y` does not leak into the tail.
fn exp_neg_square(y: f64) -> f64 {
    let head = (y * 16.0).trunc() / 16.0;
    (-head * head).exp() * (-(y - head) * (y + head)).exp()
}

/// erfc(y) for y > 0.46875.
fn erfc_positive(y: f64) -> f64 {
    if y >= UNDERFLOW_CUTOFF {
        return 0.0;
    }
    if y <= 4.0 {
        let c = &ERFC_MID;
        let d = &ERFC_MID_DEN;
        let mut num = c[8] * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + c[i]) * y;
            den = (den + d[i]) * y;
        }
        (num + c[7]) / (den + d[7]) * exp_neg_square(y)
    } else {
        let z = 1.0 / (y * y);
        let p = &ERFC_TAIL;
        let q = &ERFC_TAIL_DEN;
        let mut num = p[5] * z;
        let mut den = z;
        for i in 0..4 {
            num = (num + p[i]) * z;
            den = (den + q[i]) * z;
        }
        let r = z * (num + p[4]) / (den + q[4]);
        (FRAC_1_SQRT_PI - r) / y * exp_neg_square(y)
    }
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let y = x.abs();
    if y <= SMALL_CUTOFF {
        let z = y * y;
        let a = &ERF_SMALL;
        let b = &ERF_SMALL_DEN;
        let num = (((a[4] * z + a[0]) * z + a[1]) * z + a[2]) * z + a[3];
        let den = (((z + b[0]) * z + b[1]) * z + b[2]) * z + b[3];
        return 1.0 - x * num / den;
    }
    let tail = erfc_positive(y);
    if x < 0.0 {
        2.0 - tail
    } else {
        tail
    }
}

/// Upper tail of the standard normal distribution, `Q(t) = P(Z >= t)`.
pub fn gaussian_tail(t: f64) -> f64 {
    0.5 * erfc(t * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn gaussian_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}
