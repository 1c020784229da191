//! Error function and its inverse, accurate to ~1e-15.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};

use crate::error::{Error, Result};

/// `erf(x)` by the positive-term Taylor series for `|x| <= 2` and
/// `1 - erfc(x)` with a continued fraction beyond.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return -erf(-x);
    }
    if x <= 2.0 {
        erf_series(x)
    } else {
        1.0 - erfc_continued_fraction(x)
    }
}

pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x > 2.0 {
        erfc_continued_fraction(x)
    } else {
        1.0 - erf(x)
    }
}

/// `erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (2n+1)!!`
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term > 1e-17 * sum {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

/// `erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`,
/// evaluated with the modified Lentz method. Valid for `x > 0`.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = k as f64 * 0.5;
        d = x + a * d;
        d = if d.abs() < TINY { TINY } else { d };
        c = x + a / c;
        c = if c.abs() < TINY { TINY } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// Inverse of [`erf`] on `(-1, 1)`.
///
/// A rational first guess is polished with Halley steps on `erf(y) - x`.
pub fn inverse_erf(x: f64) -> Result<f64> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::OutOfRange { name: "erf argument", value: x, range: "(-1, 1)" });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = -((1.0 - x) * (1.0 + x)).ln();
    let p = if w < 5.0 {
        w -= 2.5;
        [
            2.810_226_36e-08,
            3.432_739_39e-07,
            -3.523_387_7e-06,
            -4.391_506_54e-06,
            2.185_808_7e-04,
            -1.253_725_03e-03,
            -4.177_681_64e-03,
            2.466_407_27e-01,
            1.501_409_41,
        ]
        .iter()
        .fold(0.0, |acc, &c| c + acc * w)
    } else {
        w = w.sqrt() - 3.0;
        [
            -2.002_142_57e-04,
            1.009_505_58e-04,
            1.349_343_22e-03,
            -3.673_428_44e-03,
            5.739_507_73e-03,
            -7.622_461_3e-03,
            9.438_870_47e-03,
            1.001_674_06,
            2.832_976_82,
        ]
        .iter()
        .fold(0.0, |acc, &c| c + acc * w)
    };
    let mut y = p * x;
    for _ in 0..4 {
        let f = erf(y) - x;
        if f == 0.0 {
            break;
        }
        let df = FRAC_2_SQRT_PI * (-y * y).exp();
        let step = f / (df * (1.0 + y * f / df));
        y -= step;
        if step.abs() <= 1e-16 * y.abs() {
            break;
        }
    }
    Ok(y)
}

/// Two-sided critical value `z_c = sqrt(2) erf^{-1}(delta)`.
pub fn critical_value(delta: f64) -> Result<f64> {
    Ok(std::f64::consts::SQRT_2 * inverse_erf(delta)?)
}
