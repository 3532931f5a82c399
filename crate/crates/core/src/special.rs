//! Integer-order Bessel and Hankel functions together with the closed-form
//! pieces of the logarithmic expansion of `H0^(1)` used for coincident-panel
//! integrals.
//!
//! Hankel functions are evaluated by power series for `|z| <= 12` and by the
//! Hankel asymptotic expansion beyond. Purely imaginary arguments `z = i t`
//! go through the modified Bessel functions, `H0^(1)(it) = -(2i/pi) K0(t)` and
//! `H1^(1)(it) = -(2/pi) K1(t)`, because the power series of `J + iY` loses
//! all significant digits there.

use std::f64::consts::{FRAC_2_PI, LN_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;

/// Largest series index accepted by [`series_coefficients`] and the moment
/// integrals; also the hard cap on the number of series terms.
pub const MAX_SERIES_INDEX: usize = 60;

const SERIES_CROSSOVER: f64 = 12.0;
const SERIES_REL_TOL: f64 = 1e-17;
const K_SERIES_CROSSOVER: f64 = 2.0;
const K_TABLE_STEP: f64 = 0.05;
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Bessel function of the first kind `J_order(x)` for real `x`.
///
/// Evaluated with the periodic trapezoid rule on Bessel's integral
/// `J_n(x) = (1/2pi) int_0^{2pi} cos(n t - x sin t) dt`, which converges
/// geometrically once the node count exceeds `|x| + n`.
pub fn bessel_j(order: i32, x: f64) -> Result<f64> {
    if order < 0 {
        return Err(Error::domain(format!("negative Bessel order {order}")));
    }
    if order > 20 {
        return Err(Error::domain(format!("Bessel order {order} exceeds 20")));
    }
    if !x.is_finite() {
        return Err(Error::domain("non-finite Bessel argument"));
    }
    if x.abs() > 100.0 {
        return Err(Error::domain(format!("Bessel argument {x} exceeds 100")));
    }
    Ok(bessel_j_unchecked(order as u32, x))
}

pub(crate) fn bessel_j_unchecked(order: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let n = f64::from(order);
    // even node count; the integrand is symmetric about t = pi
    let half = (x.abs() + n).ceil() as usize + 20;
    let count = 2 * half;
    let h = 2.0 * PI / count as f64;
    let mut sum = 0.0;
    for k in 1..half {
        let t = k as f64 * h;
        sum += (n * t - x * t.sin()).cos();
    }
    let end = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
    (1.0 + end + 2.0 * sum) / count as f64
}

/// Hankel function of the first kind `H_order^(1)(z)` for order 0 or 1.
///
/// Supported arguments: `0 < |z| <= 100` with `Re z >= 0`, excluding the
/// negative imaginary axis.
pub fn hankel1(order: u32, z: Complex64) -> Result<Complex64> {
    if order > 1 {
        return Err(Error::domain(format!("Hankel order {order} not supported")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("non-finite Hankel argument"));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::domain("Hankel function is singular at z = 0"));
    }
    if z.norm() > 100.0 {
        return Err(Error::domain(format!("|z| = {} exceeds 100", z.norm())));
    }
    if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
        return Err(Error::domain(format!("argument {z} outside Re z >= 0")));
    }
    let (h0, h1) = hankel01(z);
    Ok(if order == 0 { h0 } else { h1 })
}

/// `(H0^(1)(z), H1^(1)(z))` without argument validation.
pub(crate) fn hankel01(z: Complex64) -> (Complex64, Complex64) {
    if z.im == 0.0 {
        hankel01_real(z.re)
    } else if z.re == 0.0 {
        hankel01_imag(z.im)
    } else if z.norm() <= SERIES_CROSSOVER {
        hankel01_series_complex(z)
    } else {
        hankel01_asymptotic(z)
    }
}

/// `(H0^(1)(x), H1^(1)(x))` for real `x > 0`.
pub(crate) fn hankel01_real(x: f64) -> (Complex64, Complex64) {
    if x <= SERIES_CROSSOVER {
        let (j0, y0, j1, y1) = bessel_jy01_series(x);
        (Complex64::new(j0, y0), Complex64::new(j1, y1))
    } else {
        hankel01_asymptotic(Complex64::new(x, 0.0))
    }
}

/// `(H0^(1)(it), H1^(1)(it))` for real `t > 0`.
pub(crate) fn hankel01_imag(t: f64) -> (Complex64, Complex64) {
    let (k0, k1) = bessel_k01(t);
    (
        Complex64::new(0.0, -FRAC_2_PI * k0),
        Complex64::new(-FRAC_2_PI * k1, 0.0),
    )
}

/// Power series for `J0, Y0, J1, Y1` at real `x > 0`.
fn bessel_jy01_series(x: f64) -> (f64, f64, f64, f64) {
    let q = -0.25 * x * x;
    let mut t = 1.0; // q^m / (m!)^2
    let mut u = 1.0; // q^m / (m! (m+1)!)
    let mut harmonic = 0.0; // H_m
    let mut j0 = 1.0;
    let mut s0 = 0.0;
    let mut j1 = 1.0;
    let mut s1 = 1.0; // (H_0 + H_1) u_0
    let mut peak: f64 = 1.0;
    for m in 1..=MAX_SERIES_INDEX {
        let mf = m as f64;
        t *= q / (mf * mf);
        u *= q / (mf * (mf + 1.0));
        harmonic += 1.0 / mf;
        let next_harmonic = harmonic + 1.0 / (mf + 1.0);
        j0 += t;
        s0 += harmonic * t;
        j1 += u;
        s1 += (harmonic + next_harmonic) * u;
        peak = peak.max(t.abs() * next_harmonic);
        if 2.0 * mf > x && t.abs() * next_harmonic < SERIES_REL_TOL * peak {
            break;
        }
    }
    let half = 0.5 * x;
    let log_term = half.ln() + EULER_GAMMA;
    let j1 = half * j1;
    let y0 = FRAC_2_PI * (log_term * j0 - s0);
    let y1 = -FRAC_2_PI / x + FRAC_2_PI * log_term * j1 - half * s1 / PI;
    (j0, y0, j1, y1)
}

fn hankel01_series_complex(z: Complex64) -> (Complex64, Complex64) {
    let q = -0.25 * z * z;
    let mut t = Complex64::new(1.0, 0.0);
    let mut u = Complex64::new(1.0, 0.0);
    let mut harmonic = 0.0;
    let mut j0 = t;
    let mut s0 = Complex64::new(0.0, 0.0);
    let mut j1 = u;
    let mut s1 = u;
    let mut peak: f64 = 1.0;
    for m in 1..=MAX_SERIES_INDEX {
        let mf = m as f64;
        t *= q / (mf * mf);
        u *= q / (mf * (mf + 1.0));
        harmonic += 1.0 / mf;
        let next_harmonic = harmonic + 1.0 / (mf + 1.0);
        j0 += t;
        s0 += harmonic * t;
        j1 += u;
        s1 += (harmonic + next_harmonic) * u;
        let size = t.norm() * next_harmonic;
        peak = peak.max(size);
        if 2.0 * mf > z.norm() && size < SERIES_REL_TOL * peak {
            break;
        }
    }
    let half = 0.5 * z;
    let log_term = half.ln() + EULER_GAMMA;
    let j1 = half * j1;
    let y0 = FRAC_2_PI * (log_term * j0 - s0);
    let y1 = -FRAC_2_PI / z + FRAC_2_PI * log_term * j1 - half * s1 / PI;
    (j0 + I * y0, j1 + I * y1)
}

/// Hankel asymptotic expansion, summed until the terms stop decreasing.
fn hankel01_asymptotic(z: Complex64) -> (Complex64, Complex64) {
    let sum_for = |order: f64| {
        let mu = 4.0 * order * order;
        let mut coeff = 1.0;
        let mut power = Complex64::new(1.0, 0.0);
        let step = I / z;
        let mut sum = power;
        let mut last = f64::INFINITY;
        for k in 1..=MAX_SERIES_INDEX {
            let kf = k as f64;
            let odd = 2.0 * kf - 1.0;
            coeff *= (mu - odd * odd) / (8.0 * kf);
            power *= step;
            let term = coeff * power;
            let size = term.norm();
            if size > last {
                break;
            }
            sum += term;
            last = size;
            if size < SERIES_REL_TOL {
                break;
            }
        }
        sum
    };
    let prefactor = (2.0 / (PI * z)).sqrt();
    let phase0 = (I * (z - 0.25 * PI)).exp();
    let phase1 = phase0 * (-I);
    (prefactor * phase0 * sum_for(0.0), prefactor * phase1 * sum_for(1.0))
}

/// Modified Bessel functions of the second kind `(K0(t), K1(t))`, `t > 0`.
pub(crate) fn bessel_k01(t: f64) -> (f64, f64) {
    if t <= K_SERIES_CROSSOVER {
        bessel_k01_series(t)
    } else {
        bessel_k01_trapezoid(t)
    }
}

fn bessel_k01_series(t: f64) -> (f64, f64) {
    let q = 0.25 * t * t;
    let mut a = 1.0;
    let mut b = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut s0 = 0.0;
    let mut i1 = 1.0;
    let mut s1 = 1.0;
    for m in 1..=MAX_SERIES_INDEX {
        let mf = m as f64;
        a *= q / (mf * mf);
        b *= q / (mf * (mf + 1.0));
        harmonic += 1.0 / mf;
        let next_harmonic = harmonic + 1.0 / (mf + 1.0);
        i0 += a;
        s0 += harmonic * a;
        i1 += b;
        s1 += (harmonic + next_harmonic) * b;
        if a * next_harmonic < SERIES_REL_TOL * i0 {
            break;
        }
    }
    let half = 0.5 * t;
    let log_term = half.ln() + EULER_GAMMA;
    let k0 = -log_term * i0 + s0;
    let k1 = 1.0 / t + log_term * half * i1 - 0.5 * half * s1;
    (k0, k1)
}

fn cosh_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..400).map(|k| (k as f64 * K_TABLE_STEP).cosh()).collect())
}

/// Trapezoid rule on `K_nu(t) = int_0^inf exp(-t cosh s) cosh(nu s) ds`.
/// On the strip `|Im s| < pi/3` the integrand is bounded by
/// `exp(-t cosh(Re s) / 2)`, so the relative error behaves like
/// `exp(t/2 - 2 pi^2 / (3h))`; the step is chosen to keep that near 1e-14.
fn bessel_k01_trapezoid(t: f64) -> (f64, f64) {
    let table = cosh_table();
    let stride = ((6.5 / (31.0 + 0.5 * t)) / K_TABLE_STEP).floor().max(1.0) as usize;
    let mut k0 = 0.5;
    let mut k1 = 0.5;
    for &c in table.iter().step_by(stride).skip(1) {
        let excess = t * (c - 1.0);
        if excess > 45.0 {
            break;
        }
        let e = (-excess).exp();
        k0 += e;
        k1 += e * c;
    }
    let scale = stride as f64 * K_TABLE_STEP * (-t).exp();
    (scale * k0, scale * k1)
}

/// Coefficients of the logarithmic expansion
/// `H0^(1)(kr) = sum_m (c5(m) + c6(m) ln(k/2)) k^{2m} r^{2m} + c6(m) ln(r) k^{2m} r^{2m}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCoefficients {
    pub m: usize,
    pub c5: Complex64,
    pub c6: Complex64,
}

/// Returns `(C5(m), C6(m))`. The harmonic term in `C5` is the harmonic
/// number `H_m` (with `H_0 = 0`), as in the standard `Y0` series.
pub fn series_coefficients(m: usize) -> Result<SeriesCoefficients> {
    if m > MAX_SERIES_INDEX {
        return Err(Error::domain(format!("series index {m} exceeds {MAX_SERIES_INDEX}")));
    }
    Ok(coefficient_table()[m])
}

fn compute_coefficients(m: usize) -> SeriesCoefficients {
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut factorial = 1.0;
    let mut harmonic = 0.0;
    for l in 1..=m {
        factorial *= l as f64;
        harmonic += 1.0 / l as f64;
    }
    // (-1)^m / (4^m (m!)^2)
    let base = sign / (4f64.powi(m as i32) * factorial * factorial);
    let c5 = base * Complex64::new(1.0, FRAC_2_PI * (EULER_GAMMA - harmonic));
    let c6 = Complex64::new(0.0, 2.0 * base / PI);
    SeriesCoefficients { m, c5, c6 }
}

pub(crate) fn coefficient_table() -> &'static [SeriesCoefficients] {
    static TABLE: OnceLock<Vec<SeriesCoefficients>> = OnceLock::new();
    TABLE.get_or_init(|| (0..=MAX_SERIES_INDEX).map(compute_coefficients).collect())
}

fn check_index(m: usize) -> Result<()> {
    if m > MAX_SERIES_INDEX {
        return Err(Error::domain(format!("moment index {m} exceeds {MAX_SERIES_INDEX}")));
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `int_{-1}^1 int_{-1}^1 (s - t)^{2m} dt ds`.
pub fn int7(m: usize) -> Result<f64> {
    check_index(m)?;
    Ok(int7_unchecked(m))
}

/// `int_{-1}^1 int_{-1}^1 (s - t)^{2m} ln|s - t| dt ds`.
pub fn int8(m: usize) -> Result<f64> {
    check_index(m)?;
    Ok(int8_unchecked(m))
}

/// `int_{-1}^1 int_{-1}^1 (s - t)^{2m} s t dt ds`.
pub fn int9(m: usize) -> Result<f64> {
    check_index(m)?;
    Ok(int9_unchecked(m))
}

/// `int_{-1}^1 int_{-1}^1 (s - t)^{2m} s t ln|s - t| dt ds`.
pub fn int10(m: usize) -> Result<f64> {
    check_index(m)?;
    Ok(int10_unchecked(m))
}

fn int7_unchecked(m: usize) -> f64 {
    let mf = m as f64;
    2f64.powi(2 * m as i32 + 2) / ((2.0 * mf + 1.0) * (mf + 1.0))
}

fn int8_unchecked(m: usize) -> f64 {
    let mf = m as f64;
    let odd = 2.0 * mf + 1.0;
    let even = 2.0 * mf + 2.0;
    int7_unchecked(m) * LN_2 - (4.0 * mf + 3.0) * 2f64.powi(2 * m as i32 + 3) / (odd * odd * even * even)
}

fn int9_unchecked(m: usize) -> f64 {
    // only odd l survive the (1 - (-1)^l)^2 factor, and each contributes -4
    (1..=2 * m)
        .step_by(2)
        .map(|l| -4.0 * binomial(2 * m, l) / ((l as f64 + 2.0) * ((2 * m + 2 - l) as f64)))
        .sum()
}

fn int10_unchecked(m: usize) -> f64 {
    let mf = m as f64;
    let odd = 2.0 * mf + 1.0;
    let p1 = 2f64.powi(2 * m as i32 + 1);
    let p2 = 2.0 * p1;
    let p3 = 2.0 * p2;
    let first = -mf * p2 * LN_2 / (odd * (mf + 1.0) * (mf + 2.0));
    let second = (p3 / (2.0 * mf + 3.0) - p2 / ((mf + 2.0) * (mf + 2.0)) - p1 / (mf + 1.0)) / (odd * (mf + 1.0));
    let sum: f64 = (0..=2 * m + 1)
        .map(|l| {
            let lf = l as f64;
            let c = binomial(2 * m + 1, l);
            if l % 2 == 1 {
                c * 2.0 * odd * odd / (lf + 2.0)
            } else {
                -c * 2.0 * (4.0 * mf + 3.0) / (lf + 3.0)
            }
        })
        .sum();
    let third = sum / (2.0 * (mf + 1.0) * (mf + 1.0) * odd * odd);
    first + second + third
}

/// Cached `[Int7, Int8, Int9, Int10]` for every `m <= MAX_SERIES_INDEX`.
pub(crate) fn moment_table() -> &'static [[f64; 4]] {
    static TABLE: OnceLock<Vec<[f64; 4]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=MAX_SERIES_INDEX)
            .map(|m| {
                [
                    int7_unchecked(m),
                    int8_unchecked(m),
                    int9_unchecked(m),
                    int10_unchecked(m),
                ]
            })
            .collect()
    })
}
