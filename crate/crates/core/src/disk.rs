//! Exact transmission eigenvalues of a disk.
//!
//! Separation of variables in a disk of radius `R` with index of refraction
//! `n` reduces the transmission problem for angular order `m` to the zeros of
//!
//! `d_m(k) = sqrt(n) J_m(kR) J_{m-1}(sqrt(n) kR) - J_{m-1}(kR) J_m(sqrt(n) kR)`
//!
//! with `J_{-1} = -J_1`. Orders `m >= 1` give double eigenvalues (`cos` and
//! `sin` modes).

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::special::bessel_j_unchecked;

/// Grid spacing of the sign-change search.
pub const GRID_STEP: f64 = 1e-3;
/// Bisection stops once the bracket is this narrow.
pub const ROOT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiskSpec {
    pub radius: f64,
    pub refraction: f64,
    pub max_order: u32,
    pub k_max: f64,
}

impl Default for DiskSpec {
    fn default() -> Self {
        Self {
            radius: 0.5,
            refraction: 16.0,
            max_order: 2,
            k_max: 7.0,
        }
    }
}

impl DiskSpec {
    /// Parses a TOML document; missing keys keep their defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::config(format!(
                "disk radius must be positive, got {}",
                self.radius
            )));
        }
        if !(self.refraction > 1.0) || !self.refraction.is_finite() {
            return Err(Error::config(format!(
                "index of refraction must exceed 1, got {}",
                self.refraction
            )));
        }
        if !(self.k_max > 0.0) || !self.k_max.is_finite() {
            return Err(Error::config(format!("k_max must be positive, got {}", self.k_max)));
        }
        if self.max_order > 20 {
            return Err(Error::config(format!(
                "orders above 20 are not supported, got {}",
                self.max_order
            )));
        }
        if self.refraction.sqrt() * self.k_max * self.radius > 100.0 {
            return Err(Error::config("sqrt(n) k_max R exceeds the Bessel range of 100"));
        }
        Ok(())
    }
}

fn j(order: i64, x: f64) -> f64 {
    if order < 0 {
        -bessel_j_unchecked(1, x)
    } else {
        bessel_j_unchecked(order as u32, x)
    }
}

/// Absolute error of the Bessel values, amplified by the cancellation in
/// `d_m` near `k = 0` where both products agree to leading order.
const BESSEL_ABS_ERR: f64 = 1e-14;

/// `d_m(k)` and the size of its rounding error.
fn determinant_with_noise(spec: &DiskSpec, m: u32, k: f64) -> (f64, f64) {
    let s = spec.refraction.sqrt();
    let (x, y) = (k * spec.radius, s * k * spec.radius);
    let m = m as i64;
    let (jm_x, jm1_x, jm_y, jm1_y) = (j(m, x), j(m - 1, x), j(m, y), j(m - 1, y));
    let value = s * jm_x * jm1_y - jm1_x * jm_y;
    let noise = BESSEL_ABS_ERR * (s * (jm_x.abs() + jm1_y.abs()) + jm1_x.abs() + jm_y.abs());
    (value, noise)
}

fn determinant(spec: &DiskSpec, m: u32, k: f64) -> f64 {
    determinant_with_noise(spec, m, k).0
}

/// `d_m(k)` for the disk described by `spec`.
pub fn determinant_m(spec: &DiskSpec, m: u32, k: f64) -> Result<f64> {
    spec.validate()?;
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("wavenumber must be positive, got {k}")));
    }
    if m > spec.max_order.max(20) {
        return Err(Error::domain(format!("order {m} out of range")));
    }
    Ok(determinant(spec, m, k))
}

/// An exact transmission eigenvalue and its angular order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskEigenvalue {
    pub order: u32,
    pub k: f64,
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign changes of `d_m` for `m = 0..=max_order` on `(0, k_max]`, refined by
/// bisection and sorted by `k`. Grid values below their rounding error are
/// skipped, which removes the noise of `d_m` near `k = 0` for higher orders.
/// Tangential zeros are not detected.
pub fn find_eigenvalues(spec: &DiskSpec) -> Result<Vec<DiskEigenvalue>> {
    find_eigenvalues_with_step(spec, GRID_STEP)
}

pub fn find_eigenvalues_with_step(spec: &DiskSpec, step: f64) -> Result<Vec<DiskEigenvalue>> {
    spec.validate()?;
    if !(step > 0.0) {
        return Err(Error::config(format!("grid step must be positive, got {step}")));
    }
    let points = (spec.k_max / step).floor() as usize;
    let mut roots = Vec::new();
    for m in 0..=spec.max_order {
        let f = |k: f64| determinant(spec, m, k);
        let mut prev: Option<(f64, f64)> = None;
        for i in 1..=points {
            let k = i as f64 * step;
            let (val, noise) = determinant_with_noise(spec, m, k);
            if val.abs() <= noise {
                continue;
            }
            if let Some((prev_k, prev_val)) = prev {
                if (val < 0.0) != (prev_val < 0.0) {
                    roots.push(DiskEigenvalue {
                        order: m,
                        k: bisect(f, prev_k, k, prev_val),
                    });
                }
            }
            prev = Some((k, val));
        }
    }
    roots.sort_by(|a, b| a.k.total_cmp(&b.k));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_order_uses_negative_index_convention() {
        let spec = DiskSpec::default();
        // at (1/2, 16): d_0(k) = -4 J_0(k/2) J_1(2k) + J_1(k/2) J_0(2k)
        for &k in &[1.0, 2.5, 6.0] {
            let direct = bessel_j_unchecked(1, k / 2.0) * bessel_j_unchecked(0, 2.0 * k)
                - 4.0 * bessel_j_unchecked(0, k / 2.0) * bessel_j_unchecked(1, 2.0 * k);
            assert!((determinant_m(&spec, 0, k).unwrap() - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let bad = DiskSpec {
            refraction: 1.0,
            ..DiskSpec::default()
        };
        assert!(find_eigenvalues(&bad).is_err());
        assert!(determinant_m(&DiskSpec::default(), 0, 0.0).is_err());
    }
}
