//! Brute-force reference integrators shared by the integration tests.
//!
//! Adaptive Gauss–Kronrod (7/15) with interval bisection, written
//! independently of the library's Gauss rules.

#![allow(dead_code)]

pub mod bem;
pub mod filter;

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn kronrod<F>(f: &mut F, a: f64, b: f64, dim: usize) -> (Vec<Complex64>, f64)
where
    F: FnMut(f64) -> Vec<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = vec![Complex64::new(0.0, 0.0); dim];
    let mut g = vec![Complex64::new(0.0, 0.0); dim];
    for (idx, (&x, &wk)) in XGK.iter().zip(&WGK).enumerate() {
        let nodes: &[f64] = if x == 0.0 { &[0.0] } else { &[-1.0, 1.0] };
        for &s in nodes {
            let v = f(c + s * h * x);
            for d in 0..dim {
                k[d] += wk * v[d];
                if idx % 2 == 1 {
                    g[d] += WG[idx / 2] * v[d];
                }
            }
        }
    }
    let mut err: f64 = 0.0;
    for d in 0..dim {
        k[d] *= h;
        g[d] *= h;
        err = err.max((k[d] - g[d]).norm());
    }
    (k, err)
}

struct Piece {
    lo: f64,
    hi: f64,
    val: Vec<Complex64>,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Most subintervals one call may create.
const MAX_PIECES: usize = 2000;

/// Globally adaptive integral of a vector-valued function over `[a, b]`:
/// the piece with the largest error estimate is bisected until the summed
/// estimate drops below `tol` (absolute, max norm over components) or to
/// the roundoff level of the result.
pub fn integrate_vec<F>(f: &mut F, a: f64, b: f64, dim: usize, tol: f64) -> Vec<Complex64>
where
    F: FnMut(f64) -> Vec<Complex64>,
{
    let (val, err) = kronrod(f, a, b, dim);
    let mut heap = std::collections::BinaryHeap::new();
    heap.push(Piece { lo: a, hi: b, val, err });
    let mut total_err = err;
    while heap.len() < MAX_PIECES {
        let scale = heap
            .iter()
            .map(|p| p.val.iter().map(|v| v.norm()).fold(0.0, f64::max))
            .sum::<f64>();
        if total_err <= tol || total_err <= 1e-14 * scale {
            break;
        }
        let worst = heap.pop().unwrap();
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            heap.push(worst);
            break;
        }
        total_err -= worst.err;
        for (lo, hi) in [(worst.lo, mid), (mid, worst.hi)] {
            let (val, err) = kronrod(f, lo, hi, dim);
            total_err += err;
            heap.push(Piece { lo, hi, val, err });
        }
    }
    let mut total = vec![Complex64::new(0.0, 0.0); dim];
    for piece in heap {
        for d in 0..dim {
            total[d] += piece.val[d];
        }
    }
    total
}

pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    let mut g = |x: f64| vec![Complex64::new(f(x), 0.0)];
    integrate_vec(&mut g, a, b, 1, tol)[0].re
}

/// `int_{-1}^1 int_{-1}^1 f(s, t) dt ds` with the inner integral split at
/// `t = s`, suitable for integrands singular on the diagonal.
pub fn integrate_square_diagonal<F: FnMut(f64, f64) -> f64>(mut f: F, tol: f64) -> f64 {
    let mut outer = |s: f64| {
        let inner = integrate(|t| f(s, t), -1.0, s, 0.1 * tol) + integrate(|t| f(s, t), s, 1.0, 0.1 * tol);
        vec![Complex64::new(inner, 0.0)]
    };
    integrate_vec(&mut outer, -1.0, 1.0, 1, tol)[0].re
}

/// Brute-force `[Int7, Int8, Int9, Int10](m)`: the square integrals of
/// `(s-t)^2m`, `(s-t)^2m ln|s-t|`, `(s-t)^2m s t` and `(s-t)^2m s t ln|s-t|`.
pub fn defining_integrals(m: usize) -> [f64; 4] {
    let p = 2 * m as i32;
    let log = |s: f64, t: f64| if s == t { 0.0 } else { (s - t).abs().ln() };
    [
        integrate_square_diagonal(|s, t| (s - t).powi(p), 1e-12),
        integrate_square_diagonal(|s, t| (s - t).powi(p) * log(s, t), 1e-12),
        integrate_square_diagonal(|s, t| (s - t).powi(p) * s * t, 1e-12),
        integrate_square_diagonal(|s, t| (s - t).powi(p) * s * t * log(s, t), 1e-12),
    ]
}
