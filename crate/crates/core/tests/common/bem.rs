//! Brute-force Galerkin entries by nested adaptive quadrature over each
//! panel pair, evaluated straight from the defining double integrals.

use itep_core::geometry::{BoundaryMesh, Point};
use itep_core::special::hankel1;
use num_complex::Complex64;

use super::integrate_vec;

const I: Complex64 = Complex64::new(0.0, 1.0);
const TOL: f64 = 1e-10;

/// Integrals over segment `p` (x, parameter `s`) times segment `q` (y,
/// parameter `t`):
/// `[Phi, Phi N_a(s) N_b(t) (a,b = 00,01,10,11), dPhi/dnu_y N_0(t),
///   dPhi/dnu_y N_1(t), dPhi/dnu_x N_0(s), dPhi/dnu_x N_1(s)]`
/// with `N_0 = (1 - xi)/2`, `N_1 = (1 + xi)/2`.
pub type PairIntegrals = [Complex64; 9];

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn shape(xi: f64) -> [f64; 2] {
    [0.5 * (1.0 - xi), 0.5 * (1.0 + xi)]
}

pub fn pair_integrals(mesh: &BoundaryMesh, kappa: Complex64, p: usize, q: usize) -> PairIntegrals {
    let n = mesh.segment_count();
    let (xa, xb) = (mesh.node(p), mesh.node((p + 1) % n));
    let (ya, yb) = (mesh.node(q), mesh.node((q + 1) % n));
    let (nx, ny) = (mesh.normal(p), mesh.normal(q));
    let jac = 0.25 * mesh.length(p) * mesh.length(q);
    let (ex, ey) = (sub(xb, xa), sub(yb, ya));

    // x - y measured from a shared node where there is one, so that nearby
    // points keep their relative accuracy
    let separation = |s: f64, t: f64| -> Point {
        let (a, b) = if p == q {
            (0.5 * (s - t), 0.0)
        } else if (p + 1) % n == q {
            (-0.5 * (1.0 - s), 0.5 * (1.0 + t))
        } else if (q + 1) % n == p {
            (0.5 * (1.0 + s), -0.5 * (1.0 - t))
        } else {
            let o = sub(xa, ya);
            let (ws, wt) = (0.5 * (1.0 + s), 0.5 * (1.0 + t));
            return [o[0] + ws * ex[0] - wt * ey[0], o[1] + ws * ex[1] - wt * ey[1]];
        };
        [a * ex[0] - b * ey[0], a * ex[1] - b * ey[1]]
    };

    let integrand = |s: f64, t: f64| -> Vec<Complex64> {
        let d = separation(s, t);
        let r = d[0].hypot(d[1]);
        let zero = Complex64::new(0.0, 0.0);
        if r == 0.0 {
            return vec![zero; 9];
        }
        let phi = 0.25 * I * hankel1(0, kappa * r).unwrap();
        // grad_y Phi = (i kappa / 4) H1(kappa r) (x - y) / r
        let g = 0.25 * I * kappa * hankel1(1, kappa * r).unwrap() / r;
        let dny = g * (ny[0] * d[0] + ny[1] * d[1]);
        let dnx = -g * (nx[0] * d[0] + nx[1] * d[1]);
        let (ns, nt) = (shape(s), shape(t));
        let mut out = vec![
            phi,
            phi * ns[0] * nt[0],
            phi * ns[0] * nt[1],
            phi * ns[1] * nt[0],
            phi * ns[1] * nt[1],
            dny * nt[0],
            dny * nt[1],
            dnx * ns[0],
            dnx * ns[1],
        ];
        out.iter_mut().for_each(|v| *v *= jac);
        out
    };

    // coincident panels: split the inner integral on the log diagonal
    let mut outer = |s: f64| {
        let mut inner = |t: f64| integrand(s, t);
        if p == q && s > -1.0 && s < 1.0 {
            let mut a = integrate_vec(&mut inner, -1.0, s, 9, 0.1 * TOL);
            let b = integrate_vec(&mut inner, s, 1.0, 9, 0.1 * TOL);
            a.iter_mut().zip(&b).for_each(|(u, v)| *u += v);
            a
        } else {
            integrate_vec(&mut inner, -1.0, 1.0, 9, 0.1 * TOL)
        }
    };
    let v = integrate_vec(&mut outer, -1.0, 1.0, 9, TOL);
    let mut out = [Complex64::new(0.0, 0.0); 9];
    out.copy_from_slice(&v);
    out
}

/// Dense `V, K, K', W` built from brute-force pair integrals, with
/// piecewise-constant `psi_i` on segment `i` and hats `phi_j` peaking at
/// node `j`.
pub struct OracleLayers {
    pub v: Vec<Vec<Complex64>>,
    pub k: Vec<Vec<Complex64>>,
    pub kp: Vec<Vec<Complex64>>,
    pub w: Vec<Vec<Complex64>>,
}

pub fn oracle_layers(mesh: &BoundaryMesh, kappa: Complex64) -> OracleLayers {
    let n = mesh.segment_count();
    let pairs: Vec<PairIntegrals> = (0..n * n)
        .map(|idx| pair_integrals(mesh, kappa, idx / n, idx % n))
        .collect();
    let at = |p: usize, q: usize| &pairs[p * n + q];
    let prev = |i: usize| (i + n - 1) % n;
    // the hat at node i is N_0 on segment i and N_1 on segment i-1
    let hat = |i: usize| [(i, 0usize), (prev(i), 1usize)];
    let slope = |seg: usize, a: usize| {
        if a == 0 {
            -1.0 / mesh.length(seg)
        } else {
            1.0 / mesh.length(seg)
        }
    };

    let grid = |f: &dyn Fn(usize, usize) -> Complex64| -> Vec<Vec<Complex64>> {
        (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect()
    };
    let v = grid(&|i, j| at(i, j)[0]);
    let k = grid(&|i, j| hat(j).iter().map(|&(q, b)| at(i, q)[5 + b]).sum());
    let kp = grid(&|i, j| hat(i).iter().map(|&(p, a)| at(p, j)[7 + a]).sum());
    let w = grid(&|i, j| {
        let mut sum = Complex64::new(0.0, 0.0);
        for &(p, a) in &hat(i) {
            for &(q, b) in &hat(j) {
                let (np, nq) = (mesh.normal(p), mesh.normal(q));
                let nn = np[0] * nq[0] + np[1] * nq[1];
                sum += slope(p, a) * slope(q, b) * at(p, q)[0] - kappa * kappa * nn * at(p, q)[1 + 2 * a + b];
            }
        }
        sum
    });
    OracleLayers { v, k, kp, w }
}
