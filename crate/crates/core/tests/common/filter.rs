//! Closed-form filter of the trapezoid contour rule on diagonal pencils.

use itep_core::{spectral_project, ComplexMatrix, ProbeConfig, ProbeSolver};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Trapezoid rule on `z_j = r e^{2 pi i j / W}` applied to `z / (z - lambda)`:
/// the geometric sum gives `1 / (1 - (lambda / r)^W)`.
pub fn phi(lambda: Complex64, r: f64, w: usize) -> Complex64 {
    1.0 / (1.0 - (lambda / r).powu(w as u32))
}

/// Largest `||P f - phi(Lambda) f|| / ||phi(Lambda) f||` over the grid of
/// eigenvalues and node counts.
pub fn filter_oracle_error(solver: ProbeSolver) -> f64 {
    let r = 0.01;
    let lambdas = [
        c(0.0, 0.0),
        c(r / 2.0, 0.0),
        c(2.0 * r, 0.0),
        c(10.0 * r, 0.0),
        c(0.0, r / 3.0),
    ];
    let a = ComplexMatrix::from_diagonal(&lambdas);
    let b = ComplexMatrix::identity(lambdas.len());
    let f: Vec<Complex64> = (0..lambdas.len()).map(|i| c(1.0 + i as f64, 0.5 - i as f64)).collect();
    let mut worst: f64 = 0.0;
    for w in [8, 16, 32] {
        let config = ProbeConfig {
            contour_radius: r,
            quadrature_points: w,
            solver,
            ..ProbeConfig::default()
        };
        let p = spectral_project(&a, &b, &config, &f).unwrap();
        let want: Vec<Complex64> = lambdas.iter().zip(&f).map(|(&l, &fi)| phi(l, r, w) * fi).collect();
        let diff: Vec<Complex64> = p.iter().zip(&want).map(|(x, y)| x - y).collect();
        worst = worst.max(norm(&diff) / norm(&want));
        assert!((config.filter(lambdas[1]) - phi(lambdas[1], r, w)).norm() < 1e-15);
    }
    worst
}
