//! Contour-integral probing of a matrix pencil.
//!
//! For a pencil `(A, B)` the projection onto the generalized eigenspaces with
//! eigenvalues inside the circle `|z| = r` is
//! `P = (1/2 pi i) oint (zB - A)^-1 B dz`. On a diagonal pencil with `B = I`
//! the `W`-point trapezoid rule with nodes `z_j = r e^{i(theta0 + 2 pi j / W)}`
//! replaces the exact indicator of the disk by the rational filter
//! `phi(lambda) = 1 / (1 - (lambda/r)^W e^{-i W theta0})`, which is close to 1
//! inside the circle and decays like `(r/|lambda|)^W` outside. Projecting a
//! random vector twice and comparing the norms of `P f` and `P^2 f` tells
//! whether anything survived the filter.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::{
    shifted_hessenberg_matvec, vector_norm, ComplexMatrix, HessenbergReduction, LuFactorization, ShiftedHessenbergLu,
};

/// Relative residual accepted after iterative refinement.
const RESIDUAL_TOL: f64 = 1e-10;
/// Radius inflation used for the single retry after a failed node solve.
const RETRY_INFLATION: f64 = 1e-3;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// How the shifted systems `(z_j B - A) x = B f` are solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeSolver {
    /// Reduce `B^-1 A` to Hessenberg form once; each node then costs `O(n^2)`.
    #[default]
    Hessenberg,
    /// Independent dense LU factorization of `z_j B - A` at every node.
    Lu,
}

impl std::str::FromStr for ProbeSolver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hessenberg" => Ok(ProbeSolver::Hessenberg),
            "lu" => Ok(ProbeSolver::Lu),
            other => Err(Error::config(format!(
                "unknown solver {other:?} (expected hessenberg or lu)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeConfig {
    pub contour_radius: f64,
    pub quadrature_points: usize,
    pub threshold: f64,
    pub seed: u64,
    /// `P f` is treated as zero when `||P f|| < floor * ||f||`.
    pub floor: f64,
    /// Rotate the nodes by half a step so none lies on the real axis.
    pub half_step_offset: bool,
    /// Solve `(zB - A) x = f` instead of `(zB - A) x = B f`. The resulting
    /// operator is a projection only when `B = I`.
    pub literal_resolvent: bool,
    pub solver: ProbeSolver,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            contour_radius: 0.01,
            quadrature_points: 16,
            threshold: 0.5,
            seed: 0,
            floor: 1e-12,
            half_step_offset: false,
            literal_resolvent: false,
            solver: ProbeSolver::Hessenberg,
        }
    }
}

impl ProbeConfig {
    pub fn validate(&self) -> Result<()> {
        let r = self.contour_radius;
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::config(format!("contour radius must lie in (0, 1), got {r}")));
        }
        if !(4..=1024).contains(&self.quadrature_points) {
            return Err(Error::config(format!(
                "quadrature points must lie in [4, 1024], got {}",
                self.quadrature_points
            )));
        }
        let s = self.threshold;
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::config(format!("threshold must lie in (0, 1), got {s}")));
        }
        if !(self.floor > 0.0) || !self.floor.is_finite() {
            return Err(Error::config(format!("floor must be positive, got {}", self.floor)));
        }
        Ok(())
    }

    fn start_angle(&self) -> f64 {
        if self.half_step_offset {
            PI / self.quadrature_points as f64
        } else {
            0.0
        }
    }

    /// Quadrature nodes on the contour.
    pub fn nodes(&self) -> Vec<Complex64> {
        contour_nodes(self.contour_radius, self.quadrature_points, self.start_angle())
    }

    /// Scalar the discretized projection applies to an eigenvalue `lambda`
    /// of a pencil with `B = I`.
    pub fn filter(&self, lambda: Complex64) -> Complex64 {
        let w = self.quadrature_points as f64;
        let rot = Complex64::from_polar(1.0, -w * self.start_angle());
        let q = (lambda / self.contour_radius).powu(self.quadrature_points as u32) * rot;
        (Complex64::new(1.0, 0.0) - q).inv()
    }
}

fn contour_nodes(radius: f64, count: usize, start: f64) -> Vec<Complex64> {
    (0..count)
        .map(|j| Complex64::from_polar(radius, start + 2.0 * PI * j as f64 / count as f64))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOutcome {
    /// `||P^2 f|| / ||P f||`, zero when `P f` is below the floor
    pub indicator: f64,
    pub decision: bool,
    pub proj1_norm: f64,
    pub proj2_norm: f64,
    /// Failed node solves that were absorbed by the radius retry.
    pub solve_failures: usize,
}

fn check_pencil(a: &ComplexMatrix, b: &ComplexMatrix, f: &[Complex64]) -> Result<()> {
    if !a.is_square() || a.rows() != b.rows() || a.cols() != b.cols() || f.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "pencil {}x{} / {}x{} with vector of length {}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            f.len()
        )));
    }
    Ok(())
}

/// `zB - A` together with its LU factors.
struct ShiftedSolver {
    z: Complex64,
    matrix: ComplexMatrix,
    lu: LuFactorization,
    scale: f64,
}

impl ShiftedSolver {
    fn new(a: &ComplexMatrix, b: &ComplexMatrix, z: Complex64) -> Result<Self> {
        let matrix = b.combine(z, a, Complex64::new(-1.0, 0.0))?;
        let scale = a.frobenius_norm() + z.norm() * b.frobenius_norm();
        let lu = LuFactorization::new(matrix.clone()).ok_or(Error::SolveFailure { z })?;
        Ok(Self { z, matrix, lu, scale })
    }

    /// LU solve, one step of iterative refinement, residual check.
    fn solve(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut x = self.lu.solve(f);
        let residual = |x: &[Complex64]| -> Vec<Complex64> {
            self.matrix.matvec(x).iter().zip(f).map(|(mx, fi)| fi - mx).collect()
        };
        let correction = self.lu.solve(&residual(&x));
        for (xi, ci) in x.iter_mut().zip(&correction) {
            *xi += ci;
        }
        let res = vector_norm(&residual(&x));
        let xn = vector_norm(&x);
        if !res.is_finite() || !xn.is_finite() || res > RESIDUAL_TOL * self.scale * xn {
            return Err(Error::SolveFailure { z: self.z });
        }
        Ok(x)
    }
}

/// Solves `(zB - A) x = f`.
pub fn resolvent_apply(a: &ComplexMatrix, b: &ComplexMatrix, z: Complex64, f: &[Complex64]) -> Result<Vec<Complex64>> {
    check_pencil(a, b, f)?;
    ShiftedSolver::new(a, b, z)?.solve(f)
}

/// `B^-1 A = Q H Q^*` with `H` upper Hessenberg, shared by every contour
/// node: `(zB - A)^-1 B = Q (zI - H)^-1 Q^*`.
struct Reduction {
    hess: HessenbergReduction,
    b_lu: LuFactorization,
    h_norm: f64,
}

impl Reduction {
    fn new(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        let b_lu = LuFactorization::new(b.clone()).ok_or(Error::SolveFailure {
            z: Complex64::new(0.0, 0.0),
        })?;
        let m = b_lu.solve_matrix(a);
        if !m.is_finite() {
            return Err(Error::SolveFailure {
                z: Complex64::new(0.0, 0.0),
            });
        }
        let hess = HessenbergReduction::new(m);
        let h_norm = hess.h().frobenius_norm();
        Ok(Self { hess, b_lu, h_norm })
    }
}

/// `(zI - H)` factored at one node.
struct HessenbergNode {
    z: Complex64,
    lu: ShiftedHessenbergLu,
}

impl HessenbergNode {
    /// Solve with one refinement step and a residual check against
    /// `||H|| + |z| sqrt(n)`.
    fn solve(&self, reduction: &Reduction, g: &[Complex64]) -> Result<Vec<Complex64>> {
        let h = reduction.hess.h();
        let residual = |x: &[Complex64]| -> Vec<Complex64> {
            shifted_hessenberg_matvec(h, self.z, x)
                .iter()
                .zip(g)
                .map(|(mx, gi)| gi - mx)
                .collect()
        };
        let mut x = g.to_vec();
        self.lu.solve_in_place(&mut x);
        let mut correction = residual(&x);
        self.lu.solve_in_place(&mut correction);
        for (xi, ci) in x.iter_mut().zip(&correction) {
            *xi += ci;
        }
        let res = vector_norm(&residual(&x));
        let xn = vector_norm(&x);
        let scale = reduction.h_norm + self.z.norm() * (g.len() as f64).sqrt();
        if !res.is_finite() || !xn.is_finite() || res > RESIDUAL_TOL * scale * xn {
            return Err(Error::SolveFailure { z: self.z });
        }
        Ok(x)
    }
}

/// Factored resolvents at every node of one contour.
enum Contour<'a> {
    Dense {
        solvers: Vec<ShiftedSolver>,
        /// right-hand-side weight; `None` for the literal resolvent
        b: Option<&'a ComplexMatrix>,
    },
    Reduced {
        reduction: &'a Reduction,
        nodes: Vec<HessenbergNode>,
        literal: bool,
    },
}

impl Contour<'_> {
    fn dense<'a>(a: &ComplexMatrix, b: &'a ComplexMatrix, nodes: &[Complex64], literal: bool) -> Result<Contour<'a>> {
        let solvers = nodes
            .iter()
            .map(|&z| ShiftedSolver::new(a, b, z))
            .collect::<Result<_>>()?;
        Ok(Contour::Dense {
            solvers,
            b: (!literal).then_some(b),
        })
    }

    fn reduced<'a>(reduction: &'a Reduction, nodes: &[Complex64], literal: bool) -> Result<Contour<'a>> {
        let nodes = nodes
            .iter()
            .map(|&z| {
                ShiftedHessenbergLu::new(reduction.hess.h(), z)
                    .map(|lu| HessenbergNode { z, lu })
                    .ok_or(Error::SolveFailure { z })
            })
            .collect::<Result<_>>()?;
        Ok(Contour::Reduced {
            reduction,
            nodes,
            literal,
        })
    }

    /// `(1/W) sum_j z_j (z_j B - A)^-1 B f`.
    fn project(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        match self {
            Contour::Dense { solvers, b } => {
                let rhs = match b {
                    Some(b) => b.matvec(f),
                    None => f.to_vec(),
                };
                let mut acc = vec![ZERO; f.len()];
                for s in solvers {
                    let x = s.solve(&rhs)?;
                    for (dst, xi) in acc.iter_mut().zip(&x) {
                        *dst += s.z * xi;
                    }
                }
                let inv = 1.0 / solvers.len() as f64;
                acc.iter_mut().for_each(|v| *v *= inv);
                Ok(acc)
            }
            Contour::Reduced {
                reduction,
                nodes,
                literal,
            } => {
                let mut g = if *literal { reduction.b_lu.solve(f) } else { f.to_vec() };
                reduction.hess.apply_adjoint(&mut g);
                let mut y = reduced_sum(reduction, nodes, &g)?;
                reduction.hess.apply(&mut y);
                Ok(y)
            }
        }
    }

    /// `(||P f||, ||P^2 f||)`. The reduced solver stays in Hessenberg
    /// coordinates, where `Q` preserves both norms.
    fn project_twice(&self, f: &[Complex64]) -> Result<(f64, f64)> {
        match self {
            Contour::Reduced {
                reduction,
                nodes,
                literal: false,
            } => {
                let mut g = f.to_vec();
                reduction.hess.apply_adjoint(&mut g);
                let p1 = reduced_sum(reduction, nodes, &g)?;
                let p2 = reduced_sum(reduction, nodes, &p1)?;
                Ok((vector_norm(&p1), vector_norm(&p2)))
            }
            _ => {
                let p1 = self.project(f)?;
                let p2 = self.project(&p1)?;
                Ok((vector_norm(&p1), vector_norm(&p2)))
            }
        }
    }
}

/// `(1/W) sum_j z_j (z_j I - H)^-1 g`.
fn reduced_sum(reduction: &Reduction, nodes: &[HessenbergNode], g: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut acc = vec![ZERO; g.len()];
    for node in nodes {
        let y = node.solve(reduction, g)?;
        for (dst, yi) in acc.iter_mut().zip(&y) {
            *dst += node.z * yi;
        }
    }
    let inv = 1.0 / nodes.len() as f64;
    acc.iter_mut().for_each(|v| *v *= inv);
    Ok(acc)
}

/// Runs `body` on the configured contour; on a solve failure at a node
/// retries once on a slightly larger circle. Returns the result and the
/// number of failures.
fn with_retry<T>(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    config: &ProbeConfig,
    body: impl Fn(&Contour) -> Result<T>,
) -> Result<(T, usize)> {
    let reduction = match config.solver {
        ProbeSolver::Hessenberg => Some(Reduction::new(a, b)?),
        ProbeSolver::Lu => None,
    };
    let attempt = |radius: f64| {
        let nodes = contour_nodes(radius, config.quadrature_points, config.start_angle());
        let contour = match &reduction {
            Some(r) => Contour::reduced(r, &nodes, config.literal_resolvent),
            None => Contour::dense(a, b, &nodes, config.literal_resolvent),
        };
        contour.and_then(|c| body(&c))
    };
    match attempt(config.contour_radius) {
        Ok(v) => Ok((v, 0)),
        Err(Error::SolveFailure { .. }) => attempt(config.contour_radius * (1.0 + RETRY_INFLATION)).map(|v| (v, 1)),
        Err(e) => Err(e),
    }
}

/// Quadrature approximation of the spectral projection
/// `(1/2 pi i) oint (zB - A)^-1 B f dz` (without the `B` when
/// `config.literal_resolvent` is set).
pub fn spectral_project(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    config: &ProbeConfig,
    f: &[Complex64],
) -> Result<Vec<Complex64>> {
    config.validate()?;
    check_pencil(a, b, f)?;
    with_retry(a, b, config, |c| c.project(f)).map(|(v, _)| v)
}

/// Unit-norm vector with independent complex standard-normal entries.
pub fn random_vector(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    let norm = vector_norm(&v);
    if norm > 0.0 {
        v.iter_mut().for_each(|z| *z /= norm);
    }
    v
}

/// Probes with a vector drawn from `config.seed`.
pub fn probe(a: &ComplexMatrix, b: &ComplexMatrix, config: &ProbeConfig) -> Result<ProbeOutcome> {
    let f = random_vector(a.rows(), config.seed);
    probe_with_vector(a, b, config, &f)
}

/// Projects `f` twice, reusing the node factorizations for the second pass.
pub fn probe_with_vector(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    config: &ProbeConfig,
    f: &[Complex64],
) -> Result<ProbeOutcome> {
    config.validate()?;
    check_pencil(a, b, f)?;
    let ((p1, p2), solve_failures) = with_retry(a, b, config, |c| c.project_twice(f))?;
    let f_norm = vector_norm(f);
    let (indicator, decision) = if p1 < config.floor * f_norm {
        (0.0, false)
    } else {
        let ratio = p2 / p1;
        (ratio, ratio >= config.threshold)
    };
    Ok(ProbeOutcome {
        indicator,
        decision,
        proj1_norm: p1,
        proj2_norm: p2,
        solve_failures,
    })
}
