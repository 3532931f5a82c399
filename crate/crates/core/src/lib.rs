//! Detection of interior transmission eigenvalues of a planar scatterer with
//! constant index of refraction.
//!
//! The boundary-integral operator `Z(k)` and its counterpart `Z(ik)` are
//! discretized with a Galerkin boundary-element method, giving a dense pencil
//! `(A, B)`. A wavenumber `k` is flagged as a transmission eigenvalue when the
//! pencil has a generalized eigenvalue inside a small circle around zero,
//! which is decided by projecting a random vector twice with a
//! quadrature-discretized contour integral of the resolvent `(zB - A)^-1`.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baseline;
pub mod bem;
pub mod disk;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod plot;
pub mod probe;
pub mod quadrature;
pub mod scan;
pub mod special;

pub use baseline::{baseline_min_eig, BaselineConfig, BaselineMethod};
pub use bem::{assemble_layers, assemble_pencil, LayerMatrices, Pencil};
pub use disk::{determinant_m, find_eigenvalues, DiskEigenvalue, DiskSpec};
pub use error::{Error, Result};
pub use geometry::{build_disk_mesh, BoundaryMesh};
pub use linalg::{ComplexMatrix, LuFactorization};
pub use probe::{probe, resolvent_apply, spectral_project, ProbeConfig, ProbeOutcome, ProbeSolver};
pub use scan::{
    run_benchmark, run_scan, BenchConfig, Detection, DetectionRule, ScanConfig, ScanMode, ScanRecord, ScanResult,
};
