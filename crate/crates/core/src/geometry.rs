//! Polygonal boundary meshes.
//!
//! A closed curve is approximated by `N` straight segments; segment `i` runs
//! from node `i` to node `i + 1 (mod N)`. Piecewise-constant basis function
//! `psi_i` is the indicator of segment `i`. Piecewise-linear hat function
//! `phi_j` is attached to node `j` and supported on segments `j - 1` and `j`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Smallest segment count accepted for disk meshes.
pub const MIN_DISK_SEGMENTS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMesh {
    nodes: Vec<Point>,
    lengths: Vec<f64>,
    normals: Vec<Point>,
    tangents: Vec<Point>,
}

impl BoundaryMesh {
    /// Builds a mesh from a closed loop of nodes (the last node connects back
    /// to the first). Normals point away from the enclosed region for either
    /// orientation of the loop.
    pub fn from_points(nodes: Vec<Point>) -> Result<Self> {
        let n = nodes.len();
        if n < 3 {
            return Err(Error::config(format!(
                "a closed boundary needs at least 3 nodes, got {n}"
            )));
        }
        if nodes.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::config("mesh node with non-finite coordinate"));
        }
        let mut lengths = Vec::with_capacity(n);
        let mut tangents = Vec::with_capacity(n);
        let mut twice_area = 0.0;
        for i in 0..n {
            let a = nodes[i];
            let b = nodes[(i + 1) % n];
            let d = [b[0] - a[0], b[1] - a[1]];
            let len = d[0].hypot(d[1]);
            if !(len > 0.0) || !len.is_finite() {
                return Err(Error::config(format!("segment {i} has zero length")));
            }
            lengths.push(len);
            tangents.push([d[0] / len, d[1] / len]);
            twice_area += a[0] * b[1] - b[0] * a[1];
        }
        if twice_area == 0.0 {
            return Err(Error::config("boundary loop encloses no area"));
        }
        let orientation = twice_area.signum();
        let normals = tangents
            .iter()
            .map(|t| [orientation * t[1], -orientation * t[0]])
            .collect();
        Ok(Self {
            nodes,
            lengths,
            normals,
            tangents,
        })
    }

    pub fn segment_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Point {
        self.nodes[i % self.nodes.len()]
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn length(&self, i: usize) -> f64 {
        self.lengths[i]
    }

    pub fn normal(&self, i: usize) -> Point {
        self.normals[i]
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn tangent(&self, i: usize) -> Point {
        self.tangents[i]
    }

    pub fn perimeter(&self) -> f64 {
        self.lengths.iter().sum()
    }

    pub fn midpoint(&self, i: usize) -> Point {
        self.point_unchecked(i, 0.0)
    }

    /// Maps the reference coordinate `xi` in `[-1, 1]` onto segment `i`.
    pub fn segment_point(&self, i: usize, xi: f64) -> Result<Point> {
        if i >= self.segment_count() {
            return Err(Error::domain(format!("segment index {i} out of range")));
        }
        if !(-1.0..=1.0).contains(&xi) {
            return Err(Error::domain(format!("reference coordinate {xi} outside [-1, 1]")));
        }
        Ok(self.point_unchecked(i, xi))
    }

    #[inline]
    pub(crate) fn point_unchecked(&self, i: usize, xi: f64) -> Point {
        let a = self.nodes[i];
        let b = self.node(i + 1);
        let s = 0.5 * (1.0 + xi);
        [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
    }

    /// One node per line, `x y`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.nodes {
            let _ = writeln!(out, "{:.17e} {:.17e}", p[0], p[1]);
        }
        out
    }

    /// Parses the format written by [`BoundaryMesh::to_text`]. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut coord = |name: &str| -> Result<f64> {
                let field = fields
                    .next()
                    .ok_or_else(|| Error::parse(idx + 1, format!("missing {name} coordinate")))?;
                field
                    .parse::<f64>()
                    .map_err(|e| Error::parse(idx + 1, format!("bad {name} coordinate: {e}")))
            };
            let x = coord("x")?;
            let y = coord("y")?;
            if fields.next().is_some() {
                return Err(Error::parse(idx + 1, "expected exactly two fields"));
            }
            nodes.push([x, y]);
        }
        Self::from_points(nodes)
    }
}

/// Inscribed regular `segment_count`-gon of a circle of `radius` centred at
/// the origin, counter-clockwise starting at `(radius, 0)`.
pub fn build_disk_mesh(radius: f64, segment_count: usize) -> Result<BoundaryMesh> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::config(format!("disk radius must be positive, got {radius}")));
    }
    if segment_count < MIN_DISK_SEGMENTS {
        return Err(Error::config(format!(
            "disk mesh needs at least {MIN_DISK_SEGMENTS} segments, got {segment_count}"
        )));
    }
    let nodes = (0..segment_count)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / segment_count as f64;
            [radius * theta.cos(), radius * theta.sin()]
        })
        .collect();
    BoundaryMesh::from_points(nodes)
}
