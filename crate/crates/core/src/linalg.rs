//! Dense complex matrices and LU factorization with partial pivoting.

use std::fmt::Write as _;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Pivots below `n * eps * max|a_ij|` are treated as exact zeros.
const PIVOT_RELATIVE_FLOOR: f64 = f64::EPSILON;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max).sqrt()
    }

    /// Induced infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(ZERO, |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Copies `block` into `self` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &Self) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for i in 0..block.rows {
            let dst = (row + i) * self.cols + col;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    /// Plain-text dump: header `entries rows cols`, then one `i j re im` line
    /// per entry in row-major order.
    pub fn to_dump(&self) -> String {
        let mut out = String::with_capacity(64 * self.data.len() + 32);
        let _ = writeln!(out, "{} {} {}", self.data.len(), self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                let _ = writeln!(out, "{i} {j} {:.17e} {:.17e}", z.re, z.im);
            }
        }
        out
    }

    /// Parses the format written by [`ComplexMatrix::to_dump`]. Entries may
    /// appear in any order but every position must be given exactly once.
    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header line"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::parse(hline, "header must be `entries rows cols`"));
        }
        let parse_usize = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|e| Error::parse(hline, format!("bad {what}: {e}")))
        };
        let entries = parse_usize(fields[0], "entry count")?;
        let rows = parse_usize(fields[1], "row count")?;
        let cols = parse_usize(fields[2], "column count")?;
        let expected = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::parse(hline, "matrix size overflows"))?;
        if entries != expected {
            return Err(Error::parse(
                hline,
                format!("entry count {entries} does not match {rows}x{cols}"),
            ));
        }
        let body: Vec<(usize, &str)> = lines.collect();
        if body.len() != entries {
            return Err(Error::parse(
                body.last().map_or(hline, |(l, _)| *l),
                format!("expected {entries} entries, found {}", body.len()),
            ));
        }
        let mut data = vec![ZERO; expected];
        let mut seen = vec![false; expected];
        for (line_no, line) in body {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(Error::parse(line_no, "entry must be `i j re im`"));
            }
            let i = f[0]
                .parse::<usize>()
                .map_err(|e| Error::parse(line_no, format!("bad row index: {e}")))?;
            let j = f[1]
                .parse::<usize>()
                .map_err(|e| Error::parse(line_no, format!("bad column index: {e}")))?;
            let re = f[2]
                .parse::<f64>()
                .map_err(|e| Error::parse(line_no, format!("bad real part: {e}")))?;
            let im = f[3]
                .parse::<f64>()
                .map_err(|e| Error::parse(line_no, format!("bad imaginary part: {e}")))?;
            if i >= rows || j >= cols {
                return Err(Error::parse(line_no, format!("index ({i}, {j}) out of range")));
            }
            let k = i * cols + j;
            if seen[k] {
                return Err(Error::parse(line_no, format!("duplicate entry ({i}, {j})")));
            }
            seen[k] = true;
            data[k] = Complex64::new(re, im);
        }
        Ok(Self { rows, cols, data })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// LU factorization `PA = LU` with partial (row) pivoting.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    lu: ComplexMatrix,
    pivots: Vec<usize>,
}

impl LuFactorization {
    /// Factors a square matrix. Returns `None` if a pivot vanishes to
    /// working precision.
    pub fn new(matrix: ComplexMatrix) -> Option<Self> {
        assert!(matrix.is_square(), "LU requires a square matrix");
        let n = matrix.rows;
        let mut lu = matrix;
        let floor = PIVOT_RELATIVE_FLOOR * n.max(1) as f64 * lu.max_abs();
        if !lu.is_finite() || lu.max_abs() == 0.0 && n > 0 {
            return None;
        }
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm_sqr();
            for i in k + 1..n {
                let v = lu[(i, k)].norm_sqr();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best.sqrt() <= floor {
                return None;
            }
            pivots.push(p);
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
            }
            let inv = lu[(k, k)].inv();
            let (head, tail) = lu.data.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n + k + 1..k * n + n];
            for row in tail.chunks_exact_mut(n) {
                let factor = row[k] * inv;
                row[k] = factor;
                if factor == ZERO {
                    continue;
                }
                for (dst, &src) in row[k + 1..].iter_mut().zip(pivot_row) {
                    *dst -= factor * src;
                }
            }
        }
        Some(Self { lu, pivots })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_in_place(&self, x: &mut [Complex64]) {
        let n = self.dim();
        assert_eq!(x.len(), n, "right-hand side dimension mismatch");
        for (k, &p) in self.pivots.iter().enumerate() {
            x.swap(k, p);
        }
        for i in 1..n {
            let row = &self.lu.row(i)[..i];
            let s = row.iter().zip(&x[..i]).fold(ZERO, |acc, (a, b)| acc + a * b);
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s = row[i + 1..]
                .iter()
                .zip(&x[i + 1..])
                .fold(ZERO, |acc, (a, b)| acc + a * b);
            x[i] = (x[i] - s) / row[i];
        }
    }
}

impl LuFactorization {
    /// `A^-1 R` for every column of `R` at once, sweeping whole rows so the
    /// inner loops run over contiguous memory.
    pub fn solve_matrix(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim();
        assert_eq!(rhs.rows, n, "right-hand side dimension mismatch");
        let m = rhs.cols;
        let mut x = rhs.clone();
        for (k, &p) in self.pivots.iter().enumerate() {
            if p != k {
                for j in 0..m {
                    x.data.swap(k * m + j, p * m + j);
                }
            }
        }
        for i in 1..n {
            let (done, rest) = x.data.split_at_mut(i * m);
            let row = &mut rest[..m];
            for (k, &l) in self.lu.row(i)[..i].iter().enumerate() {
                if l != ZERO {
                    for (dst, src) in row.iter_mut().zip(&done[k * m..(k + 1) * m]) {
                        *dst -= l * src;
                    }
                }
            }
        }
        for i in (0..n).rev() {
            let (head, tail) = x.data.split_at_mut((i + 1) * m);
            let row = &mut head[i * m..];
            let lu_row = self.lu.row(i);
            for (off, &u) in lu_row[i + 1..].iter().enumerate() {
                if u != ZERO {
                    let k = off;
                    for (dst, src) in row.iter_mut().zip(&tail[k * m..(k + 1) * m]) {
                        *dst -= u * src;
                    }
                }
            }
            let inv = lu_row[i].inv();
            row.iter_mut().for_each(|v| *v *= inv);
        }
        x
    }
}

/// LU factorization of `zI - H` for upper Hessenberg `H`, pivoting between
/// neighbouring rows. Costs `O(n^2)` instead of `O(n^3)`.
#[derive(Debug, Clone)]
pub struct ShiftedHessenbergLu {
    u: ComplexMatrix,
    multipliers: Vec<Complex64>,
    swapped: Vec<bool>,
}

impl ShiftedHessenbergLu {
    /// Entries of `h` below the first subdiagonal are ignored. Returns
    /// `None` if a pivot vanishes to working precision.
    pub fn new(h: &ComplexMatrix, z: Complex64) -> Option<Self> {
        assert!(h.is_square(), "Hessenberg factorization requires a square matrix");
        let n = h.rows;
        let mut u = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            let start = i.saturating_sub(1);
            for j in start..n {
                u.data[i * n + j] = -h.data[i * n + j];
            }
            u.data[i * n + i] += z;
        }
        if !u.is_finite() {
            return None;
        }
        let floor = PIVOT_RELATIVE_FLOOR * n.max(1) as f64 * u.max_abs();
        let mut multipliers = Vec::with_capacity(n.saturating_sub(1));
        let mut swapped = Vec::with_capacity(n.saturating_sub(1));
        for k in 0..n.saturating_sub(1) {
            let swap = u[(k + 1, k)].norm_sqr() > u[(k, k)].norm_sqr();
            if swap {
                for j in k..n {
                    u.data.swap(k * n + j, (k + 1) * n + j);
                }
            }
            let pivot = u[(k, k)];
            if pivot.norm() <= floor {
                return None;
            }
            let l = u[(k + 1, k)] / pivot;
            u.data[(k + 1) * n + k] = ZERO;
            if l != ZERO {
                let (head, tail) = u.data.split_at_mut((k + 1) * n);
                for (dst, src) in tail[k + 1..n].iter_mut().zip(&head[k * n + k + 1..(k + 1) * n]) {
                    *dst -= l * src;
                }
            }
            multipliers.push(l);
            swapped.push(swap);
        }
        if n > 0 && u[(n - 1, n - 1)].norm() <= floor {
            return None;
        }
        Some(Self {
            u,
            multipliers,
            swapped,
        })
    }

    pub fn solve_in_place(&self, x: &mut [Complex64]) {
        let n = self.u.rows;
        assert_eq!(x.len(), n, "right-hand side dimension mismatch");
        for (k, (&l, &swap)) in self.multipliers.iter().zip(&self.swapped).enumerate() {
            if swap {
                x.swap(k, k + 1);
            }
            let t = x[k];
            x[k + 1] -= l * t;
        }
        for i in (0..n).rev() {
            let row = self.u.row(i);
            let s = row[i + 1..]
                .iter()
                .zip(&x[i + 1..])
                .fold(ZERO, |acc, (a, b)| acc + a * b);
            x[i] = (x[i] - s) / row[i];
        }
    }
}

/// Householder reduction `M = Q H Q^*` with `H` upper Hessenberg. `Q` is
/// kept as its reflectors and only ever applied to vectors.
#[derive(Debug, Clone)]
pub struct HessenbergReduction {
    h: ComplexMatrix,
    /// `(v, beta)` for column `k`, acting on rows `k+1..` as `I - beta v v^*`
    reflectors: Vec<(Vec<Complex64>, f64)>,
}

impl HessenbergReduction {
    pub fn new(mut m: ComplexMatrix) -> Self {
        assert!(m.is_square(), "Hessenberg reduction requires a square matrix");
        let n = m.rows;
        let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
        let mut s = vec![ZERO; n];
        for k in 0..n.saturating_sub(2) {
            let mut v: Vec<Complex64> = (k + 1..n).map(|i| m.data[i * n + k]).collect();
            let alpha = vector_norm(&v);
            if alpha == 0.0 {
                reflectors.push((v, 0.0));
                continue;
            }
            let phase = if v[0] == ZERO {
                Complex64::new(1.0, 0.0)
            } else {
                v[0] / v[0].norm()
            };
            v[0] += phase * alpha;
            let beta = 2.0 / v.iter().map(|z| z.norm_sqr()).sum::<f64>();

            // left: rows k+1.., columns k..
            let s = &mut s[k..];
            s.iter_mut().for_each(|x| *x = ZERO);
            for (vi, i) in v.iter().zip(k + 1..n) {
                let c = vi.conj();
                for (acc, a) in s.iter_mut().zip(&m.data[i * n + k..(i + 1) * n]) {
                    *acc += c * a;
                }
            }
            for (vi, i) in v.iter().zip(k + 1..n) {
                let c = vi * beta;
                for (a, acc) in m.data[i * n + k..(i + 1) * n].iter_mut().zip(s.iter()) {
                    *a -= c * acc;
                }
            }
            // right: every row, columns k+1..
            for i in 0..n {
                let row = &mut m.data[i * n + k + 1..(i + 1) * n];
                let t = row.iter().zip(&v).fold(ZERO, |acc, (a, b)| acc + a * b) * beta;
                for (a, vj) in row.iter_mut().zip(&v) {
                    *a -= t * vj.conj();
                }
            }
            for i in k + 2..n {
                m.data[i * n + k] = ZERO;
            }
            reflectors.push((v, beta));
        }
        Self { h: m, reflectors }
    }

    pub fn h(&self) -> &ComplexMatrix {
        &self.h
    }

    /// `x <- Q^* x`.
    pub fn apply_adjoint(&self, x: &mut [Complex64]) {
        for (k, (v, beta)) in self.reflectors.iter().enumerate() {
            reflect(&mut x[k + 1..], v, *beta);
        }
    }

    /// `x <- Q x`.
    pub fn apply(&self, x: &mut [Complex64]) {
        for (k, (v, beta)) in self.reflectors.iter().enumerate().rev() {
            reflect(&mut x[k + 1..], v, *beta);
        }
    }
}

fn reflect(x: &mut [Complex64], v: &[Complex64], beta: f64) {
    let t = v.iter().zip(x.iter()).fold(ZERO, |acc, (a, b)| acc + a.conj() * b) * beta;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= t * vi;
    }
}

/// `(zI - H) x` for upper Hessenberg `H`.
pub fn shifted_hessenberg_matvec(h: &ComplexMatrix, z: Complex64, x: &[Complex64]) -> Vec<Complex64> {
    let n = h.rows;
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(1);
            let s = h.row(i)[start..]
                .iter()
                .zip(&x[start..])
                .fold(ZERO, |acc, (a, b)| acc + a * b);
            z * x[i] - s
        })
        .collect()
}
