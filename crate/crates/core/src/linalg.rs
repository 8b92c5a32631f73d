//! Small dense row-major matrices and the operator norms used by the
//! stability analysis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major real matrix.
///
/// Serializes as a list of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::structural(format!(
                "matrix data has {} entries, expected {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(Error::structural(format!(
                    "row {i} has {} entries, expected {ncols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scaled(&self, c: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// Entrywise sum; shapes must agree.
    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::structural(format!(
                "cannot add {:?} and {:?} matrices",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `out += self * v`
    #[inline]
    pub fn mul_vec_add(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (o, row) in out.iter_mut().zip(self.data.chunks_exact(self.cols.max(1))) {
            *o += row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        self.mul_vec_add(v, &mut out);
        out
    }

    /// `selfᵀ * v`
    pub fn transpose_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(&rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        (0..m.rows).map(|i| m.row(i).to_vec()).collect()
    }
}

/// Maximum absolute row sum.
pub fn op_norm_inf(m: &Matrix) -> f64 {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Maximum absolute column sum.
pub fn op_norm_one(m: &Matrix) -> f64 {
    op_norm_inf(&m.transpose())
}

pub const POWER_ITERATION_RTOL: f64 = 1e-10;
pub const POWER_ITERATION_MAX_ITERS: usize = 10_000;

/// Columns carried by the block power iteration.
const POWER_ITERATION_BLOCK: usize = 8;

/// Largest singular value by power iteration on `MᵀM`.
///
/// A block of start vectors (normalized all-ones first, then fixed
/// perturbed vectors) is multiplied by `MᵀM` and re-orthonormalized each
/// step, with the estimate read off a Rayleigh-Ritz projection. A single
/// vector stalls when the top singular values cluster, which happens in
/// networks built from nearly zero-sum blocks; the block contracts at the
/// ratio to the first singular value outside it instead.
pub fn op_norm_two(m: &Matrix) -> Result<f64> {
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    if m.rows() == 0 || m.cols() == 0 || m.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let n = m.cols();
    let p = n.min(POWER_ITERATION_BLOCK);
    let starts: Vec<Vec<f64>> = (0..p)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if j == 0 {
                        1.0
                    } else {
                        1.0 + 0.5 * ((i as f64 + 1.0) * j as f64 * 1.618_033_988_749_895).sin()
                    }
                })
                .collect()
        })
        .collect();
    let mut basis = orthonormalize(starts, n);
    if basis.is_empty() {
        return Ok(0.0);
    }
    let mut lambda = 0.0;
    for _ in 0..POWER_ITERATION_MAX_ITERS {
        let images: Vec<Vec<f64>> = basis
            .iter()
            .map(|v| m.transpose_mul_vec(&m.mul_vec(v)))
            .collect();
        let q = basis.len();
        let mut h = Matrix::zeros(q, q);
        for a in 0..q {
            for b in a..q {
                let v = dot(&basis[a], &images[b]);
                h.data[a * q + b] = v;
                h.data[b * q + a] = v;
            }
        }
        let (values, vectors) = jacobi_eigen(h);
        let top = values[0];
        let settled = (top - lambda).abs() <= POWER_ITERATION_RTOL * top.abs();
        lambda = top;
        if settled {
            return Ok(lambda.max(0.0).sqrt());
        }
        // rotate the images onto the Ritz vectors so the columns stay apart
        let rotated: Vec<Vec<f64>> = (0..q)
            .map(|c| {
                let mut w = vec![0.0; n];
                for (r, img) in images.iter().enumerate() {
                    let coef = vectors[r * q + c];
                    w.iter_mut().zip(img).for_each(|(wi, x)| *wi += coef * x);
                }
                w
            })
            .collect();
        basis = orthonormalize(rotated, n);
        if basis.is_empty() {
            return Ok(0.0);
        }
    }
    Err(Error::NonConvergence {
        method: "power iteration",
        iterations: POWER_ITERATION_MAX_ITERS,
        estimate: lambda.max(0.0).sqrt(),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Modified Gram-Schmidt, applied twice. Columns that collapse are dropped.
fn orthonormalize(cols: Vec<Vec<f64>>, n: usize) -> Vec<Vec<f64>> {
    let scale = cols
        .iter()
        .map(|c| dot(c, c).sqrt())
        .fold(0.0, f64::max);
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    for mut c in cols {
        for _ in 0..2 {
            for q in &out {
                let d = dot(q, &c);
                c.iter_mut().zip(q).for_each(|(ci, qi)| *ci -= d * qi);
            }
        }
        let norm = dot(&c, &c).sqrt();
        if norm > 1e-12 * scale && norm.is_finite() && out.len() < n {
            c.iter_mut().for_each(|x| *x /= norm);
            out.push(c);
        }
    }
    out
}

/// Eigen-decomposition of a small symmetric matrix by cyclic Jacobi
/// rotations. Eigenvalues come back in decreasing order; column `c` of the
/// returned row-major matrix is the matching eigenvector.
fn jacobi_eigen(mut a: Matrix) -> (Vec<f64>, Vec<f64>) {
    let q = a.rows;
    let mut v = Matrix::identity(q).data;
    for _sweep in 0..100 {
        let off: f64 = (0..q)
            .flat_map(|i| (0..q).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.data[i * q + j].powi(2))
            .sum();
        let diag: f64 = (0..q).map(|i| a.data[i * q + i].powi(2)).sum();
        if off <= 1e-30 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for i in 0..q {
            for j in i + 1..q {
                let aij = a.data[i * q + j];
                if aij == 0.0 {
                    continue;
                }
                let theta = (a.data[j * q + j] - a.data[i * q + i]) / (2.0 * aij);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..q {
                    let (akj, aki) = (a.data[k * q + j], a.data[k * q + i]);
                    a.data[k * q + i] = c * aki - s * akj;
                    a.data[k * q + j] = s * aki + c * akj;
                }
                for k in 0..q {
                    let (ajk, aik) = (a.data[j * q + k], a.data[i * q + k]);
                    a.data[i * q + k] = c * aik - s * ajk;
                    a.data[j * q + k] = s * aik + c * ajk;
                }
                for k in 0..q {
                    let (vkj, vki) = (v[k * q + j], v[k * q + i]);
                    v[k * q + i] = c * vki - s * vkj;
                    v[k * q + j] = s * vki + c * vkj;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&x, &y| a.data[y * q + y].total_cmp(&a.data[x * q + x]));
    let values = order.iter().map(|&c| a.data[c * q + c]).collect();
    let mut vectors = vec![0.0; q * q];
    for (new_c, &old_c) in order.iter().enumerate() {
        for r in 0..q {
            vectors[r * q + new_c] = v[r * q + old_c];
        }
    }
    (values, vectors)
}
