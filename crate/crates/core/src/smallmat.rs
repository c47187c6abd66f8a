//! Small dense linear algebra: solves, determinants, rank, cofactor normals
//! and a cancellation-free quadratic solver.
//!
//! Sizes 2 and 3 take closed-form paths; everything else goes through
//! partial-pivot LU. Matrices here are tiny (d x d with d rarely above 8),
//! so storage is a flat row-major `Vec<f64>`.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("matrix must have at least one row and column"));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape("data length does not match rows * cols"));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows"));
        }
        Matrix::new(rows.len(), cols, rows.concat())
    }

    /// Builds an `n x m` matrix from `m` columns of length `n`.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let rows = columns.first().map(Vec::len).unwrap_or(0);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Shape("ragged columns"));
        }
        let mut m = Matrix::new(rows, columns.len(), vec![0.0; rows * columns.len()])?;
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        Ok(m)
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

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape("inner dimensions differ"));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// A square matrix prepared for repeated solves.
#[derive(Debug, Clone)]
pub struct Factorization {
    n: usize,
    kind: FactorKind,
    det: f64,
}

#[derive(Debug, Clone)]
enum FactorKind {
    /// Closed-form inverse for n <= 3.
    Inverse(Matrix),
    Lu { lu: Matrix, perm: Vec<usize> },
}

impl Factorization {
    /// Factors `m`, failing with [`Error::Singular`] when a pivot falls below
    /// `singular_rel` times the largest entry.
    pub fn new(m: &Matrix, singular_rel: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape("matrix must be square"));
        }
        let n = m.rows;
        let scale = m.max_abs();
        if scale == 0.0 {
            return Err(Error::Singular);
        }
        match n {
            1 | 2 | 3 => {
                let det = determinant(m);
                // |det| / scale^(n-1) plays the role of the smallest pivot.
                if det.abs() <= singular_rel * scale.powi(n as i32) || !det.is_finite() {
                    return Err(Error::Singular);
                }
                Ok(Factorization {
                    n,
                    kind: FactorKind::Inverse(adjugate(m).scaled(1.0 / det)),
                    det,
                })
            }
            _ => {
                let (lu, perm, sign) = lu_decompose(m);
                let mut det = sign;
                for i in 0..n {
                    let pivot = lu[(i, i)];
                    if pivot.abs() <= singular_rel * scale {
                        return Err(Error::Singular);
                    }
                    det *= pivot;
                }
                Ok(Factorization {
                    n,
                    kind: FactorKind::Lu { lu, perm },
                    det,
                })
            }
        }
    }

    pub fn determinant(&self) -> f64 {
        self.det
    }

    /// Solves `M X = rhs` for every column of `rhs` at once.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        if rhs.rows != self.n {
            return Err(Error::Shape("rhs row count must equal matrix order"));
        }
        match &self.kind {
            FactorKind::Inverse(inv) => inv.mul(rhs),
            FactorKind::Lu { lu, perm } => {
                let n = self.n;
                let mut x = Matrix::zeros(n, rhs.cols);
                for col in 0..rhs.cols {
                    let mut y: Vec<f64> = perm.iter().map(|&p| rhs[(p, col)]).collect();
                    for i in 0..n {
                        let mut s = y[i];
                        for k in 0..i {
                            s -= lu[(i, k)] * y[k];
                        }
                        y[i] = s;
                    }
                    for i in (0..n).rev() {
                        let mut s = y[i];
                        for k in i + 1..n {
                            s -= lu[(i, k)] * y[k];
                        }
                        y[i] = s / lu[(i, i)];
                    }
                    for (i, v) in y.into_iter().enumerate() {
                        x[(i, col)] = v;
                    }
                }
                Ok(x)
            }
        }
    }

    /// Solves for a single right-hand-side vector.
    pub fn solve_vec(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let m = Matrix::from_columns(&[rhs.to_vec()])?;
        Ok(self.solve(&m)?.column(0))
    }
}

impl Matrix {
    fn scaled(mut self, f: f64) -> Matrix {
        self.data.iter_mut().for_each(|v| *v *= f);
        self
    }
}

/// Transposed cofactor matrix for n <= 3.
fn adjugate(m: &Matrix) -> Matrix {
    match m.rows {
        1 => Matrix::identity(1),
        2 => Matrix {
            rows: 2,
            cols: 2,
            data: vec![m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]],
        },
        3 => {
            let a = |i, j| m[(i, j)];
            let mut adj = Matrix::zeros(3, 3);
            for i in 0..3 {
                for j in 0..3 {
                    let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
                    let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
                    // Cyclic index choice bakes in the cofactor sign.
                    adj[(j, i)] = a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0);
                }
            }
            adj
        }
        _ => unreachable!("closed-form adjugate is only used for n <= 3"),
    }
}

/// Partial-pivot LU. Returns the packed factors, row permutation and the
/// permutation sign.
fn lu_decompose(m: &Matrix) -> (Matrix, Vec<usize>, f64) {
    let n = m.rows;
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let mut p = k;
        for i in k + 1..n {
            if lu[(i, k)].abs() > lu[(p, k)].abs() {
                p = i;
            }
        }
        if p != k {
            for j in 0..n {
                lu.data.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        if pivot == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            for j in k + 1..n {
                let v = lu[(k, j)];
                lu[(i, j)] -= f * v;
            }
        }
    }
    (lu, perm, sign)
}

/// Solves `M X = rhs` with a single factorization of `M`.
pub fn solve_linear(m: &Matrix, rhs: &Matrix, singular_rel: f64) -> Result<Matrix> {
    Factorization::new(m, singular_rel)?.solve(rhs)
}

/// Determinant by closed form (n <= 3) or LU.
pub fn determinant(m: &Matrix) -> f64 {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let a = |i, j| m[(i, j)];
    match m.rows {
        1 => a(0, 0),
        2 => a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0),
        3 => {
            a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
        }
        n => {
            let (lu, _, sign) = lu_decompose(m);
            (0..n).fold(sign, |d, i| d * lu[(i, i)])
        }
    }
}

/// Numerical rank by complete-pivot elimination; pivots at or below
/// `singular_rel` times the largest entry count as zero.
pub fn rank(m: &Matrix, singular_rel: f64) -> usize {
    let scale = m.max_abs();
    if scale == 0.0 {
        return 0;
    }
    let threshold = singular_rel * scale;
    let mut a = m.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    let mut used_rows = vec![false; rows];
    let mut used_cols = vec![false; cols];
    loop {
        let mut best = (0.0, 0, 0);
        for i in (0..rows).filter(|&i| !used_rows[i]) {
            for j in (0..cols).filter(|&j| !used_cols[j]) {
                if a[(i, j)].abs() > best.0 {
                    best = (a[(i, j)].abs(), i, j);
                }
            }
        }
        let (value, pi, pj) = best;
        if value <= threshold {
            return rank;
        }
        rank += 1;
        used_rows[pi] = true;
        used_cols[pj] = true;
        let pivot = a[(pi, pj)];
        for i in (0..rows).filter(|&i| !used_rows[i]) {
            let f = a[(i, pj)] / pivot;
            for j in 0..cols {
                let v = a[(pi, j)];
                a[(i, j)] -= f * v;
            }
        }
    }
}

/// Determinant of `rows` (each of length n+1, n of them) with column
/// `skip` removed.
fn minor_skipping_column(rows: &[Vec<f64>], skip: usize) -> f64 {
    let n = rows.len();
    if n == 0 {
        return 1.0;
    }
    let data = rows
        .iter()
        .flat_map(|r| r.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, v)| *v))
        .collect();
    determinant(&Matrix {
        rows: n,
        cols: n,
        data,
    })
}

fn check_normal_input(rows: &[Vec<f64>]) {
    let n = rows.len();
    assert!(
        rows.iter().all(|r| r.len() == n + 1),
        "cofactor normal needs n vectors of n+1 components"
    );
}

/// Normal to `d` vectors in R^{d+1}: the cofactors of the missing last row
/// of the `(d+1) x (d+1)` matrix whose first `d` rows are the inputs.
///
/// The result is orthogonal to every input row and vanishes exactly when the
/// rows are linearly dependent. For `d = 2` this is the cross product.
pub fn cofactor_normal(rows: &[Vec<f64>]) -> Vec<f64> {
    check_normal_input(rows);
    let d = rows.len();
    (0..=d)
        .map(|j| {
            // Cofactor A_{d+1, j+1} carries sign (-1)^{(d+1)+(j+1)}.
            let sign = if (d + j) % 2 == 0 { 1.0 } else { -1.0 };
            sign * minor_skipping_column(rows, j)
        })
        .collect()
}

/// Normal to `d - 1` vectors in R^d, with components `(-1)^{j} M_j`
/// (0-based `j`, `M_j` the minor without column `j`).
///
/// For `d = 2` and a single row `u` this gives `(u_2, -u_1)`; for `d = 3` it
/// is the cross product `u_1 x u_2`.
pub fn cofactor_normal_subspace(rows: &[Vec<f64>]) -> Vec<f64> {
    check_normal_input(rows);
    let d = rows.len() + 1;
    (0..d)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * minor_skipping_column(rows, j)
        })
        .collect()
}

/// Root structure of `a x^2 + b x + c = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadraticKind {
    TwoReal,
    DoubleReal,
    ComplexPair,
    Linear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticRoots {
    pub kind: QuadraticKind,
    /// Real roots, largest first.
    pub roots: Vec<f64>,
    /// `b^2 - 4ac`.
    pub discriminant: f64,
}

/// Threshold below which the leading coefficient counts as zero.
pub const LINEAR_LEADING_REL: f64 = 1e-14;

/// Solves `a x^2 + b x + c = 0` without catastrophic cancellation.
///
/// With `q = -(b + sign(b) sqrt(b^2 - 4ac)) / 2` the roots are `q / a` and
/// `c / q`; `sign(0)` is taken as +1. A leading coefficient with
/// `|a| <= 1e-14 max(|b|, |c|, 1)` is treated as zero and yields the single
/// root `-c / b`.
pub fn stable_quadratic(a: f64, b: f64, c: f64) -> Result<QuadraticRoots> {
    let discriminant = b * b - 4.0 * a * c;
    if a.abs() <= LINEAR_LEADING_REL * b.abs().max(c.abs()).max(1.0) {
        if b == 0.0 {
            return Err(Error::DegenerateQuadratic);
        }
        return Ok(QuadraticRoots {
            kind: QuadraticKind::Linear,
            roots: vec![-c / b],
            discriminant,
        });
    }
    if discriminant < 0.0 {
        return Ok(QuadraticRoots {
            kind: QuadraticKind::ComplexPair,
            roots: Vec::new(),
            discriminant,
        });
    }
    if discriminant == 0.0 {
        return Ok(QuadraticRoots {
            kind: QuadraticKind::DoubleReal,
            roots: vec![-b / (2.0 * a)],
            discriminant,
        });
    }
    let sign_b = if b < 0.0 { -1.0 } else { 1.0 };
    let q = -0.5 * (b + sign_b * discriminant.sqrt());
    let (r1, r2) = (q / a, c / q);
    let (hi, lo) = if r1 >= r2 { (r1, r2) } else { (r2, r1) };
    let kind = if hi == lo {
        QuadraticKind::DoubleReal
    } else {
        QuadraticKind::TwoReal
    };
    let roots = if kind == QuadraticKind::DoubleReal {
        vec![hi]
    } else {
        vec![hi, lo]
    };
    Ok(QuadraticRoots {
        kind,
        roots,
        discriminant,
    })
}
