//! Dense complex linear algebra for the small spaces used here (2, 4 and 8
//! dimensions). Values are immutable; every operation returns a fresh value.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Global comparison tolerance.
pub const EPS: f64 = 1e-9;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// A column vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    data: Vec<C64>,
}

impl Vector {
    pub fn new(data: Vec<C64>) -> Self {
        assert!(!data.is_empty(), "vector must have positive dimension");
        Vector { data }
    }

    pub fn from_real(data: &[f64]) -> Self {
        Vector::new(data.iter().map(|&x| real(x)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Vector::new(vec![ZERO; dim])
    }

    /// Standard basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut data = vec![ZERO; dim];
        data[k] = ONE;
        Vector::new(data)
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Result<Vector> {
        let n = self.norm();
        if n <= EPS {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(real(1.0 / n)))
    }

    pub fn scale(&self, alpha: C64) -> Vector {
        Vector::new(self.data.iter().map(|&z| alpha * z).collect())
    }

    pub fn conj(&self) -> Vector {
        Vector::new(self.data.iter().map(|z| z.conj()).collect())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Vector) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Vector, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }

    /// Index of the entry with the largest modulus (first one on ties).
    pub fn argmax_modulus(&self) -> usize {
        let mut best = 0;
        for (k, z) in self.data.iter().enumerate() {
            if z.norm() > self.data[best].norm() + EPS {
                best = k;
            }
        }
        best
    }

    /// View as an `n x 1` matrix.
    pub fn to_column(&self) -> Matrix {
        Matrix::from_vec(self.dim(), 1, self.data.clone())
    }

    /// `|self><other|`
    pub fn outer(&self, other: &Vector) -> Matrix {
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b.conj());
            }
        }
        Matrix::from_vec(self.dim(), other.dim(), data)
    }

    pub fn tensor(&self, other: &Vector) -> Vector {
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Vector::new(data)
    }
}

impl Index<usize> for Vector {
    type Output = C64;

    fn index(&self, k: usize) -> &C64 {
        &self.data[k]
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, z) in self.data.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_c64(*z))?;
        }
        write!(f, ")")
    }
}

/// Compact rendering that drops zero parts, e.g. `-0.5i` or `0.7071`.
pub fn fmt_c64(z: C64) -> String {
    let clean = |x: f64| if x.abs() < EPS { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (true, true) => "0".to_string(),
        (false, true) => format!("{re:.4}"),
        (true, false) => format!("{im:.4}i"),
        (false, false) if im < 0.0 => format!("{re:.4}-{:.4}i", -im),
        (false, false) => format!("{re:.4}+{im:.4}i"),
    }
}

/// `<a|b> = sum conj(a_k) b_k`
pub fn inner(a: &Vector, b: &Vector) -> Result<C64> {
    check_dims(a.dim(), b.dim())?;
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

/// `alpha * a + beta * b`
pub fn scale_add(alpha: C64, a: &Vector, beta: C64, b: &Vector) -> Result<Vector> {
    check_dims(a.dim(), b.dim())?;
    Ok(Vector::new(
        a.data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| alpha * x + beta * y)
            .collect(),
    ))
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix must have positive dimensions");
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix::from_vec(rows.len(), cols, rows.concat())
    }

    /// Stack vectors as the rows of a matrix.
    pub fn from_row_vectors(rows: &[Vector]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vector::dim);
        for r in rows {
            check_dims(cols, r.dim())?;
        }
        Ok(Matrix::from_vec(
            rows.len(),
            cols,
            rows.iter().flat_map(|r| r.data.iter().copied()).collect(),
        ))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_vec(rows, cols, vec![ZERO; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Matrix::diag(&vec![ONE; n])
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = vec![ZERO; n * n];
        for (k, &z) in entries.iter().enumerate() {
            m[k * n + k] = z;
        }
        Matrix::from_vec(n, n, m)
    }

    /// Antidiagonal matrix, entries listed from the top-right corner downwards.
    pub fn antidiag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = vec![ZERO; n * n];
        for (k, &z) in entries.iter().enumerate() {
            m[k * n + (n - 1 - k)] = z;
        }
        Matrix::from_vec(n, n, m)
    }

    pub fn antidiag_real(entries: &[f64]) -> Self {
        Matrix::antidiag(&entries.iter().map(|&x| real(x)).collect::<Vec<_>>())
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

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> Vector {
        Vector::new(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn column(&self, c: usize) -> Vector {
        Vector::new((0..self.rows).map(|r| self.get(r, c)).collect())
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).conj());
            }
        }
        Matrix::from_vec(self.cols, self.rows, data)
    }

    pub fn scale(&self, alpha: C64) -> Matrix {
        Matrix::from_vec(
            self.rows,
            self.cols,
            self.data.iter().map(|&z| alpha * z).collect(),
        )
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|k| self.get(k, k)).sum()
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        check_dims(self.cols, v.dim())?;
        Ok(Vector::new(
            (0..self.rows)
                .map(|r| {
                    self.data[r * self.cols..(r + 1) * self.cols]
                        .iter()
                        .zip(v.entries())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        ))
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(C64, C64) -> C64) -> Result<Matrix> {
        check_dims(self.rows, other.rows)?;
        check_dims(self.cols, other.cols)?;
        Ok(Matrix::from_vec(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        Ok(self.checked_sub(other)?.max_abs())
    }

    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.adjoint(), tol)
    }

    /// `P^2 = P` and `P = P^dagger` within `tol`.
    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol)
            && matmul(self, self).is_ok_and(|p2| p2.approx_eq(self, tol))
    }

    /// `M^2 = 1` within `tol`.
    pub fn is_involutory(&self, tol: f64) -> bool {
        self.is_square()
            && matmul(self, self)
                .is_ok_and(|m2| m2.approx_eq(&Matrix::identity(self.rows), tol))
    }

    /// True when the only nonzero entries sit on the antidiagonal.
    pub fn is_antidiagonal(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| c + r == self.rows - 1 || self.get(r, c).norm() <= tol)
            })
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", self.row(r))?;
        }
        Ok(())
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        matmul(self, rhs).expect("matrix dimensions must agree")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        self.scale(real(-1.0))
    }
}

/// Kronecker product; the left factor is the most significant index.
pub fn tensor(a: &Matrix, b: &Matrix) -> Matrix {
    let (rows, cols) = (a.rows * b.rows, a.cols * b.cols);
    let mut data = vec![ZERO; rows * cols];
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let z = a.get(ar, ac);
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    data[(ar * b.rows + br) * cols + ac * b.cols + bc] = z * b.get(br, bc);
                }
            }
        }
    }
    Matrix::from_vec(rows, cols, data)
}

/// Kronecker product of a non-empty list, folded left to right.
pub fn tensor_all(factors: &[Matrix]) -> Matrix {
    let (first, rest) = factors.split_first().expect("at least one factor");
    rest.iter().fold(first.clone(), |acc, m| tensor(&acc, m))
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    check_dims(a.cols, b.rows)?;
    let mut data = vec![ZERO; a.rows * b.cols];
    for r in 0..a.rows {
        for k in 0..a.cols {
            let z = a.get(r, k);
            if z == ZERO {
                continue;
            }
            for col in 0..b.cols {
                data[r * b.cols + col] += z * b.get(k, col);
            }
        }
    }
    Ok(Matrix::from_vec(a.rows, b.cols, data))
}

/// `ab - ba`
pub fn commutator(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::NotSquare);
    }
    check_dims(a.rows, b.rows)?;
    matmul(a, b)?.checked_sub(&matmul(b, a)?)
}

pub fn commutes(a: &Matrix, b: &Matrix, tol: f64) -> Result<bool> {
    Ok(commutator(a, b)?.max_abs() <= tol)
}

/// Numerical rank by Gaussian elimination with partial pivoting.
///
/// A pivot counts when its modulus exceeds `tol` times the largest initial
/// entry modulus.
pub fn rank(m: &Matrix, tol: f64) -> usize {
    let scale = m.max_abs();
    if scale == 0.0 {
        return 0;
    }
    let threshold = tol * scale;
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.data.clone();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let (pivot_row, pivot_mod) = (rank..rows)
            .map(|r| (r, a[r * cols + col].norm()))
            .fold((rank, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_mod <= threshold {
            continue;
        }
        if pivot_row != rank {
            for k in 0..cols {
                a.swap(rank * cols + k, pivot_row * cols + k);
            }
        }
        let pivot = a[rank * cols + col];
        for r in rank + 1..rows {
            let factor = a[r * cols + col] / pivot;
            if factor == ZERO {
                continue;
            }
            for k in col..cols {
                let sub = factor * a[rank * cols + k];
                a[r * cols + k] -= sub;
            }
        }
        rank += 1;
    }
    rank
}

pub fn nullity(m: &Matrix, tol: f64) -> usize {
    m.cols - rank(m, tol)
}

/// The three Pauli matrices.
pub fn sigma_x() -> Matrix {
    Matrix::antidiag(&[ONE, ONE])
}

pub fn sigma_y() -> Matrix {
    Matrix::antidiag(&[-I, I])
}

pub fn sigma_z() -> Matrix {
    Matrix::diag(&[ONE, -ONE])
}
