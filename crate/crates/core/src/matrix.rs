//! Dense complex matrices and the numerical predicates the rest of the crate
//! is built on: commutators, the matrix exponential, unitarity/Hermiticity
//! tests and a Hermitian eigensolver.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Combined absolute/relative tolerance used by the approximate predicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl Tolerance {
    pub fn new(abs_eps: f64, rel_eps: f64) -> Result<Self> {
        let ok = abs_eps >= 0.0 && rel_eps >= 0.0 && (abs_eps > 0.0 || rel_eps > 0.0);
        if !ok {
            return Err(Error::Invalid(format!(
                "tolerance needs nonnegative eps with at least one positive, got abs={abs_eps}, rel={rel_eps}"
            )));
        }
        Ok(Self { abs_eps, rel_eps })
    }

    pub fn abs(eps: f64) -> Self {
        Self {
            abs_eps: eps,
            rel_eps: 0.0,
        }
    }

    /// `diff <= abs_eps + rel_eps * scale`
    pub fn admits(&self, diff: f64, scale: f64) -> bool {
        diff <= self.abs_eps + self.rel_eps * scale
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_eps: 1e-10,
            rel_eps: 1e-10,
        }
    }
}

/// Dense row-major complex matrix.
///
/// Serialized as `{"rows": r, "cols": c, "data": [[re, im], ...]}`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl TryFrom<RawMatrix> for ComplexMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        ComplexMatrix::from_vec(raw.rows, raw.cols, raw.data)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty matrix {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.concat())
    }

    pub fn from_real_rows<const N: usize>(rows: &[[f64; N]]) -> Self {
        Self::from_fn(rows.len(), N, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { ZERO })
    }

    /// Column vector built from complex entries.
    pub fn column(entries: &[C64]) -> Self {
        Self::from_fn(entries.len(), 1, |i, _| entries[i])
    }

    /// Matrix unit E_{ij} (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
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

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column_vec(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Shape(format!(
                "expected square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let brow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.require_same_shape(rhs)?;
        Ok(self.zip_map(rhs, |a, b| a + b))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.require_same_shape(rhs)?;
        Ok(self.zip_map(rhs, |a, b| a - b))
    }

    fn zip_map(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&z| z == ZERO)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn mat_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// LU factorization with partial pivoting; returns `None` when singular.
    fn lu(&self) -> Result<Option<(Self, Vec<usize>, f64)>> {
        let n = self.require_square()?;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| a[(x, k)].norm().total_cmp(&a[(y, k)].norm()))
                .unwrap_or(k);
            if a[(p, k)] == ZERO {
                return Ok(None);
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let factor = a[(i, k)] / pivot;
                a[(i, k)] = factor;
                for j in k + 1..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= factor * akj;
                }
            }
        }
        Ok(Some((a, perm, sign)))
    }

    pub fn det(&self) -> Result<C64> {
        Ok(match self.lu()? {
            None => ZERO,
            Some((lu, _, sign)) => lu.diagonal().into_iter().fold(C64::new(sign, 0.0), |acc, d| acc * d),
        })
    }

    /// Solves `self * x = b` for a square nonsingular matrix.
    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        let n = self.require_square()?;
        if b.len() != n {
            return Err(Error::Shape(format!(
                "right-hand side of length {} for {n} unknowns",
                b.len()
            )));
        }
        let (lu, perm, _) = self.lu()?.ok_or_else(|| Error::Invalid("singular matrix".into()))?;
        let mut x: Vec<C64> = perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = lu[(i, k)];
                let xk = x[k];
                x[i] -= l * xk;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = lu[(i, k)];
                let xk = x[k];
                x[i] -= u * xk;
            }
            x[i] /= lu[(i, i)];
        }
        Ok(x)
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let n = self.require_square()?;
        let mut base = self.clone();
        let mut acc = Self::identity(n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

// Operator impls panic on shape mismatch; use the `checked_*` methods when
// shapes come from user input.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.checked_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.checked_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        &self + &rhs
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        &self - &rhs
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix sum shape mismatch"
        );
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix difference shape mismatch"
        );
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        -&self
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, s: C64) -> ComplexMatrix {
        self.scale(s)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, s: f64) -> ComplexMatrix {
        self.scale_real(s)
    }
}

/// Pauli matrix σ_k for k ∈ {1, 2, 3}.
pub fn pauli(k: usize) -> ComplexMatrix {
    let data = match k {
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, -I, I, ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => panic!("Pauli index must be 1, 2 or 3, got {k}"),
    };
    ComplexMatrix {
        rows: 2,
        cols: 2,
        data: data.to_vec(),
    }
}

/// `ab − ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.require_square()?;
    a.require_same_shape(b)?;
    Ok(&(a * b) - &(b * a))
}

/// `ab + ba`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.require_square()?;
    a.require_same_shape(b)?;
    Ok(&(a * b) + &(b * a))
}

/// Matrix exponential by scaling and squaring of the truncated power series.
///
/// The matrix is scaled by `2^-s` until its 1-norm is at most 0.5, the series
/// is summed until terms drop below unit roundoff, and the result is squared
/// `s` times. Nilpotent inputs (`A^n = 0` exactly) are summed directly, so
/// e.g. strictly triangular matrices get the terminating series verbatim.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    if let Some(series) = nilpotent_series(a, n) {
        return Ok(series);
    }
    let norm = a.one_norm();
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > 0.5 {
        scaled_norm *= 0.5;
        squarings += 1;
    }
    let scaled = a.scale_real(0.5f64.powi(squarings as i32));
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=40 {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        sum += &term;
        if term.max_abs() <= f64::EPSILON * 1e-2 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

fn nilpotent_series(a: &ComplexMatrix, n: usize) -> Option<ComplexMatrix> {
    // Only cheap for small matrices; larger inputs fall through to scaling.
    if n > 8 {
        return None;
    }
    let mut powers = vec![a.clone()];
    for _ in 1..n {
        let next = powers.last().unwrap() * a;
        if next.is_zero() {
            let mut sum = ComplexMatrix::identity(n);
            let mut fact = 1.0;
            for (k, p) in powers.iter().enumerate() {
                fact *= (k + 1) as f64;
                sum += &p.scale_real(1.0 / fact);
            }
            return Some(sum);
        }
        powers.push(next);
    }
    None
}

/// `a* a = 1` entrywise within `tol`.
pub fn is_unitary(a: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    let n = a.require_square()?;
    let defect = (&a.adjoint() * a).max_abs_diff(&ComplexMatrix::identity(n));
    Ok(tol.admits(defect, 1.0))
}

pub fn is_hermitian(a: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    a.require_square()?;
    Ok(tol.admits(a.max_abs_diff(&a.adjoint()), a.max_abs()))
}

pub fn is_antihermitian(a: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    a.require_square()?;
    Ok(tol.admits(a.max_abs_diff(&-a.adjoint()), a.max_abs()))
}

/// Real, `RᵀR = 1` and `det R = 1`, each within `tol`.
pub fn is_special_orthogonal(a: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    let n = a.require_square()?;
    let imag = a.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let orth = (&a.transpose() * a).max_abs_diff(&ComplexMatrix::identity(n));
    let det = (a.det()? - ONE).norm();
    Ok(tol.admits(imag, 1.0) && tol.admits(orth, 1.0) && tol.admits(det, 1.0))
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V f(Λ) V*` for a real function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let d: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        let vd = ComplexMatrix::from_fn(v.rows, v.cols, |i, j| v[(i, j)] * d[j]);
        &vd * &v.adjoint()
    }

    /// Matrix expressed in this eigenbasis: `V* a V`.
    pub fn to_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &(&self.vectors.adjoint() * a) * &self.vectors
    }

    pub fn from_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &(&self.vectors * a) * &self.vectors.adjoint()
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Sweeps until the off-diagonal Frobenius norm is at most `1e-13·‖a‖`.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = a.require_square()?;
    let herm_dev = a.max_abs_diff(&a.adjoint());
    if !Tolerance::default().admits(herm_dev, a.max_abs()) {
        return Err(Error::NotHermitian(herm_dev));
    }
    // Symmetrize so the iteration sees an exactly Hermitian input.
    let mut m = (a + &a.adjoint()).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();
    let target = 1e-13 * scale;

    for _sweep in 0..100 {
        let off = off_diagonal_norm(&m);
        if off <= target || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One two-sided Jacobi rotation annihilating `m[p][q]`.
///
/// The unitary is `G = D·R` with `D = diag(1, e^{-iφ})` on (p, q), which makes
/// the pivot block real symmetric, followed by the classical real rotation.
fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Skip pivots that are negligible against both diagonal entries.
    if g < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return;
    }
    let phase = apq / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase_c = phase.conj();
    // G entries: columns p and q of the unitary.
    let gpp = C64::new(c, 0.0);
    let gpq = C64::new(s, 0.0);
    let gqp = -phase_c * s;
    let gqq = phase_c * c;

    let n = m.rows;
    // m <- m G
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * gpp + mkq * gqp;
        m[(k, q)] = mkp * gpq + mkq * gqq;
    }
    // m <- G* m
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = gpp.conj() * mpk + gqp.conj() * mqk;
        m[(q, k)] = gpq.conj() * mpk + gqq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    // v <- v G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}
