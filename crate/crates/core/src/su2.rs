//! Representations of su(2): the irreducibles `D_j`, Clebsch–Gordan
//! decomposition of tensor products, spinors as homogeneous polynomials and
//! branching of a representation restricted to a three-dimensional simple
//! subalgebra.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{killing_form, MatrixRealization, ProductConvention};
use crate::matrix::{eig_hermitian, ComplexMatrix, C64, I, ONE, ZERO};

/// A spin `j ∈ ½ℕ`, stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spin(u32);

impl Spin {
    pub const ZERO: Spin = Spin(0);
    pub const HALF: Spin = Spin(1);
    pub const ONE: Spin = Spin(2);

    pub fn from_twice(twice: u32) -> Self {
        Spin(twice)
    }

    /// Accepts `j` with `2j` a nonnegative integer.
    pub fn from_f64(j: f64) -> Result<Self> {
        let t = 2.0 * j;
        if !(t >= 0.0 && t.fract() == 0.0 && t <= f64::from(u16::MAX)) {
            return Err(Error::BadSpin(j.to_string()));
        }
        Ok(Spin(t as u32))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// `j(j+1)`.
    pub fn casimir_value(self) -> f64 {
        let j = self.value();
        j * (j + 1.0)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for Spin {
    type Err = Error;

    /// Parses `"3/2"`, `"1"` or `"0.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadSpin(s.to_string());
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "2" => Ok(Spin(num)),
                "1" => Ok(Spin(2 * num)),
                _ => Err(bad()),
            };
        }
        let x: f64 = t.parse().map_err(|_| bad())?;
        Spin::from_f64(x).map_err(|_| bad())
    }
}

/// `D_j` in the `t3` eigenbasis ordered by descending weight `j, j−1, …, −j`.
#[derive(Debug, Clone)]
pub struct IrrepDj {
    pub spin: Spin,
    pub t3: ComplexMatrix,
    pub l_plus: ComplexMatrix,
    pub l_minus: ComplexMatrix,
}

impl IrrepDj {
    pub fn new(spin: Spin) -> Self {
        let n = spin.dim();
        let j = spin.value();
        let m = |i: usize| j - i as f64;
        let t3 = ComplexMatrix::from_real_diag(&(0..n).map(m).collect::<Vec<_>>());
        let l_plus = ComplexMatrix::from_fn(n, n, |r, c| {
            if c == r + 1 {
                let mc = m(c);
                C64::new(((j - mc) * (j + mc + 1.0)).sqrt(), 0.0)
            } else {
                ZERO
            }
        });
        let l_minus = l_plus.adjoint();
        Self {
            spin,
            t3,
            l_plus,
            l_minus,
        }
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    /// `t1 = (L+ + L−)/2`.
    pub fn t1(&self) -> ComplexMatrix {
        (&self.l_plus + &self.l_minus).scale_real(0.5)
    }

    /// `t2 = (L+ − L−)/(2i)`.
    pub fn t2(&self) -> ComplexMatrix {
        (&self.l_plus - &self.l_minus).scale(C64::new(0.0, -0.5))
    }

    /// Hermitian generators `(t1, t2, t3)`.
    pub fn generators(&self) -> [ComplexMatrix; 3] {
        [self.t1(), self.t2(), self.t3.clone()]
    }
}

pub fn build_irrep(spin: Spin) -> IrrepDj {
    IrrepDj::new(spin)
}

/// `J² = L+L− − t3 + t3²`.
pub fn casimir(rep: &IrrepDj) -> ComplexMatrix {
    &(&(&rep.l_plus * &rep.l_minus) - &rep.t3) + &(&rep.t3 * &rep.t3)
}

/// Generators `t ⊗ 1 + 1 ⊗ t` of the tensor product representation.
#[derive(Debug, Clone)]
pub struct TensorRep {
    pub t3: ComplexMatrix,
    pub l_plus: ComplexMatrix,
    pub l_minus: ComplexMatrix,
}

impl TensorRep {
    pub fn new(a: &IrrepDj, b: &IrrepDj) -> Self {
        let ia = ComplexMatrix::identity(a.dim());
        let ib = ComplexMatrix::identity(b.dim());
        let lift = |x: &ComplexMatrix, y: &ComplexMatrix| &x.kron(&ib) + &ia.kron(y);
        Self {
            t3: lift(&a.t3, &b.t3),
            l_plus: lift(&a.l_plus, &b.l_plus),
            l_minus: lift(&a.l_minus, &b.l_minus),
        }
    }

    pub fn casimir(&self) -> ComplexMatrix {
        &(&(&self.l_plus * &self.l_minus) - &self.t3) + &(&self.t3 * &self.t3)
    }
}

/// Result of decomposing `D_k ⊗ D_l`.
#[derive(Debug, Clone)]
pub struct CgDecomposition {
    pub k: Spin,
    pub l: Spin,
    /// `(j, multiplicity)` with `j` descending.
    pub components: Vec<(Spin, usize)>,
    /// Columns are the standard bases of the summands, blocks ordered as in
    /// `components`, weights descending inside each block.
    pub isometry: ComplexMatrix,
}

/// Decomposes `D_k ⊗ D_l` numerically.
///
/// Multiplicities are read off the spectrum of the tensor Casimir. In each
/// summand the highest-weight vector is the Casimir eigenvector inside the
/// `t3 = j` weight space, phased so its first nonzero component (in tensor
/// order) is real positive; the rest of the block follows by applying `L−`.
pub fn clebsch_gordan(k: Spin, l: Spin) -> Result<CgDecomposition> {
    let a = IrrepDj::new(k);
    let b = IrrepDj::new(l);
    let tensor = TensorRep::new(&a, &b);
    let n = a.dim() * b.dim();
    let j2 = tensor.casimir();
    let spectrum = eig_hermitian(&j2)?.values;

    let top = k.twice() + l.twice();
    let bottom = k.twice().abs_diff(l.twice());
    let mut components = Vec::new();
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    let weights: Vec<f64> = tensor.t3.diagonal().iter().map(|z| z.re).collect();

    for twice_j in (bottom..=top).rev().step_by(2) {
        let spin = Spin(twice_j);
        let cj = spin.casimir_value();
        let count = spectrum.iter().filter(|&&x| (x - cj).abs() < 1e-8).count();
        if count % spin.dim() != 0 {
            return Err(Error::Invalid(format!(
                "Casimir multiplicity {count} not divisible by {}",
                spin.dim()
            )));
        }
        let mult = count / spin.dim();
        if mult == 0 {
            continue;
        }
        if mult != 1 {
            return Err(Error::Invalid(format!("unexpected multiplicity {mult} for j = {spin}")));
        }
        components.push((spin, mult));

        let j = spin.value();
        let idx: Vec<usize> = (0..n).filter(|&i| (weights[i] - j).abs() < 1e-9).collect();
        let sub = ComplexMatrix::from_fn(idx.len(), idx.len(), |r, c| j2[(idx[r], idx[c])]);
        let eig = eig_hermitian(&sub)?;
        let pick = (0..idx.len())
            .min_by(|&x, &y| (eig.values[x] - cj).abs().total_cmp(&(eig.values[y] - cj).abs()))
            .expect("weight space is nonempty");
        let mut v = vec![ZERO; n];
        for (r, &i) in idx.iter().enumerate() {
            v[i] = eig.vectors[(r, pick)];
        }
        let lead = v.iter().find(|z| z.norm() > 1e-9).copied().expect("nonzero vector");
        let phase = lead.conj() / lead.norm();
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z *= phase / nrm);

        let mut m = j;
        columns.push(v.clone());
        for _ in 0..twice_j {
            let w = tensor.l_minus.mat_vec(&v)?;
            let c = ((j + m) * (j - m + 1.0)).sqrt();
            v = w.iter().map(|z| z / c).collect();
            m -= 1.0;
            columns.push(v.clone());
        }
    }
    if columns.len() != n {
        return Err(Error::Invalid(format!(
            "decomposition produced {} of {n} vectors",
            columns.len()
        )));
    }
    let isometry = ComplexMatrix::from_fn(n, n, |r, c| columns[c][r]);
    Ok(CgDecomposition {
        k,
        l,
        components,
        isometry,
    })
}

/// Block-diagonal direct sum of square matrices.
pub fn direct_sum(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = ComplexMatrix::zeros(n.max(1), n.max(1));
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out[(off + i, off + j)] = b[(i, j)];
            }
        }
        off += b.rows();
    }
    out
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Spinors of spin `s` as homogeneous polynomials of degree `2s` in `(z₁, z₂)`,
/// with monomial basis `π_k = z₁ᵏ z₂^{2s−k}` and metric `⟨π_k|π_k⟩ = 1/C(2s, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinorSpace {
    pub spin: Spin,
}

impl SpinorSpace {
    pub fn new(spin: Spin) -> Self {
        Self { spin }
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn metric(&self) -> Vec<f64> {
        let n = self.spin.twice();
        (0..=n).map(|k| 1.0 / binomial(n, k)).collect()
    }

    /// Coefficients of `|x, s⟩`: `C(2s, k) · conj(x₁ᵏ x₂^{2s−k})`.
    pub fn coherent(&self, x: [C64; 2]) -> Vec<C64> {
        let n = self.spin.twice();
        (0..=n)
            .map(|k| (x[0].powu(k) * x[1].powu(n - k)).conj() * binomial(n, k))
            .collect()
    }

    pub fn inner(&self, phi: &[C64], psi: &[C64]) -> C64 {
        self.metric()
            .iter()
            .zip(phi.iter().zip(psi))
            .map(|(w, (a, b))| a.conj() * b * *w)
            .sum()
    }

    /// Action of the 2×2 matrix `A` as the operator `−(Az)·∇` on monomials.
    pub fn generator(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.rows() != 2 || a.cols() != 2 {
            return Err(Error::Shape("spinor generators come from 2x2 matrices".into()));
        }
        let n = self.spin.twice() as usize;
        let mut m = ComplexMatrix::zeros(n + 1, n + 1);
        for k in 0..=n {
            let kf = k as f64;
            let rest = (n - k) as f64;
            // −(A11 z₁ + A12 z₂) ∂₁ π_k − (A21 z₁ + A22 z₂) ∂₂ π_k
            m[(k, k)] -= a[(0, 0)] * kf + a[(1, 1)] * rest;
            if k > 0 {
                m[(k - 1, k)] -= a[(0, 1)] * kf;
            }
            if k < n {
                m[(k + 1, k)] -= a[(1, 0)] * rest;
            }
        }
        Ok(m)
    }
}

/// `⟨x, s|y, s⟩ = (y* x)^{2s}` by the closed form.
pub fn spinor_inner(x: [C64; 2], y: [C64; 2], spin: Spin) -> C64 {
    (y[0].conj() * x[0] + y[1].conj() * x[1]).powu(spin.twice())
}

/// The same inner product expanded over the monomial basis with its metric.
pub fn spinor_inner_expansion(x: [C64; 2], y: [C64; 2], spin: Spin) -> C64 {
    let space = SpinorSpace::new(spin);
    space.inner(&space.coherent(x), &space.coherent(y))
}

/// `γ_s = π² / ((2s+1)(2s+2))`.
pub fn gamma_s(spin: Spin) -> f64 {
    let t = f64::from(spin.twice());
    PI * PI / ((t + 1.0) * (t + 2.0))
}

/// Block dimensions of a representation restricted to a three-dimensional
/// simple subalgebra, descending.
///
/// `big` spans the represented algebra and `sub` the subalgebra, both as
/// matrices acting on the same space. The subalgebra's Killing-form Casimir
/// `Σ g^{ij} X_i X_j` acts as `j(j+1)/2` on a copy of `D_j`, so each
/// eigenvalue `c` belongs to blocks of dimension `√(1 + 8c)`.
pub fn decompose_restriction(big: &[ComplexMatrix], sub: &[ComplexMatrix]) -> Result<Vec<usize>> {
    if sub.is_empty() || big.is_empty() {
        return Err(Error::Invalid("generator lists must be nonempty".into()));
    }
    let n = sub[0].rows();
    if big.iter().chain(sub).any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::Shape("all generators must act on one space".into()));
    }
    let names = (1..=sub.len()).map(|i| format!("X{i}")).collect();
    let real = MatrixRealization::from_matrices("sub", names, sub.to_vec(), ProductConvention::Commutator)?;
    let span_residual = span_residual(big, sub)?;
    if span_residual > 1e-9 {
        return Err(Error::NotSubalgebra(span_residual));
    }
    if sub.len() != 3 {
        return Err(Error::Invalid(format!(
            "only three-dimensional simple subalgebras are supported, got dimension {}",
            sub.len()
        )));
    }
    let g = killing_form(&real.basis);
    let g_inv_cols: Vec<Vec<C64>> = (0..3)
        .map(|c| {
            let mut e = vec![ZERO; 3];
            e[c] = ONE;
            g.solve(&e)
        })
        .collect::<Result<_>>()
        .map_err(|_| Error::Invalid("subalgebra is not simple".into()))?;
    let mut cas = ComplexMatrix::zeros(n, n);
    for i in 0..3 {
        for j in 0..3 {
            let gij = g_inv_cols[j][i];
            if gij != ZERO {
                cas += &(&sub[i] * &sub[j]).scale(gij);
            }
        }
    }

    let scale = 1.0 + cas.max_abs();
    let mut blocks = Vec::new();
    let mut found = 0usize;
    for twice_j in 0..n as u32 {
        let spin = Spin(twice_j);
        let c = spin.casimir_value() / 2.0;
        let shifted = &cas - &ComplexMatrix::identity(n).scale_real(c);
        let gram = &shifted.adjoint() * &shifted;
        let sv = eig_hermitian(&gram)?.values;
        let kernel = sv.iter().filter(|&&x| x.max(0.0).sqrt() <= 1e-8 * scale).count();
        if kernel == 0 {
            continue;
        }
        if kernel % spin.dim() != 0 {
            return Err(Error::Invalid(format!(
                "eigenvalue {c} has multiplicity {kernel}, not a multiple of {}",
                spin.dim()
            )));
        }
        blocks.extend(std::iter::repeat_n(spin.dim(), kernel / spin.dim()));
        found += kernel;
    }
    if found != n {
        return Err(Error::Invalid(format!(
            "Casimir eigenvectors cover {found} of {n} dimensions"
        )));
    }
    blocks.sort_unstable_by(|a, b| b.cmp(a));
    Ok(blocks)
}

fn span_residual(big: &[ComplexMatrix], sub: &[ComplexMatrix]) -> Result<f64> {
    let d = big.len();
    let frob = |a: &ComplexMatrix, b: &ComplexMatrix| -> C64 {
        a.data().iter().zip(b.data()).map(|(x, y)| x.conj() * y).sum()
    };
    let gram = ComplexMatrix::from_fn(d, d, |i, j| frob(&big[i], &big[j]));
    let mut worst = 0.0f64;
    for s in sub {
        let rhs: Vec<C64> = big.iter().map(|b| frob(b, s)).collect();
        let coeffs = gram
            .solve(&rhs)
            .map_err(|_| Error::Invalid("big-algebra generators are linearly dependent".into()))?;
        let mut recon = ComplexMatrix::zeros(s.rows(), s.cols());
        for (c, b) in coeffs.iter().zip(big) {
            recon += &b.scale(*c);
        }
        worst = worst.max(recon.max_abs_diff(s));
    }
    Ok(worst)
}

/// Antihermitian generators `−i t_k` of an irrep, convenient as subalgebra input.
pub fn antihermitian_generators(rep: &IrrepDj) -> Vec<ComplexMatrix> {
    rep.generators().iter().map(|t| t.scale(-I)).collect()
}
