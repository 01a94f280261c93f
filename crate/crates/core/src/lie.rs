//! Lie algebras given by structure constants, together with matrix
//! realizations of the built-in families and the invariants used to test
//! them: Jacobi residual, Killing form, semisimplicity and the Weyl relation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{commutator, eig_hermitian, expm, ComplexMatrix, Tolerance, C64, I, ONE, ZERO};

/// Largest supported algebra dimension.
pub const MAX_DIM: usize = 64;

/// Abstract Lie algebra: `X_j ⊣ X_k = Σ_l c[j][k][l] X_l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBasis", into = "RawBasis")]
pub struct LieAlgebraBasis {
    name: String,
    names: Vec<String>,
    dim: usize,
    // dim³ entries, index (j*dim + k)*dim + l
    c: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct RawBasis {
    name: String,
    dim: usize,
    names: Vec<String>,
    c: Vec<Vec<Vec<C64>>>,
}

impl TryFrom<RawBasis> for LieAlgebraBasis {
    type Error = Error;

    fn try_from(raw: RawBasis) -> Result<Self> {
        if raw.names.len() != raw.dim || raw.c.len() != raw.dim {
            return Err(Error::Shape("basis names or constants do not match dim".into()));
        }
        let d = raw.dim;
        let mut flat = Vec::with_capacity(d * d * d);
        for plane in &raw.c {
            if plane.len() != d || plane.iter().any(|row| row.len() != d) {
                return Err(Error::Shape("structure constants must be dim×dim×dim".into()));
            }
            for row in plane {
                flat.extend_from_slice(row);
            }
        }
        LieAlgebraBasis::new(raw.name, raw.names, flat)
    }
}

impl From<LieAlgebraBasis> for RawBasis {
    fn from(b: LieAlgebraBasis) -> Self {
        let d = b.dim;
        let c = (0..d)
            .map(|j| (0..d).map(|k| (0..d).map(|l| b.c(j, k, l)).collect()).collect())
            .collect();
        RawBasis {
            name: b.name,
            dim: d,
            names: b.names,
            c,
        }
    }
}

impl LieAlgebraBasis {
    /// Builds a basis from flattened constants, checking size and antisymmetry.
    ///
    /// The Jacobi identity is not enforced here; see [`verify_jacobi`].
    pub fn new(name: impl Into<String>, names: Vec<String>, c: Vec<C64>) -> Result<Self> {
        let dim = names.len();
        if dim == 0 {
            return Err(Error::Invalid("algebra must have at least one generator".into()));
        }
        if dim > MAX_DIM {
            return Err(Error::SizeCap(dim));
        }
        if c.len() != dim * dim * dim {
            return Err(Error::Shape(format!(
                "{} structure constants for dimension {dim}",
                c.len()
            )));
        }
        let basis = Self {
            name: name.into(),
            names,
            dim,
            c,
        };
        let worst = basis.antisymmetry_defect();
        if worst > 1e-12 {
            return Err(Error::NotAntisymmetric(worst));
        }
        Ok(basis)
    }

    /// Abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Result<Self> {
        let names = (1..=dim).map(|i| format!("X{i}")).collect();
        Self::new(format!("abelian({dim})"), names, vec![ZERO; dim * dim * dim])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self, j: usize, k: usize, l: usize) -> C64 {
        self.c[(j * self.dim + k) * self.dim + l]
    }

    /// Overwrites the single entry `c_{jkl}`, leaving `c_{kjl}` untouched.
    ///
    /// The result may violate antisymmetry; it exists to probe the invariant
    /// checks with deliberately broken constants.
    pub fn with_constant(mut self, j: usize, k: usize, l: usize, value: C64) -> Self {
        let d = self.dim;
        self.c[(j * d + k) * d + l] = value;
        self
    }

    /// Largest `|c_{jkl} + c_{kjl}|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    worst = worst.max((self.c(j, k, l) + self.c(k, j, l)).norm());
                }
            }
        }
        worst
    }

    /// Lie product of two elements given in coordinates.
    pub fn bracket(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let d = self.dim;
        let mut out = vec![ZERO; d];
        for j in 0..d {
            if x[j] == ZERO {
                continue;
            }
            for k in 0..d {
                let w = x[j] * y[k];
                if w == ZERO {
                    continue;
                }
                for (l, o) in out.iter_mut().enumerate() {
                    *o += w * self.c(j, k, l);
                }
            }
        }
        out
    }

    /// Adjoint matrix of generator `j`: `(ad_j)_{lk} = c_{jkl}`.
    pub fn ad(&self, j: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, self.dim, |l, k| self.c(j, k, l))
    }

    /// Adjoint matrix of an arbitrary element.
    pub fn ad_element(&self, x: &[C64]) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, self.dim, |l, k| {
            (0..self.dim).map(|j| x[j] * self.c(j, k, l)).sum()
        })
    }

    fn nonzeros(&self) -> Vec<(usize, usize, usize, C64)> {
        let d = self.dim;
        let mut out = Vec::new();
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let v = self.c(j, k, l);
                    if v != ZERO {
                        out.push((j, k, l, v));
                    }
                }
            }
        }
        out
    }
}

/// Maximum modulus of the Jacobi contraction
/// `Σ_m (c_{jkm} c_{mln} + c_{klm} c_{mjn} + c_{ljm} c_{mkn})` over all indices.
pub fn verify_jacobi(basis: &LieAlgebraBasis) -> f64 {
    let d = basis.dim;
    // Sparse sweep: J(j,k,l)_n = Σ_m c_{jkm} c_{mln} + cyclic, and the three
    // cyclic terms are the same sum with (j,k,l) rotated.
    let mut t = vec![ZERO; d * d * d * d];
    let idx = |j: usize, k: usize, l: usize, n: usize| ((j * d + k) * d + l) * d + n;
    let nz = basis.nonzeros();
    let mut by_first: Vec<Vec<(usize, usize, C64)>> = vec![Vec::new(); d];
    for &(m, l, n, v) in &nz {
        by_first[m].push((l, n, v));
    }
    // t(j,k,l,n) = Σ_m c_{jkm} c_{mln}
    for &(j, k, m, v) in &nz {
        for &(l, n, w) in &by_first[m] {
            t[idx(j, k, l, n)] += v * w;
        }
    }
    let mut worst = 0.0f64;
    for j in 0..d {
        for k in 0..d {
            for l in 0..d {
                for n in 0..d {
                    let r = t[idx(j, k, l, n)] + t[idx(k, l, j, n)] + t[idx(l, j, k, n)];
                    worst = worst.max(r.norm());
                }
            }
        }
    }
    worst
}

/// Killing form `B_{jk} = tr(ad_j ad_k)`.
pub fn killing_form(basis: &LieAlgebraBasis) -> ComplexMatrix {
    let d = basis.dim;
    let ads: Vec<ComplexMatrix> = (0..d).map(|j| basis.ad(j)).collect();
    let mut b = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        for k in j..d {
            let v = (&ads[j] * &ads[k]).trace();
            b[(j, k)] = v;
            b[(k, j)] = v;
        }
    }
    b
}

/// Evaluates the Killing form on two elements in coordinates.
pub fn killing_pairing(b: &ComplexMatrix, x: &[C64], y: &[C64]) -> C64 {
    let d = b.rows();
    let mut s = ZERO;
    for j in 0..d {
        for k in 0..d {
            s += x[j] * b[(j, k)] * y[k];
        }
    }
    s
}

/// Smallest singular value of a square matrix.
pub fn smallest_singular_value(m: &ComplexMatrix) -> Result<f64> {
    let gram = &m.adjoint() * m;
    let eig = eig_hermitian(&gram)?;
    Ok(eig.values[0].max(0.0).sqrt())
}

/// Cartan's criterion: the Killing form is nondegenerate.
pub fn is_semisimple(basis: &LieAlgebraBasis, tol: Tolerance) -> bool {
    let b = killing_form(basis);
    // The Gram matrix of a finite matrix is always Hermitian.
    let sigma = smallest_singular_value(&b).expect("Gram matrix is Hermitian");
    sigma > tol.abs_eps * basis.dim as f64
}

/// Checks `e^{A+B} = e^{-[A,B]/2} e^A e^B` for a central commutator.
pub fn weyl_check(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    let c = commutator(a, b)?;
    let scale = c.max_abs().max(a.max_abs()).max(b.max_abs());
    let dev = commutator(&c, a)?.max_abs().max(commutator(&c, b)?.max_abs());
    if !tol.admits(dev, scale * scale) {
        return Err(Error::NotCentral(dev));
    }
    let lhs = expm(&(a + b))?;
    let rhs = &(&expm(&c.scale_real(-0.5))? * &expm(a)?) * &expm(b)?;
    Ok(lhs.max_abs_diff(&rhs) <= 1e-9 * lhs.max_abs().max(1.0))
}

/// How matrix commutators map to the Lie product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProductConvention {
    /// `f ⊣ g = fg − gf`
    Commutator,
    /// `f ⊣ g = (i/ħ)(fg − gf)`
    Quantum { hbar: f64 },
}

impl ProductConvention {
    pub fn product(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let c = commutator(a, b)?;
        Ok(match *self {
            Self::Commutator => c,
            Self::Quantum { hbar } => c.scale(I / hbar),
        })
    }
}

/// A Lie algebra together with one matrix per generator.
#[derive(Debug, Clone)]
pub struct MatrixRealization {
    pub basis: LieAlgebraBasis,
    pub mats: Vec<ComplexMatrix>,
    pub convention: ProductConvention,
}

impl MatrixRealization {
    pub fn new(basis: LieAlgebraBasis, mats: Vec<ComplexMatrix>, convention: ProductConvention) -> Result<Self> {
        if mats.len() != basis.dim() {
            return Err(Error::Shape(format!(
                "{} matrices for a {}-dimensional algebra",
                mats.len(),
                basis.dim()
            )));
        }
        let n = mats[0].rows();
        if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::Shape("realization matrices must share one square size".into()));
        }
        Ok(Self {
            basis,
            mats,
            convention,
        })
    }

    /// Derives structure constants from commuting the given matrices.
    ///
    /// Each product is projected onto the span of the generators in the
    /// Frobenius inner product; projections that miss the span are rejected.
    pub fn from_matrices(
        name: impl Into<String>,
        names: Vec<String>,
        mats: Vec<ComplexMatrix>,
        convention: ProductConvention,
    ) -> Result<Self> {
        let d = mats.len();
        if names.len() != d {
            return Err(Error::Shape("one name per generator required".into()));
        }
        if d > MAX_DIM {
            return Err(Error::SizeCap(d));
        }
        let gram = ComplexMatrix::from_fn(d, d, |l, m| frobenius(&mats[l], &mats[m]));
        let mut c = vec![ZERO; d * d * d];
        let mut residual = 0.0f64;
        for j in 0..d {
            for k in j + 1..d {
                let prod = convention.product(&mats[j], &mats[k])?;
                let rhs: Vec<C64> = mats.iter().map(|x| frobenius(x, &prod)).collect();
                let coeffs = gram.solve(&rhs)?;
                let mut recon = ComplexMatrix::zeros(prod.rows(), prod.cols());
                for (l, &cl) in coeffs.iter().enumerate() {
                    let cl = snap(cl);
                    c[(j * d + k) * d + l] = cl;
                    c[(k * d + j) * d + l] = -cl;
                    recon += &mats[l].scale(cl);
                }
                residual = residual.max(recon.max_abs_diff(&prod));
            }
        }
        if residual > 1e-9 {
            return Err(Error::NotSubalgebra(residual));
        }
        let basis = LieAlgebraBasis::new(name, names, c)?;
        Self::new(basis, mats, convention)
    }

    /// Largest deviation `‖X_j ⊣ X_k − Σ_l c_{jkl} X_l‖` over generator pairs.
    pub fn residual(&self) -> f64 {
        let d = self.basis.dim();
        let mut worst = 0.0f64;
        for j in 0..d {
            for k in 0..d {
                let prod = self
                    .convention
                    .product(&self.mats[j], &self.mats[k])
                    .expect("shapes checked at construction");
                let mut expected = ComplexMatrix::zeros(prod.rows(), prod.cols());
                for l in 0..d {
                    let c = self.basis.c(j, k, l);
                    if c != ZERO {
                        expected += &self.mats[l].scale(c);
                    }
                }
                worst = worst.max(prod.max_abs_diff(&expected));
            }
        }
        worst
    }

    /// Matrix of the element with the given coordinates.
    pub fn element(&self, coords: &[C64]) -> ComplexMatrix {
        let n = self.mats[0].rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (x, m) in coords.iter().zip(&self.mats) {
            if *x != ZERO {
                out += &m.scale(*x);
            }
        }
        out
    }
}

fn frobenius(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.data().iter().zip(b.data()).map(|(x, y)| x.conj() * y).sum()
}

// Snaps constants within rounding of an integer onto it so integer families
// keep exact constants.
fn snap(z: C64) -> C64 {
    let s = |x: f64| {
        if (x - x.round()).abs() < 1e-12 {
            x.round() + 0.0
        } else {
            x
        }
    };
    C64::new(s(z.re), s(z.im))
}

/// The built-in algebra families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinAlgebra {
    So3,
    Su2,
    HeisenbergT3,
    OscillatorOs1,
    Gl(usize),
    Sl(usize),
    So(usize, usize),
    /// `sp(2n)`, stored as the matrix size `2n`.
    Sp(usize),
}

impl fmt::Display for BuiltinAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::So3 => write!(f, "so3"),
            Self::Su2 => write!(f, "su2"),
            Self::HeisenbergT3 => write!(f, "heisenberg_t3"),
            Self::OscillatorOs1 => write!(f, "oscillator_os1"),
            Self::Gl(n) => write!(f, "gl({n})"),
            Self::Sl(n) => write!(f, "sl({n})"),
            Self::So(p, q) => write!(f, "so({p},{q})"),
            Self::Sp(m) => write!(f, "sp({m})"),
        }
    }
}

impl FromStr for BuiltinAlgebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownAlgebra(s.to_string());
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "so3" | "so(3)" => return Ok(Self::So3),
            "su2" | "su(2)" => return Ok(Self::Su2),
            "heisenberg_t3" | "heisenberg" => return Ok(Self::HeisenbergT3),
            "oscillator_os1" | "os1" | "os(1)" => return Ok(Self::OscillatorOs1),
            _ => {}
        }
        let open = t.find('(').ok_or_else(unknown)?;
        let args = t[open + 1..].strip_suffix(')').ok_or_else(unknown)?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|a| a.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| unknown())?;
        match (&t[..open], nums.as_slice()) {
            ("gl", [n]) => Ok(Self::Gl(*n)),
            ("sl", [n]) => Ok(Self::Sl(*n)),
            ("so", [p, q]) => Ok(Self::So(*p, *q)),
            ("sp", [m]) => Ok(Self::Sp(*m)),
            _ => Err(unknown()),
        }
    }
}

fn epsilon(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn epsilon_constants() -> Vec<C64> {
    let mut c = Vec::with_capacity(27);
    for j in 0..3 {
        for k in 0..3 {
            for l in 0..3 {
                c.push(C64::new(epsilon(j, k, l), 0.0));
            }
        }
    }
    c
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Generator `L_k` of so(3) with `(L_k)_{ij} = −ε_{kij}` (zero-based `k`).
pub fn so3_generator(k: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(3, 3, |i, j| C64::new(-epsilon(k, i, j), 0.0))
}

/// Builds the named algebra together with its defining matrix realization.
pub fn builtin_algebra(which: BuiltinAlgebra) -> Result<MatrixRealization> {
    let name = which.to_string();
    let plain = ProductConvention::Commutator;
    match which {
        BuiltinAlgebra::So3 => {
            let basis = LieAlgebraBasis::new(name, labels("L", 3), epsilon_constants())?;
            MatrixRealization::new(basis, (0..3).map(so3_generator).collect(), plain)
        }
        BuiltinAlgebra::Su2 => {
            let half_over_i = C64::new(0.0, -0.5);
            let mats = (1..=3).map(|k| crate::matrix::pauli(k).scale(half_over_i)).collect();
            let basis = LieAlgebraBasis::new(name, labels("t", 3), epsilon_constants())?;
            MatrixRealization::new(basis, mats, plain)
        }
        BuiltinAlgebra::HeisenbergT3 => {
            let mats = vec![
                ComplexMatrix::unit(3, 0, 1),
                ComplexMatrix::unit(3, 1, 2),
                ComplexMatrix::unit(3, 0, 2),
            ];
            let names = ["p", "q", "1"].map(String::from).to_vec();
            MatrixRealization::from_matrices(name, names, mats, plain)
        }
        BuiltinAlgebra::OscillatorOs1 => {
            let mats = vec![
                ComplexMatrix::unit(3, 0, 1),
                ComplexMatrix::unit(3, 1, 2),
                ComplexMatrix::unit(3, 1, 1),
                ComplexMatrix::unit(3, 0, 2),
            ];
            let names = ["a", "a*", "n", "1"].map(String::from).to_vec();
            MatrixRealization::from_matrices(name, names, mats, plain)
        }
        BuiltinAlgebra::Gl(n) => {
            if n < 1 || n * n > MAX_DIM {
                return Err(size_error(n * n, n >= 1));
            }
            let mut mats = Vec::new();
            let mut names = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    mats.push(ComplexMatrix::unit(n, i, j));
                    names.push(format!("E{}{}", i + 1, j + 1));
                }
            }
            MatrixRealization::from_matrices(name, names, mats, plain)
        }
        BuiltinAlgebra::Sl(n) => {
            // sl(1) is the zero algebra and has no basis.
            if n < 2 || n * n - 1 > MAX_DIM {
                return Err(size_error(n * n, n >= 2));
            }
            let mut mats = Vec::new();
            let mut names = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        mats.push(ComplexMatrix::unit(n, i, j));
                        names.push(format!("E{}{}", i + 1, j + 1));
                    }
                }
            }
            for i in 0..n - 1 {
                mats.push(&ComplexMatrix::unit(n, i, i) - &ComplexMatrix::unit(n, i + 1, i + 1));
                names.push(format!("H{}", i + 1));
            }
            MatrixRealization::from_matrices(name, names, mats, plain)
        }
        BuiltinAlgebra::So(p, q) => {
            let n = p + q;
            if n < 2 || n * (n - 1) / 2 > MAX_DIM {
                return Err(size_error(n * n.saturating_sub(1) / 2, n >= 2));
            }
            let eta = |i: usize| if i < p { 1.0 } else { -1.0 };
            let mut mats = Vec::new();
            let mut names = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    mats.push(
                        &ComplexMatrix::unit(n, i, j).scale_real(eta(i))
                            - &ComplexMatrix::unit(n, j, i).scale_real(eta(j)),
                    );
                    names.push(format!("X{}{}", i + 1, j + 1));
                }
            }
            MatrixRealization::from_matrices(name, names, mats, plain)
        }
        BuiltinAlgebra::Sp(m) => {
            let n = m / 2;
            if m % 2 != 0 || n < 1 || n * (2 * n + 1) > MAX_DIM {
                return Err(size_error(n * (2 * n + 1), m % 2 == 0 && n >= 1));
            }
            // X = Ω S with S symmetric and Ω = [[0, 1], [−1, 0]] blockwise.
            let omega = ComplexMatrix::from_fn(m, m, |i, j| {
                if j == i + n {
                    ONE
                } else if i == j + n {
                    -ONE
                } else {
                    ZERO
                }
            });
            let mut mats = Vec::new();
            let mut names = Vec::new();
            for i in 0..m {
                for j in i..m {
                    let mut s = ComplexMatrix::unit(m, i, j);
                    if i != j {
                        s += &ComplexMatrix::unit(m, j, i);
                    }
                    mats.push(&omega * &s);
                    names.push(format!("S{}{}", i + 1, j + 1));
                }
            }
            MatrixRealization::from_matrices(name, names, mats, plain)
        }
    }
}

fn size_error(dim: usize, params_ok: bool) -> Error {
    if params_ok {
        Error::SizeCap(dim)
    } else {
        Error::Invalid("size parameter out of range".into())
    }
}

/// Parses and builds an algebra by name.
pub fn builtin_algebra_by_name(name: &str) -> Result<MatrixRealization> {
    builtin_algebra(name.parse()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_builtins() -> Vec<BuiltinAlgebra> {
        use BuiltinAlgebra::*;
        vec![
            So3,
            Su2,
            HeisenbergT3,
            OscillatorOs1,
            Gl(1),
            Gl(2),
            Gl(3),
            Sl(2),
            Sl(3),
            So(3, 0),
            So(2, 1),
            So(3, 1),
            So(2, 2),
            Sp(2),
            Sp(4),
        ]
    }

    #[test]
    fn so3_constants_are_epsilon() {
        let r = builtin_algebra(BuiltinAlgebra::So3).unwrap();
        let b = &r.basis;
        assert_eq!(b.c(0, 1, 2), ONE);
        assert_eq!(b.c(1, 2, 0), ONE);
        assert_eq!(b.c(2, 0, 1), ONE);
        assert_eq!(b.c(1, 0, 2), -ONE);
        assert_eq!(b.c(0, 1, 0), ZERO);
        assert_eq!(r.residual(), 0.0);
    }

    #[test]
    fn heisenberg_products() {
        let r = builtin_algebra(BuiltinAlgebra::HeisenbergT3).unwrap();
        let b = &r.basis;
        // p ⊣ q = 1; everything with 1 vanishes.
        assert_eq!(b.bracket(&[ONE, ZERO, ZERO], &[ZERO, ONE, ZERO]), vec![ZERO, ZERO, ONE]);
        for x in 0..3 {
            for l in 0..3 {
                assert_eq!(b.c(x, 2, l), ZERO);
            }
        }
    }

    #[test]
    fn oscillator_relations() {
        let r = builtin_algebra(BuiltinAlgebra::OscillatorOs1).unwrap();
        let b = &r.basis;
        // [a, a*] = 1, [a, n] = a, [a*, n] = −a*
        assert_eq!(b.c(0, 1, 3), ONE);
        assert_eq!(b.c(0, 2, 0), ONE);
        assert_eq!(b.c(1, 2, 1), -ONE);
    }

    #[test]
    fn every_builtin_passes_invariants() {
        for alg in all_builtins() {
            let r = builtin_algebra(alg).unwrap();
            assert!(verify_jacobi(&r.basis) <= 1e-12, "{alg} jacobi");
            assert!(r.residual() <= 1e-10, "{alg} realization");
        }
    }

    #[test]
    fn builtin_dimensions() {
        let dim = |a| builtin_algebra(a).unwrap().basis.dim();
        assert_eq!(dim(BuiltinAlgebra::Gl(3)), 9);
        assert_eq!(dim(BuiltinAlgebra::Sl(3)), 8);
        assert_eq!(dim(BuiltinAlgebra::So(3, 1)), 6);
        assert_eq!(dim(BuiltinAlgebra::Sp(2)), 3);
        assert_eq!(dim(BuiltinAlgebra::Sp(4)), 10);
    }

    #[test]
    fn perturbed_so3_breaks_jacobi() {
        let so3 = builtin_algebra(BuiltinAlgebra::So3).unwrap().basis;
        let bent = so3.clone().with_constant(0, 1, 2, C64::new(1.01, 0.0));
        assert!(bent.antisymmetry_defect() > 0.0);
        assert!(verify_jacobi(&bent) >= 0.005);
        // Rescaling both c_123 and c_213 keeps a valid three-dimensional algebra.
        let rescaled = so3
            .with_constant(0, 1, 2, C64::new(1.01, 0.0))
            .with_constant(1, 0, 2, C64::new(-1.01, 0.0));
        assert!(verify_jacobi(&rescaled) < 1e-15);
        assert_eq!(verify_jacobi(&LieAlgebraBasis::abelian(4).unwrap()), 0.0);
    }

    #[test]
    fn killing_forms() {
        let so3 = builtin_algebra(BuiltinAlgebra::So3).unwrap().basis;
        assert_eq!(killing_form(&so3), ComplexMatrix::from_real_diag(&[-2.0, -2.0, -2.0]));
        let ab = LieAlgebraBasis::abelian(2).unwrap();
        assert!(killing_form(&ab).is_zero());
        let heis = builtin_algebra(BuiltinAlgebra::HeisenbergT3).unwrap().basis;
        assert_eq!(killing_form(&heis).det().unwrap(), ZERO);
    }

    #[test]
    fn killing_form_by_brute_force_trace() {
        // Oracle: build ad matrices by commuting realization matrices directly.
        let r = builtin_algebra(BuiltinAlgebra::Sl(2)).unwrap();
        let d = r.basis.dim();
        let ads: Vec<ComplexMatrix> = (0..d)
            .map(|j| {
                ComplexMatrix::from_fn(d, d, |l, k| {
                    let prod = commutator(&r.mats[j], &r.mats[k]).unwrap();
                    // Basis E12, E21, H: read coordinates from entries.
                    match l {
                        0 => prod[(0, 1)],
                        1 => prod[(1, 0)],
                        _ => prod[(0, 0)],
                    }
                })
            })
            .collect();
        let b = killing_form(&r.basis);
        for j in 0..d {
            for k in 0..d {
                assert_eq!(b[(j, k)], (&ads[j] * &ads[k]).trace());
            }
        }
        // sl(2) in basis (E, F, H): B(E,F) = 4, B(H,H) = 8.
        assert_eq!(b[(0, 1)], C64::new(4.0, 0.0));
        assert_eq!(b[(2, 2)], C64::new(8.0, 0.0));
    }

    #[test]
    fn semisimplicity() {
        let tol = Tolerance::default();
        assert!(is_semisimple(&builtin_algebra(BuiltinAlgebra::So3).unwrap().basis, tol));
        assert!(is_semisimple(
            &builtin_algebra(BuiltinAlgebra::Sp(2)).unwrap().basis,
            tol
        ));
        assert!(is_semisimple(
            &builtin_algebra(BuiltinAlgebra::So(2, 1)).unwrap().basis,
            tol
        ));
        assert!(!is_semisimple(
            &builtin_algebra(BuiltinAlgebra::HeisenbergT3).unwrap().basis,
            tol
        ));
        assert!(!is_semisimple(
            &builtin_algebra(BuiltinAlgebra::Gl(2)).unwrap().basis,
            tol
        ));
        assert!(!is_semisimple(&LieAlgebraBasis::abelian(2).unwrap(), tol));
    }

    #[test]
    fn weyl_relation_cases() {
        let tol = Tolerance::default();
        let a = ComplexMatrix::from_real_rows(&[[0.0, 1.3, -0.4], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        let b = ComplexMatrix::from_real_rows(&[[0.0, 0.2, 0.9], [0.0, 0.0, -2.0], [0.0, 0.0, 0.0]]);
        assert!(weyl_check(&a, &b, tol).unwrap());
        let s = ComplexMatrix::from_real_rows(&[[0.3, -1.0], [2.0, 0.1]]);
        assert!(weyl_check(&s, &s, tol).unwrap());
        let err = weyl_check(&crate::matrix::pauli(1), &crate::matrix::pauli(2), tol).unwrap_err();
        assert_eq!(err.token(), "not_central");
    }

    #[test]
    fn name_parsing() {
        assert_eq!("so(2,1)".parse::<BuiltinAlgebra>().unwrap(), BuiltinAlgebra::So(2, 1));
        assert_eq!("sp(4)".parse::<BuiltinAlgebra>().unwrap(), BuiltinAlgebra::Sp(4));
        assert_eq!("su2".parse::<BuiltinAlgebra>().unwrap(), BuiltinAlgebra::Su2);
        for bad in ["e8", "gl()", "so(3)x", "sp(a)"] {
            assert_eq!(
                bad.parse::<BuiltinAlgebra>().unwrap_err().token(),
                "unknown_algebra",
                "{bad}"
            );
        }
        assert_eq!(builtin_algebra(BuiltinAlgebra::Sp(3)).unwrap_err().token(), "invalid");
        assert_eq!(builtin_algebra(BuiltinAlgebra::Gl(9)).unwrap_err().token(), "size_cap");
    }

    #[test]
    fn quantum_convention_rescales_constants() {
        // t_k = σ_k/2 with (i/ħ)[·,·] at ħ = 1 gives constants −ε.
        let mats = (1..=3).map(|k| crate::matrix::pauli(k).scale_real(0.5)).collect();
        let r =
            MatrixRealization::from_matrices("su2_q", labels("t", 3), mats, ProductConvention::Quantum { hbar: 1.0 })
                .unwrap();
        assert_eq!(r.basis.c(0, 1, 2), -ONE);
        assert!(r.residual() < 1e-15);
    }

    #[test]
    fn non_closing_matrices_rejected() {
        let mats = vec![ComplexMatrix::unit(2, 0, 1), ComplexMatrix::unit(2, 1, 0)];
        let err =
            MatrixRealization::from_matrices("x", labels("X", 2), mats, ProductConvention::Commutator).unwrap_err();
        assert_eq!(err.token(), "not_subalgebra");
    }

    #[test]
    fn basis_json_round_trip() {
        let b = builtin_algebra(BuiltinAlgebra::So3).unwrap().basis;
        let s = serde_json::to_string(&b).unwrap();
        assert!(s.contains("\"dim\":3"));
        let back: LieAlgebraBasis = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
    }

    fn coords(d: usize) -> impl Strategy<Value = Vec<C64>> {
        prop::collection::vec((-1.0f64..1.0).prop_map(|x| C64::new(x, 0.0)), d)
    }

    proptest! {
        #[test]
        fn killing_form_is_invariant(
            alg in prop::sample::select(vec![BuiltinAlgebra::So3, BuiltinAlgebra::Sl(3), BuiltinAlgebra::So(2, 2), BuiltinAlgebra::Sp(4)]),
            x in coords(10),
            y in coords(10),
            z in coords(10),
        ) {
            let b = builtin_algebra(alg).unwrap().basis;
            let d = b.dim();
            let (x, y, z) = (&x[..d], &y[..d], &z[..d]);
            let k = killing_form(&b);
            // B([x,z], y) = B(x, [z,y])
            let lhs = killing_pairing(&k, &b.bracket(x, z), y);
            let rhs = killing_pairing(&k, x, &b.bracket(z, y));
            prop_assert!((lhs - rhs).norm() <= 1e-9);
        }

        #[test]
        fn realization_is_a_homomorphism(x in coords(3), y in coords(3)) {
            let r = builtin_algebra(BuiltinAlgebra::Su2).unwrap();
            let lhs = commutator(&r.element(&x), &r.element(&y)).unwrap();
            let rhs = r.element(&r.basis.bracket(&x, &y));
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }

        #[test]
        fn weyl_holds_on_heisenberg_pairs(v in prop::collection::vec(-2.0f64..2.0, 6)) {
            let upper = |a: f64, b: f64, c: f64| ComplexMatrix::from_real_rows(&[[0.0, a, b], [0.0, 0.0, c], [0.0, 0.0, 0.0]]);
            let a = upper(v[0], v[1], v[2]);
            let b = upper(v[3], v[4], v[5]);
            prop_assert!(weyl_check(&a, &b, Tolerance::default()).unwrap());
        }
    }
}
