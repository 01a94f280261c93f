//! Fermionic Fock space over modes `1..=n`.
//!
//! Basis states are subsets `J` encoded as bitmasks (bit `i` set iff mode
//! `i + 1` is occupied), enumerated by binary counting. Operators are kept as
//! signed partial permutations so the anticommutation relations can be
//! checked in exact integer arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ZERO};

/// Largest supported mode count.
pub const MAX_MODES: usize = 12;
/// Largest mode count for which dense matrices are materialized.
pub const MAX_DENSE_MODES: usize = 10;

/// A strictly increasing list of mode indices `j₁ < … < j_l`, all ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedSubset {
    indices: Vec<usize>,
}

impl SignedSubset {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.first().is_some_and(|&j| j == 0) || indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(format!(
                "mode indices must be strictly increasing and >= 1: {indices:?}"
            )));
        }
        if indices.last().is_some_and(|&j| j > 64) {
            return Err(Error::SizeCap(*indices.last().unwrap()));
        }
        Ok(Self { indices })
    }

    pub fn from_mask(mask: u64) -> Self {
        Self {
            indices: (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect(),
        }
    }

    pub fn mask(&self) -> u64 {
        self.indices.iter().fold(0, |m, &j| m | 1 << (j - 1))
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

/// `ε_j(J)`: `+1` if an even number of indices in `J` are smaller than `j`.
pub fn epsilon(j: usize, subset: &SignedSubset) -> i8 {
    epsilon_mask(j, subset.mask())
}

fn epsilon_mask(j: usize, mask: u64) -> i8 {
    let below = mask & ((1u64 << (j - 1)) - 1);
    if below.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Operator sending basis state `c` to `sign · e_target`, or to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMap {
    image: Vec<Option<(usize, i8)>>,
}

impl SignedMap {
    pub fn dim(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self, col: usize) -> Option<(usize, i8)> {
        self.image[col]
    }

    pub fn adjoint(&self) -> Self {
        let mut image = vec![None; self.dim()];
        for (c, t) in self.image.iter().enumerate() {
            if let Some((r, s)) = *t {
                image[r] = Some((c, s));
            }
        }
        Self { image }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let image = other
            .image
            .iter()
            .map(|t| t.and_then(|(mid, s1)| self.image[mid].map(|(r, s2)| (r, s1 * s2))))
            .collect();
        Self { image }
    }

    pub fn is_zero(&self) -> bool {
        self.image.iter().all(Option::is_none)
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim(), self.dim());
        for (c, t) in self.image.iter().enumerate() {
            if let Some((r, s)) = *t {
                m[(r, c)] = C64::new(f64::from(s), 0.0);
            }
        }
        m
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim()];
        for (c, t) in self.image.iter().enumerate() {
            if let Some((r, s)) = *t {
                out[r] += v[c] * f64::from(s);
            }
        }
        out
    }
}

/// Largest `|({A, B} − δ·1)_{rc}|` computed in integers.
fn anticommutator_defect(a: &SignedMap, b: &SignedMap, delta: i64) -> i64 {
    let ab = a.compose(b);
    let ba = b.compose(a);
    let mut worst = 0i64;
    for c in 0..a.dim() {
        let mut entries: Vec<(usize, i64)> = Vec::with_capacity(3);
        let mut push = |r: usize, v: i64| match entries.iter_mut().find(|(rr, _)| *rr == r) {
            Some(e) => e.1 += v,
            None => entries.push((r, v)),
        };
        if let Some((r, s)) = ab.image[c] {
            push(r, i64::from(s));
        }
        if let Some((r, s)) = ba.image[c] {
            push(r, i64::from(s));
        }
        push(c, -delta);
        worst = worst.max(entries.iter().map(|(_, v)| v.abs()).max().unwrap_or(0));
    }
    worst
}

#[derive(Debug, Clone)]
pub struct FermionFock {
    n_modes: usize,
    a: Vec<SignedMap>,
    a_dag: Vec<SignedMap>,
}

impl FermionFock {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::Invalid("need at least one mode".into()));
        }
        if n_modes > MAX_MODES {
            return Err(Error::SizeCap(n_modes));
        }
        let dim = 1usize << n_modes;
        let mut a = Vec::with_capacity(n_modes);
        for j in 1..=n_modes {
            let bit = 1usize << (j - 1);
            let image = (0..dim)
                .map(|m| (m & bit != 0).then(|| (m & !bit, epsilon_mask(j, m as u64))))
                .collect();
            a.push(SignedMap { image });
        }
        let a_dag = a.iter().map(SignedMap::adjoint).collect();
        Ok(Self { n_modes, a, a_dag })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        1 << self.n_modes
    }

    /// Annihilator of mode `j` (1-based).
    pub fn a(&self, j: usize) -> &SignedMap {
        &self.a[j - 1]
    }

    pub fn a_dag(&self, j: usize) -> &SignedMap {
        &self.a_dag[j - 1]
    }

    fn check_mode(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n_modes {
            return Err(Error::Invalid(format!("mode {j} outside 1..={}", self.n_modes)));
        }
        Ok(())
    }

    fn check_dense(&self) -> Result<()> {
        if self.n_modes > MAX_DENSE_MODES {
            return Err(Error::SizeCap(self.n_modes));
        }
        Ok(())
    }

    pub fn dense_a(&self, j: usize) -> Result<ComplexMatrix> {
        self.check_mode(j)?;
        self.check_dense()?;
        Ok(self.a(j).to_dense())
    }

    /// `ħ·a_j*`, giving `{a_j, a_j*} = ħ`.
    pub fn dense_a_dag(&self, j: usize, hbar: f64) -> Result<ComplexMatrix> {
        self.check_mode(j)?;
        self.check_dense()?;
        Ok(self.a_dag(j).to_dense().scale_real(hbar))
    }

    /// `a(u) = Σ u_j a_j`.
    pub fn a_of(&self, u: &[C64]) -> Result<ComplexMatrix> {
        self.combination(u, &self.a)
    }

    /// `a*(v) = Σ v_j a_j*`.
    pub fn a_dag_of(&self, v: &[C64]) -> Result<ComplexMatrix> {
        self.combination(v, &self.a_dag)
    }

    fn combination(&self, w: &[C64], ops: &[SignedMap]) -> Result<ComplexMatrix> {
        if w.len() != self.n_modes {
            return Err(Error::Shape(format!("{} weights for {} modes", w.len(), self.n_modes)));
        }
        self.check_dense()?;
        let mut m = ComplexMatrix::zeros(self.dim(), self.dim());
        for (x, op) in w.iter().zip(ops) {
            for c in 0..self.dim() {
                if let Some((r, s)) = op.image[c] {
                    m[(r, c)] += x * f64::from(s);
                }
            }
        }
        Ok(m)
    }

    /// Index of the basis vector `|J⟩`.
    pub fn basis_index(&self, subset: &SignedSubset) -> Result<usize> {
        if subset.indices().last().is_some_and(|&j| j > self.n_modes) {
            return Err(Error::Invalid("subset uses modes beyond the space".into()));
        }
        Ok(subset.mask() as usize)
    }
}

/// Max over all mode pairs of `‖{a_j, a_k}‖`, `‖{a_j*, a_k*}‖` and
/// `‖{a_j, a_k*} − δ_{jk}‖`, in exact integers (0 for this construction).
pub fn car_residual(f: &FermionFock) -> f64 {
    let n = f.n_modes;
    let mut worst = 0i64;
    for j in 1..=n {
        for k in 1..=n {
            worst = worst.max(anticommutator_defect(f.a(j), f.a(k), 0));
            worst = worst.max(anticommutator_defect(f.a_dag(j), f.a_dag(k), 0));
            worst = worst.max(anticommutator_defect(f.a(j), f.a_dag(k), i64::from(j == k)));
        }
    }
    worst as f64
}

/// Eigenvalues of `n_j = a_j* a_j`, ascending.
pub fn number_spectrum(f: &FermionFock, j: usize) -> Result<Vec<f64>> {
    f.check_mode(j)?;
    let nj = f.a_dag(j).compose(f.a(j));
    let mut diag: Vec<f64> = (0..f.dim())
        .map(|c| match nj.image(c) {
            Some((r, s)) if r == c => f64::from(s),
            Some(_) => unreachable!("number operator is diagonal"),
            None => 0.0,
        })
        .collect();
    diag.sort_by(f64::total_cmp);
    Ok(diag)
}

/// Which sign identity failed, with its arguments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpsilonViolation {
    pub identity: &'static str,
    pub j: usize,
    pub k: usize,
    pub subset: u64,
}

/// Checks the five sign identities for `ε` on every subset of `1..=n` and
/// every admissible `j, k`. Returns the number of checks performed and the
/// violations.
pub fn verify_epsilon_identities(n: usize) -> (usize, Vec<EpsilonViolation>) {
    let mut checks = 0;
    let mut bad = Vec::new();
    let mut fail = |identity, j, k, subset| bad.push(EpsilonViolation { identity, j, k, subset });
    let eps = epsilon_mask;
    for mask in 0..(1u64 << n) {
        let has = |j: usize| mask >> (j - 1) & 1 == 1;
        let with = |j: usize| mask | 1 << (j - 1);
        let without = |j: usize| mask & !(1 << (j - 1));
        for j in 1..=n {
            checks += 1;
            if has(j) {
                if eps(j, without(j)) != eps(j, mask) {
                    fail("eps1a", j, j, mask);
                }
            } else if eps(j, with(j)) != eps(j, mask) {
                fail("eps1b", j, j, mask);
            }
            for k in 1..=n {
                if j == k {
                    continue;
                }
                checks += 1;
                match (has(j), has(k)) {
                    (false, false) => {
                        if eps(j, mask) * eps(k, with(j)) != -eps(k, mask) * eps(j, with(k)) {
                            fail("eps2", j, k, mask);
                        }
                    }
                    (true, true) => {
                        if eps(j, mask) * eps(k, without(j)) != -eps(k, mask) * eps(j, without(k)) {
                            fail("eps3", j, k, mask);
                        }
                    }
                    (false, true) => {
                        if eps(j, mask) * eps(k, with(j)) != -eps(k, mask) * eps(j, without(k)) {
                            fail("eps4", j, k, mask);
                        }
                    }
                    (true, false) => checks -= 1,
                }
            }
        }
    }
    (checks, bad)
}
