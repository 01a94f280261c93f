//! Truncated bosonic Fock space, coherent states and rank-one highest-weight
//! representations.
//!
//! Internally the unnormalized basis `|k⟩ = (a*)ᵏ|0⟩/k!` is used, in which
//! `a|k⟩ = ħ|k−1⟩`, `a*|k−1⟩ = k|k⟩` and `⟨k|k⟩ = ħᵏ/k!`. The orthonormal view
//! rescales to `a e_k = √(ħk) e_{k−1}`. Levels `0..dim−1` are kept; the top
//! level is the truncation boundary, so the CCR holds on levels `0..dim−2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{eig_hermitian, ComplexMatrix, C64, I, ZERO};

/// Reduced Planck constant in J·s.
pub const HBAR_SI: f64 = 1.0545718e-34;

#[derive(Debug, Clone)]
pub struct BosonFock {
    dim: usize,
    hbar: f64,
    a: ComplexMatrix,
    a_dag: ComplexMatrix,
    n: ComplexMatrix,
}

impl BosonFock {
    pub fn new(dim: usize, hbar: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::TooSmall(dim));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::Invalid(format!("hbar must be positive, got {hbar}")));
        }
        let mut a = ComplexMatrix::zeros(dim, dim);
        let mut a_dag = ComplexMatrix::zeros(dim, dim);
        for k in 1..dim {
            a[(k - 1, k)] = C64::new(hbar, 0.0);
            a_dag[(k, k - 1)] = C64::new(k as f64, 0.0);
        }
        let n = ComplexMatrix::from_real_diag(&(0..dim).map(|k| k as f64).collect::<Vec<_>>());
        Ok(Self { dim, hbar, a, a_dag, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn a_dag(&self) -> &ComplexMatrix {
        &self.a_dag
    }

    pub fn n(&self) -> &ComplexMatrix {
        &self.n
    }

    /// `⟨k|k⟩ = ħᵏ/k!`.
    pub fn norms(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim);
        let mut w = 1.0;
        for k in 0..self.dim {
            if k > 0 {
                w *= self.hbar / k as f64;
            }
            out.push(w);
        }
        out
    }

    pub fn metric(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&self.norms())
    }

    /// `⟨φ|ψ⟩ = Σ φ̄_k ψ_k ħᵏ/k!`.
    pub fn inner(&self, phi: &[C64], psi: &[C64]) -> C64 {
        self.norms()
            .iter()
            .zip(phi.iter().zip(psi))
            .map(|(w, (p, q))| p.conj() * q * *w)
            .sum()
    }

    /// `(a, a*)` in the orthonormal basis: `a e_k = √(ħk) e_{k−1}`.
    pub fn orthonormal_ladder(&self) -> (ComplexMatrix, ComplexMatrix) {
        let a = ComplexMatrix::from_fn(self.dim, self.dim, |i, j| {
            if j == i + 1 {
                C64::new((self.hbar * j as f64).sqrt(), 0.0)
            } else {
                ZERO
            }
        });
        let a_dag = a.adjoint();
        (a, a_dag)
    }

    /// Maps unnormalized coefficients to orthonormal ones.
    pub fn to_orthonormal(&self, psi: &[C64]) -> Vec<C64> {
        self.norms().iter().zip(psi).map(|(w, c)| c * w.sqrt()).collect()
    }
}

/// First `count` eigenvalues of `H = ω a* a`.
pub fn oscillator_spectrum(f: &BosonFock, omega: f64, count: usize) -> Result<Vec<f64>> {
    if count > f.dim - 1 {
        return Err(Error::Truncation(format!(
            "{count} levels requested from a {}-level space (top level excluded)",
            f.dim
        )));
    }
    let (a, a_dag) = f.orthonormal_ladder();
    let h = (&a_dag * &a).scale_real(omega);
    let eig = eig_hermitian(&h)?;
    Ok(eig.values[..count].to_vec())
}

/// `|λ, z⟩` with coefficients `ψ_k = λ̄ z̄ᵏ` in the unnormalized basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentState {
    pub lambda: C64,
    pub z: C64,
    pub coeffs: Vec<C64>,
}

impl CoherentState {
    pub fn new(lambda: C64, z: C64, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::TooSmall(dim));
        }
        let mut coeffs = Vec::with_capacity(dim);
        let mut c = lambda.conj();
        for _ in 0..dim {
            coeffs.push(c);
            c *= z.conj();
        }
        Ok(Self { lambda, z, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Evolution under `H = ω a* a`: `e^{−iHt/ħ}` multiplies `ψ_k` by
    /// `e^{−iωkt}`, which relabels the state as `|λ, z e^{iωt}⟩`.
    pub fn evolve(&self, omega: f64, t: f64) -> Self {
        let z = self.z * C64::from_polar(1.0, omega * t);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * C64::from_polar(1.0, -omega * t * k as f64))
            .collect();
        Self {
            lambda: self.lambda,
            z,
            coeffs,
        }
    }
}

/// Closed form `λ'λ̄ e^{ħ z' z̄}`.
pub fn coherent_inner_exact(s1: &CoherentState, s2: &CoherentState, hbar: f64) -> C64 {
    s1.lambda * s2.lambda.conj() * (s1.z * s2.z.conj() * hbar).exp()
}

/// Truncated `⟨s1|s2⟩`; rejects truncations whose tail term exceeds 1e-14.
pub fn coherent_inner(s1: &CoherentState, s2: &CoherentState, hbar: f64) -> Result<C64> {
    if s1.dim() != s2.dim() {
        return Err(Error::Shape(format!(
            "coherent states of length {} and {}",
            s1.dim(),
            s2.dim()
        )));
    }
    let dim = s1.dim();
    let x = hbar * (s1.z * s2.z.conj()).norm();
    // |x|^dim / dim! in log space.
    let log_tail = dim as f64 * x.ln() - ln_factorial(dim);
    if x > 0.0 && log_tail > (1e-14f64).ln() {
        return Err(Error::Truncation(format!("{dim} levels too few for |ħ z' z̄| = {x}")));
    }
    let f = BosonFock::new(dim, hbar)?;
    Ok(f.inner(&s1.coeffs, &s2.coeffs))
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `σ(q)·σ(p)` for a normalized coherent state, with `q = (a + a*)/√2`,
/// `p = (a − a*)/(i√2)` in the orthonormal basis (`m = k = ω = 1`).
pub fn coherent_uncertainty(z: C64, levels: usize, hbar: f64) -> Result<f64> {
    let f = BosonFock::new(levels, hbar)?;
    let s = CoherentState::new(C64::new(1.0, 0.0), z, levels)?;
    let mut psi = f.to_orthonormal(&s.coeffs);
    let nrm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    psi.iter_mut().for_each(|c| *c /= nrm);
    let (a, a_dag) = f.orthonormal_ladder();
    let r2 = std::f64::consts::SQRT_2;
    let q = (&a + &a_dag).scale_real(1.0 / r2);
    let p = (&a - &a_dag).scale(C64::new(1.0, 0.0) / (I * r2));
    let expect = |m: &ComplexMatrix| -> Result<f64> {
        let mv = m.mat_vec(&psi)?;
        Ok(psi.iter().zip(&mv).map(|(x, y)| x.conj() * y).sum::<C64>().re)
    };
    let var = |m: &ComplexMatrix| -> Result<f64> {
        let mean = expect(m)?;
        Ok(expect(&(m * m))? - mean * mean)
    };
    Ok((var(&q)?.max(0.0) * var(&p)?.max(0.0)).sqrt())
}

/// Parameters of `[a, a*] = ħ(u h + v)` with ground weight `h|0⟩ = ħα|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HWData {
    pub u: f64,
    pub v: f64,
    pub alpha: f64,
    pub hbar: f64,
}

impl HWData {
    pub fn new(u: f64, v: f64, alpha: f64, hbar: f64) -> Result<Self> {
        if ![u, v, alpha, hbar].iter().all(|x| x.is_finite()) || hbar <= 0.0 {
            return Err(Error::Invalid(
                "highest-weight data must be finite with hbar > 0".into(),
            ));
        }
        Ok(Self { u, v, alpha, hbar })
    }

    /// Ground weight giving a representation of dimension `j_m + 1` when
    /// `u ≠ 0`: solves `j_m + 2(α + v/(ħu)) = 0`.
    pub fn case2_alpha(j_m: usize, u: f64, v: f64, hbar: f64) -> f64 {
        -0.5 * j_m as f64 - v / (hbar * u)
    }

    /// `c_k = v + uħ(α + (k−1)/2)`, the lowering coefficient `a|k⟩ = c_k|k−1⟩`.
    pub fn c(&self, k: usize) -> f64 {
        self.v + self.u * self.hbar * (self.alpha + 0.5 * (k as f64 - 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// The norm recursion reaches zero; the representation has this dimension.
    Finite(usize),
    /// All norms stay positive up to the level cap.
    Infinite,
}

#[derive(Debug, Clone)]
pub struct HighestWeightRep {
    pub data: HWData,
    /// Orthonormal-basis matrices, `a e_k = √(ħ k c_k) e_{k−1}`.
    pub a: ComplexMatrix,
    pub a_dag: ComplexMatrix,
    pub h: ComplexMatrix,
    /// Norms `N_k = ⟨k|k⟩` of the unnormalized vectors, with `ħ k N_k = c_k N_{k−1}`.
    pub norms: Vec<f64>,
    pub verdict: Verdict,
}

/// Builds the highest-weight representation generated from `|0⟩`.
///
/// The norm recursion `ħ k N_k = c_k N_{k−1}` decides the outcome: a zero
/// `c_k` truncates to dimension `k`, a negative one means no unitary
/// representation exists.
pub fn build_highest_weight(d: HWData, max_levels: usize) -> Result<HighestWeightRep> {
    if max_levels < 1 {
        return Err(Error::TooSmall(max_levels));
    }
    let mut norms = vec![1.0];
    let mut cs = vec![0.0];
    let mut verdict = Verdict::Infinite;
    for k in 1..max_levels {
        let ck = d.c(k);
        let scale = d.v.abs() + d.u.abs() * d.hbar * (d.alpha.abs() + k as f64);
        if ck.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            verdict = Verdict::Finite(k);
            break;
        }
        if ck < 0.0 {
            return Err(Error::NoUnitaryRep { level: k });
        }
        norms.push(norms[k - 1] * ck / (d.hbar * k as f64));
        cs.push(ck);
    }
    let dim = norms.len();
    let mut a = ComplexMatrix::zeros(dim, dim);
    for k in 1..dim {
        a[(k - 1, k)] = C64::new((d.hbar * k as f64 * cs[k]).sqrt(), 0.0);
    }
    let a_dag = a.adjoint();
    let h = ComplexMatrix::from_real_diag(&(0..dim).map(|k| d.hbar * (k as f64 + d.alpha)).collect::<Vec<_>>());
    Ok(HighestWeightRep {
        data: d,
        a,
        a_dag,
        h,
        norms,
        verdict,
    })
}
