//! Finite-dimensional quantum statistical mechanics and black-body formulas.
//!
//! Every thermal quantity is evaluated in the eigenbasis of the Hermitian
//! generator, with eigenvalues shifted by their minimum so that Boltzmann
//! weights never overflow.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{eig_hermitian, ComplexMatrix, HermitianEigen, C64, ZERO};

/// Physical constants in SI units unless the natural preset is used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Boltzmann constant, J/K.
    pub kbar: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Rydberg constant, 1/m.
    pub rydberg: f64,
    /// Molar gas constant, J/(mol·K).
    pub gas_constant: f64,
}

impl PhysicalConstants {
    pub const SI: PhysicalConstants = PhysicalConstants {
        kbar: 1.38065e-23,
        hbar: 1.0545718e-34,
        c: 2.99792458e8,
        rydberg: 1.0973731568e7,
        gas_constant: 8.314462618,
    };

    /// `k̄ = ħ = c = 1`; the Rydberg and gas constants are also set to 1.
    pub const NATURAL: PhysicalConstants = PhysicalConstants {
        kbar: 1.0,
        hbar: 1.0,
        c: 1.0,
        rydberg: 1.0,
        gas_constant: 1.0,
    };

    pub fn validated(self) -> Result<Self> {
        let all = [self.kbar, self.hbar, self.c, self.rydberg, self.gas_constant];
        if all.iter().all(|x| x.is_finite() && *x > 0.0) {
            Ok(self)
        } else {
            Err(Error::Invalid(format!("physical constants must be positive: {self:?}")))
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}

/// The Gibbs state `ρ = e^{−βH}/Z` with its eigendecomposition cached.
#[derive(Debug, Clone)]
pub struct GibbsState {
    h: ComplexMatrix,
    beta: f64,
    eigen: HermitianEigen,
    /// Occupation probabilities of the eigenvectors, summing to 1.
    probs: Vec<f64>,
    log_z: f64,
}

impl GibbsState {
    pub fn new(h: ComplexMatrix, beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Invalid(format!("beta must be positive, got {beta}")));
        }
        if !h.is_finite() {
            return Err(Error::Range("Hamiltonian has non-finite entries".into()));
        }
        let eigen = eig_hermitian(&h)?;
        let scaled: Vec<f64> = eigen.values.iter().map(|l| beta * l).collect();
        let (probs, log_z) = boltzmann(&scaled)?;
        Ok(Self {
            h,
            beta,
            eigen,
            probs,
            log_z,
        })
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn log_partition(&self) -> f64 {
        self.log_z
    }

    pub fn partition(&self) -> Result<f64> {
        let z = self.log_z.exp();
        if z.is_finite() {
            Ok(z)
        } else {
            Err(Error::Range(format!(
                "partition function overflows: log Z = {}",
                self.log_z
            )))
        }
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        let v = &self.eigen.vectors;
        let vp = ComplexMatrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * self.probs[j]);
        &vp * &v.adjoint()
    }

    /// `tr(ρ g)`.
    pub fn value(&self, g: &ComplexMatrix) -> Result<C64> {
        let n = self.h.rows();
        if g.rows() != n || g.cols() != n {
            return Err(Error::Shape(format!(
                "observable is {}x{}, state is {n}x{n}",
                g.rows(),
                g.cols()
            )));
        }
        let v = &self.eigen.vectors;
        let mut acc = ZERO;
        for (m, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut diag = ZERO;
            for i in 0..n {
                let mut gv = ZERO;
                for j in 0..n {
                    gv += g[(i, j)] * v[(j, m)];
                }
                diag += v[(i, m)].conj() * gv;
            }
            acc += diag * p;
        }
        Ok(acc)
    }

    pub fn mean_energy(&self) -> f64 {
        self.probs.iter().zip(&self.eigen.values).map(|(p, l)| p * l).sum()
    }

    /// `S/k̄ = β⟨H⟩ + log Z`.
    pub fn entropy_over_k(&self) -> f64 {
        -self.probs.iter().filter(|&&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>()
    }
}

/// Normalized weights `e^{−x_m}/Σe^{−x}` and `log Σ e^{−x}`.
fn boltzmann(x: &[f64]) -> Result<(Vec<f64>, f64)> {
    let min = x.iter().copied().fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return Err(Error::Range("non-finite exponent".into()));
    }
    let w: Vec<f64> = x.iter().map(|v| (-(v - min)).exp()).collect();
    let s: f64 = w.iter().sum();
    let log_z = -min + s.ln();
    if !log_z.is_finite() {
        return Err(Error::Range(format!("log partition is not finite: {log_z}")));
    }
    Ok((w.iter().map(|v| v / s).collect(), log_z))
}

/// `Z = tr e^{−βH}`.
pub fn partition_function(h: &ComplexMatrix, beta: f64) -> Result<f64> {
    GibbsState::new(h.clone(), beta)?.partition()
}

pub fn gibbs_value(state: &GibbsState, g: &ComplexMatrix) -> Result<C64> {
    state.value(g)
}

/// Two-level mean energy `E/(e^{E/k̄T} + 1)`.
pub fn two_level_mean_energy(e: f64, t: f64, consts: &PhysicalConstants) -> f64 {
    e / ((e / (consts.kbar * t)).exp() + 1.0)
}

/// Two-level heat capacity `(E²/k̄T²) e^{x}/(e^{x}+1)²`, `x = E/k̄T`.
pub fn schottky_capacity(e: f64, t: f64, consts: &PhysicalConstants) -> f64 {
    let x = e / (consts.kbar * t);
    // e^x/(e^x+1)² = 1/(4 cosh²(x/2)), finite for all x.
    let c = (0.5 * x).cosh();
    consts.kbar * x * x / (4.0 * c * c)
}

/// `W(f) = −log tr e^{−f}`.
pub fn generating_functional(f: &ComplexMatrix) -> Result<f64> {
    let eigen = eig_hermitian(f)?;
    Ok(-boltzmann(&eigen.values)?.1)
}

/// `⟨g⟩_f = tr(e^{−f} g)/tr e^{−f}`.
pub fn expectation(f: &ComplexMatrix, g: &ComplexMatrix) -> Result<C64> {
    GibbsState::new(f.clone(), 1.0)?.value(g)
}

/// `φ(x) = (eˣ − 1)/x`, with a Taylor series near 0.
pub fn phi(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * (1.0 / 2.0 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x * (1.0 / 120.0 + x / 720.0))))
    } else {
        x.exp_m1() / x
    }
}

/// `E_f h = ∫₀¹ e^{−sf} h e^{sf} ds`, entrywise `h_{mn} φ(λ_n − λ_m)` in the
/// eigenbasis of `f`.
pub fn kubo_transform(f: &ComplexMatrix, h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eigen = eig_hermitian(f)?;
    check_shape(f, h)?;
    let l = &eigen.values;
    let hb = eigen.to_eigenbasis(h);
    let k = ComplexMatrix::from_fn(hb.rows(), hb.cols(), |m, n| hb[(m, n)] * phi(l[n] - l[m]));
    Ok(eigen.from_eigenbasis(&k))
}

/// Kubo inner product `⟨g; h⟩_f = ⟨g E_f h⟩_f`.
pub fn kubo_inner(f: &ComplexMatrix, g: &ComplexMatrix, h: &ComplexMatrix) -> Result<C64> {
    let state = GibbsState::new(f.clone(), 1.0)?;
    check_shape(f, g)?;
    check_shape(f, h)?;
    let l = &state.eigen.values;
    let p = &state.probs;
    let gb = state.eigen.to_eigenbasis(g);
    let hb = state.eigen.to_eigenbasis(h);
    let n = l.len();
    let mut acc = ZERO;
    for m in 0..n {
        for k in 0..n {
            // p_m φ(λ_m − λ_k) = (p_k − p_m)/(λ_m − λ_k), symmetric in m, k.
            let x = l[m] - l[k];
            let w = if x.abs() < 1e-4 {
                p[m] * phi(x)
            } else {
                (p[k] - p[m]) / x
            };
            acc += gb[(m, k)] * hb[(k, m)] * w;
        }
    }
    Ok(acc)
}

fn check_shape(f: &ComplexMatrix, g: &ComplexMatrix) -> Result<()> {
    if f.rows() != g.rows() || f.cols() != g.cols() {
        return Err(Error::Shape(format!(
            "{}x{} vs {}x{}",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols()
        )));
    }
    Ok(())
}

/// `W(f) + ⟨g − f⟩_f − W(g) ≥ 0`, with equality iff `g − f` is a multiple of 1.
pub fn gibbs_bogoliubov_gap(f: &ComplexMatrix, g: &ComplexMatrix) -> Result<f64> {
    check_shape(f, g)?;
    let diff = g - f;
    Ok(generating_functional(f)? + expectation(f, &diff)?.re - generating_functional(g)?)
}

/// `res(g) = √(⟨g²⟩/⟨g⟩² − 1)`.
pub fn limit_resolution(state: &GibbsState, g: &ComplexMatrix) -> Result<f64> {
    let mean = state.value(g)?;
    if mean.norm() <= 1e-12 {
        return Err(Error::ZeroMean);
    }
    let second = state.value(&(g * g))?;
    let ratio = (second / (mean * mean)).re - 1.0;
    Ok(ratio.max(0.0).sqrt())
}

/// `H − μN` for a caller-supplied particle-number matrix.
pub fn effective_hamiltonian(h: &ComplexMatrix, mu: f64, n: &ComplexMatrix) -> Result<ComplexMatrix> {
    h.checked_sub(&n.scale_real(mu))
}

/// Black-body spectral energy `(Vħ/π²c³) ω³/(e^{ħω/k̄T} − 1)`.
pub fn planck_density(omega: f64, t: f64, volume: f64, consts: &PhysicalConstants) -> f64 {
    let x = consts.hbar * omega / (consts.kbar * t);
    volume * consts.hbar / (PI * PI * consts.c.powi(3)) * omega.powi(3) / x.exp_m1()
}

/// Positive root of `3 − x = 3e^{−x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WienRoot {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Newton iteration from `x = 3`.
pub fn wien_displacement_x() -> WienRoot {
    let g = |x: f64| 3.0 - x - 3.0 * (-x).exp();
    let mut x = 3.0f64;
    let mut iterations = 0;
    for _ in 0..50 {
        iterations += 1;
        let step = g(x) / (-1.0 + 3.0 * (-x).exp());
        x -= step;
        if step.abs() <= 1e-16 * x {
            break;
        }
    }
    WienRoot {
        x,
        residual: g(x).abs(),
        iterations,
    }
}

/// Frequency of maximal spectral energy, `x k̄T/ħ`.
pub fn wien_peak_omega(t: f64, consts: &PhysicalConstants) -> f64 {
    wien_displacement_x().x * consts.kbar * t / consts.hbar
}

/// `σ = π²k̄⁴/(60ħ³c²)`.
pub fn stefan_constant(consts: &PhysicalConstants) -> f64 {
    PI * PI * consts.kbar.powi(4) / (60.0 * consts.hbar.powi(3) * consts.c.powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoseIntegral {
    pub value: f64,
    pub quadrature_error: f64,
    pub tail: f64,
}

/// `∫₀^∞ x³/(eˣ − 1) dx` as adaptive quadrature on `[0, X]` plus the exact tail
/// `Σ_n e^{−nX}(X³/n + 3X²/n² + 6X/n³ + 6/n⁴)`.
pub fn bose_integral_cubic() -> BoseIntegral {
    const CUT: f64 = 40.0;
    let f = |x: f64| if x == 0.0 { 0.0 } else { x.powi(3) / x.exp_m1() };
    let q = quadrature::double_exponential::integrate(f, 0.0, CUT, 1e-13);
    let tail: f64 = (1..=20)
        .map(|n| {
            let n = f64::from(n);
            (-n * CUT).exp() * (CUT.powi(3) / n + 3.0 * CUT * CUT / n.powi(2) + 6.0 * CUT / n.powi(3) + 6.0 / n.powi(4))
        })
        .sum();
    BoseIntegral {
        value: q.integral + tail,
        quadrature_error: q.error_estimate,
        tail,
    }
}

/// `k̄ N_c Σ x_j log x_j`; the entropy gained by mixing is its negation.
pub fn entropy_of_mixing(fractions: &[f64], total_moles: f64, consts: &PhysicalConstants) -> Result<f64> {
    if fractions.is_empty() || fractions.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::BadFractions);
    }
    let sum: f64 = fractions.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::BadFractions);
    }
    Ok(consts.kbar * total_moles * fractions.iter().map(|x| x * x.ln()).sum::<f64>())
}

/// Pressure of one mole of ideal gas, `P = RT/V`.
pub fn ideal_gas_pressure(volume: f64, t: f64, consts: &PhysicalConstants) -> Result<f64> {
    if !(volume > 0.0 && t > 0.0) {
        return Err(Error::Invalid("volume and temperature must be positive".into()));
    }
    Ok(consts.gas_constant * t / volume)
}
