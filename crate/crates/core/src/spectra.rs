//! Spectral lines: difference spectra, Rydberg series, Lorentz response and
//! least-squares assignment of observed lines to level pairs.
//!
//! The assignment objective is
//! `S(E, j, k) = Σ_l q_l ((E_{j(l)} − E_{k(l)})/(ħω_l) − 1)²`.
//! Level indices in solutions are 1-based, levels ascending.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

/// Strictly ascending energy levels with a unit tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevels {
    values: Vec<f64>,
    #[serde(default)]
    unit: String,
}

impl EnergyLevels {
    /// Sorts and merges levels closer than `1e-12·span`.
    pub fn new(mut values: Vec<f64>, unit: impl Into<String>) -> Result<Self> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("energy levels must be finite".into()));
        }
        values.sort_by(f64::total_cmp);
        let span = values.last().zip(values.first()).map_or(0.0, |(a, b)| a - b);
        let tol = 1e-12 * span;
        values.dedup_by(|a, b| (*a - *b).abs() <= tol);
        Ok(Self {
            values,
            unit: unit.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn unit(&self) -> &str {
        &self.unit
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// All positive `(E_j − E_k)/ħ`, ascending, with multiplicity.
pub fn difference_spectrum(levels: &EnergyLevels, hbar: f64) -> Result<Vec<f64>> {
    let e = levels.values();
    if e.len() < 2 {
        return Err(Error::TooFew(e.len()));
    }
    let mut out = Vec::with_capacity(e.len() * (e.len() - 1) / 2);
    for j in 1..e.len() {
        for k in 0..j {
            out.push((e[j] - e[k]) / hbar);
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// A hydrogen line between shells `k < l`, as a wavenumber in the unit of `R_H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RydbergLine {
    pub k: u32,
    pub l: u32,
    pub wavenumber: f64,
}

/// `R_H(1/k² − 1/l²)` for `1 ≤ k < l ≤ k_max`.
pub fn rydberg_lines(k_max: u32, rydberg: f64) -> Result<Vec<RydbergLine>> {
    if k_max < 2 {
        return Err(Error::TooFew(k_max as usize));
    }
    let mut out = Vec::new();
    for k in 1..k_max {
        for l in k + 1..=k_max {
            let inv = |n: u32| 1.0 / f64::from(n * n);
            out.push(RydbergLine {
                k,
                l,
                wavenumber: rydberg * (inv(k) - inv(l)),
            });
        }
    }
    Ok(out)
}

/// `|F|² / ((k − mω²)² + (cω)²)`.
pub fn lorentz_response(force: C64, omega: f64, mass: f64, damping: f64, stiffness: f64) -> Result<f64> {
    let detune = stiffness - mass * omega * omega;
    let denom = detune * detune + (damping * omega).powi(2);
    if denom == 0.0 {
        return Err(Error::UndampedResonance);
    }
    Ok(force.norm_sqr() / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub omega: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDataset {
    lines: Vec<SpectralLine>,
}

impl SpectrumDataset {
    pub fn new(lines: Vec<SpectralLine>) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::TooFew(0));
        }
        if let Some(bad) = lines
            .iter()
            .find(|l| !(l.omega > 0.0 && l.weight > 0.0 && l.omega.is_finite() && l.weight.is_finite()))
        {
            return Err(Error::Invalid(format!(
                "lines need positive frequency and weight: {bad:?}"
            )));
        }
        Ok(Self { lines })
    }

    /// Unit weights.
    pub fn from_omegas(omegas: &[f64]) -> Result<Self> {
        Self::new(
            omegas
                .iter()
                .map(|&omega| SpectralLine { omega, weight: 1.0 })
                .collect(),
        )
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// Upper and lower level of a line, 1-based, `upper > lower`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinePair {
    pub upper: usize,
    pub lower: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    AssignmentsRepeated,
    MaxIters,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentSolution {
    /// Ascending, lowest level at 0.
    pub levels: Vec<f64>,
    /// One pair per line, in dataset order.
    pub assignments: Vec<LinePair>,
    pub objective: f64,
    pub iterations: usize,
    pub stop: StopReason,
    /// 1-based indices of levels the refit could not place; they keep their
    /// previous values.
    pub unidentifiable_levels: Vec<usize>,
    /// Objective after the initial assignment and after every half-step.
    pub trace: Vec<f64>,
}

/// `S(E, j, k)` with 1-based level indices.
pub fn objective(levels: &[f64], data: &SpectrumDataset, assignments: &[LinePair], hbar: f64) -> f64 {
    data.lines
        .iter()
        .zip(assignments)
        .map(|(line, p)| line_term(levels, line, p.upper - 1, p.lower - 1, hbar))
        .sum()
}

fn line_term(e: &[f64], line: &SpectralLine, j: usize, k: usize, hbar: f64) -> f64 {
    let r = (e[j] - e[k]) / (hbar * line.omega) - 1.0;
    line.weight * r * r
}

/// Best pair for each line; ties go to the smallest `j`, then smallest `k`.
fn assign(e: &[f64], data: &SpectrumDataset, hbar: f64) -> Vec<LinePair> {
    data.lines
        .iter()
        .map(|line| {
            let mut best = (f64::INFINITY, 1, 0);
            for j in 1..e.len() {
                for k in 0..j {
                    let t = line_term(e, line, j, k, hbar);
                    if t < best.0 {
                        best = (t, j, k);
                    }
                }
            }
            LinePair {
                upper: best.1 + 1,
                lower: best.2 + 1,
            }
        })
        .collect()
}

/// Weighted least squares over the levels with fixed assignments.
///
/// Levels are grouped into connected components of the graph whose edges
/// are assigned lines. Each component keeps its lowest-indexed level fixed
/// at its current value (level 1 at 0 for its component) and refits the
/// rest. Anchors other than level 1 and isolated levels are reported as
/// unidentifiable.
fn refit(e: &[f64], data: &SpectrumDataset, pairs: &[LinePair], hbar: f64) -> Result<(Vec<f64>, Vec<usize>)> {
    let n = e.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for p in pairs {
        let a = find(&mut parent, p.upper - 1);
        let b = find(&mut parent, p.lower - 1);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut out = e.to_vec();
    out[0] = 0.0;
    let mut unidentifiable = Vec::new();
    for anchor in 0..n {
        if roots[anchor] != anchor {
            continue;
        }
        let members: Vec<usize> = (anchor + 1..n).filter(|&i| roots[i] == anchor).collect();
        if anchor > 0 {
            unidentifiable.push(anchor + 1);
        }
        if members.is_empty() {
            continue;
        }
        let slot = |i: usize| members.binary_search(&i).ok();
        let m = members.len();
        let mut a = vec![0.0; m * m];
        let mut b = vec![0.0; m];
        for (line, p) in data.lines.iter().zip(pairs) {
            let (j, k) = (p.upper - 1, p.lower - 1);
            if roots[j] != anchor {
                continue;
            }
            // Row coefficients s·(E_j − E_k) with s = 1/(ħω); target 1.
            let s = 1.0 / (hbar * line.omega);
            let mut row: Vec<(usize, f64)> = Vec::with_capacity(2);
            let mut rhs = 1.0;
            for (idx, sign) in [(j, s), (k, -s)] {
                match slot(idx) {
                    Some(col) => row.push((col, sign)),
                    None => rhs -= sign * out[idx],
                }
            }
            for &(r, vr) in &row {
                b[r] += line.weight * vr * rhs;
                for &(c, vc) in &row {
                    a[r * m + c] += line.weight * vr * vc;
                }
            }
        }
        let mat = ComplexMatrix::from_fn(m, m, |r, c| C64::new(a[r * m + c], 0.0));
        let rhs: Vec<C64> = b.iter().map(|&x| C64::new(x, 0.0)).collect();
        let sol = mat.solve(&rhs)?;
        for (&i, x) in members.iter().zip(sol) {
            out[i] = x.re;
        }
    }
    Ok((out, unidentifiable))
}

/// Sorts levels ascending, remaps the pairs accordingly, shifts the lowest level to 0.
fn normalize(e: &mut Vec<f64>, pairs: &mut [LinePair]) {
    let mut order: Vec<usize> = (0..e.len()).collect();
    order.sort_by(|&a, &b| e[a].total_cmp(&e[b]));
    let mut rank = vec![0; e.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let base = e[order[0]];
    *e = order.iter().map(|&i| e[i] - base).collect();
    for p in pairs.iter_mut() {
        let (a, b) = (rank[p.upper - 1], rank[p.lower - 1]);
        *p = LinePair {
            upper: a.max(b) + 1,
            lower: a.min(b) + 1,
        };
    }
}

/// Alternating least squares: assign lines to level pairs, then refit levels
/// with the lowest level pinned to 0, until the assignment repeats or
/// `max_iters` refits have run.
pub fn assign_lines(
    data: &SpectrumDataset,
    initial: &EnergyLevels,
    hbar: f64,
    max_iters: usize,
) -> Result<AssignmentSolution> {
    if initial.len() < 2 {
        return Err(Error::TooFew(initial.len()));
    }
    if max_iters == 0 {
        return Err(Error::Invalid("max_iters must be at least 1".into()));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::Invalid(format!("hbar must be positive, got {hbar}")));
    }
    let mut e: Vec<f64> = initial.values().iter().map(|x| x - initial.values()[0]).collect();
    let mut pairs = assign(&e, data, hbar);
    let mut trace = vec![objective(&e, data, &pairs, hbar)];
    let mut unidentifiable = Vec::new();
    let mut stop = StopReason::MaxIters;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let (mut fitted, unid) = refit(&e, data, &pairs, hbar)?;
        let mut refit_pairs = pairs.clone();
        normalize(&mut fitted, &mut refit_pairs);
        let after_refit = objective(&fitted, data, &refit_pairs, hbar);
        if after_refit > trace[trace.len() - 1] {
            // Roundoff can lift a converged optimum; keep the better point.
            break;
        }
        e = fitted;
        pairs = refit_pairs;
        unidentifiable = unid;
        trace.push(after_refit);
        let next = assign(&e, data, hbar);
        trace.push(objective(&e, data, &next, hbar));
        if next == pairs {
            stop = StopReason::AssignmentsRepeated;
            break;
        }
        pairs = next;
    }
    let objective = objective(&e, data, &pairs, hbar);
    Ok(AssignmentSolution {
        levels: e,
        assignments: pairs,
        objective,
        iterations,
        stop,
        unidentifiable_levels: unidentifiable,
        trace,
    })
}

/// Runs `starts` solves from independent perturbations of `initial` (uniform in
/// `±scale`, one seeded stream per start; start 0 is unperturbed) and keeps
/// the lowest objective, earliest start on ties.
pub fn assign_lines_multistart(
    data: &SpectrumDataset,
    initial: &EnergyLevels,
    hbar: f64,
    max_iters: usize,
    starts: usize,
    scale: f64,
    seed: u64,
) -> Result<AssignmentSolution> {
    let solves: Vec<Result<AssignmentSolution>> = (0..starts.max(1) as u64)
        .into_par_iter()
        .map(|s| {
            let levels = if s == 0 {
                initial.clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s));
                let v = initial
                    .values()
                    .iter()
                    .map(|x| x + rng.random_range(-scale..=scale))
                    .collect();
                EnergyLevels::new(v, initial.unit())?
            };
            assign_lines(data, &levels, hbar, max_iters)
        })
        .collect();
    let mut best: Option<AssignmentSolution> = None;
    for sol in solves {
        let sol = sol?;
        if best.as_ref().is_none_or(|b| sol.objective < b.objective) {
            best = Some(sol);
        }
    }
    Ok(best.expect("at least one start"))
}
