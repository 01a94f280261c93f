use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use liequant::boson::{
    build_highest_weight, coherent_inner, coherent_inner_exact, coherent_uncertainty, oscillator_spectrum,
};
use liequant::fermion::{car_residual, verify_epsilon_identities};
use liequant::lie::{builtin_algebra_by_name, is_semisimple, killing_form, verify_jacobi};
use liequant::matrix::{eig_hermitian, ComplexMatrix};
use liequant::poisson::{integrate_rigid_body, write_trajectory_csv};
use liequant::rotations::{
    cover_check, covering_map, elementary, euler_zyz, lift_to_su2, rodrigues, rotation_angle, rotation_axis, Axis,
};
use liequant::spectra::{assign_lines_multistart, rydberg_lines};
use liequant::su2::{casimir, clebsch_gordan, IrrepDj};
use liequant::thermal::{planck_density, stefan_constant, wien_displacement_x, wien_peak_omega};
use liequant::{
    BosonFock, CoherentState, EnergyLevels, FermionFock, GibbsState, HWData, LieAlgebraBasis, PhysicalConstants,
    RigidBodyState, Rotation, SpectralLine, SpectrumDataset, Spin, Tolerance,
};

use crate::parse::numbers;
use crate::{Cli, Command, Global};

#[derive(Debug)]
pub enum CliError {
    Domain(liequant::Error),
    Io(String, io::Error),
    Input(String),
    CheckFailed(String),
}

impl CliError {
    pub fn token(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.token(),
            CliError::Io(..) => "io",
            CliError::Input(_) => "invalid_input",
            CliError::CheckFailed(_) => "check_failed",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Domain(e) => e.to_string(),
            CliError::Io(what, e) => format!("{what}: {e}"),
            CliError::Input(m) | CliError::CheckFailed(m) => m.clone(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        1
    }
}

impl From<liequant::Error> for CliError {
    fn from(e: liequant::Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Constants after applying the preset and the per-constant overrides.
fn constants(g: &Global) -> CliResult<PhysicalConstants> {
    let mut c = if g.natural {
        PhysicalConstants::NATURAL
    } else {
        PhysicalConstants::SI
    };
    c.kbar = g.kbar.unwrap_or(c.kbar);
    c.hbar = g.hbar.unwrap_or(c.hbar);
    c.c = g.c.unwrap_or(c.c);
    c.rydberg = g.rydberg.unwrap_or(c.rydberg);
    Ok(c.validated()?)
}

/// ħ for the dimensionless oscillator and line-assignment models.
fn model_hbar(g: &Global) -> CliResult<f64> {
    match g.hbar {
        Some(h) if !(h.is_finite() && h > 0.0) => Err(CliError::Input(format!("--hbar must be positive, got {h}"))),
        Some(h) => Ok(h),
        None => Ok(1.0),
    }
}

fn open_out(g: &Global) -> CliResult<Box<dyn Write>> {
    Ok(match &g.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("cannot create {}", p.display()), e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_err(e: io::Error) -> CliError {
    CliError::Io("write failed".into(), e)
}

fn emit_json<T: Serialize>(g: &Global, value: &T) -> CliResult<()> {
    let mut w = open_out(g)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Io("write failed".into(), e.into()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(io_err)
}

fn emit_csv(g: &Global, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> CliResult<()> {
    let mut w = open_out(g)?;
    f(&mut w).and_then(|_| w.flush()).map_err(io_err)
}

fn read_file(p: &Path) -> CliResult<String> {
    std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("cannot read {}", p.display()), e))
}

fn check(pass: bool, what: &str) -> CliResult<()> {
    if pass {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("{what} exceeds the tolerance")))
    }
}

fn real_rows(m: &ComplexMatrix) -> Vec<Vec<f64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].re).collect())
        .collect()
}

fn max_imag(m: &ComplexMatrix) -> f64 {
    m.data().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

fn rotation_from(matrix: Option<[[f64; 3]; 3]>, vector: Option<[f64; 3]>) -> CliResult<Rotation> {
    match (matrix, vector) {
        (Some(m), _) => Ok(Rotation::from_rows(m)?),
        (None, Some(a)) => Ok(rodrigues(a)),
        (None, None) => Err(CliError::Input("a matrix or a rotation vector is required".into())),
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let g = &cli.global;
    if !(g.tol.is_finite() && g.tol > 0.0) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", g.tol)));
    }
    match &cli.command {
        Command::Rotate { axis, angle, vector } => {
            let r = match (axis, angle, vector) {
                (Some(ax), Some(t), _) => elementary(ax.parse::<Axis>()?, *t),
                (_, _, Some(a)) => rodrigues(*a),
                _ => return Err(CliError::Input("--axis with --angle, or --vector, is required".into())),
            };
            emit_json(
                g,
                &json!({ "matrix": r.rows(), "axis": rotation_axis(&r), "angle": rotation_angle(&r) }),
            )
        }
        Command::Euler { matrix, vector } => {
            let r = rotation_from(*matrix, *vector)?;
            let e = euler_zyz(&r);
            emit_json(
                g,
                &json!({
                    "convention": "zyz",
                    "alpha": e.alpha,
                    "beta": e.beta,
                    "gamma": e.gamma,
                    "axis": rotation_axis(&r),
                    "angle": rotation_angle(&r),
                    "reconstruction_defect": e.to_rotation().max_abs_diff(&r),
                }),
            )
        }
        Command::Lift { matrix, vector } => {
            let r = rotation_from(*matrix, *vector)?;
            let u = lift_to_su2(&r);
            emit_json(
                g,
                &json!({ "x": [u.x.re, u.x.im], "y": [u.y.re, u.y.im], "cover_defect": covering_map(&u).max_abs_diff(&r) }),
            )
        }
        Command::CoverCheck { samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let rep = cover_check(&mut rng, *samples);
            let worst = rep.homomorphism_defect.max(rep.sign_defect).max(rep.lift_defect);
            let pass = worst <= g.tol && rep.kernel_violations == 0;
            emit_json(g, &json!({ "seed": g.seed, "tol": g.tol, "report": rep, "pass": pass }))?;
            check(pass, "covering-map defect")
        }
        Command::AlgebraVerify { name, file } => {
            let (basis, residual) = match (name, file) {
                (Some(n), _) => {
                    let real = builtin_algebra_by_name(n)?;
                    let res = real.residual();
                    (real.basis, Some(res))
                }
                (None, Some(p)) => {
                    let b: LieAlgebraBasis = serde_json::from_str(&read_file(p)?)
                        .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
                    (b, None)
                }
                (None, None) => return Err(CliError::Input("--name or --file is required".into())),
            };
            let jacobi = verify_jacobi(&basis);
            let antisymmetry = basis.antisymmetry_defect();
            let k = killing_form(&basis);
            let semisimple = is_semisimple(&basis, Tolerance::abs(g.tol.max(1e-9)));
            let pass = jacobi <= g.tol && antisymmetry <= g.tol && residual.is_none_or(|r| r <= g.tol);
            emit_json(
                g,
                &json!({
                    "name": basis.name(),
                    "dim": basis.dim(),
                    "names": basis.names(),
                    "jacobi_defect": jacobi,
                    "antisymmetry_defect": antisymmetry,
                    "realization_residual": residual,
                    "killing_form": real_rows(&k),
                    "killing_form_max_imag": max_imag(&k),
                    "semisimple": semisimple,
                    "pass": pass,
                }),
            )?;
            check(pass, "structure-constant defect")
        }
        Command::Rigidbody {
            inertia,
            j,
            dt,
            steps,
            every,
        } => {
            if *every == 0 {
                return Err(CliError::Input("--every must be at least 1".into()));
            }
            let s0 = RigidBodyState::new(*j, *inertia, 0.0)?;
            let traj = integrate_rigid_body(&s0, *dt, *steps);
            let kept: Vec<RigidBodyState> = traj.into_iter().step_by(*every).collect();
            emit_csv(g, |w| write_trajectory_csv(w, &kept))
        }
        Command::FockSpectrum { levels, omega, count } => {
            let hbar = model_hbar(g)?;
            let f = BosonFock::new(*levels, hbar)?;
            let n = count.unwrap_or(levels.saturating_sub(1));
            let spec = oscillator_spectrum(&f, *omega, n)?;
            emit_json(
                g,
                &json!({ "levels": levels, "omega": omega, "hbar": hbar, "eigenvalues": spec }),
            )
        }
        Command::Coherent {
            z,
            lambda,
            z2,
            lambda2,
            dim,
        } => {
            let hbar = model_hbar(g)?;
            let s1 = CoherentState::new(*lambda, *z, *dim)?;
            let s2 = CoherentState::new(lambda2.unwrap_or(*lambda), z2.unwrap_or(*z), *dim)?;
            let truncated = coherent_inner(&s1, &s2, hbar)?;
            let exact = coherent_inner_exact(&s1, &s2, hbar);
            let dqdp = coherent_uncertainty(*z, *dim, hbar)?;
            emit_json(
                g,
                &json!({
                    "hbar": hbar,
                    "inner_truncated": [truncated.re, truncated.im],
                    "inner_exact": [exact.re, exact.im],
                    "inner_error": (truncated - exact).norm(),
                    "uncertainty_product": dqdp,
                    "minimum": hbar / 2.0,
                }),
            )
        }
        Command::HighestWeight {
            u,
            v,
            alpha,
            jm,
            max_levels,
        } => {
            let hbar = model_hbar(g)?;
            let alpha = match (alpha, jm) {
                (Some(a), _) => *a,
                (None, Some(m)) => HWData::case2_alpha(*m, *u, *v, hbar),
                (None, None) => 0.0,
            };
            let d = HWData::new(*u, *v, alpha, hbar)?;
            let rep = build_highest_weight(d, *max_levels)?;
            let n = rep.norms.len();
            let commutator_defect = {
                let lhs = &(&rep.a * &rep.a_dag) - &(&rep.a_dag * &rep.a);
                let rhs = (&rep.h.scale_real(*u) + &ComplexMatrix::identity(n).scale_real(*v)).scale_real(hbar);
                // The top row and column see the truncation when the verdict is infinite.
                let m = if matches!(rep.verdict, liequant::Verdict::Finite(_)) {
                    n
                } else {
                    n.saturating_sub(1)
                };
                (0..m)
                    .flat_map(|i| (0..m).map(move |j| (i, j)))
                    .map(|(i, j)| (lhs[(i, j)] - rhs[(i, j)]).norm())
                    .fold(0.0, f64::max)
            };
            let weights: Vec<f64> = rep.h.diagonal().iter().map(|z| z.re).collect();
            emit_json(
                g,
                &json!({
                    "data": d,
                    "verdict": rep.verdict,
                    "levels": n,
                    "norms": rep.norms,
                    "weights": weights,
                    "commutator_defect": commutator_defect,
                }),
            )
        }
        Command::FermionCheck { modes } => {
            let f = FermionFock::new(*modes)?;
            let car = car_residual(&f);
            let (checks, violations) = verify_epsilon_identities(*modes);
            let pass = car <= g.tol && violations.is_empty();
            emit_json(
                g,
                &json!({
                    "modes": modes,
                    "dim": f.dim(),
                    "car_residual": car,
                    "epsilon_checks": checks,
                    "epsilon_violations": violations,
                    "pass": pass,
                }),
            )?;
            check(pass, "anticommutation defect")
        }
        Command::Irrep { j } => {
            let spin: Spin = j.parse()?;
            let rep = IrrepDj::new(spin);
            let c = casimir(&rep);
            let defect = c.max_abs_diff(&ComplexMatrix::identity(rep.dim()).scale_real(spin.casimir_value()));
            emit_json(
                g,
                &json!({
                    "j": spin.to_string(),
                    "dim": rep.dim(),
                    "weights": rep.t3.diagonal().iter().map(|z| z.re).collect::<Vec<_>>(),
                    "l_plus": real_rows(&rep.l_plus),
                    "casimir": spin.casimir_value(),
                    "casimir_defect": defect,
                }),
            )
        }
        Command::Cg { k, l } => {
            let (k, l): (Spin, Spin) = (k.parse()?, l.parse()?);
            let cg = clebsch_gordan(k, l)?;
            let v = &cg.isometry;
            let unitarity = (&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(v.cols()));
            let components: Vec<Value> = cg
                .components
                .iter()
                .map(|(j, m)| json!({ "j": j.to_string(), "multiplicity": m }))
                .collect();
            emit_json(
                g,
                &json!({
                    "k": k.to_string(),
                    "l": l.to_string(),
                    "components": components,
                    "coefficients": real_rows(v),
                    "coefficients_max_imag": max_imag(v),
                    "unitarity_defect": unitarity,
                }),
            )
        }
        Command::Gibbs {
            diag,
            file,
            beta,
            temperature,
        } => {
            let h = match (diag, file) {
                (Some(d), _) => ComplexMatrix::from_real_diag(&numbers(d).map_err(CliError::Input)?),
                (None, Some(p)) => serde_json::from_str::<ComplexMatrix>(&read_file(p)?)
                    .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
                (None, None) => return Err(CliError::Input("--diag or --file is required".into())),
            };
            let beta = match (beta, temperature) {
                (Some(b), _) => *b,
                (None, Some(t)) => 1.0 / (constants(g)?.kbar * t),
                (None, None) => return Err(CliError::Input("--beta or --temperature is required".into())),
            };
            let st = GibbsState::new(h, beta)?;
            let spectrum = eig_hermitian(st.hamiltonian())?.values;
            emit_json(
                g,
                &json!({
                    "beta": beta,
                    "spectrum": spectrum,
                    "probabilities": st.probabilities(),
                    "log_partition": st.log_partition(),
                    "partition": st.partition().ok(),
                    "mean_energy": st.mean_energy(),
                    "entropy_over_k": st.entropy_over_k(),
                }),
            )
        }
        Command::Blackbody {
            temperature,
            volume,
            omega_min,
            omega_max,
            points,
        } => {
            let c = constants(g)?;
            if !(*temperature > 0.0 && *volume > 0.0) || *points < 2 {
                return Err(CliError::Input(
                    "need temperature > 0, volume > 0 and at least two points".into(),
                ));
            }
            let scale = c.kbar * temperature / c.hbar;
            let lo = omega_min.unwrap_or(1e-2 * scale);
            let hi = omega_max.unwrap_or(1e2 * scale);
            if !(lo > 0.0 && hi > lo) {
                return Err(CliError::Input(format!(
                    "need 0 < omega_min < omega_max, got {lo}, {hi}"
                )));
            }
            let (ll, lh) = (lo.ln(), hi.ln());
            let n = *points;
            emit_csv(g, |w| {
                writeln!(w, "omega,f_omega")?;
                for i in 0..n {
                    let omega = (ll + (lh - ll) * i as f64 / (n - 1) as f64).exp();
                    writeln!(
                        w,
                        "{:.16e},{:.16e}",
                        omega,
                        planck_density(omega, *temperature, *volume, &c)
                    )?;
                }
                Ok(())
            })
        }
        Command::Wien { temperature } => {
            let root = wien_displacement_x();
            let peak = match temperature {
                Some(t) => Some(wien_peak_omega(*t, &constants(g)?)),
                None => None,
            };
            emit_json(
                g,
                &json!({ "x": root.x, "residual": root.residual, "iterations": root.iterations, "peak_omega": peak }),
            )
        }
        Command::Stefan => {
            let c = constants(g)?;
            emit_json(
                g,
                &json!({ "sigma": stefan_constant(&c), "kbar": c.kbar, "hbar": c.hbar, "c": c.c }),
            )
        }
        Command::Rydberg { kmax } => {
            let c = constants(g)?;
            let lines = rydberg_lines(*kmax, c.rydberg)?;
            emit_csv(g, |w| {
                writeln!(w, "k,l,wavenumber")?;
                for line in &lines {
                    writeln!(w, "{},{},{:.16e}", line.k, line.l, line.wavenumber)?;
                }
                Ok(())
            })
        }
        Command::Assign {
            data,
            levels,
            max_iters,
            starts,
            scale,
        } => {
            let hbar = model_hbar(g)?;
            let mut rdr =
                csv::Reader::from_path(data).map_err(|e| CliError::Input(format!("{}: {e}", data.display())))?;
            let lines: Vec<SpectralLine> = rdr
                .deserialize()
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Input(format!("{}: {e}", data.display())))?;
            let dataset = SpectrumDataset::new(lines)?;
            let init: LevelsFile = serde_json::from_str(&read_file(levels)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", levels.display())))?;
            let init = EnergyLevels::new(init.into_vec(), "energy")?;
            let sol = assign_lines_multistart(&dataset, &init, hbar, *max_iters, *starts, *scale, g.seed)?;
            emit_json(g, &sol)
        }
    }
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum LevelsFile {
    Bare(Vec<f64>),
    Wrapped { levels: Vec<f64> },
}

impl LevelsFile {
    fn into_vec(self) -> Vec<f64> {
        match self {
            LevelsFile::Bare(v) | LevelsFile::Wrapped { levels: v } => v,
        }
    }
}
