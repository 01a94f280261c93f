mod commands;
mod parse;

use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::parse::{complex, matrix3, vec3};
use liequant::C64;

#[derive(Debug, Parser)]
#[command(
    name = "liequant",
    version,
    about = "Lie algebras, rotations, Fock spaces, Gibbs states and spectra from the command line"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, env = "LIEQUANT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Pass/fail threshold for the verification subcommands.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Use k̄ = ħ = c = 1 (and unit Rydberg and gas constants) before applying overrides.
    #[arg(long, global = true)]
    pub natural: bool,
    /// Boltzmann constant in J/K.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kbar: Option<f64>,
    /// Reduced Planck constant in J·s; the oscillator and spectral-line subcommands default to ħ = 1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub hbar: Option<f64>,
    /// Speed of light in m/s.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Rydberg constant in 1/m.
    #[arg(long = "rydberg", global = true, allow_hyphen_values = true)]
    pub rydberg: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rotation matrix about a coordinate axis, or from a rotation vector by the Rodrigues formula.
    #[command(group(ArgGroup::new("source").required(true).args(["axis", "vector"])))]
    Rotate {
        /// Coordinate axis x, y or z.
        #[arg(long, requires = "angle")]
        axis: Option<String>,
        /// Angle in radians for --axis.
        #[arg(long, allow_hyphen_values = true)]
        angle: Option<f64>,
        /// Rotation vector a (axis times angle), as "a1,a2,a3".
        #[arg(long, value_parser = vec3, allow_hyphen_values = true)]
        vector: Option<[f64; 3]>,
    },
    /// ZYZ Euler angles and rotation axis of a rotation matrix.
    #[command(group(ArgGroup::new("source").required(true).args(["matrix", "vector"])))]
    Euler {
        /// Row-major 3x3 matrix as nine comma-separated numbers.
        #[arg(long, value_parser = matrix3, allow_hyphen_values = true)]
        matrix: Option<[[f64; 3]; 3]>,
        /// Rotation vector instead of a matrix.
        #[arg(long, value_parser = vec3, allow_hyphen_values = true)]
        vector: Option<[f64; 3]>,
    },
    /// Lift a rotation to one of its two preimages U(x, y) in SU(2).
    #[command(group(ArgGroup::new("source").required(true).args(["matrix", "vector"])))]
    Lift {
        #[arg(long, value_parser = matrix3, allow_hyphen_values = true)]
        matrix: Option<[[f64; 3]; 3]>,
        #[arg(long, value_parser = vec3, allow_hyphen_values = true)]
        vector: Option<[f64; 3]>,
    },
    /// Check the covering map SU(2) → SO(3) on Haar-random pairs: homomorphism, R(−U) = R(U), kernel ±1.
    CoverCheck {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Structure constants of a Lie algebra: Jacobi identity, Killing form, semisimplicity.
    AlgebraVerify {
        /// Built-in algebra: so3, su2, heisenberg, os1, gl(n), sl(n), so(p,q), sp(m) with m = 2n the matrix size.
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        name: Option<String>,
        /// JSON file with {name, dim, names, c} structure constants.
        #[arg(long)]
        file: Option<std::path::PathBuf>,
    },
    /// Rigid body Euler equations dJ/dt = J × ω integrated by RK4; CSV trajectory.
    Rigidbody {
        /// Principal moments of inertia "I1,I2,I3".
        #[arg(long, value_parser = vec3, default_value = "1,2,3")]
        inertia: [f64; 3],
        /// Initial angular momentum "J1,J2,J3".
        #[arg(long, value_parser = vec3, allow_hyphen_values = true, default_value = "1,1,1")]
        j: [f64; 3],
        #[arg(long, default_value_t = 1e-3, allow_hyphen_values = true)]
        dt: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        /// Emit every n-th state.
        #[arg(long, default_value_t = 1)]
        every: usize,
    },
    /// Harmonic oscillator spectrum on a truncated bosonic Fock space.
    FockSpectrum {
        /// Number of retained Fock levels.
        #[arg(long, default_value_t = 16)]
        levels: usize,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Number of eigenvalues to report (at most levels − 1).
        #[arg(long)]
        count: Option<usize>,
    },
    /// Coherent states: truncated inner product against the closed form, and the uncertainty product.
    Coherent {
        #[arg(long, value_parser = complex, allow_hyphen_values = true, default_value = "1,0")]
        z: C64,
        #[arg(long, value_parser = complex, allow_hyphen_values = true, default_value = "1,0")]
        lambda: C64,
        /// Second state's z (defaults to z).
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        z2: Option<C64>,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        lambda2: Option<C64>,
        #[arg(long, default_value_t = 60)]
        dim: usize,
    },
    /// Rank-one highest-weight representation with [a, a*] = ħ(u h + v).
    HighestWeight {
        #[arg(long, allow_hyphen_values = true)]
        u: f64,
        #[arg(long, allow_hyphen_values = true)]
        v: f64,
        /// Ground weight α; defaults to the finite choice for --jm when u < 0.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "jm")]
        alpha: Option<f64>,
        /// Target top level for the finite (compact) case.
        #[arg(long)]
        jm: Option<usize>,
        #[arg(long, default_value_t = 200)]
        max_levels: usize,
    },
    /// Fermionic Fock space: canonical anticommutation relations and the ε sign identities.
    FermionCheck {
        #[arg(long, default_value_t = 4)]
        modes: usize,
    },
    /// The su(2) irreducible representation D_j: t3, L±, Casimir.
    Irrep {
        /// Spin, e.g. 1, 3/2, 0.5.
        #[arg(long)]
        j: String,
    },
    /// Clebsch–Gordan decomposition of D_k ⊗ D_l.
    Cg {
        /// Spin of the first factor, e.g. 1/2.
        #[arg(long)]
        k: String,
        /// Spin of the second factor.
        #[arg(long)]
        l: String,
    },
    /// Gibbs state of a Hermitian Hamiltonian: partition function, mean energy, entropy.
    Gibbs {
        /// Diagonal Hamiltonian "E1,E2,...".
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with = "file",
            required_unless_present = "file"
        )]
        diag: Option<String>,
        /// JSON matrix {rows, cols, data: [[re, im], ...]}.
        #[arg(long)]
        file: Option<std::path::PathBuf>,
        /// Inverse temperature 1/(k̄T).
        #[arg(long, conflicts_with = "temperature", required_unless_present = "temperature")]
        beta: Option<f64>,
        /// Temperature in K, combined with k̄.
        #[arg(long)]
        temperature: Option<f64>,
    },
    /// Planck black-body spectral energy f(ω) on a logarithmic grid; CSV.
    Blackbody {
        #[arg(long)]
        temperature: f64,
        /// Cavity volume in m³.
        #[arg(long, default_value_t = 1.0)]
        volume: f64,
        #[arg(long)]
        omega_min: Option<f64>,
        #[arg(long)]
        omega_max: Option<f64>,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Wien displacement law: root of 3 − x = 3e^{−x}.
    Wien {
        /// Also report the peak frequency x k̄T/ħ at this temperature.
        #[arg(long)]
        temperature: Option<f64>,
    },
    /// Stefan–Boltzmann constant σ = π²k̄⁴/(60ħ³c²).
    Stefan,
    /// Hydrogen lines R_H(1/k² − 1/l²) by the Rydberg formula; CSV.
    Rydberg {
        #[arg(long, default_value_t = 6)]
        kmax: u32,
    },
    /// Assign spectral lines to energy-level pairs by alternating least squares.
    Assign {
        /// CSV with header omega,weight.
        #[arg(long)]
        data: std::path::PathBuf,
        /// JSON list of trial levels, or {"levels": [...]}.
        #[arg(long)]
        levels: std::path::PathBuf,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
        /// Number of starts; starts after the first perturb the trial levels.
        #[arg(long, default_value_t = 1)]
        starts: usize,
        /// Perturbation half-width for extra starts.
        #[arg(long, default_value_t = 0.0)]
        scale: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {}", e.token(), e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
