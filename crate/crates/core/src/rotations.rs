//! SO(3) and SU(2): hat map, elementary rotations, the Rodrigues formula,
//! Euler angles, rotation axes and the two-to-one covering map `SU(2) → SO(3)`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{is_special_orthogonal, ComplexMatrix, Tolerance, C64};

pub type Vec3 = [f64; 3];

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// `X(ω)` with `X(ω) v = ω × v`.
pub fn hat(w: Vec3) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]])
}

/// Inverse of [`hat`]; rejects inputs that are not real antisymmetric within 1e-10.
pub fn vee(m: &ComplexMatrix) -> Result<Vec3> {
    if m.rows() != 3 || m.cols() != 3 {
        return Err(Error::Shape(format!(
            "vee needs a 3x3 matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let defect = m
        .max_abs_diff(&(-m.transpose()))
        .max(m.data().iter().map(|z| z.im.abs()).fold(0.0, f64::max));
    if defect > 1e-10 {
        return Err(Error::NotAntisymmetric(defect));
    }
    Ok([m[(2, 1)].re, m[(0, 2)].re, m[(1, 0)].re])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(Error::Invalid(format!("axis must be x, y or z, got `{other}`"))),
        }
    }
}

/// A proper rotation of R³, stored as a real 3×3 matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct Rotation {
    m: [[f64; 3]; 3],
}

impl fmt::Debug for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Rotation").field(&self.m).finish()
    }
}

impl TryFrom<ComplexMatrix> for Rotation {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Rotation::from_matrix(&m)
    }
}

impl From<Rotation> for ComplexMatrix {
    fn from(r: Rotation) -> Self {
        r.matrix()
    }
}

impl Rotation {
    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Accepts a real matrix with `RᵀR = 1`, `det R = 1` within 1e-9.
    pub fn from_rows(m: [[f64; 3]; 3]) -> Result<Self> {
        Self::from_matrix(&ComplexMatrix::from_real_rows(&m))
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.rows() != 3 || m.cols() != 3 {
            return Err(Error::Shape(format!(
                "rotation needs a 3x3 matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_finite() || !is_special_orthogonal(m, Tolerance::abs(1e-9))? {
            return Err(Error::Invalid("matrix is not in SO(3)".into()));
        }
        let mut rows = [[0.0; 3]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = m[(i, j)].re;
            }
        }
        Ok(Self { m: rows })
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&self.m)
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        let m = &self.m;
        [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.m;
        Self {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Rotation) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        worst
    }
}

impl Mul for &Rotation {
    type Output = Rotation;

    fn mul(self, rhs: &Rotation) -> Rotation {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..3).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        Rotation { m }
    }
}

/// `U(x, y) = [[x, y], [−ȳ, x̄]]` with `|x|² + |y|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su2Element {
    pub x: C64,
    pub y: C64,
}

impl Su2Element {
    pub const IDENTITY: Self = Self {
        x: C64::new(1.0, 0.0),
        y: C64::new(0.0, 0.0),
    };

    pub fn new(x: C64, y: C64) -> Result<Self> {
        let n = x.norm_sqr() + y.norm_sqr();
        if !(n - 1.0).abs().le(&1e-12) {
            return Err(Error::Invalid(format!("|x|^2 + |y|^2 = {n}, expected 1")));
        }
        Ok(Self { x, y })
    }

    /// Rescales a nonzero pair onto the unit sphere.
    pub fn normalized(x: C64, y: C64) -> Result<Self> {
        let n = (x.norm_sqr() + y.norm_sqr()).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Invalid("cannot normalize a zero or non-finite pair".into()));
        }
        Ok(Self { x: x / n, y: y / n })
    }

    /// Haar-distributed element: a uniformly random point of S³.
    pub fn haar<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            if let Ok(u) = Self::normalized(C64::new(v[0], v[1]), C64::new(v[2], v[3])) {
                return u;
            }
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![self.x, self.y, -self.y.conj(), self.x.conj()]).expect("2x2")
    }

    pub fn adjoint(&self) -> Self {
        Self {
            x: self.x.conj(),
            y: -self.y,
        }
    }
}

impl Mul for Su2Element {
    type Output = Su2Element;

    fn mul(self, rhs: Su2Element) -> Su2Element {
        Su2Element {
            x: self.x * rhs.x - self.y * rhs.y.conj(),
            y: self.x * rhs.y + self.y * rhs.x.conj(),
        }
    }
}

impl Neg for Su2Element {
    type Output = Su2Element;

    fn neg(self) -> Su2Element {
        Su2Element { x: -self.x, y: -self.y }
    }
}

pub fn elementary(axis: Axis, angle: f64) -> Rotation {
    let (s, c) = angle.sin_cos();
    let m = match axis {
        Axis::X => [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]],
        Axis::Y => [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]],
        Axis::Z => [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
    };
    Rotation { m }
}

/// `exp(X(a)) = 1 + (sin θ/θ) X + ((1 − cos θ)/θ²) X²` with `θ = |a|`.
pub fn rodrigues(a: Vec3) -> Rotation {
    let t2 = dot(a, a);
    let theta = t2.sqrt();
    let (sa, sb) = if theta < 1e-4 {
        (1.0 - t2 / 6.0 + t2 * t2 / 120.0, 0.5 - t2 / 24.0 + t2 * t2 / 720.0)
    } else {
        let h = (0.5 * theta).sin();
        (theta.sin() / theta, 2.0 * h * h / t2)
    };
    let x = [[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let x2: f64 = (0..3).map(|k| x[i][k] * x[k][j]).sum();
            m[i][j] = f64::from(u8::from(i == j)) + sa * x[i][j] + sb * x2;
        }
    }
    Rotation { m }
}

/// The fixed axis of a rotation, or the identity marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationAxis {
    Identity,
    Axis(Vec3),
}

/// Unit eigenvector for eigenvalue 1; sign follows the rotation sense
/// (the angle about the returned axis lies in `(0, π]`).
pub fn rotation_axis(r: &Rotation) -> RotationAxis {
    let (w, v) = quaternion(r);
    let nv = norm(v);
    if nv <= 1e-12 {
        return RotationAxis::Identity;
    }
    let s = if w < 0.0 { -1.0 } else { 1.0 };
    RotationAxis::Axis([s * v[0] / nv, s * v[1] / nv, s * v[2] / nv])
}

/// Rotation angle in `[0, π]`.
pub fn rotation_angle(r: &Rotation) -> f64 {
    let (w, v) = quaternion(r);
    2.0 * norm(v).atan2(w.abs())
}

/// ZYZ Euler angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    /// `R_z(α) R_y(β) R_z(γ)`.
    pub fn to_rotation(&self) -> Rotation {
        &(&elementary(Axis::Z, self.alpha) * &elementary(Axis::Y, self.beta)) * &elementary(Axis::Z, self.gamma)
    }
}

/// Decomposes `R = R_z(α) R_y(β) R_z(γ)` with `β ∈ [0, π]`; at gimbal lock
/// `γ = 0` and the whole z-rotation goes into `α`.
pub fn euler_zyz(r: &Rotation) -> EulerAngles {
    let m = &r.m;
    let sb = m[0][2].hypot(m[1][2]);
    let beta = sb.atan2(m[2][2]);
    if sb < 1e-12 {
        let alpha = if m[2][2] > 0.0 {
            m[1][0].atan2(m[0][0])
        } else {
            (-m[0][1]).atan2(m[1][1])
        };
        let beta = if m[2][2] > 0.0 { 0.0 } else { PI };
        return EulerAngles {
            alpha: alpha + 0.0,
            beta,
            gamma: 0.0,
        };
    }
    EulerAngles {
        alpha: m[1][2].atan2(m[0][2]),
        beta,
        gamma: m[2][1].atan2(-m[2][0]),
    }
}

/// The explicit covering homomorphism `R(U(x, y))`.
pub fn covering_map(u: &Su2Element) -> Rotation {
    let (x, y) = (u.x, u.y);
    let x2my2 = x * x - y * y;
    let x2py2 = x * x + y * y;
    let xy = x * y;
    let xyb = x * y.conj();
    let m = [
        [x2my2.re, x2py2.im, -2.0 * xy.re],
        [-x2my2.im, x2py2.re, 2.0 * xy.im],
        [2.0 * xyb.re, 2.0 * xyb.im, x.norm_sqr() - y.norm_sqr()],
    ];
    Rotation { m }
}

/// Unit quaternion `(w, v)` of a rotation, up to overall sign.
fn quaternion(r: &Rotation) -> (f64, Vec3) {
    let m = &r.m;
    let tr = m[0][0] + m[1][1] + m[2][2];
    let (w, v) = if tr >= m[0][0].max(m[1][1]).max(m[2][2]) {
        let w = 0.5 * (1.0 + tr).max(0.0).sqrt();
        let f = 0.25 / w;
        (
            w,
            [
                (m[2][1] - m[1][2]) * f,
                (m[0][2] - m[2][0]) * f,
                (m[1][0] - m[0][1]) * f,
            ],
        )
    } else if m[0][0] >= m[1][1] && m[0][0] >= m[2][2] {
        let v1 = 0.5 * (1.0 + m[0][0] - m[1][1] - m[2][2]).max(0.0).sqrt();
        let f = 0.25 / v1;
        (
            (m[2][1] - m[1][2]) * f,
            [v1, (m[0][1] + m[1][0]) * f, (m[0][2] + m[2][0]) * f],
        )
    } else if m[1][1] >= m[2][2] {
        let v2 = 0.5 * (1.0 - m[0][0] + m[1][1] - m[2][2]).max(0.0).sqrt();
        let f = 0.25 / v2;
        (
            (m[0][2] - m[2][0]) * f,
            [(m[0][1] + m[1][0]) * f, v2, (m[1][2] + m[2][1]) * f],
        )
    } else {
        let v3 = 0.5 * (1.0 - m[0][0] - m[1][1] + m[2][2]).max(0.0).sqrt();
        let f = 0.25 / v3;
        (
            (m[1][0] - m[0][1]) * f,
            [(m[0][2] + m[2][0]) * f, (m[1][2] + m[2][1]) * f, v3],
        )
    };
    let n = (w * w + dot(v, v)).sqrt();
    (w / n, [v[0] / n, v[1] / n, v[2] / n])
}

/// One of the two preimages `±U` of `R` under the covering map, chosen with
/// `Re x > 0`, ties broken by `Im x > 0`, then `Re y > 0`, then `Im y ≥ 0`.
pub fn lift_to_su2(r: &Rotation) -> Su2Element {
    let (w, v) = quaternion(r);
    // U = w − i (v·σ): x = w − i v3, y = −v2 − i v1.
    let keys = [w, -v[2], -v[1], -v[0]];
    let flip = keys.iter().find(|k| k.abs() > 1e-12).is_some_and(|&k| k < 0.0);
    let s = if flip { -1.0 } else { 1.0 };
    Su2Element {
        x: C64::new(s * w, -s * v[2]),
        y: C64::new(-s * v[1], -s * v[0]),
    }
}

/// Maximum homomorphism, two-to-one and kernel defects over random pairs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct CoverReport {
    pub samples: usize,
    pub homomorphism_defect: f64,
    pub sign_defect: f64,
    pub lift_defect: f64,
    pub kernel_violations: usize,
}

/// Runs the covering-map checks on `samples` Haar-random pairs.
pub fn cover_check<R: Rng + ?Sized>(rng: &mut R, samples: usize) -> CoverReport {
    let mut rep = CoverReport {
        samples,
        ..CoverReport::default()
    };
    for _ in 0..samples {
        let u1 = Su2Element::haar(rng);
        let u2 = Su2Element::haar(rng);
        let r1 = covering_map(&u1);
        let r2 = covering_map(&u2);
        let r12 = covering_map(&(u1 * u2));
        rep.homomorphism_defect = rep.homomorphism_defect.max(r12.max_abs_diff(&(&r1 * &r2)));
        rep.sign_defect = rep.sign_defect.max(covering_map(&-u1).max_abs_diff(&r1));
        rep.lift_defect = rep.lift_defect.max(covering_map(&lift_to_su2(&r1)).max_abs_diff(&r1));
        // Products with ±inverses land in the kernel and must be ±1.
        for k in [u1 * u1.adjoint(), -(u2 * u2.adjoint())] {
            if kernel_violation(&k) {
                rep.kernel_violations += 1;
            }
        }
    }
    rep
}

/// True when `R(U) ≈ 1` but `U` is not `±1`.
pub fn kernel_violation(u: &Su2Element) -> bool {
    let near_identity = covering_map(u).max_abs_diff(&Rotation::identity()) <= 1e-10;
    let dist = ((u.x - 1.0).norm() + u.y.norm()).min((u.x + 1.0).norm() + u.y.norm());
    near_identity && dist > 1e-8
}

/// `U = exp(−i θ/2 n·σ)`, the lift of the rotation by `θ` about unit `n`.
pub fn su2_from_axis_angle(n: Vec3, theta: f64) -> Su2Element {
    let (s, c) = (0.5 * theta).sin_cos();
    Su2Element {
        x: C64::new(c, -s * n[2]),
        y: C64::new(-s * n[1], -s * n[0]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{expm, is_unitary, I};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn approx_rot(a: &Rotation, b: &Rotation, eps: f64) -> bool {
        a.max_abs_diff(b) <= eps
    }

    fn taylor_exp(a: &ComplexMatrix, terms: usize) -> ComplexMatrix {
        let mut sum = ComplexMatrix::identity(a.rows());
        let mut term = ComplexMatrix::identity(a.rows());
        for k in 1..=terms {
            term = (&term * a).scale_real(1.0 / k as f64);
            sum += &term;
        }
        sum
    }

    #[test]
    fn hat_examples() {
        assert_eq!(
            hat([0.0, 0.0, 1.0]),
            ComplexMatrix::from_real_rows(&[[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        );
        assert!(hat([0.0; 3]).is_zero());
        let v: Vec<f64> = hat([1.0, 2.0, 3.0])
            .mat_vec(&[4.0, 5.0, 6.0].map(|x| C64::new(x, 0.0)))
            .unwrap()
            .iter()
            .map(|z| z.re)
            .collect();
        assert_eq!(v, vec![-3.0, 6.0, -3.0]);
        assert_eq!(vee(&hat([1.5, -2.0, 0.25])).unwrap(), [1.5, -2.0, 0.25]);
        assert_eq!(
            vee(&ComplexMatrix::identity(3)).unwrap_err().token(),
            "not_antisymmetric"
        );
    }

    #[test]
    fn elementary_examples() {
        let g = 0.4f64;
        let rz = elementary(Axis::Z, g);
        assert_eq!(
            rz.rows(),
            [[g.cos(), -g.sin(), 0.0], [g.sin(), g.cos(), 0.0], [0.0, 0.0, 1.0]]
        );
        assert_eq!(elementary(Axis::X, 0.0), Rotation::identity());
        let v = elementary(Axis::Y, PI / 2.0).apply([0.0, 0.0, 1.0]);
        assert!((v[0] - 1.0).abs() < 1e-15 && v[1].abs() < 1e-15 && v[2].abs() < 1e-15);
    }

    #[test]
    fn rodrigues_examples() {
        let g = 1.3;
        assert!(approx_rot(&rodrigues([0.0, 0.0, g]), &elementary(Axis::Z, g), 1e-15));
        assert_eq!(rodrigues([0.0; 3]), Rotation::identity());
        let a = [0.3, -1.1, 0.7];
        let series = taylor_exp(&hat(a), 60);
        assert!(rodrigues(a).matrix().max_abs_diff(&series) <= 1e-13);
        assert!(expm(&hat(a)).unwrap().max_abs_diff(&series) <= 1e-13);
    }

    #[test]
    fn rodrigues_small_angle_branch_is_continuous() {
        let a = [3e-5, -2e-5, 1e-5];
        let b = [3e-4, -2e-4, 1e-4].map(|x| x * 0.1000001);
        assert!(rodrigues(a).matrix().max_abs_diff(&expm(&hat(a)).unwrap()) < 1e-16);
        assert!(rodrigues(b).matrix().max_abs_diff(&expm(&hat(b)).unwrap()) < 1e-15);
    }

    #[test]
    fn rotation_axis_examples() {
        match rotation_axis(&elementary(Axis::Z, 0.7)) {
            RotationAxis::Axis(e) => assert!((e[2].abs() - 1.0).abs() < 1e-14 && e[0].abs() < 1e-14),
            RotationAxis::Identity => panic!("expected an axis"),
        }
        assert_eq!(rotation_axis(&Rotation::identity()), RotationAxis::Identity);
        // Half-turn: trace = −1 exercises the diagonal branches.
        match rotation_axis(&elementary(Axis::Y, PI)) {
            RotationAxis::Axis(e) => assert!((e[1].abs() - 1.0).abs() < 1e-14),
            RotationAxis::Identity => panic!("expected an axis"),
        }
    }

    #[test]
    fn euler_examples() {
        let e = euler_zyz(&Rotation::identity());
        assert_eq!((e.alpha, e.beta, e.gamma), (0.0, 0.0, 0.0));
        let e = euler_zyz(&elementary(Axis::Y, 1.2));
        assert!(e.alpha.abs() < 1e-15 && (e.beta - 1.2).abs() < 1e-15 && e.gamma.abs() < 1e-15);
        let r = &elementary(Axis::Z, 0.5) * &elementary(Axis::Y, PI);
        let e = euler_zyz(&r);
        assert_eq!((e.beta, e.gamma), (PI, 0.0));
        assert!(approx_rot(&e.to_rotation(), &r, 1e-14));
        let r = elementary(Axis::Z, -2.0);
        let e = euler_zyz(&r);
        assert!((e.alpha + 2.0).abs() < 1e-15 && e.beta == 0.0);
    }

    #[test]
    fn covering_map_examples() {
        let a = 0.9f64;
        let ux = Su2Element::new(C64::new((a / 2.0).cos(), 0.0), C64::new(0.0, -(a / 2.0).sin())).unwrap();
        assert!(approx_rot(&covering_map(&ux), &elementary(Axis::X, a), 1e-15));
        assert_eq!(covering_map(&Su2Element::IDENTITY), Rotation::identity());
        let g = 2.2f64;
        let uz = Su2Element::new(C64::from_polar(1.0, -g / 2.0), C64::new(0.0, 0.0)).unwrap();
        assert!(approx_rot(&covering_map(&uz), &elementary(Axis::Z, g), 1e-15));
        let b = -1.4f64;
        let uy = Su2Element::new(C64::new((b / 2.0).cos(), 0.0), C64::new(-(b / 2.0).sin(), 0.0)).unwrap();
        assert!(approx_rot(&covering_map(&uy), &elementary(Axis::Y, b), 1e-15));
    }

    #[test]
    fn su2_matrix_is_unitary_with_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let u = Su2Element::haar(&mut rng);
            assert!(is_unitary(&u.matrix(), Tolerance::default()).unwrap());
            assert!((u.matrix().det().unwrap() - 1.0).norm() < 1e-14);
        }
        assert!(Su2Element::new(C64::new(1.0, 0.0), C64::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn su2_product_matches_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = Su2Element::haar(&mut rng);
        let v = Su2Element::haar(&mut rng);
        assert!((u * v).matrix().max_abs_diff(&(&u.matrix() * &v.matrix())) < 1e-15);
    }

    #[test]
    fn axis_angle_lift_matches_exponential_of_generator() {
        // exp(θ n·(σ/2i)) is the lift of the rotation by θ about n.
        let n = [2.0f64 / 3.0, -1.0 / 3.0, 2.0 / 3.0];
        let theta = 1.1;
        let gen = (1..=3).fold(ComplexMatrix::zeros(2, 2), |acc, k| {
            &acc + &crate::matrix::pauli(k).scale(C64::new(0.0, -0.5 * theta * n[k - 1]))
        });
        let u = su2_from_axis_angle(n, theta);
        assert!(expm(&gen).unwrap().max_abs_diff(&u.matrix()) < 1e-15);
        let a = n.map(|x| x * theta);
        assert!(approx_rot(&covering_map(&u), &rodrigues(a), 1e-14));
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_to_su2(&Rotation::identity()), Su2Element::IDENTITY);
        for a in [0.1, 1.0, 2.5, 3.1] {
            let u = lift_to_su2(&elementary(Axis::X, a));
            assert!((u.x - C64::new((a / 2.0).cos(), 0.0)).norm() < 1e-14);
            assert!((u.y - C64::new(0.0, -(a / 2.0).sin())).norm() < 1e-14);
        }
        // Half-turn about z: x = −i, Re x = 0 so Im x > 0 decides: x = i.
        let u = lift_to_su2(&elementary(Axis::Z, PI));
        assert!((u.x - I).norm() < 1e-15 && u.y.norm() < 1e-15);
    }

    #[test]
    fn cover_check_report() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rep = cover_check(&mut rng, 200);
        assert!(rep.homomorphism_defect <= 1e-10);
        assert!(rep.sign_defect <= 1e-14);
        assert!(rep.lift_defect <= 1e-8);
        assert_eq!(rep.kernel_violations, 0);
    }

    #[test]
    fn rotation_serde() {
        let r = elementary(Axis::X, 0.3);
        let s = serde_json::to_string(&r).unwrap();
        let back: Rotation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let bad = serde_json::to_string(&ComplexMatrix::from_real_diag(&[1.0, 1.0, -1.0])).unwrap();
        assert!(serde_json::from_str::<Rotation>(&bad).is_err());
    }

    fn haar_from_seed(seed: u64) -> Su2Element {
        Su2Element::haar(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    proptest! {
        #[test]
        fn rodrigues_agrees_with_series(a in prop::array::uniform3(-10.0f64..10.0)) {
            prop_assume!(norm(a) <= 10.0);
            let r = rodrigues(a);
            prop_assert!(r.matrix().max_abs_diff(&expm(&hat(a)).unwrap()) <= 1e-11);
            prop_assert!(is_special_orthogonal(&r.matrix(), Tolerance::abs(1e-12)).unwrap());
        }

        #[test]
        fn axis_is_fixed_and_parallel(a in prop::array::uniform3(-1.8f64..1.8)) {
            prop_assume!(norm(a) > 1e-3 && norm(a) < PI - 1e-3);
            let r = rodrigues(a);
            match rotation_axis(&r) {
                RotationAxis::Axis(e) => {
                    let re = r.apply(e);
                    prop_assert!((0..3).all(|i| (re[i] - e[i]).abs() <= 1e-8));
                    let n = norm(a);
                    prop_assert!((0..3).all(|i| (e[i] - a[i] / n).abs() <= 1e-10));
                    prop_assert!((rotation_angle(&r) - n).abs() <= 1e-10);
                }
                RotationAxis::Identity => prop_assert!(false, "non-identity rotation reported as identity"),
            }
        }

        #[test]
        fn euler_round_trip(seed in any::<u64>()) {
            let r = covering_map(&haar_from_seed(seed));
            let e = euler_zyz(&r);
            prop_assert!((0.0..=PI).contains(&e.beta));
            prop_assert!(e.to_rotation().max_abs_diff(&r) <= 1e-9);
        }

        #[test]
        fn lift_round_trip_and_normalization(seed in any::<u64>()) {
            let r = covering_map(&haar_from_seed(seed));
            let u = lift_to_su2(&r);
            prop_assert!(covering_map(&u).max_abs_diff(&r) <= 1e-8);
            prop_assert!(u.x.re >= 0.0);
            prop_assert!(((u.x.norm_sqr() + u.y.norm_sqr()) - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn covering_is_homomorphism(s1 in any::<u64>(), s2 in any::<u64>()) {
            let (u1, u2) = (haar_from_seed(s1), haar_from_seed(s2));
            let lhs = covering_map(&(u1 * u2));
            let rhs = &covering_map(&u1) * &covering_map(&u2);
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10);
            prop_assert!(covering_map(&-u1).max_abs_diff(&covering_map(&u1)) <= 1e-14);
        }
    }
}
