//! Matrix groups `SO(3)` and `SL(2,ℝ)` in double precision.

use std::fmt::Debug;

use nalgebra::{Matrix2, Matrix3, Quaternion, Rotation3, Unit, UnitQuaternion, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Products are renormalized after this many multiplications.
pub const RENORMALIZE_EVERY: usize = 16;

/// Rotations of angle below this (and `SL2` elements this close to `I`)
/// have no usable closure curve.
pub const DEGENERATE_EPS: f64 = 1e-6;

/// Radius of the ball in `sl(2,ℝ)` the `SL2` sampler draws from.
pub const SL2_SAMPLER_RADIUS: f64 = 3.0;

/// Description of the `SL2` sampler, recorded in certificates.
pub const SL2_SAMPLER: &str = "exp of N(0,1)^3 in sl2 conditioned on norm <= 3";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    #[serde(rename = "SO3")]
    So3,
    #[serde(rename = "SL2R")]
    Sl2,
}

impl GroupKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupKind::So3 => "SO3",
            GroupKind::Sl2 => "SL2R",
        }
    }

    pub fn parse(s: &str) -> Option<GroupKind> {
        match s.to_ascii_uppercase().as_str() {
            "SO3" => Some(GroupKind::So3),
            "SL2R" | "SL2" => Some(GroupKind::Sl2),
            _ => None,
        }
    }
}

/// A matrix group element with the operations the representation code needs.
pub trait GroupElement: Copy + Debug + PartialEq + Send + Sync + 'static {
    const KIND: GroupKind;
    /// Number of row-major entries (9 or 4).
    const ENTRIES: usize;
    /// Lie-algebra direction of a closure curve.
    type Tangent: Copy + Debug + Send + Sync;

    fn identity() -> Self;
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    /// Projects a slightly drifted product back onto the group.
    fn renormalize(&self) -> Self;
    /// Frobenius norm `‖M − I‖`.
    fn distance_to_identity(&self) -> f64;
    /// Frobenius norm `‖A − B‖`.
    fn distance(&self, other: &Self) -> f64;
    /// Orthogonality / determinant defect of the underlying matrix.
    fn defect(&self) -> f64;
    fn to_row_major(&self) -> Vec<f64>;
    /// Validates membership (defect ≤ 1e−6) and renormalizes.
    fn from_row_major(entries: &[f64]) -> Result<Self>;
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// `(direction, period, t)` with `exp(t·direction)` equal to `self`.
    fn principal_tangent(&self) -> Result<(Self::Tangent, f64, f64)>;
    fn exp_tangent(direction: &Self::Tangent, t: f64) -> Self;

    fn closure_curve(&self) -> Result<ClosureCurve<Self>> {
        let (direction, period, base_t) = self.principal_tangent()?;
        Ok(ClosureCurve {
            base: *self,
            direction,
            period,
            base_t,
        })
    }
}

/// A one-parameter subgroup through a base element: a circle of rotations
/// about the base's axis, or `exp(t·log base)` in `SL(2,ℝ)`.
#[derive(Debug, Clone, Copy)]
pub struct ClosureCurve<E: GroupElement> {
    base: E,
    direction: E::Tangent,
    period: f64,
    base_t: f64,
}

impl<E: GroupElement> ClosureCurve<E> {
    pub fn base(&self) -> &E {
        &self.base
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Parameter at which the curve passes through the base element.
    pub fn base_parameter(&self) -> f64 {
        self.base_t
    }

    pub fn at(&self, t: f64) -> E {
        E::exp_tangent(&self.direction, t)
    }

    /// `t_j = period·j/grid` for `j = 0..grid`.
    pub fn grid_parameter(&self, j: usize, grid: usize) -> f64 {
        self.period * j as f64 / grid as f64
    }
}

/// A rotation, stored as a unit quaternion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So3(pub UnitQuaternion<f64>);

impl So3 {
    pub fn from_axis_angle(axis: Vector3<f64>, angle: f64) -> So3 {
        So3(UnitQuaternion::from_axis_angle(
            &Unit::new_normalize(axis),
            angle,
        ))
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        self.0.to_rotation_matrix().into_inner()
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(&self) -> f64 {
        let q = self.0.quaternion();
        2.0 * q.imag().norm().atan2(q.w.abs())
    }

    /// Geodesic distance: the angle of `self⁻¹·other`.
    pub fn angle_to(&self, other: &So3) -> f64 {
        self.inverse().compose(other).angle()
    }

    /// Unit quaternion coordinates `(w, x, y, z)`.
    pub fn coords(&self) -> [f64; 4] {
        let q = self.0.quaternion();
        [q.w, q.i, q.j, q.k]
    }
}

impl GroupElement for So3 {
    const KIND: GroupKind = GroupKind::So3;
    const ENTRIES: usize = 9;
    type Tangent = Vector3<f64>;

    fn identity() -> Self {
        So3(UnitQuaternion::identity())
    }

    fn compose(&self, other: &Self) -> Self {
        So3(Unit::new_unchecked(
            self.0.quaternion() * other.0.quaternion(),
        ))
    }

    fn inverse(&self) -> Self {
        So3(Unit::new_unchecked(self.0.quaternion().conjugate()))
    }

    fn renormalize(&self) -> Self {
        So3(UnitQuaternion::new_normalize(*self.0.quaternion()))
    }

    fn distance_to_identity(&self) -> f64 {
        // ‖R − I‖_F = 2√2·sin(θ/2) = 2√2·‖imag(q)‖.
        2.0 * std::f64::consts::SQRT_2 * self.0.quaternion().imag().norm()
    }

    fn distance(&self, other: &Self) -> f64 {
        self.inverse().compose(other).distance_to_identity()
    }

    fn defect(&self) -> f64 {
        let q = self.0.quaternion();
        let (w, x, y, z) = (q.w, q.i, q.j, q.k);
        // Unnormalized rotation formula, so drift in |q| shows up.
        let m = Matrix3::new(
            w * w + x * x - y * y - z * z,
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            w * w - x * x + y * y - z * z,
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            w * w - x * x - y * y + z * z,
        );
        let ortho = (m.transpose() * m - Matrix3::identity()).norm();
        ortho.max((m.determinant() - 1.0).abs())
    }

    fn to_row_major(&self) -> Vec<f64> {
        let m = self.matrix();
        (0..3)
            .flat_map(|i| (0..3).map(move |j| m[(i, j)]))
            .collect()
    }

    fn from_row_major(entries: &[f64]) -> Result<Self> {
        if entries.len() != 9 {
            return Err(Error::NotInGroup(format!(
                "SO3 needs 9 entries, got {}",
                entries.len()
            )));
        }
        let m = Matrix3::from_row_slice(entries);
        let ortho = (m.transpose() * m - Matrix3::identity()).norm();
        let det = m.determinant();
        if !(ortho <= 1e-6 && (det - 1.0).abs() <= 1e-6) {
            return Err(Error::NotInGroup(format!(
                "orthogonality defect {ortho:e}, determinant {det}"
            )));
        }
        let q = UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(m));
        Ok(So3(q).renormalize())
    }

    /// Haar measure: a normalized standard Gaussian in `ℝ⁴`.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let c: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let q = Quaternion::new(c[0], c[1], c[2], c[3]);
            if q.norm() > 1e-9 {
                return So3(UnitQuaternion::new_normalize(q));
            }
        }
    }

    fn principal_tangent(&self) -> Result<(Vector3<f64>, f64, f64)> {
        let q = self.0.quaternion();
        // Work with the representative of nonnegative real part.
        let (w, v) = if q.w < 0.0 {
            (-q.w, -q.imag())
        } else {
            (q.w, q.imag())
        };
        let theta = 2.0 * v.norm().atan2(w);
        if theta < DEGENERATE_EPS {
            return Err(Error::DegenerateElement(format!(
                "rotation angle {theta:e}"
            )));
        }
        Ok((v.normalize(), 2.0 * std::f64::consts::PI, theta))
    }

    fn exp_tangent(axis: &Vector3<f64>, t: f64) -> Self {
        let (s, c) = (0.5 * t).sin_cos();
        So3(Unit::new_unchecked(Quaternion::from_parts(c, axis * s)))
    }
}

/// An element of `SL(2,ℝ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2(pub Matrix2<f64>);

impl Sl2 {
    /// `(ad − bc, |ad| + |bc|)`.
    fn det_and_scale(&self) -> (f64, f64) {
        let m = &self.0;
        let (ad, bc) = (m[(0, 0)] * m[(1, 1)], m[(0, 1)] * m[(1, 0)]);
        (ad - bc, ad.abs() + bc.abs())
    }
}

/// `exp` of a traceless 2×2 matrix: `exp(X) = C·I + S·X` with
/// `X² = δ·I`, `δ = a² + bc`.
pub fn sl2_exp(x: &Matrix2<f64>) -> Matrix2<f64> {
    let delta = x[(0, 0)] * x[(0, 0)] + x[(0, 1)] * x[(1, 0)];
    let (c, s) = if delta.abs() < 1e-8 {
        (
            1.0 + delta / 2.0 + delta * delta / 24.0,
            1.0 + delta / 6.0 + delta * delta / 120.0,
        )
    } else if delta > 0.0 {
        let r = delta.sqrt();
        (r.cosh(), r.sinh() / r)
    } else {
        let r = (-delta).sqrt();
        (r.cos(), r.sin() / r)
    };
    Matrix2::identity() * c + x * s
}

/// Principal logarithm of `A ∈ SL(2,ℝ)`, defined for `tr A > −2`.
pub fn sl2_log(a: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let tau = 0.5 * a.trace();
    if tau <= -1.0 {
        return Err(Error::DegenerateElement(format!(
            "trace {} ≤ −2",
            a.trace()
        )));
    }
    // log A = f·(A − τI) with f = s/sinh s (τ = cosh s) or s/sin s (τ = cos s);
    // both expand to 1 − (τ − 1)/3 near τ = 1.
    let f = if (tau - 1.0).abs() < 1e-6 {
        let e = tau - 1.0;
        1.0 - e / 3.0 + 2.0 * e * e / 15.0
    } else if tau > 1.0 {
        let s = tau.acosh();
        s / s.sinh()
    } else {
        let s = tau.acos();
        s / s.sin()
    };
    Ok((a - Matrix2::identity() * tau) * f)
}

impl GroupElement for Sl2 {
    const KIND: GroupKind = GroupKind::Sl2;
    const ENTRIES: usize = 4;
    type Tangent = Matrix2<f64>;

    fn identity() -> Self {
        Sl2(Matrix2::identity())
    }

    fn compose(&self, other: &Self) -> Self {
        Sl2(self.0 * other.0)
    }

    fn inverse(&self) -> Self {
        let m = &self.0;
        Sl2(Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]))
    }

    fn renormalize(&self) -> Self {
        let (det, scale) = self.det_and_scale();
        // Once the entries are large, `ad − bc` is dominated by rounding;
        // rescaling by it would do more harm than the drift it corrects.
        if det > 0.0 && (det - 1.0).abs() > 8.0 * f64::EPSILON * scale {
            Sl2(self.0 / det.sqrt())
        } else {
            *self
        }
    }

    fn distance_to_identity(&self) -> f64 {
        (self.0 - Matrix2::identity()).norm()
    }

    fn distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).norm()
    }

    /// `|det − 1|` relative to `max(1, |ad| + |bc|)`, the scale at which the
    /// determinant can be computed at all.
    fn defect(&self) -> f64 {
        let (det, scale) = self.det_and_scale();
        (det - 1.0).abs() / scale.max(1.0)
    }

    fn to_row_major(&self) -> Vec<f64> {
        let m = &self.0;
        vec![m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
    }

    fn from_row_major(entries: &[f64]) -> Result<Self> {
        if entries.len() != 4 {
            return Err(Error::NotInGroup(format!(
                "SL2R needs 4 entries, got {}",
                entries.len()
            )));
        }
        let m = Matrix2::from_row_slice(entries);
        let det = m.determinant();
        if det.is_nan() || (det - 1.0).abs() > 1e-6 {
            return Err(Error::NotInGroup(format!("determinant {det}")));
        }
        Ok(Sl2(m).renormalize())
    }

    /// Haar measure is infinite; this is an absolutely continuous surrogate
    /// supported on `exp` of a compact ball, where principal logs exist.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let c: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
            if c.iter().map(|x| x * x).sum::<f64>() <= SL2_SAMPLER_RADIUS * SL2_SAMPLER_RADIUS {
                return Sl2(sl2_exp(&Matrix2::new(c[0], c[1], c[2], -c[0])));
            }
        }
    }

    fn principal_tangent(&self) -> Result<(Matrix2<f64>, f64, f64)> {
        if self.distance_to_identity() < DEGENERATE_EPS {
            return Err(Error::DegenerateElement(
                "element is numerically the identity".into(),
            ));
        }
        let x = sl2_log(&self.0)?;
        let delta = x[(0, 0)] * x[(0, 0)] + x[(0, 1)] * x[(1, 0)];
        if delta < 0.0 && 0.5 * self.0.trace() < 1.0 {
            // Elliptic: unit-speed rotation, closed after 2π.
            let theta = (-delta).sqrt();
            Ok((x / theta, 2.0 * std::f64::consts::PI, theta))
        } else {
            Ok((x, 1.0, 1.0))
        }
    }

    fn exp_tangent(x: &Matrix2<f64>, t: f64) -> Self {
        Sl2(sl2_exp(&(x * t)))
    }
}
