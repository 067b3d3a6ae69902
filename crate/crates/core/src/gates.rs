//! Closed-form 2×2 unitaries.
//!
//! Rotations follow `R_n(θ) = exp(-i σ·n θ/2) = cos(θ/2) I - i σ·n sin(θ/2)`.
//! With this convention `R_x(θ)|±x⟩ = e^{∓iθ/2}|±x⟩` and `R_y(θ)|±y⟩ = e^{∓iθ/2}|±y⟩`,
//! where `|±x⟩ = (|0⟩ ± |1⟩)/√2` and `|±y⟩ = (|0⟩ ± i|1⟩)/√2`. A precession of
//! `+η` about `-x` is therefore `rx(-η)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateMatrix2 {
    pub m00: Complex64,
    pub m01: Complex64,
    pub m10: Complex64,
    pub m11: Complex64,
}

impl GateMatrix2 {
    pub const fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        GateMatrix2 { m00, m01, m10, m11 }
    }

    pub const fn identity() -> Self {
        GateMatrix2::new(ONE, ZERO, ZERO, ONE)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        GateMatrix2::new(
            self.m00.conj(),
            self.m10.conj(),
            self.m01.conj(),
            self.m11.conj(),
        )
    }

    pub fn det(&self) -> Complex64 {
        self.m00 * self.m11 - self.m01 * self.m10
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GateMatrix2::new(self.m00 * c, self.m01 * c, self.m10 * c, self.m11 * c)
    }

    /// Matrix-vector product on a single-qubit amplitude pair.
    #[inline]
    pub fn apply(&self, a0: Complex64, a1: Complex64) -> (Complex64, Complex64) {
        (self.m00 * a0 + self.m01 * a1, self.m10 * a0 + self.m11 * a1)
    }

    /// Largest entry-wise deviation from another matrix.
    pub fn max_abs_diff(&self, other: &GateMatrix2) -> f64 {
        [
            self.m00 - other.m00,
            self.m01 - other.m01,
            self.m10 - other.m10,
            self.m11 - other.m11,
        ]
        .iter()
        .map(|d| d.norm())
        .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.adjoint() * *self).max_abs_diff(&GateMatrix2::identity()) <= tol
    }

    pub fn is_finite(&self) -> bool {
        [self.m00, self.m01, self.m10, self.m11]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Mul for GateMatrix2 {
    type Output = GateMatrix2;

    fn mul(self, r: GateMatrix2) -> GateMatrix2 {
        GateMatrix2::new(
            self.m00 * r.m00 + self.m01 * r.m10,
            self.m00 * r.m01 + self.m01 * r.m11,
            self.m10 * r.m00 + self.m11 * r.m10,
            self.m10 * r.m01 + self.m11 * r.m11,
        )
    }
}

impl Default for GateMatrix2 {
    fn default() -> Self {
        GateMatrix2::identity()
    }
}

pub fn rx(theta: f64) -> GateMatrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    GateMatrix2::new(
        Complex64::new(c, 0.0),
        Complex64::new(0.0, -s),
        Complex64::new(0.0, -s),
        Complex64::new(c, 0.0),
    )
}

pub fn ry(theta: f64) -> GateMatrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    GateMatrix2::new(
        Complex64::new(c, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(c, 0.0),
    )
}

pub fn hadamard() -> GateMatrix2 {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    GateMatrix2::new(h, h, h, -h)
}

pub fn pauli_x() -> GateMatrix2 {
    GateMatrix2::new(ZERO, ONE, ONE, ZERO)
}

/// `diag(1, e^{iλ})`.
pub fn phase(lambda: f64) -> GateMatrix2 {
    GateMatrix2::new(ONE, ZERO, ZERO, Complex64::from_polar(1.0, lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => f.write_str("x"),
            Axis::Y => f.write_str("y"),
        }
    }
}

/// A rotation about a fixed axis. The matrix is always built from the raw
/// angle; [`RotationSpec::reported_angle`] only folds it for display.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationSpec {
    pub axis: Axis,
    pub angle: f64,
}

impl RotationSpec {
    pub fn new(axis: Axis, angle: f64) -> Self {
        RotationSpec { axis, angle }
    }

    pub fn matrix(&self) -> GateMatrix2 {
        match self.axis {
            Axis::X => rx(self.angle),
            Axis::Y => ry(self.angle),
        }
    }

    /// Angle folded into `(-2π, 2π]`.
    pub fn reported_angle(&self) -> f64 {
        let mut a = self.angle % (4.0 * PI);
        if a > 2.0 * PI {
            a -= 4.0 * PI;
        } else if a <= -2.0 * PI {
            a += 4.0 * PI;
        }
        a
    }

    /// Eigenvectors of the rotation as `(|+axis⟩, |−axis⟩)`, with eigenvalues
    /// `e^{-iθ/2}` and `e^{+iθ/2}` respectively.
    pub fn eigenvectors(&self) -> ([Complex64; 2], [Complex64; 2]) {
        let h = FRAC_1_SQRT_2;
        match self.axis {
            Axis::X => (
                [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
                [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
            ),
            Axis::Y => (
                [Complex64::new(h, 0.0), Complex64::new(0.0, h)],
                [Complex64::new(h, 0.0), Complex64::new(0.0, -h)],
            ),
        }
    }
}

/// `spec^k`, computed by scaling the angle. Rotations about one axis commute,
/// so this equals the k-fold product without accumulating rounding.
pub fn rotation_power(spec: RotationSpec, k: u64) -> GateMatrix2 {
    RotationSpec::new(spec.axis, spec.angle * k as f64).matrix()
}
