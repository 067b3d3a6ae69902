//! Analytic model of the two-leg spin-orbit path.
//!
//! Leg 1 precesses the spin by `η` about `-x` (gate `rx(-η)`), leg 2 by `δ`
//! about `+y` (gate `ry(δ)`), so the full evolution is `ry(δ)·rx(-η)` acting
//! on `|0⟩`. Everything here is closed form; the circuit equivalents live in
//! the tests.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};
use crate::gates::rx;
use crate::state::StateVector;

/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

const MIN_OVERLAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathParams {
    pub eta: f64,
    pub delta: f64,
}

impl PathParams {
    pub fn new(eta: f64, delta: f64) -> Self {
        PathParams { eta, delta }
    }
}

/// Material and transport parameters for one leg. Any geometric factor that
/// multiplies the momentum is folded into `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Spin-orbit coupling constant (J·m).
    pub alpha: f64,
    /// Momentum component driving the leg (1/m).
    pub k: f64,
    /// Traversal time (s).
    pub t: f64,
    pub hbar: f64,
}

impl PhysicalParams {
    pub fn new(alpha: f64, k: f64, t: f64) -> Self {
        PhysicalParams {
            alpha,
            k,
            t,
            hbar: HBAR,
        }
    }

    /// Larmor frequency `ω = 2αk/ħ`.
    pub fn omega(&self) -> f64 {
        2.0 * self.alpha * self.k / self.hbar
    }
}

/// Precession angles of the two legs: `η = -ω₁t₁` along x, `δ = +ω₂t₂` along y.
pub fn angles_from_physical(leg1: &PhysicalParams, leg2: &PhysicalParams) -> PathParams {
    PathParams {
        eta: -leg1.omega() * leg1.t,
        delta: leg2.omega() * leg2.t,
    }
}

fn basis_x(plus: Complex64, minus: Complex64) -> StateVector {
    // plus·|+x⟩ + minus·|−x⟩
    let h = FRAC_1_SQRT_2;
    StateVector::from_amplitudes(vec![(plus + minus) * h, (plus - minus) * h])
        .expect("two amplitudes")
}

fn basis_y(plus: Complex64, minus: Complex64) -> StateVector {
    // plus·|+y⟩ + minus·|−y⟩
    let h = FRAC_1_SQRT_2;
    let i = Complex64::i();
    StateVector::from_amplitudes(vec![(plus + minus) * h, (plus - minus) * i * h])
        .expect("two amplitudes")
}

/// State after leg 1: `(e^{iη/2}|+x⟩ + e^{-iη/2}|−x⟩)/√2`.
pub fn psi1(eta: f64) -> StateVector {
    let h = FRAC_1_SQRT_2;
    basis_x(
        Complex64::from_polar(h, eta / 2.0),
        Complex64::from_polar(h, -eta / 2.0),
    )
}

/// State after both legs in the y basis:
/// `C e^{-iδ/2}|+y⟩ + S e^{iδ/2}|−y⟩`.
pub fn psi2(params: PathParams) -> StateVector {
    let cs = amplitudes_cs(params.eta);
    basis_y(
        Complex64::from_polar(cs.c, -params.delta / 2.0),
        Complex64::from_polar(cs.s, params.delta / 2.0),
    )
}

/// The same state in the x basis, `(A|+x⟩ + B|−x⟩)/√2`.
pub fn psi2_x_basis(params: PathParams) -> StateVector {
    let ab = amplitudes_ab(params);
    basis_x(ab.a * FRAC_1_SQRT_2, ab.b * FRAC_1_SQRT_2)
}

/// Real y-basis amplitudes after leg 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudePair {
    pub c: f64,
    pub s: f64,
}

impl AmplitudePair {
    pub fn sc(&self) -> f64 {
        self.s * self.c
    }
}

pub fn amplitudes_cs(eta: f64) -> AmplitudePair {
    let (s, c) = (FRAC_PI_4 - eta / 2.0).sin_cos();
    AmplitudePair { c, s }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexPair {
    pub a: Complex64,
    pub b: Complex64,
    pub gamma1: f64,
    pub gamma2: f64,
}

pub fn amplitudes_ab(params: PathParams) -> ComplexPair {
    let AmplitudePair { c, s } = amplitudes_cs(params.eta);
    let (sn, cs) = (FRAC_PI_4 - params.delta / 2.0).sin_cos();
    let a = Complex64::new((c + s) * cs, (c - s) * sn);
    let b = Complex64::new((c + s) * sn, -(c - s) * cs);
    ComplexPair {
        a,
        b,
        gamma1: a.arg(),
        gamma2: b.arg(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalPhase {
    /// `|⟨0|ψ₂⟩| = √(1/2 + SC cos δ)`.
    pub magnitude: f64,
    /// `arg⟨0|ψ₂⟩ = arg((A + B)/2)` in `(-π, π]`; the reference value.
    pub theta: f64,
    /// `atan((S − C)/(S + C) · tan(δ/2))`, absent when `S + C <= 0`.
    pub theta_closed_form: Option<f64>,
    /// The two forms differ by a nonzero multiple of `π`.
    pub branch_folded: bool,
}

impl TotalPhase {
    pub fn warning(&self) -> Option<Warning> {
        match (self.branch_folded, self.theta_closed_form) {
            (true, Some(closed_form)) => Some(Warning::ThetaBranchFolded {
                closed_form,
                overlap_arg: self.theta,
            }),
            _ => None,
        }
    }
}

/// Closed-form non-Abelian phase, principal branch.
pub fn theta_closed_form(cs: AmplitudePair, delta: f64) -> Option<f64> {
    let sum = cs.s + cs.c;
    if sum <= 0.0 {
        return None;
    }
    Some(((cs.s - cs.c) / sum * (delta / 2.0).tan()).atan())
}

pub fn total_phase(params: PathParams) -> Result<TotalPhase> {
    let ab = amplitudes_ab(params);
    let overlap = (ab.a + ab.b) * 0.5;
    let magnitude = overlap.norm();
    if magnitude < MIN_OVERLAP {
        return Err(Error::UndefinedPhase { magnitude });
    }
    let theta = overlap.arg();
    let closed = theta_closed_form(amplitudes_cs(params.eta), params.delta);
    // Re⟨0|ψ₂⟩ carries the sign of (S + C)·cos(δ/2), so the forms can only
    // disagree by π (when |δ| > π)
    let branch_folded = closed.is_some_and(|cf| wrap_angle(theta - cf).abs() > 1e-10);
    Ok(TotalPhase {
        magnitude,
        theta,
        theta_closed_form: closed,
        branch_folded,
    })
}

/// Wraps into `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path1Phase {
    pub phase: f64,
    pub warning: Option<Warning>,
}

/// `arg⟨0|rx(-η)|0⟩`, evaluated on the circuit. Zero whenever `cos(η/2) > 0`.
pub fn path1_phase(eta: f64) -> Path1Phase {
    let mut s = StateVector::new(1).expect("one qubit");
    s.apply_single(&rx(-eta), 0).expect("qubit 0");
    let amp = s.amplitude(0);
    let warning = (amp.re <= 0.0).then_some(Warning::Path1Branch { eta });
    Path1Phase {
        phase: amp.arg(),
        warning,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::ry;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};

    const TOL: f64 = 1e-12;

    fn circuit_psi2(p: PathParams) -> StateVector {
        let mut s = StateVector::new(1).unwrap();
        s.apply_single(&rx(-p.eta), 0).unwrap();
        s.apply_single(&ry(p.delta), 0).unwrap();
        s
    }

    #[test]
    fn physical_conversion() {
        let zero = PhysicalParams::new(1e-11, 1e8, 0.0);
        assert_eq!(
            angles_from_physical(&zero, &zero),
            PathParams::new(-0.0, 0.0)
        );

        // choose t so that ωt = π/3 on each leg
        let alpha = 3e-12;
        let k = 2e8;
        let omega = 2.0 * alpha * k / HBAR;
        let leg = PhysicalParams::new(alpha, k, FRAC_PI_3 / omega);
        let p = angles_from_physical(&leg, &leg);
        assert!((p.eta + FRAC_PI_3).abs() < TOL);
        assert!((p.delta - FRAC_PI_3).abs() < TOL);

        let leg2 = PhysicalParams {
            t: leg.t * 2.0,
            ..leg
        };
        let q = angles_from_physical(&leg2, &leg2);
        assert!((q.eta - 2.0 * p.eta).abs() < TOL);
        assert!((q.delta - 2.0 * p.delta).abs() < TOL);
        assert!(leg.omega() >= 0.0);
    }

    #[test]
    fn psi1_values() {
        let s = psi1(0.0);
        assert!((s.amplitude(0) - Complex64::new(1.0, 0.0)).norm() < TOL);
        let s = psi1(FRAC_PI_3);
        assert!((s.amplitude(0) - Complex64::new(FRAC_PI_6.cos(), 0.0)).norm() < TOL);
        assert!((s.amplitude(1) - Complex64::new(0.0, FRAC_PI_6.sin())).norm() < TOL);
        let s = psi1(PI);
        assert!((s.amplitude(1) - Complex64::new(0.0, 1.0)).norm() < TOL);
        assert!(s.amplitude(0).norm() < TOL);
        for eta in [-2.5, -0.4, 0.9, 3.0] {
            let mut c = StateVector::new(1).unwrap();
            c.apply_single(&rx(-eta), 0).unwrap();
            assert!(psi1(eta).max_abs_diff(&c) < TOL);
        }
    }

    #[test]
    fn psi2_values() {
        let s = psi2(PathParams::new(0.0, 0.0));
        assert!((s.amplitude(0) - Complex64::new(1.0, 0.0)).norm() < TOL);
        let p = PathParams::new(FRAC_PI_3, FRAC_PI_3);
        let s = psi2(p);
        assert!((s.amplitude(0) - Complex64::new(0.75, -0.25)).norm() < TOL);
        assert!(s.max_abs_diff(&circuit_psi2(p)) < TOL);
        assert!(psi2_x_basis(p).max_abs_diff(&circuit_psi2(p)) < TOL);
    }

    #[test]
    fn cs_values() {
        let cs = amplitudes_cs(0.0);
        assert!((cs.c - FRAC_1_SQRT_2).abs() < TOL && (cs.s - FRAC_1_SQRT_2).abs() < TOL);
        let cs = amplitudes_cs(FRAC_PI_3);
        assert!((cs.c * cs.c - 0.9330).abs() < 1e-4);
        assert!((cs.s * cs.s - 0.0670).abs() < 1e-4);
        let cs = amplitudes_cs(FRAC_PI_2);
        assert!((cs.c - 1.0).abs() < TOL && cs.s.abs() < TOL);
    }

    #[test]
    fn ab_values() {
        let ab = amplitudes_ab(PathParams::new(FRAC_PI_3, FRAC_PI_3));
        assert!((ab.a.norm_sqr() / 2.0 - 0.7165).abs() < 1e-4);
        assert!((ab.b.norm_sqr() / 2.0 - 0.2835).abs() < 1e-4);
        let ab = amplitudes_ab(PathParams::new(0.8, 0.0));
        assert!((ab.a.norm() - 1.0).abs() < TOL);
        assert!((ab.gamma1 - ab.a.arg()).abs() < TOL);
    }

    #[test]
    fn total_phase_values() {
        let tp = total_phase(PathParams::new(FRAC_PI_3, FRAC_PI_3)).unwrap();
        assert!((tp.magnitude - 0.625f64.sqrt()).abs() < TOL);
        assert!((tp.theta - (-1.0f64 / 3.0).atan()).abs() < TOL);
        assert!((tp.theta_closed_form.unwrap() - tp.theta).abs() < 1e-10);
        assert!(!tp.branch_folded);

        let tp = total_phase(PathParams::new(0.7, 0.0)).unwrap();
        assert!(tp.theta.abs() < TOL);
        for delta in [-1.0, 0.3, 2.0] {
            let tp = total_phase(PathParams::new(0.0, delta)).unwrap();
            assert!(tp.theta.abs() < TOL);
        }
    }

    #[test]
    fn folded_branch_is_flagged() {
        // |δ| > π puts Re⟨0|ψ₂⟩ below zero
        let tp = total_phase(PathParams::new(0.5, 3.5)).unwrap();
        assert!(tp.branch_folded);
        let d = wrap_angle(tp.theta - tp.theta_closed_form.unwrap());
        assert!((d.abs() - PI).abs() < 1e-10);
        assert_eq!(tp.warning().unwrap().code(), "theta_branch_folded");
    }

    #[test]
    fn total_phase_undefined_when_overlap_vanishes() {
        // rx(-π) then ry(0) sends |0⟩ to i|1⟩
        assert!(matches!(
            total_phase(PathParams::new(PI, 0.0)),
            Err(Error::UndefinedPhase { .. })
        ));
    }

    #[test]
    fn closed_form_absent_when_s_plus_c_nonpositive() {
        // S + C = √2 cos(η/2), zero at η = π; use a value just past it
        let tp = total_phase(PathParams::new(3.3, 0.5)).unwrap();
        assert!(tp.theta_closed_form.is_none());
    }

    #[test]
    fn path1_phase_is_zero() {
        for eta in [FRAC_PI_3, 0.0, -FRAC_PI_2] {
            let p = path1_phase(eta);
            assert_eq!(p.phase, 0.0);
            assert!(p.warning.is_none());
        }
        let p = path1_phase(3.5);
        assert!((p.phase.abs() - PI).abs() < TOL);
        assert!(p.warning.is_some());
    }

    #[test]
    fn rotations_do_not_commute() {
        let (eta, delta) = (FRAC_PI_3, FRAC_PI_3);
        let mut other = StateVector::new(1).unwrap();
        other.apply_single(&ry(delta), 0).unwrap();
        other.apply_single(&rx(-eta), 0).unwrap();
        assert!(circuit_psi2(PathParams::new(eta, delta)).max_abs_diff(&other) > 1e-6);

        for (e, d) in [(0.0, 0.9), (0.9, 0.0)] {
            let mut other = StateVector::new(1).unwrap();
            other.apply_single(&ry(d), 0).unwrap();
            other.apply_single(&rx(-e), 0).unwrap();
            assert!(circuit_psi2(PathParams::new(e, d)).max_abs_diff(&other) < TOL);
        }
    }

    #[test]
    fn wrap_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < TOL);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn analytic_forms_match_circuit(eta in -PI..PI, delta in -PI..PI) {
                let p = PathParams::new(eta, delta);
                let circ = circuit_psi2(p);
                prop_assert!(psi2(p).max_abs_diff(&circ) < TOL);
                prop_assert!(psi2_x_basis(p).max_abs_diff(&circ) < TOL);
            }

            #[test]
            fn amplitude_identities(eta in -PI..PI, delta in -PI..PI) {
                let p = PathParams::new(eta, delta);
                let cs = amplitudes_cs(eta);
                let ab = amplitudes_ab(p);
                prop_assert!((cs.c * cs.c + cs.s * cs.s - 1.0).abs() < TOL);
                prop_assert!((ab.a.norm_sqr() + ab.b.norm_sqr() - 2.0).abs() < TOL);
                prop_assert!((ab.a.norm_sqr() - (1.0 + 2.0 * cs.sc() * delta.sin())).abs() < 1e-10);
                let overlap = (ab.a + ab.b) * 0.5;
                prop_assert!((overlap.norm_sqr() - (0.5 + cs.sc() * delta.cos())).abs() < 1e-10);
            }

            #[test]
            fn theta_forms_agree(eta in -PI..PI, delta in -PI..PI) {
                let p = PathParams::new(eta, delta);
                let cs = amplitudes_cs(eta);
                if let Ok(tp) = total_phase(p) {
                    if cs.s + cs.c > 0.0 && tp.magnitude > 1e-6 {
                        prop_assert!((tp.theta - tp.theta_closed_form.unwrap()).abs() < 1e-10);
                    }
                }
            }
        }
    }
}
