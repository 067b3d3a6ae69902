//! Reconstruction of `C`, `S`, `|A|`, `sin δ`, `δ` and the non-Abelian phase
//! `θ` from the two QPE readouts.
//!
//! The y-axis run (QPEV) sees the state after leg 1 and splits it into
//! `C²` at the `|+y⟩` bin and `S²` at the `|−y⟩` bin. The x-axis run (QPEH)
//! sees the state after both legs and splits it into `|A|²/2` and `|B|²/2`.
//! From `|A|² = 1 + 2SC sin δ` the leg-2 angle follows, and then
//! `θ = atan((S − C)/(S + C) · tan(δ/2))`.

use serde::Serialize;

use crate::error::{Error, Result, Warning};
use crate::gates::{rx, ry, Axis};
use crate::generator::{amplitudes_ab, amplitudes_cs, theta_closed_form, total_phase, wrap_angle};
use crate::generator::{AmplitudePair, PathParams};
use crate::qpe::{decode, run_qpe, ConfigEcho, DecodeOptions, Decoded, QpeConfig};
use crate::sampling::Histogram;

pub const DEFAULT_SC_MIN: f64 = 1e-6;
pub const DEFAULT_TOL_CLAMP: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `δ = asin(sin δ)`, covering `|δ| <= π/2`.
    #[default]
    Principal,
    /// `δ = π − asin(sin δ)`.
    Reflected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionOptions {
    pub decode: DecodeOptions,
    /// Smallest `|2SC|` accepted when inverting for `sin δ`.
    pub sc_min: f64,
    /// Largest excess of `|sin δ|` over 1 that is clamped rather than rejected.
    pub tol_clamp: f64,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        ExtractionOptions {
            decode: DecodeOptions::default(),
            sc_min: DEFAULT_SC_MIN,
            tol_clamp: DEFAULT_TOL_CLAMP,
        }
    }
}

/// Renormalized nonnegative roots of the two QPEV bin weights.
pub fn reconstruct_cs(p_plus: f64, p_minus: f64) -> Result<AmplitudePair> {
    if !(p_plus >= 0.0 && p_minus >= 0.0) {
        return Err(Error::Config(format!(
            "bin weights must be nonnegative, got ({p_plus}, {p_minus})"
        )));
    }
    let total = p_plus + p_minus;
    if total <= 0.0 {
        return Err(Error::EmptyHistogram);
    }
    Ok(AmplitudePair {
        c: (p_plus / total).sqrt(),
        s: (p_minus / total).sqrt(),
    })
}

/// `|A| = √(2 p₊)` from the QPEH `|+x⟩` bin weight.
pub fn reconstruct_abs_a(p_plus: f64) -> f64 {
    debug_assert!((0.0..=1.0 + 1e-12).contains(&p_plus));
    (2.0 * p_plus.max(0.0)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SinDelta {
    /// Clamped into `[-1, 1]`.
    pub value: f64,
    pub raw: f64,
    pub clamped: bool,
}

pub fn infer_sin_delta(
    abs_a: f64,
    cs: AmplitudePair,
    opts: &ExtractionOptions,
) -> Result<SinDelta> {
    let two_sc = 2.0 * cs.sc();
    if two_sc.is_nan() || two_sc.abs() < opts.sc_min {
        return Err(Error::Singular {
            two_sc,
            min: opts.sc_min,
        });
    }
    let raw = (abs_a * abs_a - 1.0) / two_sc;
    if raw.abs() > 1.0 + opts.tol_clamp {
        return Err(Error::Inconsistent {
            value: raw,
            tolerance: opts.tol_clamp,
        });
    }
    Ok(SinDelta {
        value: raw.clamp(-1.0, 1.0),
        raw,
        clamped: raw.abs() > 1.0,
    })
}

pub fn theta_from_estimates(cs: AmplitudePair, delta: f64) -> Result<f64> {
    theta_closed_form(cs, delta).ok_or_else(|| {
        Error::Branch(format!(
            "S + C = {} is not positive; closed-form theta undefined",
            cs.s + cs.c
        ))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegisterReport {
    pub config: ConfigEcho,
    pub histogram: Histogram,
    pub decoded: Decoded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticReference {
    pub c: f64,
    pub s: f64,
    pub abs_a: f64,
    pub sin_delta: f64,
    pub magnitude: f64,
    /// `arg⟨0|ψ₂⟩`.
    pub theta: f64,
}

impl AnalyticReference {
    pub fn new(params: PathParams) -> Result<Self> {
        let cs = amplitudes_cs(params.eta);
        let tp = total_phase(params)?;
        Ok(AnalyticReference {
            c: cs.c,
            s: cs.s,
            abs_a: amplitudes_ab(params).a.norm(),
            sin_delta: params.delta.sin(),
            magnitude: tp.magnitude,
            theta: tp.theta,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractionResult {
    pub params: PathParams,
    pub branch: Branch,
    pub qpev: RegisterReport,
    pub qpeh: RegisterReport,
    pub c_est: f64,
    pub s_est: f64,
    /// `|p₊ + p₋ − 1|` of the QPEV weights before renormalization.
    pub norm_defect: f64,
    pub abs_a_est: f64,
    pub sin_delta_est: f64,
    pub sin_delta_raw: f64,
    pub delta_est: f64,
    pub theta_est: f64,
    pub theta_analytic: f64,
    pub coverage_v: f64,
    pub coverage_h: f64,
    /// `theta_est − theta_analytic` wrapped into `(-π, π]`.
    pub residual_theta: f64,
    pub analytic: AnalyticReference,
    pub warnings: Vec<Warning>,
}

/// Seeds for the QPEV and QPEH readouts derived from one user seed, so the
/// two registers draw from unrelated streams.
pub fn paired_seeds(seed: u64) -> (u64, u64) {
    (seed, seed ^ 0x9E37_79B9_7F4A_7C15)
}

/// QPEV config for leg 1: target prepared with `rx(-η)`.
pub fn qpev_config(base: &QpeConfig, eta: f64) -> QpeConfig {
    base.clone().with_prep(vec![rx(-eta)])
}

/// QPEH config for both legs: target prepared with `ry(δ)·rx(-η)`.
pub fn qpeh_config(base: &QpeConfig, params: PathParams) -> QpeConfig {
    base.clone()
        .with_prep(vec![rx(-params.eta), ry(params.delta)])
}

fn run_register(cfg: &QpeConfig, name: &str, opts: &DecodeOptions) -> Result<RegisterReport> {
    let histogram = run_qpe(cfg)?;
    let mut decoded = decode(&histogram, cfg, opts)?;
    for w in &mut decoded.warnings {
        if let Warning::Leakage { register, .. } = w {
            *register = name.to_string();
        }
    }
    Ok(RegisterReport {
        config: cfg.echo(),
        histogram,
        decoded,
    })
}

pub fn full_pipeline(
    params: PathParams,
    qpev: &QpeConfig,
    qpeh: &QpeConfig,
    branch: Branch,
) -> Result<ExtractionResult> {
    full_pipeline_with(params, qpev, qpeh, branch, &ExtractionOptions::default())
}

/// Runs both QPE registers and inverts their readouts. The preparation gates
/// of `qpev` and `qpeh` are replaced by the leg-1 and two-leg models.
pub fn full_pipeline_with(
    params: PathParams,
    qpev: &QpeConfig,
    qpeh: &QpeConfig,
    branch: Branch,
    opts: &ExtractionOptions,
) -> Result<ExtractionResult> {
    if qpev.aux.axis != Axis::Y || qpeh.aux.axis != Axis::X {
        return Err(Error::Config(
            "QPEV needs a y-axis auxiliary rotation and QPEH an x-axis one".into(),
        ));
    }
    if !(params.eta.is_finite() && params.delta.is_finite()) {
        return Err(Error::Config("path angles must be finite".into()));
    }
    let v = run_register(&qpev_config(qpev, params.eta), "qpev", &opts.decode)?;
    let h = run_register(&qpeh_config(qpeh, params), "qpeh", &opts.decode)?;
    let mut warnings: Vec<Warning> = v
        .decoded
        .warnings
        .iter()
        .chain(&h.decoded.warnings)
        .cloned()
        .collect();
    let eta = params.eta;
    if !(eta > -std::f64::consts::FRAC_PI_2 && eta <= std::f64::consts::FRAC_PI_2) {
        warnings.push(Warning::BranchAmbiguity { eta });
    }

    let cs = reconstruct_cs(v.decoded.p_plus, v.decoded.p_minus)?;
    let norm_defect = (v.decoded.p_plus + v.decoded.p_minus - 1.0).abs();
    if h.decoded.coverage <= 0.0 {
        return Err(Error::EmptyHistogram);
    }
    // same common-mode renormalization as for C, S; a no-op at full coverage
    let abs_a = reconstruct_abs_a(h.decoded.p_plus / h.decoded.coverage);
    let sin_delta = infer_sin_delta(abs_a, cs, opts)?;
    if sin_delta.clamped {
        warnings.push(Warning::SinDeltaClamped { raw: sin_delta.raw });
    }
    let asin = sin_delta.value.asin();
    let delta_est = match branch {
        Branch::Principal => asin,
        Branch::Reflected => std::f64::consts::PI - asin,
    };
    let theta_est = theta_from_estimates(cs, delta_est)?;

    let analytic = AnalyticReference::new(params)?;
    if let Some(w) = total_phase(params)?.warning() {
        warnings.push(w);
    }
    Ok(ExtractionResult {
        params,
        branch,
        c_est: cs.c,
        s_est: cs.s,
        norm_defect,
        abs_a_est: abs_a,
        sin_delta_est: sin_delta.value,
        sin_delta_raw: sin_delta.raw,
        delta_est,
        theta_est,
        theta_analytic: analytic.theta,
        coverage_v: v.decoded.coverage,
        coverage_h: h.decoded.coverage,
        residual_theta: wrap_angle(theta_est - analytic.theta),
        analytic,
        warnings,
        qpev: v,
        qpeh: h,
    })
}
