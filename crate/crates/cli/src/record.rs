//! Serialized run records.
//!
//! JSON field names are stable; see `schema/run_record.schema.json`. Fields
//! that do not apply to a subcommand are `null`.

use serde::Serialize;

use qphase::extraction::Branch;
use qphase::qpe::{format_binary, Decoded, DecodedPeak};
use qphase::sampling::{Histogram, Mode};
use qphase::sweep::SweepRow;
use qphase::{Complex64, Warning};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exact-mode probabilities at or below this are treated as empty bins.
pub const EXACT_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConfigRecord {
    pub eta: Option<f64>,
    pub delta: Option<f64>,
    pub aux_v: Option<f64>,
    pub aux_h: Option<f64>,
    pub n: Option<usize>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub seeds: Option<SeedRecord>,
    pub mode: Option<Mode>,
    pub branch: Option<Branch>,
    pub window: Option<usize>,
    pub coverage_threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedRecord {
    pub qpev: Option<u64>,
    pub qpeh: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Registers<T> {
    pub qpev: Option<T>,
    pub qpeh: Option<T>,
}

impl<T> Default for Registers<T> {
    fn default() -> Self {
        Registers {
            qpev: None,
            qpeh: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinRecord {
    pub outcome: usize,
    pub binary: String,
    pub probability: f64,
    pub count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramRecord {
    pub num_bits: u32,
    pub mode: Mode,
    pub shots: u64,
    pub seed: Option<u64>,
    pub bins: Vec<BinRecord>,
}

impl From<&Histogram> for HistogramRecord {
    fn from(h: &Histogram) -> Self {
        let n = h.num_bits as usize;
        let bins = h
            .nonzero()
            .filter(|&(_, p)| h.mode() == Mode::Sampled || p > EXACT_FLOOR)
            .map(|(m, p)| BinRecord {
                outcome: m,
                binary: format_binary(m, n),
                probability: p,
                count: h.count(m),
            })
            .collect();
        HistogramRecord {
            num_bits: h.num_bits,
            mode: h.mode(),
            shots: h.total_shots(),
            seed: h.seed(),
            bins,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakRecord {
    pub outcome: usize,
    pub binary: String,
    pub fraction: f64,
    pub signed_angle: f64,
    pub probability: f64,
}

impl PeakRecord {
    fn new(p: &DecodedPeak, n: usize) -> Self {
        PeakRecord {
            outcome: p.outcome,
            binary: format_binary(p.outcome, n),
            fraction: p.fraction,
            signed_angle: p.signed_angle,
            probability: p.probability,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodedRecord {
    pub p_plus: f64,
    pub p_minus: f64,
    pub coverage: f64,
    pub window: usize,
    pub dyadic_exact: bool,
    pub plus: PeakRecord,
    pub minus: PeakRecord,
}

impl DecodedRecord {
    pub fn new(d: &Decoded, n: usize) -> Self {
        DecodedRecord {
            p_plus: d.p_plus,
            p_minus: d.p_minus,
            coverage: d.coverage,
            window: d.window,
            dyadic_exact: d.dyadic_exact,
            plus: PeakRecord::new(&d.plus, n),
            minus: PeakRecord::new(&d.minus, n),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Estimates {
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[serde(rename = "S")]
    pub s: Option<f64>,
    #[serde(rename = "absA")]
    pub abs_a: Option<f64>,
    pub sin_delta: Option<f64>,
    pub delta: Option<f64>,
    pub theta: Option<f64>,
    #[serde(rename = "C2")]
    pub c2: Option<f64>,
    #[serde(rename = "S2")]
    pub s2: Option<f64>,
    #[serde(rename = "half_absA2")]
    pub half_abs_a2: Option<f64>,
    #[serde(rename = "half_absB2")]
    pub half_abs_b2: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexRecord {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexRecord {
    fn from(c: Complex64) -> Self {
        ComplexRecord { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AnalyticRecord {
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[serde(rename = "S")]
    pub s: Option<f64>,
    #[serde(rename = "absA")]
    pub abs_a: Option<f64>,
    /// Overlap argument `arg⟨0|ψ₂⟩`.
    pub theta: Option<f64>,
    pub theta_closed_form: Option<f64>,
    #[serde(rename = "C2")]
    pub c2: Option<f64>,
    #[serde(rename = "S2")]
    pub s2: Option<f64>,
    #[serde(rename = "A")]
    pub a: Option<ComplexRecord>,
    #[serde(rename = "B")]
    pub b: Option<ComplexRecord>,
    #[serde(rename = "absA2")]
    pub abs_a2: Option<f64>,
    #[serde(rename = "half_absA2")]
    pub half_abs_a2: Option<f64>,
    #[serde(rename = "half_absB2")]
    pub half_abs_b2: Option<f64>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub magnitude: Option<f64>,
    pub sin_delta: Option<f64>,
    pub path1_phase: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Residuals {
    pub theta: Option<f64>,
    #[serde(rename = "C2")]
    pub c2: Option<f64>,
    #[serde(rename = "half_absA2")]
    pub half_abs_a2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WarningRecord {
    pub code: String,
    pub message: String,
}

impl From<&Warning> for WarningRecord {
    fn from(w: &Warning) -> Self {
        WarningRecord {
            code: w.code().to_string(),
            message: w.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub config: ConfigRecord,
    pub histograms: Registers<HistogramRecord>,
    pub decoded: Registers<DecodedRecord>,
    pub estimates: Estimates,
    pub analytic: AnalyticRecord,
    pub residuals: Residuals,
    pub warnings: Vec<WarningRecord>,
    pub error: Option<ErrorRecord>,
    pub version: &'static str,
}

impl RunRecord {
    pub fn new(command: String, config: ConfigRecord) -> Self {
        RunRecord {
            command,
            config,
            histograms: Registers::default(),
            decoded: Registers::default(),
            estimates: Estimates::default(),
            analytic: AnalyticRecord::default(),
            residuals: Residuals::default(),
            warnings: Vec::new(),
            error: None,
            version: VERSION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub command: String,
    pub config: ConfigRecord,
    pub rows: Vec<SweepRow>,
    pub error: Option<ErrorRecord>,
    pub version: &'static str,
}

/// Column order of the histogram CSV.
pub const HISTOGRAM_COLUMNS: [&str; 7] = [
    "register",
    "outcome",
    "binary",
    "fraction",
    "signed_angle",
    "probability",
    "count",
];

/// Column order of the single-row analytic/pipeline CSV.
pub const SUMMARY_COLUMNS: [&str; 14] = [
    "eta",
    "delta",
    "C",
    "S",
    "absA",
    "sin_delta",
    "delta_est",
    "theta_est",
    "C_analytic",
    "S_analytic",
    "absA_analytic",
    "theta_analytic",
    "residual_theta",
    "warnings",
];

/// Column order of the sweep CSV.
pub const SWEEP_COLUMNS: [&str; 7] = [
    "eta",
    "delta",
    "C2",
    "half_absA2",
    "theta_analytic",
    "theta_est",
    "residual",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_histogram_csv<W: std::io::Write>(rec: &RunRecord, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HISTOGRAM_COLUMNS)?;
    for (name, h) in [
        ("qpev", &rec.histograms.qpev),
        ("qpeh", &rec.histograms.qpeh),
    ] {
        let Some(h) = h else { continue };
        let dim = (1u64 << h.num_bits) as f64;
        for b in &h.bins {
            let fraction = b.outcome as f64 / dim;
            let angle = if fraction <= 0.5 {
                2.0 * std::f64::consts::PI * fraction
            } else {
                2.0 * std::f64::consts::PI * (fraction - 1.0)
            };
            w.write_record([
                name.to_string(),
                b.outcome.to_string(),
                b.binary.clone(),
                fraction.to_string(),
                angle.to_string(),
                b.probability.to_string(),
                b.count.map(|c| c.to_string()).unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: std::io::Write>(rec: &RunRecord, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_COLUMNS)?;
    let warnings: Vec<&str> = rec.warnings.iter().map(|w| w.code.as_str()).collect();
    w.write_record([
        opt(rec.config.eta),
        opt(rec.config.delta),
        opt(rec.estimates.c),
        opt(rec.estimates.s),
        opt(rec.estimates.abs_a),
        opt(rec.estimates.sin_delta),
        opt(rec.estimates.delta),
        opt(rec.estimates.theta),
        opt(rec.analytic.c),
        opt(rec.analytic.s),
        opt(rec.analytic.abs_a),
        opt(rec.analytic.theta),
        opt(rec.residuals.theta),
        warnings.join(";"),
    ])?;
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.eta.to_string(),
            r.delta.to_string(),
            r.c2.to_string(),
            r.half_abs_a2.to_string(),
            r.theta_analytic.to_string(),
            r.theta_est.to_string(),
            r.residual.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
