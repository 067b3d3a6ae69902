//! Quantum phase estimation of a single-qubit rotation.
//!
//! Register layout: counting qubits `0..n` (qubit `j` controls `U^(2^j)`) and
//! the target on qubit `n`. The counting register is read MSB-first
//! (`n-1, …, 0`), so outcome `m` stands for the fraction `m / 2ⁿ`.
//!
//! With `R(a)|±⟩ = e^{∓ia/2}|±⟩` and QPE estimating `φ` in `e^{2πiφ}`, the
//! `|−axis⟩` component lands at `φ = a/(4π)` and the `|+axis⟩` component at
//! `φ = 1 − a/(4π)` (mod 1). For `a = π/4` these are 1/16 and 15/16.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result, Warning};
use crate::gates::{hadamard, rotation_power, GateMatrix2, RotationSpec};
use crate::iqft::{apply_iqft, build_iqft};
use crate::sampling::{sample_distribution, Histogram, Mode};
use crate::state::StateVector;

pub const DEFAULT_COUNTING_QUBITS: usize = 10;
pub const MAX_COUNTING_QUBITS: usize = 16;
pub const DEFAULT_SHOTS: u64 = 10_000;
pub const DEFAULT_COVERAGE_THRESHOLD: f64 = 0.98;
/// Window used for non-dyadic auxiliary angles when none is given.
pub const DEFAULT_LEAKY_WINDOW: usize = 2;
const DYADIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct QpeConfig {
    pub counting_qubits: usize,
    pub aux: RotationSpec,
    /// Gates applied in order to the target, starting from `|0⟩`.
    pub target_prep: Vec<GateMatrix2>,
    pub mode: Mode,
    pub shots: u64,
    pub seed: u64,
}

impl QpeConfig {
    /// Exact-mode config with the default register width and no preparation.
    pub fn new(aux: RotationSpec) -> Self {
        QpeConfig {
            counting_qubits: DEFAULT_COUNTING_QUBITS,
            aux,
            target_prep: Vec::new(),
            mode: Mode::Exact,
            shots: DEFAULT_SHOTS,
            seed: 0,
        }
    }

    pub fn with_counting_qubits(mut self, n: usize) -> Self {
        self.counting_qubits = n;
        self
    }

    pub fn with_prep(mut self, gates: Vec<GateMatrix2>) -> Self {
        self.target_prep = gates;
        self
    }

    pub fn exact(mut self) -> Self {
        self.mode = Mode::Exact;
        self
    }

    pub fn sampled(mut self, shots: u64, seed: u64) -> Self {
        self.mode = Mode::Sampled;
        self.shots = shots;
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_COUNTING_QUBITS).contains(&self.counting_qubits) {
            return Err(Error::Size {
                requested: self.counting_qubits,
                min: 1,
                max: MAX_COUNTING_QUBITS,
            });
        }
        if self.mode == Mode::Sampled && self.shots == 0 {
            return Err(Error::Config("shots must be >= 1 in sampled mode".into()));
        }
        if !self.aux.angle.is_finite() {
            return Err(Error::Config("auxiliary angle must be finite".into()));
        }
        if let Some(g) = self
            .target_prep
            .iter()
            .find(|g| !g.is_finite() || !g.is_unitary(1e-12))
        {
            return Err(Error::Config(format!(
                "target preparation gate is not unitary: {g:?}"
            )));
        }
        Ok(())
    }

    /// Serializable summary, without the preparation matrices.
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            counting_qubits: self.counting_qubits,
            aux: self.aux,
            mode: self.mode,
            shots: match self.mode {
                Mode::Exact => 0,
                Mode::Sampled => self.shots,
            },
            seed: match self.mode {
                Mode::Exact => None,
                Mode::Sampled => Some(self.seed),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub counting_qubits: usize,
    pub aux: RotationSpec,
    pub mode: Mode,
    pub shots: u64,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpectedBins {
    /// Bin of the `|+axis⟩` eigenvector (eigenvalue `e^{-ia/2}`).
    pub m_plus: usize,
    /// Bin of the `|−axis⟩` eigenvector (eigenvalue `e^{+ia/2}`).
    pub m_minus: usize,
    /// `2ⁿ·a/(4π)` is an integer, so each eigencomponent lands in one bin.
    pub dyadic_exact: bool,
}

pub fn expected_bins(config: &QpeConfig) -> ExpectedBins {
    let dim = 1i64 << config.counting_qubits;
    let x = dim as f64 * config.aux.angle / (4.0 * PI);
    let rounded = x.round();
    let dyadic_exact = (x - rounded).abs() <= DYADIC_TOL * x.abs().max(1.0);
    let m_minus = (rounded as i64).rem_euclid(dim);
    let m_plus = (dim - m_minus).rem_euclid(dim);
    ExpectedBins {
        m_plus: m_plus as usize,
        m_minus: m_minus as usize,
        dyadic_exact,
    }
}

/// Runs the full circuit and reads out the counting register.
pub fn run_qpe(config: &QpeConfig) -> Result<Histogram> {
    let probs = qpe_distribution(config)?;
    match config.mode {
        Mode::Exact => Histogram::exact(probs),
        Mode::Sampled => sample_distribution(&probs, config.shots, config.seed),
    }
}

/// Exact counting-register distribution, indexed by outcome.
pub fn qpe_distribution(config: &QpeConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let n = config.counting_qubits;
    let target = n;
    let mut state = StateVector::new(n + 1)?;
    for gate in &config.target_prep {
        state.apply_single(gate, target)?;
    }
    let h = hadamard();
    for q in 0..n {
        state.apply_single(&h, q)?;
    }
    for j in 0..n {
        state.apply_controlled(&rotation_power(config.aux, 1u64 << j), j, target)?;
    }
    let counting: Vec<usize> = (0..n).rev().collect();
    apply_iqft(&mut state, &build_iqft(&counting)?)?;
    state.probabilities(&counting)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecodedPeak {
    pub outcome: usize,
    pub fraction: f64,
    /// `2πφ` folded into `(-π, π]`.
    pub signed_angle: f64,
    pub probability: f64,
}

impl DecodedPeak {
    pub fn new(outcome: usize, num_bits: usize, probability: f64) -> Self {
        let fraction = outcome as f64 / (1u64 << num_bits) as f64;
        let signed_angle = if fraction <= 0.5 {
            2.0 * PI * fraction
        } else {
            2.0 * PI * (fraction - 1.0)
        };
        DecodedPeak {
            outcome,
            fraction,
            signed_angle,
            probability,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeOptions {
    /// Half-width of the cyclic window summed around each expected bin.
    /// `None` picks 0 for dyadic-exact angles and
    /// [`DEFAULT_LEAKY_WINDOW`] otherwise.
    pub window: Option<usize>,
    pub coverage_threshold: f64,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        DecodeOptions {
            window: None,
            coverage_threshold: DEFAULT_COVERAGE_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decoded {
    pub p_plus: f64,
    pub p_minus: f64,
    pub coverage: f64,
    pub window: usize,
    pub dyadic_exact: bool,
    pub plus: DecodedPeak,
    pub minus: DecodedPeak,
    pub warnings: Vec<Warning>,
}

pub fn decode(hist: &Histogram, config: &QpeConfig, opts: &DecodeOptions) -> Result<Decoded> {
    let n = config.counting_qubits;
    if hist.num_bits as usize != n {
        return Err(Error::Config(format!(
            "histogram has {} bits, config expects {n}",
            hist.num_bits
        )));
    }
    let bins = expected_bins(config);
    let window = opts.window.unwrap_or(if bins.dyadic_exact {
        0
    } else {
        DEFAULT_LEAKY_WINDOW
    });
    let dim = 1usize << n;
    let gap = {
        let d = bins.m_plus.abs_diff(bins.m_minus);
        d.min(dim - d)
    };
    if gap <= 2 * window {
        return Err(Error::Config(format!(
            "decode windows overlap: bins {} and {} with half-width {window}",
            bins.m_plus, bins.m_minus
        )));
    }
    let mass = |center: usize| -> f64 {
        (0..=2 * window)
            .map(|k| hist.probability((center + dim + k - window) % dim))
            .sum()
    };
    let p_plus = mass(bins.m_plus);
    let p_minus = mass(bins.m_minus);
    let coverage = p_plus + p_minus;
    let mut warnings = Vec::new();
    if coverage < opts.coverage_threshold {
        warnings.push(Warning::Leakage {
            register: "counting".into(),
            coverage,
            threshold: opts.coverage_threshold,
        });
    }
    Ok(Decoded {
        p_plus,
        p_minus,
        coverage,
        window,
        dyadic_exact: bins.dyadic_exact,
        plus: DecodedPeak::new(bins.m_plus, n, p_plus),
        minus: DecodedPeak::new(bins.m_minus, n, p_minus),
        warnings,
    })
}

/// `"0.b₁b₂…bₙ"` with `b₁` the most significant fraction bit.
pub fn format_binary(outcome: usize, num_bits: usize) -> String {
    let mut s = String::with_capacity(num_bits + 2);
    s.push_str("0.");
    for k in (0..num_bits).rev() {
        s.push(if (outcome >> k) & 1 == 1 { '1' } else { '0' });
    }
    s
}
