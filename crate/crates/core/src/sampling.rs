//! Measurement readout: exact distributions and seeded multinomial draws.
//!
//! The generator is ChaCha8 (`rand_chacha`) seeded with
//! `SeedableRng::seed_from_u64(seed)`. Each shot consumes one `u64`, mapped to
//! a uniform `f64` in `[0, 1)` from its top 53 bits, and is assigned to the
//! first outcome whose cumulative probability exceeds it. Histograms are a
//! pure function of `(probabilities, shots, seed)`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Readout {
    Exact {
        probabilities: Vec<f64>,
    },
    Sampled {
        counts: Vec<u64>,
        shots: u64,
        seed: u64,
    },
}

/// Outcome distribution over an `num_bits`-bit register, indexed densely by
/// outcome integer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub num_bits: u32,
    pub readout: Readout,
}

impl Histogram {
    pub fn exact(probabilities: Vec<f64>) -> Result<Self> {
        let num_bits = bits_for(probabilities.len())?;
        Ok(Histogram {
            num_bits,
            readout: Readout::Exact { probabilities },
        })
    }

    pub fn from_counts(counts: Vec<u64>, seed: u64) -> Result<Self> {
        let num_bits = bits_for(counts.len())?;
        let shots = counts.iter().sum();
        Ok(Histogram {
            num_bits,
            readout: Readout::Sampled {
                counts,
                shots,
                seed,
            },
        })
    }

    pub fn len(&self) -> usize {
        1 << self.num_bits
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mode(&self) -> Mode {
        match self.readout {
            Readout::Exact { .. } => Mode::Exact,
            Readout::Sampled { .. } => Mode::Sampled,
        }
    }

    /// Zero in exact mode.
    pub fn total_shots(&self) -> u64 {
        match self.readout {
            Readout::Exact { .. } => 0,
            Readout::Sampled { shots, .. } => shots,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self.readout {
            Readout::Exact { .. } => None,
            Readout::Sampled { seed, .. } => Some(seed),
        }
    }

    /// Probability (exact mode) or relative frequency (sampled mode).
    pub fn probability(&self, outcome: usize) -> f64 {
        match &self.readout {
            Readout::Exact { probabilities } => probabilities[outcome],
            Readout::Sampled { counts, shots, .. } => {
                if *shots == 0 {
                    0.0
                } else {
                    counts[outcome] as f64 / *shots as f64
                }
            }
        }
    }

    pub fn count(&self, outcome: usize) -> Option<u64> {
        match &self.readout {
            Readout::Exact { .. } => None,
            Readout::Sampled { counts, .. } => Some(counts[outcome]),
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.len()).map(|m| self.probability(m)).collect()
    }

    /// Outcomes with nonzero weight and their probability or frequency.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        (0..self.len())
            .map(|m| (m, self.probability(m)))
            .filter(|&(_, p)| p != 0.0)
    }
}

fn bits_for(len: usize) -> Result<u32> {
    if !len.is_power_of_two() {
        return Err(Error::Config(format!(
            "histogram length {len} is not a power of two"
        )));
    }
    Ok(len.trailing_zeros())
}

#[inline]
fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Multinomial draw of `shots` outcomes from `probabilities`.
pub fn sample_distribution(probabilities: &[f64], shots: u64, seed: u64) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::Config("shots must be >= 1".into()));
    }
    if probabilities.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::Config(
            "probabilities must be finite and >= 0".into(),
        ));
    }
    let mut cdf = Vec::with_capacity(probabilities.len());
    let mut acc = 0.0;
    for p in probabilities {
        acc += p;
        cdf.push(acc);
    }
    if acc <= 0.0 {
        return Err(Error::EmptyHistogram);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; probabilities.len()];
    let last = counts.len() - 1;
    for _ in 0..shots {
        // scaling by the total keeps the draw inside the support when the
        // cumulative sum falls a rounding error short of 1
        let x = uniform(&mut rng) * acc;
        let idx = cdf.partition_point(|&c| c <= x);
        counts[idx.min(last)] += 1;
    }
    Histogram::from_counts(counts, seed)
}

/// Samples the marginal over `qubits` (first listed qubit = most significant
/// outcome bit).
pub fn sample(state: &StateVector, qubits: &[usize], shots: u64, seed: u64) -> Result<Histogram> {
    let probs = state.probabilities(qubits)?;
    sample_distribution(&probs, shots, seed)
}
