//! Dense statevector.
//!
//! Amplitudes are stored as a flat `Vec<Complex64>` (interleaved re/im).
//! Qubit `q` is the bit of weight `2^q` in the amplitude index, so qubit 0 is
//! the least significant bit. Readout ordering is chosen by the caller in
//! [`StateVector::probabilities`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::GateMatrix2;
use crate::kernel::{self, Exec};

pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn new(num_qubits: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Wraps raw amplitudes. The length must be a power of two; the norm is
    /// not checked.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::Config(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_size(num_qubits)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Config("non-finite amplitude".into()));
        }
        Ok(StateVector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::Index {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    pub fn apply_single(&mut self, gate: &GateMatrix2, target: usize) -> Result<()> {
        self.apply_single_with(gate, target, Exec::auto(self.num_qubits))
    }

    pub fn apply_single_with(
        &mut self,
        gate: &GateMatrix2,
        target: usize,
        exec: Exec,
    ) -> Result<()> {
        self.check_qubit(target)?;
        debug_assert!(gate.is_unitary(1e-12), "non-unitary gate {gate:?}");
        kernel::single(&mut self.amps, gate, target, exec);
        Ok(())
    }

    /// Applies `gate` to `target` on the subspace where `control` is 1.
    pub fn apply_controlled(
        &mut self,
        gate: &GateMatrix2,
        control: usize,
        target: usize,
    ) -> Result<()> {
        self.apply_controlled_with(gate, control, target, Exec::auto(self.num_qubits))
    }

    pub fn apply_controlled_with(
        &mut self,
        gate: &GateMatrix2,
        control: usize,
        target: usize,
        exec: Exec,
    ) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::Config(format!(
                "control and target are both qubit {control}"
            )));
        }
        debug_assert!(gate.is_unitary(1e-12), "non-unitary gate {gate:?}");
        kernel::controlled(&mut self.amps, gate, control, target, exec);
        Ok(())
    }

    pub fn swap(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        kernel::swap_seq(&mut self.amps, a, b);
        Ok(())
    }

    /// Marginal distribution over `qubits`. The first listed qubit is the most
    /// significant bit of the outcome index.
    pub fn probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        check_distinct(qubits, self.num_qubits)?;
        let k = qubits.len();
        let mut out = vec![0.0; 1 << k];
        // contiguous low register in MSB-first order: outcome == index & mask
        let is_low_block = qubits.iter().enumerate().all(|(p, &q)| q == k - 1 - p);
        if is_low_block {
            let mask = (1usize << k) - 1;
            for (i, a) in self.amps.iter().enumerate() {
                out[i & mask] += a.norm_sqr();
            }
        } else {
            for (i, a) in self.amps.iter().enumerate() {
                let m = qubits
                    .iter()
                    .fold(0usize, |acc, &q| (acc << 1) | ((i >> q) & 1));
                out[m] += a.norm_sqr();
            }
        }
        Ok(out)
    }
}

fn check_size(num_qubits: usize) -> Result<()> {
    if !(1..=MAX_QUBITS).contains(&num_qubits) {
        return Err(Error::Size {
            requested: num_qubits,
            min: 1,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

pub(crate) fn check_distinct(qubits: &[usize], num_qubits: usize) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::Config("empty qubit list".into()));
    }
    let mut seen = 0u64;
    for &q in qubits {
        if q >= num_qubits {
            return Err(Error::Index {
                index: q,
                num_qubits,
            });
        }
        if seen & (1 << q) != 0 {
            return Err(Error::Config(format!("qubit {q} listed twice")));
        }
        seen |= 1 << q;
    }
    Ok(())
}
