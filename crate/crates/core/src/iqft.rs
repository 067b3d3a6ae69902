//! Inverse quantum Fourier transform on a counting register.
//!
//! The register is given MSB-first: `qubits[0]` carries `b₁` of the binary
//! fraction `0.b₁b₂…bₙ`, so after the transform the measured integer `m`
//! (read with the same ordering) equals `2ⁿ · 0.b₁b₂…bₙ`.
//!
//! The plan is `R · conj(C)`, where `C` is the textbook QFT circuit without
//! the terminal swaps and `R` is the bit reversal. Since `F = R·C` and the DFT
//! matrix is symmetric, `F⁻¹ = (F⁻¹)ᵀ = R·conj(C)`: the same gate order as the
//! forward circuit, negated phases, swaps last.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{hadamard, phase};
use crate::state::{check_distinct, StateVector};

/// Largest register for which the dense reference matrix is built.
pub const DENSE_MAX_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IqftOp {
    Hadamard(usize),
    ControlledPhase {
        control: usize,
        target: usize,
        angle: f64,
    },
    Swap(usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IqftPlan {
    qubits: Vec<usize>,
    ops: Vec<IqftOp>,
}

impl IqftPlan {
    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn ops(&self) -> &[IqftOp] {
        &self.ops
    }

    /// The forward QFT on the same register.
    pub fn inverse(&self) -> IqftPlan {
        let ops = self
            .ops
            .iter()
            .rev()
            .map(|op| match *op {
                IqftOp::ControlledPhase {
                    control,
                    target,
                    angle,
                } => IqftOp::ControlledPhase {
                    control,
                    target,
                    angle: -angle,
                },
                other => other,
            })
            .collect();
        IqftPlan {
            qubits: self.qubits.clone(),
            ops,
        }
    }
}

pub fn build_iqft(qubits: &[usize]) -> Result<IqftPlan> {
    let bound = qubits.iter().copied().max().map_or(0, |q| q + 1);
    check_distinct(qubits, bound)?;
    let n = qubits.len();
    let mut ops = Vec::with_capacity(n * (n + 1) / 2 + n / 2);
    for i in 0..n {
        ops.push(IqftOp::Hadamard(qubits[i]));
        for j in i + 1..n {
            ops.push(IqftOp::ControlledPhase {
                control: qubits[j],
                target: qubits[i],
                angle: -PI / (1u64 << (j - i)) as f64,
            });
        }
    }
    for i in 0..n / 2 {
        ops.push(IqftOp::Swap(qubits[i], qubits[n - 1 - i]));
    }
    Ok(IqftPlan {
        qubits: qubits.to_vec(),
        ops,
    })
}

pub fn apply_iqft(state: &mut StateVector, plan: &IqftPlan) -> Result<()> {
    check_distinct(&plan.qubits, state.num_qubits())?;
    let h = hadamard();
    for op in &plan.ops {
        match *op {
            IqftOp::Hadamard(q) => state.apply_single(&h, q)?,
            IqftOp::ControlledPhase {
                control,
                target,
                angle,
            } => state.apply_controlled(&phase(angle), control, target)?,
            IqftOp::Swap(a, b) => state.swap(a, b)?,
        }
    }
    Ok(())
}

/// Dense `F⁻¹` with `F⁻¹[j][k] = e^{-2πi jk/2ⁿ}/√2ⁿ`, rows and columns in
/// register outcome order.
pub fn dense_iqft_reference(n: usize) -> Result<Vec<Vec<Complex64>>> {
    if !(1..=DENSE_MAX_QUBITS).contains(&n) {
        return Err(Error::Size {
            requested: n,
            min: 1,
            max: DENSE_MAX_QUBITS,
        });
    }
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    Ok((0..dim)
        .map(|j| {
            (0..dim)
                .map(|k| {
                    let e = (j * k) % dim;
                    Complex64::from_polar(scale, -2.0 * PI * e as f64 / dim as f64)
                })
                .collect()
        })
        .collect())
}
