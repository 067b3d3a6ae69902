//! In-place gate kernels over a flat amplitude slice.
//!
//! Qubit `q` is the bit of weight `2^q` in the amplitude index. A single-qubit
//! gate on `q` mixes the pairs `(i, i | 2^q)` for every `i` with bit `q` clear;
//! the slice is walked in blocks of `2^(q+1)` whose lower and upper halves are
//! exactly those pairs. The parallel kernels visit the same pairs with the
//! same arithmetic, so their output is bit-identical to the sequential ones.

use num_complex::Complex64;

use crate::gates::GateMatrix2;

/// Execution strategy for the gate kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise falls back
    /// to [`Exec::Sequential`].
    Parallel,
}

/// Registers at or above this size use [`Exec::Parallel`] by default.
pub const PARALLEL_MIN_QUBITS: usize = 14;

impl Exec {
    pub fn auto(num_qubits: usize) -> Exec {
        if cfg!(feature = "parallel") && num_qubits >= PARALLEL_MIN_QUBITS {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

#[inline]
fn mix(gate: &GateMatrix2, lo: &mut Complex64, hi: &mut Complex64) {
    let (a, b) = gate.apply(*lo, *hi);
    *lo = a;
    *hi = b;
}

pub fn single_seq(amps: &mut [Complex64], gate: &GateMatrix2, target: usize) {
    let stride = 1usize << target;
    for block in amps.chunks_exact_mut(stride << 1) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            mix(gate, a, b);
        }
    }
}

pub fn controlled_seq(amps: &mut [Complex64], gate: &GateMatrix2, control: usize, target: usize) {
    let stride = 1usize << target;
    let cmask = 1usize << control;
    for (bi, block) in amps.chunks_exact_mut(stride << 1).enumerate() {
        let base = bi * (stride << 1);
        if control > target && base & cmask == 0 {
            continue;
        }
        let (lo, hi) = block.split_at_mut(stride);
        for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            if (base + k) & cmask != 0 {
                mix(gate, a, b);
            }
        }
    }
}

/// Exchanges qubits `a` and `b`.
pub fn swap_seq(amps: &mut [Complex64], a: usize, b: usize) {
    if a == b {
        return;
    }
    let (ma, mb) = (1usize << a, 1usize << b);
    for i in 0..amps.len() {
        if i & ma != 0 && i & mb == 0 {
            amps.swap(i, i ^ ma ^ mb);
        }
    }
}

#[cfg(feature = "parallel")]
mod par {
    use super::*;
    use rayon::prelude::*;

    // Below this many blocks the work is split inside each block instead.
    const MIN_BLOCKS: usize = 64;
    const MIN_PAIRS_PER_TASK: usize = 1 << 12;

    pub fn single(amps: &mut [Complex64], gate: &GateMatrix2, target: usize) {
        let stride = 1usize << target;
        let blocks = amps.len() / (stride << 1);
        if blocks >= MIN_BLOCKS {
            let per_task = (MIN_PAIRS_PER_TASK / stride).max(1);
            amps.par_chunks_mut(stride << 1)
                .with_min_len(per_task)
                .for_each(|block| {
                    let (lo, hi) = block.split_at_mut(stride);
                    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                        mix(gate, a, b);
                    }
                });
        } else {
            for block in amps.chunks_exact_mut(stride << 1) {
                let (lo, hi) = block.split_at_mut(stride);
                lo.par_iter_mut()
                    .zip(hi.par_iter_mut())
                    .with_min_len(MIN_PAIRS_PER_TASK)
                    .for_each(|(a, b)| mix(gate, a, b));
            }
        }
    }

    pub fn controlled(amps: &mut [Complex64], gate: &GateMatrix2, control: usize, target: usize) {
        let stride = 1usize << target;
        let cmask = 1usize << control;
        let blocks = amps.len() / (stride << 1);
        let visit = |base: usize, k: usize, a: &mut Complex64, b: &mut Complex64| {
            if (base + k) & cmask != 0 {
                mix(gate, a, b);
            }
        };
        if blocks >= MIN_BLOCKS {
            let per_task = (MIN_PAIRS_PER_TASK / stride).max(1);
            amps.par_chunks_mut(stride << 1)
                .with_min_len(per_task)
                .enumerate()
                .for_each(|(bi, block)| {
                    let base = bi * (stride << 1);
                    let (lo, hi) = block.split_at_mut(stride);
                    for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                        visit(base, k, a, b);
                    }
                });
        } else {
            for (bi, block) in amps.chunks_exact_mut(stride << 1).enumerate() {
                let base = bi * (stride << 1);
                let (lo, hi) = block.split_at_mut(stride);
                lo.par_iter_mut()
                    .zip(hi.par_iter_mut())
                    .with_min_len(MIN_PAIRS_PER_TASK)
                    .enumerate()
                    .for_each(|(k, (a, b))| visit(base, k, a, b));
            }
        }
    }
}

pub fn single(amps: &mut [Complex64], gate: &GateMatrix2, target: usize, exec: Exec) {
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => par::single(amps, gate, target),
        _ => single_seq(amps, gate, target),
    }
}

pub fn controlled(
    amps: &mut [Complex64],
    gate: &GateMatrix2,
    control: usize,
    target: usize,
    exec: Exec,
) {
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => par::controlled(amps, gate, control, target),
        _ => controlled_seq(amps, gate, control, target),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{hadamard, rx, ry};

    fn pseudo_random_state(n: usize, seed: u64) -> Vec<Complex64> {
        // small LCG, deterministic and good enough for kernel comparisons
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = || {
            x = x
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((x >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        (0..1usize << n)
            .map(|_| Complex64::new(next(), next()))
            .collect()
    }

    #[test]
    fn parallel_kernels_bit_identical() {
        let n = 15;
        let gates = [hadamard(), rx(0.37), ry(-1.2)];
        for target in [0, 3, 9, 14] {
            for (gi, g) in gates.iter().enumerate() {
                let init = pseudo_random_state(n, (target * 7 + gi) as u64);
                let mut a = init.clone();
                let mut b = init.clone();
                single(&mut a, g, target, Exec::Sequential);
                single(&mut b, g, target, Exec::Parallel);
                assert_eq!(a, b);

                let control = (target + 5) % n;
                let mut a = init.clone();
                let mut b = init;
                controlled(&mut a, g, control, target, Exec::Sequential);
                controlled(&mut b, g, control, target, Exec::Parallel);
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn swap_exchanges_bits() {
        let mut amps: Vec<Complex64> = (0..8).map(|i| Complex64::new(i as f64, 0.0)).collect();
        swap_seq(&mut amps, 0, 2);
        // index b2b1b0 -> b0b1b2
        let expect = [0, 4, 2, 6, 1, 5, 3, 7];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(amps[i].re, *e as f64);
        }
    }
}
