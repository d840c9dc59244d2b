//! Dense state-vector primitives shared by the state, measure and protocol
//! code. Qubit 0 is the most significant bit of an amplitude index.

use crate::{CMatrix, C64};

/// Bit position (from the least significant end) of qubit `q` in an
/// `n`-qubit amplitude index.
#[inline]
pub(crate) fn shift(n: usize, q: usize) -> usize {
    n - 1 - q
}

/// Reads the bits of `qubits` out of `index`, first qubit most significant.
#[inline]
pub(crate) fn gather_bits(index: usize, n: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | ((index >> shift(n, q)) & 1))
}

/// Applies a `2^k x 2^k` matrix to the listed target qubits in place.
///
/// `targets` may be in any order; the first target is the most significant
/// bit of the gate's local index. Targets must be distinct and in range.
pub(crate) fn apply_gate(amps: &mut [C64], n: usize, gate: &CMatrix, targets: &[usize]) {
    let k = targets.len();
    let local = 1usize << k;
    debug_assert_eq!(gate.nrows(), local);
    debug_assert_eq!(amps.len(), 1 << n);

    let bits: Vec<usize> = targets.iter().map(|&q| 1usize << shift(n, q)).collect();
    let mask: usize = bits.iter().sum();
    let offsets: Vec<usize> = (0..local)
        .map(|j| {
            (0..k)
                .filter(|&i| (j >> (k - 1 - i)) & 1 == 1)
                .map(|i| bits[i])
                .sum()
        })
        .collect();

    let mut buf = vec![C64::new(0.0, 0.0); local];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (slot, &off) in buf.iter_mut().zip(&offsets) {
            *slot = amps[base | off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (c, b) in buf.iter().enumerate() {
                acc += gate[(r, c)] * b;
            }
            amps[base | off] = acc;
        }
    }
}

/// Reshapes an amplitude vector into the matrix whose rows are indexed by
/// the bits of `part_a` and whose columns are indexed by the remaining
/// qubits (both in increasing qubit order).
pub(crate) fn bipartite_matrix(amps: &[C64], n: usize, part_a: &[usize]) -> CMatrix {
    let rest: Vec<usize> = (0..n).filter(|q| !part_a.contains(q)).collect();
    let mut m = CMatrix::zeros(1 << part_a.len(), 1 << rest.len());
    for (idx, &a) in amps.iter().enumerate() {
        m[(gather_bits(idx, n, part_a), gather_bits(idx, n, &rest))] = a;
    }
    m
}

pub(crate) fn norm(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}
