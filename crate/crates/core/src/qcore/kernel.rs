use super::C64;

/// Applies a dense `2^k × 2^k` row-major matrix to `targets` of an
/// `n`-qubit amplitude buffer in place. Targets are assumed validated; the
/// matrix's own index is big-endian over the target list.
pub(crate) fn apply_dense(amps: &mut [C64], qubits: usize, matrix: &[C64], targets: &[usize]) {
    let k = targets.len();
    let dim = 1usize << k;
    debug_assert_eq!(matrix.len(), dim * dim);
    debug_assert_eq!(amps.len(), 1usize << qubits);

    let masks: Vec<usize> = targets.iter().map(|&t| 1usize << (qubits - 1 - t)).collect();
    let target_mask: usize = masks.iter().fold(0, |acc, m| acc | m);

    let mut offsets = vec![0usize; dim];
    for (s, off) in offsets.iter_mut().enumerate() {
        for (j, &m) in masks.iter().enumerate() {
            if s & (1 << (k - 1 - j)) != 0 {
                *off |= m;
            }
        }
    }

    let mut gathered = vec![C64::new(0.0, 0.0); dim];
    for base in 0..amps.len() {
        if base & target_mask != 0 {
            continue;
        }
        for (g, &off) in gathered.iter_mut().zip(&offsets) {
            *g = amps[base | off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            let row = &matrix[r * dim..(r + 1) * dim];
            amps[base | off] = row.iter().zip(&gathered).map(|(m, g)| m * g).sum();
        }
    }
}
