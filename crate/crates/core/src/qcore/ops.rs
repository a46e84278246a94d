use num_complex::Complex64;

use super::linalg::CMatrix;
use super::space::{CompositeSpace, IndexSplit};
use super::state::{nonempty_keep, DensityMatrix, Operator};
use crate::error::Result;

/// Reduced state on the subsystems in `keep`, which stay in their original
/// relative order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let keep = nonempty_keep(rho.space(), keep)?;
    let m = trace_out(rho.space(), rho.matrix(), &keep);
    Ok(DensityMatrix::from_raw(rho.space().select(&keep), m))
}

pub(crate) fn trace_out(space: &CompositeSpace, m: &CMatrix, keep_sorted: &[usize]) -> CMatrix {
    let split = IndexSplit::new(space, keep_sorted);
    let table = split.join_table();
    let mut out = CMatrix::zeros(split.keep_dim, split.keep_dim);
    for i in 0..split.keep_dim {
        for j in 0..split.keep_dim {
            let mut acc = Complex64::ZERO;
            for r in 0..split.rest_dim {
                acc += m[(table[i][r], table[j][r])];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Partial transpose on a single subsystem.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<Operator> {
    partial_transpose_set(rho, &[subsystem])
}

/// Partial transpose on every subsystem in `subsystems`.
pub fn partial_transpose_set(rho: &DensityMatrix, subsystems: &[usize]) -> Result<Operator> {
    let subs = rho.space().normalize_indices(subsystems)?;
    Ok(Operator::from_raw(
        rho.space().clone(),
        transpose_blocks(rho.space(), rho.matrix(), &subs),
    ))
}

impl Operator {
    /// Partial transpose of an arbitrary operator; an involution.
    pub fn partial_transpose(&self, subsystems: &[usize]) -> Result<Operator> {
        let subs = self.space().normalize_indices(subsystems)?;
        Ok(Operator::from_raw(
            self.space().clone(),
            transpose_blocks(self.space(), self.matrix(), &subs),
        ))
    }
}

fn transpose_blocks(space: &CompositeSpace, m: &CMatrix, subs: &[usize]) -> CMatrix {
    if subs.is_empty() {
        return m.clone();
    }
    let split = IndexSplit::new(space, subs);
    let table = split.join_table();
    let d = space.total_dim();
    let mut out = CMatrix::zeros(d, d);
    for x in 0..d {
        let (kx, rx) = (split.keep_index[x], split.rest_index[x]);
        for y in 0..d {
            let (ky, ry) = (split.keep_index[y], split.rest_index[y]);
            out[(table[ky][rx], table[kx][ry])] = m[(x, y)];
        }
    }
    out
}
