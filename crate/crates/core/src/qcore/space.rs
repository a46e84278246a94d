use std::fmt;

use crate::error::{Error, Result};

/// Ordered tensor product of finite subsystems.
///
/// Subsystem 0 is the slowest-varying index of the composite basis
/// (row-major ordering), so `|i_0 i_1 ... i_k>` has flat index
/// `((i_0 * d_1 + i_1) * d_2 + ...)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompositeSpace {
    dims: Vec<usize>,
    total_dim: usize,
}

impl CompositeSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::domain(
                "a composite space needs at least one subsystem",
            ));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::domain(format!("subsystem dimension {d} is below 2")));
        }
        let total_dim = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::domain("composite dimension overflows usize"))?;
        Ok(Self { dims, total_dim })
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Number of subsystems.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self, subsystem: usize) -> Result<usize> {
        self.check_index(subsystem)?;
        Ok(self.dims[subsystem])
    }

    pub fn check_index(&self, subsystem: usize) -> Result<()> {
        if subsystem >= self.dims.len() {
            return Err(Error::domain(format!(
                "subsystem index {subsystem} out of range for {} subsystems",
                self.dims.len()
            )));
        }
        Ok(())
    }

    /// The space obtained by appending `other`'s subsystems after `self`'s.
    pub fn concat(&self, other: &CompositeSpace) -> CompositeSpace {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        CompositeSpace {
            total_dim: self.total_dim * other.total_dim,
            dims,
        }
    }

    /// Validates a subsystem index set and returns it sorted.
    pub(crate) fn normalize_indices(&self, indices: &[usize]) -> Result<Vec<usize>> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != indices.len() {
            return Err(Error::domain(format!(
                "repeated subsystem index in {indices:?}"
            )));
        }
        for &i in &sorted {
            self.check_index(i)?;
        }
        Ok(sorted)
    }

    /// Sub-space formed by the (sorted, validated) subsystems in `indices`.
    pub(crate) fn select(&self, indices: &[usize]) -> CompositeSpace {
        let dims: Vec<usize> = indices.iter().map(|&i| self.dims[i]).collect();
        CompositeSpace {
            total_dim: dims.iter().product(),
            dims,
        }
    }

    /// Per-subsystem digits of a flat basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    /// Flat basis index from per-subsystem digits.
    pub fn flat_index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&digit, &d)| acc * d + digit)
    }
}

impl fmt::Display for CompositeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join("x"))
    }
}

/// Splits every flat index of a space into (kept part, traced part).
pub(crate) struct IndexSplit {
    pub keep_index: Vec<usize>,
    pub rest_index: Vec<usize>,
    pub keep_dim: usize,
    pub rest_dim: usize,
}

impl IndexSplit {
    /// `keep` must be sorted and validated.
    pub fn new(space: &CompositeSpace, keep: &[usize]) -> Self {
        let n = space.len();
        let mut is_kept = vec![false; n];
        for &k in keep {
            is_kept[k] = true;
        }
        let keep_dim: usize = keep.iter().map(|&k| space.dims[k]).product();
        let rest_dim = space.total_dim / keep_dim;
        let total = space.total_dim;
        let mut keep_index = Vec::with_capacity(total);
        let mut rest_index = Vec::with_capacity(total);
        for x in 0..total {
            let digits = space.digits(x);
            let (mut k, mut r) = (0usize, 0usize);
            for (i, &digit) in digits.iter().enumerate() {
                if is_kept[i] {
                    k = k * space.dims[i] + digit;
                } else {
                    r = r * space.dims[i] + digit;
                }
            }
            keep_index.push(k);
            rest_index.push(r);
        }
        Self {
            keep_index,
            rest_index,
            keep_dim,
            rest_dim,
        }
    }

    /// Flat index from a (kept, traced) pair; inverse of the split.
    pub fn join_table(&self) -> Vec<Vec<usize>> {
        let mut table = vec![vec![0; self.rest_dim]; self.keep_dim];
        for (x, (&k, &r)) in self.keep_index.iter().zip(&self.rest_index).enumerate() {
            table[k][r] = x;
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dims() {
        assert!(CompositeSpace::new(vec![]).is_err());
        assert!(CompositeSpace::new(vec![2, 1]).is_err());
        let s = CompositeSpace::new(vec![2, 3, 4]).unwrap();
        assert_eq!(s.total_dim(), 24);
    }

    #[test]
    fn digits_roundtrip_row_major() {
        let s = CompositeSpace::new(vec![2, 3, 2]).unwrap();
        // |1 2 0> = (1*3 + 2)*2 + 0
        assert_eq!(s.flat_index(&[1, 2, 0]), 10);
        assert_eq!(s.digits(10), vec![1, 2, 0]);
        for x in 0..s.total_dim() {
            assert_eq!(s.flat_index(&s.digits(x)), x);
        }
    }

    #[test]
    fn normalize_rejects_duplicates_and_range() {
        let s = CompositeSpace::qubits(3).unwrap();
        assert!(s.normalize_indices(&[0, 0]).is_err());
        assert!(s.normalize_indices(&[3]).is_err());
        assert_eq!(s.normalize_indices(&[2, 0]).unwrap(), vec![0, 2]);
    }
}
