//! Compressed-row sparse linear systems.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};

const SYMMETRY_SAMPLES: usize = 100;
const SYMMETRY_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseSystem {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    symmetric: bool,
    rhs: Vec<f64>,
    /// Optional fill-reducing elimination order (`ordering[k]` is the k-th eliminated unknown).
    ordering: Option<Vec<usize>>,
}

impl SparseSystem {
    pub fn new(n: usize, row_ptr: Vec<usize>, col_idx: Vec<usize>, values: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSystem("dimension must be positive".into()));
        }
        if row_ptr.len() != n + 1 || row_ptr[0] != 0 || row_ptr[n] != col_idx.len() {
            return Err(Error::InvalidSystem("row offsets do not match the entries".into()));
        }
        if col_idx.len() != values.len() || rhs.len() != n {
            return Err(Error::InvalidSystem("entry or right-hand-side length mismatch".into()));
        }
        for i in 0..n {
            if row_ptr[i] > row_ptr[i + 1] {
                return Err(Error::InvalidSystem(format!("row offsets decrease at row {i}")));
            }
            let cols = &col_idx[row_ptr[i]..row_ptr[i + 1]];
            if cols.windows(2).any(|w| w[0] >= w[1]) || cols.last().is_some_and(|&c| c >= n) {
                return Err(Error::InvalidSystem(format!(
                    "columns of row {i} unsorted, repeated or out of range"
                )));
            }
        }
        let mut s = Self {
            n,
            row_ptr,
            col_idx,
            values,
            symmetric: false,
            rhs,
            ordering: None,
        };
        s.symmetric = s.sample_symmetry();
        Ok(s)
    }

    /// Builds a system from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>, rhs: Vec<f64>) -> Result<Self> {
        if let Some(&(i, j, _)) = triplets.iter().find(|t| t.0 >= n || t.1 >= n) {
            return Err(Error::InvalidSystem(format!("entry ({i}, {j}) outside {n}x{n}")));
        }
        triplets.sort_unstable_by_key(|t| (t.0, t.1));
        let mut row_ptr = vec![0; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last = None;
        for (i, j, v) in triplets {
            if last == Some((i, j)) {
                *values.last_mut().expect("previous entry") += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self::new(n, row_ptr, col_idx, values, rhs)
    }

    pub fn identity(rhs: Vec<f64>) -> Result<Self> {
        let n = rhs.len();
        Self::new(n, (0..=n).collect(), (0..n).collect(), vec![1.0; n], rhs)
    }

    pub fn with_ordering(mut self, ordering: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if ordering.len() != self.n || ordering.iter().any(|&k| k >= self.n || std::mem::replace(&mut seen[k], true)) {
            return Err(Error::InvalidSystem("ordering is not a permutation".into()));
        }
        self.ordering = Some(ordering);
        Ok(self)
    }

    pub fn with_rhs(mut self, rhs: Vec<f64>) -> Result<Self> {
        if rhs.len() != self.n {
            return Err(Error::InvalidSystem("right-hand-side length mismatch".into()));
        }
        self.rhs = rhs;
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn ordering(&self) -> Option<&[usize]> {
        self.ordering.as_deref()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        match self.col_idx[a..b].binary_search(&j) {
            Ok(k) => self.values[a + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *yi = acc;
        }
    }

    /// `r = b - A x`.
    pub fn residual(&self, x: &[f64], r: &mut [f64]) {
        self.residual_against(&self.rhs, x, r);
    }

    /// `r = b - A x` for an arbitrary right-hand side `b`.
    pub(crate) fn residual_against(&self, b: &[f64], x: &[f64], r: &mut [f64]) {
        self.matvec(x, r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
    }

    /// `‖b - A x‖₂ / ‖b‖₂` (absolute norm when `b = 0`).
    pub fn relative_residual(&self, x: &[f64]) -> f64 {
        let mut r = vec![0.0; self.n];
        self.residual(x, &mut r);
        let b = norm(&self.rhs);
        let rn = norm(&r);
        if b > 0.0 {
            rn / b
        } else {
            rn
        }
    }

    /// Checks `a_ij = a_ji` on all stored entries of small systems and on 100
    /// seeded random stored entries of larger ones.
    fn sample_symmetry(&self) -> bool {
        let nnz = self.nnz();
        let check = |k: usize| {
            let i = self.row_of(k);
            let j = self.col_idx[k];
            let (a, b) = (self.values[k], self.get(j, i));
            (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
        };
        if nnz <= SYMMETRY_SAMPLES {
            return (0..nnz).all(check);
        }
        let mut rng = ChaCha20Rng::seed_from_u64(SYMMETRY_SEED);
        (0..SYMMETRY_SAMPLES).all(|_| check(rng.random_range(0..nnz)))
    }

    fn row_of(&self, k: usize) -> usize {
        self.row_ptr.partition_point(|&p| p <= k) - 1
    }

    /// Rows whose entries sum to zero, i.e. constants lie in the kernel.
    pub(crate) fn annihilates_constants(&self) -> bool {
        (0..self.n).all(|i| {
            let row = &self.values[self.row_ptr[i]..self.row_ptr[i + 1]];
            let scale = row.iter().map(|v| v.abs()).fold(0.0, f64::max);
            row.iter().sum::<f64>().abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE)
        })
    }

    /// Writes the matrix in Matrix Market coordinate format (1-based indices).
    pub fn write_matrix_market(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(out, "{} {} {}", self.n, self.n, self.nnz())?;
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                writeln!(out, "{} {} {:e}", i + 1, self.col_idx[k] + 1, self.values[k])?;
            }
        }
        Ok(())
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> SparseSystem {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        SparseSystem::from_triplets(n, t, vec![1.0; n]).unwrap()
    }

    #[test]
    fn triplets_sum_duplicates() {
        let s = SparseSystem::from_triplets(2, vec![(0, 0, 1.0), (0, 0, 2.0), (1, 1, 1.0)], vec![0.0; 2]).unwrap();
        assert_eq!(s.get(0, 0), 3.0);
        assert_eq!(s.nnz(), 2);
        assert_eq!(s.get(0, 1), 0.0);
    }

    #[test]
    fn symmetry_detected() {
        assert!(laplacian_1d(300).is_symmetric());
        let s = SparseSystem::from_triplets(2, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 1, 1.0)], vec![0.0; 2]).unwrap();
        assert!(!s.is_symmetric());
    }

    #[test]
    fn rejects_bad_layout() {
        assert!(SparseSystem::new(2, vec![0, 1, 2], vec![1, 0], vec![1.0, 1.0], vec![0.0; 2]).is_ok());
        assert!(SparseSystem::new(2, vec![0, 2, 2], vec![1, 0], vec![1.0, 1.0], vec![0.0; 2]).is_err());
        assert!(SparseSystem::new(2, vec![0, 1, 2], vec![0, 2], vec![1.0, 1.0], vec![0.0; 2]).is_err());
        assert!(SparseSystem::new(2, vec![0, 2, 1], vec![0, 1], vec![1.0, 1.0], vec![0.0; 2]).is_err());
    }

    #[test]
    fn matvec_and_residual() {
        let s = laplacian_1d(3);
        let mut y = vec![0.0; 3];
        s.matvec(&[1.0, 1.0, 1.0], &mut y);
        assert_eq!(y, vec![1.0, 0.0, 1.0]);
        assert!(s.relative_residual(&[1.5, 2.0, 1.5]) < 1e-15);
    }

    #[test]
    fn matrix_market_export() {
        let mut buf = Vec::new();
        laplacian_1d(2).write_matrix_market(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "2 2 4");
        assert_eq!(lines[2], "1 1 2e0");
        assert_eq!(lines.len(), 6);
    }
}
