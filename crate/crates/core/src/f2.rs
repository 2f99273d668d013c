//! Exact linear algebra over the two-element field.
//!
//! Sparse matrices with set-of-positions semantics, rank by bit-packed
//! Gaussian elimination, chain complexes with a square boundary operator,
//! homology dimensions, and complex reduction by cancelling unit pivots.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum F2Error {
    /// The boundary operator does not square to zero.
    #[error("NotAComplex: boundary squared is nonzero at ({0}, {1})")]
    NotAComplex(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A sparse matrix over F2. `entries` holds the positions of the 1s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrixF2 {
    rows: usize,
    cols: usize,
    entries: BTreeSet<(usize, usize)>,
}

impl SparseMatrixF2 {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrixF2 {
            rows,
            cols,
            entries: BTreeSet::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n).map(|i| (i, i)).collect();
        SparseMatrixF2 {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, F2Error> {
        let mut m = SparseMatrixF2::zero(rows, cols);
        for (r, c) in entries {
            if r >= rows || c >= cols {
                return Err(F2Error::DimensionMismatch(format!(
                    "entry ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            // F2: inserting a duplicate position cancels it.
            if !m.entries.insert((r, c)) {
                m.entries.remove(&(r, c));
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().copied()
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.entries.contains(&(r, c))
    }

    /// Toggles an entry (addition of 1 in F2).
    pub fn toggle(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "entry out of bounds");
        if !self.entries.insert((r, c)) {
            self.entries.remove(&(r, c));
        }
    }

    /// Matrix product over F2.
    pub fn mul(&self, other: &SparseMatrixF2) -> Result<SparseMatrixF2, F2Error> {
        if self.cols != other.rows {
            return Err(F2Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        // Row-indexed view of `other` for the accumulation.
        let mut other_rows: Vec<Vec<usize>> = vec![Vec::new(); other.rows];
        for &(r, c) in &other.entries {
            other_rows[r].push(c);
        }
        let mut out = SparseMatrixF2::zero(self.rows, other.cols);
        for &(r, k) in &self.entries {
            for &c in &other_rows[k] {
                out.toggle(r, c);
            }
        }
        Ok(out)
    }

    /// Rank over F2 via bit-packed row elimination.
    pub fn rank(&self) -> usize {
        let words = (self.cols + 63) / 64;
        if words == 0 || self.rows == 0 {
            return 0;
        }
        let mut packed: Vec<Vec<u64>> = vec![vec![0u64; words]; self.rows];
        for &(r, c) in &self.entries {
            packed[r][c / 64] ^= 1u64 << (c % 64);
        }
        let mut rank = 0;
        for col in 0..self.cols {
            let (w, b) = (col / 64, col % 64);
            let mask = 1u64 << b;
            let Some(pivot) = (rank..self.rows).find(|&r| packed[r][w] & mask != 0) else {
                continue;
            };
            packed.swap(rank, pivot);
            let pivot_row = packed[rank].clone();
            for (r, row) in packed.iter_mut().enumerate() {
                if r != rank && row[w] & mask != 0 {
                    for (dst, src) in row.iter_mut().zip(&pivot_row) {
                        *dst ^= src;
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for SparseMatrixF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over F2", self.rows, self.cols)?;
        for &(r, c) in &self.entries {
            writeln!(f, "  ({r}, {c})")?;
        }
        Ok(())
    }
}

/// A finite chain complex over F2 with a labeled basis.
///
/// `boundary` is square; entry `(i, j)` means generator `i` appears in the
/// boundary of generator `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplexF2 {
    basis: Vec<String>,
    boundary: SparseMatrixF2,
}

impl ChainComplexF2 {
    /// Builds a complex, verifying `boundary * boundary = 0`.
    pub fn new(basis: Vec<String>, boundary: SparseMatrixF2) -> Result<Self, F2Error> {
        if boundary.rows() != basis.len() || boundary.cols() != basis.len() {
            return Err(F2Error::DimensionMismatch(format!(
                "boundary {}x{} on basis of size {}",
                boundary.rows(),
                boundary.cols(),
                basis.len()
            )));
        }
        let square = boundary.mul(&boundary)?;
        if let Some(&(r, c)) = square.entries.iter().next() {
            return Err(F2Error::NotAComplex(r, c));
        }
        Ok(ChainComplexF2 { basis, boundary })
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn boundary(&self) -> &SparseMatrixF2 {
        &self.boundary
    }

    /// Total homology dimension: `dim - 2 * rank(boundary)`.
    pub fn homology_dim(&self) -> usize {
        self.dim() - 2 * self.boundary.rank()
    }

    /// Reduces by repeated cancellation of unit pivots, smallest `(row, col)`
    /// first. The result has zero boundary and the same homology dimension.
    pub fn reduce(&self) -> ChainComplexF2 {
        // Mutable adjacency: cols[j] = boundary of generator j, rows[i] = cogenerators.
        let n = self.dim();
        let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (r, c) in self.boundary.entries() {
            cols[c].insert(r);
            rows[r].insert(c);
        }
        let mut alive: BTreeSet<usize> = (0..n).collect();
        loop {
            // Smallest (row, col) unit pivot among the surviving generators.
            let pivot = alive
                .iter()
                .filter(|&&r| !rows[r].is_empty())
                .map(|&r| (r, *rows[r].iter().next().unwrap()))
                .min();
            let Some((a, b)) = pivot else { break };
            // Cancel the pair (a, b): for every other column j containing a,
            // add column b to column j.
            let col_b: Vec<usize> = cols[b].iter().copied().collect();
            let cols_with_a: Vec<usize> = rows[a].iter().copied().filter(|&j| j != b).collect();
            for j in cols_with_a {
                for &i in &col_b {
                    if cols[j].insert(i) {
                        rows[i].insert(j);
                    } else {
                        cols[j].remove(&i);
                        rows[i].remove(&j);
                    }
                }
            }
            // Delete rows and columns a, b.
            for x in [a, b] {
                for &i in &cols[x].clone() {
                    rows[i].remove(&x);
                }
                for &j in &rows[x].clone() {
                    cols[j].remove(&x);
                }
                cols[x].clear();
                rows[x].clear();
                alive.remove(&x);
            }
        }
        let survivors: Vec<usize> = alive.into_iter().collect();
        let basis = survivors.iter().map(|&i| self.basis[i].clone()).collect();
        // All pivots exhausted, so the remaining boundary is zero.
        ChainComplexF2 {
            basis,
            boundary: SparseMatrixF2::zero(survivors.len(), survivors.len()),
        }
    }

    /// Tensor product of complexes: basis pairs, boundary `d ⊗ 1 + 1 ⊗ d`.
    pub fn tensor(&self, other: &ChainComplexF2) -> ChainComplexF2 {
        let n2 = other.dim();
        let idx = |i: usize, j: usize| i * n2 + j;
        let mut basis = Vec::with_capacity(self.dim() * n2);
        for a in &self.basis {
            for b in &other.basis {
                basis.push(format!("{a}*{b}"));
            }
        }
        let mut boundary = SparseMatrixF2::zero(basis.len(), basis.len());
        for (r, c) in self.boundary.entries() {
            for j in 0..n2 {
                boundary.toggle(idx(r, j), idx(c, j));
            }
        }
        for (r, c) in other.boundary.entries() {
            for i in 0..self.dim() {
                boundary.toggle(idx(i, r), idx(i, c));
            }
        }
        // Over F2 there are no signs, so d^2 = 0 is automatic here.
        ChainComplexF2 { basis, boundary }
    }
}

impl fmt::Display for ChainComplexF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "complex on {} generators", self.dim())?;
        for (i, label) in self.basis.iter().enumerate() {
            let image: Vec<&str> = self
                .boundary
                .entries()
                .filter(|&(_, c)| c == i)
                .map(|(r, _)| self.basis[r].as_str())
                .collect();
            if image.is_empty() {
                writeln!(f, "  d {label} = 0")?;
            } else {
                writeln!(f, "  d {label} = {}", image.join(" + "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent dense elimination, used as the rank oracle.
    fn dense_rank(rows: usize, cols: usize, entries: &[(usize, usize)]) -> usize {
        let mut m = vec![vec![false; cols]; rows];
        for &(r, c) in entries {
            m[r][c] ^= true;
        }
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..rows).find(|&r| m[r][c]) {
                m.swap(rank, p);
                for r in 0..rows {
                    if r != rank && m[r][c] {
                        let pivot = m[rank].clone();
                        for (dst, src) in m[r].iter_mut().zip(&pivot) {
                            *dst ^= *src;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn rank_identity() {
        assert_eq!(SparseMatrixF2::identity(3).rank(), 3);
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(SparseMatrixF2::zero(4, 5).rank(), 0);
    }

    #[test]
    fn rank_all_ones_2x2() {
        let m =
            SparseMatrixF2::from_entries(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_agrees_with_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..40 {
            let rows = rng.gen_range(1..=64);
            let cols = rng.gen_range(1..=64);
            let count = rng.gen_range(0..rows * cols / 2 + 1);
            let entries: Vec<(usize, usize)> = (0..count)
                .map(|_| (rng.gen_range(0..rows), rng.gen_range(0..cols)))
                .collect();
            let m = SparseMatrixF2::from_entries(rows, cols, entries.clone()).unwrap();
            assert_eq!(m.rank(), dense_rank(rows, cols, &entries));
        }
    }

    #[test]
    fn homology_single_generator() {
        let c = ChainComplexF2::new(vec!["x".into()], SparseMatrixF2::zero(1, 1)).unwrap();
        assert_eq!(c.homology_dim(), 1);
    }

    #[test]
    fn homology_acyclic_pair() {
        // d x = y
        let boundary = SparseMatrixF2::from_entries(2, 2, [(1, 0)]).unwrap();
        let c = ChainComplexF2::new(vec!["x".into(), "y".into()], boundary).unwrap();
        assert_eq!(c.homology_dim(), 0);
    }

    #[test]
    fn homology_rank_one_on_four_generators() {
        let boundary = SparseMatrixF2::from_entries(4, 4, [(1, 0)]).unwrap();
        let labels = (0..4).map(|i| format!("g{i}")).collect();
        let c = ChainComplexF2::new(labels, boundary).unwrap();
        assert_eq!(c.homology_dim(), 2);
    }

    #[test]
    fn not_a_complex_detected() {
        // d x = y, d y = z does not square to zero.
        let boundary = SparseMatrixF2::from_entries(3, 3, [(1, 0), (2, 1)]).unwrap();
        let err = ChainComplexF2::new(
            vec!["x".into(), "y".into(), "z".into()],
            boundary,
        )
        .unwrap_err();
        assert_eq!(err, F2Error::NotAComplex(2, 0));
    }

    #[test]
    fn reduce_acyclic_pair_to_empty() {
        let boundary = SparseMatrixF2::from_entries(2, 2, [(1, 0)]).unwrap();
        let c = ChainComplexF2::new(vec!["x".into(), "y".into()], boundary).unwrap();
        let r = c.reduce();
        assert_eq!(r.dim(), 0);
    }

    #[test]
    fn reduce_zero_boundary_unchanged() {
        let c = ChainComplexF2::new(
            vec!["a".into(), "b".into()],
            SparseMatrixF2::zero(2, 2),
        )
        .unwrap();
        let r = c.reduce();
        assert_eq!(r.basis(), c.basis());
    }

    /// Random complex with d^2 = 0: upper-triangular d built as a product of
    /// elementary chains x_i -> x_j arranged to stay a complex.
    fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> ChainComplexF2 {
        // Split generators into two layers; arrows only go layer 1 -> layer 0,
        // so the boundary squares to zero by construction.
        let split = rng.gen_range(0..=n);
        let mut boundary = SparseMatrixF2::zero(n, n);
        for c in split..n {
            for r in 0..split {
                if rng.gen_bool(0.3) {
                    boundary.toggle(r, c);
                }
            }
        }
        let labels = (0..n).map(|i| format!("g{i}")).collect();
        ChainComplexF2::new(labels, boundary).unwrap()
    }

    #[test]
    fn reduce_preserves_homology_dim() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xabcdef);
        for _ in 0..50 {
            let c = random_complex(&mut rng, 50);
            let r = c.reduce();
            assert_eq!(r.homology_dim(), c.homology_dim());
            assert!(r.boundary().is_zero());
        }
    }

    #[test]
    fn tensor_multiplies_homology() {
        let boundary = SparseMatrixF2::from_entries(3, 3, [(1, 0)]).unwrap();
        let c = ChainComplexF2::new(
            vec!["x".into(), "y".into(), "z".into()],
            boundary,
        )
        .unwrap();
        let t = c.tensor(&c);
        assert_eq!(t.homology_dim(), c.homology_dim() * c.homology_dim());
    }
}
