//! Dense matrices over F₂ with rows packed into 64-bit words.
//!
//! Indices in this module are 0-based matrix indices; the 1-based vertex
//! convention lives in [`crate::graphs`].

use std::fmt;

use crate::error::{invalid, Result};

const WORD_BITS: usize = 64;

/// Dense binary matrix, row-major, each row padded to a whole number of words.
///
/// Bits beyond `n_cols` in the last word of a row are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    n_rows: usize,
    n_cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        let words_per_row = n_cols.div_ceil(WORD_BITS);
        Self {
            n_rows,
            n_cols,
            words_per_row,
            words: vec![0; n_rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(n_rows, n_cols);
        for r in 0..n_rows {
            for c in 0..n_cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries. All rows must have equal length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), n_cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(invalid(format!(
                    "row {r} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(r, c, true),
                    other => return Err(invalid(format!("entry ({r},{c}) = {other} is not a bit"))),
                }
            }
        }
        Ok(m)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.n_rows && c < self.n_cols, "index ({r},{c}) out of range");
        let w = self.words[r * self.words_per_row + c / WORD_BITS];
        (w >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.n_rows && c < self.n_cols, "index ({r},{c}) out of range");
        let w = &mut self.words[r * self.words_per_row + c / WORD_BITS];
        let bit = 1u64 << (c % WORD_BITS);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    /// The packed words of row `r`.
    pub fn row_words(&self, r: usize) -> &[u64] {
        let start = r * self.words_per_row;
        &self.words[start..start + self.words_per_row]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n_cols, self.n_rows, |r, c| self.get(c, r))
    }

    /// Row `dst` ← row `dst` + row `src` (mod 2).
    pub fn add_row(&mut self, dst: usize, src: usize) {
        assert!(dst < self.n_rows && src < self.n_rows);
        if dst == src {
            // x + x = 0 over F₂
            self.row_words_mut(dst).fill(0);
            return;
        }
        let wpr = self.words_per_row;
        for i in 0..wpr {
            let s = self.words[src * wpr + i];
            self.words[dst * wpr + i] ^= s;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        assert!(a < self.n_rows && b < self.n_rows);
        if a == b {
            return;
        }
        let wpr = self.words_per_row;
        for i in 0..wpr {
            self.words.swap(a * wpr + i, b * wpr + i);
        }
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        let start = r * self.words_per_row;
        &mut self.words[start..start + self.words_per_row]
    }

    /// Rank over F₂ by Gaussian elimination on a private copy.
    ///
    /// Columns are scanned left to right; the pivot is the first remaining row
    /// with a one in the current column. Single-word rows go through an XOR basis.
    pub fn rank(&self) -> usize {
        if self.words_per_row == 1 {
            return rank_of_words(&self.words);
        }
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.n_cols {
            if rank == m.n_rows {
                break;
            }
            let Some(p) = (rank..m.n_rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in rank + 1..m.n_rows {
                if m.get(r, c) {
                    m.add_row(r, rank);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Copies the entries at `rows × cols`. Both index lists must be strictly
    /// increasing and in range.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        check_index_set(rows, self.n_rows, "row")?;
        check_index_set(cols, self.n_cols, "column")?;
        Ok(Self::from_fn(rows.len(), cols.len(), |r, c| {
            self.get(rows[r], cols[c])
        }))
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
}

fn check_index_set(idx: &[usize], bound: usize, what: &str) -> Result<()> {
    for (i, &x) in idx.iter().enumerate() {
        if x >= bound {
            return Err(invalid(format!("{what} index {x} out of range 0..{bound}")));
        }
        if i > 0 && idx[i - 1] >= x {
            return Err(invalid(format!("{what} indices must be strictly increasing")));
        }
    }
    Ok(())
}

/// Rank of a set of row vectors that each fit in one word.
///
/// Classic XOR basis: `basis[b]` holds the reduced vector whose highest set bit is `b`.
pub(crate) fn rank_of_words(rows: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &row in rows {
        let mut v = row;
        while v != 0 {
            let b = 63 - v.leading_zeros() as usize;
            if basis[b] == 0 {
                basis[b] = v;
                rank += 1;
                break;
            }
            v ^= basis[b];
        }
    }
    rank
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.n_rows, self.n_cols)?;
        for r in 0..self.n_rows {
            write!(f, "  ")?;
            for c in 0..self.n_cols {
                write!(f, "{}", u8::from(self.get(r, c)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Textbook elimination on a `Vec<Vec<bool>>`, kept separate from the packed path.
    fn naive_rank(m: &F2Matrix) -> usize {
        let mut a: Vec<Vec<bool>> = (0..m.n_rows())
            .map(|r| (0..m.n_cols()).map(|c| m.get(r, c)).collect())
            .collect();
        let mut rank = 0;
        for c in 0..m.n_cols() {
            if let Some(p) = (rank..a.len()).find(|&r| a[r][c]) {
                a.swap(rank, p);
                for r in 0..a.len() {
                    if r != rank && a[r][c] {
                        let pivot = a[rank].clone();
                        for (x, y) in a[r].iter_mut().zip(pivot) {
                            *x ^= y;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> F2Matrix {
        F2Matrix::from_fn(rows, cols, |_, _| rng.random_bool(0.5))
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = F2Matrix> {
        (0..=max, 0..=max, any::<u64>()).prop_map(|(r, c, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_matrix(r, c, &mut rng)
        })
    }

    #[test]
    fn zero_and_identity() {
        assert_eq!(F2Matrix::zeros(3, 3).rank(), 0);
        assert_eq!(F2Matrix::identity(3).rank(), 3);
        assert_eq!(F2Matrix::zeros(0, 5).rank(), 0);
    }

    #[test]
    fn submatrix_of_identity() {
        let i4 = F2Matrix::identity(4);
        assert_eq!(i4.submatrix(&[0, 1], &[0, 1]).unwrap(), F2Matrix::identity(2));
        let empty = i4.submatrix(&[], &[0, 2, 3]).unwrap();
        assert_eq!((empty.n_rows(), empty.n_cols()), (0, 3));
        assert_eq!(empty.rank(), 0);
    }

    #[test]
    fn submatrix_rejects_bad_indices() {
        let i4 = F2Matrix::identity(4);
        assert!(i4.submatrix(&[4], &[0]).is_err());
        assert!(i4.submatrix(&[1, 0], &[0]).is_err());
        assert!(i4.submatrix(&[0], &[2, 2]).is_err());
    }

    #[test]
    fn rank_does_not_mutate() {
        let m = F2Matrix::from_rows(&[[1u8, 1, 0], [1, 1, 0], [0, 1, 1]]).unwrap();
        let before = m.clone();
        assert_eq!(m.rank(), 2);
        assert_eq!(m, before);
    }

    #[test]
    fn wide_matrices_use_multiword_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = random_matrix(40, 150, &mut rng);
            assert_eq!(m.rank(), naive_rank(&m));
        }
        let mut m = F2Matrix::zeros(3, 130);
        m.set(0, 129, true);
        m.set(1, 129, true);
        m.set(2, 64, true);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn agrees_with_naive_on_random_8x8() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x8e8);
        for _ in 0..2000 {
            let m = random_matrix(8, 8, &mut rng);
            assert_eq!(m.rank(), naive_rank(&m), "{m:?}");
        }
    }

    #[test]
    fn from_rows_validates() {
        assert!(F2Matrix::from_rows(&[vec![1u8, 0], vec![1]]).is_err());
        assert!(F2Matrix::from_rows(&[[2u8]]).is_err());
    }

    proptest! {
        #[test]
        fn rank_bounded_and_transpose_invariant(m in arb_matrix(16)) {
            let r = m.rank();
            prop_assert!(r <= m.n_rows().min(m.n_cols()));
            prop_assert_eq!(r, m.transpose().rank());
            prop_assert_eq!(r, naive_rank(&m));
        }

        #[test]
        fn rank_invariant_under_row_operations(m in arb_matrix(12), ops in prop::collection::vec((any::<usize>(), any::<usize>(), any::<bool>()), 0..30)) {
            prop_assume!(m.n_rows() >= 2);
            let r = m.rank();
            let mut m2 = m.clone();
            for (a, b, swap) in ops {
                let (a, b) = (a % m.n_rows(), b % m.n_rows());
                if swap {
                    m2.swap_rows(a, b);
                } else if a != b {
                    m2.add_row(a, b);
                }
            }
            prop_assert_eq!(m2.rank(), r);
        }
    }
}
