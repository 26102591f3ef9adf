//! Dense bit-packed matrices over GF(2).
//!
//! Rows are stored as contiguous `u64` words. Row reduction, rank, null-space
//! bases and Gray-code enumeration of spans are all that the rest of the crate
//! needs, so that is all this module provides.

use std::fmt;

use crate::error::{GldpcError, Result};

const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

#[inline]
pub(crate) fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub(crate) fn get_bit(words: &[u64], i: usize) -> bool {
    (words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
}

#[inline]
pub(crate) fn flip_bit(words: &mut [u64], i: usize) {
    words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries. All rows must have equal length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(GldpcError::InvalidParityMatrix(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(i, j, true),
                    other => {
                        return Err(GldpcError::InvalidParityMatrix(format!(
                            "entry ({i}, {j}) = {other} is not binary"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    /// Parses rows written as strings of '0'/'1' characters.
    pub fn from_bitstrings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.as_ref()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(0u8),
                        '1' => Ok(1u8),
                        other => Err(GldpcError::InvalidParityMatrix(format!(
                            "row {i} contains '{other}', expected only '0' and '1'"
                        ))),
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&parsed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        get_bit(self.row(r), c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c) as u8).collect()
    }

    pub fn row_bitstrings(&self) -> Vec<String> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| if self.get(r, c) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    /// Appends a packed row of `self.cols()` bits.
    pub fn push_row(&mut self, words: &[u64]) {
        assert_eq!(words.len(), self.stride);
        self.data.extend_from_slice(words);
        self.rows += 1;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(b * self.stride);
        head[a * self.stride..(a + 1) * self.stride].swap_with_slice(&mut tail[..self.stride]);
    }

    fn xor_row(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        if dst < src {
            let (head, tail) = self.data.split_at_mut(src * s);
            xor_into(&mut head[dst * s..(dst + 1) * s], &tail[..s]);
        } else {
            let (head, tail) = self.data.split_at_mut(dst * s);
            xor_into(&mut tail[..s], &head[src * s..(src + 1) * s]);
        }
    }

    /// Reduced row echelon form. Returns the reduced matrix (zero rows dropped)
    /// and its pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..m.cols {
            if next == m.rows {
                break;
            }
            let Some(p) = (next..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(p, next);
            for r in 0..m.rows {
                if r != next && m.get(r, c) {
                    m.xor_row(r, next);
                }
            }
            pivots.push(c);
            next += 1;
        }
        m.data.truncate(next * m.stride);
        m.rows = next;
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the row space, as packed rows.
    pub fn row_space_basis(&self) -> Vec<Vec<u64>> {
        let (r, _) = self.rref();
        (0..r.rows).map(|i| r.row(i).to_vec()).collect()
    }

    /// A basis of the right null space {x : H x = 0}, as packed vectors of
    /// length `self.cols()`.
    pub fn null_space_basis(&self) -> Vec<Vec<u64>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u64; self.stride];
                flip_bit(&mut v, free);
                for (i, &p) in pivots.iter().enumerate() {
                    if r.get(i, free) {
                        flip_bit(&mut v, p);
                    }
                }
                v
            })
            .collect()
    }

    /// True iff H x = 0 for the packed vector `x`.
    pub fn annihilates(&self, x: &[u64]) -> bool {
        (0..self.rows).all(|r| {
            self.row(r)
                .iter()
                .zip(x)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                % 2
                == 0
        })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for row in self.row_bitstrings() {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Visits every nonzero vector of the span of `basis` exactly once, in Gray-code
/// order, passing the current vector to `visit`.
pub(crate) fn for_each_span_vector(basis: &[Vec<u64>], width: usize, mut visit: impl FnMut(&[u64])) {
    let k = basis.len();
    assert!(k < 64);
    let mut cur = vec![0u64; width];
    for i in 1u64..(1u64 << k) {
        xor_into(&mut cur, &basis[i.trailing_zeros() as usize]);
        visit(&cur);
    }
}

/// Weight histogram (index = Hamming weight) of all vectors in the span of
/// `basis`, including the zero vector.
pub(crate) fn span_weight_histogram(basis: &[Vec<u64>], width: usize, length: usize) -> Vec<u64> {
    let mut hist = vec![0u64; length + 1];
    hist[0] = 1;
    for_each_span_vector(basis, width, |v| hist[popcount(v)] += 1);
    hist
}
