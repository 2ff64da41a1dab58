//! Dense bit-packed matrices over GF(2).
//!
//! Rows are stored contiguously as `u64` words, least significant bit first.
//! Padding bits past `cols` in the last word of every row are always zero.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
pub(crate) fn get_bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
pub(crate) fn flip_bit(words: &mut [u64], i: usize) {
    words[i / 64] ^= 1 << (i % 64);
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

#[inline]
pub(crate) fn is_zero(words: &[u64]) -> bool {
    words.iter().all(|&w| w == 0)
}

#[inline]
pub(crate) fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from the column supports of each row.
    pub fn from_row_supports<I>(rows: usize, cols: usize, supports: I) -> Self
    where
        I: IntoIterator,
        I::Item: IntoIterator<Item = usize>,
    {
        let mut m = Self::zeros(rows, cols);
        for (r, support) in supports.into_iter().enumerate() {
            for c in support {
                m.toggle(r, c);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        get_bit(self.row(r), c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        if self.get(r, c) != value {
            self.toggle(r, c);
        }
    }

    #[inline]
    pub fn toggle(&mut self, r: usize, c: usize) {
        assert!(
            r < self.rows && c < self.cols,
            "bit ({r}, {c}) out of range"
        );
        let stride = self.stride;
        flip_bit(&mut self.bits[r * stride..(r + 1) * stride], c);
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        let stride = self.stride;
        &mut self.bits[r * stride..(r + 1) * stride]
    }

    pub fn row_weight(&self, r: usize) -> usize {
        popcount(self.row(r))
    }

    /// Column indices of the set bits in row `r`.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.row(r).iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let b = word.trailing_zeros() as usize;
                out.push(w * 64 + b);
                word &= word - 1;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.bits)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                t.toggle(c, r);
            }
        }
        t
    }

    /// `self * other^T` over GF(2).
    pub fn mul_transpose(&self, other: &BitMatrix) -> Option<BitMatrix> {
        if self.cols != other.cols {
            return None;
        }
        let mut out = BitMatrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            let a = self.row(i);
            for j in 0..other.rows {
                let parity = a
                    .iter()
                    .zip(other.row(j))
                    .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones())
                    & 1;
                if parity == 1 {
                    out.toggle(i, j);
                }
            }
        }
        Some(out)
    }

    /// Keeps the listed columns, in the listed order (puncturing).
    pub fn select_columns(&self, columns: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, columns.len());
        for r in 0..self.rows {
            let src = self.row(r);
            let dst = out.row_mut(r);
            for (new_c, &c) in columns.iter().enumerate() {
                if get_bit(src, c) {
                    flip_bit(dst, new_c);
                }
            }
        }
        out
    }

    /// Row-reduces in place; returns the pivot column of each nonzero row.
    ///
    /// On return the first `pivots.len()` rows are in reduced row echelon
    /// form and the remaining rows are zero.
    pub fn reduce_in_place(&mut self) -> Vec<usize> {
        let stride = self.stride;
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let (w, mask) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (next..self.rows).find(|&r| self.bits[r * stride + w] & mask != 0) else {
                continue;
            };
            if p != next {
                for i in 0..stride {
                    self.bits.swap(p * stride + i, next * stride + i);
                }
            }
            let (head, tail) = self.bits.split_at_mut(next * stride);
            let (pivot_row, rest) = tail.split_at_mut(stride);
            for r in 0..next {
                let row = &mut head[r * stride..(r + 1) * stride];
                if row[w] & mask != 0 {
                    xor_into(&mut row[w..], &pivot_row[w..]);
                }
            }
            for row in rest.chunks_exact_mut(stride) {
                if row[w] & mask != 0 {
                    xor_into(&mut row[w..], &pivot_row[w..]);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    /// Rank over GF(2); the receiver is left untouched.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.forward_eliminate()
    }

    /// Forward elimination only (row echelon, not reduced); returns the rank.
    fn forward_eliminate(&mut self) -> usize {
        let stride = self.stride;
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let (w, mask) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (next..self.rows).find(|&r| self.bits[r * stride + w] & mask != 0) else {
                continue;
            };
            if p != next {
                for i in 0..stride {
                    self.bits.swap(p * stride + i, next * stride + i);
                }
            }
            let (head, tail) = self.bits.split_at_mut((next + 1) * stride);
            let pivot_row = &head[next * stride..];
            for row in tail.chunks_exact_mut(stride) {
                if row[w] & mask != 0 {
                    xor_into(&mut row[w..], &pivot_row[w..]);
                }
            }
            next += 1;
        }
        next
    }

    /// Basis of the right null space `{x : self * x = 0}`, one vector per row.
    pub fn kernel(&self) -> BitMatrix {
        let mut rref = self.clone();
        let pivots = rref.reduce_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = BitMatrix::zeros(free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            out.toggle(i, f);
            for (r, &p) in pivots.iter().enumerate() {
                if rref.get(r, f) {
                    out.toggle(i, p);
                }
            }
        }
        out
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "." })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Incrementally grown basis of a subspace of GF(2)^n.
///
/// Each stored vector has been reduced by all earlier ones, so its pivot bit
/// (lowest set bit) is clear in every later vector; reducing a query in
/// insertion order is therefore exact.
#[derive(Clone, Debug)]
pub(crate) struct EchelonBasis {
    stride: usize,
    rows: Vec<u64>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub(crate) fn new(bits: usize) -> Self {
        EchelonBasis {
            stride: words_for(bits),
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.pivots.len()
    }

    pub(crate) fn reduce(&self, v: &mut [u64]) {
        for (i, &p) in self.pivots.iter().enumerate() {
            if get_bit(v, p) {
                xor_into(v, &self.rows[i * self.stride..(i + 1) * self.stride]);
            }
        }
    }

    /// Adds `v` if it is independent of the current span.
    pub(crate) fn insert(&mut self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pivot) = w
            .iter()
            .enumerate()
            .find(|(_, &x)| x != 0)
            .map(|(i, &x)| i * 64 + x.trailing_zeros() as usize)
        else {
            return false;
        };
        self.rows.extend_from_slice(&w);
        self.pivots.push(pivot);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_rank() {
        assert_eq!(BitMatrix::identity(8).rank(), 8);
        assert_eq!(BitMatrix::identity(130).rank(), 130);
    }

    #[test]
    fn zero_rank() {
        assert_eq!(BitMatrix::zeros(5, 70).rank(), 0);
        assert_eq!(BitMatrix::zeros(0, 0).rank(), 0);
    }

    #[test]
    fn dependent_rows() {
        let m = BitMatrix::from_row_supports(3, 4, [vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.rows(), 2);
        assert!(m.mul_transpose(&k).unwrap().is_zero());
    }

    #[test]
    fn rank_does_not_modify_input() {
        let m = BitMatrix::from_row_supports(2, 3, [vec![0, 1], vec![0, 1, 2]]);
        let before = m.clone();
        let _ = m.rank();
        assert_eq!(m, before);
    }

    #[test]
    fn select_columns_reorders() {
        let m = BitMatrix::from_row_supports(1, 5, [vec![1, 4]]);
        let s = m.select_columns(&[4, 0, 1]);
        assert_eq!(s.row_support(0), vec![0, 2]);
    }

    #[test]
    fn transpose_roundtrip() {
        let m = BitMatrix::from_row_supports(2, 70, [vec![0, 69], vec![3, 64]]);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.transpose().rows(), 70);
    }

    #[test]
    fn echelon_basis_detects_span() {
        let mut b = EchelonBasis::new(3);
        assert!(b.insert(&[0b011]));
        assert!(b.insert(&[0b110]));
        assert!(!b.insert(&[0b101]));
        assert!(b.insert(&[0b001]));
        assert_eq!(b.len(), 3);
    }
}
