//! Bit-packed vectors and matrices over F2.
//!
//! Coordinate `i` of a [`BitVec`] lives in word `i / 64` at bit `i % 64`
//! (little-endian within each word). Bits past `len` are always zero.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_len, Error, Result};

/// Default cap on the rank of a span that may be enumerated element by element.
pub const DEFAULT_SPAN_CAP: u32 = 40;

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

/// A vector in F2^n.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec { len, words: vec![u64::MAX; words_for(len)] };
        v.mask_tail();
        v
    }

    /// Unit vector with a single 1 at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(len);
        for &i in ones {
            if i >= len {
                return Err(Error::InvalidInput(format!("index {i} out of range for length {len}")));
            }
            v.set(i, true);
        }
        Ok(v)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from raw words; bits past `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = BitVec { len, words };
        v.mask_tail();
        v
    }

    fn mask_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Entrywise product. Panics on length mismatch; see [`wedge`] for the checked form.
    pub fn and(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch in wedge");
        BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    #[inline]
    pub fn and_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in and");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn or(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch in or");
        BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    /// Inner product mod 2. Panics on length mismatch.
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones & 1 == 1
    }

    /// `|self ∧ b ∧ c| mod 2`.
    #[inline]
    pub fn triple_dot(&self, b: &BitVec, c: &BitVec) -> bool {
        assert!(self.len == b.len && b.len == c.len, "length mismatch in triple overlap");
        let ones: u32 = self
            .words
            .iter()
            .zip(&b.words)
            .zip(&c.words)
            .map(|((x, y), z)| (x & y & z).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Number of positions where both vectors are 1.
    pub fn overlap(&self, other: &BitVec) -> usize {
        assert_eq!(self.len, other.len, "length mismatch in overlap");
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    /// Lowest set coordinate, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Restriction to the listed coordinates, in the given order.
    pub fn select(&self, coords: &[usize]) -> BitVec {
        let mut out = BitVec::zeros(coords.len());
        for (k, &c) in coords.iter().enumerate() {
            if self.get(c) {
                out.set(k, true);
            }
        }
        out
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = BitVec::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(Error::InvalidInput(format!("unexpected character {other:?} in bit string"))),
            }
        }
        Ok(v)
    }
}

/// Entrywise product `u ∧ v`.
pub fn wedge(u: &BitVec, v: &BitVec) -> Result<BitVec> {
    check_len(u.len(), v.len())?;
    Ok(u.and(v))
}

/// Inner product `u · v` over F2.
pub fn dot(u: &BitVec, v: &BitVec) -> Result<bool> {
    check_len(u.len(), v.len())?;
    Ok(u.dot(v))
}

/// `|u ∧ v ∧ w| mod 2`.
pub fn triple_overlap(u: &BitVec, v: &BitVec, w: &BitVec) -> Result<bool> {
    check_len(u.len(), v.len())?;
    check_len(u.len(), w.len())?;
    Ok(u.triple_dot(v, w))
}

/// Binary matrix stored as a list of rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n_cols: usize,
    rows: Vec<BitVec>,
}

/// Reduced row echelon form of a matrix. Zero rows are dropped, so
/// `matrix.n_rows() == rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Result of [`BitMatrix::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// A particular solution together with a basis of the kernel.
    Affine { particular: BitVec, kernel: BitMatrix },
    NoSolution,
}

impl BitMatrix {
    pub fn new(n_cols: usize) -> Self {
        BitMatrix { n_cols, rows: Vec::new() }
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        BitMatrix { n_cols, rows: vec![BitVec::zeros(n_cols); n_rows] }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix { n_cols: n, rows: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    pub fn from_rows(n_cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        for r in &rows {
            check_len(n_cols, r.len())?;
        }
        Ok(BitMatrix { n_cols, rows })
    }

    /// Parses rows given as `0`/`1` strings. All rows must share one length.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed: Vec<BitVec> = rows.iter().map(|r| r.parse()).collect::<Result<_>>()?;
        let n_cols = parsed.first().map_or(0, BitVec::len);
        Self::from_rows(n_cols, parsed)
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: BitVec) -> Result<()> {
        check_len(self.n_cols, row.len())?;
        self.rows.push(row);
        Ok(())
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.n_rows() > 0 && other.n_rows() > 0 {
            check_len(self.n_cols, other.n_cols)?;
        }
        let n_cols = if self.n_rows() == 0 && other.n_rows() > 0 { other.n_cols } else { self.n_cols };
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix { n_cols, rows })
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hconcat(&self, other: &BitMatrix) -> Result<BitMatrix> {
        check_len(self.n_rows(), other.n_rows())?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.concat(b)).collect();
        Ok(BitMatrix { n_cols: self.n_cols + other.n_cols, rows })
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut c = BitVec::zeros(self.n_rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.n_cols, self.n_rows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, coords: &[usize]) -> BitMatrix {
        BitMatrix { n_cols: coords.len(), rows: self.rows.iter().map(|r| r.select(coords)).collect() }
    }

    pub fn select_rows(&self, idx: &[usize]) -> BitMatrix {
        BitMatrix { n_cols: self.n_cols, rows: idx.iter().map(|&i| self.rows[i].clone()).collect() }
    }

    /// `M x` as a vector of length `n_rows`.
    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec> {
        check_len(self.n_cols, x.len())?;
        Ok(BitVec::from_bools(&self.rows.iter().map(|r| r.dot(x)).collect::<Vec<_>>()))
    }

    /// Syndrome bits of each column packed into words: entry `j` is column `j`
    /// as a bit vector of length `n_rows`.
    pub fn column_words(&self) -> Vec<Vec<u64>> {
        let w = words_for(self.n_rows());
        let mut cols = vec![vec![0u64; w]; self.n_cols];
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                cols[j][i / 64] |= 1u64 << (i % 64);
            }
        }
        cols
    }

    pub fn rref(&self) -> Rref {
        let mut rows: Vec<BitVec> = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.n_cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(col)) else { continue };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            r += 1;
        }
        rows.truncate(r);
        Rref { matrix: BitMatrix { n_cols: self.n_cols, rows }, rank: r, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Linearly independent rows spanning the same space (the nonzero rref rows).
    pub fn basis(&self) -> BitMatrix {
        self.rref().matrix
    }

    /// Basis of `{x : M x = 0}`.
    pub fn kernel_basis(&self) -> BitMatrix {
        let rref = self.rref();
        kernel_from_rref(&rref, self.n_cols)
    }

    /// Whether `v` lies in the row span.
    pub fn in_span(&self, v: &BitVec) -> Result<bool> {
        check_len(self.n_cols, v.len())?;
        Ok(reduce_against(&self.rref(), v).is_zero())
    }

    /// Solves `M x = b`. `NoSolution` is a normal outcome, not an error.
    pub fn solve(&self, b: &BitVec) -> Result<Solution> {
        check_len(self.n_rows(), b.len())?;
        let n = self.n_cols;
        let mut rows: Vec<(BitVec, bool)> = self.rows.iter().cloned().zip(b.to_bools()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].0.get(col)) else { continue };
            rows.swap(r, p);
            let (pivot_row, pivot_rhs) = rows[r].clone();
            for (i, (row, rhs)) in rows.iter_mut().enumerate() {
                if i != r && row.get(col) {
                    row.xor_assign(&pivot_row);
                    *rhs ^= pivot_rhs;
                }
            }
            pivots.push(col);
            r += 1;
        }
        if rows[r..].iter().any(|(_, rhs)| *rhs) {
            return Ok(Solution::NoSolution);
        }
        let mut particular = BitVec::zeros(n);
        for (i, &pc) in pivots.iter().enumerate() {
            if rows[i].1 {
                particular.set(pc, true);
            }
        }
        let rref = Rref {
            matrix: BitMatrix { n_cols: n, rows: rows[..r].iter().map(|(v, _)| v.clone()).collect() },
            pivots,
            rank: r,
        };
        Ok(Solution::Affine { particular, kernel: kernel_from_rref(&rref, n) })
    }

    pub fn permute_columns(&self, order: &[usize]) -> BitMatrix {
        self.select_columns(order)
    }

    /// Iterator over every element of the row span, each exactly once.
    pub fn span_iter(&self) -> Result<SpanIter> {
        self.span_iter_capped(DEFAULT_SPAN_CAP)
    }

    pub fn span_iter_capped(&self, cap_rank: u32) -> Result<SpanIter> {
        let basis = self.basis();
        ensure_rank_cap(basis.n_rows(), cap_rank)?;
        Ok(SpanIter::new(basis.rows, self.n_cols))
    }
}

pub(crate) fn ensure_rank_cap(rank: usize, cap_rank: u32) -> Result<()> {
    if rank as u32 > cap_rank {
        Err(Error::CapExceeded {
            what: "span enumeration of rank".into(),
            value: rank as u128,
            cap: cap_rank as u128,
        })
    } else {
        Ok(())
    }
}

fn kernel_from_rref(rref: &Rref, n_cols: usize) -> BitMatrix {
    let mut is_pivot = vec![false; n_cols];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    let mut kernel = BitMatrix::new(n_cols);
    for f in (0..n_cols).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::unit(n_cols, f);
        for (i, &p) in rref.pivots.iter().enumerate() {
            if rref.matrix.rows[i].get(f) {
                v.set(p, true);
            }
        }
        kernel.rows.push(v);
    }
    kernel
}

/// Reduces `v` by the rows of an rref; the result is zero iff `v` is in the span.
pub(crate) fn reduce_against(rref: &Rref, v: &BitVec) -> BitVec {
    let mut v = v.clone();
    for (row, &p) in rref.matrix.rows.iter().zip(&rref.pivots) {
        if v.get(p) {
            v.xor_assign(row);
        }
    }
    v
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({}x{})", self.n_rows(), self.n_cols)?;
        for r in &self.rows {
            write!(f, "\n  {r}")?;
        }
        Ok(())
    }
}

/// Gray-code walk over the span of linearly independent rows.
pub struct SpanIter {
    basis: Vec<BitVec>,
    current: BitVec,
    next_index: u64,
    total: u64,
}

impl SpanIter {
    fn new(basis: Vec<BitVec>, n_cols: usize) -> Self {
        let total = 1u64 << basis.len();
        SpanIter { basis, current: BitVec::zeros(n_cols), next_index: 0, total }
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

impl Iterator for SpanIter {
    type Item = BitVec;

    fn next(&mut self) -> Option<BitVec> {
        if self.next_index >= self.total {
            return None;
        }
        if self.next_index > 0 {
            let j = self.next_index.trailing_zeros() as usize;
            self.current.xor_assign(&self.basis[j]);
        }
        self.next_index += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = (self.total - self.next_index) as usize;
        (rem, Some(rem))
    }
}

/// Visits the words of every element in one coset of a span partition.
///
/// The span of `basis` (independent rows) is split into `2^split_bits`
/// cosets by fixing the coefficients of the first `split_bits` basis rows to
/// the bits of `part`; the remaining rows are walked in Gray-code order.
pub fn for_each_in_partition(basis: &[BitVec], split_bits: usize, part: u64, mut f: impl FnMut(&[u64])) {
    let n_words = basis.first().map_or(0, |b| b.words().len());
    let mut cur = vec![0u64; n_words];
    let split = split_bits.min(basis.len());
    for (j, b) in basis[..split].iter().enumerate() {
        if (part >> j) & 1 == 1 {
            for (c, w) in cur.iter_mut().zip(b.words()) {
                *c ^= w;
            }
        }
    }
    let rest = &basis[split..];
    f(&cur);
    let total: u64 = 1u64 << rest.len();
    for i in 1..total {
        let j = i.trailing_zeros() as usize;
        for (c, w) in cur.iter_mut().zip(rest[j].words()) {
            *c ^= w;
        }
        f(&cur);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge(&bv("1111"), &bv("0101")).unwrap(), bv("0101"));
        assert_eq!(wedge(&bv("0011"), &bv("0101")).unwrap(), bv("0001"));
        assert!(matches!(wedge(&bv("11"), &bv("111")), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn dot_weight_triple() {
        assert!(dot(&bv("1100"), &bv("0110")).unwrap());
        assert_eq!(bv("00000101").weight(), 2);
        assert!(!triple_overlap(&bv("1111"), &bv("1111"), &bv("1111")).unwrap());
        assert!(dot(&bv("1"), &bv("11")).is_err());
    }

    #[test]
    fn tail_bits_stay_clear() {
        let v = BitVec::ones(70);
        assert_eq!(v.weight(), 70);
        assert_eq!(v.words()[1], (1 << 6) - 1);
        let w = BitVec::from_words(3, vec![u64::MAX]);
        assert_eq!(w.weight(), 3);
    }

    #[test]
    fn rref_identity_and_duplicates() {
        let id = BitMatrix::identity(5);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1, 2, 3, 4]);

        let dup = BitMatrix::from_strs(&["0110", "0110"]).unwrap();
        let r = dup.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.matrix.n_rows(), 1);
    }

    #[test]
    fn kernel_of_zero_matrix_is_everything() {
        let z = BitMatrix::zeros(3, 6);
        assert_eq!(z.kernel_basis().rank(), 6);
    }

    #[test]
    fn solve_identity() {
        let id = BitMatrix::identity(4);
        let b = bv("1011");
        match id.solve(&b).unwrap() {
            Solution::Affine { particular, kernel } => {
                assert_eq!(particular, b);
                assert_eq!(kernel.n_rows(), 0);
            }
            Solution::NoSolution => panic!("identity system must be solvable"),
        }
    }

    #[test]
    fn solve_inconsistent() {
        let m = BitMatrix::from_strs(&["11", "11"]).unwrap();
        assert_eq!(m.solve(&bv("10")).unwrap(), Solution::NoSolution);
    }

    #[test]
    fn span_of_rank_zero_is_origin() {
        let m = BitMatrix::zeros(2, 5);
        let all: Vec<_> = m.span_iter().unwrap().collect();
        assert_eq!(all, vec![BitVec::zeros(5)]);
    }

    #[test]
    fn span_cap_is_enforced() {
        let m = BitMatrix::identity(12);
        assert!(matches!(m.span_iter_capped(10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn partitions_cover_span_once() {
        let m = BitMatrix::from_strs(&["110000", "011000", "000111", "101010"]).unwrap();
        let basis = m.basis().into_rows();
        let mut seen = std::collections::HashSet::new();
        for part in 0..4 {
            for_each_in_partition(&basis, 2, part, |w| {
                assert!(seen.insert(w.to_vec()));
            });
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn select_and_concat() {
        let v = bv("10110");
        assert_eq!(v.select(&[4, 0, 2]), bv("011"));
        assert_eq!(bv("10").concat(&bv("011")), bv("10011"));
    }
}
