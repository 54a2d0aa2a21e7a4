//! Dense linear algebra over GF(2).
//!
//! Vectors are bit-packed into `u64` words and all elimination is done with
//! word-level XOR. Pivoting is deterministic: the pivot of a row is its first
//! nonzero column, and among candidate rows the lowest index wins. Every other
//! module in the crate (basis enumeration, homology, Hochschild solves) goes
//! through the types here.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

const WORD: usize = 64;

/// A vector over GF(2) of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
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
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// `self += other` over GF(2).
    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    /// Indices of the set bits, in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Grow (or shrink) to `len`, keeping existing bits below `len`.
    pub fn resize(&mut self, len: usize) {
        self.words.resize(len.div_ceil(WORD), 0);
        self.len = len;
        let rem = len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Concatenate `self` followed by `other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.resize(self.len + other.len);
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

/// A dense `rows × cols` matrix over GF(2), stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Outcome of [`BitMatrix::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// `M x = b`.
    Consistent(BitVec),
    /// A row combination `y` with `yᵀM = 0` and `yᵀb = 1`.
    Inconsistent { certificate: BitVec },
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: (0..rows).map(|_| BitVec::zeros(cols)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Panics if the rows do not all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length does not match column count");
        }
        BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for r in col.ones() {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn from_bools(rows: &[&[bool]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| BitVec::from_bools(r)).collect())
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
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r].flip(c)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_indices(self.rows, (0..self.rows).filter(|&r| self.get(r, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(BitVec::from_indices(
            self.rows,
            (0..self.rows).filter(|&r| self.data[r].dot(v)),
        ))
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if other.rows != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for k in row.ones() {
                out.data[r].xor_assign(&other.data[k]);
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form together with the pivot column of each
    /// nonzero row.
    fn rref(&self) -> (Vec<BitVec>, Vec<usize>) {
        let mut rows = self.data.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        rows.truncate(next);
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        for r in &self.data {
            ech.insert(r);
        }
        ech.rank()
    }

    /// A basis of `{v : M v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<BitVec> {
        let (rows, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::unit(self.cols, free);
                for (row, &p) in rows.iter().zip(&pivots) {
                    if row.get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Solve `M x = b`. Free variables are set to zero.
    pub fn solve(&self, b: &BitVec) -> Result<Solution, Gf2Error> {
        if b.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        // Eliminate on [M | b | I] so that the row combinations are tracked.
        let width = self.cols + 1 + self.rows;
        let rows: Vec<BitVec> = self
            .data
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut ext = row.clone();
                ext.resize(width);
                if b.get(r) {
                    ext.set(self.cols, true);
                }
                ext.set(self.cols + 1 + r, true);
                ext
            })
            .collect();
        let mut ech = Echelon::new(width);
        for row in &rows {
            let pivot_before = ech.rank();
            ech.insert(row);
            if ech.rank() > pivot_before {
                let (last, p) = ech.last_row();
                if p == self.cols {
                    let certificate = BitVec::from_indices(
                        self.rows,
                        last.ones().filter(|&i| i > self.cols).map(|i| i - self.cols - 1),
                    );
                    return Ok(Solution::Inconsistent { certificate });
                }
            }
        }
        // Consistent: back-substitute from the echelon rows with pivots < cols.
        let mut x = BitVec::zeros(self.cols);
        let reduced = ech.reduced_rows();
        for (row, p) in reduced {
            if p < self.cols && row.get(self.cols) {
                x.set(p, true);
            }
        }
        Ok(Solution::Consistent(x))
    }
}

/// Incrementally maintained echelon basis of a subspace of GF(2)^dim.
///
/// Each stored row has a distinct pivot (its first set bit) and is reduced
/// against all earlier rows, so reduction against the rows in insertion order
/// is complete. A tracked echelon also records, for every stored row, which
/// inserted vectors it is the sum of.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    track: bool,
    combos: Vec<BitVec>,
    inserted: usize,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            track: false,
            combos: Vec::new(),
            inserted: 0,
        }
    }

    /// An echelon that can express members in terms of inserted vectors.
    pub fn tracked(dim: usize) -> Self {
        Echelon {
            track: true,
            ..Echelon::new(dim)
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors passed to [`Echelon::insert`] so far.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    fn last_row(&self) -> (&BitVec, usize) {
        (
            self.rows.last().expect("nonempty echelon"),
            *self.pivots.last().expect("nonempty echelon"),
        )
    }

    /// The residual of `v` modulo the stored rows. It vanishes at every pivot.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.dim);
        let mut res = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if res.get(p) {
                res.xor_assign(row);
            }
        }
        res
    }

    fn reduce_tracked(&self, v: &BitVec) -> (BitVec, BitVec) {
        assert_eq!(v.len(), self.dim);
        let mut res = v.clone();
        let mut combo = BitVec::zeros(self.inserted);
        for ((row, &p), c) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            if res.get(p) {
                res.xor_assign(row);
                let mut c = c.clone();
                c.resize(self.inserted);
                combo.xor_assign(&c);
            }
        }
        (res, combo)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// If `v` lies in the span of the inserted vectors, the coefficients
    /// expressing it in those vectors. Requires a tracked echelon.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        assert!(self.track, "coordinates need Echelon::tracked");
        let (res, combo) = self.reduce_tracked(v);
        res.is_zero().then_some(combo)
    }

    /// Insert `v`; returns `true` if it was independent of the span.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let idx = self.inserted;
        let (res, combo) = if self.track {
            let (res, mut combo) = self.reduce_tracked(v);
            combo.resize(idx + 1);
            combo.flip(idx);
            (res, combo)
        } else {
            (self.reduce(v), BitVec::zeros(0))
        };
        self.inserted += 1;
        match res.first_one() {
            None => false,
            Some(p) => {
                self.rows.push(res);
                self.pivots.push(p);
                if self.track {
                    self.combos.push(combo);
                }
                true
            }
        }
    }

    /// Rows in fully reduced form (each pivot column is zero in every other
    /// row), paired with their pivots.
    fn reduced_rows(&self) -> Vec<(BitVec, usize)> {
        let mut rows = self.rows.clone();
        for k in (0..rows.len()).rev() {
            let p = self.pivots[k];
            let pivot_row = rows[k].clone();
            for row in rows[..k].iter_mut() {
                if row.get(p) {
                    row.xor_assign(&pivot_row);
                }
            }
        }
        rows.into_iter().zip(self.pivots.iter().copied()).collect()
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::zeros(4, 5).rank(), 0);
        let m = BitMatrix::from_bools(&[&[true, true], &[true, true]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(BitMatrix::identity(4).kernel().is_empty());
        let m = BitMatrix::from_bools(&[&[true, true], &[true, true]]);
        assert_eq!(m.kernel(), vec![BitVec::from_bools(&[true, true])]);
        let z = BitMatrix::zeros(2, 3);
        assert_eq!(z.kernel().len(), 3);
    }

    #[test]
    fn solve_examples() {
        let id = BitMatrix::identity(2);
        let b = BitVec::from_bools(&[true, false]);
        assert_eq!(id.solve(&b).unwrap(), Solution::Consistent(b.clone()));

        let m = BitMatrix::from_bools(&[&[true, true]]);
        let one = BitVec::from_bools(&[true]);
        match m.solve(&one).unwrap() {
            Solution::Consistent(x) => assert_eq!(m.mul_vec(&x).unwrap(), one),
            other => panic!("expected a solution, got {other:?}"),
        }

        let z = BitMatrix::from_bools(&[&[false, false]]);
        match z.solve(&one).unwrap() {
            Solution::Inconsistent { certificate } => {
                assert_eq!(certificate, BitVec::from_bools(&[true]))
            }
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn solve_rejects_wrong_rhs_length() {
        let m = BitMatrix::identity(3);
        assert_eq!(
            m.solve(&BitVec::zeros(2)),
            Err(Gf2Error::DimensionMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn certificate_annihilates_matrix() {
        // rows: x0, x1, x0+x1 with rhs 1,0,0 is inconsistent.
        let m = BitMatrix::from_bools(&[&[true, false], &[false, true], &[true, true]]);
        let b = BitVec::from_bools(&[true, false, false]);
        let Solution::Inconsistent { certificate } = m.solve(&b).unwrap() else {
            panic!("should be inconsistent");
        };
        let yt = BitMatrix::from_rows(3, vec![certificate.clone()]);
        assert!(yt.mul(&m).unwrap().is_zero());
        assert!(certificate.dot(&b));
    }

    #[test]
    fn echelon_coordinates() {
        let mut e = Echelon::tracked(3);
        let a = BitVec::from_bools(&[true, true, false]);
        let b = BitVec::from_bools(&[false, true, true]);
        assert!(e.insert(&a));
        assert!(e.insert(&b));
        assert!(!e.insert(&BitVec::from_bools(&[true, false, true])));
        let c = e.coordinates(&BitVec::from_bools(&[true, false, true])).unwrap();
        assert!(c.get(0) && c.get(1));
        assert!(e.coordinates(&BitVec::unit(3, 0)).is_none());
    }

    #[test]
    fn bitvec_ones_and_resize() {
        let mut v = BitVec::from_indices(130, [0, 64, 129]);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        v.resize(100);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 64]);
        assert_eq!(v.first_one(), Some(0));
    }
}
