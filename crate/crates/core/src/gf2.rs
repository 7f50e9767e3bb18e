//! Dense bit-packed linear algebra over the two-element field.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (k, &b) in bits.iter().enumerate() {
            if b {
                v.set(k, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, k: usize) -> bool {
        assert!(k < self.len, "bit index {k} out of range {}", self.len);
        self.words[k / WORD] >> (k % WORD) & 1 == 1
    }

    pub fn set(&mut self, k: usize, value: bool) {
        assert!(k < self.len, "bit index {k} out of range {}", self.len);
        let mask = 1u64 << (k % WORD);
        if value {
            self.words[k / WORD] |= mask;
        } else {
            self.words[k / WORD] &= !mask;
        }
    }

    pub fn toggle(&mut self, k: usize) {
        assert!(k < self.len, "bit index {k} out of range {}", self.len);
        self.words[k / WORD] ^= 1u64 << (k % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the set bits, increasing.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + bit)
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|k| self.get(k)).collect()
    }

    fn first_one_from(&self, start: usize) -> Option<usize> {
        if start >= self.len {
            return None;
        }
        let first_word = start / WORD;
        let head = self.words[first_word] & (u64::MAX << (start % WORD));
        if head != 0 {
            return Some(first_word * WORD + head.trailing_zeros() as usize);
        }
        self.words[first_word + 1..].iter().position(|&w| w != 0).map(|off| {
            let wi = first_word + 1 + off;
            wi * WORD + self.words[wi].trailing_zeros() as usize
        })
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|k| if self.get(k) { '1' } else { '0' }).collect();
        write!(f, "[{s}]")
    }
}

/// A `rows × cols` matrix over GF(2), stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, true);
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            cols,
            rows: rows.iter().map(|r| BitVector::from_bools(r)).collect(),
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn toggle(&mut self, r: usize, c: usize) {
        self.rows[r].toggle(c);
    }

    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns but vector has length {}",
                self.cols,
                x.len()
            )));
        }
        let mut out = BitVector::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            let parity = row
                .words
                .iter()
                .zip(&x.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                % 2;
            out.set(r, parity == 1);
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        Echelon::new(self, None).pivots.len()
    }

    /// Some `x` with `Mx = b`, or `None` when `b` is outside the column space.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if b.len() != self.rows.len() {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows but right-hand side has length {}",
                self.rows.len(),
                b.len()
            )));
        }
        let ech = Echelon::new(self, Some(b));
        if ech.rhs[ech.pivots.len()..].iter().any(|&bit| bit) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (r, &c) in ech.pivots.iter().enumerate() {
            if ech.rhs[r] {
                x.set(c, true);
            }
        }
        Ok(Some(x))
    }

    /// A basis of `{x : Mx = 0}`, one vector per free column in increasing
    /// column order.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let ech = Echelon::new(self, None);
        let mut is_pivot = vec![false; self.cols];
        for &c in &ech.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVector::zeros(self.cols);
                v.set(free, true);
                for (r, &c) in ech.pivots.iter().enumerate() {
                    if ech.rows[r].get(free) {
                        v.set(c, true);
                    }
                }
                v
            })
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Reduced row echelon form, optionally carrying a right-hand side.
struct Echelon {
    rows: Vec<BitVector>,
    rhs: Vec<bool>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(m: &BitMatrix, b: Option<&BitVector>) -> Self {
        let mut rows = m.rows.clone();
        let mut rhs: Vec<bool> = match b {
            Some(b) => b.to_bools(),
            None => vec![false; rows.len()],
        };
        let mut pivots = Vec::new();
        let mut next = 0;
        let mut col = 0;
        while next < rows.len() && col < m.cols {
            // leftmost remaining pivot column among rows next..
            let found = (next..rows.len())
                .filter_map(|r| rows[r].first_one_from(col).map(|c| (c, r)))
                .min();
            let Some((c, r)) = found else { break };
            rows.swap(next, r);
            rhs.swap(next, r);
            let pivot_row = rows[next].clone();
            let pivot_rhs = rhs[next];
            for k in 0..rows.len() {
                if k != next && rows[k].get(c) {
                    rows[k].xor_assign(&pivot_row);
                    rhs[k] ^= pivot_rhs;
                }
            }
            pivots.push(c);
            next += 1;
            col = c + 1;
        }
        Self { rows, rhs, pivots }
    }
}
