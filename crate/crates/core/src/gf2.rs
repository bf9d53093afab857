//! Dense matrices over GF(2).
//!
//! Rows are packed into 64-bit words, column `j` living in word `j / 64` at
//! bit `j % 64`. Every operation returns a fresh matrix; a `Gf2Matrix` is never
//! mutated once it leaves this crate.
//!
//! Elimination always picks the first nonzero column, scanning left to right,
//! so echelon forms and decoder matrices are reproducible.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};

const WORD_BITS: usize = 64;

fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD_BITS)
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i == j)
    }

    /// The `i`-th coordinate vector of length `n` as an `n x 1` column
    /// (zero-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        Self::from_fn(n, 1, |r, _| r == i)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut out = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    out.set(r, c, true);
                }
            }
        }
        out
    }

    /// Parses rows written as `'0'`/`'1'` strings, column 0 first.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::parse_rows(rows.len(), cols, rows)
    }

    fn parse_rows<S: AsRef<str>>(rows: usize, cols: usize, data: &[S]) -> Result<Self> {
        if data.len() != rows {
            return Err(Error::Parse(format!(
                "expected {rows} rows, found {}",
                data.len()
            )));
        }
        let mut out = Self::zeros(rows, cols);
        for (r, line) in data.iter().enumerate() {
            let line = line.as_ref();
            if line.len() != cols {
                return Err(Error::Parse(format!(
                    "row {r} has {} entries, expected {cols}",
                    line.len()
                )));
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => out.set(r, c, true),
                    other => {
                        return Err(Error::Parse(format!("unexpected character {other:?}")))
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        (self.words[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    pub(crate) fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        let w = &mut self.words[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[cfg(test)]
    pub(crate) fn flip(&mut self, r: usize, c: usize) {
        let v = self.get(r, c);
        self.set(r, c, !v);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.stride, dst * self.stride);
        for k in 0..self.stride {
            let v = self.words[s + k];
            self.words[d + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.words.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn column_is_zero(&self, c: usize) -> bool {
        (0..self.rows).all(|r| !self.get(r, c))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.ones_in_row(r) {
                out.set(c, r, true);
            }
        }
        out
    }

    /// Column indices of the set bits in row `r`, ascending.
    pub fn ones_in_row(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        let cols = self.cols;
        self.row_words(r)
            .iter()
            .enumerate()
            .flat_map(|(k, &w)| {
                let mut w = w;
                std::iter::from_fn(move || {
                    if w == 0 {
                        return None;
                    }
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD_BITS + b)
                })
            })
            .take_while(move |&c| c < cols)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(mismatch("mul", self.shape(), rhs.shape()));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let dst = r * out.stride;
            for k in self.ones_in_row(r) {
                let src = rhs.row_words(k);
                for (d, s) in out.words[dst..dst + out.stride].iter_mut().zip(src) {
                    *d ^= s;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(mismatch("add", self.shape(), rhs.shape()));
        }
        let mut out = self.clone();
        for (d, s) in out.words.iter_mut().zip(&rhs.words) {
            *d ^= s;
        }
        Ok(out)
    }

    pub fn pow(&self, e: usize) -> Result<Self> {
        if self.rows != self.cols {
            return Err(mismatch("pow", self.shape(), self.shape()));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let (br, bc) = rhs.shape();
        let mut out = Self::zeros(self.rows * br, self.cols * bc);
        for r in 0..self.rows {
            for c in self.ones_in_row(r) {
                for i in 0..br {
                    for j in rhs.ones_in_row(i) {
                        out.set(r * br + i, c * bc + j, true);
                    }
                }
            }
        }
        out
    }

    /// `I_n (x) self`: the block-diagonal repetition used for `n` channel uses.
    pub fn repeat_diagonal(&self, n: usize) -> Self {
        Self::identity(n).kron(self)
    }

    pub fn hconcat(blocks: &[&Self]) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Ok(Self::zeros(0, 0));
        };
        let rows = first.rows;
        if let Some(bad) = blocks.iter().find(|b| b.rows != rows) {
            return Err(mismatch("hconcat", first.shape(), bad.shape()));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            for r in 0..rows {
                for c in b.ones_in_row(r) {
                    out.set(r, offset + c, true);
                }
            }
            offset += b.cols;
        }
        Ok(out)
    }

    pub fn vconcat(blocks: &[&Self]) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Ok(Self::zeros(0, 0));
        };
        let cols = first.cols;
        if let Some(bad) = blocks.iter().find(|b| b.cols != cols) {
            return Err(mismatch("vconcat", first.shape(), bad.shape()));
        }
        let stride = words_for(cols);
        let mut words = Vec::with_capacity(blocks.iter().map(|b| b.words.len()).sum());
        for b in blocks {
            words.extend_from_slice(&b.words);
        }
        Ok(Self {
            rows: blocks.iter().map(|b| b.rows).sum(),
            cols,
            stride,
            words,
        })
    }

    pub fn columns(&self, range: Range<usize>) -> Self {
        assert!(range.end <= self.cols, "column range out of bounds");
        let start = range.start;
        Self::from_fn(self.rows, range.len(), |r, c| self.get(r, start + c))
    }

    pub fn column(&self, c: usize) -> Self {
        self.columns(c..c + 1)
    }

    pub fn row_range(&self, range: Range<usize>) -> Self {
        assert!(range.end <= self.rows, "row range out of bounds");
        Self {
            rows: range.len(),
            cols: self.cols,
            stride: self.stride,
            words: self.words[range.start * self.stride..range.end * self.stride].to_vec(),
        }
    }

    /// Forward elimination in place; returns the pivot columns in order.
    /// With `reduce` set, pivots are also cleared above (reduced form).
    /// Only columns below `pivot_limit` are eligible as pivots.
    fn eliminate(&mut self, pivot_limit: usize, reduce: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_limit.min(self.cols) {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(row, p);
            let lo = if reduce { 0 } else { row + 1 };
            for r in lo..self.rows {
                if r != row && self.get(r, col) {
                    self.xor_row_into(row, r);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.eliminate(self.cols, false).len()
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut work = self.clone();
        let pivots = work.eliminate(self.cols, true);
        (work, pivots)
    }

    /// Finds `D` with `D * self = target`, i.e. expresses every row of
    /// `target` as a combination of rows of `self`. Returns `None` when some
    /// row of `target` is outside the row space.
    ///
    /// The system is solved as `self^T x = target^T` by reducing the augmented
    /// matrix; free variables are set to zero.
    pub fn solve_left(&self, target: &Self) -> Result<Option<Self>> {
        if self.cols != target.cols {
            return Err(mismatch("solve_left", self.shape(), target.shape()));
        }
        let unknowns = self.rows;
        let mut aug = Self::hconcat(&[&self.transpose(), &target.transpose()])?;
        let pivots = aug.eliminate(unknowns, true);
        for r in pivots.len()..aug.rows {
            if aug.ones_in_row(r).any(|c| c >= unknowns) {
                return Ok(None);
            }
        }
        let mut solution = Self::zeros(target.rows, unknowns);
        for (r, &col) in pivots.iter().enumerate() {
            for c in aug.ones_in_row(r).filter(|&c| c >= unknowns) {
                solution.set(c - unknowns, col, true);
            }
        }
        Ok(Some(solution))
    }

    /// Whether every row of `target` lies in the row space of `self`.
    pub fn row_space_contains(&self, target: &Self) -> Result<bool> {
        if self.cols != target.cols {
            return Err(mismatch("row_space_contains", self.shape(), target.shape()));
        }
        let base = self.rank();
        Ok(Self::vconcat(&[self, target])?.rank() == base)
    }

    pub fn row_strings(&self) -> Vec<String> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| if self.get(r, c) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }
}

/// `G^power` for the `q x q` down-shift `G`, `[G]_{ij} = 1{i = j + 1}`.
pub fn shift_matrix(q: usize, power: usize) -> Gf2Matrix {
    Gf2Matrix::from_fn(q, q, |i, j| i == j + power)
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows, self.cols)?;
        for line in self.row_strings() {
            writeln!(f, "  {line}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, line) in self.row_strings().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<String>,
}

impl From<Gf2Matrix> for MatrixJson {
    fn from(m: Gf2Matrix) -> Self {
        Self {
            rows: m.rows,
            cols: m.cols,
            data: m.row_strings(),
        }
    }
}

impl TryFrom<MatrixJson> for Gf2Matrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        Gf2Matrix::parse_rows(j.rows, j.cols, &j.data)
    }
}
