//! Dense bit-packed GF(2) matrices: rank, reduced row echelon form and
//! nullspace bases for parity-check matrices.

use std::fmt;

/// Row-major bit matrix over GF(2). Each row is packed into `u64` words.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        Self {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
        }
    }

    /// Builds a matrix from rows given as lists of column indices.
    pub fn from_row_supports(cols: usize, supports: &[Vec<usize>]) -> Self {
        let mut m = Self::zeros(supports.len(), cols);
        for (r, support) in supports.iter().enumerate() {
            for &c in support {
                m.flip(r, c);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.bits[r * self.words + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.bits[r * self.words + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (w, bits) = (self.words, &mut self.bits);
        for k in 0..w {
            let v = bits[src * w + k];
            bits[dst * w + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words {
            self.bits.swap(a * self.words + k, b * self.words + k);
        }
    }

    /// Reduces `self` in place to reduced row echelon form and returns the
    /// pivot column of each nonzero row.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(row, p);
            for r in 0..self.rows {
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
        self.clone().rref_in_place().len()
    }

    /// `H·x` over GF(2) for `x` given as a 0/1 slice.
    pub fn mul_vec(&self, x: &[u8]) -> Vec<u8> {
        assert_eq!(x.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u8;
                for (c, &xc) in x.iter().enumerate() {
                    if xc & 1 == 1 && self.get(r, c) {
                        acc ^= 1;
                    }
                }
                acc
            })
            .collect()
    }

    /// True when every row has even overlap with `x`.
    pub fn annihilates(&self, x: &[u8]) -> bool {
        self.mul_vec(x).iter().all(|&s| s == 0)
    }

    /// A basis of `{x : H·x = 0}`, one 0/1 vector per free column of the
    /// echelon form. The basis has `cols - rank` elements.
    pub fn nullspace_basis(&self) -> Vec<Vec<u8>> {
        let mut reduced = self.clone();
        let pivots = reduced.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u8; self.cols];
            v[free] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                if reduced.get(r, free) {
                    v[p] = 1;
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
