//! Bit-packed GF(2) matrices and the rank kernel.
//!
//! A matrix stores one `u64` per row with bit `c` of row `r` holding entry
//! (r, c). Rank is forward elimination on a copied basis: each incoming row is
//! reduced against the rows already kept, using the lowest set bit of a kept
//! row as its pivot. The kernel works on raw packed rows so the census loop
//! can use it without building a [`BitMatrix`] per parameter point.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Hard cap on rows and columns imposed by one-word row packing.
pub const MAX_DIM: usize = 64;

/// Dense GF(2) matrix, one `u64` per row, bit `c` of row `r` = entry (r, c).
/// Bits at positions >= `cols` are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    row_bits: Vec<u64>,
}

impl BitMatrix {
    /// All-zero matrix. Errors when either dimension exceeds [`MAX_DIM`].
    pub fn zero(rows: usize, cols: usize) -> Result<Self> {
        if rows > MAX_DIM || cols > MAX_DIM {
            return Err(Error::DimensionCap { rows, cols });
        }
        Ok(BitMatrix { rows, cols, row_bits: alloc::vec![0; rows] })
    }

    /// Builds from packed rows, rejecting stray bits at or above `cols`.
    pub fn from_rows(cols: usize, rows: Vec<u64>) -> Result<Self> {
        if rows.len() > MAX_DIM || cols > MAX_DIM {
            return Err(Error::DimensionCap { rows: rows.len(), cols });
        }
        let col_mask = mask(cols);
        if let Some(row) = rows.iter().position(|&r| r & !col_mask != 0) {
            return Err(Error::StrayBits { row });
        }
        Ok(BitMatrix { rows: rows.len(), cols, row_bits: rows })
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Packed rows, one word per row.
    #[must_use]
    pub fn row_bits(&self) -> &[u64] {
        &self.row_bits
    }

    #[must_use]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        self.row_bits[r] >> c & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        if value {
            self.row_bits[r] |= 1 << c;
        } else {
            self.row_bits[r] &= !(1 << c);
        }
    }

    /// Rank over GF(2). The matrix itself is untouched.
    #[must_use]
    pub fn rank(&self) -> usize {
        rank_of_rows(self.row_bits.iter().copied())
    }
}

impl core::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Mask with the low `cols` bits set; `cols` may be 64.
#[inline]
#[must_use]
pub fn mask(cols: usize) -> u64 {
    debug_assert!(cols <= 64);
    if cols == 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

/// Incremental GF(2) row basis. Rows are inserted one at a time; the basis
/// keeps each reduced row paired with its pivot (lowest set bit). The inner
/// census loop reuses one accumulator across millions of matrices, so
/// [`RankBasis::clear`] and [`Clone::clone_from`] never release capacity.
#[derive(Clone, Default)]
pub struct RankBasis {
    // (isolated pivot bit, reduced row) with pairwise distinct pivots
    rows: Vec<(u64, u64)>,
}

impl RankBasis {
    #[must_use]
    pub fn new() -> Self {
        RankBasis::default()
    }

    pub fn clear(&mut self) {
        self.rows.clear();
    }

    /// Reduces `row` against the basis and keeps it if independent.
    /// Returns whether the rank grew.
    #[inline]
    pub fn insert(&mut self, mut row: u64) -> bool {
        for &(pivot, basis_row) in &self.rows {
            if row & pivot != 0 {
                row ^= basis_row;
            }
        }
        if row == 0 {
            return false;
        }
        self.rows.push((row & row.wrapping_neg(), row));
        true
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Rank of a sequence of packed rows.
#[must_use]
pub fn rank_of_rows<I: IntoIterator<Item = u64>>(rows: I) -> usize {
    let mut basis = RankBasis::new();
    for row in rows {
        basis.insert(row);
    }
    basis.rank()
}
