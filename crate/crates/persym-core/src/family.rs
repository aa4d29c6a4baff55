//! Parameter model for the n-times persymmetric family.
//!
//! A family member is a 2n x k matrix over GF(2) made of n stacked 2 x k
//! Hankel blocks. Block j is determined by k+1 coefficient bits
//! a_1^(j), ..., a_(k+1)^(j): its first row reads a_1..a_k and its second row
//! a_2..a_(k+1). Each block is packed into one word with bit i-1 holding
//! a_i^(j), and a whole parameter tuple is addressed by a single integer in
//! block-major, coefficient-minor order: bit j*(k+1) + (i-1) of the index is
//! a_i^(j), so block 0 occupies the least significant chunk.

use alloc::vec::Vec;

use crate::gf2::{mask, BitMatrix};
use crate::{Error, Result};

/// Family dimensions: `n` stacked blocks of two rows, `k` columns.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FamilyShape {
    n: u32,
    k: u32,
}

impl FamilyShape {
    /// Requires n >= 1, k >= 1; caps k at 63 so one coefficient block fits a
    /// word alongside its shifted second row, and 2n at 64 rows.
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::EmptyShape { n, k });
        }
        if k > 63 {
            return Err(Error::ColumnCap { k });
        }
        if n > 32 {
            return Err(Error::DimensionCap { rows: 2 * n as usize, cols: k as usize });
        }
        Ok(FamilyShape { n, k })
    }

    #[must_use]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[must_use]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        2 * self.n as usize
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.k as usize
    }

    /// Largest attainable rank, min(2n, k).
    #[must_use]
    pub fn max_rank(&self) -> usize {
        self.rows().min(self.cols())
    }

    /// Bits in a parameter index: n(k+1).
    #[must_use]
    pub fn param_bits(&self) -> u32 {
        self.n * (self.k + 1)
    }

    /// Number of family members, 2^(n(k+1)). Errors when that does not fit
    /// the 63-bit enumeration index.
    pub fn param_count(&self) -> Result<u64> {
        let bits = self.param_bits();
        if bits > 63 {
            return Err(Error::IndexWidth { bits });
        }
        Ok(1u64 << bits)
    }
}

/// One choice of coefficients for every block: `alpha[j]` packs the k+1
/// coefficient bits of block j.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParamTuple {
    shape: FamilyShape,
    alpha: Vec<u64>,
}

impl ParamTuple {
    /// Wraps packed per-block coefficients. Requires one word per block with
    /// no bits at or above k+1.
    pub fn new(shape: FamilyShape, alpha: Vec<u64>) -> Result<Self> {
        if alpha.len() != shape.n as usize {
            return Err(Error::BlockCount { expected_n: shape.n, got_n: alpha.len() as u32 });
        }
        let chunk_mask = mask(shape.k as usize + 1);
        if let Some(row) = alpha.iter().position(|&a| a & !chunk_mask != 0) {
            return Err(Error::StrayBits { row });
        }
        Ok(ParamTuple { shape, alpha })
    }

    /// Decodes a parameter index (block-major, coefficient-minor).
    pub fn from_index(shape: FamilyShape, index: u64) -> Result<Self> {
        let bits = shape.param_bits();
        if bits < 64 && index >> bits != 0 {
            return Err(Error::IndexRange { index, bits });
        }
        let chunk_bits = shape.k + 1;
        let chunk_mask = mask(chunk_bits as usize);
        let alpha = (0..shape.n).map(|j| index >> (j * chunk_bits) & chunk_mask).collect();
        Ok(ParamTuple { shape, alpha })
    }

    /// Inverse of [`ParamTuple::from_index`].
    #[must_use]
    pub fn index(&self) -> u64 {
        let chunk_bits = self.shape.k + 1;
        self.alpha
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &a)| acc | a << (j as u32 * chunk_bits))
    }

    #[must_use]
    pub fn shape(&self) -> FamilyShape {
        self.shape
    }

    /// Packed coefficients, one word per block; bit i-1 of `alpha()[j]` is
    /// a_i^(j).
    #[must_use]
    pub fn alpha(&self) -> &[u64] {
        &self.alpha
    }

    /// Assembles the 2n x k matrix: block j contributes rows 2j (coefficients
    /// 1..k) and 2j+1 (coefficients 2..k+1).
    #[must_use]
    pub fn build_matrix(&self) -> BitMatrix {
        let k = self.shape.k as usize;
        let col_mask = mask(k);
        let mut rows = Vec::with_capacity(self.shape.rows());
        for &a in &self.alpha {
            rows.push(a & col_mask);
            rows.push(a >> 1);
        }
        BitMatrix::from_rows(k, rows).expect("blocks fit the matrix cap by construction")
    }
}
