//! Exhaustive rank census over the whole parameter space.
//!
//! The census walks every parameter index in plain lexicographic order and
//! tallies the rank of each family member. One hoisting is applied on top of
//! that order: all indices in a group share every block except block 0, so the
//! partially reduced basis of blocks 1..n is built once per group and only the
//! two rows of block 0 are inserted per index. This is loop restructuring, not
//! incremental rank maintenance; each matrix is still ranked independently.
//!
//! [`census_partial`] covers any sub-range of indices so callers can split the
//! space into contiguous chunks (one per worker) and merge the partial
//! histograms. Counts within a partial run fit u64 because the index space
//! itself is capped at 2^63.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::family::FamilyShape;
use crate::gf2::{mask, RankBasis};
use crate::{Error, Result};

/// Census sweeps above 2^GUARD_BITS parameters are refused unless forced.
pub const GUARD_BITS: u32 = 40;

/// Rank tallies for one family: `counts()[i]` is the exact number of
/// parameter choices whose matrix has rank i. A full census satisfies
/// `total() == 2^(n(k+1))` and `counts()[0] == 1` (only the zero tuple gives
/// the zero matrix); partial histograms carry just their range's mass.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankHistogram {
    n: u32,
    k: u32,
    counts: Vec<BigUint>,
}

impl RankHistogram {
    fn from_u64_counts(shape: FamilyShape, counts: Vec<u64>) -> Self {
        RankHistogram {
            n: shape.n(),
            k: shape.k(),
            counts: counts.into_iter().map(BigUint::from).collect(),
        }
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
    pub fn shape(&self) -> FamilyShape {
        FamilyShape::new(self.n, self.k).expect("histogram shapes are validated on construction")
    }

    /// Tallies indexed by rank, length min(2n, k) + 1.
    #[must_use]
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// Count for one rank; zero for ranks beyond the attainable maximum.
    #[must_use]
    pub fn count(&self, rank: usize) -> BigUint {
        self.counts.get(rank).cloned().unwrap_or_default()
    }

    /// Total mass, `2^(n(k+1))` for a full census.
    #[must_use]
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Adds another partial histogram over the same family.
    pub fn merge(&mut self, other: &RankHistogram) -> Result<()> {
        if (self.n, self.k) != (other.n, other.k) {
            return Err(Error::HistogramShapes { a: (self.n, self.k), b: (other.n, other.k) });
        }
        for (mine, theirs) in self.counts.iter_mut().zip(&other.counts) {
            *mine += theirs;
        }
        Ok(())
    }
}

/// Validates a census request: shape constraints, the 63-bit index cap (hard),
/// and the 2^GUARD_BITS sweep-size guard (waived by `force`).
pub fn check_feasible(n: u32, k: u32, force: bool) -> Result<FamilyShape> {
    let shape = FamilyShape::new(n, k)?;
    let bits = shape.param_bits();
    if bits > 63 {
        return Err(Error::IndexWidth { bits });
    }
    if !force && bits > GUARD_BITS {
        return Err(Error::CensusGuard { bits, limit: GUARD_BITS });
    }
    Ok(shape)
}

/// Rank census over the index range [lo, hi), lexicographic order.
pub fn census_partial(n: u32, k: u32, lo: u64, hi: u64) -> Result<RankHistogram> {
    let shape = FamilyShape::new(n, k)?;
    let bits = shape.param_bits();
    let total = shape.param_count()?;
    if lo > hi || hi > total {
        return Err(Error::BadRange { lo, hi, bits });
    }

    let chunk_bits = k + 1;
    let chunk_mask = mask(chunk_bits as usize);
    let col_mask = mask(k as usize);
    let mut counts = vec![0u64; shape.max_rank() + 1];
    let mut prefix_basis = RankBasis::new();
    let mut basis = RankBasis::new();

    let mut idx = lo;
    while idx < hi {
        let prefix = idx >> chunk_bits;
        let group_end = ((prefix + 1) << chunk_bits).min(hi);

        prefix_basis.clear();
        let mut rest = prefix;
        for _ in 1..n {
            let block = rest & chunk_mask;
            prefix_basis.insert(block & col_mask);
            prefix_basis.insert(block >> 1);
            rest >>= chunk_bits;
        }

        for index in idx..group_end {
            basis.clone_from(&prefix_basis);
            let block = index & chunk_mask;
            basis.insert(block & col_mask);
            basis.insert(block >> 1);
            counts[basis.rank()] += 1;
        }
        idx = group_end;
    }

    Ok(RankHistogram::from_u64_counts(shape, counts))
}

/// Full census in one sequential sweep, subject to the feasibility guard.
pub fn census_full(n: u32, k: u32, force: bool) -> Result<RankHistogram> {
    let shape = check_feasible(n, k, force)?;
    census_partial(n, k, 0, shape.param_count()?)
}
