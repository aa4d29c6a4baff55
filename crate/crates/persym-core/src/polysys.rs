//! Solution counts and character sums for the bilinear systems attached to
//! the family.
//!
//! A parameter tuple t = (t_1, ..., t_n) corresponds to the system
//!
//! ```text
//!   Y_1 U_j^(1) + ... + Y_q U_j^(q) = 0   for j = 1..n
//! ```
//!
//! over GF(2)[T], with deg Y_i <= k-1 and deg U_j^(i) <= 1. The number of
//! solutions of the homogeneous system relates to the rank census through the
//! moment identities, and the per-tuple character sum relates to the rank of
//! that tuple's matrix. Both evaluators here enumerate literally, bounded by
//! hard guards; they are the slow, obviously-correct side of every closure
//! check against [`crate::moments::predict_count`].

use num_bigint::BigUint;

use crate::family::ParamTuple;
use crate::gf2::mask;
use crate::{Error, Result};

/// Carry-less (GF(2)[T]) product of two packed polynomials, shift-and-xor.
/// Degrees must stay within the word: deg a + deg b <= 63.
#[must_use]
pub fn clmul(a: u64, mut b: u64) -> u64 {
    let mut a = a;
    let mut acc = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

/// Parity of the character pairing between a product polynomial and one
/// block's coefficient mask.
#[inline]
fn pairing_is_odd(product: u64, alpha: u64) -> bool {
    (product & alpha).count_ones() & 1 == 1
}

/// Counts solutions of the order-q homogeneous system by full enumeration of
/// all (Y_i, U_1^(i), ..., U_n^(i)) choices. One choice group has k + 2n
/// bits; the guard caps the whole enumeration at 2^32 tuples.
pub fn count_solutions(n: u32, k: u32, q: u32) -> Result<BigUint> {
    if n == 0 || k == 0 {
        return Err(Error::EmptyShape { n, k });
    }
    let group_bits = k + 2 * n;
    let total_bits = group_bits.saturating_mul(q);
    if total_bits > 32 {
        return Err(Error::EnumerationGuard { bits: total_bits, limit: 32 });
    }

    let y_mask = mask(k as usize);
    let group_count: u64 = 1 << group_bits;
    let mut groups = alloc::vec![0u64; q as usize];
    let mut solutions: u64 = 0;
    'enumerate: loop {
        let satisfied = (0..n).all(|j| {
            groups
                .iter()
                .map(|&g| clmul(g & y_mask, g >> (k + 2 * j) & 0b11))
                .fold(0, |acc, term| acc ^ term)
                == 0
        });
        if satisfied {
            solutions += 1;
        }
        for digit in groups.iter_mut() {
            *digit += 1;
            if *digit < group_count {
                continue 'enumerate;
            }
            *digit = 0;
        }
        break;
    }
    Ok(BigUint::from(solutions))
}

/// Character sum of one parameter tuple:
///
/// ```text
///   sum over Y, U_1..U_n of prod_j E(t_j Y U_j)
/// ```
///
/// where E is +1 or -1 by the parity of the pairing. Factoring the sum over
/// each block's four U choices is exact; the guard caps the underlying tuple
/// space 2^k * 4^n at 2^24. The value always equals 2^(2n + k - rank) for the
/// tuple's matrix, which is what the exhaustive cross-check tests assert.
pub fn exp_sum(p: &ParamTuple) -> Result<i64> {
    let shape = p.shape();
    let (n, k) = (shape.n(), shape.k());
    let bits = k + 2 * n;
    if bits > 24 {
        return Err(Error::EnumerationGuard { bits, limit: 24 });
    }

    let mut total: i64 = 0;
    for y in 0..1u64 << k {
        let mut block_product: i64 = 1;
        for &alpha in p.alpha() {
            let mut inner: i64 = 0;
            for u in 0..4 {
                inner += if pairing_is_odd(clmul(y, u), alpha) { -1 } else { 1 };
            }
            if inner == 0 {
                block_product = 0;
                break;
            }
            block_product *= inner;
        }
        total += block_product;
    }
    Ok(total)
}
