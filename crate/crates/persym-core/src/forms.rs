//! Closed-form evaluators for the rank counts.
//!
//! Three families of formulas, all polynomial in 2^k with exact integer (or
//! provably integral rational) coefficients:
//!
//! - [`gamma_general`]: ranks 0..=5 for any block count n,
//! - [`gamma_n4`]: all nine lines of the quadruple family (n = 4),
//! - [`gamma_n5`]: all eleven lines of the quintuple family (n = 5), plus
//!   [`gamma10_product`], the factored product form of its top line.
//!
//! Every evaluator returns the exact polynomial value for any k >= 1 together
//! with a `valid` flag that records whether k meets the formula's stated
//! validity threshold. Below the threshold the polynomial value generally
//! differs from the true census count (it can even be negative); callers that
//! want to compare against a census filter on `valid`. The census itself is
//! the authority for whether a line happens to extend below its threshold.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::{Error, Result};

/// Identifies which evaluator produced a [`FormulaValue`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FormulaSource {
    /// General-n line for one rank.
    General { n: u32, i: u32 },
    /// Quadruple-family (n = 4) line for one rank.
    Quadruple { i: u32 },
    /// Quintuple-family (n = 5) line for one rank.
    Quintuple { i: u32 },
    /// Factored product form of the quintuple rank-10 count.
    Rank10Product,
}

impl core::fmt::Display for FormulaSource {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FormulaSource::General { n, i } => write!(f, "general closed form (n={n}, rank {i})"),
            FormulaSource::Quadruple { i } => write!(f, "quadruple closed form (rank {i})"),
            FormulaSource::Quintuple { i } => write!(f, "quintuple closed form (rank {i})"),
            FormulaSource::Rank10Product => write!(f, "quintuple rank-10 product form"),
        }
    }
}

/// Exact closed-form value plus its validity status.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormulaValue {
    pub value: BigInt,
    /// Whether k meets the stated threshold of the formula line.
    pub valid: bool,
    pub source: FormulaSource,
}

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

/// Evaluates sum of coeffs[d] * 2^(d*k) (coefficients in ascending degree).
fn poly_in_pow2k(coeffs: &[i64], k: u32) -> BigInt {
    coeffs
        .iter()
        .enumerate()
        .map(|(d, &c)| BigInt::from(c) * pow2(d as u32 * k))
        .sum()
}

/// Quintuple family (n = 5): coefficients of the rank-i count as a polynomial
/// in 2^k (ascending degree) and the line's stated validity threshold on k.
pub(crate) fn quintuple_line(i: u32) -> Result<(&'static [i64], u32)> {
    // Most lines are printed with a common factor pulled out; the factored
    // coefficients are kept verbatim.
    const LINES: [&[i64]; 11] = [
        &[1],
        &[93],
        &[6386, 62],
        &[364560, 6510],
        &[15748000, 448260, 620],
        &[250817280, 22654800, 65100],
        &[-1240 * 18883 * (1 << 10), 1240 * 3913 * (1 << 7), 1240 * 3199, 1240],
        &[115320 * 311 * (1 << 13), -115320 * 917 * (1 << 7), 115320 * 1148, 115320],
        &[
            -496 * 9749 * (1 << 18),
            496 * 68115 * (1 << 11),
            -496 * 2169440,
            496 * 9525,
            496,
        ],
        &[31248 * (1 << 26), -31248 * 3932160, 31248 * 71680, -31248 * 480, 31248],
        &[-32 * (1i64 << 35), 32 * 2080374784, -32 * 40632320, 32 * 317440, -32 * 992, 32],
    ];
    const THRESHOLDS: [u32; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 10];
    let idx = i as usize;
    if idx >= LINES.len() {
        return Err(Error::NoSuchLine { i, max: 10 });
    }
    Ok((LINES[idx], THRESHOLDS[idx]))
}

/// Quadruple family (n = 4): same layout as [`quintuple_line`]. The whole
/// block carries a single stated threshold, k >= 4.
fn quadruple_line(i: u32) -> Result<&'static [i64]> {
    const LINES: [&[i64]; 9] = [
        &[1],
        &[45],
        &[1410, 30],
        &[31920, 1470],
        &[276640, 42420, 140],
        &[-11692800, 630000, 6300],
        &[66170880, -6142080, 123480, 120],
        &[-121896960, 13332480, -416640, 3720],
        &[1 << 26, -7864320, 286720, -3840, 16],
    ];
    let idx = i as usize;
    if idx >= LINES.len() {
        return Err(Error::NoSuchLine { i, max: 8 });
    }
    Ok(LINES[idx])
}

/// Count of rank-i members of the quintuple family (n = 5), 0 <= i <= 10.
pub fn gamma_n5(i: u32, k: u32) -> Result<FormulaValue> {
    if k == 0 {
        return Err(Error::EmptyShape { n: 5, k });
    }
    let (coeffs, threshold) = quintuple_line(i)?;
    Ok(FormulaValue {
        value: poly_in_pow2k(coeffs, k),
        valid: k >= threshold,
        source: FormulaSource::Quintuple { i },
    })
}

/// Count of rank-i members of the quadruple family (n = 4), 0 <= i <= 8.
pub fn gamma_n4(i: u32, k: u32) -> Result<FormulaValue> {
    if k == 0 {
        return Err(Error::EmptyShape { n: 4, k });
    }
    let coeffs = quadruple_line(i)?;
    Ok(FormulaValue {
        value: poly_in_pow2k(coeffs, k),
        valid: k >= 4,
        source: FormulaSource::Quadruple { i },
    })
}

/// Count of rank-i members for any block count n, 0 <= i <= 5.
///
/// The rank-4 and rank-5 lines have rational coefficients; the sum is
/// evaluated exactly and must come out integral (it always does for n >= 1,
/// and a non-integral result is reported as an error rather than rounded).
pub fn gamma_general(n: u32, i: u32, k: u32) -> Result<FormulaValue> {
    if n == 0 || k == 0 {
        return Err(Error::EmptyShape { n, k });
    }
    if i > 5 {
        return Err(Error::NoSuchLine { i, max: 5 });
    }
    let r = |v: i64| BigRational::from_integer(BigInt::from(v));
    let p2 = |e: u32| BigRational::from_integer(pow2(e));

    let value = match i {
        0 => r(1),
        1 => (p2(n) - r(1)) * r(3),
        2 => r(7) * p2(2 * n) + (p2(k + 1) - r(25)) * p2(n) - p2(k + 1) + r(18),
        3 => {
            r(15) * p2(3 * n)
                + (r(7) * p2(k) - r(133)) * p2(2 * n)
                + (r(294) - r(21) * p2(k)) * p2(n)
                - r(176)
                + r(14) * p2(k)
        }
        4 => {
            r(31) * p2(4 * n)
                + (r(35) * p2(k) - r(1210)) / r(2) * p2(3 * n)
                + (p2(2 * k + 2) - r(783) * p2(k) + r(19028)) / r(6) * p2(2 * n)
                + (-p2(2 * k + 1) + r(269) * p2(k) - r(5744)) * p2(n)
                + (p2(2 * k + 2) - r(117) * p2(k + 2) + r(9440)) / r(3)
        }
        5 => {
            r(63) * p2(5 * n)
                + (r(155) / r(4) * p2(k) - r(2573)) * p2(4 * n)
                + (r(5) / r(2) * p2(2 * k) - r(2565) / r(4) * p2(k) + r(29150)) * p2(3 * n)
                + (-r(35) * p2(2 * k) + r(6265) * p2(k) - r(247520)) / r(2) * p2(2 * n)
                + (r(35) * p2(2 * k) - r(5490) * p2(k) + r(203872)) * p2(n)
                - r(20) * p2(2 * k)
                + r(2960) * p2(k)
                - r(106752)
        }
        _ => unreachable!(),
    };
    if !value.is_integer() {
        return Err(Error::NonIntegral("general closed-form line"));
    }
    Ok(FormulaValue {
        value: value.to_integer(),
        valid: k > i,
        source: FormulaSource::General { n, i },
    })
}

/// Rank-10 count of the quintuple family in factored form:
/// 2^5 * (2^k - 2^9)(2^k - 2^8)(2^k - 2^7)(2^k - 2^6)(2^k - 2^5).
///
/// The product is the literal signed value for every k >= 1: zero for
/// 5 <= k <= 9 and negative below that window, which is why `valid` only
/// turns on at k >= 10.
pub fn gamma10_product(k: u32) -> Result<FormulaValue> {
    if k == 0 {
        return Err(Error::EmptyShape { n: 5, k });
    }
    let value = pow2(5) * (1..=5).map(|j| pow2(k) - pow2(10 - j)).product::<BigInt>();
    Ok(FormulaValue { value, valid: k >= 10, source: FormulaSource::Rank10Product })
}
