//! Power-sum identities satisfied by every full census.
//!
//! The q-th moment of a census is sum of counts[i] * 2^(-iq). Each moment is
//! tied to an independently known right-hand side, and a suitable power of two
//! times the moment predicts the number of solutions of the associated
//! bilinear polynomial system (see [`crate::polysys`]). All comparisons are
//! exact big rationals; a failed identity comes back as a report with
//! `pass == false`, never as a rounded near-miss.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::census::RankHistogram;
use crate::{Error, Result};

/// One exact identity check on a census.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentReport {
    pub n: u32,
    pub k: u32,
    /// Moment order the check is about.
    pub q: u32,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub pass: bool,
}

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

/// 2^e for possibly negative e, as an exact rational.
fn pow2_rat(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// The q-th moment: sum of counts[i] * 2^(-iq).
#[must_use]
pub fn moment(h: &RankHistogram, q: u32) -> BigRational {
    h.counts()
        .iter()
        .enumerate()
        .map(|(i, c)| BigRational::new(BigInt::from(c.clone()), pow2(i as u32 * q)))
        .sum()
}

/// Right side of the weighted-sum identity of order q (q <= 2):
/// the known closed expression for sum of counts[i] * 2^(-iq).
pub fn weighted_sum_rhs(n: u32, k: u32, q: u32) -> Result<BigRational> {
    let n = i64::from(n);
    let k = i64::from(k);
    match q {
        0 => Ok(pow2_rat((k + 1) * n)),
        1 => Ok(pow2_rat(n + k * (n - 1)) + pow2_rat((k - 1) * n) - pow2_rat((k - 1) * n - k)),
        2 => {
            let r = |v: i64| BigRational::from_integer(BigInt::from(v));
            Ok(pow2_rat(n + k * (n - 2))
                + pow2_rat(-n + k * (n - 2)) * (r(3) * pow2_rat(k) - r(3))
                + pow2_rat(-2 * n + k * (n - 2)) * (r(6) * pow2_rat(k - 1) - r(6))
                + pow2_rat(-3 * n + k * n)
                - r(6) * pow2_rat(n * (k - 3) - k)
                + r(8) * pow2_rat(-3 * n + k * (n - 2)))
        }
        _ => Err(Error::NoSuchLine { i: q, max: 2 }),
    }
}

/// Checks the scaled first-moment identity
/// 2^(k-(k-1)n) * sum counts[i] 2^(-i) = 2^(2n) + 2^k - 1.
#[must_use]
pub fn check_q1(h: &RankHistogram) -> MomentReport {
    let (n, k) = (h.n(), h.k());
    let scale = i64::from(k) - (i64::from(k) - 1) * i64::from(n);
    let lhs = pow2_rat(scale) * moment(h, 1);
    let rhs = BigRational::from_integer(pow2(2 * n) + pow2(k) - BigInt::one());
    let pass = lhs == rhs;
    MomentReport { n, k, q: 1, lhs, rhs, pass }
}

/// Checks the second-moment identity against its general-n right side.
#[must_use]
pub fn check_q2(h: &RankHistogram) -> MomentReport {
    let (n, k) = (h.n(), h.k());
    let lhs = moment(h, 2);
    let rhs = weighted_sum_rhs(n, k, 2).expect("order 2 always has a right side");
    let pass = lhs == rhs;
    MomentReport { n, k, q: 2, lhs, rhs, pass }
}

/// Right side of the quintuple family's integer-weight moment line of order q:
/// sum of counts[i] * 2^((10-i)q) for q = 0, 1, 2.
pub fn n5_sum_rhs(k: u32, q: u32) -> Result<BigUint> {
    let p = |e: u32| BigUint::one() << e as usize;
    match q {
        0 => Ok(p(5 * k + 5)),
        1 => Ok(p(5 * k + 5) + BigUint::from(1023u32) * p(4 * k + 5)),
        2 => Ok(p(5 * k + 5)
            + BigUint::from(3162u32) * p(4 * k + 5)
            + BigUint::from(1045320u32) * p(3 * k + 5)),
        _ => Err(Error::NoSuchLine { i: q, max: 2 }),
    }
}

/// The three integer-weight moment identities special to n = 5:
/// sum counts[i] * 2^((10-i)q) must equal [`n5_sum_rhs`] for q = 0, 1, 2.
pub fn check_n5_moments(h: &RankHistogram) -> Result<[MomentReport; 3]> {
    if h.n() != 5 {
        return Err(Error::BlockCount { expected_n: 5, got_n: h.n() });
    }
    let k = h.k();
    let mut reports = Vec::with_capacity(3);
    for q in 0..=2 {
        let lhs: BigUint = h
            .counts()
            .iter()
            .enumerate()
            .map(|(i, c)| c << ((10 - i) * q as usize))
            .sum();
        let rhs = n5_sum_rhs(k, q)?;
        let pass = lhs == rhs;
        reports.push(MomentReport {
            n: 5,
            k,
            q,
            lhs: BigRational::from_integer(lhs.into()),
            rhs: BigRational::from_integer(rhs.into()),
            pass,
        });
    }
    Ok(reports.try_into().expect("exactly three orders"))
}

/// Predicted solution count of the associated polynomial system of order q:
/// 2^(q(2n+k) - (k+1)n) * moment(h, q). The prediction is a count, so a
/// non-integral result is an error, not a value.
pub fn predict_count(h: &RankHistogram, q: u32) -> Result<BigUint> {
    let (n, k) = (i64::from(h.n()), i64::from(h.k()));
    let scale = i64::from(q) * (2 * n + k) - (k + 1) * n;
    let value = pow2_rat(scale) * moment(h, q);
    if !value.is_integer() {
        return Err(Error::NonIntegral("predicted solution count"));
    }
    let int = value.to_integer();
    Ok(int.to_biguint().expect("counts are sums of nonnegative terms"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{census_full, census_partial};

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn rational(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn moments_of_a_small_census() {
        let h = census_full(1, 2, false).unwrap();
        assert_eq!(moment(&h, 0), rat(8));
        assert_eq!(moment(&h, 1), rational(7, 2));
        assert_eq!(moment(&h, 2), rat(2));
    }

    #[test]
    fn moment_of_a_single_point_range_is_one() {
        let h = census_partial(5, 2, 0, 1).unwrap();
        for q in 0..=3 {
            assert_eq!(moment(&h, q), rat(1));
        }
    }

    #[test]
    fn first_moment_identity_examples() {
        let r = check_q1(&census_full(1, 2, false).unwrap());
        assert_eq!(r.lhs, rat(7));
        assert_eq!(r.rhs, rat(7));
        assert!(r.pass);

        let r = check_q1(&census_full(5, 2, false).unwrap());
        assert_eq!(r.rhs, rat(1027));
        assert!(r.pass);

        let r = check_q1(&census_full(2, 3, false).unwrap());
        assert_eq!(r.rhs, rat(23));
        assert!(r.pass);
    }

    #[test]
    fn second_moment_identity_examples() {
        let r = check_q2(&census_full(2, 1, false).unwrap());
        assert_eq!(r.lhs, rational(19, 4));
        assert_eq!(r.rhs, rational(19, 4));
        assert!(r.pass);

        let r = check_q2(&census_full(1, 2, false).unwrap());
        assert_eq!(r.rhs, rat(2));
        assert!(r.pass);
    }

    #[test]
    fn both_general_identities_hold_across_shapes() {
        for (n, k) in
            [(1, 1), (1, 2), (1, 5), (2, 1), (2, 3), (3, 2), (3, 4), (4, 3), (5, 2), (5, 3)]
        {
            let h = census_full(n, k, false).unwrap();
            assert!(check_q1(&h).pass, "q1 n={n} k={k}");
            assert!(check_q2(&h).pass, "q2 n={n} k={k}");
            assert_eq!(moment(&h, 0), weighted_sum_rhs(n, k, 0).unwrap(), "q0 n={n} k={k}");
        }
    }

    #[test]
    fn quintuple_moment_lines_hold() {
        for k in 1..=3 {
            let h = census_full(5, k, false).unwrap();
            for report in check_n5_moments(&h).unwrap() {
                assert!(report.pass, "k={k} q={}", report.q);
            }
        }
    }

    #[test]
    fn quintuple_moment_line_value_example() {
        let h = census_full(5, 2, false).unwrap();
        let reports = check_n5_moments(&h).unwrap();
        assert_eq!(reports[1].lhs, rat(8413184));
    }

    #[test]
    fn quintuple_lines_need_five_blocks() {
        let h = census_full(4, 2, false).unwrap();
        assert_eq!(
            check_n5_moments(&h).unwrap_err(),
            Error::BlockCount { expected_n: 5, got_n: 4 },
        );
    }

    #[test]
    fn quintuple_lines_are_the_scaled_general_identities() {
        // the integer-weight right sides must be 2^(10q) times the general
        // ones at n = 5, for every k: the statements are mutually consistent
        for k in 1..=30 {
            for q in 1..=2 {
                let scaled = pow2_rat(i64::from(10 * q)) * weighted_sum_rhs(5, k, q).unwrap();
                let direct = BigRational::from_integer(n5_sum_rhs(k, q).unwrap().into());
                assert_eq!(scaled, direct, "k={k} q={q}");
            }
        }
    }

    #[test]
    fn predicted_counts_for_small_systems() {
        let h12 = census_full(1, 2, false).unwrap();
        assert_eq!(predict_count(&h12, 1).unwrap(), BigUint::from(7u32));
        assert_eq!(predict_count(&h12, 2).unwrap(), BigUint::from(64u32));

        let h52 = census_full(5, 2, false).unwrap();
        assert_eq!(predict_count(&h52, 1).unwrap(), BigUint::from(1027u32));

        let h21 = census_full(2, 1, false).unwrap();
        assert_eq!(predict_count(&h21, 2).unwrap(), BigUint::from(304u32));
    }

    #[test]
    fn zeroth_order_prediction_is_the_empty_system() {
        for (n, k) in [(1, 3), (2, 2), (3, 1), (5, 2)] {
            let h = census_full(n, k, false).unwrap();
            assert_eq!(predict_count(&h, 0).unwrap(), BigUint::one(), "n={n} k={k}");
        }
    }

    #[test]
    fn unsupported_orders_are_rejected() {
        assert_eq!(weighted_sum_rhs(2, 2, 3).unwrap_err(), Error::NoSuchLine { i: 3, max: 2 });
        assert_eq!(n5_sum_rhs(2, 3).unwrap_err(), Error::NoSuchLine { i: 3, max: 2 });
    }
}
