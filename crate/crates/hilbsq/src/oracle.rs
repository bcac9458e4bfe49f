//! Brute-force reference searches used to validate the fast solvers.
//!
//! Everything here is written against the defining equations directly and
//! shares no algorithmic machinery with the continued-fraction solvers: the
//! square-root routine is the bitwise digit method rather than Newton
//! iteration, and solutions are found by plain exhaustive scans. These
//! functions ship in the library (not only in test code) so the command-line
//! `--verify` mode can cross-check any instance on demand; they are orders of
//! magnitude slower than the solvers they check, by design of their role.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::ample_cone;
use crate::ns_lattice::NSClass;
use crate::pell::PellSolution;

/// Floor square root by the classical bitwise digit-by-digit method.
fn isqrt_u128_bitwise(mut n: u128) -> u128 {
    let mut result: u128 = 0;
    let mut bit: u128 = if n == 0 {
        0
    } else {
        1 << (126 - (n.leading_zeros() & !1))
    };
    while bit != 0 {
        if n >= result + bit {
            n -= result + bit;
            result = (result >> 1) + bit;
        } else {
            result >>= 1;
        }
        bit >>= 2;
    }
    result
}

/// Bitwise floor square root for non-negative big integers.
fn isqrt_big_bitwise(n: &BigInt) -> BigInt {
    assert!(!n.is_negative());
    let bits = n.bits();
    let mut result = BigInt::zero();
    let mut remainder = n.clone();
    let mut bit = BigInt::from(1u32) << (bits.div_ceil(2) * 2);
    while !bit.is_zero() {
        let candidate = &result + &bit;
        if remainder >= candidate {
            remainder -= candidate;
            result = (result >> 1) + &bit;
        } else {
            result >>= 1;
        }
        bit >>= 2;
    }
    result
}

/// All solutions of `x^2 - d*y^2 = n` with `0 <= y <= y_max` and `x >= 0`,
/// found by an exhaustive scan over `y`, sorted by increasing `x`.
///
/// Intended for test-sized bounds (`y_max <= 10^6`).
pub fn brute_pell(d: u64, n: i64, y_max: u64) -> Vec<PellSolution> {
    let fits_u128 = (d as u128)
        .checked_mul((y_max as u128).saturating_pow(2))
        .is_some_and(|m| m < (1 << 120));
    let mut out = Vec::new();
    if fits_u128 {
        for y in 0..=y_max {
            let target_signed = n as i128 + ((d as u128) * (y as u128) * (y as u128)) as i128;
            if target_signed < 0 {
                continue;
            }
            let target = target_signed as u128;
            let x = isqrt_u128_bitwise(target);
            if x * x == target {
                out.push(
                    PellSolution::new(BigInt::from(x), BigInt::from(y), d, n)
                        .expect("scan hit satisfies the equation"),
                );
            }
        }
    } else {
        let dd = BigInt::from(d);
        let nn = BigInt::from(n);
        for y in 0..=y_max {
            let yy = BigInt::from(y);
            let target = &nn + &dd * &yy * &yy;
            if target.is_negative() {
                continue;
            }
            let x = isqrt_big_bitwise(&target);
            if &x * &x == target {
                out.push(PellSolution::new(x, yy, d, n).expect("scan hit satisfies the equation"));
            }
        }
    }
    out
}

/// All classes `x*h - y*delta` with `0 < x, y <= coord_max`, square 2 for the
/// form diag(2t, -2), and ample, by exhaustive scan over `x`.
///
/// Intended for test-sized bounds (`coord_max <= 10^4`).
pub fn brute_square2_ample(t: u64, coord_max: u64) -> Vec<NSClass> {
    let mut out = Vec::new();
    for x in 1..=coord_max {
        // 2t x^2 - 2 y^2 = 2 means y^2 = t x^2 - 1.
        let target = (t as u128) * (x as u128) * (x as u128) - 1;
        let y = isqrt_u128_bitwise(target);
        if y * y != target {
            continue;
        }
        let Ok(y) = u64::try_from(y) else { continue };
        if y == 0 || y > coord_max {
            continue;
        }
        let class = NSClass::new(x, y);
        if ample_cone::is_ample(t, &class) {
            out.push(class);
        }
    }
    out
}
