//! Pell equations and periodic continued fractions.
//!
//! For a positive non-square integer `t` the continued fraction expansion
//! `sqrt(t) = [a0; a1, a2, ...]` is periodic: the partial quotients `(a_i)`
//! for `i >= 1` repeat with some period `s`, and the last term of the period
//! equals `2*a0`. The expansion is produced by the classical quadratic-surd
//! recurrence, which needs integers only:
//!
//! ```text
//! m_0 = 0, d_0 = 1, a_0 = floor(sqrt(t))
//! m_{k+1} = d_k * a_k - m_k
//! d_{k+1} = (t - m_{k+1}^2) / d_k
//! a_{k+1} = (a_0 + m_{k+1}) / d_{k+1}
//! ```
//!
//! The convergents `x_k / y_k` of the expansion carry the solution theory of
//! `P_t(N): x^2 - t*y^2 = N`. The minimal solution of `P_t(1)` is the
//! convergent at index `s-1` (period even) or `2s-1` (period odd); `P_t(-1)`
//! is solvable exactly when `s` is odd, with minimal solution at index `s-1`.
//! For a general right-hand side `N` with `N^2 < t`, every positive primitive
//! solution appears among the convergents, so scanning two periods decides
//! solvability and yields minima; for larger `|N|` a bounded search over
//! fundamental solutions takes over.
//!
//! No floating point is used anywhere in this module; solutions grow
//! exponentially with `t` and are kept as arbitrary-precision integers.

use std::collections::BinaryHeap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors raised by the Pell solvers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PellError {
    /// The radicand is a perfect square, so `sqrt(t)` is rational and has no
    /// periodic expansion.
    #[error("radicand {0} is a perfect square")]
    SquareRadicand(u64),
    /// The radicand is too small to expand (t must be at least 2).
    #[error("radicand must be at least 2, got {0}")]
    InvalidInput(u64),
    /// The right-hand side of the equation must be non-zero.
    #[error("right-hand side N must be non-zero")]
    UnsupportedN,
    /// `solution_power` needs a base of norm +1 or -1.
    #[error("base solution has norm {0}, expected 1 or -1")]
    InvalidNorm(i64),
    /// A continued fraction violating the invariants of a `sqrt(t)` expansion.
    #[error("malformed continued fraction: {0}")]
    MalformedExpansion(String),
    /// A pair that fails its own defining equation, surfaced loudly instead of
    /// propagating a wrong value.
    #[error("({x}, {y}) does not satisfy x^2 - {d} y^2 = {n}")]
    NotASolution {
        x: BigInt,
        y: BigInt,
        d: u64,
        n: i64,
    },
    /// The fundamental-solution search bound does not fit a practical range.
    #[error("fundamental-solution search bound {0} is too large")]
    SearchBoundTooLarge(BigInt),
}

/// Floor of `sqrt(n)` by monotone integer Newton iteration.
pub(crate) fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let bits = 128 - n.leading_zeros();
    // Seed strictly above sqrt(n); the iteration then decreases to the floor.
    let mut x = 1u128 << ((bits + 2) / 2);
    loop {
        let y = (x + n / x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Floor of `sqrt(n)`.
pub fn isqrt_u64(n: u64) -> u64 {
    isqrt_u128(n as u128) as u64
}

/// `Some(r)` iff `n = r^2`, checked by re-multiplication.
pub fn perfect_square_u64(n: u64) -> Option<u64> {
    let r = isqrt_u64(n);
    (r * r == n).then_some(r)
}

/// The periodic continued fraction expansion of `sqrt(t)`,
/// `[a0; a1, ..., as]` with the block `(a1, ..., as)` repeating forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    t: u64,
    a0: u64,
    period: Vec<u64>,
}

impl ContinuedFraction {
    /// Validates the defining invariants: `a0 = floor(sqrt(t))`, the period is
    /// non-empty and its last term is `2*a0`.
    pub fn new(t: u64, a0: u64, period: Vec<u64>) -> Result<Self, PellError> {
        if t < 2 {
            return Err(PellError::InvalidInput(t));
        }
        if perfect_square_u64(t).is_some() {
            return Err(PellError::SquareRadicand(t));
        }
        if a0 != isqrt_u64(t) {
            return Err(PellError::MalformedExpansion(format!(
                "a0 = {a0} is not floor(sqrt({t}))"
            )));
        }
        if period.is_empty() {
            return Err(PellError::MalformedExpansion("empty period".into()));
        }
        if *period.last().expect("non-empty") != 2 * a0 {
            return Err(PellError::MalformedExpansion(format!(
                "period must end with 2*a0 = {}",
                2 * a0
            )));
        }
        Ok(Self { t, a0, period })
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn a0(&self) -> u64 {
        self.a0
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    /// Period length `s`.
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Partial quotient `a_k`; indices past the first period wrap around.
    pub fn partial_quotient(&self, k: usize) -> u64 {
        if k == 0 {
            self.a0
        } else {
            self.period[(k - 1) % self.period.len()]
        }
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.period.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}; ({})]", self.a0, body.join(", "))
    }
}

/// Expand `sqrt(t)` for non-square `t >= 2`.
///
/// The period is closed when the surd state `(m, d)` first repeats; the
/// constructor then re-checks the classical `a_s = 2*a0` property, so both
/// period criteria must agree or an error is raised.
pub fn sqrt_cf(t: u64) -> Result<ContinuedFraction, PellError> {
    if t < 2 {
        return Err(PellError::InvalidInput(t));
    }
    if perfect_square_u64(t).is_some() {
        return Err(PellError::SquareRadicand(t));
    }
    let a0 = isqrt_u64(t);
    let mut period = Vec::new();
    let mut m: u64 = 0;
    let mut d: u64 = 1;
    let mut a = a0;
    let mut first_state: Option<(u64, u64)> = None;
    loop {
        m = d * a - m;
        d = (t - m * m) / d;
        a = (a0 + m) / d;
        match first_state {
            None => first_state = Some((m, d)),
            Some(fs) if fs == (m, d) => break,
            Some(_) => {}
        }
        period.push(a);
    }
    ContinuedFraction::new(t, a0, period)
}

/// Numerator and denominator of the k-th convergent, via the three-term
/// recurrence `x_k = a_k x_{k-1} + x_{k-2}`, `y_k = a_k y_{k-1} + y_{k-2}`
/// seeded with `x_{-1} = 1, x_{-2} = 0, y_{-1} = 0, y_{-2} = 1`.
pub fn convergent(cf: &ContinuedFraction, k: usize) -> (BigInt, BigInt) {
    let (mut x2, mut x1) = (BigInt::zero(), BigInt::one());
    let (mut y2, mut y1) = (BigInt::one(), BigInt::zero());
    for j in 0..=k {
        let a = BigInt::from(cf.partial_quotient(j));
        let x = &a * &x1 + &x2;
        let y = &a * &y1 + &y2;
        x2 = std::mem::replace(&mut x1, x);
        y2 = std::mem::replace(&mut y1, y);
    }
    (x1, y1)
}

/// An exact solution of `x^2 - d*y^2 = n`.
///
/// The constructor re-checks the equation, so a stored value is always a
/// genuine solution. A solution is *positive* when both coordinates are
/// positive; the producers in this module return the positive solution of
/// minimal `x` wherever they promise a minimal one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub d: u64,
    pub n: i64,
}

impl PellSolution {
    pub fn new(x: BigInt, y: BigInt, d: u64, n: i64) -> Result<Self, PellError> {
        let lhs = &x * &x - BigInt::from(d) * &y * &y;
        if lhs != BigInt::from(n) {
            return Err(PellError::NotASolution { x, y, d, n });
        }
        Ok(Self { x, y, d, n })
    }

    pub fn is_positive(&self) -> bool {
        self.x.is_positive() && self.y.is_positive()
    }
}

impl fmt::Display for PellSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Minimal positive solution of `P_t(1): x^2 - t*y^2 = 1`.
///
/// This is the convergent at index `s-1` when the period `s` is even and at
/// `2s-1` when it is odd.
pub fn minimal_solution_p1(t: u64) -> Result<PellSolution, PellError> {
    let cf = sqrt_cf(t)?;
    let s = cf.period_len();
    let k = if s % 2 == 0 { s - 1 } else { 2 * s - 1 };
    let (x, y) = convergent(&cf, k);
    PellSolution::new(x, y, t, 1)
}

/// Minimal positive solution of `P_t(-1): x^2 - t*y^2 = -1`, or `None`.
///
/// The equation is solvable exactly when the period `s` is odd, in which case
/// the minimal solution is the convergent at index `s-1`.
pub fn minimal_solution_pm1(t: u64) -> Result<Option<PellSolution>, PellError> {
    let cf = sqrt_cf(t)?;
    let s = cf.period_len();
    if s % 2 == 0 {
        return Ok(None);
    }
    let (x, y) = convergent(&cf, s - 1);
    Ok(Some(PellSolution::new(x, y, t, -1)?))
}

fn validate_general(d: u64, n: i64) -> Result<(), PellError> {
    if n == 0 {
        return Err(PellError::UnsupportedN);
    }
    if d < 2 {
        return Err(PellError::InvalidInput(d));
    }
    if perfect_square_u64(d).is_some() {
        return Err(PellError::SquareRadicand(d));
    }
    Ok(())
}

/// Class-minimal positive primitive solutions of `x^2 - d*y^2 = n`, found by
/// scanning convergents over two periods. Requires `n^2 < d`, which is what
/// guarantees that every positive primitive solution is a convergent. The
/// result is ordered by increasing `x`; the first entry is the overall
/// minimal positive primitive solution.
fn cf_class_minima(d: u64, n: i64) -> Result<Vec<(BigInt, BigInt)>, PellError> {
    debug_assert!((n as i128) * (n as i128) < d as i128);
    let cf = sqrt_cf(d)?;
    let window = 2 * cf.period_len();
    let target = BigInt::from(n);
    let dd = BigInt::from(d);
    let mut hits = Vec::new();
    let (mut x2, mut x1) = (BigInt::zero(), BigInt::one());
    let (mut y2, mut y1) = (BigInt::one(), BigInt::zero());
    for j in 0..window {
        let a = BigInt::from(cf.partial_quotient(j));
        let x = &a * &x1 + &x2;
        let y = &a * &y1 + &y2;
        if &x * &x - &dd * &y * &y == target {
            hits.push((x.clone(), y.clone()));
        }
        x2 = std::mem::replace(&mut x1, x);
        y2 = std::mem::replace(&mut y1, y);
    }
    Ok(hits)
}

/// Candidate fundamental solutions of `x^2 - d*y^2 = n` from the bounded
/// search `0 <= y <= v*c + 1` where `(u, v)` is the minimal solution of
/// `P_d(1)` and `c` is the least integer with `2(u-1)c^2 >= |n|`. The bound
/// dominates the classical fundamental-solution bounds for both signs of `n`,
/// rounded up by one for good measure, so every solution class has a
/// representative in the returned list.
fn bounded_fundamental_candidates(d: u64, n: i64) -> Result<Vec<(BigInt, BigInt)>, PellError> {
    let p1 = minimal_solution_p1(d)?;
    let (u, v) = (&p1.x, &p1.y);
    let n_abs = BigInt::from(n).abs();
    let denom = (u - BigInt::one()) * 2u32;
    let mut c = (&n_abs / &denom).sqrt();
    while &denom * &c * &c < n_abs {
        c += 1;
    }
    let y_bound_big = v * &c + 1u32;
    let y_bound = u64::try_from(&y_bound_big)
        .map_err(|_| PellError::SearchBoundTooLarge(y_bound_big.clone()))?;
    if y_bound > 1 << 33 {
        return Err(PellError::SearchBoundTooLarge(y_bound_big));
    }
    let dd = BigInt::from(d);
    let nn = BigInt::from(n);
    let mut out = Vec::new();
    for y in 0..=y_bound {
        let yy = BigInt::from(y);
        let r = &nn + &dd * &yy * &yy;
        if r.is_negative() {
            continue;
        }
        let x = r.sqrt();
        if &x * &x == r {
            if x.is_positive() {
                out.push((-&x, yy.clone()));
            }
            out.push((x, yy));
        }
    }
    Ok(out)
}

/// Reduce a solution to the minimal positive one in its class: normalize the
/// sign of `z = x + y*sqrt(d)`, multiply by the fundamental unit until both
/// coordinates are positive, then divide back down while they stay positive.
fn minimal_positive_in_class(
    mut x: BigInt,
    mut y: BigInt,
    u: &BigInt,
    v: &BigInt,
    d: u64,
) -> (BigInt, BigInt) {
    let dd = BigInt::from(d);
    // z < 0 happens exactly when x < 0 and x^2 > d*y^2.
    if x.is_negative() && &x * &x > &dd * &y * &y {
        x = -x;
        y = -y;
    }
    let mut steps = 0;
    while !(x.is_positive() && y.is_positive()) {
        let nx = &x * u + &dd * &y * v;
        let ny = &x * v + &y * u;
        x = nx;
        y = ny;
        steps += 1;
        assert!(
            steps < 512,
            "class reduction did not reach a positive solution"
        );
    }
    loop {
        let px = &x * u - &dd * &y * v;
        let py = &y * u - &x * v;
        if px.is_positive() && py.is_positive() {
            x = px;
            y = py;
        } else {
            return (x, y);
        }
    }
}

/// Square divisor strata of `n`: the values `g >= 1` with `g^2 | n`.
fn square_divisors(n: i64) -> Vec<i64> {
    let n_abs = (n as i128).unsigned_abs();
    let mut out = Vec::new();
    let mut g: u128 = 1;
    while g * g <= n_abs {
        if n_abs.is_multiple_of(g * g) {
            out.push(g as i64);
        }
        g += 1;
    }
    out
}

/// Decide whether `x^2 - d*y^2 = n` has an integer solution.
///
/// For `n^2 < d` the convergent scan is complete (non-primitive solutions are
/// covered stratum by stratum over the square divisors of `n`); otherwise the
/// bounded fundamental-solution search decides.
pub fn solvable_general(d: u64, n: i64) -> Result<bool, PellError> {
    validate_general(d, n)?;
    if (n as i128) * (n as i128) < d as i128 {
        for g in square_divisors(n) {
            let m = ((n as i128) / ((g as i128) * (g as i128))) as i64;
            if !cf_class_minima(d, m)?.is_empty() {
                return Ok(true);
            }
        }
        Ok(false)
    } else {
        Ok(!bounded_fundamental_candidates(d, n)?.is_empty())
    }
}

/// Minimal positive solution of `x^2 - d*y^2 = n`, or `None` when the
/// equation has no solution. Same method split as [`solvable_general`].
pub fn minimal_solution_general(d: u64, n: i64) -> Result<Option<PellSolution>, PellError> {
    validate_general(d, n)?;
    let mut best: Option<(BigInt, BigInt)> = None;
    let mut offer = |x: BigInt, y: BigInt| {
        if best.as_ref().is_none_or(|(bx, _)| x < *bx) {
            best = Some((x, y));
        }
    };
    if (n as i128) * (n as i128) < d as i128 {
        for g in square_divisors(n) {
            let m = ((n as i128) / ((g as i128) * (g as i128))) as i64;
            if let Some((x, y)) = cf_class_minima(d, m)?.into_iter().next() {
                offer(x * g, y * g);
            }
        }
    } else {
        let p1 = minimal_solution_p1(d)?;
        for (x, y) in bounded_fundamental_candidates(d, n)? {
            let (px, py) = minimal_positive_in_class(x, y, &p1.x, &p1.y, d);
            offer(px, py);
        }
    }
    match best {
        Some((x, y)) => Ok(Some(PellSolution::new(x, y, d, n)?)),
        None => Ok(None),
    }
}

/// The `k`-th power of a norm-`±1` solution in `Z[sqrt(t)]`, computed by
/// exact binary exponentiation with the product rule
/// `(x1, y1)*(x2, y2) = (x1*x2 + t*y1*y2, x1*y2 + y1*x2)`.
/// Negative exponents invert the base (a unit) first.
pub fn solution_power(base: &PellSolution, k: i64) -> Result<PellSolution, PellError> {
    if base.n != 1 && base.n != -1 {
        return Err(PellError::InvalidNorm(base.n));
    }
    let t = BigInt::from(base.d);
    let (mut px, mut py) = (base.x.clone(), base.y.clone());
    if k < 0 {
        // Unit inverse: conjugate for norm +1, negated conjugate for norm -1.
        if base.n == 1 {
            py = -py;
        } else {
            px = -px;
        }
    }
    let mut e = k.unsigned_abs();
    let (mut rx, mut ry) = (BigInt::one(), BigInt::zero());
    while e > 0 {
        if e & 1 == 1 {
            let nx = &rx * &px + &t * &ry * &py;
            let ny = &rx * &py + &ry * &px;
            rx = nx;
            ry = ny;
        }
        e >>= 1;
        if e > 0 {
            let nx = &px * &px + &t * &py * &py;
            let ny = &px * &py * 2u32;
            px = nx;
            py = ny;
        }
    }
    let norm = if base.n == -1 && k % 2 != 0 { -1 } else { 1 };
    PellSolution::new(rx, ry, base.d, norm)
}

/// The first `count` positive solutions of `x^2 - d*y^2 = n` in increasing
/// `x`, merged across solution classes by repeated multiplication with the
/// fundamental unit of `P_d(1)`.
pub fn enumerate_solutions(d: u64, n: i64, count: usize) -> Result<Vec<PellSolution>, PellError> {
    validate_general(d, n)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let p1 = minimal_solution_p1(d)?;
    let (u, v) = (p1.x.clone(), p1.y.clone());
    let mut seeds: Vec<(BigInt, BigInt)> = Vec::new();
    if (n as i128) * (n as i128) < d as i128 {
        for g in square_divisors(n) {
            let m = ((n as i128) / ((g as i128) * (g as i128))) as i64;
            for (x, y) in cf_class_minima(d, m)? {
                seeds.push((x * g, y * g));
            }
        }
    } else {
        seeds = bounded_fundamental_candidates(d, n)?;
    }
    // A two-period window can hit the same class twice (spacing s when s is
    // even), so reduce every seed to its class minimum before deduplicating.
    let mut seeds: Vec<(BigInt, BigInt)> = seeds
        .into_iter()
        .map(|(x, y)| minimal_positive_in_class(x, y, &u, &v, d))
        .collect();
    seeds.sort();
    seeds.dedup();
    // Min-heap on (x, y); distinct classes never share a solution.
    let mut heap: BinaryHeap<std::cmp::Reverse<(BigInt, BigInt)>> =
        seeds.into_iter().map(std::cmp::Reverse).collect();
    let dd = BigInt::from(d);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let Some(std::cmp::Reverse((x, y))) = heap.pop() else {
            break;
        };
        let nx = &x * &u + &dd * &y * &v;
        let ny = &x * &v + &y * &u;
        heap.push(std::cmp::Reverse((nx, ny)));
        out.push(PellSolution::new(x, y, d, n)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn sqrt_cf_small_radicands() {
        let cf2 = sqrt_cf(2).unwrap();
        assert_eq!((cf2.a0(), cf2.period()), (1, &[2u64][..]));
        let cf3 = sqrt_cf(3).unwrap();
        assert_eq!((cf3.a0(), cf3.period()), (1, &[1, 2][..]));
        let cf13 = sqrt_cf(13).unwrap();
        assert_eq!((cf13.a0(), cf13.period()), (3, &[1, 1, 1, 1, 6][..]));
        assert_eq!(cf13.period_len(), 5);
    }

    #[test]
    fn sqrt_cf_rejects_bad_input() {
        assert_eq!(sqrt_cf(4), Err(PellError::SquareRadicand(4)));
        assert_eq!(sqrt_cf(49), Err(PellError::SquareRadicand(49)));
        assert_eq!(sqrt_cf(0), Err(PellError::InvalidInput(0)));
        assert_eq!(sqrt_cf(1), Err(PellError::InvalidInput(1)));
    }

    #[test]
    fn convergents_match_hand_values() {
        let cf2 = sqrt_cf(2).unwrap();
        assert_eq!(convergent(&cf2, 0), (big(1), big(1)));
        assert_eq!(convergent(&cf2, 1), (big(3), big(2)));
        let cf13 = sqrt_cf(13).unwrap();
        assert_eq!(convergent(&cf13, 4), (big(18), big(5)));
        // C_0 = a0 for any expansion.
        for t in [2u64, 7, 13, 61] {
            let cf = sqrt_cf(t).unwrap();
            assert_eq!(convergent(&cf, 0), (BigInt::from(cf.a0()), big(1)));
        }
    }

    #[test]
    fn convergents_are_coprime() {
        for t in (2u64..100).filter(|t| perfect_square_u64(*t).is_none()) {
            let cf = sqrt_cf(t).unwrap();
            for k in 0..2 * cf.period_len() {
                let (x, y) = convergent(&cf, k);
                assert!(x.gcd(&y).is_one(), "gcd fails for t={t}, k={k}");
            }
        }
    }

    #[test]
    fn minimal_p1_examples() {
        let s = minimal_solution_p1(2).unwrap();
        assert_eq!((s.x, s.y), (big(3), big(2)));
        let s = minimal_solution_p1(10).unwrap();
        assert_eq!((s.x, s.y), (big(19), big(6)));
        let s = minimal_solution_p1(3).unwrap();
        assert_eq!((s.x, s.y), (big(2), big(1)));
        // t = 61 is the classical giant; the constructor verifies it exactly.
        let s = minimal_solution_p1(61).unwrap();
        assert_eq!(s.x, "1766319049".parse::<BigInt>().unwrap());
        assert_eq!(s.y, "226153980".parse::<BigInt>().unwrap());
    }

    #[test]
    fn minimal_pm1_examples() {
        let s = minimal_solution_pm1(2).unwrap().unwrap();
        assert_eq!((s.x, s.y), (big(1), big(1)));
        let s = minimal_solution_pm1(10).unwrap().unwrap();
        assert_eq!((s.x, s.y), (big(3), big(1)));
        assert_eq!(minimal_solution_pm1(3).unwrap(), None);
        assert_eq!(minimal_solution_pm1(7).unwrap(), None);
    }

    #[test]
    fn solvable_general_examples() {
        assert!(solvable_general(20, 5).unwrap());
        assert!(!solvable_general(8, 5).unwrap());
        assert!(!solvable_general(40, 5).unwrap());
        assert_eq!(solvable_general(20, 0), Err(PellError::UnsupportedN));
        assert_eq!(solvable_general(16, 5), Err(PellError::SquareRadicand(16)));
    }

    #[test]
    fn minimal_general_examples() {
        let s = minimal_solution_general(20, 5).unwrap().unwrap();
        assert_eq!((s.x, s.y), (big(5), big(1)));
        assert_eq!(minimal_solution_general(8, 5).unwrap(), None);
        // Must agree with minimal_solution_p1 on N = 1.
        let s = minimal_solution_general(2, 1).unwrap().unwrap();
        assert_eq!((s.x, s.y), (big(3), big(2)));
    }

    #[test]
    fn minimal_general_agrees_with_named_solvers() {
        for t in (2u64..80).filter(|t| perfect_square_u64(*t).is_none()) {
            let p1 = minimal_solution_p1(t).unwrap();
            let g1 = minimal_solution_general(t, 1).unwrap().unwrap();
            assert_eq!((p1.x, p1.y), (g1.x, g1.y), "t={t}");
            let pm1 = minimal_solution_pm1(t).unwrap();
            let gm1 = minimal_solution_general(t, -1).unwrap();
            assert_eq!(pm1.map(|s| (s.x, s.y)), gm1.map(|s| (s.x, s.y)), "t={t}");
        }
    }

    #[test]
    fn general_solver_agrees_with_scan_on_small_instances() {
        // Exercises both the convergent window (n^2 < d) and the bounded
        // fundamental search (n^2 >= d), including x = 0 and non-primitive
        // solution classes.
        const CAP: u64 = 200_000;
        for d in (2u64..=60).filter(|d| perfect_square_u64(*d).is_none()) {
            for n in (-12i64..=12).filter(|n| *n != 0) {
                match minimal_solution_general(d, n).unwrap() {
                    Some(sol) => {
                        let cap = u64::try_from(&sol.y).unwrap_or(CAP).min(CAP);
                        let brute = oracle::brute_pell(d, n, cap);
                        match brute.iter().find(|s| s.is_positive()) {
                            Some(first) => {
                                assert_eq!((&first.x, &first.y), (&sol.x, &sol.y), "d={d}, n={n}")
                            }
                            None => assert!(sol.y > BigInt::from(CAP), "d={d}, n={n}"),
                        }
                    }
                    None => {
                        assert!(
                            oracle::brute_pell(d, n, 3000)
                                .iter()
                                .all(|s| !s.is_positive()),
                            "d={d}, n={n}: declared unsolvable but the scan disagrees"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn solution_power_examples() {
        let base = PellSolution::new(big(1), big(1), 2, -1).unwrap();
        let sq = solution_power(&base, 2).unwrap();
        assert_eq!((sq.x, sq.y, sq.n), (big(3), big(2), 1));
        let base = PellSolution::new(big(3), big(1), 10, -1).unwrap();
        let sq = solution_power(&base, 2).unwrap();
        assert_eq!((sq.x, sq.y, sq.n), (big(19), big(6), 1));
        let id = solution_power(&base, 0).unwrap();
        assert_eq!((id.x, id.y, id.n), (big(1), big(0), 1));
        let inv = solution_power(&base, -1).unwrap();
        assert_eq!((inv.x, inv.y, inv.n), (big(-3), big(1), -1));
        let bad = PellSolution::new(big(5), big(1), 20, 5).unwrap();
        assert_eq!(solution_power(&bad, 2), Err(PellError::InvalidNorm(5)));
    }

    #[test]
    fn odd_and_even_powers_keep_their_norms() {
        for t in (2u64..200).filter(|t| perfect_square_u64(*t).is_none()) {
            if let Some(z) = minimal_solution_pm1(t).unwrap() {
                for k in 1..=3i64 {
                    let w = solution_power(&z, k).unwrap();
                    let expect = if k % 2 == 0 { 1 } else { -1 };
                    assert_eq!(w.n, expect, "t={t}, k={k}");
                }
            }
        }
    }

    #[test]
    fn negative_pell_forces_p1_shape() {
        // Whenever (a, b) solves P_t(-1) minimally, the minimal solution of
        // P_t(1) is exactly (2a^2+1, 2ab).
        for t in (2u64..300).filter(|t| perfect_square_u64(*t).is_none()) {
            if let Some(zm) = minimal_solution_pm1(t).unwrap() {
                let p1 = minimal_solution_p1(t).unwrap();
                let (a, b) = (&zm.x, &zm.y);
                assert_eq!(p1.x, a * a * 2u32 + 1u32, "t={t}");
                assert_eq!(p1.y, a * b * 2u32, "t={t}");
            }
        }
    }

    #[test]
    fn four_t_five_unsolvable_for_even_t() {
        for t in (2u64..=500).step_by(2) {
            if perfect_square_u64(4 * t).is_some() {
                continue;
            }
            assert!(!solvable_general(4 * t, 5).unwrap(), "t={t}");
        }
    }

    #[test]
    fn enumerate_solutions_lists_unit_powers() {
        let sols = enumerate_solutions(2, 1, 3).unwrap();
        let pairs: Vec<(BigInt, BigInt)> = sols.into_iter().map(|s| (s.x, s.y)).collect();
        assert_eq!(
            pairs,
            vec![(big(3), big(2)), (big(17), big(12)), (big(99), big(70))]
        );
        let sols = enumerate_solutions(2, -1, 2).unwrap();
        let pairs: Vec<(BigInt, BigInt)> = sols.into_iter().map(|s| (s.x, s.y)).collect();
        assert_eq!(pairs, vec![(big(1), big(1)), (big(7), big(5))]);
    }

    #[test]
    fn enumerate_matches_brute_force_listing() {
        // (3, 1) and (44, 5) have even periods, where the two-period window
        // hits the same class twice; the listing must stay duplicate-free.
        for (d, n) in [(2u64, -1i64), (3, 1), (10, 1), (20, 5), (44, 5), (13, -1)] {
            let brute: Vec<(BigInt, BigInt)> = oracle::brute_pell(d, n, 200_000)
                .into_iter()
                .filter(|s| s.is_positive())
                .map(|s| (s.x, s.y))
                .collect();
            let take = brute.len().min(4);
            let fast: Vec<(BigInt, BigInt)> = enumerate_solutions(d, n, take)
                .unwrap()
                .into_iter()
                .map(|s| (s.x, s.y))
                .collect();
            assert_eq!(fast, brute[..take].to_vec(), "d={d}, n={n}");
        }
    }

    #[test]
    fn minimal_solutions_agree_with_brute_force() {
        // The scan is capped at 10^5; minima beyond the cap are checked by
        // confirming the scan finds nothing smaller (the solutions themselves
        // re-verify on construction). The acceptance suite runs the larger
        // version of this check.
        const CAP: u64 = 100_000;
        for t in (2u64..=120).filter(|t| perfect_square_u64(*t).is_none()) {
            let p1 = minimal_solution_p1(t).unwrap();
            let y_cap = u64::try_from(&p1.y).unwrap_or(CAP).min(CAP);
            let brute = oracle::brute_pell(t, 1, y_cap);
            match brute.iter().find(|s| s.is_positive()) {
                Some(first) => assert_eq!((&first.x, &first.y), (&p1.x, &p1.y), "t={t}"),
                None => assert!(p1.y > BigInt::from(CAP), "t={t}: scan missed {p1}"),
            }
            match minimal_solution_pm1(t).unwrap() {
                Some(pm1) => {
                    let y_cap = u64::try_from(&pm1.y).unwrap_or(CAP).min(CAP);
                    let brute = oracle::brute_pell(t, -1, y_cap);
                    match brute.iter().find(|s| s.is_positive()) {
                        Some(first) => {
                            assert_eq!((&first.x, &first.y), (&pm1.x, &pm1.y), "t={t}")
                        }
                        None => assert!(pm1.y > BigInt::from(CAP), "t={t}: scan missed {pm1}"),
                    }
                }
                None => {
                    assert!(
                        oracle::brute_pell(t, -1, 2000).is_empty(),
                        "t={t} should have no P_t(-1) solution"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn power_products_satisfy_their_equation(
            t in 2u64..150,
            k in 0i64..6,
        ) {
            prop_assume!(perfect_square_u64(t).is_none());
            let base = minimal_solution_p1(t).unwrap();
            // PellSolution::new re-checks the equation, so Ok is the assertion.
            prop_assert!(solution_power(&base, k).is_ok());
        }

        #[test]
        fn isqrt_is_exact(n in any::<u64>()) {
            let r = isqrt_u64(n);
            prop_assert!((r as u128) * (r as u128) <= n as u128);
            prop_assert!((r as u128 + 1) * (r as u128 + 1) > n as u128);
        }
    }
}
