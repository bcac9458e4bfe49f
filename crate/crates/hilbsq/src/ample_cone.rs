//! The ample cone of the Hilbert square.
//!
//! In the coordinates `(x, y)` for `x*h - y*delta` the ample cone is the
//! interior of a two-ray cone: one ray is always spanned by `h = (1, 0)`, and
//! the second ray is decided by a trichotomy on `t`:
//!
//! 1. `t = k^2`: second ray `(1, k)`;
//! 2. `t` non-square and `x^2 - 4t y^2 = 5` solvable with minimal solution
//!    `(x, y)`: second ray `(x, 2ty)`;
//! 3. otherwise, with `(x, y)` the minimal solution of `x^2 - t y^2 = 1`:
//!    second ray `(x, ty)`.
//!
//! Boundary classes are nef but not ample; all membership tests are exact
//! integer cross-product comparisons.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::ns_lattice::NSClass;
use crate::pell::{self, perfect_square_u64, PellSolution};

/// Which branch of the trichotomy produced the cone, with the Pell data that
/// drove it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeCase {
    SquareT { k: u64 },
    PellFourT5 { solution: PellSolution },
    PellT1 { solution: PellSolution },
}

impl ConeCase {
    pub fn kind_str(&self) -> &'static str {
        match self {
            ConeCase::SquareT { .. } => "square_t",
            ConeCase::PellFourT5 { .. } => "pell_4t5",
            ConeCase::PellT1 { .. } => "pell_t1",
        }
    }
}

impl fmt::Display for ConeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeCase::SquareT { k } => write!(f, "t = {k}^2 is a square"),
            ConeCase::PellFourT5 { solution } => {
                write!(f, "x^2 - 4t y^2 = 5 has minimal solution {solution}")
            }
            ConeCase::PellT1 { solution } => {
                write!(f, "x^2 - t y^2 = 1 has minimal solution {solution}")
            }
        }
    }
}

/// The open cone between two primitive extremal rays; `ray1` is always
/// `h = (1, 0)` and `ray2` has positive coprime coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub ray1: NSClass,
    pub ray2: NSClass,
}

impl Cone {
    /// Strict interior membership: `y > 0`, `x > 0`, and the class sits on
    /// the `h` side of `ray2`.
    pub fn contains_interior(&self, c: &NSClass) -> bool {
        c.y.is_positive()
            && c.x.is_positive()
            && (&c.x * &self.ray2.y - &c.y * &self.ray2.x).is_positive()
    }

    /// Closure membership (nef cone): non-strict versions of the interior
    /// inequalities.
    pub fn contains_closure(&self, c: &NSClass) -> bool {
        !c.y.is_negative()
            && !c.x.is_negative()
            && !(&c.x * &self.ray2.y - &c.y * &self.ray2.x).is_negative()
    }

    /// The defining inequality in the shape `y>0, py<qx` where `(p, q)` are
    /// the coordinates of the second ray; unit coefficients are dropped.
    pub fn inequality(&self) -> String {
        let left = if self.ray2.x.is_one() {
            "y".to_string()
        } else {
            format!("{}y", self.ray2.x)
        };
        let right = if self.ray2.y.is_one() {
            "x".to_string()
        } else {
            format!("{}x", self.ray2.y)
        };
        format!("y>0, {left}<{right}")
    }
}

/// Extremal rays of the ample cone for the given `t`, together with the
/// trichotomy case that produced them.
pub fn compute_cone(t: u64) -> (Cone, ConeCase) {
    assert!(t >= 1, "t must be positive");
    let ray1 = NSClass::new(1, 0);
    if let Some(k) = perfect_square_u64(t) {
        let ray2 = NSClass::new(1, k);
        return (Cone { ray1, ray2 }, ConeCase::SquareT { k });
    }
    let d45 = t.checked_mul(4).expect("4t must fit in 64 bits");
    let sol45 = pell::minimal_solution_general(d45, 5)
        .expect("4t is non-square since t is, and 5 is a valid right-hand side");
    if let Some(solution) = sol45 {
        let raw = NSClass {
            x: solution.x.clone(),
            y: BigInt::from(2u32) * BigInt::from(t) * &solution.y,
        };
        let ray2 = raw.primitive_part();
        return (Cone { ray1, ray2 }, ConeCase::PellFourT5 { solution });
    }
    let solution = pell::minimal_solution_p1(t).expect("t is non-square and at least 2");
    let raw = NSClass {
        x: solution.x.clone(),
        y: BigInt::from(t) * &solution.y,
    };
    let ray2 = raw.primitive_part();
    (Cone { ray1, ray2 }, ConeCase::PellT1 { solution })
}

/// Whether `x*h - y*delta` is ample, i.e. strictly inside the cone.
pub fn is_ample(t: u64, c: &NSClass) -> bool {
    compute_cone(t).0.contains_interior(c)
}

/// Whether the class is nef (cone closure). Derived companion predicate; the
/// boundary rays themselves report true here and false for [`is_ample`].
pub fn is_nef(t: u64, c: &NSClass) -> bool {
    compute_cone(t).0.contains_closure(c)
}

/// Smallest `a` for which `a*h - delta` is known ample by the 2-very-ample
/// embedding bound: 3 for `t = 1`, 2 for `t` in 2..=3, 1 from `t = 4` on.
pub fn two_very_ample_threshold(t: u64) -> u64 {
    assert!(t >= 1, "t must be positive");
    match t {
        1 => 3,
        2 | 3 => 2,
        _ => 1,
    }
}
