//! The rank-2 lattice `<2t> + <-2>` and its isometries.
//!
//! The Neron-Severi lattice of the Hilbert square of a K3 surface of degree
//! `2t` is free of rank 2 with Gram matrix `diag(2t, -2)` in the basis
//! `(h, -delta)`; the class of the exceptional divisor is `2*delta`. All
//! coordinates in this crate are taken in that basis, so `(x, y)` stands for
//! the class `x*h - y*delta`. An integer matrix `M = [[A, B], [C, D]]`
//! preserves the form exactly when
//!
//! ```text
//! C^2 = t(A^2 - 1),   D^2 = t B^2 + 1,   C D = t A B,
//! ```
//!
//! which forces one of the two shapes `[[A, B], [tB, A]]` (rotation type) or
//! `[[A, B], [-tB, -A]]` (reflection type), both with `A^2 - t B^2 = 1`. The
//! rotation-type matrices form an abelian group `N` driven by the solutions
//! of `P_t(1)`, and the full isometry group is the generalized dihedral group
//! of `N`: finite of order 4 when `t` is a square, infinite otherwise.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::pell::{self, perfect_square_u64, PellSolution};

/// Errors raised by lattice operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix does not preserve the form diag(2t, -2)")]
    NotAnIsometry,
    #[error("class {0} is not primitive")]
    NotPrimitive(NSClass),
    #[error("class {0} has non-positive square")]
    NonPositiveSquare(NSClass),
    #[error("reflection through {0} is not integral")]
    NotIntegral(NSClass),
}

/// The degree parameter: the underlying K3 surface is polarized by a class of
/// self-intersection `2t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeContext {
    t: u64,
}

impl LatticeContext {
    pub fn new(t: u64) -> Self {
        assert!(
            t >= 1,
            "the polarization degree parameter t must be positive"
        );
        Self { t }
    }

    pub fn t(&self) -> u64 {
        self.t
    }
}

/// A Neron-Severi class `x*h - y*delta` in integer coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NSClass {
    pub x: BigInt,
    pub y: BigInt,
}

impl NSClass {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Self {
            x: x.into(),
            y: y.into(),
        }
    }

    /// Whether the coordinates are coprime. Primitivity is a predicate here,
    /// not an invariant; non-primitive classes are legal values.
    pub fn is_primitive(&self) -> bool {
        self.x.gcd(&self.y).is_one()
    }

    /// The class divided by the gcd of its coordinates (signs untouched).
    pub fn primitive_part(&self) -> NSClass {
        let g = self.x.gcd(&self.y);
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        NSClass {
            x: &self.x / &g,
            y: &self.y / &g,
        }
    }

    /// Rendering in divisor notation, e.g. `h - 3delta`.
    pub fn divisor_string(&self) -> String {
        let h_part = if self.x.is_zero() {
            String::new()
        } else if self.x.is_one() {
            "h".to_string()
        } else {
            format!("{}h", self.x)
        };
        if self.y.is_zero() {
            return if h_part.is_empty() {
                "0".to_string()
            } else {
                h_part
            };
        }
        let mag = self.y.abs();
        let d_part = if mag.is_one() {
            "delta".to_string()
        } else {
            format!("{mag}delta")
        };
        if h_part.is_empty() {
            if self.y.is_positive() {
                format!("-{d_part}")
            } else {
                d_part
            }
        } else if self.y.is_positive() {
            format!("{h_part} - {d_part}")
        } else {
            format!("{h_part} + {d_part}")
        }
    }
}

impl fmt::Display for NSClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Square of a class for the Beauville-Bogomolov-Fujiki form:
/// `(x*h - y*delta)^2 = 2t x^2 - 2 y^2`.
pub fn bbf_square(ctx: LatticeContext, c: &NSClass) -> BigInt {
    let t = BigInt::from(ctx.t());
    BigInt::from(2u32) * (&t * &c.x * &c.x - &c.y * &c.y)
}

/// Which of the two normal forms an isometry has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryKind {
    /// `[[A, B], [tB, A]]`; determinant +1.
    RotationType,
    /// `[[A, B], [-tB, -A]]`; determinant -1, an involution.
    ReflectionType,
}

/// An integer matrix preserving the form diag(2t, -2), acting on coordinate
/// columns `(x, y)`. Construction checks the form conditions, so every value
/// is a genuine isometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isometry {
    t: u64,
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Isometry {
    pub fn new(
        ctx: LatticeContext,
        a: BigInt,
        b: BigInt,
        c: BigInt,
        d: BigInt,
    ) -> Result<Self, LatticeError> {
        let t = BigInt::from(ctx.t());
        let gram_ok = &c * &c == &t * (&a * &a - 1u32)
            && &d * &d == &t * &b * &b + 1u32
            && &c * &d == &t * &a * &b;
        if !gram_ok {
            return Err(LatticeError::NotAnIsometry);
        }
        Ok(Self {
            t: ctx.t(),
            a,
            b,
            c,
            d,
        })
    }

    pub fn identity(ctx: LatticeContext) -> Self {
        Self {
            t: ctx.t(),
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// Row-major entries `(A, B, C, D)`.
    pub fn entries(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn apply(&self, v: &NSClass) -> NSClass {
        NSClass {
            x: &self.a * &v.x + &self.b * &v.y,
            y: &self.c * &v.x + &self.d * &v.y,
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Classify into the two normal forms. For `B = 0` the candidates overlap
    /// as sets of equations; the `D` entry decides (`D = A` gives `±id`,
    /// `D = -A` gives `±s` with `s = diag(1, -1)`).
    pub fn kind(&self) -> IsometryKind {
        let tb = BigInt::from(self.t) * &self.b;
        if self.c == tb && self.d == self.a {
            IsometryKind::RotationType
        } else {
            debug_assert!(self.c == -&tb && self.d == -&self.a);
            IsometryKind::ReflectionType
        }
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.t, rhs.t, "isometries live over different lattices");
        Self {
            t: self.t,
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    pub fn inverse(&self) -> Self {
        let det = self.det();
        // det is ±1, so the adjugate divided by det stays integral.
        Self {
            t: self.t,
            a: &self.d * &det,
            b: -(&self.b * &det),
            c: -(&self.c * &det),
            d: &self.a * &det,
        }
    }

    pub fn is_involution(&self) -> bool {
        let sq = self.compose(self);
        sq.a.is_one() && sq.b.is_zero() && sq.c.is_zero() && sq.d.is_one()
    }

    /// Primitive generator of the invariant sublattice of a reflection-type
    /// isometry: `(-B, A-1)` divided by `gcd(B, A-1)`, sign-normalized.
    /// Returns `None` for rotation-type isometries.
    pub fn invariant_class(&self) -> Option<NSClass> {
        if self.kind() != IsometryKind::ReflectionType {
            return None;
        }
        if self.b.is_zero() && self.a.is_one() {
            // s = diag(1, -1) fixes h itself.
            return Some(NSClass::new(1, 0));
        }
        let am1 = &self.a - 1u32;
        let g = self.b.gcd(&am1);
        let mut x = -(&self.b) / &g;
        let mut y = am1 / &g;
        if x.is_negative() || (x.is_zero() && y.is_negative()) {
            x = -x;
            y = -y;
        }
        Some(NSClass { x, y })
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Structure of the isometry group of the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupStructure {
    /// `{id, -id, s, -s}` when `t` is a perfect square.
    FiniteDihedral4,
    /// Generalized dihedral group of the infinite cyclic-times-sign group of
    /// rotation-type isometries; `generator` is the minimal solution of
    /// `P_t(1)` feeding `[[A, B], [tB, A]]`.
    InfiniteGeneralizedDihedral { generator: PellSolution },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDescription {
    pub is_square_t: bool,
    pub structure: GroupStructure,
}

/// Describe the full isometry group of the lattice for the given `t`.
pub fn group_structure(ctx: LatticeContext) -> GroupDescription {
    if perfect_square_u64(ctx.t()).is_some() {
        GroupDescription {
            is_square_t: true,
            structure: GroupStructure::FiniteDihedral4,
        }
    } else {
        let generator =
            pell::minimal_solution_p1(ctx.t()).expect("t is non-square and at least 2 here");
        GroupDescription {
            is_square_t: false,
            structure: GroupStructure::InfiniteGeneralizedDihedral { generator },
        }
    }
}

/// Reflection fixing the primitive positive-square class `v = (b, a)` and
/// negating its orthogonal complement. In closed form the matrix is
/// `[[A, B], [-tB, -A]]` with `A = (t b^2 + a^2) / (t b^2 - a^2)` and
/// `B = -2ab / (t b^2 - a^2)`; it is an isometry of the lattice only when
/// both entries are integers.
pub fn reflection_in_class(ctx: LatticeContext, v: &NSClass) -> Result<Isometry, LatticeError> {
    if !v.is_primitive() {
        return Err(LatticeError::NotPrimitive(v.clone()));
    }
    let t = BigInt::from(ctx.t());
    let (b, a) = (&v.x, &v.y);
    let denom = &t * b * b - a * a;
    if !denom.is_positive() {
        return Err(LatticeError::NonPositiveSquare(v.clone()));
    }
    let a_num = &t * b * b + a * a;
    let b_num = -(a * b * 2u32);
    if !(&a_num % &denom).is_zero() || !(&b_num % &denom).is_zero() {
        return Err(LatticeError::NotIntegral(v.clone()));
    }
    let big_a = a_num / &denom;
    let big_b = b_num / &denom;
    let big_c = -(&t * &big_b);
    let big_d = -(&big_a);
    Ok(Isometry::new(ctx, big_a, big_b, big_c, big_d)
        .expect("the closed-form reflection satisfies the form conditions"))
}

/// Whether the reflection through `v` extends to the full degree-2 cohomology
/// lattice acting as minus the identity on the transcendental part.
///
/// Two independent computations decide this: integrality of
/// `b^2 / (t b^2 - a^2)`, which is the coefficient obstruction on the
/// hyperbolic-plane block, and `v` having square 2. For a primitive `v` these
/// agree; any disagreement is an internal bug and panics.
pub fn extends_to_full_lattice(ctx: LatticeContext, v: &NSClass) -> Result<bool, LatticeError> {
    reflection_in_class(ctx, v)?;
    let t = BigInt::from(ctx.t());
    let denom = &t * &v.x * &v.x - &v.y * &v.y;
    let integral = (&v.x * &v.x % &denom).is_zero();
    let square_two = bbf_square(ctx, v) == BigInt::from(2u32);
    assert_eq!(
        integral, square_two,
        "extension integrality disagrees with the square-2 test for {v}"
    );
    Ok(integral)
}
