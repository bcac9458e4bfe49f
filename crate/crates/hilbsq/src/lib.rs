//! Exact arithmetic for Hilbert squares of generic projective K3 surfaces.
//!
//! Let `S` be a complex projective K3 surface with `Pic(S) = Z*H` and
//! `H^2 = 2t`, and let `X = S^[2]` be its Hilbert scheme of two points, a
//! hyperkaehler fourfold of Picard rank 2. In the basis `(h, -delta)` of
//! `NS(X)` the Beauville-Bogomolov-Fujiki form is `diag(2t, -2)`, and all of
//! the following become finite Pell-equation computations, carried out here
//! over arbitrary-precision integers with no floating point:
//!
//! * the ample cone of `X`, cut out by `h` and one further extremal ray
//!   ([`ample_cone`]);
//! * the isometry group of `NS(X)`, a generalized dihedral group driven by
//!   the solutions of `x^2 - t y^2 = 1` ([`ns_lattice`]);
//! * the automorphism group of `X`: trivial, or generated by one
//!   non-symplectic involution. For `t >= 2` the involution exists if and
//!   only if `t` is not a square, `x^2 - 4t y^2 = 5` has no solution and
//!   `x^2 - t y^2 = -1` has one; equivalently, iff `NS(X)` contains an ample
//!   class `D` with `D^2 = 2`, which is then unique and spans the fixed
//!   lattice of the involution ([`classifier`]).
//!
//! The first values of `t` admitting the involution are 2, 10, 13 and 17.
//! For `t = 2` (a quartic surface in 3-space) the involution is the
//! classical one sending a length-2 subscheme to the residual intersection
//! of its line with the quartic; for the other values no geometric
//! construction is known, and whether the linear system `|D|` is
//! base-point-free for `t = 10` is an open question. This crate makes no
//! claim either way; it computes the lattice side exactly.
//!
//! Solvers ([`pell`]) are validated against independent brute-force scans
//! ([`oracle`]), both in the test suite and at runtime through the
//! `--verify` flag of the command-line tool. The [`report`] module bundles
//! the per-`t` results and their text, JSON and CSV renderings.

#![forbid(unsafe_code)]

pub mod ample_cone;
pub mod classifier;
pub mod ns_lattice;
pub mod oracle;
pub mod pell;
pub mod report;

pub use ample_cone::{compute_cone, is_ample, is_nef, two_very_ample_threshold, Cone, ConeCase};
pub use classifier::{
    classify, euler_characteristic, square2_condition_equivalence, unique_ample_square2,
    AutClassification, ClassifierError, EulerCharVal, TrivialReason,
};
pub use ns_lattice::{
    bbf_square, extends_to_full_lattice, group_structure, reflection_in_class, GroupDescription,
    GroupStructure, Isometry, IsometryKind, LatticeContext, NSClass,
};
pub use pell::{
    convergent, enumerate_solutions, minimal_solution_general, minimal_solution_p1,
    minimal_solution_pm1, solution_power, solvable_general, sqrt_cf, ContinuedFraction, PellError,
    PellSolution,
};
pub use report::{scan_reports, Report};
