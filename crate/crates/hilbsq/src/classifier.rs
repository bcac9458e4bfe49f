//! Automorphism classification of the Hilbert square.
//!
//! For a generic K3 surface of degree `2t` the automorphism group of its
//! Hilbert square is at most of order two, and the classification is purely
//! arithmetic:
//!
//! * `t = 1`: the surface is a double plane and its covering involution
//!   induces the unique non-trivial (natural) automorphism; the induced
//!   action on the Neron-Severi lattice is trivial.
//! * `t >= 2`: a non-trivial automorphism exists if and only if `t` is not a
//!   square, `x^2 - 4t y^2 = 5` has no solution and `x^2 - t y^2 = -1` has
//!   one. Equivalently, if and only if there is an ample class `D` of square
//!   2. In that case `D` is unique, the automorphism is a non-symplectic
//!   involution, and with `(a, b)` the minimal solution of `x^2 - t y^2 = -1`
//!   its action on the lattice is
//!
//!   ```text
//!   [ 2a^2 + 1   -2ab     ]
//!   [ 2tab       -2a^2 - 1 ]
//!   ```
//!
//!   which is the reflection through `D = b*h - a*delta`.
//!
//! The classifier rebuilds the matrix along two independent routes (the
//! closed form above and the general reflection formula) and cross-checks
//! the Pell identity `(2a^2+1, 2ab) = minimal solution of P_t(1)` plus the
//! ampleness of `D`; any disagreement aborts with an error rather than
//! returning a questionable answer.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::ample_cone::{compute_cone, Cone};
use crate::ns_lattice::{
    extends_to_full_lattice, reflection_in_class, Isometry, LatticeContext, NSClass,
};
use crate::pell::{self, perfect_square_u64, PellSolution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifierError {
    /// A cross-validation between independent computation routes failed;
    /// this always indicates an implementation bug, never a property of `t`.
    #[error("internal consistency check failed: {0}")]
    InternalInconsistency(String),
    /// `4t` must fit in 64 bits for the solvability test.
    #[error("polarization degree parameter {0} is too large (4t must fit in 64 bits)")]
    PolarizationTooLarge(u64),
}

/// Why the automorphism group is trivial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialReason {
    PerfectSquare,
    FourT5Solvable,
    NegativePellUnsolvable,
}

impl TrivialReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrivialReason::PerfectSquare => "t is a perfect square",
            TrivialReason::FourT5Solvable => "x^2 - 4t y^2 = 5 is solvable",
            TrivialReason::NegativePellUnsolvable => "x^2 - t y^2 = -1 has no solution",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            TrivialReason::PerfectSquare,
            TrivialReason::FourT5Solvable,
            TrivialReason::NegativePellUnsolvable,
        ]
        .into_iter()
        .find(|r| r.as_str() == s)
    }
}

/// Outcome of the classification.
// The involution variant carries all of its certificate data inline; the
// value is built a handful of times per run, so the size skew is harmless.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum AutClassification {
    /// Only the identity.
    Trivial { reason: TrivialReason },
    /// `t = 1`: the involution induced by the double-plane covering
    /// involution of the surface; it acts trivially on the Neron-Severi
    /// lattice, so no matrix data is attached.
    NaturalInvolution,
    /// A unique non-natural, non-symplectic involution.
    NonNaturalInvolution {
        /// Action on the lattice in the basis `(h, -delta)`.
        matrix: Isometry,
        /// The unique ample class of square 2; the involution is the
        /// reflection through it.
        ample_class: NSClass,
        /// Minimal solution `(a, b)` of `x^2 - t y^2 = -1`.
        pell_m1: PellSolution,
        /// Minimal solution of `x^2 - t y^2 = 1`; equals `(A, -B)` for the
        /// matrix entries.
        pell_p1: PellSolution,
    },
}

impl AutClassification {
    pub fn tag(&self) -> &'static str {
        match self {
            AutClassification::Trivial { .. } => "trivial",
            AutClassification::NaturalInvolution => "natural_involution",
            AutClassification::NonNaturalInvolution { .. } => "non_natural_involution",
        }
    }

    pub fn is_nontrivial(&self) -> bool {
        !matches!(self, AutClassification::Trivial { .. })
    }
}

fn four_t(t: u64) -> Result<u64, ClassifierError> {
    t.checked_mul(4)
        .ok_or(ClassifierError::PolarizationTooLarge(t))
}

fn inconsistent<T>(msg: String) -> Result<T, ClassifierError> {
    Err(ClassifierError::InternalInconsistency(msg))
}

/// Classify the automorphism group for the given `t >= 1`.
pub fn classify(t: u64) -> Result<AutClassification, ClassifierError> {
    assert!(t >= 1, "t must be positive");
    if t == 1 {
        // Settled before any Pell machinery runs; sqrt(1) has no expansion.
        return Ok(AutClassification::NaturalInvolution);
    }
    if perfect_square_u64(t).is_some() {
        return Ok(AutClassification::Trivial {
            reason: TrivialReason::PerfectSquare,
        });
    }
    let d45 = four_t(t)?;
    let solvable45 = pell::solvable_general(d45, 5)
        .map_err(|e| ClassifierError::InternalInconsistency(format!("P_4t(5) solver: {e}")))?;
    if solvable45 {
        return Ok(AutClassification::Trivial {
            reason: TrivialReason::FourT5Solvable,
        });
    }
    let Some(pell_m1) = pell::minimal_solution_pm1(t)
        .map_err(|e| ClassifierError::InternalInconsistency(format!("P_t(-1) solver: {e}")))?
    else {
        return Ok(AutClassification::Trivial {
            reason: TrivialReason::NegativePellUnsolvable,
        });
    };

    let ctx = LatticeContext::new(t);
    let (a, b) = (&pell_m1.x, &pell_m1.y);
    let entry_a = a * a * 2u32 + 1u32;
    let entry_b = -(a * b * 2u32);
    let entry_c = BigInt::from(t) * a * b * 2u32;
    let entry_d = -(&entry_a);
    let matrix = match Isometry::new(ctx, entry_a, entry_b, entry_c, entry_d) {
        Ok(m) => m,
        Err(e) => {
            return inconsistent(format!(
                "closed-form matrix for t={t} is not an isometry: {e}"
            ))
        }
    };

    let ample_class = NSClass {
        x: b.clone(),
        y: a.clone(),
    };

    // Route two: the same matrix through the general reflection formula.
    match reflection_in_class(ctx, &ample_class) {
        Ok(refl) if refl == matrix => {}
        Ok(refl) => {
            return inconsistent(format!(
                "t={t}: reflection route gives {refl}, closed form gives {matrix}"
            ))
        }
        Err(e) => return inconsistent(format!("t={t}: reflection route failed: {e}")),
    }

    match extends_to_full_lattice(ctx, &ample_class) {
        Ok(true) => {}
        Ok(false) => return inconsistent(format!("t={t}: {ample_class} does not extend")),
        Err(e) => return inconsistent(format!("t={t}: extension test failed: {e}")),
    }

    let pell_p1 = pell::minimal_solution_p1(t)
        .map_err(|e| ClassifierError::InternalInconsistency(format!("P_t(1) solver: {e}")))?;
    let (ma, mb, _, _) = matrix.entries();
    if !(pell_p1.x == *ma && pell_p1.y == -mb) {
        return inconsistent(format!(
            "t={t}: minimal P_t(1) solution {pell_p1} is not (A, -B) of {matrix}"
        ));
    }

    if !crate::ample_cone::is_ample(t, &ample_class) {
        return inconsistent(format!(
            "t={t}: class {ample_class} of square 2 is not ample"
        ));
    }

    Ok(AutClassification::NonNaturalInvolution {
        matrix,
        ample_class,
        pell_m1,
        pell_p1,
    })
}

/// Candidate square-2 classes: `(b, a)` for the odd powers `z^(2k+1)`,
/// `k = 0..=3`, of the fundamental solution `z` of `x^2 - t y^2 = -1`.
fn square2_candidates(t: u64) -> Result<Vec<NSClass>, ClassifierError> {
    if perfect_square_u64(t).is_some() {
        return Ok(Vec::new());
    }
    let Some(z) = pell::minimal_solution_pm1(t)
        .map_err(|e| ClassifierError::InternalInconsistency(format!("P_t(-1) solver: {e}")))?
    else {
        return Ok(Vec::new());
    };
    let mut out = Vec::with_capacity(4);
    for k in 0..=3i64 {
        let w = pell::solution_power(&z, 2 * k + 1)
            .map_err(|e| ClassifierError::InternalInconsistency(format!("power solver: {e}")))?;
        // A solution (a, b) of P_t(-1) gives the square-2 class b*h - a*delta.
        out.push(NSClass { x: w.y, y: w.x });
    }
    Ok(out)
}

fn ample_square2_among(cone: &Cone, candidates: &[NSClass]) -> Vec<NSClass> {
    candidates
        .iter()
        .filter(|c| cone.contains_interior(c))
        .cloned()
        .collect()
}

/// Both sides of the existence criterion, evaluated independently:
/// `cond1` is the Pell triple condition (non-square `t`, `x^2 - 4t y^2 = 5`
/// unsolvable, `x^2 - t y^2 = -1` solvable); `cond2` is the constructive
/// existence of an ample square-2 class among the odd-power candidates.
/// The two are provably equivalent; callers assert `cond1 == cond2`.
pub fn square2_condition_equivalence(t: u64) -> Result<(bool, bool), ClassifierError> {
    assert!(t >= 2, "the criterion applies from t = 2 on");
    let square = perfect_square_u64(t).is_some();
    let cond1 = if square {
        false
    } else {
        let solvable45 = pell::solvable_general(four_t(t)?, 5)
            .map_err(|e| ClassifierError::InternalInconsistency(format!("P_4t(5) solver: {e}")))?;
        let pm1_solvable = pell::minimal_solution_pm1(t)
            .map_err(|e| ClassifierError::InternalInconsistency(format!("P_t(-1) solver: {e}")))?
            .is_some();
        !solvable45 && pm1_solvable
    };
    let candidates = square2_candidates(t)?;
    let (cone, _) = compute_cone(t);
    let cond2 = !ample_square2_among(&cone, &candidates).is_empty();
    Ok((cond1, cond2))
}

/// The unique ample class of square 2 when the classification is a
/// non-natural involution, `None` otherwise. At most one of the odd-power
/// candidates can be ample; finding two is an internal bug.
pub fn unique_ample_square2(t: u64) -> Result<Option<NSClass>, ClassifierError> {
    assert!(t >= 2, "the criterion applies from t = 2 on");
    let candidates = square2_candidates(t)?;
    let (cone, _) = compute_cone(t);
    let mut ample = ample_square2_among(&cone, &candidates);
    if ample.len() > 1 {
        return inconsistent(format!(
            "t={t}: {} ample square-2 candidates, expected at most one",
            ample.len()
        ));
    }
    Ok(ample.pop())
}

/// Holomorphic Euler characteristic of `n*D` for the square-2 class `D`:
/// `chi(nD) = n^4/2 + 5n^2/2 + 3`, always an integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerCharVal {
    pub n: i64,
    pub chi: BigInt,
}

pub fn euler_characteristic(n: i64) -> EulerCharVal {
    let m = BigInt::from(n);
    let m2 = &m * &m;
    let m4 = &m2 * &m2;
    let numerator = m4 + 5u32 * m2 + 6u32;
    debug_assert!((&numerator % 2u32).is_zero());
    EulerCharVal {
        n,
        chi: numerator / 2u32,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ns_lattice;

    fn pair(s: &PellSolution) -> (i64, i64) {
        (i64::try_from(&s.x).unwrap(), i64::try_from(&s.y).unwrap())
    }

    #[test]
    fn classify_t1_is_natural() {
        assert_eq!(classify(1).unwrap(), AutClassification::NaturalInvolution);
    }

    #[test]
    fn classify_t2_quartic_involution() {
        let AutClassification::NonNaturalInvolution {
            matrix,
            ample_class,
            pell_m1,
            pell_p1,
        } = classify(2).unwrap()
        else {
            panic!("t=2 admits an involution");
        };
        let (a, b, c, d) = matrix.entries();
        let got: Vec<i64> = [a, b, c, d]
            .iter()
            .map(|v| i64::try_from(*v).unwrap())
            .collect();
        assert_eq!(got, vec![3, -2, 4, -3]);
        assert_eq!(ample_class, NSClass::new(1, 1));
        assert_eq!(pair(&pell_m1), (1, 1));
        assert_eq!(pair(&pell_p1), (3, 2));
    }

    #[test]
    fn classify_t10_involution() {
        let AutClassification::NonNaturalInvolution {
            matrix,
            ample_class,
            pell_m1,
            pell_p1,
        } = classify(10).unwrap()
        else {
            panic!("t=10 admits an involution");
        };
        let (a, b, c, d) = matrix.entries();
        let got: Vec<i64> = [a, b, c, d]
            .iter()
            .map(|v| i64::try_from(*v).unwrap())
            .collect();
        assert_eq!(got, vec![19, -6, 60, -19]);
        assert_eq!(ample_class, NSClass::new(1, 3));
        assert_eq!(pair(&pell_m1), (3, 1));
        assert_eq!(pair(&pell_p1), (19, 6));
    }

    #[test]
    fn classify_trivial_cases_with_reasons() {
        assert_eq!(
            classify(9).unwrap(),
            AutClassification::Trivial {
                reason: TrivialReason::PerfectSquare
            }
        );
        assert_eq!(
            classify(5).unwrap(),
            AutClassification::Trivial {
                reason: TrivialReason::FourT5Solvable
            }
        );
        assert_eq!(
            classify(7).unwrap(),
            AutClassification::Trivial {
                reason: TrivialReason::NegativePellUnsolvable
            }
        );
    }

    #[test]
    fn known_small_classification_lists() {
        for t in [2u64, 10, 13, 17] {
            assert!(classify(t).unwrap().is_nontrivial(), "t={t}");
        }
        for t in [3u64, 4, 5, 6, 7, 8, 9, 11, 12] {
            assert!(!classify(t).unwrap().is_nontrivial(), "t={t}");
        }
    }

    #[test]
    fn equivalence_examples() {
        assert_eq!(square2_condition_equivalence(2).unwrap(), (true, true));
        assert_eq!(square2_condition_equivalence(5).unwrap(), (false, false));
        assert_eq!(square2_condition_equivalence(7).unwrap(), (false, false));
    }

    #[test]
    fn unique_square2_examples() {
        assert_eq!(unique_ample_square2(13).unwrap(), Some(NSClass::new(5, 18)));
        assert_eq!(unique_ample_square2(17).unwrap(), Some(NSClass::new(1, 4)));
        assert_eq!(unique_ample_square2(7).unwrap(), None);
        assert_eq!(unique_ample_square2(9).unwrap(), None);
    }

    #[test]
    fn unique_square2_has_square_two() {
        for t in 2u64..=120 {
            if let Some(class) = unique_ample_square2(t).unwrap() {
                let ctx = LatticeContext::new(t);
                assert_eq!(
                    ns_lattice::bbf_square(ctx, &class),
                    BigInt::from(2),
                    "t={t}"
                );
            }
        }
    }

    #[test]
    fn euler_characteristic_values() {
        assert_eq!(euler_characteristic(1).chi, BigInt::from(6));
        assert_eq!(euler_characteristic(0).chi, BigInt::from(3));
        assert_eq!(euler_characteristic(2).chi, BigInt::from(21));
        assert_eq!(euler_characteristic(3).chi, BigInt::from(66));
        assert_eq!(euler_characteristic(-2).chi, BigInt::from(21));
    }

    #[test]
    fn even_t_reduces_to_negative_pell() {
        // For even t the 4t-5 equation is never solvable, so the involution
        // exists exactly when P_t(-1) does.
        for t in (2u64..=500).step_by(2) {
            if perfect_square_u64(t).is_some() {
                continue;
            }
            let reduced = pell::minimal_solution_pm1(t).unwrap().is_some();
            assert_eq!(classify(t).unwrap().is_nontrivial(), reduced, "t={t}");
        }
    }

    #[test]
    fn involution_fixes_its_class_and_cone() {
        for t in 2u64..=120 {
            let AutClassification::NonNaturalInvolution {
                matrix,
                ample_class,
                ..
            } = classify(t).unwrap()
            else {
                continue;
            };
            assert!(matrix.is_involution(), "t={t}");
            assert_eq!(matrix.det(), BigInt::from(-1), "t={t}");
            assert_eq!(matrix.apply(&ample_class), ample_class, "t={t}");
            let (cone, _) = compute_cone(t);
            // Interior samples map to interior classes.
            for lambda in 1i64..=5 {
                for mu in 1i64..=5 {
                    let sample = NSClass {
                        x: BigInt::from(lambda) * &cone.ray1.x + BigInt::from(mu) * &cone.ray2.x,
                        y: BigInt::from(lambda) * &cone.ray1.y + BigInt::from(mu) * &cone.ray2.y,
                    };
                    assert!(cone.contains_interior(&sample), "t={t}");
                    assert!(cone.contains_interior(&matrix.apply(&sample)), "t={t}");
                }
            }
        }
    }
}
