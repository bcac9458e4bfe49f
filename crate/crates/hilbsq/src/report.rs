//! Per-`t` reports and their text, JSON and CSV renderings.
//!
//! The JSON schema keeps every integer as a decimal string so values survive
//! arbitrary precision in any consumer:
//!
//! ```json
//! {
//!   "t": "10",
//!   "cone": {
//!     "ray1": ["1", "0"],
//!     "ray2": ["19", "60"],
//!     "case": {"kind": "pell_t1", "solution": ["19", "6"]},
//!     "inequality": "y>0, 19y<60x"
//!   },
//!   "group": {"finite": false, "generator": ["19", "6"]},
//!   "aut": {
//!     "tag": "non_natural_involution",
//!     "reason": null,
//!     "matrix": [["19", "-6"], ["60", "-19"]],
//!     "D": ["1", "3"],
//!     "pell_m1": ["3", "1"],
//!     "pell_p1": ["19", "6"]
//!   },
//!   "chi": [{"n": "1", "chi": "6"}, ...],
//!   "verified": null
//! }
//! ```
//!
//! `case.kind` is one of `square_t` (payload `k`), `pell_4t5` or `pell_t1`
//! (payload `solution`). `aut.reason` is non-null only for the `trivial`
//! tag; `matrix`, `D`, `pell_m1`, `pell_p1` are non-null only for
//! `non_natural_involution`. `verified` is `null` until oracle verification
//! has been run. Rendering then parsing is lossless, field for field.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::ample_cone::{compute_cone, Cone, ConeCase};
use crate::classifier::{
    classify, euler_characteristic, AutClassification, ClassifierError, EulerCharVal, TrivialReason,
};
use crate::ns_lattice::{
    group_structure, GroupDescription, GroupStructure, Isometry, LatticeContext, NSClass,
};
use crate::oracle;
use crate::pell::{self, PellSolution};

/// Everything the command-line front end reports about one value of `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub t: u64,
    pub cone: Cone,
    pub cone_case: ConeCase,
    pub inequality: String,
    pub group: GroupDescription,
    pub aut: AutClassification,
    /// Euler characteristics of `n*D` for `n = 1..=4`.
    pub chi: Vec<EulerCharVal>,
    /// `None` until `verify` has been run.
    pub verified: Option<bool>,
}

impl Report {
    pub fn build(t: u64) -> Result<Report, ClassifierError> {
        let (cone, cone_case) = compute_cone(t);
        let inequality = cone.inequality();
        let group = group_structure(LatticeContext::new(t));
        let aut = classify(t)?;
        let chi = (1..=4).map(euler_characteristic).collect();
        Ok(Report {
            t,
            cone,
            cone_case,
            inequality,
            group,
            aut,
            chi,
            verified: None,
        })
    }

    /// Cross-check the fast solvers against the brute-force oracles and
    /// record the outcome in `verified`. Pell minima are compared against an
    /// exhaustive scan capped at `10^6`; when a minimum lies beyond the cap
    /// the oracle instead confirms that no smaller solution exists. The
    /// square-2 scan checks that exactly one ample square-2 class exists
    /// below coordinate `10^4` when the involution is present, none
    /// otherwise.
    pub fn verify(&mut self) -> bool {
        let ok = self.run_oracle_checks().is_ok();
        self.verified = Some(ok);
        ok
    }

    /// As `verify`, but reporting the first failing check.
    pub fn run_oracle_checks(&self) -> Result<(), String> {
        const Y_CAP: u64 = 1_000_000;
        const COORD_CAP: u64 = 10_000;
        let t = self.t;
        if t >= 2 && pell::perfect_square_u64(t).is_none() {
            for n in [1i64, -1] {
                let fast = match n {
                    1 => Some(pell::minimal_solution_p1(t).map_err(|e| e.to_string())?),
                    _ => pell::minimal_solution_pm1(t).map_err(|e| e.to_string())?,
                };
                check_minimum_against_scan(t, n, fast.as_ref(), Y_CAP)?;
            }
            // Solvability of x^2 - 4t y^2 = 5 against a capped scan.
            let d45 = 4 * t;
            let fast45 = pell::minimal_solution_general(d45, 5).map_err(|e| e.to_string())?;
            check_minimum_against_scan(d45, 5, fast45.as_ref(), Y_CAP)?;
        }
        // Uniqueness of the ample square-2 class.
        let brute = oracle::brute_square2_ample(t, COORD_CAP);
        match &self.aut {
            AutClassification::NonNaturalInvolution { ample_class, .. } => {
                if brute.len() != 1 {
                    return Err(format!(
                        "t={t}: oracle found {} ample square-2 classes, expected 1",
                        brute.len()
                    ));
                }
                if &brute[0] != ample_class {
                    return Err(format!(
                        "t={t}: oracle square-2 class {} differs from {}",
                        brute[0], ample_class
                    ));
                }
            }
            _ => {
                if !brute.is_empty() {
                    return Err(format!(
                        "t={t}: classification is {} but the oracle found {}",
                        self.aut.tag(),
                        brute[0]
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let case = match &self.cone_case {
            ConeCase::SquareT { k } => json!({"kind": "square_t", "k": k.to_string()}),
            ConeCase::PellFourT5 { solution } => {
                json!({"kind": "pell_4t5", "solution": solution_json(solution)})
            }
            ConeCase::PellT1 { solution } => {
                json!({"kind": "pell_t1", "solution": solution_json(solution)})
            }
        };
        let generator = match &self.group.structure {
            GroupStructure::FiniteDihedral4 => Value::Null,
            GroupStructure::InfiniteGeneralizedDihedral { generator } => solution_json(generator),
        };
        let (reason, matrix, d_class, pell_m1, pell_p1) = match &self.aut {
            AutClassification::Trivial { reason } => (
                json!(reason.as_str()),
                Value::Null,
                Value::Null,
                Value::Null,
                Value::Null,
            ),
            AutClassification::NaturalInvolution => (
                Value::Null,
                Value::Null,
                Value::Null,
                Value::Null,
                Value::Null,
            ),
            AutClassification::NonNaturalInvolution {
                matrix,
                ample_class,
                pell_m1,
                pell_p1,
            } => {
                let (a, b, c, d) = matrix.entries();
                (
                    Value::Null,
                    json!([
                        [a.to_string(), b.to_string()],
                        [c.to_string(), d.to_string()]
                    ]),
                    class_json(ample_class),
                    solution_json(pell_m1),
                    solution_json(pell_p1),
                )
            }
        };
        json!({
            "t": self.t.to_string(),
            "cone": {
                "ray1": class_json(&self.cone.ray1),
                "ray2": class_json(&self.cone.ray2),
                "case": case,
                "inequality": self.inequality,
            },
            "group": {
                "finite": self.group.is_square_t,
                "generator": generator,
            },
            "aut": {
                "tag": self.aut.tag(),
                "reason": reason,
                "matrix": matrix,
                "D": d_class,
                "pell_m1": pell_m1,
                "pell_p1": pell_p1,
            },
            "chi": self.chi.iter().map(|e| {
                json!({"n": e.n.to_string(), "chi": e.chi.to_string()})
            }).collect::<Vec<_>>(),
            "verified": self.verified.map_or(Value::Null, Value::Bool),
        })
    }

    /// Parse a value produced by [`Report::to_json`] back into a `Report`.
    pub fn from_json(v: &Value) -> Result<Report, String> {
        let t: u64 = str_field(v, "/t")?.parse().map_err(|e| format!("t: {e}"))?;
        let ray1 = parse_class(v, "/cone/ray1")?;
        let ray2 = parse_class(v, "/cone/ray2")?;
        let cone = Cone { ray1, ray2 };
        let case_kind = str_field(v, "/cone/case/kind")?;
        let cone_case = match case_kind.as_str() {
            "square_t" => ConeCase::SquareT {
                k: str_field(v, "/cone/case/k")?
                    .parse()
                    .map_err(|e| format!("k: {e}"))?,
            },
            "pell_4t5" => ConeCase::PellFourT5 {
                solution: parse_solution(v, "/cone/case/solution", 4 * t, 5)?,
            },
            "pell_t1" => ConeCase::PellT1 {
                solution: parse_solution(v, "/cone/case/solution", t, 1)?,
            },
            other => return Err(format!("unknown cone case kind {other}")),
        };
        let inequality = str_field(v, "/cone/inequality")?;
        let finite = v
            .pointer("/group/finite")
            .and_then(Value::as_bool)
            .ok_or("group.finite must be a boolean")?;
        let group = if finite {
            GroupDescription {
                is_square_t: true,
                structure: GroupStructure::FiniteDihedral4,
            }
        } else {
            GroupDescription {
                is_square_t: false,
                structure: GroupStructure::InfiniteGeneralizedDihedral {
                    generator: parse_solution(v, "/group/generator", t, 1)?,
                },
            }
        };
        let tag = str_field(v, "/aut/tag")?;
        let aut = match tag.as_str() {
            "trivial" => {
                let reason_str = str_field(v, "/aut/reason")?;
                let reason = TrivialReason::parse(&reason_str)
                    .ok_or_else(|| format!("unknown trivial reason {reason_str}"))?;
                AutClassification::Trivial { reason }
            }
            "natural_involution" => AutClassification::NaturalInvolution,
            "non_natural_involution" => {
                let m = v.pointer("/aut/matrix").ok_or("missing aut.matrix")?;
                let entry = |i: usize, j: usize| -> Result<BigInt, String> {
                    m.pointer(&format!("/{i}/{j}"))
                        .and_then(Value::as_str)
                        .ok_or_else(|| format!("matrix entry ({i},{j}) must be a string"))?
                        .parse::<BigInt>()
                        .map_err(|e| format!("matrix entry ({i},{j}): {e}"))
                };
                let matrix = Isometry::new(
                    LatticeContext::new(t),
                    entry(0, 0)?,
                    entry(0, 1)?,
                    entry(1, 0)?,
                    entry(1, 1)?,
                )
                .map_err(|e| format!("aut.matrix: {e}"))?;
                AutClassification::NonNaturalInvolution {
                    matrix,
                    ample_class: parse_class(v, "/aut/D")?,
                    pell_m1: parse_solution(v, "/aut/pell_m1", t, -1)?,
                    pell_p1: parse_solution(v, "/aut/pell_p1", t, 1)?,
                }
            }
            other => return Err(format!("unknown aut tag {other}")),
        };
        let chi_values = v
            .pointer("/chi")
            .and_then(Value::as_array)
            .ok_or("chi must be an array")?;
        let mut chi = Vec::with_capacity(chi_values.len());
        for entry in chi_values {
            let n: i64 = entry
                .get("n")
                .and_then(Value::as_str)
                .ok_or("chi entry needs a string n")?
                .parse()
                .map_err(|e| format!("chi n: {e}"))?;
            let chi_val: BigInt = entry
                .get("chi")
                .and_then(Value::as_str)
                .ok_or("chi entry needs a string chi")?
                .parse()
                .map_err(|e| format!("chi value: {e}"))?;
            chi.push(EulerCharVal { n, chi: chi_val });
        }
        let verified = match v.pointer("/verified") {
            Some(Value::Null) | None => None,
            Some(Value::Bool(b)) => Some(*b),
            Some(other) => return Err(format!("verified must be bool or null, got {other}")),
        };
        Ok(Report {
            t,
            cone,
            cone_case,
            inequality,
            group,
            aut,
            chi,
            verified,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let t = self.t;
        out.push_str(&format!("t = {t} (polarization of square {})\n", 2 * t));
        out.push_str(&format!(
            "ample cone: interior of the cone spanned by {} and {}\n",
            self.cone.ray1, self.cone.ray2
        ));
        out.push_str(&format!("  inequality: {}\n", self.inequality));
        out.push_str(&format!("  case: {}\n", self.cone_case));
        match &self.group.structure {
            GroupStructure::FiniteDihedral4 => {
                out.push_str("isometry group O(NS): dihedral of order 4 {id, -id, s, -s}\n");
            }
            GroupStructure::InfiniteGeneralizedDihedral { generator } => {
                out.push_str(&format!(
                    "isometry group O(NS): infinite generalized dihedral, rotations generated by (A, B) = {generator}\n"
                ));
            }
        }
        match &self.aut {
            AutClassification::Trivial { reason } => {
                out.push_str(&format!(
                    "automorphisms: trivial (reason: {})\n",
                    reason.as_str()
                ));
            }
            AutClassification::NaturalInvolution => {
                out.push_str(
                    "automorphisms: Z/2, generated by the natural non-symplectic involution \
                     induced by the double-plane covering involution\n",
                );
            }
            AutClassification::NonNaturalInvolution {
                matrix,
                ample_class,
                pell_m1,
                pell_p1,
            } => {
                out.push_str(
                    "automorphisms: Z/2, generated by a non-natural non-symplectic involution\n",
                );
                let (a, b, c, d) = matrix.entries();
                let entries = [a.to_string(), b.to_string(), c.to_string(), d.to_string()];
                let w = entries.iter().map(String::len).max().unwrap_or(1);
                out.push_str("  action on NS in the basis (h, -delta):\n");
                out.push_str(&format!("    [ {:>w$}  {:>w$} ]\n", entries[0], entries[1]));
                out.push_str(&format!("    [ {:>w$}  {:>w$} ]\n", entries[2], entries[3]));
                out.push_str(&format!(
                    "  invariant ample class D = {} = {}, D^2 = 2\n",
                    ample_class,
                    ample_class.divisor_string()
                ));
                out.push_str(&format!(
                    "  Pell data: minimal solution of x^2 - {t} y^2 = -1 is {pell_m1}, of x^2 - {t} y^2 = 1 is {pell_p1}\n"
                ));
                let chi_line: Vec<String> = self
                    .chi
                    .iter()
                    .map(|e| format!("chi({}D) = {}", e.n, e.chi))
                    .collect();
                out.push_str(&format!("  {}\n", chi_line.join(", ")));
            }
        }
        if let Some(ok) = self.verified {
            out.push_str(&format!(
                "oracle verification: {}\n",
                if ok { "agreed" } else { "MISMATCH" }
            ));
        }
        out
    }

    pub fn csv_header() -> &'static str {
        "t,aut_tag,aut_reason,matrix,D,pell_m1,pell_p1,cone_ray1,cone_ray2,cone_case,cone_case_data,inequality,group_finite,group_generator,chi_1,chi_2,chi_3,chi_4,verified"
    }

    pub fn to_csv_row(&self) -> String {
        let quote = |s: String| {
            if s.contains(',') || s.contains('"') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s
            }
        };
        let sol_csv = |s: &PellSolution| quote(format!("{},{}", s.x, s.y));
        let class_csv = |c: &NSClass| quote(format!("{},{}", c.x, c.y));
        let (reason, matrix, d_class, m1, p1) = match &self.aut {
            AutClassification::Trivial { reason } => (
                reason.as_str().to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ),
            AutClassification::NaturalInvolution => (
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ),
            AutClassification::NonNaturalInvolution {
                matrix,
                ample_class,
                pell_m1,
                pell_p1,
            } => {
                let (a, b, c, d) = matrix.entries();
                (
                    String::new(),
                    quote(format!("{a},{b},{c},{d}")),
                    class_csv(ample_class),
                    sol_csv(pell_m1),
                    sol_csv(pell_p1),
                )
            }
        };
        let (case_kind, case_data) = match &self.cone_case {
            ConeCase::SquareT { k } => ("square_t", k.to_string()),
            ConeCase::PellFourT5 { solution } => ("pell_4t5", sol_csv(solution)),
            ConeCase::PellT1 { solution } => ("pell_t1", sol_csv(solution)),
        };
        let generator = match &self.group.structure {
            GroupStructure::FiniteDihedral4 => String::new(),
            GroupStructure::InfiniteGeneralizedDihedral { generator } => sol_csv(generator),
        };
        let chi: Vec<String> = self.chi.iter().map(|e| e.chi.to_string()).collect();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.t,
            self.aut.tag(),
            quote(reason),
            matrix,
            d_class,
            m1,
            p1,
            class_csv(&self.cone.ray1),
            class_csv(&self.cone.ray2),
            case_kind,
            case_data,
            quote(self.inequality.clone()),
            self.group.is_square_t,
            generator,
            chi.join(","),
            self.verified.map_or(String::new(), |b| b.to_string()),
        )
    }

    /// One line of the scan table.
    pub fn scan_row(&self) -> String {
        let d_col = match &self.aut {
            AutClassification::NonNaturalInvolution { ample_class, .. } => {
                format!("{ample_class}")
            }
            _ => "-".to_string(),
        };
        format!(
            "{:>6}  {:<24}  {:<9}  {}",
            self.t,
            self.aut.tag(),
            self.cone_case.kind_str(),
            d_col
        )
    }

    pub fn scan_header() -> String {
        format!("{:>6}  {:<24}  {:<9}  {}", "t", "aut", "cone", "D")
    }
}

/// Compare a fast minimal solution of `x^2 - d y^2 = n` against the first
/// positive entry of an exhaustive scan. The scan is capped at the fast
/// minimum's own `y` (or at `y_cap` when that is smaller); a fast minimum
/// beyond the cap is checked by confirming that the scan finds nothing
/// smaller.
fn check_minimum_against_scan(
    d: u64,
    n: i64,
    fast: Option<&PellSolution>,
    y_cap: u64,
) -> Result<(), String> {
    let cap = match fast {
        Some(sol) => u64::try_from(&sol.y).unwrap_or(y_cap).min(y_cap),
        None => y_cap.min(10_000),
    };
    let brute = oracle::brute_pell(d, n, cap);
    let brute_min = brute.iter().find(|s| s.is_positive());
    match (fast, brute_min) {
        (Some(f), Some(b)) => {
            if f.x != b.x || f.y != b.y {
                return Err(format!(
                    "x^2 - {d} y^2 = {n}: fast minimum {f} but scan found {b}"
                ));
            }
        }
        (Some(f), None) => {
            if u64::try_from(&f.y).is_ok_and(|y| y <= cap) {
                return Err(format!(
                    "x^2 - {d} y^2 = {n}: scan missed the fast minimum {f}"
                ));
            }
        }
        (None, Some(b)) => {
            return Err(format!(
                "x^2 - {d} y^2 = {n}: fast path reports unsolvable but scan found {b}"
            ));
        }
        (None, None) => {}
    }
    Ok(())
}

fn solution_json(s: &PellSolution) -> Value {
    json!([s.x.to_string(), s.y.to_string()])
}

fn class_json(c: &NSClass) -> Value {
    json!([c.x.to_string(), c.y.to_string()])
}

fn str_field(v: &Value, pointer: &str) -> Result<String, String> {
    v.pointer(pointer)
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| format!("missing or non-string field {pointer}"))
}

fn parse_pair(v: &Value, pointer: &str) -> Result<(BigInt, BigInt), String> {
    let arr = v
        .pointer(pointer)
        .and_then(Value::as_array)
        .ok_or_else(|| format!("missing pair {pointer}"))?;
    if arr.len() != 2 {
        return Err(format!("{pointer} must have two entries"));
    }
    let parse = |i: usize| -> Result<BigInt, String> {
        arr[i]
            .as_str()
            .ok_or_else(|| format!("{pointer}[{i}] must be a decimal string"))?
            .parse::<BigInt>()
            .map_err(|e| format!("{pointer}[{i}]: {e}"))
    };
    Ok((parse(0)?, parse(1)?))
}

fn parse_class(v: &Value, pointer: &str) -> Result<NSClass, String> {
    let (x, y) = parse_pair(v, pointer)?;
    Ok(NSClass { x, y })
}

fn parse_solution(v: &Value, pointer: &str, d: u64, n: i64) -> Result<PellSolution, String> {
    let (x, y) = parse_pair(v, pointer)?;
    PellSolution::new(x, y, d, n).map_err(|e| format!("{pointer}: {e}"))
}

/// Reports for every `t` in `from..=to`, computed in parallel and returned in
/// input order.
pub fn scan_reports(from: u64, to: u64) -> Result<Vec<Report>, ClassifierError> {
    (from..=to).into_par_iter().map(Report::build).collect()
}

/// Convenience wrapper for callers that also want oracle verification.
pub fn build_verified(t: u64) -> Result<Report, ClassifierError> {
    let mut report = Report::build(t)?;
    report.verify();
    Ok(report)
}
