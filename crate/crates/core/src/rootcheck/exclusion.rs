//! Per-candidate exclusion certificates by exact variable elimination.
//!
//! For a fixed integer candidate the orthogonality system becomes a set of
//! polynomials in the real parameters (s, then r) with coefficients in
//! ℚ[e1..e8]. The engine eliminates the parameters exactly — solving linear
//! equations whose leading coefficient is a nonzero integer, falling back to
//! resultants, and finishing single quadratics with an exact discriminant
//! bound — until only e-polynomials remain. A nonzero residual polynomial of
//! degree ≤ 2 in the e-variables is an exclusion witness: its vanishing
//! would contradict the independence of {1, e_i, e_i·e_j} over the
//! rationals. Every case split is the vanishing test of a concrete integer
//! (the leading coefficient), so branching is evaluation, not search.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exactring::{rational_int, resultant, MultiPoly, VarName};
use crate::families::{FamilyKind, FamilySpec};
use crate::lattice::LatticeSpace;

use super::{derive_ortho_system, triple_for_kind, RootCandidate};

/// One recorded elimination event: the expression that was tested or used,
/// and its concrete value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub kind: &'static str,
    pub expr: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ExclusionOutcome {
    /// The system forces the witness polynomial to vanish; it is nonzero of
    /// e-degree ≤ 2 (or a nonzero constant), contradicting independence.
    Excluded {
        witness: MultiPoly,
        trace: Vec<TraceStep>,
    },
    /// Real parameter values satisfying every equation — this would mean
    /// the family point is not in the refined domain. Must never occur.
    SolutionFound {
        params: Vec<(String, String)>,
        trace: Vec<TraceStep>,
    },
    /// The engine could not finish within the paper's case structure;
    /// flagged for review rather than claimed either way.
    Inconclusive {
        reason: String,
        trace: Vec<TraceStep>,
    },
}

impl ExclusionOutcome {
    pub fn is_excluded(&self) -> bool {
        matches!(self, ExclusionOutcome::Excluded { .. })
    }

    pub fn trace(&self) -> &[TraceStep] {
        match self {
            ExclusionOutcome::Excluded { trace, .. }
            | ExclusionOutcome::SolutionFound { trace, .. }
            | ExclusionOutcome::Inconclusive { trace, .. } => trace,
        }
    }
}

/// Reusable per-family elimination context: the symbolic system is derived
/// once and specialized per candidate.
pub struct ExclusionEngine {
    params: Vec<VarName>,
    /// Labelled symbolic equations; `n`, `q` stay symbolic here so the
    /// recorded split expressions read like the derivation.
    mirror: Vec<(String, MultiPoly)>,
    npq: Option<(i64, i64)>,
    e_vars: BTreeSet<VarName>,
    /// Inverse of the `-E8` Gram matrix (integral: the form is unimodular).
    g_inverse: Vec<Vec<BigRational>>,
}

struct WorkEq {
    label: String,
    concrete: MultiPoly,
    mirror: MultiPoly,
    alive: bool,
}

impl ExclusionEngine {
    pub fn new(family: &FamilySpec) -> ExclusionEngine {
        ExclusionEngine::for_kind(family.kind, family.int_params.map(|(n, _, q)| (n, q)))
    }

    pub fn for_kind(kind: FamilyKind, npq: Option<(i64, i64)>) -> ExclusionEngine {
        if kind == FamilyKind::TorusNpq {
            assert!(npq.is_some(), "npq engine needs concrete n, q");
        }
        let sys = derive_ortho_system(&triple_for_kind(kind));
        let labels = ["(d, f1)", "(d, f2)", "(d, f3)"];
        let mirror = labels
            .iter()
            .map(|l| l.to_string())
            .zip(sys.equations)
            .collect();
        let params = match kind {
            FamilyKind::Circle => vec![VarName::S],
            _ => vec![VarName::S, VarName::R],
        };
        ExclusionEngine {
            params,
            mirror,
            npq,
            e_vars: VarName::e_all().into_iter().collect(),
            g_inverse: invert_gram(&LatticeSpace::minus_e8()),
        }
    }

    /// Produces the verdict for one candidate. Deterministic: identical
    /// candidates yield identical traces.
    pub fn certify(&self, candidate: &RootCandidate) -> ExclusionOutcome {
        let mut trace = Vec::new();

        // admissibility first: AB+CD+EF - n1 - n2 + 1 must vanish
        let norm_residue =
            candidate.hyperbolic_product() - candidate.n1() - candidate.n2() + 1;
        trace.push(TraceStep {
            kind: "norm_check",
            expr: "A*B + C*D + E*F - n1 - n2 + 1".into(),
            value: norm_residue.to_string(),
        });
        if norm_residue != 0 {
            return ExclusionOutcome::Excluded {
                witness: MultiPoly::int(norm_residue),
                trace,
            };
        }

        let mut bindings = candidate.bindings();
        if let Some((n, q)) = self.npq {
            bindings.insert(VarName::N, rational_int(n));
            bindings.insert(VarName::Q, rational_int(q));
        }
        let mut eqs: Vec<WorkEq> = self
            .mirror
            .iter()
            .map(|(label, sym)| WorkEq {
                label: label.clone(),
                concrete: sym.eval_partial(&bindings),
                mirror: sym.clone(),
                alive: true,
            })
            .collect();

        let mut solved: Vec<(VarName, MultiPoly, BigRational)> = Vec::new();
        let mut equivalence_preserved = true;

        for &param in &self.params {
            if let Some(outcome) = self.eliminate(
                param,
                &mut eqs,
                &mut trace,
                &mut solved,
                &mut equivalence_preserved,
            ) {
                return outcome;
            }
        }

        // terminal: every remaining live equation is an e-polynomial
        debug_assert!(eqs.iter().filter(|eq| eq.alive).all(|eq| self
            .params
            .iter()
            .all(|&p| !eq.concrete.contains_var(p))));
        if let Some(outcome) = self.residual_witness(&eqs, &mut trace) {
            return outcome;
        }

        trace.push(TraceStep {
            kind: "all_vanished",
            expr: "residual system".into(),
            value: "0".into(),
        });
        if !equivalence_preserved {
            return ExclusionOutcome::Inconclusive {
                reason: "all residuals vanish but a resultant step discarded information".into(),
                trace,
            };
        }
        self.reconstruct_solution(solved, trace)
    }

    /// Eliminates one parameter from the live system; `Some(outcome)` ends
    /// the whole certificate early.
    fn eliminate(
        &self,
        var: VarName,
        eqs: &mut Vec<WorkEq>,
        trace: &mut Vec<TraceStep>,
        solved: &mut Vec<(VarName, MultiPoly, BigRational)>,
        equivalence_preserved: &mut bool,
    ) -> Option<ExclusionOutcome> {
        let mut logged_splits: BTreeSet<(usize, u32)> = BTreeSet::new();
        loop {
            // record leading coefficients that vanished for this candidate:
            // these are exactly the case splits of the derivation
            for (idx, eq) in eqs.iter().enumerate() {
                if !eq.alive {
                    continue;
                }
                let cdeg = eq.concrete.degree_in(var);
                let mdeg = eq.mirror.degree_in(var);
                if mdeg > cdeg {
                    let mirror_coeffs = eq.mirror.coefficients_in(var);
                    for k in (cdeg + 1)..=mdeg {
                        if logged_splits.insert((idx, k)) {
                            trace.push(TraceStep {
                                kind: "case_split",
                                expr: mirror_coeffs[k as usize].to_string(),
                                value: "0".into(),
                            });
                        }
                    }
                }
            }

            // a nonzero parameter-free residual is already a witness; it
            // takes priority over any further elimination
            if let Some(outcome) = self.residual_witness(eqs, trace) {
                return Some(outcome);
            }

            // prefer a linear equation with a nonzero constant leading
            // coefficient: solving it is an equivalence transformation
            let solvable = eqs.iter().position(|eq| {
                eq.alive
                    && eq.concrete.degree_in(var) == 1
                    && eq.concrete.coefficients_in(var)[1]
                        .as_constant()
                        .is_some_and(|c| !c.is_zero())
            });
            if let Some(i) = solvable {
                let coeffs = eqs[i].concrete.coefficients_in(var);
                let lead = coeffs[1].as_constant().expect("checked constant");
                let num = -&coeffs[0];
                let den = MultiPoly::constant(lead.clone());
                let mirror_coeffs = eqs[i].mirror.coefficients_in(var);
                let mirror_num = -&mirror_coeffs[0];
                let mirror_den = if mirror_coeffs.len() > 1 {
                    mirror_coeffs[1].clone()
                } else {
                    MultiPoly::one()
                };
                trace.push(TraceStep {
                    kind: "solve",
                    expr: format!("coeff of {} in {}: {}", var, eqs[i].label, mirror_den),
                    value: lead.to_string(),
                });
                for j in 0..eqs.len() {
                    if j == i || !eqs[j].alive || !eqs[j].concrete.contains_var(var) {
                        continue;
                    }
                    eqs[j].concrete = eqs[j].concrete.pseudo_substitute(var, &num, &den);
                    eqs[j].mirror =
                        eqs[j].mirror.pseudo_substitute(var, &mirror_num, &mirror_den);
                }
                eqs[i].alive = false;
                solved.push((var, num, lead));
                continue;
            }

            let with_var: Vec<usize> = eqs
                .iter()
                .enumerate()
                .filter(|(_, eq)| eq.alive && eq.concrete.contains_var(var))
                .map(|(i, _)| i)
                .collect();
            if with_var.is_empty() {
                return None;
            }
            if with_var.len() >= 2 {
                let (i, j) = (with_var[0], with_var[1]);
                trace.push(TraceStep {
                    kind: "resultant",
                    expr: format!("res_{}({}, {})", var, eqs[i].label, eqs[j].label),
                    value: String::new(),
                });
                eqs[i].concrete = resultant(&eqs[i].concrete, &eqs[j].concrete, var);
                eqs[i].mirror = resultant(&eqs[i].mirror, &eqs[j].mirror, var);
                eqs[i].label = format!("res_{}({}, {})", var, eqs[i].label, eqs[j].label);
                *equivalence_preserved = false;
                continue;
            }

            let i = with_var[0];
            let deg = eqs[i].concrete.degree_in(var);
            if deg == 2 {
                return self.quadratic_terminal(var, i, eqs, trace, solved);
            }
            return Some(ExclusionOutcome::Inconclusive {
                reason: format!(
                    "single equation {} of degree {deg} in {var} with a non-constant leading coefficient",
                    eqs[i].label
                ),
                trace: trace.clone(),
            });
        }
    }

    /// First live equation free of every parameter but not identically
    /// zero: an exclusion witness (or an out-of-hypothesis residual).
    fn residual_witness(
        &self,
        eqs: &[WorkEq],
        trace: &mut Vec<TraceStep>,
    ) -> Option<ExclusionOutcome> {
        let eq = eqs.iter().find(|eq| {
            eq.alive
                && !eq.concrete.is_zero()
                && self.params.iter().all(|&p| !eq.concrete.contains_var(p))
        })?;
        if eq.concrete.degree_in_set(&self.e_vars) > 2 {
            return Some(ExclusionOutcome::Inconclusive {
                reason: format!(
                    "residual constraint from {} has e-degree above the independence hypothesis",
                    eq.label
                ),
                trace: trace.clone(),
            });
        }
        let witness = eq.concrete.cleared();
        trace.push(TraceStep {
            kind: "witness",
            expr: eq.label.clone(),
            value: witness.to_string(),
        });
        Some(ExclusionOutcome::Excluded {
            witness,
            trace: trace.clone(),
        })
    }

    /// A lone quadratic `a·var² + b·var + c(e) = 0` over the reals: a real
    /// root needs discriminant `b² - 4a·c(e) ≥ 0`. The e-linear part of c
    /// is bounded through Cauchy-Schwarz and `|(e,e)| ≤ 1/2`; if even the
    /// maximal possible discriminant is negative, the candidate is excluded.
    fn quadratic_terminal(
        &self,
        var: VarName,
        i: usize,
        eqs: &mut [WorkEq],
        trace: &mut Vec<TraceStep>,
        solved: &mut Vec<(VarName, MultiPoly, BigRational)>,
    ) -> Option<ExclusionOutcome> {
        let coeffs = eqs[i].concrete.coefficients_in(var);
        let inconclusive = |reason: String, trace: &[TraceStep]| {
            Some(ExclusionOutcome::Inconclusive {
                reason,
                trace: trace.to_vec(),
            })
        };
        let Some(a) = coeffs[2].as_constant().filter(|a| !a.is_zero()) else {
            return inconclusive(
                format!("quadratic in {var} has a non-constant leading coefficient"),
                trace,
            );
        };
        let Some(b) = coeffs[1].as_constant() else {
            return inconclusive(
                format!("quadratic in {var} has an e-dependent linear coefficient"),
                trace,
            );
        };
        let c = &coeffs[0];
        if c.degree_in_set(&self.e_vars) > 1 {
            return inconclusive(
                format!("quadratic in {var} has an e-quadratic constant term"),
                trace,
            );
        }
        let c0 = c.constant_term();
        let gamma: Vec<BigRational> = (1..=8)
            .map(|k| c.coefficient(&crate::exactring::Monomial::var(VarName::e(k))))
            .collect();
        // |γ·e|² ≤ |γᵀ G⁻¹ γ| · |(e,e)| ≤ |γᵀ G⁻¹ γ| / 2
        let mut quad = BigRational::zero();
        for j in 0..8 {
            for k in 0..8 {
                quad += &gamma[j] * &self.g_inverse[j][k] * &gamma[k];
            }
        }
        let bound_sq = quad.abs() / rational_int(2);
        let disc0 = &b * &b - rational_int(4) * &a * &c0;
        let four_a_sq = rational_int(16) * &a * &a;
        let excluded = disc0.is_negative() && &disc0 * &disc0 > &four_a_sq * &bound_sq;
        trace.push(TraceStep {
            kind: "discriminant",
            expr: format!("disc_{}({})", var, eqs[i].label),
            value: format!(
                "base {disc0}, e-slack² {} vs {}",
                &four_a_sq * &bound_sq,
                &disc0 * &disc0
            ),
        });
        if excluded {
            // the system requires disc(e) ≥ 0, but disc(e) stays negative
            // for every admissible e; report the discriminant polynomial
            let mut disc_poly = MultiPoly::constant(disc0);
            for (k, g) in gamma.iter().enumerate() {
                let coeff = -rational_int(4) * &a * g;
                disc_poly = &disc_poly
                    + &MultiPoly::var(VarName::e(k + 1)).scale(&coeff);
            }
            return Some(ExclusionOutcome::Excluded {
                witness: disc_poly.cleared(),
                trace: trace.clone(),
            });
        }
        if gamma.iter().all(BigRational::is_zero) {
            // e-free quadratic with nonnegative discriminant: a real root
            // exists; return it when it is rational
            if let Some(sqrt) = rational_sqrt(&disc0) {
                let root = (-&b + sqrt) / (rational_int(2) * &a);
                solved.push((var, MultiPoly::constant(root), BigRational::one()));
                eqs[i].alive = false;
                return None;
            }
            return inconclusive(
                format!("quadratic in {var} has a real but irrational root"),
                trace,
            );
        }
        inconclusive(
            format!("discriminant sign in {var} undecided under the pairing bound"),
            trace,
        )
    }

    fn reconstruct_solution(
        &self,
        solved: Vec<(VarName, MultiPoly, BigRational)>,
        trace: Vec<TraceStep>,
    ) -> ExclusionOutcome {
        let mut values: BTreeMap<VarName, BigRational> = BTreeMap::new();
        for (var, num, den) in solved.into_iter().rev() {
            let evaluated = num.eval_partial(&values);
            let Some(constant) = evaluated.as_constant() else {
                return ExclusionOutcome::Inconclusive {
                    reason: format!("solution for {var} depends on the transcendental vector e"),
                    trace,
                };
            };
            values.insert(var, constant / den);
        }
        for &p in &self.params {
            values.entry(p).or_insert_with(BigRational::zero);
        }
        ExclusionOutcome::SolutionFound {
            params: self
                .params
                .iter()
                .map(|&p| (p.to_string(), values[&p].to_string()))
                .collect(),
            trace,
        }
    }
}

/// Exclusion certificate for a single candidate against a family.
pub fn exclusion_certificate(family: &FamilySpec, candidate: &RootCandidate) -> ExclusionOutcome {
    ExclusionEngine::new(family).certify(candidate)
}

/// Exact inverse of the Gram matrix over the rationals.
fn invert_gram(space: &LatticeSpace) -> Vec<Vec<BigRational>> {
    let n = space.rank();
    let mut a: Vec<Vec<BigRational>> = space
        .gram()
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("Gram matrix is nondegenerate");
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &pivot;
            inv[col][j] /= &pivot;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let s = &a[col][j] * &f;
                a[r][j] -= s;
                let s = &inv[col][j] * &f;
                inv[r][j] -= s;
            }
        }
    }
    inv
}

/// Exact square root of a nonnegative rational, when it exists.
fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let num = x.numer().sqrt();
    let den = x.denom().sqrt();
    if &(&num * &num) == x.numer() && &(&den * &den) == x.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_family;
    use crate::lattice::{enumerate_by_norm, IntVector};

    fn circle_engine() -> ExclusionEngine {
        ExclusionEngine::for_kind(FamilyKind::Circle, None)
    }

    #[test]
    fn inadmissible_candidate_gets_constant_witness() {
        // d1 = d2 = 0 and AB+CD+EF ≠ -1: the norm equation already fails
        let engine = circle_engine();
        let cand = RootCandidate::hyperbolic_only([1, 1, 0, 0, 0, 0]);
        match engine.certify(&cand) {
            ExclusionOutcome::Excluded { witness, trace } => {
                assert_eq!(witness.to_string(), "2");
                assert_eq!(trace[0].kind, "norm_check");
            }
            other => panic!("expected exclusion, got {other:?}"),
        }
    }

    #[test]
    fn circle_zero_c_branch_matches_derivation() {
        // candidate with C = 0, B = E = 0, n2 = 1, D arbitrary: after the
        // C = 0 split the f2 pairing leaves D + (d2,e), whose e-part is
        // nonzero because d2 ≠ 0
        let root = enumerate_by_norm(&LatticeSpace::minus_e8(), 2).unwrap()[0].clone();
        let cand = RootCandidate::new([0, 0, 0, 5, 0, 0], IntVector::zero(8), root);
        assert!(cand.is_admissible());
        let outcome = circle_engine().certify(&cand);
        match &outcome {
            ExclusionOutcome::Excluded { witness, trace } => {
                assert!(
                    trace
                        .iter()
                        .any(|s| s.kind == "case_split" && s.expr == "C" && s.value == "0"),
                    "trace should record the C = 0 split: {trace:?}"
                );
                assert!(
                    witness.to_string().contains('e'),
                    "e-part witness expected: {witness}"
                );
            }
            other => panic!("expected exclusion, got {other:?}"),
        }
    }

    #[test]
    fn certificates_are_deterministic() {
        let root = enumerate_by_norm(&LatticeSpace::minus_e8(), 2).unwrap()[3].clone();
        let cand = RootCandidate::new([1, 0, 0, 2, 1, -1], root, IntVector::zero(8));
        let engine = ExclusionEngine::for_kind(FamilyKind::TorusNpq, Some((2, 3)));
        let first = engine.certify(&cand);
        let second = engine.certify(&cand);
        assert_eq!(first, second);
        assert_eq!(first.trace(), second.trace());
    }

    #[test]
    fn npq_degenerate_leading_coefficient_is_logged() {
        // B - 2Cnq = 0 with C ≠ 0: the r-coefficient of the f3 pairing
        // vanishes and the engine must fall into the discriminant terminal
        let engine = ExclusionEngine::for_kind(FamilyKind::TorusNpq, Some((1, 1)));
        let cand = RootCandidate::hyperbolic_only([0, 2, 1, -1, 0, 0]);
        assert!(cand.is_admissible());
        let outcome = engine.certify(&cand);
        match &outcome {
            ExclusionOutcome::Excluded { trace, .. } => {
                assert!(
                    trace.iter().any(|s| s.kind == "discriminant"),
                    "expected a discriminant step: {trace:?}"
                );
            }
            other => panic!("expected exclusion, got {other:?}"),
        }
    }

    #[test]
    fn every_small_admissible_circle_candidate_is_excluded() {
        let engine = circle_engine();
        let shells = enumerate_by_norm(&LatticeSpace::minus_e8(), 2).unwrap();
        let mut checked = 0;
        for a in -1..=1i64 {
            for b in -1..=1i64 {
                for e in -1..=1i64 {
                    for f in -1..=1i64 {
                        for (d1, d2, n1, n2) in [
                            (IntVector::zero(8), IntVector::zero(8), 0, 0),
                            (shells[0].clone(), IntVector::zero(8), 1, 0),
                            (IntVector::zero(8), shells[10].clone(), 0, 1),
                        ] {
                            let cand = RootCandidate::new([a, b, 0, 0, e, f], d1, d2);
                            if cand.hyperbolic_product() != n1 + n2 - 1 {
                                continue;
                            }
                            checked += 1;
                            assert!(
                                engine.certify(&cand).is_excluded(),
                                "candidate {cand:?} not excluded"
                            );
                        }
                    }
                }
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn rational_sqrt_detects_squares() {
        assert_eq!(
            rational_sqrt(&BigRational::new(9.into(), 4.into())),
            Some(BigRational::new(3.into(), 2.into()))
        );
        assert_eq!(rational_sqrt(&rational_int(2)), None);
        assert_eq!(rational_sqrt(&rational_int(-1)), None);
    }
}
