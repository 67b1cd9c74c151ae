//! Period-domain membership for parametric triples `(f1, f2, f3)`.
//!
//! `f2 + i f3` spans the candidate period line and `f1` is the polarization
//! vector. Membership requires `(f2,f2) = (f3,f3)`, `(f2,f3) = 0` with the
//! common norm positive, and `f1` of positive constant norm orthogonal to
//! both. All identities are checked as exact polynomials in the parameters;
//! positivity is certified through the `|(e,e)| ≤ 1/2` normalization of the
//! transcendental vector e, never by evaluating e numerically.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exactring::{rational_int, MultiPoly, VarName};
use crate::lattice::{LatticeSpace, PolyVector};
use crate::report::CheckReport;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PeriodError {
    #[error("e-dependent part of the norm is not a rational multiple of the -E8 form: {0}")]
    NonStandardEPart(String),
}

/// A parametric point of the polarized period domain: three vectors over
/// the rank-22 space with polynomial coordinates.
#[derive(Debug, Clone)]
pub struct PeriodTriple {
    space: LatticeSpace,
    pub f1: PolyVector,
    pub f2: PolyVector,
    pub f3: PolyVector,
    params: BTreeSet<VarName>,
}

/// Decomposition `(v, v) = constant_part + λ · Q_e`, where `Q_e` is the
/// `-E8` form evaluated at the symbolic vector `(e1, …, e8)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormProfile {
    pub constant_part: MultiPoly,
    pub e_coefficient: BigRational,
}

/// The `-E8` form at symbolic `(e1..e8)`: every e-dependence of a family
/// norm must be a rational multiple of this.
pub fn q_e_form() -> &'static MultiPoly {
    static Q_E: OnceLock<MultiPoly> = OnceLock::new();
    Q_E.get_or_init(|| {
        let gram = LatticeSpace::minus_e8();
        let e = PolyVector((1..=8).map(|j| MultiPoly::var(VarName::e(j))).collect());
        gram.norm_poly(&e).expect("rank-8 vector over rank-8 space")
    })
}

fn is_e_var(v: VarName) -> bool {
    VarName::e_all().contains(&v)
}

/// Splits a polynomial into its e-free part and its e-dependent part.
pub fn split_e_part(p: &MultiPoly) -> (MultiPoly, MultiPoly) {
    let mut e_free = MultiPoly::zero();
    let mut e_part = MultiPoly::zero();
    for (mono, coeff) in p.terms() {
        let term = MultiPoly::monomial(mono.clone(), coeff.clone());
        if mono.vars().any(is_e_var) {
            e_part = &e_part + &term;
        } else {
            e_free = &e_free + &term;
        }
    }
    (e_free, e_part)
}

/// Decomposes `(v, v)` as `constant_part + λ·Q_e`; errors when the
/// e-dependence has any other shape.
pub fn norm_profile(space: &LatticeSpace, v: &PolyVector) -> Result<NormProfile, PeriodError> {
    let norm = space.norm_poly(v).expect("vector over its own space");
    let (e_free, e_part) = split_e_part(&norm);
    if e_part.is_zero() {
        return Ok(NormProfile {
            constant_part: e_free,
            e_coefficient: BigRational::zero(),
        });
    }
    let q_e = q_e_form();
    let lead = q_e.leading_monomial().expect("Q_e is nonzero");
    let lambda = e_part.coefficient(lead) / q_e.coefficient(lead);
    if &e_part - &q_e.scale(&lambda) != MultiPoly::zero() {
        return Err(PeriodError::NonStandardEPart(e_part.to_string()));
    }
    Ok(NormProfile {
        constant_part: e_free,
        e_coefficient: lambda,
    })
}

impl NormProfile {
    /// Reassembles `constant_part + λ·Q_e`.
    pub fn reassemble(&self) -> MultiPoly {
        &self.constant_part + &q_e_form().scale(&self.e_coefficient)
    }

    /// True when the profile is a constant `c` with `c - |λ|/2 > 0`, which
    /// certifies positivity for every admissible value of e.
    pub fn certifies_positive(&self) -> bool {
        let Some(c) = self.constant_part.as_constant() else {
            return false;
        };
        let slack = &c - self.e_coefficient.abs() / rational_int(2);
        slack.is_positive()
    }
}

impl PeriodTriple {
    pub fn new(
        space: LatticeSpace,
        f1: PolyVector,
        f2: PolyVector,
        f3: PolyVector,
        params: BTreeSet<VarName>,
    ) -> PeriodTriple {
        for f in [&f1, &f2, &f3] {
            assert_eq!(f.rank(), space.rank(), "component rank mismatch");
            for coord in &f.0 {
                debug_assert!(
                    coord
                        .vars_used()
                        .iter()
                        .all(|v| params.contains(v) || is_e_var(*v)),
                    "triple coordinate uses a variable outside params ∪ {{e}}"
                );
            }
        }
        PeriodTriple {
            space,
            f1,
            f2,
            f3,
            params,
        }
    }

    pub fn space(&self) -> &LatticeSpace {
        &self.space
    }

    pub fn params(&self) -> &BTreeSet<VarName> {
        &self.params
    }

    /// The complex-scalar freedom of the period line: replaces
    /// `f2 + i f3` by `(c + i d)(f2 + i f3)`.
    pub fn rotated(&self, c: &BigRational, d: &BigRational) -> PeriodTriple {
        let c_poly = MultiPoly::constant(c.clone());
        let d_poly = MultiPoly::constant(d.clone());
        let f2 = self.f2.scaled(&c_poly).sub(&self.f3.scaled(&d_poly));
        let f3 = self.f2.scaled(&d_poly).add(&self.f3.scaled(&c_poly));
        PeriodTriple {
            space: self.space.clone(),
            f1: self.f1.clone(),
            f2,
            f3,
            params: self.params.clone(),
        }
    }
}

fn identity_check(report: &mut CheckReport, name: &str, difference: &MultiPoly) {
    report.record(name, difference.is_zero(), difference.to_string());
}

/// Membership of `[f2 + i f3]` in the period domain: the two real
/// identities of `(σ, σ) = 0` plus certified positivity of the common norm.
pub fn check_omega(triple: &PeriodTriple) -> CheckReport {
    let mut report = CheckReport::new();
    let space = &triple.space;
    let n22 = space.norm_poly(&triple.f2).expect("rank checked");
    let n33 = space.norm_poly(&triple.f3).expect("rank checked");
    let n23 = space.inner(&triple.f2, &triple.f3).expect("rank checked");

    identity_check(&mut report, "sigma_norms_equal", &(&n22 - &n33));
    identity_check(&mut report, "sigma_pairing_zero", &n23);

    match norm_profile(space, &triple.f2) {
        Ok(profile) => {
            let detail = format!(
                "profile ({}, {})",
                profile.constant_part, profile.e_coefficient
            );
            if profile.certifies_positive() {
                report.pass_with_detail("sigma_norm_positive", detail);
            } else {
                report.fail("sigma_norm_positive", detail);
            }
        }
        Err(err) => report.fail("sigma_norm_positive", err.to_string()),
    }
    report
}

/// The polarization conditions on top of `check_omega`: `(f1, f1)` a
/// positive constant, `f1` orthogonal to both real components.
pub fn check_komega(triple: &PeriodTriple) -> CheckReport {
    let mut report = CheckReport::new();
    let space = &triple.space;

    match norm_profile(space, &triple.f1) {
        Ok(profile) => {
            let constant_positive = profile
                .constant_part
                .as_constant()
                .is_some_and(|c| c.is_positive());
            let ok = constant_positive && profile.e_coefficient.is_zero();
            let detail = format!(
                "profile ({}, {})",
                profile.constant_part, profile.e_coefficient
            );
            if ok {
                report.pass_with_detail("k_norm_positive_constant", detail);
            } else {
                report.fail("k_norm_positive_constant", detail);
            }
        }
        Err(err) => report.fail("k_norm_positive_constant", err.to_string()),
    }

    let p12 = space.inner(&triple.f1, &triple.f2).expect("rank checked");
    let p13 = space.inner(&triple.f1, &triple.f3).expect("rank checked");
    identity_check(&mut report, "k_orthogonal_to_re", &p12);
    identity_check(&mut report, "k_orthogonal_to_im", &p13);
    report
}

/// Both membership layers in order.
pub fn check_membership(triple: &PeriodTriple) -> CheckReport {
    let mut report = check_omega(triple);
    report.merge(check_komega(triple));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::IntVector;

    fn k3_with_basis(combo: &[(&str, i64)]) -> PolyVector {
        let k3 = LatticeSpace::k3();
        let mut v = IntVector::zero(22);
        for (label, coeff) in combo {
            v = v.add(&k3.basis_vector(label).unwrap().scaled(*coeff));
        }
        v.to_poly()
    }

    #[test]
    fn q_e_is_purely_quadratic_in_e() {
        let q_e = q_e_form();
        let e_vars: BTreeSet<_> = VarName::e_all().into_iter().collect();
        let split = q_e.coefficient_split(&e_vars);
        for (mono, _) in &split {
            assert_eq!(mono.total_degree(), 2, "monomial {mono}");
        }
        // diagonal terms carry the -2 of the negated Cartan matrix
        let e1sq = crate::exactring::Monomial::var(VarName::e(1)).pow(2);
        assert_eq!(q_e.coefficient(&e1sq), rational_int(-2));
    }

    #[test]
    fn integer_vector_profile_is_constant() {
        let k3 = LatticeSpace::k3();
        let v = k3_with_basis(&[("u", 2), ("v", 1)]);
        let profile = norm_profile(&k3, &v).unwrap();
        assert_eq!(profile.constant_part, MultiPoly::int(4));
        assert!(profile.e_coefficient.is_zero());
    }

    #[test]
    fn profile_rejects_stray_e_dependence() {
        // x + e1·(first -E8 basis vector) pairs e1 linearly: not a multiple
        // of the quadratic form Q_e
        let k3 = LatticeSpace::k3();
        let mut coords = vec![MultiPoly::zero(); 22];
        coords[k3.basis_index("x").unwrap()] = MultiPoly::one();
        coords[k3.basis_index("y").unwrap()] = MultiPoly::one();
        coords[k3.basis_index("e8a_1").unwrap()] = MultiPoly::var(VarName::e(1));
        coords[k3.basis_index("e8a_2").unwrap()] = MultiPoly::one();
        let v = PolyVector(coords);
        assert!(matches!(
            norm_profile(&k3, &v),
            Err(PeriodError::NonStandardEPart(_))
        ));
    }

    #[test]
    fn self_paired_imaginary_part_fails_omega() {
        // replacing f3 by f2 makes (f2, f3) = (f2, f2) ≠ 0
        let k3 = LatticeSpace::k3();
        let f1 = k3_with_basis(&[("u", 1), ("v", 1)]);
        let f2 = k3_with_basis(&[("x", 1), ("y", 2)]);
        let triple = PeriodTriple::new(k3, f1, f2.clone(), f2, BTreeSet::new());
        let report = check_omega(&triple);
        assert!(!report.all_passed());
        let failed: Vec<_> = report.failures().map(|f| f.check_name.clone()).collect();
        assert!(failed.contains(&"sigma_pairing_zero".to_string()));
    }

    #[test]
    fn zero_norm_polarization_fails_komega() {
        let k3 = LatticeSpace::k3();
        let f1 = k3_with_basis(&[("u", 1)]);
        let f2 = k3_with_basis(&[("x", 1), ("y", 2)]);
        let f3 = k3_with_basis(&[("z", 1), ("t", 2)]);
        let triple = PeriodTriple::new(k3, f1, f2, f3, BTreeSet::new());
        let report = check_komega(&triple);
        let failed: Vec<_> = report.failures().map(|f| f.check_name.clone()).collect();
        assert_eq!(failed, vec!["k_norm_positive_constant".to_string()]);
    }
}
