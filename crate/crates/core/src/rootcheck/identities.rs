//! Bank of rewriting identities used by the exclusion derivations.
//!
//! Each entry restates one algebraic step — a substitution reduction, a
//! regrouping, or a combination with the norm identity — as an exact
//! polynomial identity over ℤ[A..F, n, q, s, r, d-coordinates, e]. The bank
//! recomputes both sides with the polynomial machinery and reports the
//! difference, which must be identically zero.

use std::collections::BTreeMap;

use crate::exactring::{MultiPoly, VarName};
use crate::families::FamilyKind;
use crate::period::split_e_part;
use crate::report::CheckReport;

use super::{d_e_pairing, expected_system, n_poly};

fn v(x: VarName) -> MultiPoly {
    MultiPoly::var(x)
}

fn int(k: i64) -> MultiPoly {
    MultiPoly::int(k)
}

fn prod(factors: &[&MultiPoly]) -> MultiPoly {
    factors
        .iter()
        .fold(MultiPoly::one(), |acc, f| &acc * *f)
}

fn sum(terms: &[&MultiPoly]) -> MultiPoly {
    terms
        .iter()
        .fold(MultiPoly::zero(), |acc, t| &acc + *t)
}

fn zero_d1_bindings(map: &mut BTreeMap<VarName, MultiPoly>) {
    for j in 1..=8 {
        map.insert(VarName::d1(j), MultiPoly::zero());
    }
}

fn zero_d2_bindings(map: &mut BTreeMap<VarName, MultiPoly>) {
    for j in 1..=8 {
        map.insert(VarName::d2(j), MultiPoly::zero());
    }
}

/// `(name, lhs, rhs)` triples; the check is `lhs - rhs = 0`.
fn identity_entries() -> Vec<(&'static str, MultiPoly, MultiPoly)> {
    #[allow(non_snake_case)]
    let (A, B, C, D, E, F) = (VarName::A, VarName::B, VarName::C, VarName::D, VarName::E, VarName::F);
    #[allow(non_snake_case)]
    let (N, Q, R, S) = (VarName::N, VarName::Q, VarName::R, VarName::S);
    let circle = expected_system(FamilyKind::Circle);
    let standard = expected_system(FamilyKind::TorusStandard);
    let npq = expected_system(FamilyKind::TorusNpq);
    let eq1 = circle.norm_equation.clone();
    let d1e = d_e_pairing(1);
    let d2e = d_e_pairing(2);
    let n1 = n_poly(1);
    let n2 = n_poly(2);

    let mut entries = Vec::new();

    // --- circle ---------------------------------------------------------
    // solving the k-pairing for s and substituting into the f2 pairing
    // (after clearing the denominator C):
    //   AB + CD + 2B² + 2C² + C(d2,e)
    let circle_eq2_coeffs = circle.equations[0].coefficients_in(S);
    let circle_s_num = -&circle_eq2_coeffs[0];
    let circle_s_den = circle_eq2_coeffs[1].clone();
    let red3 = sum(&[
        &prod(&[&v(A), &v(B)]),
        &prod(&[&v(C), &v(D)]),
        &prod(&[&int(2), &v(B), &v(B)]),
        &prod(&[&int(2), &v(C), &v(C)]),
        &prod(&[&v(C), &d2e]),
    ]);
    entries.push((
        "circle_substitution_reduction",
        circle.equations[1].pseudo_substitute(S, &circle_s_num, &circle_s_den),
        red3.clone(),
    ));

    // combining with the norm identity in the case d1 = 0, F = -2E:
    //   2B² + 2C² + 2E² + C(d2,e) + n2 - 1
    let mut case_circle = BTreeMap::new();
    case_circle.insert(F, prod(&[&int(-2), &v(E)]));
    zero_d1_bindings(&mut case_circle);
    entries.push((
        "circle_case_combination",
        (&red3 - &eq1).substitute(&case_circle),
        sum(&[
            &prod(&[&int(2), &v(B), &v(B)]),
            &prod(&[&int(2), &v(C), &v(C)]),
            &prod(&[&int(2), &v(E), &v(E)]),
            &prod(&[&v(C), &d2e]),
            &n2,
            &int(-1),
        ]),
    ));

    // norm identity in the case C = 0, A = -2B, F = -2E, d1 = 0:
    //   1 - 2B² - 2E² - n2
    let mut case_c0 = BTreeMap::new();
    case_c0.insert(A, prod(&[&int(-2), &v(B)]));
    case_c0.insert(C, MultiPoly::zero());
    case_c0.insert(F, prod(&[&int(-2), &v(E)]));
    zero_d1_bindings(&mut case_c0);
    entries.push((
        "circle_c0_norm_combination",
        eq1.substitute(&case_c0),
        sum(&[
            &int(1),
            &prod(&[&int(-2), &v(B), &v(B)]),
            &prod(&[&int(-2), &v(E), &v(E)]),
            &(-&n2),
        ]),
    ));

    // --- standard torus --------------------------------------------------
    // solving the f2 pairing for s and the f3 pairing for r, substituting
    // into the k pairing: B·(2B² + AB + CD + 2C² + EF + 2E² + C(d2,e)
    // + E(d1,e))
    let std_eq3_coeffs = standard.equations[1].coefficients_in(S);
    let std_eq4_coeffs = standard.equations[2].coefficients_in(R);
    let r_std = sum(&[
        &prod(&[&int(2), &v(B), &v(B)]),
        &prod(&[&v(A), &v(B)]),
        &prod(&[&v(C), &v(D)]),
        &prod(&[&int(2), &v(C), &v(C)]),
        &prod(&[&v(E), &v(F)]),
        &prod(&[&int(2), &v(E), &v(E)]),
        &prod(&[&v(C), &d2e]),
        &prod(&[&v(E), &d1e]),
    ]);
    entries.push((
        "standard_substitution_reduction",
        standard.equations[0]
            .pseudo_substitute(S, &(-&std_eq3_coeffs[0]), &std_eq3_coeffs[1])
            .pseudo_substitute(R, &(-&std_eq4_coeffs[0]), &std_eq4_coeffs[1]),
        &v(B) * &r_std,
    ));

    // combining with the norm identity:
    //   2B² + 2C² + 2E² + C(d2,e) + E(d1,e) + n1 + n2 - 1
    entries.push((
        "standard_case_combination",
        &r_std - &eq1,
        sum(&[
            &prod(&[&int(2), &v(B), &v(B)]),
            &prod(&[&int(2), &v(C), &v(C)]),
            &prod(&[&int(2), &v(E), &v(E)]),
            &prod(&[&v(C), &d2e]),
            &prod(&[&v(E), &d1e]),
            &n1,
            &n2,
            &int(-1),
        ]),
    ));

    // norm identity in the case B = 0, D = -2C, F = -2E, d = 0:
    //   1 - 2C² - 2E²
    let mut case_b0 = BTreeMap::new();
    case_b0.insert(B, MultiPoly::zero());
    case_b0.insert(D, prod(&[&int(-2), &v(C)]));
    case_b0.insert(F, prod(&[&int(-2), &v(E)]));
    zero_d1_bindings(&mut case_b0);
    zero_d2_bindings(&mut case_b0);
    entries.push((
        "standard_b0_norm_combination",
        eq1.substitute(&case_b0),
        sum(&[
            &int(1),
            &prod(&[&int(-2), &v(C), &v(C)]),
            &prod(&[&int(-2), &v(E), &v(E)]),
        ]),
    ));

    // --- (n, p, q) torus --------------------------------------------------
    let b_minus_2cnq = &v(B) - &prod(&[&int(2), &v(C), &v(N), &v(Q)]);
    let x0 = &v(F) + &prod(&[&int(2), &v(E), &v(Q), &v(Q)]);
    let x_full = &x0 + &d1e;

    // the "second line" regrouping:
    //   BCn·X² - CFn·(B-2Cnq)·X + BEq·(B-2Cnq)·X
    //     = EFq·(B-2Cnq)² + 2q·(BEq + CFn)²
    let second_line_lhs = sum(&[
        &prod(&[&v(B), &v(C), &v(N), &x0, &x0]),
        &(-&prod(&[&v(C), &v(F), &v(N), &b_minus_2cnq, &x0])),
        &prod(&[&v(B), &v(E), &v(Q), &b_minus_2cnq, &x0]),
    ]);
    let beq_cfn = &prod(&[&v(B), &v(E), &v(Q)]) + &prod(&[&v(C), &v(F), &v(N)]);
    let second_line_rhs = sum(&[
        &prod(&[&v(E), &v(F), &v(Q), &b_minus_2cnq, &b_minus_2cnq]),
        &prod(&[&int(2), &v(Q), &beq_cfn, &beq_cfn]),
    ]);
    entries.push((
        "npq_second_line_rewrite",
        second_line_lhs.clone(),
        second_line_rhs.clone(),
    ));

    // degenerate q = 0 instance: both sides vanish termwise
    let mut q_zero = BTreeMap::new();
    q_zero.insert(Q, MultiPoly::zero());
    entries.push((
        "npq_second_line_q0_lhs",
        second_line_lhs.substitute(&q_zero),
        MultiPoly::zero(),
    ));
    entries.push((
        "npq_second_line_q0_rhs",
        second_line_rhs.substitute(&q_zero),
        MultiPoly::zero(),
    ));

    // case B = 2Cnq, F = -2Eq²: substituting s from the k pairing into the
    // f2 pairing yields (times C) the quadratic
    //   2Cn²q·r² - 2Fn·r + 2Anq² + C(8n²q³+2q) + Dq + (d2,e)
    let npq_eq2_coeffs = npq.equations[0].coefficients_in(S);
    let sub3 = npq.equations[1].pseudo_substitute(S, &(-&npq_eq2_coeffs[0]), &npq_eq2_coeffs[1]);
    let mut case_b2cnq = BTreeMap::new();
    case_b2cnq.insert(B, prod(&[&int(2), &v(C), &v(N), &v(Q)]));
    case_b2cnq.insert(F, -&prod(&[&int(2), &v(E), &v(Q), &v(Q)]));
    let quad = sum(&[
        &prod(&[&int(2), &v(C), &v(N), &v(N), &v(Q), &v(R), &v(R)]),
        &(-&prod(&[&int(2), &v(F), &v(N), &v(R)])),
        &prod(&[&int(2), &v(A), &v(N), &v(Q), &v(Q)]),
        &prod(&[
            &v(C),
            &(&prod(&[&int(8), &v(N), &v(N), &v(Q), &v(Q), &v(Q)]) + &prod(&[&int(2), &v(Q)])),
        ]),
        &prod(&[&v(D), &v(Q)]),
        &d2e,
    ]);
    let mut f_only = BTreeMap::new();
    f_only.insert(F, -&prod(&[&int(2), &v(E), &v(Q), &v(Q)]));
    entries.push((
        "npq_case_quadratic_in_r",
        sub3.substitute(&case_b2cnq),
        (&v(C) * &quad).substitute(&f_only),
    ));

    // the f3 pairing in the case B = 2Cnq loses its r term entirely
    entries.push((
        "npq_case_f3_reduction",
        npq.equations[2].substitute(&{
            let mut m = BTreeMap::new();
            m.insert(B, prod(&[&int(2), &v(C), &v(N), &v(Q)]));
            m
        }),
        &x0 + &d1e,
    ));

    // case B = 0, F ≠ 0: equating the two expressions for r
    entries.push((
        "npq_cross_multiplication",
        sum(&[
            &prod(&[
                &int(2),
                &v(C),
                &v(N),
                &v(Q),
                &sum(&[&prod(&[&v(D), &v(Q)]), &prod(&[&int(2), &v(C), &v(Q)]), &d2e]),
            ]),
            &prod(&[&v(F), &v(N), &x_full]),
        ]),
        sum(&[
            &prod(&[&int(2), &v(C), &v(D), &v(N), &v(Q), &v(Q)]),
            &prod(&[&int(4), &v(C), &v(C), &v(N), &v(Q), &v(Q)]),
            &prod(&[&int(2), &v(C), &v(N), &v(Q), &d2e]),
            &prod(&[&v(F), &v(F), &v(N)]),
            &prod(&[&int(2), &v(E), &v(F), &v(N), &v(Q), &v(Q)]),
            &prod(&[&v(F), &v(N), &d1e]),
        ]),
    ));

    // its e-free part combined with the norm identity at B = 0:
    //   4C²nq² + F²n - 2nq²(1 - n1 - n2)
    let eq1_b0 = eq1.substitute(&{
        let mut m = BTreeMap::new();
        m.insert(B, MultiPoly::zero());
        m
    });
    entries.push((
        "npq_b0_combination",
        &sum(&[
            &prod(&[&int(2), &v(C), &v(D), &v(N), &v(Q), &v(Q)]),
            &prod(&[&int(4), &v(C), &v(C), &v(N), &v(Q), &v(Q)]),
            &prod(&[&v(F), &v(F), &v(N)]),
            &prod(&[&int(2), &v(E), &v(F), &v(N), &v(Q), &v(Q)]),
        ]) - &prod(&[&int(2), &v(N), &v(Q), &v(Q), &eq1_b0]),
        sum(&[
            &prod(&[&int(4), &v(C), &v(C), &v(N), &v(Q), &v(Q)]),
            &prod(&[&v(F), &v(F), &v(N)]),
            &prod(&[&int(-2), &v(N), &v(Q), &v(Q)]),
            &prod(&[&int(2), &v(N), &v(Q), &v(Q), &(&n1 + &n2)]),
        ]),
    ));

    // norm identity in the case B = C = 0, F = -2Eq², d1 = 0:
    //   1 - 2E²q² - n2
    let mut case_bc0 = BTreeMap::new();
    case_bc0.insert(B, MultiPoly::zero());
    case_bc0.insert(C, MultiPoly::zero());
    case_bc0.insert(F, -&prod(&[&int(2), &v(E), &v(Q), &v(Q)]));
    zero_d1_bindings(&mut case_bc0);
    entries.push((
        "npq_c0_norm_combination",
        eq1.substitute(&case_bc0),
        sum(&[
            &int(1),
            &prod(&[&int(-2), &v(E), &v(E), &v(Q), &v(Q)]),
            &(-&n2),
        ]),
    ));

    // case B ≠ 0, B - 2Cnq ≠ 0: r from the f3 pairing into the f2 pairing
    // gives the numerator of s
    let base3 = sum(&[
        &prod(&[&v(D), &v(Q)]),
        &prod(&[&v(B), &v(N), &v(R), &v(R)]),
        &(-&prod(&[&v(F), &v(N), &v(R)])),
        &prod(&[&int(2), &v(C), &v(Q)]),
        &d2e,
    ]);
    let s_num = sum(&[
        &prod(&[
            &b_minus_2cnq,
            &b_minus_2cnq,
            &sum(&[&prod(&[&v(D), &v(Q)]), &prod(&[&int(2), &v(C), &v(Q)]), &d2e]),
        ]),
        &prod(&[&v(B), &v(N), &x_full, &x_full]),
        &(-&prod(&[&v(F), &v(N), &b_minus_2cnq, &x_full])),
    ]);
    entries.push((
        "npq_s_numerator",
        base3.pseudo_substitute(R, &x_full, &b_minus_2cnq),
        s_num.clone(),
    ));

    // full substitution into the k pairing, e-free part:
    //   (B-2Cnq) · [2B²q(B-2Cnq)² + ABq(B-2Cnq)²
    //     + C((B-2Cnq)²(2Cq+Dq) + Bn·X0² - Fn(B-2Cnq)·X0)
    //     + BEq(B-2Cnq)·X0]
    let den_s = prod(&[&v(B), &v(Q), &b_minus_2cnq, &b_minus_2cnq]);
    let p_after_s = npq.equations[0].pseudo_substitute(S, &s_num, &den_s);
    let p_full = p_after_s.pseudo_substitute(R, &x_full, &b_minus_2cnq);
    let display = sum(&[
        &prod(&[&int(2), &v(B), &v(B), &v(Q), &b_minus_2cnq, &b_minus_2cnq]),
        &prod(&[&v(A), &v(B), &v(Q), &b_minus_2cnq, &b_minus_2cnq]),
        &prod(&[
            &v(C),
            &sum(&[
                &prod(&[
                    &b_minus_2cnq,
                    &b_minus_2cnq,
                    &(&prod(&[&int(2), &v(C), &v(Q)]) + &prod(&[&v(D), &v(Q)])),
                ]),
                &prod(&[&v(B), &v(N), &x0, &x0]),
                &(-&prod(&[&v(F), &v(N), &b_minus_2cnq, &x0])),
            ]),
        ]),
        &prod(&[&v(B), &v(E), &v(Q), &b_minus_2cnq, &x0]),
    ]);
    entries.push((
        "npq_full_substitution_e_free",
        split_e_part(&p_full).0,
        &b_minus_2cnq * &display,
    ));

    // regrouping the display into norm-identity shape
    entries.push((
        "npq_regrouping",
        display.clone(),
        sum(&[
            &prod(&[
                &v(Q),
                &b_minus_2cnq,
                &b_minus_2cnq,
                &sum(&[
                    &prod(&[&int(2), &v(B), &v(B)]),
                    &prod(&[&int(2), &v(C), &v(C)]),
                    &prod(&[&v(A), &v(B)]),
                    &prod(&[&v(C), &v(D)]),
                ]),
            ]),
            &second_line_lhs,
        ]),
    ));

    // the final combination with the norm identity:
    //   q(B-2Cnq)²(2B²+2C²+AB+CD+EF) + 2q(BEq+CFn)² - q(B-2Cnq)²·eq1
    //     = q·[2((B-2Cnq)²(B²+C²) + (BEq+CFn)²) - (B-2Cnq)²(1-n1-n2)]
    let sq = prod(&[&b_minus_2cnq, &b_minus_2cnq]);
    entries.push((
        "npq_final_combination",
        sum(&[
            &prod(&[
                &v(Q),
                &sq,
                &sum(&[
                    &prod(&[&int(2), &v(B), &v(B)]),
                    &prod(&[&int(2), &v(C), &v(C)]),
                    &prod(&[&v(A), &v(B)]),
                    &prod(&[&v(C), &v(D)]),
                    &prod(&[&v(E), &v(F)]),
                ]),
            ]),
            &prod(&[&int(2), &v(Q), &beq_cfn, &beq_cfn]),
            &(-&prod(&[&v(Q), &sq, &eq1])),
        ]),
        prod(&[
            &v(Q),
            &sum(&[
                &prod(&[
                    &int(2),
                    &sum(&[
                        &prod(&[&sq, &(&prod(&[&v(B), &v(B)]) + &prod(&[&v(C), &v(C)]))]),
                        &prod(&[&beq_cfn, &beq_cfn]),
                    ]),
                ]),
                &(-&prod(&[&sq, &(&(&int(1) - &n1) - &n2)])),
            ]),
        ]),
    ));

    entries
}

/// Runs every identity in the bank; a failing entry carries the nonzero
/// difference polynomial as its witness.
pub fn verify_identity_bank() -> CheckReport {
    let mut report = CheckReport::new();
    for (name, lhs, rhs) in identity_entries() {
        let diff = &lhs - &rhs;
        report.record(name, diff.is_zero(), diff.to_string());
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_identity_holds() {
        let report = verify_identity_bank();
        assert!(
            report.all_passed(),
            "failed identities: {:?}",
            report.failures().collect::<Vec<_>>()
        );
        assert!(report.results.len() >= 12);
    }

    #[test]
    fn a_perturbed_identity_fails() {
        // sanity: the harness actually detects a wrong identity
        let (name, lhs, rhs) = identity_entries().swap_remove(0);
        let broken = &rhs + &MultiPoly::one();
        assert!(!(&lhs - &broken).is_zero(), "{name} insensitive to change");
    }
}
