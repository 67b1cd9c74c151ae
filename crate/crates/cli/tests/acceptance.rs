//! Acceptance suite: one test per criterion, each printing a PASS line and
//! holding the stated time budget. Run with `--nocapture` to see the lines.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use k3check::affine::{classify_strongly_integral_torus, AffineMap, TorusClass};
use k3check::exactring::{parse_rational, rational_int, BigRational, MultiPoly, VarName};
use k3check::families::{
    build_family, check_equivariance, control_triple_non_k0, linear_variation, FamilyKind,
};
use k3check::lattice::{enumerate_by_norm, IntVector, LatticeSpace};
use k3check::period::{check_komega, check_omega, norm_profile, split_e_part};
use k3check::report::Report;
use k3check::rootcheck::exclusion::{ExclusionEngine, ExclusionOutcome};
use k3check::rootcheck::identities::verify_identity_bank;
use k3check::rootcheck::sweep::{sweep_family, SweepConfig};
use k3check::rootcheck::{match_paper_system, root_search_at_point, RootCandidate};

fn finish(number: u32, name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed <= budget,
        "criterion {number} exceeded its {budget:?} budget: {elapsed:?}"
    );
    println!("ACCEPTANCE {number} ({name}): PASS in {elapsed:.2?}");
}

#[test]
fn criterion_01_lattice_sanity() {
    let started = Instant::now();
    let k3 = LatticeSpace::k3();
    assert_eq!(k3.signature(), (3, 19, 0));
    assert_eq!(k3.determinant(), (-1).into());
    assert!(k3.is_even());
    assert!(k3.gram().iter().enumerate().all(|(i, row)| row[i] % 2 == 0));
    finish(1, "lattice sanity", started, Duration::from_secs(1));
}

/// Independent oracle for the E8 shell sizes: the coordinate model
/// `{x ∈ ℤ^8 ∪ (ℤ+1/2)^8 : Σx ∈ 2ℤ}` enumerated by backtracking over
/// doubled coordinates. Basis-free, so the counts transfer to the Cartan
/// presentation.
fn e8_coordinate_model_count(norm: i64) -> u64 {
    let budget = 4 * norm; // Σ y_i² for doubled coordinates y = 2x
    let mut count = 0u64;
    let mut y = [0i64; 8];
    fn rec(idx: usize, remaining: i64, y: &mut [i64; 8], count: &mut u64) {
        if idx == 8 {
            if remaining != 0 {
                return;
            }
            let parity = y[0].rem_euclid(2);
            if y.iter().any(|&c| c.rem_euclid(2) != parity) {
                return;
            }
            if y.iter().sum::<i64>() % 4 != 0 {
                return;
            }
            *count += 1;
            return;
        }
        let mut c = 0;
        while c * c <= remaining {
            for s in if c == 0 { vec![0] } else { vec![c, -c] } {
                y[idx] = s;
                rec(idx + 1, remaining - c * c, y, count);
            }
            c += 1;
        }
        y[idx] = 0;
    }
    rec(0, budget, &mut y, &mut count);
    count
}

#[test]
fn criterion_02_e8_enumeration() {
    let started = Instant::now();
    assert_eq!(e8_coordinate_model_count(2), 240);
    assert_eq!(e8_coordinate_model_count(4), 2160);
    let e8 = LatticeSpace::e8();
    for (norm, expected) in [(2i64, 240usize), (4, 2160)] {
        let shell = enumerate_by_norm(&e8, norm).unwrap();
        assert_eq!(shell.len(), expected);
        for v in &shell {
            assert_eq!(e8.inner_int(v, v).unwrap(), norm);
            assert!(shell.binary_search(&v.negated()).is_ok());
        }
        let mut dedup = shell.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), shell.len());
    }
    finish(2, "E8 shell counts vs oracle", started, Duration::from_secs(5));
}

#[test]
fn criterion_03_isometries() {
    let started = Instant::now();
    let k3 = LatticeSpace::k3();
    let mut validated = 0;
    for (kind, params) in [(FamilyKind::Circle, None), (FamilyKind::TorusStandard, None)] {
        let family = build_family(kind, params).unwrap();
        for g in &family.generators {
            assert!(k3.is_isometry_matrix(g.gamma.matrix()));
            validated += 1;
        }
    }
    for n in 1..=3 {
        for p in 1..=3 {
            for q in 1..=3 {
                let family = build_family(FamilyKind::TorusNpq, Some((n, p, q))).unwrap();
                for g in &family.generators {
                    assert!(k3.is_isometry_matrix(g.gamma.matrix()));
                    validated += 1;
                }
            }
        }
    }
    assert_eq!(validated, 3 + 54);
    finish(3, "generator isometries", started, Duration::from_secs(1));
}

#[test]
fn criterion_04_equivariance() {
    let started = Instant::now();
    for (kind, params) in [
        (FamilyKind::Circle, None),
        (FamilyKind::TorusStandard, None),
        (FamilyKind::TorusNpq, Some((1, 1, 1))),
        (FamilyKind::TorusNpq, Some((2, 1, 3))),
        (FamilyKind::TorusNpq, Some((2, 3, 5))),
    ] {
        let family = build_family(kind, params).unwrap();
        for idx in 0..family.generators.len() {
            let report = check_equivariance(&family, idx);
            assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
            for result in &report.results {
                if let Some(detail) = &result.detail {
                    assert_eq!(detail, "mode exact");
                }
            }
        }
        // the declared parameter shifts are the expected translations/shear
        match (kind, params) {
            (FamilyKind::Circle, _) => {
                assert_eq!(family.generators[0].action, AffineMap::translation_by(&[1]));
            }
            (FamilyKind::TorusStandard, _) => {
                assert_eq!(family.generators[0].action, AffineMap::translation_by(&[1, 0]));
                assert_eq!(family.generators[1].action, AffineMap::translation_by(&[0, 1]));
            }
            (FamilyKind::TorusNpq, Some((n, p, q))) => {
                assert_eq!(family.generators[0].action, AffineMap::translation_by(&[p, 0]));
                let shear = AffineMap::new(
                    vec![vec![1, n], vec![0, 1]],
                    vec![rational_int(0), rational_int(q)],
                )
                .unwrap();
                assert_eq!(family.generators[1].action, shear);
            }
            _ => unreachable!(),
        }
    }
    finish(4, "equivariance, exact mode", started, Duration::from_secs(5));
}

#[test]
fn criterion_05_period_membership() {
    let started = Instant::now();
    let k3 = LatticeSpace::k3();
    for (kind, params, f2_constant) in [
        (FamilyKind::Circle, None, 4i64),
        (FamilyKind::TorusStandard, None, 4),
        (FamilyKind::TorusNpq, Some((1, 1, 1)), 4),
        (FamilyKind::TorusNpq, Some((2, 1, 3)), 36),
    ] {
        let family = build_family(kind, params).unwrap();
        assert!(check_omega(&family.triple).all_passed());
        assert!(check_komega(&family.triple).all_passed());
        let p2 = norm_profile(&k3, &family.triple.f2).unwrap();
        assert_eq!(p2.constant_part, MultiPoly::int(f2_constant));
        assert_eq!(p2.e_coefficient, rational_int(1));
        let p1 = norm_profile(&k3, &family.triple.f1).unwrap();
        assert_eq!(p1.constant_part, MultiPoly::int(4));
        assert_eq!(p1.e_coefficient, rational_int(0));
    }
    finish(5, "period membership and norm profiles", started, Duration::from_secs(5));
}

#[test]
fn criterion_06_linear_variation() {
    let started = Instant::now();
    let k3 = LatticeSpace::k3();
    let base = {
        let mut v = IntVector::zero(22);
        v.0[k3.basis_index("u").unwrap()] = 2;
        v.0[k3.basis_index("v").unwrap()] = 1;
        v
    };
    let y = k3.basis_vector("y").unwrap();
    let t = k3.basis_vector("t").unwrap();
    for (kind, params, expected) in [
        (FamilyKind::Circle, None, vec![(VarName::S, y.clone())]),
        (
            FamilyKind::TorusStandard,
            None,
            vec![(VarName::S, y.clone()), (VarName::R, t.clone())],
        ),
        (
            FamilyKind::TorusNpq,
            Some((3, 2, 2)),
            vec![(VarName::S, y.clone()), (VarName::R, t.clone())],
        ),
    ] {
        let family = build_family(kind, params).unwrap();
        let lv = linear_variation(&family).unwrap();
        assert_eq!(lv.base, base);
        assert_eq!(lv.coefficients, expected);
        for (_, vector) in &lv.coefficients {
            assert_eq!(vector.content(), 1, "coefficient vectors are primitive");
        }
    }
    finish(6, "linear variation", started, Duration::from_secs(1));
}

#[test]
fn criterion_07_system_match() {
    let started = Instant::now();
    for kind in [
        FamilyKind::Circle,
        FamilyKind::TorusStandard,
        FamilyKind::TorusNpq,
    ] {
        let report = match_paper_system(kind);
        assert!(
            report.all_passed(),
            "{kind:?}: {:?}",
            report.failures().collect::<Vec<_>>()
        );
    }
    finish(7, "orthogonality systems match", started, Duration::from_secs(5));
}

#[test]
fn criterion_08_identity_bank() {
    let started = Instant::now();
    let report = verify_identity_bank();
    assert!(
        report.all_passed(),
        "{:?}",
        report.failures().collect::<Vec<_>>()
    );
    assert!(report.results.len() >= 12);
    finish(8, "identity bank", started, Duration::from_secs(5));
}

#[test]
fn criterion_09_exclusion_sweep() {
    let started = Instant::now();
    let config = SweepConfig {
        box_bound: 3,
        norm_bound: 2,
    };
    for (kind, params) in [
        (FamilyKind::Circle, None),
        (FamilyKind::TorusStandard, None),
        (FamilyKind::TorusNpq, Some((1, 1, 1))),
        (FamilyKind::TorusNpq, Some((2, 1, 3))),
    ] {
        let family = build_family(kind, params).unwrap();
        let report = sweep_family(&family, config);
        for class in &report.classes {
            assert_eq!(
                class.solution_found, 0,
                "{}: solution found in class {class:?}",
                report.family
            );
            assert_eq!(
                class.inconclusive, 0,
                "{}: inconclusive class {class:?}",
                report.family
            );
            assert_eq!(class.excluded, class.hyp_count);
        }
        assert!(report.all_excluded());

        // witness structure on a sample: cleared witnesses are integral and
        // either carry an e-monomial of degree ≥ 1 or are nonzero constants
        let engine = ExclusionEngine::new(&family);
        let shells2 = enumerate_by_norm(&LatticeSpace::minus_e8(), 2).unwrap();
        let e_vars: std::collections::BTreeSet<VarName> =
            VarName::e_all().into_iter().collect();
        let mut sampled = 0;
        'outer: for a in -1..=1i64 {
            for b in -2..=2i64 {
                for d in -2..=2i64 {
                    for (d1, d2) in [
                        (IntVector::zero(8), IntVector::zero(8)),
                        (shells2[5].clone(), IntVector::zero(8)),
                        (shells2[5].clone(), shells2[17].clone()),
                    ] {
                        let cand = RootCandidate::new([a, b, 1, d, 0, 1], d1, d2);
                        if !cand.is_admissible() {
                            continue;
                        }
                        match engine.certify(&cand) {
                            ExclusionOutcome::Excluded { witness, .. } => {
                                assert!(!witness.is_zero());
                                let has_e = witness.degree_in_set(&e_vars) >= 1;
                                assert!(
                                    has_e || witness.is_constant(),
                                    "witness shape: {witness}"
                                );
                                assert!(witness.denominator_lcm() == 1.into());
                            }
                            other => panic!("sampled candidate not excluded: {other:?}"),
                        }
                        sampled += 1;
                        if sampled >= 60 {
                            break 'outer;
                        }
                    }
                }
            }
        }
        assert!(sampled > 0);
    }
    finish(9, "exclusion sweep, all excluded", started, Duration::from_secs(600));
}

#[test]
fn criterion_10_point_searches() {
    let started = Instant::now();
    let grid: Vec<BigRational> = ["0", "1/3", "1/2", "2/3", "5/7"]
        .iter()
        .map(|t| parse_rational(t).unwrap())
        .collect();
    for (kind, params) in [
        (FamilyKind::Circle, None),
        (FamilyKind::TorusStandard, None),
        (FamilyKind::TorusNpq, Some((1, 1, 1))),
        (FamilyKind::TorusNpq, Some((2, 1, 3))),
    ] {
        let family = build_family(kind, params).unwrap();
        if kind == FamilyKind::Circle {
            for s in &grid {
                let values = BTreeMap::from([(VarName::S, s.clone())]);
                let hits = root_search_at_point(&family.triple, &values, 5, 2);
                assert!(hits.is_empty(), "{}: hits at s={s}", family.descriptor());
            }
        } else {
            for s in &grid {
                for r in &grid {
                    let values =
                        BTreeMap::from([(VarName::S, s.clone()), (VarName::R, r.clone())]);
                    let hits = root_search_at_point(&family.triple, &values, 5, 2);
                    assert!(
                        hits.is_empty(),
                        "{}: hits at (s,r)=({s},{r})",
                        family.descriptor()
                    );
                }
            }
        }
    }
    let control_hits = root_search_at_point(&control_triple_non_k0(), &BTreeMap::new(), 5, 2);
    assert_eq!(
        control_hits,
        vec![
            RootCandidate::hyperbolic_only([-1, 1, 0, 0, 0, 0]),
            RootCandidate::hyperbolic_only([1, -1, 0, 0, 0, 0]),
        ]
    );
    finish(10, "grid searches empty, control exact", started, Duration::from_secs(60));
}

#[test]
fn criterion_11_affine_layer() {
    let started = Instant::now();
    let std_family = build_family(FamilyKind::TorusStandard, None).unwrap();
    assert_eq!(
        classify_strongly_integral_torus(&std_family.parameter_actions()).unwrap(),
        TorusClass::Standard
    );
    for (n, p, q) in [(1, 1, 1), (2, 1, 3), (3, 2, 1)] {
        let family = build_family(FamilyKind::TorusNpq, Some((n, p, q))).unwrap();
        assert_eq!(
            classify_strongly_integral_torus(&family.parameter_actions()).unwrap(),
            TorusClass::NonStandard { n, p, q }
        );
        for action in family.parameter_actions() {
            assert!(action.is_strongly_integral());
        }
    }
    let circle = build_family(FamilyKind::Circle, None).unwrap();
    assert!(circle.generators[0].action.is_strongly_integral());
    let half_shift = AffineMap::new(
        vec![vec![1, 0], vec![0, 1]],
        vec![BigRational::new(1.into(), 2.into()), rational_int(0)],
    )
    .unwrap();
    assert!(!half_shift.is_strongly_integral());
    finish(11, "affine classification", started, Duration::from_secs(1));
}

#[test]
fn criterion_12_deterministic_reports() {
    let started = Instant::now();
    let binary = env!("CARGO_BIN_EXE_k3check");
    let run = |jobs: &str| {
        let output = Command::new(binary)
            .args([
                "verify", "--family", "circle", "--format", "json", "--jobs", jobs,
            ])
            .output()
            .expect("binary runs");
        assert!(output.status.success(), "verify failed: {output:?}");
        output.stdout
    };
    let first = run("1");
    let second = run("2");
    assert_eq!(first, second, "reports differ across --jobs");
    let report: Report = serde_json::from_slice(&first).expect("valid report JSON");
    assert_eq!(serde_json::to_vec_pretty(&report).unwrap().len() + 1, first.len());
    finish(12, "byte-identical reports across --jobs", started, Duration::from_secs(300));
}

/// The split-e helper underpins the positivity certificates; pin its
/// behavior on a family norm.
#[test]
fn norm_split_sanity() {
    let family = build_family(FamilyKind::TorusNpq, Some((2, 1, 3))).unwrap();
    let k3 = LatticeSpace::k3();
    let norm = k3.norm_poly(&family.triple.f2).unwrap();
    let (e_free, e_part) = split_e_part(&norm);
    assert_eq!(e_free, MultiPoly::int(36));
    assert!(!e_part.is_zero());
}
