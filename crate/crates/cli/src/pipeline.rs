//! The verification pipeline: every check suite for one family instance,
//! assembled into an ordered, deterministic report.

use std::collections::BTreeMap;

use k3check::affine::{classify_strongly_integral_torus, TorusClass};
use k3check::exactring::{BigRational, VarName};
use k3check::families::{
    build_family, check_equivariance, linear_variation, verify_generator_relations, FamilyKind,
    FamilySpec,
};
use k3check::lattice::LatticeSpace;
use k3check::period::{check_komega, check_omega, norm_profile};
use k3check::report::{CheckReport, CheckResult};
use k3check::rootcheck::identities::verify_identity_bank;
use k3check::rootcheck::sweep::{sweep_family, SweepConfig};
use k3check::rootcheck::{match_paper_system, root_search_family};

/// Sampling and bound settings for one verification run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Exact rational samples for the parameter `s` (`p/q` literals).
    pub s_samples: Vec<BigRational>,
    /// Samples for `r`; ignored by the circle family.
    pub r_samples: Vec<BigRational>,
    /// Box bound for the point searches.
    pub bound: i64,
    /// Bound on `n1`, `n2` everywhere.
    pub norm_bound: i64,
    /// Box bound for the exclusion sweep.
    pub sweep_bound: i64,
    /// Skip the exclusion sweep (point searches still run).
    pub skip_sweep: bool,
}

/// Mixed denominators on purpose: they exercise the denominator-clearing
/// paths of the exact searches.
pub fn default_grid() -> Vec<BigRational> {
    ["0", "1/3", "1/2", "2/3", "5/7"]
        .iter()
        .map(|t| k3check::exactring::parse_rational(t).expect("literal grid"))
        .collect()
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            s_samples: default_grid(),
            r_samples: default_grid(),
            bound: 5,
            norm_bound: 2,
            sweep_bound: 3,
            skip_sweep: false,
        }
    }
}

fn lattice_sanity() -> CheckReport {
    let mut report = CheckReport::new();
    let k3 = LatticeSpace::k3();
    let signature = k3.signature();
    report.record(
        "lattice_signature",
        signature == (3, 19, 0),
        format!("{signature:?}"),
    );
    let det = k3.determinant();
    report.record("lattice_determinant", det == (-1).into(), det.to_string());
    report.record("lattice_even", k3.is_even(), "odd diagonal entry");
    report.pass_with_detail("lattice_basis", k3.labels().join(" "));
    report
}

fn isometry_checks(family: &FamilySpec) -> CheckReport {
    let mut report = CheckReport::new();
    let space = family.triple.space();
    for generator in &family.generators {
        report.record(
            format!("isometry_{}", generator.label),
            space.is_isometry_matrix(generator.gamma.matrix()),
            "MᵀGM ≠ G",
        );
    }
    report.record(
        "generators_commute",
        verify_generator_relations(family),
        "generator matrices do not commute",
    );
    report
}

fn membership_checks(family: &FamilySpec) -> CheckReport {
    let mut report = check_omega(&family.triple);
    report.merge(check_komega(&family.triple));
    let space = family.triple.space();
    for (name, vector) in [("f1", &family.triple.f1), ("f2", &family.triple.f2)] {
        match norm_profile(space, vector) {
            Ok(profile) => report.pass_with_detail(
                format!("norm_profile_{name}"),
                format!("({}, {})", profile.constant_part, profile.e_coefficient),
            ),
            Err(err) => report.fail(format!("norm_profile_{name}"), err.to_string()),
        }
    }
    report
}

fn linear_variation_check(family: &FamilySpec) -> CheckReport {
    let mut report = CheckReport::new();
    match linear_variation(family) {
        Ok(lv) => {
            let space = family.triple.space();
            let describe = |v: &k3check::lattice::IntVector| {
                let parts: Vec<String> = v
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| format!("{}{}", if c == 1 { String::new() } else { format!("{c}") }, space.labels()[i]))
                    .collect();
                parts.join("+")
            };
            let coeffs: Vec<String> = lv
                .coefficients
                .iter()
                .map(|(var, v)| format!("{var} -> {}", describe(v)))
                .collect();
            report.pass_with_detail(
                "linear_variation",
                format!("base {}; {}", describe(&lv.base), coeffs.join(", ")),
            );
        }
        Err(err) => report.fail("linear_variation", err.to_string()),
    }
    report
}

fn affine_checks(family: &FamilySpec) -> CheckReport {
    let mut report = CheckReport::new();
    let actions = family.parameter_actions();
    for (generator, action) in family.generators.iter().zip(&actions) {
        report.record(
            format!("strongly_integral_{}", generator.label),
            action.is_strongly_integral(),
            "translation part is not integral",
        );
    }
    if actions.len() == 2 {
        let expected = match (family.kind, family.int_params) {
            (FamilyKind::TorusStandard, _) => TorusClass::Standard,
            (FamilyKind::TorusNpq, Some((n, p, q))) => TorusClass::NonStandard { n, p, q },
            _ => TorusClass::Unrecognized,
        };
        match classify_strongly_integral_torus(&actions) {
            Ok(class) => report.record(
                "torus_classification",
                class == expected,
                format!("classified {class:?}, expected {expected:?}"),
            ),
            Err(err) => report.fail("torus_classification", err.to_string()),
        }
    }
    report
}

fn equivariance_checks(family: &FamilySpec) -> CheckReport {
    let mut report = CheckReport::new();
    for idx in 0..family.generators.len() {
        report.merge(check_equivariance(family, idx));
    }
    report
}

fn point_searches(family: &FamilySpec, config: &RunConfig) -> CheckReport {
    let mut report = CheckReport::new();
    let points: Vec<BTreeMap<VarName, BigRational>> = match family.kind {
        FamilyKind::Circle => config
            .s_samples
            .iter()
            .map(|s| BTreeMap::from([(VarName::S, s.clone())]))
            .collect(),
        _ => config
            .s_samples
            .iter()
            .flat_map(|s| {
                config.r_samples.iter().map(move |r| {
                    BTreeMap::from([(VarName::S, s.clone()), (VarName::R, r.clone())])
                })
            })
            .collect(),
    };
    for values in points {
        let label: Vec<String> = values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let hits = root_search_family(family, &values, config.bound, config.norm_bound);
        report.record(
            format!("root_search[{}]", label.join(",")),
            hits.is_empty(),
            format!("{} orthogonal roots found", hits.len()),
        );
    }
    report
}

/// Every check suite for one family, in pipeline order.
pub fn verify_family(family: &FamilySpec, config: &RunConfig) -> CheckReport {
    let mut report = CheckReport::new();
    report.merge(lattice_sanity());
    report.merge(isometry_checks(family));
    report.merge(equivariance_checks(family));
    report.merge(membership_checks(family));
    report.merge(linear_variation_check(family));
    report.merge(affine_checks(family));
    report.merge(match_paper_system(family.kind));
    report.merge(verify_identity_bank());
    report.merge(point_searches(family, config));
    if !config.skip_sweep {
        let sweep = sweep_family(
            family,
            SweepConfig {
                box_bound: config.sweep_bound,
                norm_bound: config.norm_bound,
            },
        );
        report.merge(sweep.to_check_report());
        report.pass_with_detail(
            "exclusion_sweep_total",
            format!("{} candidates covered", sweep.candidates_covered),
        );
    }
    report
}

/// The default verification set: both parameterless families plus the
/// `(1,1,1)` and `(2,1,3)` torus instances.
pub fn default_family_instances() -> Vec<FamilySpec> {
    vec![
        build_family(FamilyKind::Circle, None).expect("circle builds"),
        build_family(FamilyKind::TorusStandard, None).expect("standard torus builds"),
        build_family(FamilyKind::TorusNpq, Some((1, 1, 1))).expect("unit torus builds"),
        build_family(FamilyKind::TorusNpq, Some((2, 1, 3))).expect("sample torus builds"),
    ]
}

/// Runs the pipeline over several families, prefixing check names with the
/// family descriptor when more than one is present.
pub fn verify_families(families: &[FamilySpec], config: &RunConfig) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    for family in families {
        let report = verify_family(family, config);
        if families.len() == 1 {
            checks.extend(report.results);
        } else {
            let prefix = family.descriptor();
            checks.extend(report.results.into_iter().map(|mut r| {
                r.check_name = format!("{prefix}/{}", r.check_name);
                r
            }));
        }
    }
    checks
}
