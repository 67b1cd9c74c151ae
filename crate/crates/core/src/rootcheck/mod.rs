//! The root condition: no vector of square -2 may be orthogonal to all
//! three components of a family triple.
//!
//! A candidate root is written `d = Au+Bv+Cx+Dy+Ez+Ft+d1+d2` with integer
//! hyperbolic coefficients and `d_i` in the i-th `-E8` summand. Pairing `d`
//! against the triple produces the orthogonality system; this module derives
//! that system symbolically, matches it against the expected closed forms,
//! and searches for candidates at concrete rational parameter points. The
//! symbolic elimination engine that certifies exclusion lives in
//! [`exclusion`], the bounded candidate sweep in [`sweep`], and the bank of
//! rewriting identities in [`identities`].

pub mod exclusion;
pub mod identities;
pub mod sweep;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactring::{rational_int, Monomial, MultiPoly, VarName};
use crate::families::{self, FamilyKind, FamilySpec};
use crate::lattice::{enumerate_by_norm, IntVector, LatticeSpace, PolyVector};
use crate::period::PeriodTriple;
use crate::report::CheckReport;

/// An integer candidate `d = Au+Bv+Cx+Dy+Ez+Ft+d1+d2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RootCandidate {
    /// Coefficients on the hyperbolic basis `(u, v, x, y, z, t)`.
    pub hyp: [i64; 6],
    /// Component in the first `-E8` summand (8 coordinates).
    pub d1: IntVector,
    /// Component in the second `-E8` summand.
    pub d2: IntVector,
}

impl RootCandidate {
    pub fn new(hyp: [i64; 6], d1: IntVector, d2: IntVector) -> RootCandidate {
        assert_eq!(d1.0.len(), 8);
        assert_eq!(d2.0.len(), 8);
        RootCandidate { hyp, d1, d2 }
    }

    pub fn hyperbolic_only(hyp: [i64; 6]) -> RootCandidate {
        RootCandidate::new(hyp, IntVector::zero(8), IntVector::zero(8))
    }

    /// The full 22-coordinate vector in the K3 basis order.
    pub fn full_vector(&self) -> IntVector {
        let mut coords = Vec::with_capacity(22);
        coords.extend_from_slice(&self.hyp);
        coords.extend_from_slice(&self.d1.0);
        coords.extend_from_slice(&self.d2.0);
        IntVector(coords)
    }

    /// `AB + CD + EF`.
    pub fn hyperbolic_product(&self) -> i64 {
        let [a, b, c, d, e, f] = self.hyp;
        a * b + c * d + e * f
    }

    /// `n_i = -(d_i, d_i)/2` in the `-E8` summand; nonnegative integers.
    pub fn n1(&self) -> i64 {
        let m = LatticeSpace::minus_e8();
        -m.inner_int(&self.d1, &self.d1).expect("rank 8") / 2
    }

    pub fn n2(&self) -> i64 {
        let m = LatticeSpace::minus_e8();
        -m.inner_int(&self.d2, &self.d2).expect("rank 8") / 2
    }

    /// `(d, d) = 2(AB+CD+EF) - 2 n1 - 2 n2`.
    pub fn norm(&self) -> i64 {
        2 * self.hyperbolic_product() - 2 * self.n1() - 2 * self.n2()
    }

    /// Admissible candidates have square exactly -2.
    pub fn is_admissible(&self) -> bool {
        self.norm() == -2
    }

    pub fn negated(&self) -> RootCandidate {
        RootCandidate {
            hyp: self.hyp.map(|x| -x),
            d1: self.d1.negated(),
            d2: self.d2.negated(),
        }
    }

    /// Bindings sending the candidate variables to their integer values.
    pub fn bindings(&self) -> BTreeMap<VarName, BigRational> {
        let mut map = BTreeMap::new();
        for (var, value) in VarName::hyperbolic().into_iter().zip(self.hyp) {
            map.insert(var, rational_int(value));
        }
        for j in 1..=8 {
            map.insert(VarName::d1(j), rational_int(self.d1.0[j - 1]));
            map.insert(VarName::d2(j), rational_int(self.d2.0[j - 1]));
        }
        map
    }
}

/// The orthogonality system of a triple: one pairing equation per
/// component, plus the norm equation `(d, d) + 2 = 0`.
#[derive(Debug, Clone)]
pub struct OrthoSystem {
    /// `(d, f1)`, `(d, f2)`, `(d, f3)` as exact polynomials.
    pub equations: Vec<MultiPoly>,
    pub norm_equation: MultiPoly,
}

/// The fully symbolic candidate vector.
pub fn symbolic_candidate(space: &LatticeSpace) -> PolyVector {
    let mut coords = vec![MultiPoly::zero(); space.rank()];
    for (k, var) in VarName::hyperbolic().into_iter().enumerate() {
        coords[k] = MultiPoly::var(var);
    }
    for j in 1..=8 {
        coords[5 + j] = MultiPoly::var(VarName::d1(j));
        coords[13 + j] = MultiPoly::var(VarName::d2(j));
    }
    PolyVector(coords)
}

/// Pairs the symbolic candidate against each component of the triple.
pub fn derive_ortho_system(triple: &PeriodTriple) -> OrthoSystem {
    let space = triple.space();
    let d = symbolic_candidate(space);
    let equations = [&triple.f1, &triple.f2, &triple.f3]
        .into_iter()
        .map(|f| space.inner(&d, f).expect("rank 22"))
        .collect();
    let norm_equation = &space.norm_poly(&d).expect("rank 22") + &MultiPoly::int(2);
    OrthoSystem {
        equations,
        norm_equation,
    }
}

/// `(d_copy, e)` expanded over the `-E8` Gram form.
fn d_e_pairing(copy: usize) -> MultiPoly {
    let gram = LatticeSpace::minus_e8();
    let d_var = |j: usize| {
        if copy == 1 {
            VarName::d1(j)
        } else {
            VarName::d2(j)
        }
    };
    let mut acc = MultiPoly::zero();
    for j in 1..=8 {
        for k in 1..=8 {
            let g = gram.gram()[j - 1][k - 1];
            if g == 0 {
                continue;
            }
            let term = MultiPoly::monomial(
                Monomial::var(d_var(j)).mul(&Monomial::var(VarName::e(k))),
                rational_int(g),
            );
            acc = &acc + &term;
        }
    }
    acc
}

/// `n_i = -(d_i, d_i)/2` expanded as a quadratic polynomial in the
/// candidate coordinates.
fn n_poly(copy: usize) -> MultiPoly {
    let gram = LatticeSpace::minus_e8();
    let d_var = |j: usize| {
        if copy == 1 {
            VarName::d1(j)
        } else {
            VarName::d2(j)
        }
    };
    let mut acc = MultiPoly::zero();
    for j in 1..=8 {
        for k in 1..=8 {
            let g = gram.gram()[j - 1][k - 1];
            if g == 0 {
                continue;
            }
            let term = MultiPoly::monomial(
                Monomial::var(d_var(j)).mul(&Monomial::var(d_var(k))),
                BigRational::new(BigInt::from(-g), BigInt::from(2)),
            );
            acc = &acc + &term;
        }
    }
    acc
}

fn var(v: VarName) -> MultiPoly {
    MultiPoly::var(v)
}

fn scaled(p: &MultiPoly, k: i64) -> MultiPoly {
    p.scale(&rational_int(k))
}

/// The expected orthogonality systems in closed form: the norm identity
/// `AB+CD+EF = n1+n2-1` plus the three pairing equations of each family,
/// with `(d_i, e)` expanded over the Gram form and `n_i` expanded through
/// the norm quadratic. The torus system keeps `n` and `q` symbolic.
pub fn expected_system(kind: FamilyKind) -> OrthoSystem {
    #[allow(non_snake_case)]
    let (A, B, C, D, E, F) = (VarName::A, VarName::B, VarName::C, VarName::D, VarName::E, VarName::F);
    #[allow(non_snake_case)]
    let (N, Q, R, S) = (VarName::N, VarName::Q, VarName::R, VarName::S);
    let norm_equation =
        &(&(&(&(&(&var(A) * &var(B)) + &(&var(C) * &var(D))) + &(&var(E) * &var(F))) - &n_poly(1))
            - &n_poly(2))
            + &MultiPoly::one();
    let eq_k;
    let eq_re;
    let eq_im;
    match kind {
        FamilyKind::Circle => {
            // 2B + A + Cs ; D - Bs + 2C + (d2,e) ; F + 2E + (d1,e)
            eq_k = &(&scaled(&var(B), 2) + &var(A)) + &(&var(C) * &var(S));
            eq_re = &(&(&var(D) - &(&var(B) * &var(S))) + &scaled(&var(C), 2)) + &d_e_pairing(2);
            eq_im = &(&var(F) + &scaled(&var(E), 2)) + &d_e_pairing(1);
        }
        FamilyKind::TorusStandard => {
            // 2B + A + Cs + Er ; D - Bs + 2C + (d2,e) ; F - Br + 2E + (d1,e)
            eq_k = &(&(&scaled(&var(B), 2) + &var(A)) + &(&var(C) * &var(S)))
                + &(&var(E) * &var(R));
            eq_re = &(&(&var(D) - &(&var(B) * &var(S))) + &scaled(&var(C), 2)) + &d_e_pairing(2);
            eq_im = &(&(&var(F) - &(&var(B) * &var(R))) + &scaled(&var(E), 2)) + &d_e_pairing(1);
        }
        FamilyKind::TorusNpq => {
            // 2B + A + Cs + Er ;
            // Dq + B(nr² - qs) - Fnr + 2Cq + (d2,e) ;
            // F - Br + 2Eq² + 2Cnqr + (d1,e)
            eq_k = &(&(&scaled(&var(B), 2) + &var(A)) + &(&var(C) * &var(S)))
                + &(&var(E) * &var(R));
            let nr2_minus_qs = &(&var(N) * &var(R).pow(2)) - &(&var(Q) * &var(S));
            eq_re = &(&(&(&(&var(D) * &var(Q)) + &(&var(B) * &nr2_minus_qs))
                - &(&(&var(F) * &var(N)) * &var(R)))
                + &scaled(&(&var(C) * &var(Q)), 2))
                + &d_e_pairing(2);
            eq_im = &(&(&(&var(F) - &(&var(B) * &var(R))) + &scaled(&(&var(E) * &var(Q).pow(2)), 2))
                + &scaled(&(&(&(&var(C) * &var(N)) * &var(Q)) * &var(R)), 2))
                + &d_e_pairing(1);
        }
    }
    OrthoSystem {
        equations: vec![eq_k, eq_re, eq_im],
        norm_equation,
    }
}

pub(crate) fn triple_for_kind(kind: FamilyKind) -> PeriodTriple {
    match kind {
        FamilyKind::Circle => families::build_family(kind, None)
            .expect("circle builds")
            .triple,
        FamilyKind::TorusStandard => families::build_family(kind, None)
            .expect("standard torus builds")
            .triple,
        FamilyKind::TorusNpq => families::npq_symbolic_triple(),
    }
}

/// Compares the derived system against the expected closed form, equation
/// by equation, after putting both sides in primitive normal form (so
/// overall scaling and sign are quotiented out).
pub fn match_paper_system(kind: FamilyKind) -> CheckReport {
    let derived = derive_ortho_system(&triple_for_kind(kind));
    let expected = expected_system(kind);
    let mut report = CheckReport::new();
    let pairs = [
        ("system_norm", &derived.norm_equation, &expected.norm_equation),
        ("system_k", &derived.equations[0], &expected.equations[0]),
        ("system_sigma_re", &derived.equations[1], &expected.equations[1]),
        ("system_sigma_im", &derived.equations[2], &expected.equations[2]),
    ];
    for (name, got, want) in pairs {
        let lhs = got.primitive_normalized();
        let rhs = want.primitive_normalized();
        if lhs == rhs {
            report.pass(name);
        } else {
            report.fail(name, format!("derived {lhs} vs expected {rhs}"));
        }
    }
    report
}

/// Certified square of the pairing bound: `|(d, e)|² ≤ |(d, d)| · |(e, e)|
/// ≤ |(d, d)|/2` under the `|(e,e)| ≤ 1/2` normalization. For a candidate
/// part with `(d, d) = -2n` this is exactly `n`.
pub fn cauchy_schwarz_bound(d: &IntVector) -> BigRational {
    let m = LatticeSpace::minus_e8();
    let norm = m.inner_int(d, d).expect("rank 8");
    BigRational::new(BigInt::from(norm.abs()), BigInt::from(2))
}

/// Decomposed linear structure of one evaluated orthogonality equation:
/// `Σ α_k hyp_k + Σ c1_j d1_j + Σ c2_j d2_j + Σ m1[j][k] d1_j e_k + Σ
/// m2[j][k] d2_j e_k = 0`.
struct EquationShape {
    alpha: [BigRational; 6],
    c1: [BigRational; 8],
    c2: [BigRational; 8],
    m1: Vec<Vec<BigRational>>,
    m2: Vec<Vec<BigRational>>,
}

impl EquationShape {
    fn from_poly(eq: &MultiPoly) -> EquationShape {
        let mut shape = EquationShape {
            alpha: std::array::from_fn(|_| BigRational::zero()),
            c1: std::array::from_fn(|_| BigRational::zero()),
            c2: std::array::from_fn(|_| BigRational::zero()),
            m1: vec![vec![BigRational::zero(); 8]; 8],
            m2: vec![vec![BigRational::zero(); 8]; 8],
        };
        let hyp = VarName::hyperbolic();
        'terms: for (mono, coeff) in eq.terms() {
            let exps = mono.exps();
            if exps.len() == 1 && exps[0].1 == 1 {
                let v = exps[0].0;
                if let Some(k) = hyp.iter().position(|&h| h == v) {
                    shape.alpha[k] = coeff.clone();
                    continue;
                }
                for j in 1..=8 {
                    if v == VarName::d1(j) {
                        shape.c1[j - 1] = coeff.clone();
                        continue 'terms;
                    }
                    if v == VarName::d2(j) {
                        shape.c2[j - 1] = coeff.clone();
                        continue 'terms;
                    }
                }
                panic!("unexpected linear term {mono} in evaluated orthogonality equation");
            }
            if exps.len() == 2 && exps[0].1 == 1 && exps[1].1 == 1 {
                let (a, b) = (exps[0].0, exps[1].0);
                for j in 1..=8 {
                    for k in 1..=8 {
                        if a == VarName::d1(j) && b == VarName::e(k)
                            || b == VarName::d1(j) && a == VarName::e(k)
                        {
                            shape.m1[j - 1][k - 1] = coeff.clone();
                            continue 'terms;
                        }
                        if a == VarName::d2(j) && b == VarName::e(k)
                            || b == VarName::d2(j) && a == VarName::e(k)
                        {
                            shape.m2[j - 1][k - 1] = coeff.clone();
                            continue 'terms;
                        }
                    }
                }
                panic!("unexpected bilinear term {mono} in evaluated orthogonality equation");
            }
            panic!("unexpected term {mono} in evaluated orthogonality equation");
        }
        shape
    }

    fn has_d_constants(&self) -> bool {
        self.c1.iter().chain(&self.c2).any(|c| !c.is_zero())
    }

    /// e-coefficient vector `M1ᵀ d1 + M2ᵀ d2` for a concrete pair.
    fn e_condition_holds(&self, d1: &IntVector, d2: &IntVector) -> bool {
        for k in 0..8 {
            let mut acc = BigRational::zero();
            for j in 0..8 {
                if d1.0[j] != 0 {
                    acc += &self.m1[j][k] * rational_int(d1.0[j]);
                }
                if d2.0[j] != 0 {
                    acc += &self.m2[j][k] * rational_int(d2.0[j]);
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
        true
    }

    fn d_constant_part(&self, d1: &IntVector, d2: &IntVector) -> BigRational {
        let mut acc = BigRational::zero();
        for j in 0..8 {
            if d1.0[j] != 0 {
                acc += &self.c1[j] * rational_int(d1.0[j]);
            }
            if d2.0[j] != 0 {
                acc += &self.c2[j] * rational_int(d2.0[j]);
            }
        }
        acc
    }
}

/// Integer-rescaled hyperbolic coefficient rows for the fast box filter.
fn integer_alpha(shapes: &[EquationShape]) -> Vec<[i64; 6]> {
    shapes
        .iter()
        .map(|shape| {
            let mut l = BigInt::one();
            for a in &shape.alpha {
                l = l.lcm(a.denom());
            }
            let scale = BigRational::from_integer(l);
            std::array::from_fn(|k| {
                let scaled = &shape.alpha[k] * &scale;
                debug_assert!(scaled.denom().is_one());
                i64::try_from(scaled.numer()).expect("scaled coefficient fits i64")
            })
        })
        .collect()
}

/// Whether the stacked e-coefficient matrices force `d1 = d2 = 0` for every
/// solution (the generic situation for the family triples). Columns are
/// `(d1_1..d1_8, d2_1..d2_8)`; rows are the e_k-coefficient functionals of
/// each equation, rescaled to integers.
fn e_conditions_force_zero(shapes: &[EquationShape]) -> bool {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for shape in shapes {
        for k in 0..8 {
            let entries: Vec<BigRational> = (0..8)
                .map(|j| shape.m1[j][k].clone())
                .chain((0..8).map(|j| shape.m2[j][k].clone()))
                .collect();
            let mut l = BigInt::one();
            for c in &entries {
                l = l.lcm(c.denom());
            }
            let scale = BigRational::from_integer(l);
            rows.push(
                entries
                    .iter()
                    .map(|c| {
                        i64::try_from((c * &scale).numer()).expect("scaled entry fits i64")
                    })
                    .collect(),
            );
        }
    }
    crate::lattice::rational_rank(&rows) == 16
}

/// Exhaustive exact search for admissible candidates orthogonal to the
/// triple at a concrete rational parameter point. An orthogonality equation
/// holds for the formal vector e exactly when its e-free part and every
/// e-coefficient vanish; for the family triples this forces `d1 = d2 = 0`
/// and leaves integer linear conditions on the hyperbolic coefficients.
pub fn root_search_at_point(
    triple: &PeriodTriple,
    values: &BTreeMap<VarName, BigRational>,
    box_bound: i64,
    norm_bound: i64,
) -> Vec<RootCandidate> {
    assert!(box_bound >= 1);
    assert!(norm_bound >= 0);
    let sys = derive_ortho_system(triple);
    let eqs: Vec<MultiPoly> = sys
        .equations
        .iter()
        .map(|eq| eq.eval_partial(values))
        .collect();
    for eq in &eqs {
        assert!(
            !eq.contains_var(VarName::S) && !eq.contains_var(VarName::R),
            "parameter values must bind every parameter of the triple"
        );
    }
    let shapes: Vec<EquationShape> = eqs.iter().map(EquationShape::from_poly).collect();
    let alpha_rows = integer_alpha(&shapes);
    let forced_zero = e_conditions_force_zero(&shapes);
    let d_constant_free = shapes.iter().all(|s| !s.has_d_constants());

    let shells: Vec<Vec<IntVector>> = (0..=norm_bound)
        .map(|n| {
            enumerate_by_norm(&LatticeSpace::minus_e8(), 2 * n).expect("definite space")
        })
        .collect();

    let mut found = Vec::new();
    let range = -box_bound..=box_bound;
    for a in range.clone() {
        for b in range.clone() {
            for c in range.clone() {
                for d in range.clone() {
                    for e in range.clone() {
                        'hyp: for f in range.clone() {
                            let hyp = [a, b, c, d, e, f];
                            if d_constant_free {
                                for row in &alpha_rows {
                                    let dot: i64 =
                                        row.iter().zip(hyp).map(|(&x, y)| x * y).sum();
                                    if dot != 0 {
                                        continue 'hyp;
                                    }
                                }
                            }
                            let t = a * b + c * d + e * f;
                            let n_total = t + 1;
                            if forced_zero && d_constant_free {
                                if n_total == 0 {
                                    found.push(RootCandidate::hyperbolic_only(hyp));
                                }
                                continue;
                            }
                            if n_total < 0 || n_total > 2 * norm_bound {
                                continue;
                            }
                            for n1 in 0..=norm_bound.min(n_total) {
                                let n2 = n_total - n1;
                                if n2 > norm_bound {
                                    continue;
                                }
                                for d1 in &shells[n1 as usize] {
                                    for d2 in &shells[n2 as usize] {
                                        let ok = shapes.iter().enumerate().all(|(i, s)| {
                                            let mut free = BigRational::zero();
                                            for (k, &x) in hyp.iter().enumerate() {
                                                free += &s.alpha[k] * rational_int(x);
                                            }
                                            free += s.d_constant_part(d1, d2);
                                            let _ = i;
                                            free.is_zero() && s.e_condition_holds(d1, d2)
                                        });
                                        if ok {
                                            found.push(RootCandidate::new(
                                                hyp,
                                                d1.clone(),
                                                d2.clone(),
                                            ));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // validate every hit against the full polynomial system
    found.retain(|cand| {
        if !cand.is_admissible() {
            return false;
        }
        let bind = cand.bindings();
        eqs.iter().all(|eq| eq.eval_partial(&bind).is_zero())
    });
    found.sort();
    found.dedup();
    found
}

/// Search on a family at a parameter point given as `(param, value)` pairs.
pub fn root_search_family(
    family: &FamilySpec,
    values: &BTreeMap<VarName, BigRational>,
    box_bound: i64,
    norm_bound: i64,
) -> Vec<RootCandidate> {
    root_search_at_point(&family.triple, values, box_bound, norm_bound)
}
