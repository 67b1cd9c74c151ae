//! Short-vector enumeration in definite lattices.
//!
//! Exact rational LDL decomposition plus depth-first backtracking over the
//! coordinates (Fincke–Pohst). Norms here are tiny, so all interval bounds
//! are decided by exact comparisons instead of floating-point pruning.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{IntVector, LatticeError, LatticeSpace};

/// All vectors `v` with `|(v, v)| = target_norm`, lexicographically sorted.
/// The space (or its negation) must be positive definite.
pub fn enumerate_by_norm(
    space: &LatticeSpace,
    target_norm: i64,
) -> Result<Vec<IntVector>, LatticeError> {
    assert!(target_norm >= 0, "norms are compared by absolute value");
    let rank = space.rank();
    let (plus, minus, zero) = space.signature();
    let positive: Vec<Vec<i64>> = if plus == rank && zero == 0 {
        space.gram().to_vec()
    } else if minus == rank && zero == 0 {
        space.negated().gram().to_vec()
    } else {
        return Err(LatticeError::IndefiniteSpace);
    };

    let (diag, mu) = ldl(&positive);
    let target = BigRational::from_integer(BigInt::from(target_norm));
    let mut coords = vec![0i64; rank];
    let mut found = Vec::new();
    search(
        rank,
        rank,
        &target,
        &diag,
        &mu,
        &mut coords,
        &mut found,
    );
    found.sort();
    found.dedup();
    Ok(found)
}

/// `Q = Σ_i d_i (x_i + Σ_{j>i} μ_ij x_j)²` with all `d_i > 0`.
fn ldl(q: &[Vec<i64>]) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let n = q.len();
    let mut a: Vec<Vec<BigRational>> = q
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut diag = vec![BigRational::zero(); n];
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        diag[i] = a[i][i].clone();
        assert!(
            diag[i].is_positive(),
            "LDL requires a positive definite form"
        );
        for j in i + 1..n {
            mu[i][j] = &a[i][j] / &diag[i];
        }
        for r in i + 1..n {
            for c in i + 1..n {
                let sub = &diag[i] * &mu[i][r] * &mu[i][c];
                a[r][c] -= sub;
            }
        }
    }
    (diag, mu)
}

/// Chooses `coords[level-1]` and recurses downward; `remaining` is the
/// budget left for levels `0..level`.
fn search(
    level: usize,
    rank: usize,
    remaining: &BigRational,
    diag: &[BigRational],
    mu: &[Vec<BigRational>],
    coords: &mut Vec<i64>,
    found: &mut Vec<IntVector>,
) {
    if level == 0 {
        if remaining.is_zero() {
            found.push(IntVector(coords.clone()));
        }
        return;
    }
    let i = level - 1;
    // center of the parabola in x_i given the already-fixed outer coords
    let mut center = BigRational::zero();
    for j in i + 1..rank {
        center += &mu[i][j] * BigRational::from_integer(BigInt::from(coords[j]));
    }
    let cost = |x: i64| -> BigRational {
        let shifted = BigRational::from_integer(BigInt::from(x)) + &center;
        &diag[i] * &shifted * &shifted
    };
    let start = (-&center).floor().to_integer();
    let start = i64::try_from(&start).expect("coordinate bound overflows i64");
    // scan outward in both directions; cost grows monotonically away from
    // the center, so the first overshoot on each side terminates the scan
    let mut x = start;
    loop {
        let c = cost(x);
        if &c > remaining {
            break;
        }
        coords[i] = x;
        let rest = remaining - &c;
        search(i, rank, &rest, diag, mu, coords, found);
        x -= 1;
    }
    let mut x = start + 1;
    loop {
        let c = cost(x);
        if &c > remaining {
            break;
        }
        coords[i] = x;
        let rest = remaining - &c;
        search(i, rank, &rest, diag, mu, coords, found);
        x += 1;
    }
    coords[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e8_has_240_roots() {
        let e8 = LatticeSpace::e8();
        let roots = enumerate_by_norm(&e8, 2).unwrap();
        assert_eq!(roots.len(), 240);
        for v in &roots {
            assert_eq!(e8.inner_int(v, v).unwrap(), 2);
            assert!(roots.binary_search(&v.negated()).is_ok());
        }
    }

    #[test]
    fn e8_norm_one_is_empty() {
        // even lattice: no odd norms
        let e8 = LatticeSpace::e8();
        assert!(enumerate_by_norm(&e8, 1).unwrap().is_empty());
        assert!(enumerate_by_norm(&e8, 3).unwrap().is_empty());
    }

    #[test]
    fn e8_second_shell() {
        let e8 = LatticeSpace::e8();
        assert_eq!(enumerate_by_norm(&e8, 4).unwrap().len(), 2160);
    }

    #[test]
    fn negation_of_e8_enumerates_identically() {
        let roots_pos = enumerate_by_norm(&LatticeSpace::e8(), 2).unwrap();
        let roots_neg = enumerate_by_norm(&LatticeSpace::minus_e8(), 2).unwrap();
        assert_eq!(roots_pos, roots_neg);
        let m = LatticeSpace::minus_e8();
        for v in &roots_neg {
            assert_eq!(m.inner_int(v, v).unwrap(), -2);
        }
    }

    #[test]
    fn indefinite_space_rejected() {
        let k3 = LatticeSpace::k3();
        assert_eq!(
            enumerate_by_norm(&k3, 2).unwrap_err(),
            LatticeError::IndefiniteSpace
        );
    }

    #[test]
    fn norm_zero_is_only_the_origin() {
        let e8 = LatticeSpace::e8();
        let zs = enumerate_by_norm(&e8, 0).unwrap();
        assert_eq!(zs, vec![IntVector::zero(8)]);
    }

    #[test]
    fn matches_naive_scan_on_a_small_form() {
        // cross-check against a brute-force box scan on a random-looking
        // positive definite 3x3 form
        let q = LatticeSpace::new(
            vec![vec![2, 1, 0], vec![1, 4, -1], vec![0, -1, 6]],
            vec!["a".into(), "b".into(), "c".into()],
        );
        for target in 0..=12 {
            let fast = enumerate_by_norm(&q, target).unwrap();
            let mut slow = Vec::new();
            for a in -6i64..=6 {
                for b in -6i64..=6 {
                    for c in -6i64..=6 {
                        let v = IntVector(vec![a, b, c]);
                        if q.inner_int(&v, &v).unwrap() == target {
                            slow.push(v);
                        }
                    }
                }
            }
            slow.sort();
            assert_eq!(fast, slow, "target {target}");
        }
    }
}
