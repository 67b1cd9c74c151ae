//! Integral affine maps on ℝ^q and recognition of the two normal forms of
//! strongly integral affine 2-tori.
//!
//! An integral affine map is `x ↦ Ax + b` with `A ∈ GL(ℤ)`; it is strongly
//! integral when `b` is integral as well. The classification of strongly
//! integral affine 2-tori admits exactly two generator normal forms:
//!
//!   (a) translations `(x,y) ↦ (x+1, y)` and `(x,y) ↦ (x, y+1)`;
//!   (b) `(x,y) ↦ (x+p, y)` and `(x,y) ↦ (x+ny, y+q)` with `n, p, q ≥ 1`.
//!
//! Recognition here is syntactic normal-form matching, not classification
//! up to affine conjugation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactring::format_rational;
use crate::lattice::bareiss_determinant;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AffineError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("linear part is not invertible over the integers (determinant {0})")]
    NotUnimodular(BigInt),
    #[error("classification needs exactly two generators in dimension 2")]
    WrongGenerators,
}

/// `x ↦ Ax + b` with `A` unimodular over ℤ and `b` rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    linear: Vec<Vec<i64>>,
    translation: Vec<BigRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TorusClass {
    Standard,
    NonStandard { n: i64, p: i64, q: i64 },
    Unrecognized,
}

impl TorusClass {
    /// The recognized normal forms act freely and properly by the torus
    /// classification; unrecognized generator sets get no such flag.
    pub fn is_free_and_proper_by_classification(&self) -> bool {
        !matches!(self, TorusClass::Unrecognized)
    }
}

impl AffineMap {
    pub fn new(linear: Vec<Vec<i64>>, translation: Vec<BigRational>) -> Result<AffineMap, AffineError> {
        let dim = linear.len();
        if linear.iter().any(|row| row.len() != dim) || translation.len() != dim {
            return Err(AffineError::DimensionMismatch(dim, translation.len()));
        }
        let det = bareiss_determinant(
            linear
                .iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        );
        if det.magnitude() != &BigInt::one().magnitude().clone() {
            return Err(AffineError::NotUnimodular(det));
        }
        Ok(AffineMap {
            linear,
            translation,
        })
    }

    /// Pure translation by an integer vector.
    pub fn translation_by(shift: &[i64]) -> AffineMap {
        let dim = shift.len();
        let mut linear = vec![vec![0i64; dim]; dim];
        for (i, row) in linear.iter_mut().enumerate() {
            row[i] = 1;
        }
        AffineMap {
            linear,
            translation: shift
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        }
    }

    pub fn identity(dim: usize) -> AffineMap {
        AffineMap::translation_by(&vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn linear(&self) -> &[Vec<i64>] {
        &self.linear
    }

    pub fn translation(&self) -> &[BigRational] {
        &self.translation
    }

    pub fn is_linear_identity(&self) -> bool {
        self.linear
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
    }

    pub fn apply(&self, point: &[BigRational]) -> Result<Vec<BigRational>, AffineError> {
        if point.len() != self.dim() {
            return Err(AffineError::DimensionMismatch(self.dim(), point.len()));
        }
        Ok(self
            .linear
            .iter()
            .zip(&self.translation)
            .map(|(row, b)| {
                let mut acc = b.clone();
                for (&a, x) in row.iter().zip(point) {
                    acc += BigRational::from_integer(BigInt::from(a)) * x;
                }
                acc
            })
            .collect())
    }

    /// `(A1, b1) ∘ (A2, b2) = (A1·A2, A1·b2 + b1)`.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap, AffineError> {
        if self.dim() != other.dim() {
            return Err(AffineError::DimensionMismatch(self.dim(), other.dim()));
        }
        let n = self.dim();
        let mut linear = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                linear[i][j] = (0..n).map(|k| self.linear[i][k] * other.linear[k][j]).sum();
            }
        }
        let translation = self
            .linear
            .iter()
            .zip(&self.translation)
            .map(|(row, b1)| {
                let mut acc = b1.clone();
                for (&a, b2) in row.iter().zip(&other.translation) {
                    acc += BigRational::from_integer(BigInt::from(a)) * b2;
                }
                acc
            })
            .collect();
        Ok(AffineMap {
            linear,
            translation,
        })
    }

    /// Exact inverse; the linear part stays integral because the
    /// determinant is ±1.
    pub fn invert(&self) -> AffineMap {
        let n = self.dim();
        // Gauss-Jordan over the rationals on [A | I]
        let mut a: Vec<Vec<BigRational>> = self
            .linear
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
                .expect("unimodular matrix is invertible");
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
        let linear: Vec<Vec<i64>> = inv
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        assert!(x.denom().is_one(), "inverse of unimodular matrix is integral");
                        i64::try_from(x.numer()).expect("inverse entry overflows i64")
                    })
                    .collect()
            })
            .collect();
        // b' = -A⁻¹ b
        let translation: Vec<BigRational> = linear
            .iter()
            .map(|row| {
                let mut acc = BigRational::zero();
                for (&a, b) in row.iter().zip(&self.translation) {
                    acc -= BigRational::from_integer(BigInt::from(a)) * b;
                }
                acc
            })
            .collect();
        AffineMap {
            linear,
            translation,
        }
    }

    /// Strongly integral: every translation entry is an integer.
    pub fn is_strongly_integral(&self) -> bool {
        self.translation.iter().all(|b| b.denom().is_one())
    }

    fn integral_translation(&self) -> Option<Vec<i64>> {
        self.translation
            .iter()
            .map(|b| {
                if b.denom().is_one() {
                    i64::try_from(b.numer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }
}

impl Serialize for AffineMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("AffineMap", 2)?;
        s.serialize_field("linear", &self.linear)?;
        let translation: Vec<String> = self.translation.iter().map(format_rational).collect();
        s.serialize_field("translation", &translation)?;
        s.end()
    }
}

/// Matches a two-generator set against the torus normal forms, ordering the
/// generators canonically (the translation-dominant one first).
pub fn classify_strongly_integral_torus(
    generators: &[AffineMap],
) -> Result<TorusClass, AffineError> {
    if generators.len() != 2 || generators.iter().any(|g| g.dim() != 2) {
        return Err(AffineError::WrongGenerators);
    }
    for (g, h) in [(0usize, 1usize), (1, 0)] {
        if let Some(class) = match_ordered(&generators[g], &generators[h]) {
            return Ok(class);
        }
    }
    Ok(TorusClass::Unrecognized)
}

fn match_ordered(first: &AffineMap, second: &AffineMap) -> Option<TorusClass> {
    let t1 = first.integral_translation()?;
    let t2 = second.integral_translation()?;
    if first.is_linear_identity() && second.is_linear_identity() {
        if t1 == [1, 0] && t2 == [0, 1] {
            return Some(TorusClass::Standard);
        }
        return None;
    }
    // form (b): (I, (p, 0)) then ((1 n; 0 1), (0, q))
    if !first.is_linear_identity() {
        return None;
    }
    let p = t1[0];
    if t1[1] != 0 || p < 1 {
        return None;
    }
    let lin = second.linear();
    let n = lin[0][1];
    if lin[0][0] != 1 || lin[1][0] != 0 || lin[1][1] != 1 || n < 1 {
        return None;
    }
    let q = t2[1];
    if t2[0] != 0 || q < 1 {
        return None;
    }
    Some(TorusClass::NonStandard { n, p, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::rational_int;

    fn shear(n: i64, q: i64) -> AffineMap {
        AffineMap::new(
            vec![vec![1, n], vec![0, 1]],
            vec![rational_int(0), rational_int(q)],
        )
        .unwrap()
    }

    #[test]
    fn compose_translations() {
        let a = AffineMap::translation_by(&[1, 0]);
        let b = AffineMap::translation_by(&[0, 1]);
        assert_eq!(
            a.compose(&b).unwrap(),
            AffineMap::translation_by(&[1, 1])
        );
    }

    #[test]
    fn invert_shear() {
        // ((1 n; 0 1), (0, q))⁻¹ = ((1 -n; 0 1), (nq, -q))
        for (n, q) in [(1i64, 1i64), (2, 3), (5, 7)] {
            let f = shear(n, q);
            let inv = f.invert();
            assert_eq!(inv.linear(), &[vec![1, -n], vec![0, 1]]);
            assert_eq!(inv.translation(), &[rational_int(n * q), rational_int(-q)]);
            assert_eq!(f.compose(&inv).unwrap(), AffineMap::identity(2));
            assert_eq!(inv.compose(&f).unwrap(), AffineMap::identity(2));
        }
    }

    #[test]
    fn torus_generators_commute() {
        let a = AffineMap::translation_by(&[3, 0]);
        let b = shear(2, 5);
        assert_eq!(a.compose(&b).unwrap(), b.compose(&a).unwrap());
    }

    #[test]
    fn strong_integrality() {
        assert!(AffineMap::translation_by(&[1, 0]).is_strongly_integral());
        assert!(shear(4, 2).is_strongly_integral());
        let half = AffineMap::new(
            vec![vec![1, 0], vec![0, 1]],
            vec![BigRational::new(1.into(), 2.into()), rational_int(0)],
        )
        .unwrap();
        assert!(!half.is_strongly_integral());
    }

    #[test]
    fn strong_integrality_closed_under_compose_and_invert() {
        let maps = [
            AffineMap::translation_by(&[2, -1]),
            shear(3, 4),
            AffineMap::new(vec![vec![0, 1], vec![1, 0]], vec![rational_int(5), rational_int(-2)])
                .unwrap(),
        ];
        for f in &maps {
            assert!(f.invert().is_strongly_integral());
            for g in &maps {
                assert!(f.compose(g).unwrap().is_strongly_integral());
            }
        }
    }

    #[test]
    fn classify_standard() {
        let gens = [
            AffineMap::translation_by(&[1, 0]),
            AffineMap::translation_by(&[0, 1]),
        ];
        assert_eq!(
            classify_strongly_integral_torus(&gens).unwrap(),
            TorusClass::Standard
        );
        // order of the generators does not matter
        let gens = [
            AffineMap::translation_by(&[0, 1]),
            AffineMap::translation_by(&[1, 0]),
        ];
        assert_eq!(
            classify_strongly_integral_torus(&gens).unwrap(),
            TorusClass::Standard
        );
    }

    #[test]
    fn classify_non_standard() {
        let gens = [AffineMap::translation_by(&[1, 0]), shear(2, 3)];
        assert_eq!(
            classify_strongly_integral_torus(&gens).unwrap(),
            TorusClass::NonStandard { n: 2, p: 1, q: 3 }
        );
    }

    #[test]
    fn classify_rejects_reflection() {
        let refl = AffineMap::new(
            vec![vec![-1, 0], vec![0, -1]],
            vec![rational_int(0), rational_int(1)],
        )
        .unwrap();
        let gens = [AffineMap::translation_by(&[1, 0]), refl];
        assert_eq!(
            classify_strongly_integral_torus(&gens).unwrap(),
            TorusClass::Unrecognized
        );
    }

    #[test]
    fn non_unimodular_rejected() {
        let err = AffineMap::new(
            vec![vec![2, 0], vec![0, 1]],
            vec![rational_int(0), rational_int(0)],
        )
        .unwrap_err();
        assert_eq!(err, AffineError::NotUnimodular(BigInt::from(2)));
    }
}
