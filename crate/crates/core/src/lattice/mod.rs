//! Integer bilinear lattices presented by Gram matrices.
//!
//! Builds the hyperbolic plane U, the E8 form (Cartan matrix, Bourbaki
//! numbering), its negation, and the rank-22 direct sum
//! `U ⊕ U ⊕ U ⊕ (-E8) ⊕ (-E8)` with basis
//! `(u, v, x, y, z, t, e8a_1..e8a_8, e8b_1..e8b_8)`.
//! Vectors may have polynomial coordinates; pairings are exact.

mod enumerate;

pub use enumerate::enumerate_by_norm;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactring::{MultiPoly, VarName};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("vector has {got} coordinates but the space has rank {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("matrix does not preserve the Gram form")]
    NotAnIsometry,
    #[error("enumeration requires a definite form")]
    IndefiniteSpace,
    #[error("no basis vector labelled `{0}`")]
    UnknownLabel(String),
}

/// An integer lattice with a chosen basis: a symmetric Gram matrix plus
/// labels for the basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeSpace {
    rank: usize,
    gram: Vec<Vec<i64>>,
    labels: Vec<String>,
}

/// A lattice vector in basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct IntVector(pub Vec<i64>);

/// A vector whose coordinates are polynomials in the parameter alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyVector(pub Vec<MultiPoly>);

/// An integer matrix known to preserve the Gram form (checked on
/// construction, never assumed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isometry {
    matrix: Vec<Vec<i64>>,
}

impl LatticeSpace {
    pub fn new(gram: Vec<Vec<i64>>, labels: Vec<String>) -> LatticeSpace {
        let rank = gram.len();
        assert!(gram.iter().all(|row| row.len() == rank), "gram not square");
        assert_eq!(labels.len(), rank, "label count must match rank");
        for i in 0..rank {
            for j in 0..rank {
                assert_eq!(gram[i][j], gram[j][i], "gram not symmetric");
            }
        }
        LatticeSpace { rank, gram, labels }
    }

    /// The hyperbolic plane: Gram matrix `(0 1; 1 0)`.
    pub fn hyperbolic_u(label_a: &str, label_b: &str) -> LatticeSpace {
        LatticeSpace::new(
            vec![vec![0, 1], vec![1, 0]],
            vec![label_a.to_owned(), label_b.to_owned()],
        )
    }

    /// E8 as the Cartan matrix of the E8 root system, Bourbaki node
    /// numbering (node 2 attached to node 4). Positive definite, even,
    /// determinant 1.
    pub fn e8() -> LatticeSpace {
        let mut gram = vec![vec![0i64; 8]; 8];
        for i in 0..8 {
            gram[i][i] = 2;
        }
        for (a, b) in [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)] {
            gram[a - 1][b - 1] = -1;
            gram[b - 1][a - 1] = -1;
        }
        let labels = (1..=8).map(|j| format!("e8_{j}")).collect();
        LatticeSpace::new(gram, labels)
    }

    /// The negation of E8: even, negative definite.
    pub fn minus_e8() -> LatticeSpace {
        LatticeSpace::e8().negated()
    }

    /// `U ⊕ U ⊕ U ⊕ (-E8) ⊕ (-E8)`, rank 22, signature (3, 19),
    /// determinant -1. Basis order: `u v x y z t e8a_1.. e8b_1..`.
    pub fn k3() -> LatticeSpace {
        let mut first = LatticeSpace::minus_e8();
        let mut second = LatticeSpace::minus_e8();
        first.labels = (1..=8).map(|j| format!("e8a_{j}")).collect();
        second.labels = (1..=8).map(|j| format!("e8b_{j}")).collect();
        LatticeSpace::direct_sum(&[
            LatticeSpace::hyperbolic_u("u", "v"),
            LatticeSpace::hyperbolic_u("x", "y"),
            LatticeSpace::hyperbolic_u("z", "t"),
            first,
            second,
        ])
    }

    pub fn direct_sum(parts: &[LatticeSpace]) -> LatticeSpace {
        let rank: usize = parts.iter().map(|p| p.rank).sum();
        let mut gram = vec![vec![0i64; rank]; rank];
        let mut labels = Vec::with_capacity(rank);
        let mut offset = 0;
        for part in parts {
            for i in 0..part.rank {
                for j in 0..part.rank {
                    gram[offset + i][offset + j] = part.gram[i][j];
                }
            }
            labels.extend(part.labels.iter().cloned());
            offset += part.rank;
        }
        LatticeSpace::new(gram, labels)
    }

    pub fn negated(&self) -> LatticeSpace {
        LatticeSpace {
            rank: self.rank,
            gram: self
                .gram
                .iter()
                .map(|row| row.iter().map(|&x| -x).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis_index(&self, label: &str) -> Result<usize, LatticeError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| LatticeError::UnknownLabel(label.to_owned()))
    }

    pub fn basis_vector(&self, label: &str) -> Result<IntVector, LatticeError> {
        let idx = self.basis_index(label)?;
        let mut coords = vec![0i64; self.rank];
        coords[idx] = 1;
        Ok(IntVector(coords))
    }

    fn check_rank(&self, len: usize) -> Result<(), LatticeError> {
        if len != self.rank {
            return Err(LatticeError::RankMismatch {
                expected: self.rank,
                got: len,
            });
        }
        Ok(())
    }

    /// Exact pairing of integer vectors.
    pub fn inner_int(&self, v: &IntVector, w: &IntVector) -> Result<i64, LatticeError> {
        self.check_rank(v.0.len())?;
        self.check_rank(w.0.len())?;
        let mut acc: i128 = 0;
        for (i, &vi) in v.0.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for (j, &wj) in w.0.iter().enumerate() {
                if wj == 0 {
                    continue;
                }
                acc += self.gram[i][j] as i128 * vi as i128 * wj as i128;
            }
        }
        Ok(i64::try_from(acc).expect("pairing overflows i64"))
    }

    /// Exact pairing `vᵀ · gram · w` of polynomial vectors.
    pub fn inner(&self, v: &PolyVector, w: &PolyVector) -> Result<MultiPoly, LatticeError> {
        self.check_rank(v.0.len())?;
        self.check_rank(w.0.len())?;
        let mut acc = MultiPoly::zero();
        for i in 0..self.rank {
            if v.0[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if self.gram[i][j] == 0 || w.0[j].is_zero() {
                    continue;
                }
                let g = MultiPoly::int(self.gram[i][j]);
                acc = &acc + &(&(&g * &v.0[i]) * &w.0[j]);
            }
        }
        Ok(acc)
    }

    pub fn norm_poly(&self, v: &PolyVector) -> Result<MultiPoly, LatticeError> {
        self.inner(v, v)
    }

    /// True iff `Mᵀ · gram · M = gram` exactly.
    pub fn is_isometry_matrix(&self, matrix: &[Vec<i64>]) -> bool {
        if matrix.len() != self.rank || matrix.iter().any(|row| row.len() != self.rank) {
            return false;
        }
        // (MᵀGM)_{ab} = Σ_{i,j} M_{ia} G_{ij} M_{jb}
        for a in 0..self.rank {
            for b in 0..self.rank {
                let mut acc: i128 = 0;
                for i in 0..self.rank {
                    if matrix[i][a] == 0 {
                        continue;
                    }
                    for j in 0..self.rank {
                        acc += matrix[i][a] as i128
                            * self.gram[i][j] as i128
                            * matrix[j][b] as i128;
                    }
                }
                if acc != self.gram[a][b] as i128 {
                    return false;
                }
            }
        }
        true
    }

    /// Inertia counts `(n_plus, n_minus, n_zero)` of the rational quadratic
    /// form, by exact congruence diagonalization. Zero diagonal pivots are
    /// repaired with the hyperbolic row/column combination before pivoting.
    pub fn signature(&self) -> (usize, usize, usize) {
        let mut a: Vec<Vec<BigRational>> = self
            .gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| BigRational::from_integer(BigInt::from(x)))
                    .collect()
            })
            .collect();
        let n = self.rank;
        let (mut plus, mut minus, mut zero) = (0usize, 0usize, 0usize);
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                    // row_k ± row_j and col_k ± col_j; one of the signs makes
                    // the pivot nonzero because a[k][j] ≠ 0
                    for sign in [BigInt::one(), -BigInt::one()] {
                        let s = BigRational::from_integer(sign);
                        let mut b = a.clone();
                        for col in 0..n {
                            let add = &b[j][col] * &s;
                            b[k][col] += add;
                        }
                        for row in 0..n {
                            let add = &b[row][j] * &s;
                            b[row][k] += add;
                        }
                        if !b[k][k].is_zero() {
                            a = b;
                            break;
                        }
                    }
                } else {
                    zero += 1;
                    continue;
                }
            }
            let pivot = a[k][k].clone();
            if pivot.is_positive() {
                plus += 1;
            } else {
                minus += 1;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                for col in 0..n {
                    let sub = &a[k][col] * &f;
                    a[i][col] -= sub;
                }
                for row in 0..n {
                    let sub = &a[row][k] * &f;
                    a[row][i] -= sub;
                }
            }
        }
        (plus, minus, zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let m: Vec<Vec<BigInt>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        bareiss_determinant(m)
    }

    /// Even lattices have every diagonal Gram entry even.
    pub fn is_even(&self) -> bool {
        (0..self.rank).all(|i| self.gram[i][i] % 2 == 0)
    }
}

impl IntVector {
    pub fn zero(rank: usize) -> IntVector {
        IntVector(vec![0; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn negated(&self) -> IntVector {
        IntVector(self.0.iter().map(|&x| -x).collect())
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        assert_eq!(self.0.len(), other.0.len());
        IntVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    pub fn scaled(&self, k: i64) -> IntVector {
        IntVector(self.0.iter().map(|&x| x * k).collect())
    }

    /// gcd of the coordinates; 0 for the zero vector.
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| gcd(g, x.abs()))
    }

    pub fn to_poly(&self) -> PolyVector {
        PolyVector(self.0.iter().map(|&x| MultiPoly::int(x)).collect())
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl PolyVector {
    pub fn zero(rank: usize) -> PolyVector {
        PolyVector(vec![MultiPoly::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &PolyVector) -> PolyVector {
        assert_eq!(self.0.len(), other.0.len());
        PolyVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &PolyVector) -> PolyVector {
        assert_eq!(self.0.len(), other.0.len());
        PolyVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scaled(&self, c: &MultiPoly) -> PolyVector {
        PolyVector(self.0.iter().map(|p| p * c).collect())
    }

    pub fn substitute(&self, bindings: &BTreeMap<VarName, MultiPoly>) -> PolyVector {
        PolyVector(self.0.iter().map(|p| p.substitute(bindings)).collect())
    }

    /// Some(IntVector) when every coordinate is an integer constant.
    pub fn as_int_vector(&self) -> Option<IntVector> {
        let mut coords = Vec::with_capacity(self.0.len());
        for p in &self.0 {
            let c = p.as_constant()?;
            if !c.denom().is_one() {
                return None;
            }
            coords.push(i64::try_from(c.numer()).ok()?);
        }
        Some(IntVector(coords))
    }
}

impl Isometry {
    /// Validates `Mᵀ·gram·M = gram`; refuses anything else.
    pub fn new(space: &LatticeSpace, matrix: Vec<Vec<i64>>) -> Result<Isometry, LatticeError> {
        if !space.is_isometry_matrix(&matrix) {
            return Err(LatticeError::NotAnIsometry);
        }
        Ok(Isometry { matrix })
    }

    pub fn identity(rank: usize) -> Isometry {
        let mut matrix = vec![vec![0i64; rank]; rank];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 1;
        }
        Isometry { matrix }
    }

    /// Builds the matrix sending each listed basis vector to an integer
    /// combination of basis vectors, identity on everything unlisted, then
    /// validates it against the Gram form.
    pub fn from_basis_images(
        space: &LatticeSpace,
        images: &[(&str, &[(&str, i64)])],
    ) -> Result<Isometry, LatticeError> {
        let rank = space.rank();
        let mut matrix = Isometry::identity(rank).matrix;
        for (src, combo) in images {
            let col = space.basis_index(src)?;
            for row in matrix.iter_mut() {
                row[col] = 0;
            }
            for (dst, coeff) in *combo {
                let row = space.basis_index(dst)?;
                matrix[row][col] += coeff;
            }
        }
        Isometry::new(space, matrix)
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply_int(&self, v: &IntVector) -> IntVector {
        assert_eq!(v.0.len(), self.matrix.len());
        IntVector(
            self.matrix
                .iter()
                .map(|row| row.iter().zip(&v.0).map(|(&m, &x)| m * x).sum())
                .collect(),
        )
    }

    pub fn apply(&self, v: &PolyVector) -> PolyVector {
        assert_eq!(v.0.len(), self.matrix.len());
        PolyVector(
            self.matrix
                .iter()
                .map(|row| {
                    let mut acc = MultiPoly::zero();
                    for (&m, p) in row.iter().zip(&v.0) {
                        if m != 0 && !p.is_zero() {
                            acc = &acc + &p.scale(&BigRational::from_integer(BigInt::from(m)));
                        }
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        let n = self.matrix.len();
        assert_eq!(n, other.matrix.len());
        let mut out = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    acc += self.matrix[i][k] as i128 * other.matrix[k][j] as i128;
                }
                out[i][j] = i64::try_from(acc).expect("isometry product overflows i64");
            }
        }
        Isometry { matrix: out }
    }
}

/// Fraction-free determinant of an integer matrix.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "matrix not square");
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Rank over the rationals of a set of integer row vectors.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut rank = 0;
    let cols = m.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(found) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, found);
        for r in pivot_row + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &m[pivot_row][col];
            for c in col..cols {
                let sub = &m[pivot_row][c] * &f;
                m[r][c] -= sub;
            }
        }
        rank += 1;
        pivot_row += 1;
        if pivot_row == m.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_gram_and_determinant() {
        let u = LatticeSpace::hyperbolic_u("u", "v");
        assert_eq!(u.gram(), [vec![0, 1], vec![1, 0]]);
        assert_eq!(u.determinant(), BigInt::from(-1));
        assert_eq!(u.signature(), (1, 1, 0));
        assert!(u.is_even());
    }

    #[test]
    fn e8_is_even_positive_definite_unimodular() {
        let e8 = LatticeSpace::e8();
        assert_eq!(e8.signature(), (8, 0, 0));
        assert_eq!(e8.determinant(), BigInt::one());
        assert!(e8.is_even());
        let m = LatticeSpace::minus_e8();
        assert_eq!(m.signature(), (0, 8, 0));
        assert!(m.is_even());
        assert!(m.gram().iter().enumerate().all(|(i, row)| row[i] == -2));
    }

    #[test]
    fn k3_shape() {
        let k3 = LatticeSpace::k3();
        assert_eq!(k3.rank(), 22);
        assert_eq!(k3.labels()[0..6], ["u", "v", "x", "y", "z", "t"]);
        assert_eq!(k3.labels()[6], "e8a_1");
        assert_eq!(k3.labels()[14], "e8b_1");
        assert_eq!(k3.signature(), (3, 19, 0));
        assert_eq!(k3.determinant(), BigInt::from(-1));
        assert!(k3.is_even());
    }

    #[test]
    fn k3_determinant_agrees_with_block_product() {
        // independent route: det of a block-diagonal form is the product of
        // the block determinants
        let blocks = [
            LatticeSpace::hyperbolic_u("u", "v").determinant(),
            LatticeSpace::hyperbolic_u("x", "y").determinant(),
            LatticeSpace::hyperbolic_u("z", "t").determinant(),
            LatticeSpace::minus_e8().determinant(),
            LatticeSpace::minus_e8().determinant(),
        ];
        let product: BigInt = blocks.into_iter().product();
        assert_eq!(LatticeSpace::k3().determinant(), product);
    }

    #[test]
    fn basis_pairings() {
        let k3 = LatticeSpace::k3();
        let u = k3.basis_vector("u").unwrap();
        let v = k3.basis_vector("v").unwrap();
        assert_eq!(k3.inner_int(&u, &u).unwrap(), 0);
        assert_eq!(k3.inner_int(&u, &v).unwrap(), 1);
        let poly = k3.inner(&u.to_poly(), &u.to_poly()).unwrap();
        assert!(poly.is_zero());
    }

    #[test]
    fn doubling_u_is_not_an_isometry() {
        // u ↦ 2u scales (u, v) to 2, so the validation must refuse it
        let k3 = LatticeSpace::k3();
        let mut m = Isometry::identity(22).matrix;
        m[0][0] = 2;
        assert!(!k3.is_isometry_matrix(&m));
        assert_eq!(
            Isometry::new(&k3, m).unwrap_err(),
            LatticeError::NotAnIsometry
        );
    }

    #[test]
    fn identity_is_an_isometry() {
        let k3 = LatticeSpace::k3();
        assert!(k3.is_isometry_matrix(Isometry::identity(22).matrix()));
    }

    #[test]
    fn circle_generator_is_an_isometry() {
        let k3 = LatticeSpace::k3();
        let phi = Isometry::from_basis_images(
            &k3,
            &[("v", &[("v", 1), ("y", 1)]), ("x", &[("x", 1), ("u", -1)])],
        );
        assert!(phi.is_ok());
    }

    #[test]
    fn rank_mismatch_reported() {
        let k3 = LatticeSpace::k3();
        let short = PolyVector::zero(3);
        assert_eq!(
            k3.inner(&short, &short).unwrap_err(),
            LatticeError::RankMismatch {
                expected: 22,
                got: 3
            }
        );
    }

    #[test]
    fn rational_rank_detects_dependence() {
        assert_eq!(rational_rank(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(rational_rank(&[vec![2, 4], vec![1, 2]]), 1);
        assert_eq!(rational_rank(&[vec![0, 0]]), 0);
    }
}
