//! Resultants for eliminating one variable from a pair of polynomial
//! equations.
//!
//! The degrees arising here are at most 2, so the Sylvester matrix is tiny
//! and a cofactor expansion over the polynomial ring is all that is needed.
//! The resultant vanishing is a necessary condition for a common root, which
//! is the direction the exclusion arguments use.

use super::{MultiPoly, VarName};

/// Determinant of a small square matrix over the polynomial ring, by
/// cofactor expansion along the first row.
fn poly_determinant(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    match n {
        0 => MultiPoly::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = MultiPoly::zero();
            for (col, entry) in m[0].iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MultiPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != col)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let cofactor = entry * &poly_determinant(&minor);
                if col % 2 == 0 {
                    acc = &acc + &cofactor;
                } else {
                    acc = &acc - &cofactor;
                }
            }
            acc
        }
    }
}

/// `Res_v(p, q)`: the Sylvester determinant of `p` and `q` viewed as
/// univariate polynomials in `v`. Zero when either polynomial is zero or
/// both have degree 0 in `v` (degenerate cases never used for elimination).
pub fn resultant(p: &MultiPoly, q: &MultiPoly, v: VarName) -> MultiPoly {
    let pc = p.coefficients_in(v);
    let qc = q.coefficients_in(v);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    if p.is_zero() || q.is_zero() {
        return MultiPoly::zero();
    }
    if m == 0 && n == 0 {
        return MultiPoly::zero();
    }
    if m == 0 {
        return pc[0].pow(n as u32);
    }
    if n == 0 {
        return qc[0].pow(m as u32);
    }
    let size = m + n;
    let mut sylvester = vec![vec![MultiPoly::zero(); size]; size];
    // n rows of p's coefficients, highest degree first, then m rows of q's
    for row in 0..n {
        for (k, c) in pc.iter().enumerate() {
            sylvester[row][row + (m - k)] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in qc.iter().enumerate() {
            sylvester[n + row][row + (n - k)] = c.clone();
        }
    }
    poly_determinant(&sylvester)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(v: VarName) -> MultiPoly {
        MultiPoly::var(v)
    }

    #[test]
    fn resultant_of_shifted_linears() {
        // Res_s(s - A, s - B) = ±(A - B)
        let p = &var(VarName::S) - &var(VarName::A);
        let q = &var(VarName::S) - &var(VarName::B);
        let res = resultant(&p, &q, VarName::S);
        let diff = &var(VarName::B) - &var(VarName::A);
        assert!(res == diff || res == -&diff);
    }

    #[test]
    fn resultant_detects_common_root() {
        // p = (s - A)(s - B), q = (s - A): share the root s = A
        let p = &(&var(VarName::S) - &var(VarName::A)) * &(&var(VarName::S) - &var(VarName::B));
        let q = &var(VarName::S) - &var(VarName::A);
        assert!(resultant(&p, &q, VarName::S).is_zero());
    }

    #[test]
    fn resultant_quadratic_vs_linear() {
        // Res_s(s² - 2, s - 3) = 9 - 2 = 7
        let p = &var(VarName::S).pow(2) - &MultiPoly::int(2);
        let q = &var(VarName::S) - &MultiPoly::int(3);
        assert_eq!(resultant(&p, &q, VarName::S), MultiPoly::int(7));
    }

    #[test]
    fn resultant_two_quadratics() {
        // Res_s((s-1)(s-2), (s-3)(s-4)) = (1-3)(1-4)(2-3)(2-4) = 12
        let lin = |c: i64| &var(VarName::S) - &MultiPoly::int(c);
        let p = &lin(1) * &lin(2);
        let q = &lin(3) * &lin(4);
        assert_eq!(resultant(&p, &q, VarName::S), MultiPoly::int(12));
    }
}
