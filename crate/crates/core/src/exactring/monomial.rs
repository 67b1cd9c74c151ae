use std::cmp::Ordering;
use std::fmt;

use super::var::VarName;

/// A monomial: a sparse exponent vector over the fixed alphabet.
///
/// Entries are sorted by variable and never carry exponent zero, so equal
/// monomials are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(VarName, u32)>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: VarName) -> Monomial {
        Monomial { exps: vec![(v, 1)] }
    }

    pub fn from_exps(mut exps: Vec<(VarName, u32)>) -> Monomial {
        exps.retain(|&(_, k)| k > 0);
        exps.sort_by_key(|&(v, _)| v);
        for pair in exps.windows(2) {
            assert!(pair[0].0 != pair[1].0, "duplicate variable in monomial");
        }
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&(_, k)| k).sum()
    }

    pub fn exponent_of(&self, v: VarName) -> u32 {
        self.exps
            .iter()
            .find(|&&(w, _)| w == v)
            .map_or(0, |&(_, k)| k)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarName> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn exps(&self) -> &[(VarName, u32)] {
        &self.exps
    }

    pub fn contains(&self, v: VarName) -> bool {
        self.exponent_of(v) > 0
    }

    /// Exponents are machine words; overflow is a hard error by design
    /// (nothing in this domain has degree anywhere near the limit).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(VarName, u32)> = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (va, ka) = self.exps[i];
            let (vb, kb) = other.exps[j];
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push((va, ka));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((vb, kb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((va, ka.checked_add(kb).expect("monomial exponent overflow")));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial { exps: out }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self
                .exps
                .iter()
                .map(|&(v, e)| (v, e.checked_mul(k).expect("monomial exponent overflow")))
                .collect(),
        }
    }

    /// Splits into the part supported on `vars` and the rest.
    pub fn split_on<F: Fn(VarName) -> bool>(&self, in_set: F) -> (Monomial, Monomial) {
        let (inside, outside) = self.exps.iter().partition(|&&(v, _)| in_set(v));
        (Monomial { exps: inside }, Monomial { exps: outside })
    }
}

/// Graded lexicographic order: total degree first; ties broken at the first
/// variable (in alphabet order) where the exponents differ, higher exponent
/// winning.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (va, ka) = self.exps[i];
            let (vb, kb) = other.exps[j];
            match va.cmp(&vb) {
                // `self` has a positive exponent on an earlier variable
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match ka.cmp(&kb) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    ord => return ord,
                },
            }
        }
        // same total degree and one is a prefix of the other: only possible
        // when both are exhausted
        debug_assert!(i == self.exps.len() && j == other.exps.len());
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for &(v, k) in &self.exps {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if k == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{k}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_degree_dominates() {
        let s = Monomial::var(VarName::S);
        let s2 = s.pow(2);
        assert!(Monomial::one() < s);
        assert!(s < s2);
    }

    #[test]
    fn graded_lex_earlier_variable_wins_ties() {
        // e1*e2 and q^2 have the same degree; e1 comes first in the
        // alphabet, so e1*e2 is the larger monomial and q^2 sorts first.
        let e1e2 = Monomial::var(VarName::e(1)).mul(&Monomial::var(VarName::e(2)));
        let q2 = Monomial::var(VarName::Q).pow(2);
        assert!(q2 < e1e2);
        // s^2 beats s*r: same degree, higher exponent on s.
        let s2 = Monomial::var(VarName::S).pow(2);
        let sr = Monomial::var(VarName::S).mul(&Monomial::var(VarName::R));
        assert!(sr < s2);
    }

    #[test]
    fn display_forms() {
        let m = Monomial::var(VarName::Q).pow(2);
        assert_eq!(m.to_string(), "q^2");
        let m = Monomial::var(VarName::e(1)).mul(&Monomial::var(VarName::e(2)));
        assert_eq!(m.to_string(), "e1*e2");
        assert_eq!(Monomial::one().to_string(), "1");
    }
}
