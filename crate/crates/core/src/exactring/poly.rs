use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::var::VarName;

/// Multivariate polynomial over the fixed alphabet with exact rational
/// coefficients.
///
/// The term map is canonical: zero coefficients are never stored and the
/// keys are ordered by the graded-lex monomial order, so two polynomials are
/// equal exactly when their maps are. No floating point anywhere.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero() -> MultiPoly {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> MultiPoly {
        MultiPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> MultiPoly {
        let mut p = MultiPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn int(c: i64) -> MultiPoly {
        MultiPoly::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: VarName) -> MultiPoly {
        let mut p = MultiPoly::zero();
        p.terms.insert(Monomial::var(v), BigRational::one());
        p
    }

    pub fn monomial(m: Monomial, c: BigRational) -> MultiPoly {
        let mut p = MultiPoly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Some(c) when the polynomial is the constant c (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: VarName) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent_of(v))
            .max()
            .unwrap_or(0)
    }

    /// Highest total degree among the monomial parts supported on `vars`.
    pub fn degree_in_set(&self, vars: &BTreeSet<VarName>) -> u32 {
        self.terms
            .keys()
            .map(|m| m.split_on(|v| vars.contains(&v)).0.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn contains_var(&self, v: VarName) -> bool {
        self.terms.keys().any(|m| m.contains(v))
    }

    pub fn vars_used(&self) -> BTreeSet<VarName> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    /// Simultaneous substitution. Unbound variables pass through unchanged.
    pub fn substitute(&self, bindings: &BTreeMap<VarName, MultiPoly>) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (mono, coeff) in &self.terms {
            let mut factor = MultiPoly::constant(coeff.clone());
            for &(v, k) in mono.exps() {
                let base = match bindings.get(&v) {
                    Some(image) => image.pow(k),
                    None => MultiPoly::monomial(Monomial::var(v).pow(k), BigRational::one()),
                };
                factor = &factor * &base;
            }
            out = &out + &factor;
        }
        out
    }

    /// Substitution of constants only: strips each bound variable from the
    /// monomial and folds `value^exponent` into the coefficient. One pass,
    /// no polynomial multiplication.
    pub fn eval_partial(&self, values: &BTreeMap<VarName, BigRational>) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (mono, coeff) in &self.terms {
            let mut c = coeff.clone();
            let mut kept: Vec<(VarName, u32)> = Vec::new();
            for &(v, k) in mono.exps() {
                match values.get(&v) {
                    Some(val) => {
                        for _ in 0..k {
                            c *= val;
                        }
                    }
                    None => kept.push((v, k)),
                }
            }
            out.add_term(Monomial::from_exps(kept), c);
        }
        out
    }

    /// Groups terms by their monomial part in `vars`. The residual
    /// polynomials contain no variable from `vars`, and
    /// `Σ key·residual` reassembles the original polynomial exactly.
    pub fn coefficient_split(&self, vars: &BTreeSet<VarName>) -> BTreeMap<Monomial, MultiPoly> {
        let mut out: BTreeMap<Monomial, MultiPoly> = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            let (key, residual) = mono.split_on(|v| vars.contains(&v));
            out.entry(key)
                .or_default()
                .add_term(residual, coeff.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `v`;
    /// index k holds the coefficient of `v^k` (a polynomial in the
    /// remaining variables).
    pub fn coefficients_in(&self, v: VarName) -> Vec<MultiPoly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![MultiPoly::zero(); deg + 1];
        for (mono, coeff) in &self.terms {
            let k = mono.exponent_of(v) as usize;
            let (_, rest) = mono.split_on(|w| w == v);
            out[k].add_term(rest, coeff.clone());
        }
        out
    }

    /// Substitutes `v ↦ num/den` and clears the denominator: returns
    /// `den^deg_v(self) · self|_{v = num/den}`, which is again a polynomial.
    /// For nonzero constant `den` this scales the equation `self = 0` by a
    /// nonzero factor, so the solution set is unchanged.
    pub fn pseudo_substitute(&self, v: VarName, num: &MultiPoly, den: &MultiPoly) -> MultiPoly {
        let coeffs = self.coefficients_in(v);
        let deg = coeffs.len() - 1;
        let mut out = MultiPoly::zero();
        for (k, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = &(&c * &num.pow(k as u32)) * &den.pow((deg - k) as u32);
            out = &out + &term;
        }
        out
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        l
    }

    /// Integer-coefficient multiple of `self`: all denominators cleared.
    pub fn cleared(&self) -> MultiPoly {
        let l = self.denominator_lcm();
        self.scale(&BigRational::from_integer(l))
    }

    /// Canonical integer form of the equation `self = 0`: denominators
    /// cleared, content divided out, leading coefficient positive.
    /// Zero stays zero.
    pub fn primitive_normalized(&self) -> MultiPoly {
        if self.is_zero() {
            return MultiPoly::zero();
        }
        let cleared = self.cleared();
        let mut content = BigInt::zero();
        for c in cleared.terms.values() {
            content = content.gcd(&c.numer().clone());
        }
        let mut out = cleared.scale(&BigRational::from_integer(content).recip());
        let lead = out
            .terms
            .values()
            .next_back()
            .expect("nonzero polynomial has a leading term");
        if lead.is_negative() {
            out = -&out;
        }
        out
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                $trait::$method(&self, rhs)
            }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// Serializes as the display string; reports never need the term map.
impl serde::Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Terms in ascending monomial order, coefficients as `p/q` with the
/// denominator omitted when 1, e.g. `4*q^2 + (-2)*e1*e2`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (mono, coeff) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let coeff_str = if coeff.is_negative() {
                format!("({coeff})")
            } else {
                coeff.to_string()
            };
            if mono.is_one() {
                f.write_str(&coeff_str)?;
            } else if coeff.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{coeff_str}*{mono}")?;
            }
        }
        Ok(())
    }
}
