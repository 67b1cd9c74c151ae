use std::fmt;

use thiserror::Error;

/// Names of every variable the toolkit computes with, in alphabet order.
///
/// The order fixes the monomial order for the whole crate: `s < r < e1 < …
/// < e8 < A < … < F < n < p < q < d1_1 < … < d2_8`.
const ALPHABET: [&str; 35] = [
    "s", "r", // real parameters of the family maps
    "e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", // coordinates of the Besicovitch vector
    "A", "B", "C", "D", "E", "F", // hyperbolic coefficients of a root candidate
    "n", "p", "q", // torus family integers
    "d1_1", "d1_2", "d1_3", "d1_4", "d1_5", "d1_6", "d1_7", "d1_8",
    "d2_1", "d2_2", "d2_3", "d2_4", "d2_5", "d2_6", "d2_7", "d2_8",
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VarError {
    #[error("unknown variable symbol `{0}`")]
    UnknownSymbol(String),
}

/// A variable of the fixed alphabet.
///
/// Only the 35 symbols listed in [`VarName::ALL`] exist; anything else is
/// rejected at parse time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName(u8);

impl VarName {
    pub const S: VarName = VarName(0);
    pub const R: VarName = VarName(1);
    pub const A: VarName = VarName(10);
    pub const B: VarName = VarName(11);
    pub const C: VarName = VarName(12);
    pub const D: VarName = VarName(13);
    pub const E: VarName = VarName(14);
    pub const F: VarName = VarName(15);
    pub const N: VarName = VarName(16);
    pub const P: VarName = VarName(17);
    pub const Q: VarName = VarName(18);

    pub const COUNT: usize = ALPHABET.len();

    /// `e_j`, 1-based, `j ∈ 1..=8`.
    pub fn e(j: usize) -> VarName {
        assert!((1..=8).contains(&j), "e index out of range: {j}");
        VarName(1 + j as u8)
    }

    /// `d1_j`, 1-based: the j-th coordinate of the root part in the first
    /// `-E8` summand.
    pub fn d1(j: usize) -> VarName {
        assert!((1..=8).contains(&j), "d1 index out of range: {j}");
        VarName(18 + j as u8)
    }

    /// `d2_j`, 1-based, second `-E8` summand.
    pub fn d2(j: usize) -> VarName {
        assert!((1..=8).contains(&j), "d2 index out of range: {j}");
        VarName(26 + j as u8)
    }

    /// The six hyperbolic-coefficient variables in order `A..F`.
    pub fn hyperbolic() -> [VarName; 6] {
        [Self::A, Self::B, Self::C, Self::D, Self::E, Self::F]
    }

    /// All `e_j` variables.
    pub fn e_all() -> [VarName; 8] {
        [1, 2, 3, 4, 5, 6, 7, 8].map(VarName::e)
    }

    pub fn parse(symbol: &str) -> Result<VarName, VarError> {
        ALPHABET
            .iter()
            .position(|&name| name == symbol)
            .map(|i| VarName(i as u8))
            .ok_or_else(|| VarError::UnknownSymbol(symbol.to_owned()))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn symbol(self) -> &'static str {
        ALPHABET[self.0 as usize]
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrips_every_symbol() {
        for i in 0..VarName::COUNT {
            let v = VarName(i as u8);
            assert_eq!(VarName::parse(v.symbol()), Ok(v));
        }
    }

    #[test]
    fn unknown_symbols_rejected() {
        assert!(VarName::parse("x").is_err());
        assert!(VarName::parse("e9").is_err());
        assert!(VarName::parse("").is_err());
    }

    #[test]
    fn alphabet_order_matches_construction() {
        assert!(VarName::S < VarName::R);
        assert!(VarName::R < VarName::e(1));
        assert!(VarName::e(8) < VarName::A);
        assert!(VarName::F < VarName::N);
        assert!(VarName::Q < VarName::d1(1));
        assert!(VarName::d1(8) < VarName::d2(1));
    }
}
