//! Exact-arithmetic verification of lattice constructions over the K3
//! lattice `U ⊕ U ⊕ U ⊕ (-E8) ⊕ (-E8)`.
//!
//! The crate checks, with no floating point anywhere:
//!
//! * lattice sanity — signature, determinant, parity, short-vector counts;
//! * that the declared symmetries of three parametric families are genuine
//!   isometries and act on the parameters by integral affine shifts;
//! * period-domain membership of the families as exact polynomial
//!   identities, with positivity certified through the `|(e,e)| ≤ 1/2`
//!   normalization of a formally independent vector e;
//! * the linear variation of the polarization component;
//! * recognition of the strongly integral affine 2-torus normal forms;
//! * exclusion of square `-2` vectors orthogonal to a family triple, by
//!   exact elimination with branch certificates, plus bounded root searches
//!   at rational parameter points.
//!
//! Input parsing is limited to rational literals (`p/q`) and report JSON;
//! both surfaces are fuzzed in `fuzz/`.

pub mod affine;
pub mod exactring;
pub mod families;
pub mod lattice;
pub mod period;
pub mod report;
pub mod rootcheck;
