//! Exact computational algebra for finite Heisenberg group actions.
//!
//! The crate builds the degree-`n` Schrodinger representation of the finite
//! Heisenberg group, manipulates semi-invariants and their linear systems
//! with Groebner-basis certificates, computes Molien series and torus
//! invariants, and assembles step-by-step rationality certificates for the
//! quotient fields, every coefficient kept exact in a cyclotomic field.
//!
//! Module map:
//! - [`cyclotomic`]: arithmetic in `Q(zeta_N)` and normalized roots of unity.
//! - [`laurent`]: sparse Laurent polynomials, scaled monomial maps, parsing.
//! - [`intlattice`]: integer matrices, HNF/SNF, lattices of characters.
//! - [`heisenberg`]: the group, its representation, spectra, Molien series.
//! - [`torus`]: diagonalizable actions and Fischer-style invariant tori.
//! - [`rationalize`]: rationality certificates for the quotient tower.
//! - [`linsys`]: rational polynomial systems and basepoint-freeness checks.
//! - [`report`]: structured, reproducible verification reports.

pub mod cyclotomic;
pub mod heisenberg;
pub mod intlattice;
pub mod laurent;
pub mod linsys;
pub mod rationalize;
pub mod report;
pub mod torus;
