//! Exact computation of the Kazhdan-Lusztig-style polynomial families of
//! Hecke and generalized Temperley-Lieb algebras over Coxeter groups.
//!
//! The crate computes, entirely in `Z[q^{1/2}, q^{-1/2}]`:
//!
//! - R-polynomials and Kazhdan-Lusztig P-polynomials of the Hecke algebra,
//!   with the bar involution and the basis `C'_w`;
//! - the D-polynomials rewriting non-fully-commutative standard basis
//!   images into the Temperley-Lieb t-basis;
//! - the a-polynomials (t-basis coordinates of inverses) and the
//!   L-polynomials (t-basis coordinates of the bar-invariant IC basis
//!   `c_w`), each by two or more independent routes;
//! - the projection from the Hecke algebra onto the Temperley-Lieb
//!   quotient, including the dichotomy check `sigma(C'_w) ∈ {c_w, 0}` on
//!   non-branching graphs and its failure on branching ones.
//!
//! Closed-formula routes are gated: they refuse graphs that are not
//! (finite irreducible or affine) non-branching graphs other than affine
//! F4, while the general recursions work on any Coxeter graph.

pub mod coxeter;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod oracle;
pub mod table;
pub mod tl;
pub mod verify;

pub use error::{Error, Result};
