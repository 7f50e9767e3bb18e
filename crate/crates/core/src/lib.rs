//! Knot Floer complexes of L-space knots and of Whitehead doubles of
//! `T_{2,2m+1}`, with the concordance invariants `τ`, `d(S³₁(K))` and
//! `δ(D(K))` computed from them.
//!
//! Module map:
//! - [`laurent`]: exact Laurent polynomials, semigroup route to torus-knot
//!   Alexander polynomials.
//! - [`staircase`]: staircase complexes and closed-form invariants.
//! - [`filtered`]: general filtered complexes, basis changes, removal of
//!   cross-summand arrows, tensor products.
//! - [`homology`]: GF(2) linear algebra, `d(S³₁)` by the `U`-tower search,
//!   acyclicity certificates.
//! - [`doubles`]: the complex of `D(T_{2,2m+1})`, its splitting, `δ(D²)`,
//!   and the iterate classification.

pub mod doubles;
pub mod error;
pub mod filtered;
pub mod gf2;
pub mod homology;
pub mod laurent;
pub mod staircase;

pub use error::{Error, Result};
pub use filtered::{BasisChange, FilteredComplex};
pub use laurent::LaurentPoly;
pub use staircase::Staircase;
