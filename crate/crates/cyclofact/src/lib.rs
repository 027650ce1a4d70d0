//! Exact computational algebra over finite fields: composed products of
//! polynomials, explicit factorizations of cyclotomic polynomials of the
//! form Phi_{2^n r}, recursive constructions of irreducible polynomials of
//! growing degree, and linear-complexity analysis of products of linear
//! recurring sequences.  Every factorization the crate emits is certified
//! against independent checks (Rabin irreducibility, product identities,
//! and a root-orbit factorization oracle).

pub mod arith;
pub mod composed;
pub mod construct;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod lrs;
pub mod poly;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Digits, FieldElement, FieldTower};
pub use poly::Polynomial;
