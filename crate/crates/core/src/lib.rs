//! Crystal-style monomial bases, branching and weight multiplicities for
//! finite-dimensional irreducible modules of `sl(l+1)`.
//!
//! Modules of type `A_l` are indexed by dominant weights in fundamental
//! weight coordinates. A basis of `V(λ)` is given by ordered products of
//! divided powers of simple root vectors applied to the highest weight
//! vector, indexed by triangular arrays `K` (see [`MonomialIndex`]).

pub mod basis;
pub mod branch;
pub mod error;
pub mod monomial;
pub mod mult;
pub mod oracle;
pub mod pbw;
pub mod rootsys;
pub mod verify;

pub use basis::{count_basis, enumerate_basis, enumerate_pi_prime, BasisIter, PiPrimeElement};
pub use branch::{branch, BranchComponent};
pub use error::{Error, Result};
pub use monomial::{ExponentVector, MonomialIndex};
pub use mult::{Character, DimMethod, Method, MultEngine};
pub use pbw::{Coefficient, FactorWord, PbwPolynomial, Straightener, Strategy};
pub use rootsys::{AlphaVector, Rank, RootInterval, Weight};

/// Exact counts: dimensions and multiplicities.
pub type Count = num_bigint::BigUint;

/// PBW polynomial with unbounded integer coefficients.
pub type PbwPoly = PbwPolynomial<num_bigint::BigInt>;
