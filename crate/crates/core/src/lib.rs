//! Exact computations with crystallographic (virtually abelian) groups.
//!
//! The crate models a crystallographic group as an extension
//! `1 -> Z^n -> G -> H -> 1` given by integer holonomy matrices and rational
//! translation vectors, and builds on top of that:
//!
//! * characters of the translation lattice as points of the dual torus, with
//!   exact root-of-unity coordinates and generic circle symbols
//!   ([`character`]),
//! * stabilizer extensions and induced representations as monomial matrices
//!   over the symbol algebra ([`induction`]),
//! * limits of representation families at the trivial character together with
//!   their decomposition into characters of the finite quotient ([`limits`]),
//! * exact group-algebra arithmetic, the conditional expectation onto the
//!   lattice subalgebra and the quasi-basis matrix embedding ([`algebra`]),
//! * recursive connectivity-style certificates for torsion-free groups with
//!   cyclic holonomy ([`certify`]).
//!
//! All group, character and algebra arithmetic is exact (arbitrary-precision
//! rationals); floating point appears only when a representation is evaluated
//! at explicit points of the unit circle.

pub mod algebra;
pub mod builtin;
pub mod certify;
pub mod character;
pub mod error;
pub mod group;
pub mod holonomy;
pub mod induction;
pub mod json;
pub mod limits;
pub mod linalg;
pub mod monomial;
pub mod text;

pub use error::Error;
pub use group::{CrystGroup, GroupElement, Word};
pub use holonomy::HolonomyGroup;
pub use monomial::{Monomial, SymbolTable};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Arbitrary-precision rational scalar used for all exact arithmetic.
pub type Rat = num_rational::BigRational;

/// Build a rational from an integer pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    use num_bigint::BigInt;
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Build a rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    use num_bigint::BigInt;
    Rat::from_integer(BigInt::from(n))
}
