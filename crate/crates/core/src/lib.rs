//! Symbolic verification of identities in anticommutative multiplicative
//! Hom-algebras `(A, ·, α)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`term`]: raw term trees, the identity DSL (parser, printer) and the
//!   `J` / `G` macros.
//! * [`normal`]: canonical normal forms in the free anticommutative
//!   multiplicative Hom-algebra.
//! * [`identity`]: identities, substitution, full polarization and the
//!   built-in catalog.
//! * [`engine`]: bounded consequence search with exact certificates, plus the
//!   scripted replay of the Hom-Malcev equivalence proof.
//! * [`algebra`]: finite-dimensional algebras given by structure constants,
//!   used as a semantic oracle.
//! * [`corpus`]: seeded random generators for property checks.
//!
//! All symbolic types are generic over a [`Scalar`]; the aliases below fix the
//! exact rational instantiation used throughout the CLI.

pub mod algebra;
pub mod corpus;
pub mod engine;
pub mod identity;
pub mod normal;
pub mod scalar;
pub mod term;

pub use scalar::{ExactScalar, Scalar};

/// Exact rational coefficients (arbitrary precision).
pub type Rational = num_rational::BigRational;

pub type Expr = term::RawExpr<Rational>;
pub type Poly = normal::MPoly<Rational>;
pub type Ident = identity::Identity<Rational>;
pub type Cert = engine::Certificate<Rational>;
pub type Algebra = algebra::AlgebraSpec<Rational>;
pub type Elem = algebra::Element<Rational>;

pub type PolyF64 = normal::MPoly<f64>;
pub type AlgebraF64 = algebra::AlgebraSpec<f64>;
