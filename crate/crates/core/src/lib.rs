//! Lattice index codes for the Gaussian broadcast channel with receiver side
//! information.
//!
//! The crate is organised bottom-up:
//!
//! * [`rings`]: exact arithmetic in ℤ, ℤ\[i\], ℤ\[ω\] and the Hurwitz integers.
//! * [`lattices`]: real lattices with exact Gram matrices, closest-point and
//!   shortest-vector search, coset enumeration and lattice sums.
//! * [`codes`]: Chinese-remainder and quaternionic constructions, explicit
//!   codes, labelled constellations and side-information gain analysis.
//! * [`simulate`]: Monte Carlo symbol error rates over AWGN.
//! * [`superpose`]: a three-receiver superposition scheme built on an index code.
//! * [`oracle`]: brute-force verifiers used by the tests and the CLI.
//! * [`descriptor`]: JSON descriptors for codes and lattices.
//!
//! Geometry is written once against [`Scalar`]; algebraic invariants run on
//! [`Rational`], simulation on [`Real`].

pub mod codes;
pub mod descriptor;
pub mod error;
pub mod lattices;
pub mod matrix;
pub mod oracle;
pub mod rings;
pub mod scalar;
pub mod simulate;
pub mod superpose;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::Scalar;

/// Exact scalar used for all algebraic checks.
pub type Rational = num_rational::Ratio<i128>;
/// Floating point scalar used for channel simulation.
pub type Real = f64;
/// Exact matrix.
pub type ExactMatrix = Matrix<Rational>;
/// Floating point matrix.
pub type RealMatrix = Matrix<Real>;
/// A point given by exact coordinates.
pub type ExactPoint = Vec<Rational>;
