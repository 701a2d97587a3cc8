//! Exact lattice arithmetic and intersection-number calculus for the known
//! irreducible symplectic varieties.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`]: exact rational matrices, determinants, ranks, Smith normal form.
//! * [`lattice`]: integral lattices, the lattice expression language and
//!   invariants (discriminant, signature, parity, discriminant group).
//! * [`fujiki`]: the Fujiki formula and its polarization, evaluated by summing
//!   over perfect matchings.
//! * [`solver`]: recovery of the Beauville form and the Fujiki constant from
//!   intersection integrals.
//! * [`monodromy`]: Picard–Lefschetz transvections, wedge powers and invariant
//!   dimensions.
//! * [`ledger`]: dimension bookkeeping through exact sequences.
//! * [`catalog`]: the table of known varieties and its verification.

pub mod catalog;
pub mod error;
pub mod fujiki;
pub mod lattice;
pub mod ledger;
pub mod linalg;
pub mod monodromy;
pub mod rational;
pub mod solver;

pub use error::{FujikiError, LatticeError, LedgerError, LinalgError, MonodromyError, SolveError};
pub use lattice::{DiscriminantGroup, Lattice, LatticeExpr};
pub use linalg::{ExactMatrix, SnfDecomposition};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
