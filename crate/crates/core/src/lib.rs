//! Lipschitz function spaces `Lip(X)`, `Lip0(X)` and their Arens-Eells
//! (Lipschitz-free) preduals over finite pointed metric spaces.
//!
//! * [`metric`]: finite metric spaces and their constructions.
//! * [`lip`]: Lipschitz functions, norms and lattice operations.
//! * [`free_space`]: molecules, the duality pairing and the free-space norm
//!   with primal and dual certificates.
//! * [`lab`]: seeded verification suites for the finite identities relating
//!   these objects.
//! * [`io`]: the JSON file formats.

pub mod error;
pub mod free_space;
pub mod io;
pub mod lab;
pub mod lip;
pub mod metric;
pub mod scalar;

pub use error::{Error, MetricViolation, Result};
pub use free_space::{ae_norm, ae_norm_dual, ae_norm_primal, Molecule};
pub use lip::LipFunction;
pub use metric::MetricSpace;
pub use scalar::{Rational, Scalar, Tolerance};
