//! Exact cohomology tables and Betti-number bounds for complex projective
//! hypersurfaces, computed from a description of their singularities.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`]: exact rational multivariate polynomials and a text parser.
//! * [`milnor`]: Milnor numbers by closed form and by a jet-algebra oracle.
//! * [`model`]: the hypersurface profile record and its validation.
//! * [`exact_seq`]: rank intervals through finite exact sequences.
//! * [`invariants`]: the closed forms, range theorems and exact tables.

pub mod exact_seq;
pub mod fixtures;
pub mod invariants;
pub mod linalg;
pub mod milnor;
pub mod model;
#[cfg(feature = "mutants")]
#[doc(hidden)]
pub mod mutants;
pub mod poly;
pub mod provenance;
pub mod table;

pub use milnor::{GermSpec, MilnorMethod, MilnorResult, DEFAULT_DEGREE_CAP};
pub use model::{HypersurfaceProfile, ModelError, Violation};
pub use poly::{parse_poly, MultiPoly, PolyError, Rational};
pub use provenance::Citation;
pub use table::{CohomologyTable, GroupInfo, GroupKind, RankBound, TableVariant, Torsion};
