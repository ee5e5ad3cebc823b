//! Solvers for colorful Borsuk–Ulam type problems.
//!
//! The crate builds symmetric triangulations of spheres, runs discrete
//! Fan-lemma searches on equivariant labellings, and refines those searches
//! into numerical witnesses for covering, matrix-field, KKM/Brouwer and
//! ham-sandwich problems. Every solver returns a certificate that can be
//! re-checked using only the caller's oracles.
//!
//! Module map:
//!
//! * [`complexes`] symmetric simplicial spheres (crosspolytopes, joins,
//!   barycentric subdivision, local refinement).
//! * [`fan_core`] discrete Fan / Z/p-Fan searches on labelled complexes.
//! * [`cover_solvers`] refinement loops turning set covers into witnesses.
//! * [`matrix_bu`] the colorful Borsuk–Ulam solver on odd matrix fields.
//! * [`kkm_brouwer`] Radon–KKM, colorful KKM and colorful Brouwer.
//! * [`ham_sandwich`] colorful and equalizing ham-sandwich cuts.
//! * [`reference_oracles`] brute-force references used by tests.
//! * [`cli_io`] command line, JSON schemas, SVG output, report validation.

pub mod cli_io;
pub mod complexes;
pub mod cover_solvers;
mod error;
pub mod fan_core;
pub mod ham_sandwich;
pub mod kkm_brouwer;
pub mod linalg;
pub mod matrix_bu;
pub mod reference_oracles;

pub use error::{Error, Result};
