//! Numerical laboratory for the DDVV inequality and its relatives.
//!
//! The DDVV (normal scalar curvature) inequality says that for any tuple of
//! real symmetric `n x n` matrices `A_1, ..., A_m`,
//!
//! ```text
//! (sum_r |A_r|^2)^2  >=  2 sum_{r<s} |[A_r, A_s]|^2,
//! ```
//!
//! with Frobenius norms and matrix commutators; geometrically it bounds the
//! normal scalar curvature of a submanifold of a real space form by its mean
//! curvature. This crate treats the inequality and the toolkit around its
//! proof as *numerical laboratory subjects*: every statement becomes an
//! oracle that evaluates both sides on concrete inputs and reports the
//! verdict, so the algebra can be stress-tested rather than taken on faith.
//!
//! The pieces:
//!
//! * [`ddvv`] — the inequality in matrix, coefficient, and geometric form,
//!   each evaluated independently so they can cross-check one another.
//! * [`canonical`] — the symmetry group `O(n) x O(m)` acting on tuples, and
//!   a canonical representative per orbit with a group witness.
//! * [`lemmas`] — the supporting inequalities: a weighted spread bound,
//!   arrowhead spectral bounds with a determinant identity, a diagonal
//!   commutator bound, and concentration bounds for orthogonal families.
//! * [`bw`] — the Böttcher–Wenzel inequality `|[X,Y]|^2 <= 2|X|^2 |Y|^2`
//!   for arbitrary square matrices, through the spectrum of the operator
//!   `Y -> [X^T, [X, Y]]`.
//! * [`search`] — multi-start gradient ascent on the commutator ratio
//!   (hunting for near-equality configurations) and randomized fuzzing
//!   campaigns against every oracle in the crate.
//! * [`sample`] — seeded random generators for all of the structured
//!   inputs: Haar-orthogonal matrices, traceless tuples, orthogonal
//!   families, zero-sum unit vectors.
//! * [`cli`] — the `ddvv` binary: file formats, subcommands, exit codes.
//! * [`linalg`], [`jsonio`], [`error`] — dense row-major matrices with the
//!   handful of operations the oracles need, JSON output with 17
//!   significant digits so reports round-trip exactly, and the shared
//!   error type.
//!
//! Everything randomized is seeded and reproducible: the same seed yields
//! byte-identical reports regardless of how many worker threads run the
//! trials (cap them with the `DDVV_THREADS` environment variable).
//!
//! # Example
//!
//! ```
//! use ddvv_lab::ddvv::{evaluate_matrix_form, DEFAULT_TOL};
//! use ddvv_lab::linalg::{MatrixTuple, SymMatrix};
//!
//! // The classical equality configuration.
//! let tuple = MatrixTuple::new(vec![
//!     SymMatrix::from_nested(&vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
//!     SymMatrix::from_nested(&vec![vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap(),
//! ])
//! .unwrap();
//!
//! let report = evaluate_matrix_form(&tuple, DEFAULT_TOL);
//! assert_eq!(report.lhs, 16.0);
//! assert_eq!(report.rhs, 16.0);
//! assert!(report.pass);
//! ```

pub mod bw;
pub mod canonical;
pub mod cli;
pub mod ddvv;
pub mod error;
pub mod jsonio;
pub mod lemmas;
pub mod linalg;
pub mod sample;
pub mod search;

pub use ddvv::{evaluate_matrix_form, InequalityReport, DEFAULT_TOL};
pub use error::{Error, Result};
pub use linalg::{Matrix, MatrixTuple, SymMatrix};
