//! Exact ranks of the symmetric tournament matrices `M_T(a)`.
//!
//! For a tournament `T` on `n` vertices and a sequence `a` of nonzero field
//! elements, `M_T(a)` is the symmetric matrix with zero diagonal whose entry
//! `(i, j)`, `i < j`, is `a_i` when `i → j` and `a_j` otherwise. This crate
//! builds these matrices (and the related `D_n`, `f`-ensemble, ratio and
//! reversal-sum matrices) over `GF(p)` or `Q`, computes exact ranks, and runs
//! exhaustive and Monte Carlo checks of rank lower bounds.

pub mod bisect;
pub mod bounds;
pub mod exec;
pub mod experiments;
pub mod field;
pub mod matrix;
pub mod rank;
pub mod report;
pub mod rng;
pub mod tournament;

pub use exec::Exec;
pub use field::{FieldSpec, Scalar};
pub use matrix::{DenseMatrix, LinearF, SeqA};
pub use rank::RankProfile;
pub use report::Report;
pub use tournament::Tournament;
