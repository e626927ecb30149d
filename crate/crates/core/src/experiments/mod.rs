//! Verifiers, exhaustive min-rank search, Monte Carlo sampling and the
//! permutation scan. Every entry point returns a [`Report`](crate::Report)
//! whose bytes depend only on its parameters, never on the [`Exec`](crate::Exec)
//! used to run it.

mod search;
mod source;
mod verify;

pub use search::{
    minrank_exhaustive, montecarlo_rank, perm_scan, permutation_by_index, MinRankConfig,
    MonteCarloConfig, PermMode, PermScanConfig, MAX_SCAN_ALL,
};
pub use source::{random_nonzero, SequenceSource, TournamentSet};
pub use verify::{
    verify_certifiability, verify_constant_seq, verify_f_ensemble, verify_finite_field_bound,
    verify_lipschitz, verify_reversal, verify_transitive, CertifiabilityConfig, ConstantSeqConfig,
    FEnsembleConfig, FiniteFieldConfig, LipschitzConfig, ReversalConfig, TransitiveConfig,
    MAX_CERTIFY_N,
};

use thiserror::Error;

use crate::field::FieldError;
use crate::matrix::MatrixError;
use crate::rank::RankError;
use crate::tournament::TournamentError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExperimentError {
    #[error("bad range: {0}")]
    BadRange(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("{0} vertices is too many to scan every permutation (limit {MAX_SCAN_ALL})")]
    TooManyPermutations(usize),
    #[error("f(x, y) = {alpha}x + {beta}y has alpha + beta = 0")]
    DegenerateF { alpha: String, beta: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Tournament(#[from] TournamentError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Rank(#[from] RankError),
}

/// Refusal note for rank checks that need characteristic ≠ 2.
pub(crate) const CHAR_TWO_REFUSAL: &str =
    "rank checks refused: they require characteristic != 2";
