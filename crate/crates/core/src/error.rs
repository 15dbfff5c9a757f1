//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, search, and series evaluation.
///
/// Semidecidable searches never report `false`; they either return a witness
/// or [`Error::Inconclusive`] naming what was still missing when the depth or
/// resource cap was reached.
#[derive(Debug, Error)]
pub enum Error {
    /// A symbol outside the system alphabet, or a malformed symbol string.
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    /// A word that violates the incidence matrix.
    #[error("inadmissible word at position {position}: `{word}`")]
    InadmissibleWord { word: String, position: usize },

    /// Invalid system data (empty alphabet, dead symbol, non-transitive
    /// incidence, bad potential table, ...).
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    /// Invalid group or projection data.
    #[error("invalid group data: {0}")]
    InvalidGroup(String),

    /// Schottky geometry violation; names the offending objects.
    #[error("schottky geometry: {0}")]
    Geometry(String),

    /// A bounded search ended without a witness. Not a disproof.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// An exact symmetry condition failed; carries the witness word.
    #[error("symmetry violation ({condition}) at witness `{witness}`")]
    SymmetryViolation { condition: String, witness: String },

    /// An exact inequality that must hold by construction failed; indicates
    /// an implementation bug rather than a mathematical possibility.
    #[error("exact check `{check}` failed: {details}")]
    CheckFailed { check: String, details: String },

    /// The dynamic-programming table outgrew its configured cap.
    /// `partial` holds the level sums computed before the overflow.
    #[error("state cap {cap} exceeded at level {level} ({states} states)")]
    ResourceExhausted {
        level: usize,
        states: usize,
        cap: usize,
        partial: Vec<f64>,
    },

    /// Estimator found no mass in the regression window.
    #[error("no data: {0}")]
    NoData(String),

    /// Malformed configuration input.
    #[error("config: {0}")]
    Config(String),
}

impl Error {
    /// True for outcomes that mean "cap reached before a witness", which the
    /// CLI maps to its own exit code.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::Inconclusive(_) | Error::ResourceExhausted { .. } | Error::NoData(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
