//! Error type shared by every module of the library.

use thiserror::Error;

/// Result alias used throughout the library.
pub type Result<T> = std::result::Result<T, Error>;

/// Every recoverable failure the library reports.
#[derive(Debug, Error)]
pub enum Error {
    /// Automaton definition text could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An output row of an automaton state is not a permutation of the alphabet.
    #[error("state `{state}`: output row {row:?} is not a permutation of 0..{alphabet}")]
    NotAPermutation {
        state: String,
        row: Vec<u8>,
        alphabet: u8,
    },

    /// A section refers to a state name that was never defined.
    #[error("state `{state}`: section `{name}` is not a defined state")]
    UnknownState { state: String, name: String },

    /// A named object (group, map, pencil, family) is not in the catalog.
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    /// Two objects live over different automata or have mismatched dimensions.
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// A word/letter index is outside the alphabet.
    #[error("letter {letter} outside alphabet of size {alphabet}")]
    BadLetter { letter: u8, alphabet: u8 },

    /// The eliminated block of a Schur complement is singular
    /// (or numerically too close to singular).
    #[error("eliminated block is singular (smallest singular value {smallest:.3e}, pivot threshold {threshold:.3e})")]
    SingularBlock { smallest: f64, threshold: f64 },

    /// A matrix that must be invertible is singular.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// A rational map was evaluated on (or too near) its singular locus.
    #[error("map `{map}` hit singular locus `{denominator} = 0` (|denominator| = {value:.3e}, margin {margin:.3e})")]
    SingularLocus {
        map: String,
        denominator: String,
        value: f64,
        margin: f64,
    },

    /// A pencil is not affine in its spectral parameter with coefficient -I.
    #[error("pencil is not of the form A - s*I in parameter `{param}`: {detail}")]
    NotSpectralForm { param: String, detail: String },

    /// A matrix expected to be Hermitian is not.
    #[error("matrix is not Hermitian: max |M - M*| = {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    /// Dimension budget exceeded (level too deep, subgroup too large, ...).
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Nucleus computation did not stabilize below the candidate bound.
    #[error("nucleus candidate set exceeded bound {bound}: {candidates} candidate elements after round {round}; sample growing element: {witness}")]
    NucleusOverflow {
        bound: usize,
        candidates: usize,
        round: usize,
        witness: String,
    },

    /// The induced letter chain is not irreducible from the distinguished letter.
    #[error("letter chain is not irreducible from letter {letter}: {detail}")]
    NotIrreducible { letter: u8, detail: String },

    /// Exact inversion policy requires the complement subgroup to be finite.
    #[error("subgroup generated by the eliminated block support exceeded {bound} elements; exact policy requires a finite complement group")]
    InfiniteComplementGroup { bound: usize },

    /// A Neumann series did not converge within its iteration budget.
    #[error("Neumann series did not reach mass tolerance {mass_tol:.3e} within {iterations} iterations (residual mass {residual:.3e})")]
    NeumannDiverged {
        mass_tol: f64,
        iterations: usize,
        residual: f64,
    },

    /// A measure that must be a probability measure is not.
    #[error("measure is not a probability measure: {0}")]
    BadMeasure(String),

    /// Every sample of a verification run was rejected by the admissibility filter.
    #[error("all {attempted} samples were rejected by the admissibility filter (margin {margin:.3e})")]
    AllSamplesRejected { attempted: usize, margin: f64 },

    /// An operator expression could not be parsed.
    #[error("expression error at byte {at}: {message}")]
    Expr { at: usize, message: String },

    /// Generic invalid-input error.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Underlying I/O failure (file export, report writing).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
