use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by state construction, profile assembly, geometry
/// evaluation, parsing, and report handling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("amplitude vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("amplitude vector has zero norm")]
    ZeroVector,

    #[error("state norm {norm} deviates from 1 by {deviation:e}, beyond the strict tolerance")]
    NormOutOfTolerance { norm: f64, deviation: f64 },

    #[error("unsupported register size {n} (this operation supports {min}..={max} qubits)")]
    UnsupportedSize { n: usize, min: usize, max: usize },

    #[error("qubit subset is empty")]
    EmptySubset,

    #[error("qubit subset covers the full register")]
    FullSubset,

    #[error("qubit subset mask {mask:#b} references qubits outside a {n}-qubit register")]
    SubsetOutOfRange { mask: u16, n: usize },

    #[error("tensor product of {total} qubits exceeds the supported maximum")]
    SizeOverflow { total: usize },

    #[error("permutation {perm:?} is not a bijection on 0..{n}")]
    InvalidPermutation { perm: Vec<usize>, n: usize },

    #[error("value {value} is outside the domain [{lo}, {hi}]")]
    DomainError { value: f64, lo: f64, hi: f64 },

    #[error("triangle side length {value} is negative")]
    NegativeSide { value: f64 },

    #[error("triangle inequality violated with margin {margin:e}")]
    TriangleViolation { margin: f64 },

    #[error("bipartition {cut} is not a two-to-two cut")]
    NotTwoToTwo { cut: String },

    #[error("unknown state name '{name}'")]
    UnknownName { name: String },

    #[error("ensemble sample count must be at least 1")]
    InvalidCount,

    #[error("invalid configuration: {message}")]
    InvalidConfig { message: String },

    #[error("sample {index} aborted the campaign: {message}")]
    CampaignAbort { index: u64, message: String },

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("ket at byte {position} has {got} qubits, earlier kets in the expression have {expected}")]
    MixedKetLength {
        position: usize,
        expected: usize,
        got: usize,
    },

    #[error("unsupported schema version '{version}'")]
    SchemaMismatch { version: String },

    #[error("malformed input: {message}")]
    MalformedInput { message: String },
}
