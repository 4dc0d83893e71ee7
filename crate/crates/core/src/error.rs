//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Operand shapes are incompatible for the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A qubit index addressed a factor outside the register.
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    /// A named scalar parameter fell outside its admissible interval.
    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// A state vector with (numerically) zero norm cannot be normalized.
    #[error("state vector has zero norm")]
    ZeroNorm,

    /// A matrix expected to be unitary failed `U U† = I` beyond tolerance.
    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    /// A matrix failed the density-matrix invariants (Hermitian, unit trace).
    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),

    /// Pauli channel weights must each lie in [0, 1] and sum to one.
    #[error("pauli weights must sum to 1 within 1e-12 (got {sum})")]
    WeightSum { sum: f64 },

    /// A derived decoherence rate left [0, 1]; the parameter set does not
    /// describe a physical channel at this time and is rejected, not clamped.
    #[error("derived rate {name} = {value:.6} outside [0, 1] at gamma0*t = {gt:.6}")]
    RateOutOfRange { name: &'static str, value: f64, gt: f64 },

    /// A noise assignment did not provide one unitary per travel slot.
    #[error("noise assignment provides {provided} slot(s), protocol requires {required}")]
    SlotMismatch { provided: usize, required: usize },

    /// A fidelity left [0, 1] by more than the clamping margin; upstream
    /// state is non-physical.
    #[error("fidelity {value} outside [0, 1] beyond tolerance")]
    FidelityRange { value: f64 },

    /// A closed-form evaluation was missing a required named parameter.
    #[error("missing parameter {0}")]
    MissingParam(String),

    /// A case index addressed a non-existent protocol case.
    #[error("case index {index} out of range ({n_cases} cases)")]
    CaseOutOfRange { index: usize, n_cases: usize },
}
