//! Density-matrix simulation of eight secure quantum communication
//! protocols under six noise families, with the closed-form average-fidelity
//! expressions as an independent analytic cross-check.
//!
//! Layering, bottom up:
//!
//! - [`linalg`]: small dense complex matrices, kets, density matrices,
//!   Kraus/unitary application, pure-state fidelity;
//! - [`channels`]: the noise families as Kraus sets (amplitude damping,
//!   phase damping, Pauli with its named one-parameter variants, squeezed
//!   generalized amplitude damping) and per-slot collective unitaries
//!   (rotation, dephasing), plus the physical-rate bindings for the
//!   dissipative channel;
//! - [`protocols`]: the eight protocol pipelines and the case-averaged
//!   fidelity engine;
//! - [`oracle`]: verbatim transcriptions of the closed-form fidelity
//!   expressions, evaluated per (protocol class, channel family) key.
//!
//! The engine and the oracle are written independently on purpose: the
//! comparison between them (see the CLI's `compare` subcommand) is the
//! arbiter when the two disagree, and known transcription defects are
//! reported rather than patched.

pub mod channels;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod protocols;
pub mod tol;

pub use channels::{
    identity_channel, make_ad, make_bit_flip, make_bit_phase_flip, make_cd, make_cr,
    make_depolarizing, make_pauli, make_pd, make_phase_flip, make_sgad, sgad_rates,
    validate_cptp, CollectiveKind, CollectiveParams, CptpReport, KrausChannel, PauliWeights,
    SgadParams, SgadPhysical,
};
pub use error::{Error, Result};
pub use linalg::{
    apply_kraus, apply_unitary, embed, fidelity_pure, ops, tensor, ComplexMatrix, DensityMatrix,
    Ket,
};
pub use oracle::{
    eval, sgad_limit_check, ChannelFamily, FormulaKey, FormulaProtocol, Params, SgadLimitReport,
};
pub use protocols::{
    average_fidelity, run_case, CaseOutcome, EncodingSet, NoiseAssignment, ProtocolId,
    ProtocolSpec, Stage, TravelRound, TravelSchedule,
};
