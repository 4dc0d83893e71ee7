//! Harness internals for the `qsclab` binary, exposed as a library so
//! integration tests can drive sweeps, comparisons, and figure emission
//! in-process (including with an injected oracle).

pub mod channel_spec;
pub mod compare;
pub mod figures;
pub mod format;
pub mod grid;
pub mod sweep;
pub mod validate;
