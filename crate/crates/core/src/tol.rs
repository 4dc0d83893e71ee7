//! Centralized numeric tolerances.
//!
//! Three tiers, loosening with the amount of floating-point work between
//! the exact algebra and the compared value:
//!
//! | Tier | Used for | Bound |
//! |------|----------|-------|
//! | construction | object invariants checked at build time (norms, weight sums, operator identities) | 1e-12 |
//! | channel | channel outputs: CPTP deviation, Hermiticity, trace drift after Kraus/unitary application | 1e-10 |
//! | oracle | simulated averages vs closed-form expressions | 1e-9 |
//!
//! Nothing in the crate compares floats against ad-hoc literals; tests and
//! the acceptance harness import these constants.

/// Construction-time invariants: normalization, weight sums, exact operator
/// identities (e.g. a 2x2 rotation times its inverse).
pub const CONSTRUCTION: f64 = 1e-12;

/// Channel-output checks: `sum E† E = I` deviation, Hermiticity and trace
/// preservation through Kraus/unitary application, unitarity of inputs.
pub const CHANNEL: f64 = 1e-10;

/// Simulation vs closed-form comparisons (a protocol average composes many
/// channel applications, so this is the loosest tier).
pub const ORACLE: f64 = 1e-9;

/// Fidelities are clamped into [0, 1] only when outside by less than this;
/// larger excursions are an error, not a rounding artifact.
pub const FIDELITY_CLAMP: f64 = 1e-9;

/// Density-matrix positivity: smallest eigenvalue must be >= -POSITIVITY.
pub const POSITIVITY: f64 = 1e-9;
