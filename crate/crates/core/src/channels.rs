//! Single-qubit noise: Kraus channel families and collective unitaries.
//!
//! Decohering families (Kraus form, `rho -> sum_i E_i rho E_i†`):
//!
//! - amplitude damping: `E0 = diag(1, sqrt(1-eta))`, `E1 = [[0, sqrt(eta)], [0, 0]]`
//! - phase damping: `E0 = sqrt(1-eta) I`, `E1 = sqrt(eta)|0><0|`, `E2 = sqrt(eta)|1><1|`
//! - Pauli: `E_i = sqrt(p_i) sigma_i` with `sigma = (I, X, iY, Z)`; the four
//!   named one-parameter variants (bit flip, phase flip, bit-phase flip,
//!   depolarizing) are weight patterns over the same four operators
//! - squeezed generalized amplitude damping (SGAD): the four-operator set
//!   below, parameterized either directly by `(lambda, mu, nu, Q, Phi)` or
//!   through the physical bath parameters via [`sgad_rates`]
//!
//! Collective families (one unitary per travel round, the same rotation or
//! phase applied to every qubit in flight during that round):
//!
//! - collective rotation: `[[cos t, -sin t], [sin t, cos t]]`
//! - collective dephasing: `diag(1, e^{i phi})`
//!
//! Every Kraus constructor validates its parameters and its completeness
//! relation `sum_i E_i† E_i = I` (channel tier) before returning.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ops, re, ComplexMatrix};
use crate::tol;

// ---------------------------------------------------------------------------
// Kraus channels
// ---------------------------------------------------------------------------

/// A named single-qubit Kraus channel with its defining parameters.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    name: &'static str,
    operators: Vec<ComplexMatrix>,
    params: Vec<(&'static str, f64)>,
}

impl KrausChannel {
    fn build(
        name: &'static str,
        operators: Vec<ComplexMatrix>,
        params: Vec<(&'static str, f64)>,
    ) -> Result<Self> {
        let ch = Self {
            name,
            operators,
            params,
        };
        let report = ch.validate_cptp()?;
        if !report.passes(tol::CHANNEL) {
            return Err(Error::InvalidDensity(format!(
                "channel {} violates completeness by {:.3e}",
                ch.name, report.max_deviation
            )));
        }
        Ok(ch)
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn params(&self) -> &[(&'static str, f64)] {
        &self.params
    }

    /// Deviation of `sum_i E_i† E_i` from the identity.
    pub fn validate_cptp(&self) -> Result<CptpReport> {
        validate_cptp(&self.operators)
    }
}

/// Result of a completeness check.
#[derive(Clone, Copy, Debug)]
pub struct CptpReport {
    /// Largest componentwise deviation of `sum E† E` from `I`.
    pub max_deviation: f64,
}

impl CptpReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_deviation <= tolerance
    }
}

/// Check `sum_i E_i† E_i = I` for an arbitrary operator list.
pub fn validate_cptp(operators: &[ComplexMatrix]) -> Result<CptpReport> {
    let first = operators
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty Kraus operator set".into()))?;
    let n = first.rows();
    let mut sum = ComplexMatrix::zeros(n, n);
    for op in operators {
        sum = sum.add(&op.dagger().mul(op)?)?;
    }
    Ok(CptpReport {
        max_deviation: sum.max_abs_diff(&ComplexMatrix::identity(n))?,
    })
}

fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    if !(min..=max).contains(&value) || !value.is_finite() {
        return Err(Error::ParamOutOfRange {
            name,
            value,
            min,
            max,
        });
    }
    Ok(())
}

/// The trivial channel (single identity operator). Useful as the
/// no-noise baseline.
pub fn identity_channel() -> KrausChannel {
    KrausChannel::build("identity", vec![ops::identity2()], vec![]).unwrap()
}

/// Amplitude damping with decay probability `eta` in [0, 1].
pub fn make_ad(eta: f64) -> Result<KrausChannel> {
    check_range("eta", eta, 0.0, 1.0)?;
    let e0 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - eta).sqrt()]])?;
    let e1 = ComplexMatrix::from_real_rows(&[&[0.0, eta.sqrt()], &[0.0, 0.0]])?;
    KrausChannel::build("ad", vec![e0, e1], vec![("eta", eta)])
}

/// Phase damping with dephasing probability `eta` in [0, 1].
pub fn make_pd(eta: f64) -> Result<KrausChannel> {
    check_range("eta", eta, 0.0, 1.0)?;
    let e0 = ComplexMatrix::identity(2).scale(re((1.0 - eta).sqrt()));
    let e1 = ComplexMatrix::from_real_rows(&[&[eta.sqrt(), 0.0], &[0.0, 0.0]])?;
    let e2 = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, eta.sqrt()]])?;
    KrausChannel::build("pd", vec![e0, e1, e2], vec![("eta", eta)])
}

// ---------------------------------------------------------------------------
// Pauli channel
// ---------------------------------------------------------------------------

/// Probability weights over the operator tuple `(I, X, iY, Z)`.
#[derive(Clone, Copy, Debug)]
pub struct PauliWeights {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl PauliWeights {
    /// Each weight must lie in [0, 1]; the sum must be 1 within the
    /// construction tier.
    pub fn new(p1: f64, p2: f64, p3: f64, p4: f64) -> Result<Self> {
        check_range("p1", p1, 0.0, 1.0)?;
        check_range("p2", p2, 0.0, 1.0)?;
        check_range("p3", p3, 0.0, 1.0)?;
        check_range("p4", p4, 0.0, 1.0)?;
        let sum = p1 + p2 + p3 + p4;
        if (sum - 1.0).abs() > tol::CONSTRUCTION {
            return Err(Error::WeightSum { sum });
        }
        Ok(Self { p1, p2, p3, p4 })
    }

    /// All weight on the identity.
    pub fn identity() -> Self {
        Self {
            p1: 1.0,
            p2: 0.0,
            p3: 0.0,
            p4: 0.0,
        }
    }

    /// Weight `p` on `X`.
    pub fn bit_flip(p: f64) -> Result<Self> {
        Self::new(1.0 - p, p, 0.0, 0.0)
    }

    /// Weight `p` on `Z`.
    pub fn phase_flip(p: f64) -> Result<Self> {
        Self::new(1.0 - p, 0.0, 0.0, p)
    }

    /// Weight `p` on `iY`.
    pub fn bit_phase_flip(p: f64) -> Result<Self> {
        Self::new(1.0 - p, 0.0, p, 0.0)
    }

    /// Weight `p` split evenly over `X`, `iY`, `Z`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        Self::new(1.0 - p, p / 3.0, p / 3.0, p / 3.0)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.p1, self.p2, self.p3, self.p4]
    }
}

/// General Pauli channel `E_i = sqrt(p_i) sigma_i`, `sigma = (I, X, iY, Z)`.
pub fn make_pauli(w: PauliWeights) -> Result<KrausChannel> {
    let sigmas = [ops::identity2(), ops::sigma_x(), ops::sigma_iy(), ops::sigma_z()];
    let operators = w
        .as_array()
        .iter()
        .zip(sigmas)
        .map(|(&p, s)| s.scale(re(p.sqrt())))
        .collect();
    KrausChannel::build(
        "pauli",
        operators,
        vec![("p1", w.p1), ("p2", w.p2), ("p3", w.p3), ("p4", w.p4)],
    )
}

/// Bit flip: Pauli channel with weight `p` on `X`.
pub fn make_bit_flip(p: f64) -> Result<KrausChannel> {
    make_pauli(PauliWeights::bit_flip(p)?)
}

/// Phase flip: Pauli channel with weight `p` on `Z`.
pub fn make_phase_flip(p: f64) -> Result<KrausChannel> {
    make_pauli(PauliWeights::phase_flip(p)?)
}

/// Bit-phase flip: Pauli channel with weight `p` on `iY`.
pub fn make_bit_phase_flip(p: f64) -> Result<KrausChannel> {
    make_pauli(PauliWeights::bit_phase_flip(p)?)
}

/// Depolarizing: Pauli channel with weight `p` split over `X`, `iY`, `Z`.
pub fn make_depolarizing(p: f64) -> Result<KrausChannel> {
    make_pauli(PauliWeights::depolarizing(p)?)
}

// ---------------------------------------------------------------------------
// Squeezed generalized amplitude damping
// ---------------------------------------------------------------------------

/// Direct SGAD channel parameters: decoherence rates `lambda`, `mu`, `nu`
/// in [0, 1], mixing weight `q` in [0, 1], bath squeezing angle `phi`.
#[derive(Clone, Copy, Debug)]
pub struct SgadParams {
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
    pub q: f64,
    pub phi: f64,
}

impl SgadParams {
    pub fn new(lambda: f64, mu: f64, nu: f64, q: f64, phi: f64) -> Result<Self> {
        check_range("lambda", lambda, 0.0, 1.0)?;
        check_range("mu", mu, 0.0, 1.0)?;
        check_range("nu", nu, 0.0, 1.0)?;
        check_range("Q", q, 0.0, 1.0)?;
        if !phi.is_finite() {
            return Err(Error::ParamOutOfRange {
                name: "Phi",
                value: phi,
                min: f64::NEG_INFINITY,
                max: f64::INFINITY,
            });
        }
        Ok(Self {
            lambda,
            mu,
            nu,
            q,
            phi,
        })
    }
}

/// SGAD channel:
///
/// ```text
/// E0 = sqrt(Q)   diag(1, sqrt(1-lambda))
/// E1 = sqrt(Q)   [[0, sqrt(lambda)], [0, 0]]
/// E2 = sqrt(1-Q) diag(sqrt(1-nu), sqrt(1-mu))
/// E3 = sqrt(1-Q) [[0, sqrt(mu) e^{-i Phi}], [sqrt(nu), 0]]
/// ```
///
/// Completeness holds for every admissible parameter tuple:
/// `E0†E0 + E1†E1 = Q I` and `E2†E2 + E3†E3 = (1-Q) I`.
pub fn make_sgad(p: SgadParams) -> Result<KrausChannel> {
    let sq = p.q.sqrt();
    let sq1 = (1.0 - p.q).sqrt();
    let e0 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - p.lambda).sqrt()]])?
        .scale(re(sq));
    let e1 = ComplexMatrix::from_real_rows(&[&[0.0, p.lambda.sqrt()], &[0.0, 0.0]])?.scale(re(sq));
    let e2 = ComplexMatrix::from_real_rows(&[
        &[(1.0 - p.nu).sqrt(), 0.0],
        &[0.0, (1.0 - p.mu).sqrt()],
    ])?
    .scale(re(sq1));
    let mut e3 = ComplexMatrix::zeros(2, 2);
    e3.set(0, 1, Complex64::from_polar(p.mu.sqrt(), -p.phi));
    e3.set(1, 0, re(p.nu.sqrt()));
    let e3 = e3.scale(re(sq1));
    KrausChannel::build(
        "sgad",
        vec![e0, e1, e2, e3],
        vec![
            ("lambda", p.lambda),
            ("mu", p.mu),
            ("nu", p.nu),
            ("Q", p.q),
            ("Phi", p.phi),
        ],
    )
}

/// Physical bath parameters from which the SGAD rates are derived.
#[derive(Clone, Copy, Debug)]
pub struct SgadPhysical {
    /// Spontaneous decay rate `gamma0 > 0`.
    pub gamma0: f64,
    /// Interaction time `t >= 0`.
    pub t: f64,
    /// Bath squeezing magnitude `r >= 0`.
    pub r: f64,
    /// Bath squeezing angle (enters the Kraus set as `Phi`).
    pub phi: f64,
    /// Dimensionless inverse temperature `x = (h-bar omega)/(k_B T) > 0`.
    pub x: f64,
    /// Internal decomposition parameter, strictly inside (0, 1).
    pub p: f64,
}

impl SgadPhysical {
    pub fn new(gamma0: f64, t: f64, r: f64, phi: f64, x: f64, p: f64) -> Result<Self> {
        if !(gamma0.is_finite() && gamma0 > 0.0) {
            return Err(Error::ParamOutOfRange {
                name: "gamma0",
                value: gamma0,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::ParamOutOfRange {
                name: "t",
                value: t,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::ParamOutOfRange {
                name: "r",
                value: r,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::ParamOutOfRange {
                name: "x",
                value: x,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        if !(p.is_finite() && p > 0.0 && p < 1.0) {
            return Err(Error::ParamOutOfRange {
                name: "p",
                value: p,
                min: 0.0,
                max: 1.0,
            });
        }
        if !phi.is_finite() {
            return Err(Error::ParamOutOfRange {
                name: "Phi",
                value: phi,
                min: f64::NEG_INFINITY,
                max: f64::INFINITY,
            });
        }
        Ok(Self {
            gamma0,
            t,
            r,
            phi,
            x,
            p,
        })
    }
}

/// Derive the SGAD rates `(lambda, mu, nu)` from physical bath parameters:
///
/// ```text
/// N_th  = 1 / (e^x - 1)
/// N     = N_th (cosh^2 r + sinh^2 r) + sinh^2 r
/// a     = sinh(2r) (2 N_th + 1)
/// nu    = N / ((1-p)(2N+1)) * (1 - e^{-gamma0 (2N+1) t})
/// mu    = (2N+1) / (2N(1-p))
///         * sinh^2(gamma0 a t / 2) / sinh^2(gamma0 (2N+1) t / 2)
///         * e^{-gamma0 (2N+1) t / 2}
/// lambda= (1/p) (1 - (1-p)(mu + nu) - e^{-gamma0 (2N+1) t})
/// ```
///
/// `t = 0` yields `(0, 0, 0)` exactly, and `r = 0` forces `a = 0` hence
/// `mu = 0`. A rate outside [0, 1] means the fixed `(p, ...)` decomposition
/// is not physical at this `t` and is reported as an error, never clamped,
/// since clamping would silently fabricate a different channel.
pub fn sgad_rates(ph: &SgadPhysical) -> Result<(f64, f64, f64)> {
    if ph.t == 0.0 {
        return Ok((0.0, 0.0, 0.0));
    }
    let n_th = 1.0 / (ph.x.exp() - 1.0);
    let (sh, ch) = (ph.r.sinh(), ph.r.cosh());
    let n = n_th * (ch * ch + sh * sh) + sh * sh;
    let a = (2.0 * ph.r).sinh() * (2.0 * n_th + 1.0);
    let gt = ph.gamma0 * ph.t;
    let decay = (-gt * (2.0 * n + 1.0)).exp();

    let nu = n / ((1.0 - ph.p) * (2.0 * n + 1.0)) * (1.0 - decay);
    // a = 0 (unsqueezed bath) makes the sinh ratio vanish identically; the
    // explicit branch avoids 0/0 and division by 2N when N = 0.
    let mu = if a == 0.0 {
        0.0
    } else {
        (2.0 * n + 1.0) / (2.0 * n * (1.0 - ph.p))
            * (gt * a / 2.0).sinh().powi(2)
            / (gt * (2.0 * n + 1.0) / 2.0).sinh().powi(2)
            * (-gt * (2.0 * n + 1.0) / 2.0).exp()
    };
    let lambda = (1.0 - (1.0 - ph.p) * (mu + nu) - decay) / ph.p;

    for (name, value) in [("lambda", lambda), ("mu", mu), ("nu", nu)] {
        if !(0.0..=1.0).contains(&value) || !value.is_finite() {
            return Err(Error::RateOutOfRange { name, value, gt });
        }
    }
    Ok((lambda, mu, nu))
}

// ---------------------------------------------------------------------------
// Collective unitaries
// ---------------------------------------------------------------------------

/// Collective rotation `[[cos t, -sin t], [sin t, cos t]]`.
pub fn make_cr(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_real_rows(&[&[c, -s], &[s, c]]).unwrap()
}

/// Collective dephasing `diag(1, e^{i phi})`.
pub fn make_cd(phi: f64) -> ComplexMatrix {
    ops::phase(phi)
}

/// Which collective unitary family a parameter set describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollectiveKind {
    Rotation,
    Dephasing,
}

/// One collective angle per travel round; every qubit in flight during
/// round `k` receives the same unitary built from `angles[k]`.
#[derive(Clone, Debug)]
pub struct CollectiveParams {
    pub kind: CollectiveKind,
    pub angles: Vec<f64>,
}

impl CollectiveParams {
    pub fn rotation(angles: Vec<f64>) -> Self {
        Self {
            kind: CollectiveKind::Rotation,
            angles,
        }
    }

    pub fn dephasing(angles: Vec<f64>) -> Self {
        Self {
            kind: CollectiveKind::Dephasing,
            angles,
        }
    }

    /// The per-round unitaries.
    pub fn unitaries(&self) -> Vec<ComplexMatrix> {
        self.angles
            .iter()
            .map(|&a| match self.kind {
                CollectiveKind::Rotation => make_cr(a),
                CollectiveKind::Dephasing => make_cd(a),
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
