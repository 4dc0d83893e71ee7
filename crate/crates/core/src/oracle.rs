//! Closed-form average-fidelity expressions for every (protocol class,
//! channel family) pair, used as the independent analytic reference for the
//! numeric engine.
//!
//! Every expression is transcribed **verbatim from its printed source form**,
//! signs, bracketing and all. Where a printed expression is suspected to be
//! defective (it contradicts the other printed forms for the same protocol,
//! or fails its own zero-noise/limit checks), it is still reproduced exactly;
//! the engine-vs-formula comparison report is the arbiter and no silent
//! "correction" happens here. Known cases, reproduced faithfully:
//!
//! - the single-qubit key-agreement phase-damping expression
//!   `(eta^2 - 2 eta + 4)/4` carries a two-transit coherence factor although
//!   the protocol has one noisy transit (every other printed form for that
//!   protocol is single-transit);
//! - the single-qubit dialogue SGAD expression evaluates to `F - 1` at the
//!   amplitude-damping limit and to `0` at zero noise (a constant `+16`
//!   appears to be missing inside its braces);
//! - the two-way direct-communication SGAD expression has ambiguous printed
//!   bracketing; the transcription follows the printed nesting exactly.
//!
//! Parameter names are case-sensitive: `eta`; `phi1`, `phi2`; `theta1`,
//! `theta2`; `p1`..`p4`; `lambda`, `mu`, `nu`, `Q`, `Phi`. Single-transit
//! protocol classes read only `phi1`/`theta1`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::protocols::ProtocolId;

// ---------------------------------------------------------------------------
// Keys
// ---------------------------------------------------------------------------

/// Protocol classes as they appear in formula keys and comparison CSV.
/// These are the closed-form families; [`ProtocolId`]s map onto them via
/// [`From`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaProtocol {
    /// Two-state prepare-and-measure QKD (one transit).
    Qkd1,
    /// Entangled-pair QKD (one transit).
    Qkd2,
    /// Single-qubit key agreement (one transit + receiver encoding).
    Qka1,
    /// Entangled-state key agreement (two transits).
    Qka2,
    /// Two-way direct communication (two transits).
    Qsdc1,
    /// Ping-pong direct communication; delegates wholesale to [`Qka2`](Self::Qka2).
    Qsdc2,
    /// Single-qubit quantum dialogue (two transits, two encoders).
    Qd1,
    /// Entangled-state quantum dialogue (two transits, two encoders).
    Qd2,
}

impl FormulaProtocol {
    pub const ALL: [FormulaProtocol; 8] = [
        FormulaProtocol::Qkd1,
        FormulaProtocol::Qkd2,
        FormulaProtocol::Qka1,
        FormulaProtocol::Qka2,
        FormulaProtocol::Qsdc1,
        FormulaProtocol::Qsdc2,
        FormulaProtocol::Qd1,
        FormulaProtocol::Qd2,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            FormulaProtocol::Qkd1 => "qkd1",
            FormulaProtocol::Qkd2 => "qkd2",
            FormulaProtocol::Qka1 => "qka1",
            FormulaProtocol::Qka2 => "qka2",
            FormulaProtocol::Qsdc1 => "qsdc1",
            FormulaProtocol::Qsdc2 => "qsdc2",
            FormulaProtocol::Qd1 => "qd1",
            FormulaProtocol::Qd2 => "qd2",
        }
    }

    /// Number of noisy transits the class's collective-noise formulas carry
    /// angles for (1 -> `phi1`/`theta1` only, 2 -> both).
    pub fn n_slots(self) -> usize {
        match self {
            FormulaProtocol::Qkd1 | FormulaProtocol::Qkd2 | FormulaProtocol::Qka1 => 1,
            _ => 2,
        }
    }
}

impl From<ProtocolId> for FormulaProtocol {
    fn from(id: ProtocolId) -> Self {
        match id {
            ProtocolId::B92 => FormulaProtocol::Qkd1,
            ProtocolId::Bbm => FormulaProtocol::Qkd2,
            ProtocolId::QkaSingle => FormulaProtocol::Qka1,
            ProtocolId::QkaEntangled => FormulaProtocol::Qka2,
            ProtocolId::Lm05 => FormulaProtocol::Qsdc1,
            ProtocolId::PingPong => FormulaProtocol::Qsdc2,
            ProtocolId::QdSingle => FormulaProtocol::Qd1,
            ProtocolId::QdBaAn => FormulaProtocol::Qd2,
        }
    }
}

/// Channel families with printed closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelFamily {
    AmplitudeDamping,
    PhaseDamping,
    CollectiveDephasing,
    CollectiveRotation,
    Pauli,
    Sgad,
}

impl ChannelFamily {
    pub const ALL: [ChannelFamily; 6] = [
        ChannelFamily::AmplitudeDamping,
        ChannelFamily::PhaseDamping,
        ChannelFamily::CollectiveDephasing,
        ChannelFamily::CollectiveRotation,
        ChannelFamily::Pauli,
        ChannelFamily::Sgad,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ChannelFamily::AmplitudeDamping => "ad",
            ChannelFamily::PhaseDamping => "pd",
            ChannelFamily::CollectiveDephasing => "cd",
            ChannelFamily::CollectiveRotation => "cr",
            ChannelFamily::Pauli => "pauli",
            ChannelFamily::Sgad => "sgad",
        }
    }

    pub fn parse(tag: &str) -> Option<ChannelFamily> {
        Self::ALL.into_iter().find(|f| f.tag() == tag)
    }
}

/// One printed expression: a protocol class under a channel family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormulaKey {
    pub protocol: FormulaProtocol,
    pub channel: ChannelFamily,
}

impl FormulaKey {
    pub fn new(protocol: FormulaProtocol, channel: ChannelFamily) -> Self {
        FormulaKey { protocol, channel }
    }

    /// All 48 keys, protocol-major.
    pub fn all() -> Vec<FormulaKey> {
        let mut v = Vec::with_capacity(48);
        for p in FormulaProtocol::ALL {
            for c in ChannelFamily::ALL {
                v.push(FormulaKey::new(p, c));
            }
        }
        v
    }

    /// Canonical parameter names for this key, in grid order.
    pub fn param_names(self) -> &'static [&'static str] {
        let two_slots = self.protocol.n_slots() == 2;
        match self.channel {
            ChannelFamily::AmplitudeDamping | ChannelFamily::PhaseDamping => &["eta"],
            ChannelFamily::CollectiveDephasing => {
                if two_slots {
                    &["phi1", "phi2"]
                } else {
                    &["phi1"]
                }
            }
            ChannelFamily::CollectiveRotation => {
                if two_slots {
                    &["theta1", "theta2"]
                } else {
                    &["theta1"]
                }
            }
            ChannelFamily::Pauli => &["p1", "p2", "p3", "p4"],
            ChannelFamily::Sgad => &["lambda", "mu", "nu", "Q", "Phi"],
        }
    }
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Named real parameters for [`eval`]. Lookups are case-sensitive.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn new() -> Self {
        Params(BTreeMap::new())
    }

    /// Builder-style insert.
    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.insert(name, value);
        self
    }

    pub fn insert(&mut self, name: &str, value: f64) {
        self.0.insert(name.to_owned(), value);
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        self.0
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingParam(name.to_owned()))
    }

    pub fn opt(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl FromIterator<(String, f64)> for Params {
    fn from_iter<T: IntoIterator<Item = (String, f64)>>(iter: T) -> Self {
        Params(iter.into_iter().collect())
    }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Evaluate the printed closed form for `key` at `params`.
///
/// Transcription-faithful: no clamping, no domain checks beyond presence of
/// the named parameters. Out-of-range output is a reportable finding for the
/// comparison layer, never adjusted here.
pub fn eval(key: FormulaKey, params: &Params) -> Result<f64> {
    use ChannelFamily as C;
    use FormulaProtocol as P;

    // Printed delegations: the ping-pong class reuses the entangled
    // key-agreement forms wholesale; entangled dialogue reuses its Pauli form.
    match (key.protocol, key.channel) {
        (P::Qsdc2, c) => return eval(FormulaKey::new(P::Qka2, c), params),
        (P::Qd2, C::Pauli) => return eval(FormulaKey::new(P::Qka2, C::Pauli), params),
        _ => {}
    }

    let v = match key.channel {
        C::AmplitudeDamping => {
            let eta = params.get("eta")?;
            let s = (1.0 - eta).sqrt();
            match key.protocol {
                P::Qkd1 => (s + 3.0) / 4.0,
                P::Qkd2 => (-eta + 2.0 * s + 2.0) / 4.0,
                P::Qka1 => (-eta + s + 3.0) / 4.0,
                P::Qka2 | P::Qd2 => (eta - 2.0) * (eta - 2.0) / 4.0,
                P::Qsdc1 => (eta * eta - 3.0 * eta + 4.0) / 4.0,
                P::Qd1 => {
                    (-2.0 * eta.powi(3) + 5.0 * eta * eta - (s + 7.0) * eta + 2.0 * (s + 3.0))
                        / 8.0
                }
                P::Qsdc2 => unreachable!("delegated"),
            }
        }
        C::PhaseDamping => {
            let eta = params.get("eta")?;
            match key.protocol {
                P::Qkd1 => (4.0 - eta) / 4.0,
                P::Qkd2 => (2.0 - eta) / 2.0,
                // As printed; carries a two-transit coherence factor despite
                // the protocol's single transit. See module docs.
                P::Qka1 => (eta * eta - 2.0 * eta + 4.0) / 4.0,
                P::Qka2 | P::Qd2 => (eta * eta - 2.0 * eta + 2.0) / 2.0,
                P::Qsdc1 => (eta * eta - 2.0 * eta + 4.0) / 4.0,
                P::Qd1 => (-eta.powi(3) + 4.0 * eta * eta - 6.0 * eta + 8.0) / 8.0,
                P::Qsdc2 => unreachable!("delegated"),
            }
        }
        C::CollectiveDephasing => {
            let c1 = params.get("phi1")?.cos();
            match key.protocol {
                P::Qkd1 | P::Qka1 => (c1 + 3.0) / 4.0,
                P::Qkd2 => (params.get("phi1")? / 2.0).cos().powi(2),
                P::Qka2 | P::Qd2 => (c1 * params.get("phi2")?.cos() + 1.0) / 2.0,
                P::Qsdc1 => (c1 * params.get("phi2")?.cos() + 3.0) / 4.0,
                P::Qd1 => {
                    let c2 = params.get("phi2")?.cos();
                    (c1 * c1 * c2 + c1 * (c2 + 1.0) + 5.0) / 8.0
                }
                P::Qsdc2 => unreachable!("delegated"),
            }
        }
        C::CollectiveRotation => {
            let t1 = params.get("theta1")?;
            match key.protocol {
                P::Qkd1 | P::Qkd2 | P::Qka1 => t1.cos().powi(2),
                P::Qka2 | P::Qd2 => {
                    let t2 = params.get("theta2")?;
                    ((t1 - t2).cos().powi(2) + (t1 + t2).cos().powi(2)) / 2.0
                }
                P::Qsdc1 => (t1 + params.get("theta2")?).cos().powi(2),
                P::Qd1 => {
                    let t2 = params.get("theta2")?;
                    t1.cos().powi(2) * (t1 + t2).cos().powi(2)
                }
                P::Qsdc2 => unreachable!("delegated"),
            }
        }
        C::Pauli => {
            let p1 = params.get("p1")?;
            let p2 = params.get("p2")?;
            let p3 = params.get("p3")?;
            let p4 = params.get("p4")?;
            match key.protocol {
                P::Qkd1 | P::Qka1 => (2.0 * p1 + p2 + p4) / 2.0,
                P::Qkd2 => p1,
                P::Qka2 => p1 * p1 + p2 * p2 + p3 * p3 + p4 * p4,
                P::Qsdc1 => {
                    p1 * p1 + p2 * p2 + p3 * p3 + p4 * p4 + (p1 + p3) * (p2 + p4)
                }
                P::Qd1 => {
                    0.5 * (2.0 * p1.powi(3)
                        + 3.0 * p1 * p1 * (p2 + p4)
                        + 2.0 * p1
                            * (2.0 * p2 * p2 + p2 * p3 + p3 * p3 + p3 * p4 + 2.0 * p4 * p4)
                        + p2.powi(3)
                        + p2 * p2 * p4
                        + p2 * (p3 * p3 + 4.0 * p3 * p4 + p4 * p4)
                        + p4 * (p3 * p3 + p4 * p4))
                }
                P::Qsdc2 | P::Qd2 => unreachable!("delegated"),
            }
        }
        C::Sgad => {
            let s = SgadVars::read(params)?;
            match key.protocol {
                P::Qkd1 => sgad_qkd1(&s),
                P::Qkd2 => sgad_qkd2(&s),
                P::Qka1 => sgad_qka1(&s),
                P::Qka2 | P::Qd2 => sgad_qka2(&s),
                P::Qsdc1 => sgad_qsdc1(&s),
                P::Qd1 => sgad_qd1(&s),
                P::Qsdc2 => unreachable!("delegated"),
            }
        }
    };
    Ok(v)
}

/// SGAD formula inputs with the recurring square roots precomputed.
struct SgadVars {
    l: f64,
    m: f64,
    n: f64,
    q: f64,
    phi: f64,
    /// sqrt(1-lambda)
    sl: f64,
    /// sqrt(1-mu)
    sm: f64,
    /// sqrt(1-nu)
    sn: f64,
}

impl SgadVars {
    fn read(params: &Params) -> Result<SgadVars> {
        let l = params.get("lambda")?;
        let m = params.get("mu")?;
        let n = params.get("nu")?;
        Ok(SgadVars {
            l,
            m,
            n,
            q: params.get("Q")?,
            phi: params.get("Phi")?,
            sl: (1.0 - l).sqrt(),
            sm: (1.0 - m).sqrt(),
            sn: (1.0 - n).sqrt(),
        })
    }
}

fn sgad_qkd1(s: &SgadVars) -> f64 {
    let smn = s.sm * s.sn;
    (smn - 2.0 * s.n + s.q * (s.sl - smn + 2.0 * s.n)
        - s.m.sqrt() * s.n.sqrt() * (s.q - 1.0) * s.phi.cos()
        + 3.0)
        / 4.0
}

fn sgad_qkd2(s: &SgadVars) -> f64 {
    let smn = s.sm * s.sn;
    (2.0 * smn - s.m - s.n + s.q * (-s.l + 2.0 * s.sl - 2.0 * smn + s.m + s.n) + 2.0) / 4.0
}

fn sgad_qka1(s: &SgadVars) -> f64 {
    let smn = s.sm * s.sn;
    (smn - s.m - s.n + s.q * (-s.l + s.sl - smn + s.m + s.n)
        - s.m.sqrt() * s.n.sqrt() * (s.q - 1.0) * s.phi.cos()
        + 3.0)
        / 4.0
}

fn sgad_qka2(s: &SgadVars) -> f64 {
    let (l, m, n, q) = (s.l, s.m, s.n, s.q);
    let slmn = s.sl * s.sm * s.sn;
    let t1 = l * l - 2.0 * l * (m + n + 1.0) - 2.0 * (2.0 * slmn + m + n - 2.0)
        + m * m
        + 5.0 * m * n
        + n * n;
    let t2 = m * m + m * (5.0 * n - 4.0) + (n - 2.0) * (n - 2.0);
    let t3 = l * (m + n - 1.0) + 2.0 * slmn - m * m + m * (3.0 - 5.0 * n) - (n - 3.0) * n - 2.0;
    (q * q * t1 + t2 + m * n * (q - 1.0) * (q - 1.0) * (2.0 * s.phi).cos() + 2.0 * q * t3) / 4.0
}

fn sgad_qsdc1(s: &SgadVars) -> f64 {
    let (l, m, n, q) = (s.l, s.m, s.n, s.q);
    let smn = s.sm * s.sn;
    let slmn = s.sl * smn;
    // Bracketing follows the printed nesting exactly: the cos(Phi) group and
    // the nu(Q-1)cos(2Phi)+6 tail sit inside the mu(Q-1)(...) factor.
    let head = 2.0
        * ((n - 3.0) * n
            + q * q * (-2.0 * l * n + (l - 1.0) * l + n * n - n + 2.0)
            + 2.0 * (n - 1.0) * q * (l - n + 1.0)
            + 4.0);
    let mu_group = m
        * (q - 1.0)
        * (-7.0 * n
            + q * (-4.0 * l + 7.0 * n - 2.0)
            + 4.0 * m.sqrt() * n.sqrt() * (q - 1.0) * s.phi.cos() * (-smn - s.sl * q + smn * q)
            + n * (q - 1.0) * (2.0 * s.phi).cos()
            + 6.0);
    (head - 4.0 * slmn * q * q + mu_group + 4.0 * slmn * q
        + 2.0 * m * m * (q - 1.0) * (q - 1.0))
        / 8.0
}

fn sgad_qd1(s: &SgadVars) -> f64 {
    let (l, m, n, q) = (s.l, s.m, s.n, s.q);
    let (sl, sm, sn) = (s.sl, s.sm, s.sn);
    let smn = sm * sn;
    // As printed. This expression fails its own limit checks (it gives F - 1
    // at the amplitude-damping limit and 0 at zero noise); reproduced
    // verbatim so the comparison layer can report the discrepancy.
    let a = -4.0 * l.powi(3)
        + 4.0 * (3.0 * m + n) * l * l
        - 2.0 * (6.0 * m * m + 4.0 * n * m + 2.0 * n * n + sl - 3.0 * smn) * l
        - 6.0 * sl * m
        + 9.0 * sl * m * n
        - 6.0 * sl * n
        - 5.0 * sm * m * sn * n
        + 2.0 * smn * n
        + 4.0 * (m + n) * (m * m + n * n)
        + 8.0 * sl
        + 2.0 * sm * m * sn
        - 8.0 * smn;
    let b = 12.0 * m.powi(3)
        + 2.0 * (6.0 * n - 5.0) * m * m
        + 3.0 * (n * (4.0 * n + 6.0 * sl - 5.0 * smn - 5.0) + 2.0 * smn) * m
        + 2.0 * (-6.0 * sl * m + m + n + 2.0 * sl * (smn - 3.0 * n) + 6.0 * sl - 6.0 * smn - 2.0)
        + 2.0 * n * (n * (6.0 * n - 5.0) + 3.0 * smn)
        + 2.0 * l * (6.0 * n - 2.0 * (2.0 * n * n + 4.0 * m * n + m * (6.0 * m - 5.0)) + 3.0 * smn + 1.0)
        + 2.0 * l * l * (6.0 * m + 2.0 * n - 5.0);
    let c = 3.0 * (n * (4.0 * n + 3.0 * sl - 5.0 * smn - 10.0) + 2.0 * smn) * m
        + 12.0 * m.powi(3)
        + 2.0 * ((8.0 - 3.0 * sl) * m + 8.0 * n + sl * (2.0 * smn - 3.0 * n) + 4.0 * sl
            - 4.0 * smn
            - 2.0)
        + 4.0 * (3.0 * n - 5.0) * m * m
        - 4.0 * l * (3.0 * m * m + (2.0 * n - 5.0) * m + (n - 3.0) * n + 3.0)
        + 2.0 * n * (2.0 * n * (3.0 * n - 5.0) + 3.0 * smn);
    (q.powi(3) * a - q * q * b + c) / 16.0
}

// ---------------------------------------------------------------------------
// SGAD -> AD limit check
// ---------------------------------------------------------------------------

/// Result of substituting `lambda = eta, mu = nu = 0, Q = 1` into a
/// protocol's SGAD form and comparing against its amplitude-damping form
/// over an `eta` grid.
#[derive(Clone, Debug)]
pub struct SgadLimitReport {
    pub protocol: FormulaProtocol,
    /// Largest |SGAD(limit) - AD| over the grid.
    pub max_abs_diff: f64,
    /// Grid point attaining the maximum.
    pub worst_eta: f64,
    /// Values at the worst point, `(sgad_at_limit, ad)`.
    pub worst_values: (f64, f64),
}

impl SgadLimitReport {
    /// Reduction holds to within construction tolerance.
    pub fn passes(&self) -> bool {
        self.max_abs_diff <= crate::tol::CONSTRUCTION
    }
}

/// Check that the SGAD closed form reduces to the amplitude-damping closed
/// form at `lambda = eta, mu = nu = 0, Q = 1` (`Phi` is immaterial there).
///
/// A mismatch is a reported finding, not an error: the report carries the
/// worst point and both values.
pub fn sgad_limit_check(protocol: FormulaProtocol) -> SgadLimitReport {
    let mut worst = (0.0_f64, 0.0_f64, (0.0_f64, 0.0_f64));
    for k in 0..=20 {
        let eta = k as f64 / 20.0;
        let sgad = eval(
            FormulaKey::new(protocol, ChannelFamily::Sgad),
            &Params::new()
                .with("lambda", eta)
                .with("mu", 0.0)
                .with("nu", 0.0)
                .with("Q", 1.0)
                .with("Phi", 0.7),
        )
        .expect("sgad params provided");
        let ad = eval(
            FormulaKey::new(protocol, ChannelFamily::AmplitudeDamping),
            &Params::new().with("eta", eta),
        )
        .expect("eta provided");
        let d = (sgad - ad).abs();
        if d > worst.0 {
            worst = (d, eta, (sgad, ad));
        }
    }
    SgadLimitReport {
        protocol,
        max_abs_diff: worst.0,
        worst_eta: worst.1,
        worst_values: worst.2,
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: FormulaProtocol, c: ChannelFamily) -> FormulaKey {
        FormulaKey::new(p, c)
    }

    fn ad(p: FormulaProtocol, eta: f64) -> f64 {
        eval(
            k(p, ChannelFamily::AmplitudeDamping),
            &Params::new().with("eta", eta),
        )
        .unwrap()
    }

    #[test]
    fn amplitude_damping_spot_values() {
        use FormulaProtocol as P;
        assert_eq!(ad(P::Qkd1, 0.0), 1.0);
        assert!((ad(P::Qkd1, 0.5) - 0.9267766952966369).abs() < 1e-12);
        assert!((ad(P::Qkd2, 0.5) - 0.7285533905932737).abs() < 1e-12);
        assert!((ad(P::Qka2, 1.0) - 0.25).abs() < 1e-15);
        assert!((ad(P::Qsdc1, 0.5) - 0.6875).abs() < 1e-15);
        assert!((ad(P::Qd1, 0.5) - 0.5700825214724777).abs() < 1e-12);
        assert!((ad(P::Qd2, 0.5) - 0.5625).abs() < 1e-15);
    }

    #[test]
    fn zero_noise_gives_unit_fidelity_except_known_defect() {
        use ChannelFamily as C;
        for p in FormulaProtocol::ALL {
            for c in C::ALL {
                let params = match c {
                    C::AmplitudeDamping | C::PhaseDamping => Params::new().with("eta", 0.0),
                    C::CollectiveDephasing => {
                        Params::new().with("phi1", 0.0).with("phi2", 0.0)
                    }
                    C::CollectiveRotation => {
                        Params::new().with("theta1", 0.0).with("theta2", 0.0)
                    }
                    C::Pauli => Params::new()
                        .with("p1", 1.0)
                        .with("p2", 0.0)
                        .with("p3", 0.0)
                        .with("p4", 0.0),
                    C::Sgad => Params::new()
                        .with("lambda", 0.0)
                        .with("mu", 0.0)
                        .with("nu", 0.0)
                        .with("Q", 0.4)
                        .with("Phi", 1.3),
                };
                let f = eval(k(p, c), &params).unwrap();
                if p == FormulaProtocol::Qd1 && c == C::Sgad {
                    // Known transcription-faithful defect: printed form gives
                    // 0 at zero noise.
                    assert!(f.abs() < 1e-12, "{}/{} = {f}", p.tag(), c.tag());
                } else {
                    assert!((f - 1.0).abs() < 1e-12, "{}/{} = {f}", p.tag(), c.tag());
                }
            }
        }
    }

    #[test]
    fn ping_pong_class_delegates_to_entangled_key_agreement() {
        use ChannelFamily as C;
        let cases = [
            (C::AmplitudeDamping, Params::new().with("eta", 0.37)),
            (C::PhaseDamping, Params::new().with("eta", 0.81)),
            (
                C::CollectiveDephasing,
                Params::new().with("phi1", 0.9).with("phi2", 2.2),
            ),
            (
                C::CollectiveRotation,
                Params::new().with("theta1", 1.1).with("theta2", 0.4),
            ),
            (
                C::Pauli,
                Params::new()
                    .with("p1", 0.4)
                    .with("p2", 0.3)
                    .with("p3", 0.2)
                    .with("p4", 0.1),
            ),
            (
                C::Sgad,
                Params::new()
                    .with("lambda", 0.3)
                    .with("mu", 0.15)
                    .with("nu", 0.25)
                    .with("Q", 0.7)
                    .with("Phi", 0.9),
            ),
        ];
        for (c, params) in cases {
            let a = eval(k(FormulaProtocol::Qsdc2, c), &params).unwrap();
            let b = eval(k(FormulaProtocol::Qka2, c), &params).unwrap();
            assert_eq!(a, b, "{}", c.tag());
        }
        // Entangled dialogue reuses the same Pauli form.
        let pauli = Params::new()
            .with("p1", 0.55)
            .with("p2", 0.25)
            .with("p3", 0.05)
            .with("p4", 0.15);
        assert_eq!(
            eval(k(FormulaProtocol::Qd2, ChannelFamily::Pauli), &pauli).unwrap(),
            eval(k(FormulaProtocol::Qka2, ChannelFamily::Pauli), &pauli).unwrap(),
        );
    }

    #[test]
    fn entangled_rotation_form_is_even_in_the_second_angle() {
        for i in 0..=10 {
            for j in 0..=10 {
                let t1 = i as f64 * 0.628;
                let t2 = j as f64 * 0.628;
                let f1 = eval(
                    k(FormulaProtocol::Qka2, ChannelFamily::CollectiveRotation),
                    &Params::new().with("theta1", t1).with("theta2", t2),
                )
                .unwrap();
                let f2 = eval(
                    k(FormulaProtocol::Qka2, ChannelFamily::CollectiveRotation),
                    &Params::new().with("theta1", t1).with("theta2", -t2),
                )
                .unwrap();
                assert!((f1 - f2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn missing_parameters_are_named() {
        let err = eval(
            k(FormulaProtocol::Qkd1, ChannelFamily::AmplitudeDamping),
            &Params::new(),
        )
        .unwrap_err();
        assert!(matches!(err, crate::error::Error::MissingParam(ref n) if n == "eta"));

        let err = eval(
            k(FormulaProtocol::Qka2, ChannelFamily::Sgad),
            &Params::new().with("lambda", 0.1).with("mu", 0.1).with("nu", 0.1),
        )
        .unwrap_err();
        assert!(matches!(err, crate::error::Error::MissingParam(ref n) if n == "Q"));
    }

    #[test]
    fn sgad_forms_reduce_to_amplitude_damping_except_known_defect() {
        for p in FormulaProtocol::ALL {
            let report = sgad_limit_check(p);
            if p == FormulaProtocol::Qd1 {
                // Printed form sits exactly one below the amplitude-damping
                // form on the whole grid.
                assert!(
                    (report.max_abs_diff - 1.0).abs() < 1e-12,
                    "{}: {}",
                    p.tag(),
                    report.max_abs_diff
                );
            } else {
                assert!(report.passes(), "{}: {}", p.tag(), report.max_abs_diff);
            }
        }
    }

    #[test]
    fn non_sgad_outputs_stay_in_the_unit_interval() {
        use ChannelFamily as C;
        for p in FormulaProtocol::ALL {
            for i in 0..=10 {
                let x = i as f64 / 10.0;
                for c in [C::AmplitudeDamping, C::PhaseDamping] {
                    let f = eval(k(p, c), &Params::new().with("eta", x)).unwrap();
                    assert!((-1e-12..=1.0 + 1e-12).contains(&f), "{}/{}", p.tag(), c.tag());
                }
                let f = eval(
                    k(p, C::CollectiveDephasing),
                    &Params::new()
                        .with("phi1", x * std::f64::consts::TAU)
                        .with("phi2", (1.0 - x) * std::f64::consts::TAU),
                )
                .unwrap();
                assert!((-1e-12..=1.0 + 1e-12).contains(&f));
                let f = eval(
                    k(p, C::CollectiveRotation),
                    &Params::new()
                        .with("theta1", x * std::f64::consts::TAU)
                        .with("theta2", x),
                )
                .unwrap();
                assert!((-1e-12..=1.0 + 1e-12).contains(&f));
                // A point on the weight simplex.
                let f = eval(
                    k(p, C::Pauli),
                    &Params::new()
                        .with("p1", 1.0 - x)
                        .with("p2", x / 2.0)
                        .with("p3", x / 4.0)
                        .with("p4", x / 4.0),
                )
                .unwrap();
                assert!((-1e-12..=1.0 + 1e-12).contains(&f), "{}/pauli", p.tag());
            }
        }
    }

    #[test]
    fn param_name_sets_follow_slot_count() {
        assert_eq!(
            k(FormulaProtocol::Qkd1, ChannelFamily::CollectiveDephasing).param_names(),
            ["phi1"]
        );
        assert_eq!(
            k(FormulaProtocol::Qd1, ChannelFamily::CollectiveDephasing).param_names(),
            ["phi1", "phi2"]
        );
        assert_eq!(
            k(FormulaProtocol::Qka1, ChannelFamily::CollectiveRotation).param_names(),
            ["theta1"]
        );
        assert_eq!(
            k(FormulaProtocol::Qka2, ChannelFamily::Sgad).param_names(),
            ["lambda", "mu", "nu", "Q", "Phi"]
        );
    }
}
