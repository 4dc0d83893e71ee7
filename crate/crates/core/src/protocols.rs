//! Deterministic case enumeration and density-matrix evolution for eight
//! secure quantum communication protocols.
//!
//! Every protocol is described by the same small data model
//! ([`ProtocolSpec`]): an ensemble of initial pure states, per-party
//! encoding-unitary sets, and an ordered pipeline interleaving noise slots
//! (travel rounds) with encodings. A protocol **case** is one choice of
//! initial state plus one encoding per party; the reported figure of merit
//! is the unweighted mean, over all cases, of `<target| rho_final |target>`
//! where the target is the ideal (noiseless) encoded state.
//!
//! Noise enters through a [`NoiseAssignment`]:
//!
//! - decohering (Kraus) families act with the **same parameters in every
//!   slot**, independently on each traveling qubit;
//! - collective unitary families carry **one angle per slot**, and every
//!   qubit in flight during a slot receives the same unitary.
//!
//! The eight protocols:
//!
//! | tag | protocol | qubits | ensemble | encodings | slots |
//! |-----|----------|--------|----------|-----------|-------|
//! | b92  | two-state prepare-and-measure QKD | 1 | {0, +} | none | 1 |
//! | bbm  | entangled-pair QKD | 2 | singlet | none | 1 (qubit 1 travels) |
//! | qka1 | single-qubit key agreement | 1 | {0, 1, +, -} | {I, iY} after the slot | 1 |
//! | qka2 | entangled-state key agreement | 2 | (&#124;00>+&#124;11>)/sqrt(2) | {I, X} between slots | 2 |
//! | lm05 | two-way QSDC | 1 | {0, 1, +, -} | {I, iY} between slots | 2 |
//! | pp   | ping-pong QSDC | 2 | (&#124;00>+&#124;11>)/sqrt(2) | {I, X} between slots | 2 |
//! | qd1  | single-qubit quantum dialogue | 2 | {00, 11, ++, --} | Alice then Bob, {I, iY} on the carrier | 2 (slot 0 hits both qubits) |
//! | qd2  | entangled-state quantum dialogue | 2 | (&#124;00>+&#124;11>)/sqrt(2) | Bob then Alice, {I, X, iY, Z} | 2 |

use crate::channels::{CollectiveParams, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{embed, fidelity_pure, ops, ComplexMatrix, DensityMatrix, Ket};

// ---------------------------------------------------------------------------
// Identifiers
// ---------------------------------------------------------------------------

/// Stable protocol identifiers; [`ProtocolId::tag`] values are the CLI/CSV
/// names and never change.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProtocolId {
    B92,
    Bbm,
    QkaSingle,
    QkaEntangled,
    Lm05,
    PingPong,
    QdSingle,
    QdBaAn,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 8] = [
        ProtocolId::B92,
        ProtocolId::Bbm,
        ProtocolId::QkaSingle,
        ProtocolId::QkaEntangled,
        ProtocolId::Lm05,
        ProtocolId::PingPong,
        ProtocolId::QdSingle,
        ProtocolId::QdBaAn,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ProtocolId::B92 => "b92",
            ProtocolId::Bbm => "bbm",
            ProtocolId::QkaSingle => "qka1",
            ProtocolId::QkaEntangled => "qka2",
            ProtocolId::Lm05 => "lm05",
            ProtocolId::PingPong => "pp",
            ProtocolId::QdSingle => "qd1",
            ProtocolId::QdBaAn => "qd2",
        }
    }

    pub fn parse(tag: &str) -> Option<ProtocolId> {
        Self::ALL.into_iter().find(|p| p.tag() == tag)
    }

    /// Build the protocol's specification.
    pub fn spec(self) -> ProtocolSpec {
        match self {
            ProtocolId::B92 => b92(),
            ProtocolId::Bbm => bbm(),
            ProtocolId::QkaSingle => qka_single(),
            ProtocolId::QkaEntangled => qka_entangled(),
            ProtocolId::Lm05 => lm05(),
            ProtocolId::PingPong => ping_pong(),
            ProtocolId::QdSingle => qd_single(),
            ProtocolId::QdBaAn => qd_ba_an(),
        }
    }
}

// ---------------------------------------------------------------------------
// Specification model
// ---------------------------------------------------------------------------

/// One step of a protocol pipeline.
#[derive(Clone, Debug)]
pub enum Stage {
    /// Travel round `slot`; noise acts on each qubit in `targets`.
    Noise { slot: usize, targets: Vec<usize> },
    /// Party `party` applies its chosen encoding unitary.
    Encode { party: usize },
}

/// A labeled set of encoding unitaries one party chooses from.
#[derive(Clone, Debug)]
pub struct EncodingSet {
    pub party: &'static str,
    /// Qubit the encoding acts on.
    pub qubit: usize,
    /// `(label, unitary)` pairs, in case-enumeration order.
    pub ops: Vec<(&'static str, ComplexMatrix)>,
}

/// Travel rounds in pipeline order (the noise-facing view of a pipeline).
#[derive(Clone, Debug)]
pub struct TravelSchedule {
    pub rounds: Vec<TravelRound>,
}

#[derive(Clone, Debug)]
pub struct TravelRound {
    pub slot: usize,
    pub targets: Vec<usize>,
}

/// Full protocol description. Immutable after construction; evaluation is
/// pure, so independent parameter points can be run concurrently and merged
/// by grid index.
#[derive(Clone, Debug)]
pub struct ProtocolSpec {
    pub id: ProtocolId,
    /// Human-readable protocol name.
    pub name: &'static str,
    pub n_qubits: usize,
    /// Initial pure states, uniformly weighted.
    pub ensemble: Vec<Ket>,
    /// Per-party encoding sets, in pipeline order of first use.
    pub encodings: Vec<EncodingSet>,
    pub pipeline: Vec<Stage>,
    /// Number of distinct travel slots referenced by the pipeline.
    pub n_slots: usize,
}

impl ProtocolSpec {
    /// Total cases: ensemble size times the product of encoding-set sizes.
    /// Enumeration is ensemble-major, then party encodings in listed order
    /// (the last listed party varies fastest).
    pub fn n_cases(&self) -> usize {
        self.ensemble.len() * self.encodings.iter().map(|e| e.ops.len()).product::<usize>()
    }

    /// Decompose a case index into (ensemble index, per-party op indices).
    pub fn case_indices(&self, case: usize) -> Result<(usize, Vec<usize>)> {
        let n = self.n_cases();
        if case >= n {
            return Err(Error::CaseOutOfRange {
                index: case,
                n_cases: n,
            });
        }
        let enc_total: usize = self.encodings.iter().map(|e| e.ops.len()).product();
        let initial = case / enc_total;
        let mut rem = case % enc_total;
        let mut choices = Vec::with_capacity(self.encodings.len());
        let mut stride = enc_total;
        for set in &self.encodings {
            stride /= set.ops.len();
            choices.push(rem / stride);
            rem %= stride;
        }
        Ok((initial, choices))
    }

    /// The ideal (noiseless) target: encodings applied to the initial state
    /// in pipeline order.
    pub fn ideal_target(&self, case: usize) -> Result<Ket> {
        let (initial, choices) = self.case_indices(case)?;
        let mut ket = self.ensemble[initial].clone();
        for stage in &self.pipeline {
            if let Stage::Encode { party } = stage {
                let set = &self.encodings[*party];
                let op = embed(&set.ops[choices[*party]].1, set.qubit, self.n_qubits)?;
                ket = ket.apply_unitary(&op)?;
            }
        }
        Ok(ket)
    }

    /// The noise-facing view of the pipeline.
    pub fn schedule(&self) -> TravelSchedule {
        TravelSchedule {
            rounds: self
                .pipeline
                .iter()
                .filter_map(|s| match s {
                    Stage::Noise { slot, targets } => Some(TravelRound {
                        slot: *slot,
                        targets: targets.clone(),
                    }),
                    Stage::Encode { .. } => None,
                })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Noise assignment
// ---------------------------------------------------------------------------

/// Noise bound to a protocol run.
#[derive(Clone, Debug)]
pub enum NoiseAssignment {
    /// The same Kraus channel acts independently on every traveling qubit in
    /// every slot.
    Decohering(KrausChannel),
    /// One collective unitary per slot (`angles.len()` must equal the
    /// protocol's slot count).
    Collective(CollectiveParams),
}

impl NoiseAssignment {
    fn check_slots(&self, required: usize) -> Result<()> {
        if let NoiseAssignment::Collective(p) = self {
            if p.angles.len() != required {
                return Err(Error::SlotMismatch {
                    provided: p.angles.len(),
                    required,
                });
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Outcome of a single protocol case.
#[derive(Clone, Debug)]
pub struct CaseOutcome {
    pub fidelity: f64,
    pub final_state: DensityMatrix,
}

/// Run one case: evolve the initial state through the pipeline under
/// `noise` and score it against the ideal target.
pub fn run_case(spec: &ProtocolSpec, case: usize, noise: &NoiseAssignment) -> Result<CaseOutcome> {
    noise.check_slots(spec.n_slots)?;
    let (initial, choices) = spec.case_indices(case)?;
    let target = spec.ideal_target(case)?;

    let collective = match noise {
        NoiseAssignment::Collective(p) => Some(p.unitaries()),
        NoiseAssignment::Decohering(_) => None,
    };

    let mut rho = DensityMatrix::from_pure(&spec.ensemble[initial]);
    for stage in &spec.pipeline {
        match stage {
            Stage::Encode { party } => {
                let set = &spec.encodings[*party];
                let op = embed(&set.ops[choices[*party]].1, set.qubit, spec.n_qubits)?;
                rho = rho.apply_unitary(&op)?;
            }
            Stage::Noise { slot, targets } => {
                for &q in targets {
                    rho = match noise {
                        NoiseAssignment::Decohering(ch) => {
                            let embedded: Vec<ComplexMatrix> = ch
                                .operators()
                                .iter()
                                .map(|e| embed(e, q, spec.n_qubits))
                                .collect::<Result<_>>()?;
                            rho.apply_kraus(&embedded)?
                        }
                        NoiseAssignment::Collective(_) => {
                            let us = collective.as_ref().expect("collective unitaries built");
                            rho.apply_unitary(&embed(&us[*slot], q, spec.n_qubits)?)?
                        }
                    };
                }
            }
        }
    }

    Ok(CaseOutcome {
        fidelity: fidelity_pure(&target, &rho)?,
        final_state: rho,
    })
}

/// Unweighted mean fidelity over the protocol's full case product.
/// Deterministic: cases are visited in index order and summed sequentially.
pub fn average_fidelity(spec: &ProtocolSpec, noise: &NoiseAssignment) -> Result<f64> {
    noise.check_slots(spec.n_slots)?;
    let n = spec.n_cases();
    let mut sum = 0.0;
    for case in 0..n {
        sum += run_case(spec, case, noise)?.fidelity;
    }
    Ok(sum / n as f64)
}

// ---------------------------------------------------------------------------
// The eight protocols
// ---------------------------------------------------------------------------

fn enc(party: &'static str, qubit: usize, labels: &[&'static str]) -> EncodingSet {
    let ops = labels
        .iter()
        .map(|&l| {
            let m = match l {
                "I" => ops::identity2(),
                "X" => ops::sigma_x(),
                "iY" => ops::sigma_iy(),
                "Z" => ops::sigma_z(),
                other => unreachable!("unknown encoding label {other}"),
            };
            (l, m)
        })
        .collect();
    EncodingSet { party, qubit, ops }
}

/// Two-state prepare-and-measure QKD: Alice sends `|0>` or `|+>` through
/// one noisy transit; no encoding.
pub fn b92() -> ProtocolSpec {
    ProtocolSpec {
        id: ProtocolId::B92,
        name: "B92 two-state QKD",
        n_qubits: 1,
        ensemble: vec![Ket::zero(), Ket::plus()],
        encodings: vec![],
        pipeline: vec![Stage::Noise {
            slot: 0,
            targets: vec![0],
        }],
        n_slots: 1,
    }
}

/// Entangled-pair QKD: a singlet is shared, the second qubit travels once.
pub fn bbm() -> ProtocolSpec {
    ProtocolSpec {
        id: ProtocolId::Bbm,
        name: "BBM entangled-pair QKD",
        n_qubits: 2,
        ensemble: vec![Ket::singlet()],
        encodings: vec![],
        pipeline: vec![Stage::Noise {
            slot: 0,
            targets: vec![1],
        }],
        n_slots: 1,
    }
}

/// Single-qubit key agreement: Alice sends one of the four BB84 states,
/// Bob encodes his key bit with `I`/`iY` on the received (already noisy)
/// qubit and keeps it.
pub fn qka_single() -> ProtocolSpec {
    ProtocolSpec {
        id: ProtocolId::QkaSingle,
        name: "single-qubit key agreement",
        n_qubits: 1,
        ensemble: vec![Ket::zero(), Ket::one(), Ket::plus(), Ket::minus()],
        encodings: vec![enc("bob", 0, &["I", "iY"])],
        pipeline: vec![
            Stage::Noise {
                slot: 0,
                targets: vec![0],
            },
            Stage::Encode { party: 0 },
        ],
        n_slots: 1,
    }
}

/// Entangled-state key agreement: one qubit of `(|00>+|11>)/sqrt(2)`
/// travels, is encoded with `I`/`X`, and travels back.
pub fn qka_entangled() -> ProtocolSpec {
    ProtocolSpec {
        id: ProtocolId::QkaEntangled,
        name: "entangled-state key agreement",
        n_qubits: 2,
        ensemble: vec![Ket::bell_psi_plus()],
        encodings: vec![enc("bob", 0, &["I", "X"])],
        pipeline: vec![
            Stage::Noise {
                slot: 0,
                targets: vec![0],
            },
            Stage::Encode { party: 0 },
            Stage::Noise {
                slot: 1,
                targets: vec![0],
            },
        ],
        n_slots: 2,
    }
}

/// Two-way direct communication: a BB84 state travels to Bob, who encodes
/// with `I`/`iY` and returns it through a second noisy transit.
pub fn lm05() -> ProtocolSpec {
    ProtocolSpec {
        id: ProtocolId::Lm05,
        name: "LM05 two-way QSDC",
        n_qubits: 1,
        ensemble: vec![Ket::zero(), Ket::one(), Ket::plus(), Ket::minus()],
        encodings: vec![enc("bob", 0, &["I", "iY"])],
        pipeline: vec![
            Stage::Noise {
                slot: 0,
                targets: vec![0],
            },
            Stage::Encode { party: 0 },
            Stage::Noise {
                slot: 1,
                targets: vec![0],
            },
        ],
        n_slots: 2,
    }
}

/// Ping-pong QSDC: structurally the entangled-state key-agreement pipeline
/// (travel, encode `I`/`X`, travel back) used for direct communication.
pub fn ping_pong() -> ProtocolSpec {
    ProtocolSpec {
        id: ProtocolId::PingPong,
        name: "ping-pong QSDC",
        n_qubits: 2,
        ensemble: vec![Ket::bell_psi_plus()],
        encodings: vec![enc("bob", 0, &["I", "X"])],
        pipeline: vec![
            Stage::Noise {
                slot: 0,
                targets: vec![0],
            },
            Stage::Encode { party: 0 },
            Stage::Noise {
                slot: 1,
                targets: vec![0],
            },
        ],
        n_slots: 2,
    }
}

/// Single-qubit quantum dialogue: carrier (qubit 0) and a same-state
/// reference copy (qubit 1) both travel to Alice (slot 0 hits both); Alice
/// encodes `I`/`iY` on the carrier, which travels back alone (slot 1);
/// Bob then encodes `I`/`iY` on the carrier.
pub fn qd_single() -> ProtocolSpec {
    let states = [Ket::zero(), Ket::one(), Ket::plus(), Ket::minus()];
    ProtocolSpec {
        id: ProtocolId::QdSingle,
        name: "single-qubit quantum dialogue",
        n_qubits: 2,
        ensemble: states.iter().map(|s| s.tensor(s)).collect(),
        encodings: vec![enc("alice", 0, &["I", "iY"]), enc("bob", 0, &["I", "iY"])],
        pipeline: vec![
            Stage::Noise {
                slot: 0,
                targets: vec![0, 1],
            },
            Stage::Encode { party: 0 },
            Stage::Noise {
                slot: 1,
                targets: vec![0],
            },
            Stage::Encode { party: 1 },
        ],
        n_slots: 2,
    }
}

/// Entangled-state quantum dialogue: Bob encodes one qubit of
/// `(|00>+|11>)/sqrt(2)` with a full Pauli set and sends it (slot 0);
/// Alice encodes hers and the qubit travels again (slot 1).
pub fn qd_ba_an() -> ProtocolSpec {
    ProtocolSpec {
        id: ProtocolId::QdBaAn,
        name: "entangled-state quantum dialogue",
        n_qubits: 2,
        ensemble: vec![Ket::bell_psi_plus()],
        encodings: vec![
            enc("bob", 0, &["I", "X", "iY", "Z"]),
            enc("alice", 0, &["I", "X", "iY", "Z"]),
        ],
        pipeline: vec![
            Stage::Encode { party: 0 },
            Stage::Noise {
                slot: 0,
                targets: vec![0],
            },
            Stage::Encode { party: 1 },
            Stage::Noise {
                slot: 1,
                targets: vec![0],
            },
        ],
        n_slots: 2,
    }
}

// ---------------------------------------------------------------------------
