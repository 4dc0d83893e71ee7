//! Command-line channel tags and their bindings to engine noise models and
//! reference-formula inputs.

use anyhow::{anyhow, bail, Result};
use qsclab::{
    make_ad, make_pauli, make_pd, make_sgad, ChannelFamily, CollectiveParams, NoiseAssignment,
    Params, PauliWeights, SgadParams,
};

/// Everything selectable with `--channel`. The four single-parameter Pauli
/// variants share the general `pauli` reference formula with fixed weight
/// patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Ad,
    Pd,
    Cd,
    Cr,
    Pauli,
    BitFlip,
    PhaseFlip,
    BitPhaseFlip,
    Depolarizing,
    Sgad,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 10] = [
        ChannelKind::Ad,
        ChannelKind::Pd,
        ChannelKind::Cd,
        ChannelKind::Cr,
        ChannelKind::Pauli,
        ChannelKind::BitFlip,
        ChannelKind::PhaseFlip,
        ChannelKind::BitPhaseFlip,
        ChannelKind::Depolarizing,
        ChannelKind::Sgad,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ChannelKind::Ad => "ad",
            ChannelKind::Pd => "pd",
            ChannelKind::Cd => "cd",
            ChannelKind::Cr => "cr",
            ChannelKind::Pauli => "pauli",
            ChannelKind::BitFlip => "bit_flip",
            ChannelKind::PhaseFlip => "phase_flip",
            ChannelKind::BitPhaseFlip => "bit_phase_flip",
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::Sgad => "sgad",
        }
    }

    pub fn parse(tag: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.tag() == tag)
            .ok_or_else(|| {
                let known: Vec<&str> = Self::ALL.iter().map(|k| k.tag()).collect();
                anyhow!("unknown channel '{tag}' (expected one of: {})", known.join(", "))
            })
    }

    /// Reference-formula family this kind evaluates against.
    pub fn family(self) -> ChannelFamily {
        match self {
            ChannelKind::Ad => ChannelFamily::AmplitudeDamping,
            ChannelKind::Pd => ChannelFamily::PhaseDamping,
            ChannelKind::Cd => ChannelFamily::CollectiveDephasing,
            ChannelKind::Cr => ChannelFamily::CollectiveRotation,
            ChannelKind::Pauli
            | ChannelKind::BitFlip
            | ChannelKind::PhaseFlip
            | ChannelKind::BitPhaseFlip
            | ChannelKind::Depolarizing => ChannelFamily::Pauli,
            ChannelKind::Sgad => ChannelFamily::Sgad,
        }
    }

    /// Sweep parameter names in canonical (column) order. Collective families
    /// take one angle per travel slot.
    pub fn param_names(self, n_slots: usize) -> Vec<&'static str> {
        match self {
            ChannelKind::Ad | ChannelKind::Pd => vec!["eta"],
            ChannelKind::Cd => {
                if n_slots == 1 {
                    vec!["phi1"]
                } else {
                    vec!["phi1", "phi2"]
                }
            }
            ChannelKind::Cr => {
                if n_slots == 1 {
                    vec!["theta1"]
                } else {
                    vec!["theta1", "theta2"]
                }
            }
            ChannelKind::Pauli => vec!["p1", "p2", "p3", "p4"],
            ChannelKind::BitFlip
            | ChannelKind::PhaseFlip
            | ChannelKind::BitPhaseFlip
            | ChannelKind::Depolarizing => vec!["pprime"],
            ChannelKind::Sgad => vec!["lambda", "mu", "nu", "Q", "Phi"],
        }
    }

    fn weights(self, params: &Params) -> Result<PauliWeights> {
        Ok(match self {
            ChannelKind::Pauli => PauliWeights::new(
                params.get("p1")?,
                params.get("p2")?,
                params.get("p3")?,
                params.get("p4")?,
            )?,
            ChannelKind::BitFlip => PauliWeights::bit_flip(params.get("pprime")?)?,
            ChannelKind::PhaseFlip => PauliWeights::phase_flip(params.get("pprime")?)?,
            ChannelKind::BitPhaseFlip => PauliWeights::bit_phase_flip(params.get("pprime")?)?,
            ChannelKind::Depolarizing => PauliWeights::depolarizing(params.get("pprime")?)?,
            _ => bail!("{} carries no Pauli weights", self.tag()),
        })
    }

    /// Build the engine-side noise for one sweep point.
    pub fn noise(self, params: &Params, n_slots: usize) -> Result<NoiseAssignment> {
        Ok(match self {
            ChannelKind::Ad => NoiseAssignment::Decohering(make_ad(params.get("eta")?)?),
            ChannelKind::Pd => NoiseAssignment::Decohering(make_pd(params.get("eta")?)?),
            ChannelKind::Cd => {
                let mut angles = vec![params.get("phi1")?];
                if n_slots > 1 {
                    angles.push(params.get("phi2")?);
                }
                NoiseAssignment::Collective(CollectiveParams::dephasing(angles))
            }
            ChannelKind::Cr => {
                let mut angles = vec![params.get("theta1")?];
                if n_slots > 1 {
                    angles.push(params.get("theta2")?);
                }
                NoiseAssignment::Collective(CollectiveParams::rotation(angles))
            }
            ChannelKind::Pauli
            | ChannelKind::BitFlip
            | ChannelKind::PhaseFlip
            | ChannelKind::BitPhaseFlip
            | ChannelKind::Depolarizing => {
                NoiseAssignment::Decohering(make_pauli(self.weights(params)?)?)
            }
            ChannelKind::Sgad => NoiseAssignment::Decohering(make_sgad(SgadParams::new(
                params.get("lambda")?,
                params.get("mu")?,
                params.get("nu")?,
                params.get("Q")?,
                params.get("Phi")?,
            )?)?),
        })
    }

    /// Translate sweep parameters into the reference formula's inputs. The
    /// single-parameter Pauli variants expand `pprime` into the four weights;
    /// everything else passes through.
    pub fn oracle_params(self, params: &Params) -> Result<Params> {
        match self {
            ChannelKind::BitFlip
            | ChannelKind::PhaseFlip
            | ChannelKind::BitPhaseFlip
            | ChannelKind::Depolarizing => {
                let [p1, p2, p3, p4] = self.weights(params)?.as_array();
                Ok(Params::new()
                    .with("p1", p1)
                    .with("p2", p2)
                    .with("p3", p3)
                    .with("p4", p4))
            }
            _ => Ok(params.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsclab::{FormulaKey, FormulaProtocol};

    #[test]
    fn tags_round_trip() {
        for kind in ChannelKind::ALL {
            assert_eq!(ChannelKind::parse(kind.tag()).unwrap(), kind);
        }
        assert!(ChannelKind::parse("amplitude").is_err());
    }

    #[test]
    fn param_names_match_the_reference_formula_inputs() {
        for kind in [ChannelKind::Ad, ChannelKind::Pd, ChannelKind::Cd, ChannelKind::Cr] {
            for (proto, n_slots) in [(FormulaProtocol::Qkd1, 1), (FormulaProtocol::Qka2, 2)] {
                let expected = FormulaKey::new(proto, kind.family()).param_names();
                assert_eq!(kind.param_names(n_slots), expected);
            }
        }
        assert_eq!(ChannelKind::BitFlip.param_names(1), vec!["pprime"]);
    }

    #[test]
    fn variant_expansion_matches_the_weight_patterns() {
        let p = Params::new().with("pprime", 0.3);
        let w = ChannelKind::Depolarizing.oracle_params(&p).unwrap();
        assert!((w.get("p1").unwrap() - 0.7).abs() < 1e-15);
        assert!((w.get("p2").unwrap() - 0.1).abs() < 1e-15);
        assert!((w.get("p3").unwrap() - 0.1).abs() < 1e-15);
        assert!((w.get("p4").unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn noise_construction_respects_slot_count() {
        let p = Params::new().with("theta1", 0.4).with("theta2", 1.1);
        match ChannelKind::Cr.noise(&p, 2).unwrap() {
            NoiseAssignment::Collective(c) => assert_eq!(c.angles, vec![0.4, 1.1]),
            _ => panic!("collective rotation expected"),
        }
        match ChannelKind::Cr.noise(&p, 1).unwrap() {
            NoiseAssignment::Collective(c) => assert_eq!(c.angles, vec![0.4]),
            _ => panic!("collective rotation expected"),
        }
    }

    #[test]
    fn missing_sweep_parameters_are_reported_by_name() {
        let err = ChannelKind::Ad.noise(&Params::new(), 1).unwrap_err();
        assert!(err.to_string().contains("eta"));
    }
}
