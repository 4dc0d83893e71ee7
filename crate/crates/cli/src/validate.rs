//! `validate`: channel-algebra self-checks. Formula-vs-engine arbitration
//! is `compare`'s job; this command only certifies that every channel
//! constructor produces physical objects with the documented limit behavior.

use std::f64::consts::PI;

use anyhow::Result;
use qsclab::{
    average_fidelity, identity_channel, make_ad, make_bit_flip, make_bit_phase_flip, make_cd,
    make_cr, make_depolarizing, make_pauli, make_pd, make_phase_flip, make_sgad, sgad_rates,
    NoiseAssignment, PauliWeights, ProtocolId, SgadParams, SgadPhysical,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const CPTP_TOL: f64 = 1e-10;
const LIMIT_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn measured(name: &'static str, worst: f64, tol: f64, what: &str) -> Self {
        Check {
            name,
            passed: worst <= tol,
            detail: format!("worst {what} {worst:.3e} (tolerance {tol:.1e})"),
        }
    }
}

fn grid01(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn cptp_damping_grids() -> Result<Check> {
    let mut worst = 0.0_f64;
    for eta in grid01(21) {
        worst = worst.max(make_ad(eta)?.validate_cptp()?.max_deviation);
        worst = worst.max(make_pd(eta)?.validate_cptp()?.max_deviation);
    }
    Ok(Check::measured(
        "cptp_damping_grids",
        worst,
        CPTP_TOL,
        "completeness deviation",
    ))
}

fn cptp_pauli_variants() -> Result<Check> {
    let mut worst = 0.0_f64;
    for p in grid01(21) {
        for ch in [
            make_bit_flip(p)?,
            make_phase_flip(p)?,
            make_bit_phase_flip(p)?,
            make_depolarizing(p)?,
        ] {
            worst = worst.max(ch.validate_cptp()?.max_deviation);
        }
    }
    Ok(Check::measured(
        "cptp_pauli_variants",
        worst,
        CPTP_TOL,
        "completeness deviation",
    ))
}

fn cptp_pauli_simplex() -> Result<Check> {
    let mut rng = StdRng::seed_from_u64(0x9a71);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let raw: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
        let total: f64 = raw.iter().sum();
        let w = PauliWeights::new(
            raw[0] / total,
            raw[1] / total,
            raw[2] / total,
            raw[3] / total,
        )?;
        worst = worst.max(make_pauli(w)?.validate_cptp()?.max_deviation);
    }
    Ok(Check::measured(
        "cptp_pauli_simplex",
        worst,
        CPTP_TOL,
        "completeness deviation",
    ))
}

fn cptp_sgad_grid() -> Result<Check> {
    let mut rng = StdRng::seed_from_u64(0x56ad);
    let mut worst = 0.0_f64;
    for _ in 0..40 {
        let ch = make_sgad(SgadParams::new(
            rng.gen_range(0.0..=1.0),
            rng.gen_range(0.0..=1.0),
            rng.gen_range(0.0..=1.0),
            rng.gen_range(0.0..=1.0),
            rng.gen_range(0.0..=2.0 * PI),
        )?)?;
        worst = worst.max(ch.validate_cptp()?.max_deviation);
    }
    Ok(Check::measured(
        "cptp_sgad_grid",
        worst,
        CPTP_TOL,
        "completeness deviation",
    ))
}

/// SGAD at (λ=η, μ=ν=0, Q=1) must reproduce the amplitude-damping operators
/// entrywise, with the two spare operators identically zero.
fn sgad_reduces_to_ad_operatorwise() -> Result<Check> {
    let mut worst = 0.0_f64;
    for eta in grid01(21) {
        let sgad = make_sgad(SgadParams::new(eta, 0.0, 0.0, 1.0, 0.3)?)?;
        let ad = make_ad(eta)?;
        for (s, a) in sgad.operators().iter().take(2).zip(ad.operators()) {
            worst = worst.max(s.max_abs_diff(a)?);
        }
        for spare in sgad.operators().iter().skip(2) {
            worst = worst.max(spare.max_abs());
        }
    }
    Ok(Check::measured(
        "sgad_reduces_to_ad_operatorwise",
        worst,
        LIMIT_TOL,
        "operator deviation",
    ))
}

/// The thermal chain: unsqueezed rates (r = 0) kill the coherence rate μ,
/// and t = 0 returns (0, 0, 0) exactly.
fn sgad_rate_pins() -> Result<Check> {
    let zero = sgad_rates(&SgadPhysical::new(1.0, 0.0, 0.4, 0.2, 2.0, 0.5)?)?;
    let zero_ok = zero == (0.0, 0.0, 0.0);

    // Balanced decomposition weight (N+1)/(2N+1): the unsqueezed rates stay
    // in [0,1] for every t, so the mu pin can scan a long window.
    let x = 2.0_f64;
    let n = 1.0 / (x.exp() - 1.0);
    let p_star = (n + 1.0) / (2.0 * n + 1.0);
    let mut unsqueezed_ok = true;
    for k in 1..=30 {
        let t = k as f64 * 0.1;
        let (_, mu, _) = sgad_rates(&SgadPhysical::new(1.0, t, 0.0, 0.0, x, p_star)?)?;
        unsqueezed_ok &= mu == 0.0;
    }
    Ok(Check {
        name: "sgad_rate_pins",
        passed: zero_ok && unsqueezed_ok,
        detail: format!(
            "t=0 rates {:?} (exact zeros: {zero_ok}); r=0 forces mu=0: {unsqueezed_ok}",
            zero
        ),
    })
}

fn collective_unitarity() -> Result<Check> {
    let mut worst = 0.0_f64;
    for k in 0..100 {
        let angle = k as f64 * (2.0 * PI) / 99.0;
        worst = worst.max(make_cr(angle).unitarity_deviation()?);
        worst = worst.max(make_cd(angle).unitarity_deviation()?);
    }
    Ok(Check::measured(
        "collective_unitarity",
        worst,
        UNITARY_TOL,
        "unitarity deviation",
    ))
}

fn identity_fixpoint() -> Result<Check> {
    let noise = NoiseAssignment::Decohering(identity_channel());
    let mut worst = 0.0_f64;
    for id in ProtocolId::ALL {
        let f = average_fidelity(&id.spec(), &noise)?;
        worst = worst.max((f - 1.0).abs());
    }
    Ok(Check::measured(
        "identity_fixpoint",
        worst,
        LIMIT_TOL,
        "deviation from unit fidelity",
    ))
}

pub fn run_validate() -> Result<Vec<Check>> {
    Ok(vec![
        cptp_damping_grids()?,
        cptp_pauli_variants()?,
        cptp_pauli_simplex()?,
        cptp_sgad_grid()?,
        sgad_reduces_to_ad_operatorwise()?,
        sgad_rate_pins()?,
        collective_unitarity()?,
        identity_fixpoint()?,
    ])
}

/// Print the report; `true` iff every check passed.
pub fn cmd_validate() -> Result<bool> {
    let checks = run_validate()?;
    for c in &checks {
        println!(
            "{} {:<32} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let all = checks.iter().all(|c| c.passed);
    println!(
        "validate: {}/{} checks passed",
        checks.iter().filter(|c| c.passed).count(),
        checks.len()
    );
    Ok(all)
}
