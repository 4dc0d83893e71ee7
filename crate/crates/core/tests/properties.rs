//! Property tests: structural invariants that must hold for arbitrary
//! admissible inputs, independent of any closed-form reference.

use num_complex::Complex64;
use proptest::prelude::*;

use qsclab::*;

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

fn unit_f64() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

fn angle() -> impl Strategy<Value = f64> {
    0.0..std::f64::consts::TAU
}

/// Four nonnegative weights summing to one.
fn simplex4() -> impl Strategy<Value = [f64; 4]> {
    [0.01..1.0f64, 0.01..1.0f64, 0.01..1.0f64, 0.01..1.0f64].prop_map(|raw| {
        let s: f64 = raw.iter().sum();
        [raw[0] / s, raw[1] / s, raw[2] / s, raw[3] / s]
    })
}

/// A normalized ket of the given dimension built from raw component pairs.
fn ket(dim: usize) -> impl Strategy<Value = Ket> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim)
        .prop_filter_map("needs nonzero norm", |amps| {
            let v: Vec<Complex64> = amps
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect();
            Ket::new(v).ok()
        })
}

/// A mixed state: convex combination of two pure states.
fn density(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    (ket(dim), ket(dim), unit_f64()).prop_map(|(a, b, w)| {
        let m = a
            .outer()
            .matrix()
            .scale(Complex64::new(w, 0.0))
            .add(&b.outer().matrix().scale(Complex64::new(1.0 - w, 0.0)))
            .unwrap();
        DensityMatrix::new(m).unwrap()
    })
}

/// A Haar-ish 2x2 unitary: Gram-Schmidt on two random complex columns.
fn unitary2() -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4).prop_filter_map(
        "needs independent columns",
        |raw| {
            let z: Vec<Complex64> = raw
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect();
            let n0 = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
            if n0 < 1e-2 {
                return None;
            }
            let c0 = [z[0] / n0, z[1] / n0];
            // Project the second column off the first, then normalize.
            let overlap = c0[0].conj() * z[2] + c0[1].conj() * z[3];
            let mut c1 = [z[2] - overlap * c0[0], z[3] - overlap * c0[1]];
            let n1 = (c1[0].norm_sqr() + c1[1].norm_sqr()).sqrt();
            if n1 < 1e-2 {
                return None;
            }
            c1 = [c1[0] / n1, c1[1] / n1];
            let mut m = ComplexMatrix::zeros(2, 2);
            m.set(0, 0, c0[0]);
            m.set(1, 0, c0[1]);
            m.set(0, 1, c1[0]);
            m.set(1, 1, c1[1]);
            Some(m)
        },
    )
}

/// Any admissible channel from the decohering families.
fn any_channel() -> impl Strategy<Value = KrausChannel> {
    prop_oneof![
        unit_f64().prop_map(|eta| make_ad(eta).unwrap()),
        unit_f64().prop_map(|eta| make_pd(eta).unwrap()),
        simplex4().prop_map(|w| {
            make_pauli(PauliWeights::new(w[0], w[1], w[2], w[3]).unwrap()).unwrap()
        }),
        (unit_f64(), unit_f64(), unit_f64(), unit_f64(), angle()).prop_map(
            |(l, m, n, q, phi)| make_sgad(SgadParams::new(l, m, n, q, phi).unwrap()).unwrap()
        ),
    ]
}

// ---------------------------------------------------------------------------
// Channel-output invariants
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn channels_are_complete(ch in any_channel()) {
        let report = validate_cptp(ch.operators()).unwrap();
        prop_assert!(report.passes(tol::CHANNEL), "deviation {}", report.max_deviation);
    }

    #[test]
    fn channel_outputs_are_valid_states(ch in any_channel(), rho in density(2)) {
        let out = rho.apply_kraus(ch.operators()).unwrap();
        prop_assert!((out.trace().re - 1.0).abs() < tol::CHANNEL);
        prop_assert!(out.trace().im.abs() < tol::CHANNEL);
        prop_assert!(out.check_positive(tol::POSITIVITY).is_ok());
    }

    #[test]
    fn fidelity_is_bounded(psi in ket(4), rho in density(4)) {
        let f = fidelity_pure(&psi, &rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn fidelity_is_unitarily_invariant(
        psi in ket(4),
        rho in density(4),
        ua in unitary2(),
        ub in unitary2(),
    ) {
        let u = tensor(&ua, &ub);
        let f0 = fidelity_pure(&psi, &rho).unwrap();
        let f1 = fidelity_pure(
            &psi.apply_unitary(&u).unwrap(),
            &rho.apply_unitary(&u).unwrap(),
        )
        .unwrap();
        prop_assert!((f0 - f1).abs() < tol::CHANNEL, "{f0} vs {f1}");
    }

    #[test]
    fn embedding_matches_explicit_tensor_forms(u in unitary2()) {
        let left = embed(&u, 0, 2).unwrap();
        let right = embed(&u, 1, 2).unwrap();
        prop_assert!(left.approx_eq(&tensor(&u, &ComplexMatrix::identity(2)), tol::CONSTRUCTION));
        prop_assert!(right.approx_eq(&tensor(&ComplexMatrix::identity(2), &u), tol::CONSTRUCTION));
    }

    #[test]
    fn collective_unitaries_commute_with_each_other_across_qubits(
        theta in angle(),
        rho in density(4),
    ) {
        // Applying the slot unitary to qubit 0 then 1 equals 1 then 0.
        let u = make_cr(theta);
        let a = rho
            .apply_unitary(&embed(&u, 0, 2).unwrap()).unwrap()
            .apply_unitary(&embed(&u, 1, 2).unwrap()).unwrap();
        let b = rho
            .apply_unitary(&embed(&u, 1, 2).unwrap()).unwrap()
            .apply_unitary(&embed(&u, 0, 2).unwrap()).unwrap();
        prop_assert!(a.matrix().approx_eq(b.matrix(), tol::CHANNEL));
    }
}

// ---------------------------------------------------------------------------
// Engine-level invariants
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn average_fidelity_is_bounded_for_every_protocol(ch in any_channel()) {
        for id in ProtocolId::ALL {
            let f = average_fidelity(&id.spec(), &NoiseAssignment::Decohering(ch.clone()))
                .unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&f), "{} -> {f}", id.tag());
        }
    }

    #[test]
    fn pauli_engine_matches_reference_forms(w in simplex4()) {
        let weights = PauliWeights::new(w[0], w[1], w[2], w[3]).unwrap();
        let params = Params::new()
            .with("p1", w[0])
            .with("p2", w[1])
            .with("p3", w[2])
            .with("p4", w[3]);
        for id in ProtocolId::ALL {
            let e = average_fidelity(
                &id.spec(),
                &NoiseAssignment::Decohering(make_pauli(weights).unwrap()),
            )
            .unwrap();
            let f = eval(
                FormulaKey::new(FormulaProtocol::from(id), ChannelFamily::Pauli),
                &params,
            )
            .unwrap();
            prop_assert!((e - f).abs() < tol::ORACLE, "{}: {e} vs {f}", id.tag());
        }
    }

    #[test]
    fn collective_noise_with_zero_angles_is_identity(kind in 0..2usize) {
        for id in ProtocolId::ALL {
            let spec = id.spec();
            let angles = vec![0.0; spec.n_slots];
            let params = if kind == 0 {
                CollectiveParams::rotation(angles)
            } else {
                CollectiveParams::dephasing(angles)
            };
            let f = average_fidelity(&spec, &NoiseAssignment::Collective(params)).unwrap();
            prop_assert!((f - 1.0).abs() < tol::CONSTRUCTION);
        }
    }
}
