mod common;

use std::f64::consts::FRAC_PI_2;

use common::*;
use proptest::prelude::*;
use qedsim::circuit::run_exact;
use qedsim::noise::{DataQubit, NoiseConfig};
use qedsim::qstate::{DensityMatrix, OperatorMatrix};
use qedsim::repcode::{
    correction_for, decoder, encode_by_gates, encode_by_measurement, encode_input_state,
    encode_state, ghz, logical_state, logical_state_with, measure_parities, run_flips,
    stabilizer_round, stabilizer_round_with, superposition_input, syndrome_table, Cardinal,
    ConventionFlag, Pipeline, StabilizerSet, Syndrome,
};

const CONVENTIONS: [ConventionFlag; 2] = [ConventionFlag::INVERTED, ConventionFlag::TEXTBOOK];

/// Data-then-ancilla unitary of one parity round on `[t, m, b, A_t, A_b]`.
fn round_oracle() -> M {
    let ry = ry2(FRAC_PI_2);
    let m1 = on(&ry, 3, 5).matmul(&on(&ry, 4, 5));
    let m2 = cz_full(3, 1, 5);
    let m3 = cz_full(3, 0, 5).matmul(&cz_full(4, 1, 5));
    let m4 = on(&x2(), 1, 5).matmul(&cz_full(4, 2, 5));
    m4.matmul(&m3).matmul(&m2).matmul(&m1)
}

/// `(I ± X)/2` on an ancilla, `+` for outcome bit 0.
fn x_projector(q: usize, bit: u8) -> M {
    let s = if bit == 0 { 0.5 } else { -0.5 };
    on(
        &m2([[c(0.5, 0.0), c(s, 0.0)], [c(s, 0.0), c(0.5, 0.0)]]),
        q,
        5,
    )
}

/// Traces out the two least significant qubits.
fn trace_ancillas(m: &M) -> M {
    let mut out = M::zeros(8);
    for a in 0..8 {
        for b in 0..8 {
            let v = (0..4).map(|e| m.get(4 * a + e, 4 * b + e)).sum();
            out.set(a, b, v);
        }
    }
    out
}

/// Unnormalized data state for each syndrome, by direct projection.
fn oracle_branches(data: &M) -> Vec<M> {
    let mut anc = M::zeros(4);
    anc.set(0, 0, c(1.0, 0.0));
    let sigma = conj_by(&round_oracle(), &data.kron(&anc));
    Syndrome::ALL
        .iter()
        .map(|s| {
            let p = x_projector(3, s.p_t.bit()).matmul(&x_projector(4, s.p_b.bit()));
            trace_ancillas(&conj_by(&p, &sigma))
        })
        .collect()
}

fn majority_decode(mask: usize) -> bool {
    mask.count_ones() >= 2
}

#[test]
fn computational_inputs_give_their_parities() {
    for i in 0..8 {
        let input = DensityMatrix::<f64>::basis(3, i)
            .unwrap()
            .tensor(&DensityMatrix::basis(2, 0).unwrap());
        let branches = run_exact(&stabilizer_round(), &input, &NoiseConfig::ideal()).unwrap();
        let expected = Syndrome::of_data(i);
        for b in &branches {
            let s = Syndrome::from_outcomes(&b.outcomes).unwrap();
            let p = if s == expected { 1.0 } else { 0.0 };
            assert!((b.probability - p).abs() < 1e-12, "|{i:03b}⟩ {s}");
        }
        let (t, m, k) = (i >> 2 & 1, i >> 1 & 1, i & 1);
        assert_eq!(expected.p_t.bit() as usize, t ^ m);
        assert_eq!(expected.p_b.bit() as usize, m ^ k);
    }
}

#[test]
fn selective_rounds_match_full_round_marginals() {
    for i in 0..8 {
        let data = DensityMatrix::<f64>::basis(3, i).unwrap();
        let s = Syndrome::of_data(i);
        let top = measure_parities(&data, StabilizerSet::Top, &NoiseConfig::ideal()).unwrap();
        let bottom = measure_parities(&data, StabilizerSet::Bottom, &NoiseConfig::ideal()).unwrap();
        for (out, label, bit) in [(top, "P_t", s.p_t.bit()), (bottom, "P_b", s.p_b.bit())] {
            assert_eq!(out.branches.len(), 2);
            for b in &out.branches {
                assert_eq!(b.outcomes.labels(), vec![label.to_string()]);
                let p = if b.outcomes.get(label) == Some(bit) {
                    1.0
                } else {
                    0.0
                };
                assert!((b.probability - p).abs() < 1e-12);
            }
        }
    }
    let round = stabilizer_round_with::<f64>(StabilizerSet::Top);
    assert_eq!(
        round.total_duration(),
        stabilizer_round::<f64>().total_duration()
    );
}

#[test]
fn corrections_restore_logical_states_after_single_flips() {
    let ideal = NoiseConfig::<f64>::ideal();
    for c in Cardinal::ALL {
        let target = logical_state::<f64>(c);
        let flipped_target = OperatorMatrix::x_mask(&[true; 3])
            .apply_to_state(&target, &[0, 1, 2])
            .unwrap();
        for mask in 0..8usize {
            let flips: Vec<DataQubit> = DataQubit::ALL
                .into_iter()
                .filter(|q| mask & (4 >> q.index()) != 0)
                .collect();
            let out = run_flips(c, Pipeline::Qed, &flips, &ideal).unwrap();
            let want = if flips.len() <= 1 {
                &target
            } else {
                &flipped_target
            };
            for b in out.branches.iter().filter(|b| b.probability > 1e-9) {
                let s = Syndrome::from_outcomes(&b.outcomes).unwrap();
                assert_eq!(s, Syndrome::of_data(mask));
                let fixed = b
                    .state
                    .apply_unitary(&correction_for(s), &[0, 1, 2])
                    .unwrap();
                let f = fixed.fidelity_to_pure(want).unwrap();
                assert!((f - 1.0).abs() < 1e-10, "{c} mask {mask:03b}: {f}");
            }
        }
    }
}

#[test]
fn syndrome_table_lists_every_syndrome() {
    let t = syndrome_table();
    let lines: Vec<&str> = t.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(
        lines[0],
        "syndrome\tP_t\tP_b\tcorrection\tencoding_correction"
    );
    assert_eq!(lines[1], "ee\t0\t0\tX_m\tX_t X_b");
    assert_eq!(lines[2], "eo\t0\t1\tX_m X_b\tX_t");
    assert_eq!(lines[3], "oe\t1\t0\tX_t X_m\tX_b");
    assert_eq!(lines[4], "oo\t1\t1\tI\tI");
    for s in Syndrome::ALL {
        assert_eq!(Syndrome::parse(&s.to_string()), Some(s));
    }
}

#[test]
fn measurement_encoding_prepares_logical_states() {
    for c in Cardinal::ALL {
        let branches = encode_by_measurement::<f64>(c).unwrap();
        assert_eq!(branches.len(), 4);
        for b in &branches {
            assert!((b.probability - 0.25).abs() < 1e-12);
            let s = Syndrome::from_outcomes(&b.outcomes).unwrap();
            let fixed = b
                .state
                .apply_unitary(&qedsim::repcode::encoding_correction_for(s), &[0, 1, 2])
                .unwrap();
            let f = fixed.fidelity_to_pure(&logical_state(c)).unwrap();
            assert!((f - 1.0).abs() < 1e-12, "{c} {s}: {f}");
        }
    }
}

#[test]
fn decoder_is_exhaustively_a_majority_vote() {
    for conv in CONVENTIONS {
        let dec = decoder::<f64>(conv);
        for c in Cardinal::ALL {
            let logical = logical_state_with::<f64>(c, conv).density();
            for mask in 0..8usize {
                let flips = [mask & 4 != 0, mask & 2 != 0, mask & 1 != 0];
                let rho = logical
                    .apply_unitary(&OperatorMatrix::x_mask(&flips), &[0, 1, 2])
                    .unwrap();
                let mut want = c.state::<f64>();
                if majority_decode(mask) {
                    want = OperatorMatrix::pauli_x()
                        .apply_to_state(&want, &[0])
                        .unwrap();
                }
                let f = dec.decode(&rho).unwrap().fidelity_to_pure(&want).unwrap();
                assert!((f - 1.0).abs() < 1e-12, "{conv:?} {c} {mask:03b}");
            }
        }
    }
}

#[test]
fn decoder_unitary_matches_gate_oracle() {
    let perm = |f: &dyn Fn(usize) -> usize| {
        let mut m = M::zeros(8);
        for i in 0..8 {
            m.set(f(i), i, c(1.0, 0.0));
        }
        m
    };
    let cnot_mt = perm(&|i| if i & 2 != 0 { i ^ 4 } else { i });
    let cnot_mb = perm(&|i| if i & 2 != 0 { i ^ 1 } else { i });
    let toffoli = perm(&|i| if i & 5 == 5 { i ^ 2 } else { i });
    let u = toffoli.matmul(&cnot_mb).matmul(&cnot_mt);
    let inverted = on(&x2(), 1, 3).matmul(&u);
    let d = decoder::<f64>(ConventionFlag::INVERTED);
    assert!(d.unitary().matrix().max_abs_diff(&inverted) < 1e-15);
    let d = decoder::<f64>(ConventionFlag::TEXTBOOK);
    assert!(d.unitary().matrix().max_abs_diff(&u) < 1e-15);
}

#[test]
fn conventions_map_zero_to_opposite_corners() {
    let zero = logical_state_with::<f64>(Cardinal::Zero, ConventionFlag::INVERTED);
    assert!((zero.amplitudes()[7].re - 1.0).abs() < 1e-15);
    let zero = logical_state_with::<f64>(Cardinal::Zero, ConventionFlag::TEXTBOOK);
    assert!((zero.amplitudes()[0].re - 1.0).abs() < 1e-15);
    assert_eq!(ConventionFlag::default(), ConventionFlag::INVERTED);
}

#[test]
fn superposition_branches_are_ghz_states() {
    for k in 0..13 {
        let phi = k as f64 * std::f64::consts::TAU / 12.0;
        let out = measure_parities(
            &superposition_input(phi).density(),
            StabilizerSet::Both,
            &NoiseConfig::ideal(),
        )
        .unwrap();
        for b in &out.branches {
            assert!((b.probability - 0.25).abs() < 1e-12);
            let s = Syndrome::from_outcomes(&b.outcomes).unwrap();
            let fixed = b
                .state
                .apply_unitary(&qedsim::repcode::encoding_correction_for(s), &[0, 1, 2])
                .unwrap();
            let f = fixed.fidelity_to_pure(&ghz(phi)).unwrap();
            assert!((f - 1.0).abs() < 1e-12, "phi {phi} {s}: {f}");
        }
    }
}

proptest! {
    #[test]
    fn round_matches_projector_oracle(rho in density(3)) {
        let out = measure_parities(&rho, StabilizerSet::Both, &NoiseConfig::ideal()).unwrap();
        let expected = oracle_branches(rho.matrix());
        prop_assert_eq!(out.branches.len(), 4);
        for ((b, m), s) in out.branches.iter().zip(&expected).zip(Syndrome::ALL) {
            prop_assert_eq!(Syndrome::from_outcomes(&b.outcomes), Some(s));
            prop_assert!((b.probability - m.trace().re).abs() < 1e-10);
            prop_assert!(b.weighted().max_abs_diff(m) < 1e-10);
        }
    }

    #[test]
    fn rounds_are_non_demolition(rho in density(3)) {
        let ideal = NoiseConfig::ideal();
        let first = measure_parities(&rho, StabilizerSet::Both, &ideal).unwrap();
        for b in first.branches.iter().filter(|b| b.probability > 1e-6) {
            let s = Syndrome::from_outcomes(&b.outcomes).unwrap();
            let again = measure_parities(&b.state, StabilizerSet::Both, &ideal).unwrap();
            let flipped = Syndrome::from_index(s.index() ^ 3);
            for b2 in &again.branches {
                let s2 = Syndrome::from_outcomes(&b2.outcomes).unwrap();
                let p = if s2 == flipped { 1.0 } else { 0.0 };
                prop_assert!((b2.probability - p).abs() < 1e-9);
            }
            let back = again.branch(&first.branches[flipped.index()].outcomes).unwrap();
            let refocused = b.state.apply_unitary(&OperatorMatrix::pauli_string("IXI").unwrap(), &[0, 1, 2]).unwrap();
            prop_assert!(back.state.max_abs_diff(&refocused).unwrap() < 1e-9);
        }
    }

    #[test]
    fn encode_then_decode_is_identity(psi in pure_state(1), inverted in any::<bool>()) {
        let conv = if inverted { ConventionFlag::INVERTED } else { ConventionFlag::TEXTBOOK };
        let encoded = encode_state(&psi, conv).unwrap();
        let via_gates = run_exact(&encode_by_gates(conv), &encode_input_state(&psi).density(), &NoiseConfig::ideal())
            .unwrap();
        prop_assert!((via_gates[0].state.fidelity_to_pure(&encoded).unwrap() - 1.0).abs() < 1e-10);
        let out = decoder::<f64>(conv).decode(&encoded.density()).unwrap();
        prop_assert!((out.fidelity_to_pure(&psi).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn logical_states_are_stabilized(psi in pure_state(1)) {
        let encoded = encode_state(&psi, ConventionFlag::default()).unwrap().density();
        for s in ["ZZI", "IZZ"] {
            let e = encoded.expectation(&OperatorMatrix::pauli_string(s).unwrap()).unwrap();
            prop_assert!((e - 1.0).abs() < 1e-12);
        }
    }
}
