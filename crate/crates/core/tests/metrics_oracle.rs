mod common;

use std::collections::BTreeSet;

use common::*;
use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;
use qedsim::metrics::{
    error_combination_table, f3q, f3q_for_state, f3q_idle_closed, f3q_qed_closed, f_logical,
    f_logical_for_state, mermin, witnesses, Classification, PatternCache,
};
use qedsim::noise::{incoherent_patterns, DataQubit, ErrorMode, ErrorSpec, NoiseConfig, Scenario};
use qedsim::qstate::DensityMatrix;
use qedsim::repcode::{run_pipeline_on, Cardinal, Pipeline};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn ideal() -> NoiseConfig<f64> {
    NoiseConfig::ideal()
}

fn cardinal_amps(card: Cardinal) -> (Complex64, Complex64) {
    let s = 0.5f64.sqrt();
    match card {
        Cardinal::Zero => (c1(1.0), c1(0.0)),
        Cardinal::One => (c1(0.0), c1(1.0)),
        Cardinal::Plus => (c1(s), c1(s)),
        Cardinal::Minus => (c1(s), c1(-s)),
        Cardinal::PlusI => (c1(s), c(0.0, s)),
        Cardinal::MinusI => (c1(s), c(0.0, -s)),
    }
}

fn c1(x: f64) -> Complex64 {
    c(x, 0.0)
}

/// `α|111⟩ + β|000⟩`.
fn logical(a: Complex64, b: Complex64) -> Vec<Complex64> {
    let mut v = vec![c1(0.0); 8];
    v[7] = a;
    v[0] = b;
    v
}

fn x_on(mask: usize) -> M {
    let ops: Vec<M> = (0..3)
        .map(|q| if mask & (4 >> q) != 0 { x2() } else { id2() })
        .collect();
    kron_all(&ops)
}

fn rx2(theta: f64) -> M {
    let (s, co) = (theta / 2.0).sin_cos();
    m2([[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]])
}

fn target_mask(scenario: Scenario) -> usize {
    match scenario {
        Scenario::Single => 4,
        Scenario::All => 7,
    }
}

/// First-round error channel applied to a data state.
fn oracle_errors(rho: &M, mode: ErrorMode, p: f64, targets: usize) -> M {
    match mode {
        ErrorMode::Incoherent => {
            let k = targets.count_ones() as i32;
            let mut acc = M::zeros(8);
            for mask in (0..8).filter(|m| m & !targets == 0) {
                let w =
                    p.powi(mask.count_ones() as i32) * (1.0 - p).powi(k - mask.count_ones() as i32);
                acc.add_assign_scaled(&conj_by(&x_on(mask), rho), w);
            }
            acc
        }
        ErrorMode::Coherent => {
            let theta = 2.0 * p.sqrt().asin();
            let ops: Vec<M> = (0..3)
                .map(|q| {
                    if targets & (4 >> q) != 0 {
                        rx2(theta)
                    } else {
                        id2()
                    }
                })
                .collect();
            conj_by(&kron_all(&ops), rho)
        }
    }
}

/// `(I + s Z_a Z_b)/2` on three qubits.
fn parity_projector(a: usize, b: usize, odd: bool) -> M {
    let zz = on(&z2(), a, 3).matmul(&on(&z2(), b, 3));
    let s = if odd { -0.5 } else { 0.5 };
    let mut p = M::identity(8).scale_real(0.5);
    p.add_assign_scaled(&zz, s);
    p
}

/// Correction per parity pair: the round's `X_m` times the single flip the
/// pair points at.
fn oracle_correction(odd_t: bool, odd_b: bool) -> M {
    let err = match (odd_t, odd_b) {
        (false, false) => 0,
        (false, true) => 1,
        (true, false) => 4,
        (true, true) => 2,
    };
    x_on(2).matmul(&x_on(err))
}

/// Corrected data state after the round, from projectors only.
fn oracle_corrected(rho: &M, pipeline: Pipeline) -> M {
    let xm = x_on(2);
    match pipeline {
        Pipeline::Idle => conj_by(&xm, &conj_by(&xm, rho)),
        Pipeline::Qed => {
            let mut acc = M::zeros(8);
            for odd_t in [false, true] {
                for odd_b in [false, true] {
                    let p = parity_projector(0, 1, odd_t).matmul(&parity_projector(1, 2, odd_b));
                    let after = conj_by(&xm, &conj_by(&p, rho));
                    acc = &acc + &conj_by(&oracle_correction(odd_t, odd_b), &after);
                }
            }
            acc
        }
    }
}

/// Majority-vote decoder unitary (inverted convention), from permutations.
fn oracle_decoder() -> M {
    let perm = |f: &dyn Fn(usize) -> usize| {
        let mut m = M::zeros(8);
        for i in 0..8 {
            m.set(f(i), i, c1(1.0));
        }
        m
    };
    let cnot_mt = perm(&|i| if i & 2 != 0 { i ^ 4 } else { i });
    let cnot_mb = perm(&|i| if i & 2 != 0 { i ^ 1 } else { i });
    let toffoli = perm(&|i| if i & 5 == 5 { i ^ 2 } else { i });
    x_on(2).matmul(&toffoli).matmul(&cnot_mb).matmul(&cnot_mt)
}

fn keep_middle(rho: &M) -> M {
    let mut out = M::zeros(2);
    for a in 0..2 {
        for b in 0..2 {
            let mut v = c1(0.0);
            for t in 0..2 {
                for k in 0..2 {
                    v += rho.get(4 * t + 2 * a + k, 4 * t + 2 * b + k);
                }
            }
            out.set(a, b, v);
        }
    }
    out
}

fn oracle_f3q(
    a: Complex64,
    b: Complex64,
    pipeline: Pipeline,
    mode: ErrorMode,
    p: f64,
    targets: usize,
) -> f64 {
    let l = logical(a, b);
    let rho = oracle_errors(&density_of(&l), mode, p, targets);
    sandwich(&oracle_corrected(&rho, pipeline), &l)
}

fn oracle_f_logical(
    a: Complex64,
    b: Complex64,
    pipeline: Pipeline,
    mode: ErrorMode,
    p: f64,
    p2: f64,
) -> f64 {
    let l = logical(a, b);
    let rho = oracle_corrected(&oracle_errors(&density_of(&l), mode, p, 7), pipeline);
    let second = oracle_errors(&rho, ErrorMode::Incoherent, p2, 7);
    let decoded = keep_middle(&conj_by(&oracle_decoder(), &second));
    sandwich(&decoded, &[a, b])
}

fn grid() -> Vec<f64> {
    (0..=20).map(|k| k as f64 / 20.0).collect()
}

fn cardinal_average(f: impl Fn(Complex64, Complex64) -> f64) -> f64 {
    Cardinal::ALL
        .iter()
        .map(|&c| {
            let (a, b) = cardinal_amps(c);
            f(a, b)
        })
        .sum::<f64>()
        / 6.0
}

#[test]
fn closed_forms_agree_with_projector_oracle() {
    for p in grid() {
        for scenario in [Scenario::Single, Scenario::All] {
            let t = target_mask(scenario);
            let inc = ErrorMode::Incoherent;
            let qed = cardinal_average(|a, b| oracle_f3q(a, b, Pipeline::Qed, inc, p, t));
            let idle = cardinal_average(|a, b| oracle_f3q(a, b, Pipeline::Idle, inc, p, t));
            assert!(
                (qed - f3q_qed_closed(scenario, p)).abs() < TOL,
                "{scenario:?} qed p={p}"
            );
            assert!(
                (idle - f3q_idle_closed(scenario, p)).abs() < TOL,
                "{scenario:?} idle p={p}"
            );
        }
    }
}

#[test]
fn closed_forms_exact_at_rational_points() {
    let r = |n: i64, d: i64| Ratio::new(n, d);
    assert_eq!(f3q_qed_closed(Scenario::All, r(1, 2)), r(2, 3));
    assert_eq!(f3q_qed_closed(Scenario::All, r(1, 1)), r(1, 3));
    assert_eq!(f3q_idle_closed(Scenario::All, r(1, 1)), r(1, 3));
    assert_eq!(f3q_idle_closed(Scenario::All, r(1, 2)), r(1, 6));
    for k in 0..=20 {
        let p = r(k, 20);
        assert_eq!(f3q_qed_closed(Scenario::Single, p), r(1, 1));
        assert_eq!(f3q_idle_closed(Scenario::Single, p), r(1, 1) - p);
        let spelled = r(1, 1) - r(2, 3) * (r(3, 1) * p * p - r(2, 1) * p * p * p);
        assert_eq!(f3q_qed_closed(Scenario::All, p), spelled);
    }
}

#[test]
fn simulated_curves_match_closed_forms() {
    for scenario in [Scenario::Single, Scenario::All] {
        let targets = scenario.targets();
        let qed = PatternCache::new(Pipeline::Qed, targets, &ideal()).unwrap();
        let idle = PatternCache::new(Pipeline::Idle, targets, &ideal()).unwrap();
        for p in grid() {
            let q = qed.f3q(p).unwrap().average();
            let i = idle.f3q(p).unwrap().average();
            assert!(
                (q - f3q_qed_closed(scenario, p)).abs() < TOL,
                "{scenario:?} qed p={p}: {q}"
            );
            assert!(
                (i - f3q_idle_closed(scenario, p)).abs() < TOL,
                "{scenario:?} idle p={p}: {i}"
            );
        }
    }
}

#[test]
fn direct_runs_match_oracle_per_cardinal() {
    for mode in [ErrorMode::Coherent, ErrorMode::Incoherent] {
        for p in [0.0, 0.15, 0.5, 0.85, 1.0] {
            let spec = ErrorSpec::scenario(mode, p, Scenario::All).unwrap();
            for pipeline in Pipeline::ALL {
                let got = f3q(pipeline, &spec, &ideal()).unwrap();
                let fl = f_logical(pipeline, &spec, 0.2, &ideal()).unwrap();
                for c in Cardinal::ALL {
                    let (a, b) = cardinal_amps(c);
                    let want = oracle_f3q(a, b, pipeline, mode, p, 7);
                    assert!(
                        (got.get(c) - want).abs() < TOL,
                        "{mode} {pipeline} {c} p={p}"
                    );
                    let want = oracle_f_logical(a, b, pipeline, mode, p, 0.2);
                    assert!(
                        (fl.get(c) - want).abs() < TOL,
                        "f_logical {mode} {pipeline} {c} p={p}"
                    );
                }
            }
        }
    }
}

#[test]
fn endpoints_agree_between_error_modes() {
    for p in [0.0, 1.0] {
        for scenario in [Scenario::Single, Scenario::All] {
            let coh = ErrorSpec::scenario(ErrorMode::Coherent, p, scenario).unwrap();
            let inc = ErrorSpec::scenario(ErrorMode::Incoherent, p, scenario).unwrap();
            for pipeline in Pipeline::ALL {
                let a = f3q(pipeline, &coh, &ideal()).unwrap();
                let b = f3q(pipeline, &inc, &ideal()).unwrap();
                let la = f_logical(pipeline, &coh, 0.3, &ideal()).unwrap();
                let lb = f_logical(pipeline, &inc, 0.3, &ideal()).unwrap();
                for c in Cardinal::ALL {
                    assert!((a.get(c) - b.get(c)).abs() < TOL);
                    assert!((la.get(c) - lb.get(c)).abs() < TOL);
                }
            }
        }
    }
}

#[test]
fn single_and_double_round_examples() {
    let qed = PatternCache::<f64>::new(Pipeline::Qed, &DataQubit::ALL, &ideal()).unwrap();
    let idle = PatternCache::<f64>::new(Pipeline::Idle, &DataQubit::ALL, &ideal()).unwrap();
    let second = [qedsim::noise::ErrorPattern {
        flips: vec![DataQubit::Middle],
        weight: 1.0,
    }];
    for c in Cardinal::ALL {
        let q = qedsim::metrics::f_logical_of(
            c,
            Pipeline::Qed,
            qed.flips(c, &[DataQubit::Top]).unwrap(),
            &second,
        )
        .unwrap();
        let i = qedsim::metrics::f_logical_of(
            c,
            Pipeline::Idle,
            idle.flips(c, &[DataQubit::Top]).unwrap(),
            &second,
        )
        .unwrap();
        assert!((q - 1.0).abs() < TOL);
        let want = if matches!(c, Cardinal::Plus | Cardinal::Minus) {
            1.0
        } else {
            0.0
        };
        assert!((i - want).abs() < TOL, "{c}: {i}");
    }
    assert!((qed.f_logical(0.0, 0.0).unwrap().average() - 1.0).abs() < TOL);
    assert!((idle.f_logical(0.0, 0.0).unwrap().average() - 1.0).abs() < TOL);
}

/// Logical flip after both rounds, from flip-set sizes alone.
fn flips_logical(pipeline: Pipeline, a: usize, b: usize) -> bool {
    match pipeline {
        Pipeline::Qed => (a.count_ones() >= 2) != (b.count_ones() >= 2),
        Pipeline::Idle => (a ^ b).count_ones() >= 2,
    }
}

#[test]
fn combination_table_matches_set_arithmetic() {
    let rows = error_combination_table(&ideal()).unwrap();
    assert_eq!(rows.len(), 20);
    assert_eq!(rows.iter().map(|r| r.assignments).sum::<usize>(), 64);
    for row in &rows {
        let mut sums = [0.0; 2];
        let mut count = 0;
        for a in 0..8usize {
            for b in 0..8usize {
                if a.count_ones() as usize != row.first || b.count_ones() as usize != row.second {
                    continue;
                }
                let nested = a & b == a || a & b == b;
                let case = ((1..=2).contains(&row.first) && (1..=2).contains(&row.second))
                    .then_some(if nested { 'a' } else { 'b' });
                if case != row.case {
                    continue;
                }
                count += 1;
                for (slot, pipeline) in sums.iter_mut().zip(Pipeline::ALL) {
                    *slot += if flips_logical(pipeline, a, b) {
                        1.0 / 3.0
                    } else {
                        1.0
                    };
                }
            }
        }
        assert_eq!(count, row.assignments, "{}", row.label());
        let (q, i) = (sums[0] / count as f64, sums[1] / count as f64);
        assert!(
            (row.qed - q).abs() < TOL,
            "{} qed {} vs {q}",
            row.label(),
            row.qed
        );
        assert!(
            (row.idle - i).abs() < TOL,
            "{} idle {} vs {i}",
            row.label(),
            row.idle
        );
        assert_eq!(row.class, Classification::of(q, i, TOL), "{}", row.label());
    }
    let of = |class: Classification| -> BTreeSet<String> {
        rows.iter()
            .filter(|r| r.class == class)
            .map(|r| r.label())
            .collect()
    };
    let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    assert_eq!(of(Classification::QedWins), set(&["1/1b", "2/2b"]));
    assert_eq!(of(Classification::IdleWins), set(&["1/2a", "2/1a"]));
    let tie = rows.iter().find(|r| r.label() == "1/1a").unwrap();
    assert_eq!(tie.class, Classification::Tie);
    assert!((tie.qed - 1.0).abs() < TOL && (tie.idle - 1.0).abs() < TOL);
}

fn random_qubit(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let theta = (1.0 - 2.0 * rng.gen::<f64>()).acos();
    let phi = rng.gen::<f64>() * std::f64::consts::TAU;
    vec![
        c1((theta / 2.0).cos()),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ]
}

fn product(parts: &[Vec<Complex64>]) -> DensityMatrix<f64> {
    let m: Vec<M> = parts.iter().map(|v| density_of(v)).collect();
    DensityMatrix::new(kron_all(&m)).unwrap()
}

#[test]
fn mermin_bounded_by_two_on_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let parts: Vec<_> = (0..3).map(|_| random_qubit(&mut rng)).collect();
        let m = mermin(&product(&parts)).unwrap();
        assert!(m.abs() <= 2.0 + TOL, "{m}");
    }
}

#[test]
fn witnesses_nonnegative_on_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..2_000 {
        let parts: Vec<_> = (0..2).map(|_| random_qubit(&mut rng)).collect();
        let w = witnesses(&product(&parts)).unwrap();
        assert!(w.min() >= -TOL, "{w:?}");
    }
}

proptest! {
    #[test]
    fn formulas_match_oracle_for_random_inputs(
        psi in pure_state(1),
        p in 0.0f64..=1.0,
        p2 in 0.0f64..=1.0,
        coherent in any::<bool>(),
    ) {
        let mode = if coherent { ErrorMode::Coherent } else { ErrorMode::Incoherent };
        let spec = ErrorSpec::scenario(mode, p, Scenario::All).unwrap();
        let second = incoherent_patterns(p2, &DataQubit::ALL).unwrap();
        let (a, b) = (psi.amplitudes()[0], psi.amplitudes()[1]);
        for pipeline in Pipeline::ALL {
            let out = run_pipeline_on(&psi, pipeline, &spec, &ideal()).unwrap();
            let f = f3q_for_state(&psi, pipeline, &out).unwrap();
            prop_assert!((f - oracle_f3q(a, b, pipeline, mode, p, 7)).abs() < TOL);
            let fl = f_logical_for_state(&psi, pipeline, &out, &second).unwrap();
            prop_assert!((fl - oracle_f_logical(a, b, pipeline, mode, p, p2)).abs() < TOL);
        }
    }

    #[test]
    fn witness_floor_holds(rho in density(2)) {
        let w = witnesses(&rho).unwrap();
        prop_assert!(w.min() >= -0.5 - TOL);
    }

    #[test]
    fn mermin_bounded_by_four(rho in density(3)) {
        prop_assert!(mermin(&rho).unwrap().abs() <= 4.0 + TOL);
    }

    #[test]
    fn mermin_follows_ghz_phase(phi in 0.0f64..std::f64::consts::TAU) {
        let m = mermin(&qedsim::repcode::ghz(phi).density()).unwrap();
        prop_assert!((m - 4.0 * phi.cos()).abs() < TOL);
    }
}
