use advknow_core::bits::bits;
use advknow_core::circuits::{Algorithm, TimeLabel};
use advknow_core::engine::verify::{verify_grover_states, Fault, VerifyConfig};
use advknow_core::engine::{
    build_two_reps, partial_measurement_pair, retard_projection, Projection, Rep,
};
use advknow_core::problem::{make_deutsch_jozsa, make_grover, make_simon};
use advknow_core::OracleProblem;
use proptest::prelude::*;

const TOL: f64 = 1e-10;

fn all_problems() -> Vec<OracleProblem> {
    vec![
        make_grover(2).unwrap(),
        make_deutsch_jozsa(2).unwrap(),
        make_simon(2).unwrap(),
    ]
}

#[test]
fn postponement_holds_for_every_setting_and_outcome() {
    for p in all_problems() {
        let alg = Algorithm::for_problem(&p).unwrap();
        for b_c in p.settings() {
            for outcome in p.settings() {
                let run = build_two_reps(&p, alg, b_c, outcome).unwrap();
                let f = run.postponement_fidelity().unwrap();
                assert!((f - 1.0).abs() < TOL, "{} {b_c} {outcome}: {f}", p.name());
                assert!((run.final_agreement().unwrap() - 1.0).abs() < TOL);
            }
        }
    }
}

#[test]
fn alice_b_marginal_is_constant_along_the_trace() {
    for p in [make_grover(2).unwrap(), make_deutsch_jozsa(3).unwrap(), make_simon(3).unwrap()] {
        let alg = Algorithm::for_problem(&p).unwrap();
        let b_c = p.settings()[p.settings().len() / 2];
        let run = build_two_reps(&p, alg, &b_c, &b_c).unwrap();
        let basis = p.settings();
        let first = run.alice.at(TimeLabel::T0Plus).unwrap().reduced_density_b(basis).unwrap();
        let t2 = run.alice.index_of(TimeLabel::T2).unwrap();
        for (time, state) in &run.alice.states[1..=t2] {
            let rho = state.reduced_density_b(basis).unwrap();
            assert!(rho.max_abs_diff(&first) < TOL, "{} at {time}", p.name());
        }
    }
}

#[test]
fn grover_representations_coincide_when_bob_reads_b_c() {
    let p = make_grover(2).unwrap();
    for b_c in p.settings() {
        let run = build_two_reps(&p, Algorithm::Grover { iterations: 1 }, b_c, b_c).unwrap();
        assert_eq!(run.final_a, *b_c);
        let bob = run.bob.at(TimeLabel::T2Plus).unwrap();
        assert_eq!(bob.settings(), vec![*b_c]);
        assert!((bob.fidelity(run.alice.at(TimeLabel::T2Plus).unwrap()) - 1.0).abs() < TOL);
    }
}

#[test]
fn advancing_then_retarding_is_the_identity() {
    let p = make_deutsch_jozsa(2).unwrap();
    let run = build_two_reps(&p, Algorithm::DeutschJozsa, &bits("0011"), &bits("0101")).unwrap();
    let proj = Projection::a_bits(&[0, 1], &run.final_a, TimeLabel::T2);
    for rep in [Rep::Bob, Rep::Alice] {
        for back in 0..=run.alice_steps() {
            let pair = run.advance(rep, &proj, back).unwrap();
            let forth = retard_projection(run.trace(rep), &run.steps, &pair, back).unwrap();
            let (_, direct) = proj.apply(run.trace(rep).at(TimeLabel::T2).unwrap()).unwrap();
            assert_eq!(forth.time, TimeLabel::T2);
            assert!((forth.after.fidelity(&direct) - 1.0).abs() < TOL);
            assert!((forth.before.fidelity(run.trace(rep).at(TimeLabel::T2).unwrap()) - 1.0).abs() < TOL);
        }
    }
}

#[test]
fn advanced_projection_on_alice_gives_the_two_settings() {
    let p = make_grover(2).unwrap();
    let pair = partial_measurement_pair(
        &p,
        Algorithm::Grover { iterations: 1 },
        &bits("01"),
        &bits("10"),
        &[0],
        &[1],
    )
    .unwrap();
    assert_eq!(pair.alice_advanced.time, TimeLabel::T1);
    assert_eq!(pair.alice_advanced.after.settings(), vec![bits("01"), bits("11")]);
    // Bob reads cell 0 of his outcome before relabelling.
    assert_eq!(pair.bob_partial_input.settings(), vec![bits("10"), bits("11")]);
    assert!((pair.bob_fidelity - 1.0).abs() < TOL);
    assert!((pair.alice_fidelity - 1.0).abs() < TOL);
    // Bob's advanced pair reaches back to the input and selects the same half.
    assert_eq!(pair.bob_advanced.time, TimeLabel::T0Plus);
    let w: f64 = pair.alice_advanced.after.branches().iter().map(|b| b.weight).sum();
    assert!((w - 1.0).abs() < TOL);
}

#[test]
fn verification_passes_both_splits_and_catches_faults() {
    for config in [VerifyConfig::default(), VerifyConfig::mirrored()] {
        let report = verify_grover_states(&config).unwrap();
        assert!(report.passed(), "{:?}", report.failures());
        assert_eq!(report.checks.len(), 9);
    }
    assert_eq!(
        verify_grover_states(&VerifyConfig::default())
            .unwrap()
            .check("adv")
            .unwrap()
            .found,
        vec![bits("01"), bits("11")]
    );
    for fault in [Fault::IdentityDiffusion, Fault::MissingHadamard] {
        let config = VerifyConfig {
            fault: Some(fault),
            ..VerifyConfig::default()
        };
        let report = verify_grover_states(&config).unwrap();
        assert!(!report.passed(), "{fault:?} went unnoticed");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn simon_postponement(b in 0usize..6, o in 0usize..6) {
        let p = make_simon(2).unwrap();
        let run = build_two_reps(&p, Algorithm::SimonQuantum, &p.settings()[b], &p.settings()[o]).unwrap();
        prop_assert!((run.postponement_fidelity().unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn grover_n3_partial_pairs_agree(b in 0usize..8, cells in proptest::collection::btree_set(0usize..3, 1..3)) {
        let p = make_grover(3).unwrap();
        let alg = Algorithm::Grover { iterations: 2 };
        let b_c = p.settings()[b];
        let cells: Vec<usize> = cells.into_iter().collect();
        let rest: Vec<usize> = (0..3).filter(|c| !cells.contains(c)).collect();
        let pair = partial_measurement_pair(&p, alg, &b_c, &b_c, &cells, &rest).unwrap();
        // Both halves together recover the unsplit run's final state.
        prop_assert!((pair.bob_fidelity - pair.alice_fidelity).abs() < 1e-9);
    }
}
