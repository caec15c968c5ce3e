use std::path::PathBuf;

use proptest::prelude::*;
use sqfa::format::{emit_automaton, parse_automaton, FormatError};
use sqfa::generate::{random_model, FuzzConfig};
use sqfa_core::{CMatrix, Complex, Model, ModelKind, MoGqfa};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(path).unwrap()
}

/// Every float of every matrix, as raw bits, in document order.
fn bits(model: &Model) -> Vec<u64> {
    fn push(m: &CMatrix, out: &mut Vec<u64>) {
        for z in m.data() {
            out.push(z.re.to_bits());
            out.push(z.im.to_bits());
        }
    }
    let mut out = Vec::new();
    match model {
        Model::Dfa(_) => {}
        Model::Mo(m) => {
            push(m.rho0(), &mut out);
            m.channels().iter().flatten().for_each(|e| push(e, &mut out));
            push(m.p_acc(), &mut out);
        }
        Model::Cl(m) => {
            m.unitaries().iter().for_each(|u| push(u, &mut out));
            m.measurement().iter().for_each(|p| push(p, &mut out));
        }
        Model::Qfac(m) => {
            m.unitaries().iter().flatten().for_each(|u| push(u, &mut out));
            m.accept_projectors().iter().for_each(|p| push(p, &mut out));
        }
        Model::Qcfa(m) => {
            m.measurements().iter().flatten().flatten().for_each(|e| push(e, &mut out));
        }
    }
    out
}

fn assert_round_trip(model: &Model) {
    let text = emit_automaton(model);
    let back = parse_automaton(&text).unwrap();
    assert_eq!(&back, model);
    assert_eq!(bits(&back), bits(model));
    assert_eq!(emit_automaton(&back), text);
}

#[test]
fn fixtures_round_trip() {
    for name in [
        "parity_dfa.json",
        "parity_mo.json",
        "hadamard_cl.json",
        "mod3_dfa.json",
        "random_cl.json",
        "random_qfac.json",
        "random_qcfa.json",
    ] {
        assert_round_trip(&parse_automaton(&fixture(name)).unwrap());
    }
}

#[test]
fn hadamard_fixture_gives_one_half() {
    let Model::Cl(m) = parse_automaton(&fixture("hadamard_cl.json")).unwrap() else {
        panic!("expected a CL-1QFA");
    };
    let a = m.alphabet().parse_word("a").unwrap();
    // |<1|H|0>|^2 with H_10 read back as the nearest double to 1/sqrt(2).
    let h = m.unitary(0).get(1, 0).re;
    assert_eq!(h, std::f64::consts::FRAC_1_SQRT_2);
    assert!((m.accept_prob_oracle(&a).unwrap() - h * h).abs() < 1e-15);
    assert!((h * h - 0.5).abs() < 1e-15);
}

#[test]
fn bad_trace_fixture_names_density_check() {
    match parse_automaton(&fixture("bad_trace.json")) {
        Err(FormatError::Invalid(v)) => {
            assert_eq!(v.len(), 1);
            assert_eq!(v[0].check, "check_density");
            assert!((v[0].residual - 0.4).abs() < 1e-12);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn awkward_floats_survive() {
    let values = [
        -0.0,
        0.1 + 0.2,
        1.0 / 3.0,
        f64::MIN_POSITIVE,
        5e-324,
        1.0 - f64::EPSILON / 2.0,
    ];
    let rho0 = CMatrix::diag(&[Complex::new(1.0, 0.0), Complex::new(0.0, -0.0)]);
    for &x in &values {
        let mut p = CMatrix::zeros(2, 2);
        p.set(0, 1, Complex::new(x, -x));
        let m = Model::Mo(
            MoGqfa::new(
                sqfa_core::Alphabet::new(["a"]).unwrap(),
                rho0.clone(),
                vec![vec![CMatrix::identity(2)]],
                p,
            )
            .unwrap(),
        );
        let back = sqfa::format::parse_unvalidated(&emit_automaton(&m)).unwrap();
        assert_eq!(bits(&back), bits(&m), "value {x:e}");
    }
}

#[test]
fn multi_character_symbols_and_commas() {
    let text = r#"{"model": "dfa", "alphabet": ["x,y", "zz"], "initial": 0,
        "accepting": [], "transitions": [[0, 0]]}"#;
    let m = parse_automaton(text).unwrap();
    assert_round_trip(&m);
    assert_eq!(m.alphabet().symbols()[0], "x,y");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_models_round_trip(seed in any::<u64>(), kind in 0usize..5) {
        let kind = ModelKind::ALL[kind];
        let cfg = FuzzConfig { seed, max_q: 4, max_k: 4, ..FuzzConfig::default() };
        let model = random_model(kind, &cfg, &mut cfg.trial_rng(0));
        prop_assert!(model.validate().is_empty());
        assert_round_trip(&model);
    }
}
