mod common;

use common::{all_words, cl_qfa, dfa, hadamard, qcfa, qfac};
use proptest::prelude::*;
use sqfa_core::conversion::{cl_to_mo, dfa_to_mo, qcfa_to_mo, qfac_to_mo};
use sqfa_core::matrix::{check_density, check_kraus_complete, tensor_product};
use sqfa_core::{Alphabet, CMatrix, ClQfa, Dfa, ModelKind, MoGqfa, QcfaAut, QfacAut, Tolerance};

fn tight() -> Tolerance {
    Tolerance::new(1e-10).unwrap()
}

fn all_channels_complete(mo: &MoGqfa) -> bool {
    mo.channels()
        .iter()
        .all(|c| check_kraus_complete(c, tight()).unwrap().passed)
}

fn zero_acceptor() -> Dfa {
    Dfa::new(
        Alphabet::new(["0", "1"]).unwrap(),
        0,
        &[1],
        vec![vec![1, 2], vec![2, 2], vec![2, 2]],
    )
    .unwrap()
}

#[test]
fn cl_dimension_and_element_count() {
    let m = ClQfa::new(
        Alphabet::new(["a", "b"]).unwrap(),
        0,
        vec![hadamard(), CMatrix::identity(2)],
        vec![CMatrix::ket_bra(2, 0, 0), CMatrix::ket_bra(2, 1, 1)],
        zero_acceptor(),
    )
    .unwrap();
    let (mo, rep) = cl_to_mo(&m).unwrap();
    assert_eq!(rep.source_kind, ModelKind::Cl1qfa);
    assert_eq!((rep.q, rep.k, rep.out_dim), (2, 3, 6));
    assert_eq!(rep.kraus_counts, vec![6, 6]);
    assert_eq!(mo.dim(), 6);
    assert!(mo.validate().is_empty());
    assert!(all_channels_complete(&mo));
    assert!((mo.accept_prob(&[0]).unwrap() - 0.5).abs() < 1e-15);
    assert!((mo.accept_prob(&[0]).unwrap() - m.accept_prob_oracle(&[0]).unwrap()).abs() < 1e-15);
}

#[test]
fn cl_trivial_accepts_everything() {
    let control = Dfa::new(Alphabet::new(["c0"]).unwrap(), 0, &[0], vec![vec![0]]).unwrap();
    let m = ClQfa::new(
        Alphabet::new(["a"]).unwrap(),
        0,
        vec![CMatrix::identity(2)],
        vec![CMatrix::identity(2)],
        control,
    )
    .unwrap();
    let (mo, _) = cl_to_mo(&m).unwrap();
    for w in all_words(1, 5) {
        assert!((mo.accept_prob(&w).unwrap() - 1.0).abs() < 1e-15);
    }
}

#[test]
fn qfac_dimension_law() {
    let k = 4;
    let m = QfacAut::new(
        Alphabet::new(["a"]).unwrap(),
        0,
        0,
        vec![vec![hadamard()]; k],
        vec![vec![1], vec![2], vec![3], vec![0]],
        vec![CMatrix::ket_bra(2, 0, 0); k],
    )
    .unwrap();
    let (mo, rep) = qfac_to_mo(&m).unwrap();
    assert_eq!(rep.out_dim, 8);
    assert_eq!(rep.kraus_counts, vec![4]);
    assert!(all_channels_complete(&mo));
}

#[test]
fn qfac_classical_parity() {
    let one = CMatrix::identity(1);
    let m = QfacAut::new(
        Alphabet::new(["a"]).unwrap(),
        0,
        0,
        vec![vec![one.clone()], vec![one.clone()]],
        vec![vec![1], vec![0]],
        vec![one, CMatrix::zeros(1, 1)],
    )
    .unwrap();
    let (mo, _) = qfac_to_mo(&m).unwrap();
    assert_eq!(mo.accept_prob(&[0, 0]).unwrap(), 1.0);
    assert_eq!(mo.accept_prob(&[0]).unwrap(), 0.0);
}

#[test]
fn qcfa_dimension_law_and_trivial_case() {
    let id3 = CMatrix::identity(3);
    let half = id3.scale(sqfa_core::Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    let m = QcfaAut::new(
        Alphabet::new(["a"]).unwrap(),
        Alphabet::new(["x", "y"]).unwrap(),
        0,
        0,
        vec![vec![vec![half.clone(), half.clone()]]; 2],
        vec![vec![vec![0, 1]], vec![vec![1, 0]]],
        &[0, 1],
    )
    .unwrap();
    let (mo, rep) = qcfa_to_mo(&m).unwrap();
    assert_eq!(rep.out_dim, 6);
    assert_eq!(rep.kraus_counts, vec![4]);
    assert!(all_channels_complete(&mo));
    for w in all_words(1, 4) {
        assert!((mo.accept_prob(&w).unwrap() - 1.0).abs() < 1e-12);
    }
}

fn assert_equivalent(direct: impl Fn(&[usize]) -> f64, mo: &MoGqfa) -> Result<(), TestCaseError> {
    for w in all_words(2, 5) {
        let converted = mo.accept_prob(&w).unwrap();
        prop_assert!((direct(&w) - converted).abs() <= 1e-9, "word {:?}", w);
    }
    Ok(())
}

/// `(I_Q (x) |s><s|) rho (I_Q (x) |t><t|) = 0` for `s != t`.
fn classical_factor_is_diagonal(rho: &CMatrix, q: usize, k: usize) -> bool {
    (0..k).all(|s| {
        (0..k).filter(|&t| t != s).all(|t| {
            let ps = tensor_product(&CMatrix::identity(q), &CMatrix::ket_bra(k, s, s));
            let pt = tensor_product(&CMatrix::identity(q), &CMatrix::ket_bra(k, t, t));
            (&(&ps * rho) * &pt).max_abs() <= 1e-10
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cl_conversion_is_equivalent(m in (1usize..4, 1usize..4).prop_flat_map(|(q, k)| {
        (1..=q).prop_flat_map(move |c| cl_qfa(q, c, k))
    })) {
        let (mo, rep) = cl_to_mo(&m).unwrap();
        prop_assert_eq!(rep.out_dim, m.q_dim() * m.control().num_states());
        prop_assert!(all_channels_complete(&mo));
        prop_assert!(mo.validate().is_empty());
        assert_equivalent(|w| m.accept_prob_oracle(w).unwrap(), &mo)?;
        for w in all_words(2, 3) {
            let rho = mo.state_after(&w).unwrap();
            prop_assert!(classical_factor_is_diagonal(&rho, rep.q, rep.k));
            prop_assert!(check_density(&rho, Tolerance::VALIDATION).unwrap().passed);
        }
    }

    #[test]
    fn qfac_conversion_is_equivalent(m in (1usize..4, 1usize..4).prop_flat_map(|(q, k)| qfac(q, k))) {
        let (mo, rep) = qfac_to_mo(&m).unwrap();
        prop_assert_eq!(rep.out_dim, m.q_dim() * m.num_c_states());
        prop_assert!(rep.kraus_counts.iter().all(|&c| c == m.num_c_states()));
        prop_assert!(all_channels_complete(&mo));
        assert_equivalent(|w| m.accept_prob(w).unwrap(), &mo)?;
    }

    #[test]
    fn qcfa_conversion_is_equivalent(m in (1usize..4, 1usize..4).prop_flat_map(|(q, k)| {
        (1..=q).prop_flat_map(move |c| qcfa(q, c, k))
    })) {
        let (mo, rep) = qcfa_to_mo(&m).unwrap();
        prop_assert_eq!(rep.out_dim, m.q_dim() * m.num_c_states());
        prop_assert!(all_channels_complete(&mo));
        assert_equivalent(|w| m.accept_prob_oracle(w).unwrap(), &mo)?;
    }

    #[test]
    fn dfa_embedding_is_deterministic(
        d in (1usize..6).prop_flat_map(|n| dfa(Alphabet::new(["a", "b"]).unwrap(), n))
    ) {
        let (mo, _) = dfa_to_mo(&d).unwrap();
        prop_assert!(all_channels_complete(&mo));
        for w in all_words(2, 5) {
            let p = mo.accept_prob(&w).unwrap();
            let expected = if d.accepts(&w).unwrap() { 1.0 } else { 0.0 };
            prop_assert!((p - expected).abs() <= 1e-12);
        }
    }
}
