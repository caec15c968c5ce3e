//! Simulation of each hybrid automaton by a measure-once general QFA.
//!
//! The output space is `H_Q (x) H_S`: basis state `(q_i, s_j)` sits at index `i*k + j`
//! where `k` is the number of classical states. The classical factor always stays
//! diagonal, so the running state is `sum_y |phi_y><phi_y| (x) |s_y><s_y|`.

use alloc::vec::Vec;

use crate::matrix::{tensor_product, CMatrix};
use crate::models::{ClQfa, Dfa, Model, ModelError, ModelKind, MoGqfa, QcfaAut, QfacAut};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConversionReport {
    pub source_kind: ModelKind,
    /// Quantum basis-state count.
    pub q: usize,
    /// Classical state count.
    pub k: usize,
    pub out_dim: usize,
    /// Operation-element count per input symbol.
    pub kraus_counts: Vec<usize>,
}

fn report(source_kind: ModelKind, q: usize, k: usize, mo: &MoGqfa) -> ConversionReport {
    ConversionReport {
        source_kind,
        q,
        k,
        out_dim: q * k,
        kraus_counts: mo.channels().iter().map(Vec::len).collect(),
    }
}

/// `|a><a| (x) |b><b|`, i.e. the basis projector on `(a, b)`.
fn product_state(q: usize, qi: usize, k: usize, si: usize) -> CMatrix {
    tensor_product(&CMatrix::ket_bra(q, qi, qi), &CMatrix::ket_bra(k, si, si))
}

/// `sum_{s in accepting} |s><s|` on a `k`-dimensional space.
fn classical_projector(k: usize, accepting: impl Iterator<Item = usize>) -> CMatrix {
    let mut p = CMatrix::zeros(k, k);
    for s in accepting {
        p.set(s, s, crate::matrix::Complex::new(1.0, 0.0));
    }
    p
}

fn finish(source: ModelKind, q: usize, k: usize, mo: Result<MoGqfa, ModelError>) -> Result<(MoGqfa, ConversionReport), ModelError> {
    let mo = mo?;
    let rep = report(source, q, k, &mo);
    Ok((mo, rep))
}

/// CL-1QFA to MO-1gQFA. On symbol `a` the elements are
/// `E_a^{c,s} = P_c U_a (x) |trans(s, c)><s|`, ordered by outcome then control state.
/// The control DFA is used as given; minimise it first for the smallest `k`.
pub fn cl_to_mo(m: &ClQfa) -> Result<(MoGqfa, ConversionReport), ModelError> {
    let q = m.q_dim();
    let control = m.control();
    let k = control.num_states();
    let channels = (0..m.alphabet().len())
        .map(|a| {
            let mut elems = Vec::with_capacity(m.outcomes().len() * k);
            for c in 0..m.outcomes().len() {
                let quantum = m.projector(c) * m.unitary(a);
                for s in 0..k {
                    let classical = CMatrix::ket_bra(k, control.next(s, c), s);
                    elems.push(tensor_product(&quantum, &classical));
                }
            }
            elems
        })
        .collect();
    let rho0 = product_state(q, m.q_init(), k, control.initial());
    let p_acc = tensor_product(
        &CMatrix::identity(q),
        &classical_projector(k, control.accepting_states()),
    );
    finish(
        ModelKind::Cl1qfa,
        q,
        k,
        MoGqfa::new(m.alphabet().clone(), rho0, channels, p_acc),
    )
}

/// 1QFAC to MO-1gQFA. On symbol `a` the elements are `U_{s,a} (x) |trans(s, a)><s|`,
/// one per classical state; the accepting projector is `sum_s P_{s,a} (x) |s><s|`.
pub fn qfac_to_mo(m: &QfacAut) -> Result<(MoGqfa, ConversionReport), ModelError> {
    let q = m.q_dim();
    let k = m.num_c_states();
    let channels = (0..m.alphabet().len())
        .map(|a| {
            (0..k)
                .map(|s| {
                    tensor_product(m.unitary(s, a), &CMatrix::ket_bra(k, m.next(s, a), s))
                })
                .collect()
        })
        .collect();
    let rho0 = product_state(q, m.q_init(), k, m.c_init());
    let mut p_acc = CMatrix::zeros(q * k, q * k);
    for s in 0..k {
        p_acc = &p_acc + &tensor_product(m.accept_projector(s), &CMatrix::ket_bra(k, s, s));
    }
    finish(
        ModelKind::Qfac,
        q,
        k,
        MoGqfa::new(m.alphabet().clone(), rho0, channels, p_acc),
    )
}

/// 1QCFA to MO-1gQFA. On symbol `a` the elements are `M^c_{s,a} (x) |trans(s, a, c)><s|`,
/// ordered by outcome then classical state.
pub fn qcfa_to_mo(m: &QcfaAut) -> Result<(MoGqfa, ConversionReport), ModelError> {
    let q = m.q_dim();
    let k = m.num_c_states();
    let channels = (0..m.alphabet().len())
        .map(|a| {
            let mut elems = Vec::with_capacity(m.outcomes().len() * k);
            for c in 0..m.outcomes().len() {
                for s in 0..k {
                    elems.push(tensor_product(
                        &m.measurement(s, a)[c],
                        &CMatrix::ket_bra(k, m.next(s, a, c), s),
                    ));
                }
            }
            elems
        })
        .collect();
    let rho0 = product_state(q, m.q_init(), k, m.c_init());
    let p_acc = tensor_product(
        &CMatrix::identity(q),
        &classical_projector(k, m.accepting_states()),
    );
    finish(
        ModelKind::Qcfa,
        q,
        k,
        MoGqfa::new(m.alphabet().clone(), rho0, channels, p_acc),
    )
}

/// DFA as a deterministic MO-1gQFA on `|S|` dimensions; every reachable state is a
/// basis projector, so acceptance probabilities are exactly 0 or 1.
pub fn dfa_to_mo(d: &Dfa) -> Result<(MoGqfa, ConversionReport), ModelError> {
    let k = d.num_states();
    let channels = (0..d.alphabet().len())
        .map(|a| (0..k).map(|s| CMatrix::ket_bra(k, d.next(s, a), s)).collect())
        .collect();
    let rho0 = CMatrix::ket_bra(k, d.initial(), d.initial());
    let p_acc = classical_projector(k, d.accepting_states());
    finish(
        ModelKind::Dfa,
        1,
        k,
        MoGqfa::new(d.alphabet().clone(), rho0, channels, p_acc),
    )
}

/// Converts any model into an MO-1gQFA. An MO-1gQFA is returned unchanged with `q = dim`,
/// `k = 1`.
pub fn to_mo(model: &Model) -> Result<(MoGqfa, ConversionReport), ModelError> {
    match model {
        Model::Dfa(d) => dfa_to_mo(d),
        Model::Mo(m) => {
            let rep = report(ModelKind::Mo1gqfa, m.dim(), 1, m);
            Ok((m.clone(), rep))
        }
        Model::Cl(m) => cl_to_mo(m),
        Model::Qfac(m) => qfac_to_mo(m),
        Model::Qcfa(m) => qcfa_to_mo(m),
    }
}
