use alloc::format;
use alloc::vec::Vec;

use super::{
    basis_vector, record, require_dim, require_len, settle_probability, Alphabet, ModelError,
    Violation,
};
use crate::matrix::{check_unitary, projector_residual, CMatrix, Check, Tolerance};

/// One-way QFA with classical states.
///
/// The current classical state `s` chooses the unitary `U_{s,a}` applied on symbol `a`
/// and then moves to `trans(s, a)`; the last classical state chooses the accepting
/// projector.
#[derive(Clone, Debug, PartialEq)]
pub struct QfacAut {
    alphabet: Alphabet,
    q_init: usize,
    c_init: usize,
    /// `unitaries[s][a]`
    unitaries: Vec<Vec<CMatrix>>,
    /// `trans[s][a]`
    trans: Vec<Vec<usize>>,
    /// `accept_projs[s]`
    accept_projs: Vec<CMatrix>,
}

impl QfacAut {
    pub fn new(
        alphabet: Alphabet,
        q_init: usize,
        c_init: usize,
        unitaries: Vec<Vec<CMatrix>>,
        trans: Vec<Vec<usize>>,
        accept_projs: Vec<CMatrix>,
    ) -> Result<Self, ModelError> {
        let k = unitaries.len();
        if k == 0 {
            return Err(ModelError::shape("classical states", "at least 1", 0));
        }
        require_len(&trans, k, || "transitions".into())?;
        require_len(&accept_projs, k, || "accept_projectors".into())?;
        require_len(&unitaries[0], alphabet.len(), || "unitaries[0]".into())?;
        let q = unitaries[0][0].rows();
        for s in 0..k {
            require_len(&unitaries[s], alphabet.len(), || format!("unitaries[{s}]"))?;
            require_len(&trans[s], alphabet.len(), || format!("transitions[{s}]"))?;
            for (a, u) in unitaries[s].iter().enumerate() {
                require_dim(u, q, || format!("unitary[{s}][{}]", alphabet.symbol(a)))?;
                if trans[s][a] >= k {
                    return Err(ModelError::index(format!("transition ({s}, {a})"), trans[s][a], k));
                }
            }
            require_dim(&accept_projs[s], q, || format!("accept_projector[{s}]"))?;
        }
        if q_init >= q {
            return Err(ModelError::index("q_init", q_init, q));
        }
        if c_init >= k {
            return Err(ModelError::index("c_init", c_init, k));
        }
        Ok(QfacAut {
            alphabet,
            q_init,
            c_init,
            unitaries,
            trans,
            accept_projs,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn q_dim(&self) -> usize {
        self.unitaries[0][0].rows()
    }

    pub fn num_c_states(&self) -> usize {
        self.unitaries.len()
    }

    pub fn q_init(&self) -> usize {
        self.q_init
    }

    pub fn c_init(&self) -> usize {
        self.c_init
    }

    pub fn unitary(&self, state: usize, symbol: usize) -> &CMatrix {
        &self.unitaries[state][symbol]
    }

    pub fn unitaries(&self) -> &[Vec<CMatrix>] {
        &self.unitaries
    }

    pub fn next(&self, state: usize, symbol: usize) -> usize {
        self.trans[state][symbol]
    }

    pub fn transitions(&self) -> &[Vec<usize>] {
        &self.trans
    }

    pub fn accept_projector(&self, state: usize) -> &CMatrix {
        &self.accept_projs[state]
    }

    pub fn accept_projectors(&self) -> &[CMatrix] {
        &self.accept_projs
    }

    pub fn validate(&self) -> Vec<Violation> {
        let tol = Tolerance::VALIDATION;
        let mut out = Vec::new();
        for (s, row) in self.unitaries.iter().enumerate() {
            for (a, u) in row.iter().enumerate() {
                record(
                    &mut out,
                    "check_unitary",
                    || format!("unitary[{s}][{}]", self.alphabet.symbol(a)),
                    check_unitary(u, tol),
                );
            }
        }
        for (s, p) in self.accept_projs.iter().enumerate() {
            record(
                &mut out,
                "projector",
                || format!("accept_projector[{s}]"),
                projector_residual(p).map(|r| Check {
                    passed: r <= tol.eps(),
                    residual: r,
                }),
            );
        }
        out
    }

    /// `|| P_{s_{n+1},a} U_{s_n,x_n} ... U_{s_1,x_1} |q_init> ||^2` with
    /// `s_{i+1} = trans(s_i, x_i)`.
    pub fn accept_prob(&self, word: &[usize]) -> Result<f64, ModelError> {
        self.alphabet.check_word(word)?;
        let mut psi = basis_vector(self.q_dim(), self.q_init);
        let mut s = self.c_init;
        for &a in word {
            psi = self.unitaries[s][a].apply(&psi);
            s = self.trans[s][a];
        }
        let projected = self.accept_projs[s].apply(&psi);
        settle_probability(projected.iter().map(|z| z.norm_sqr()).sum())
    }
}
