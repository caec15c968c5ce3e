use alloc::format;
use alloc::vec::Vec;

use super::{
    basis_vector, record, require_dim, require_len, settle_probability, Alphabet, ModelError,
    Violation, DEFAULT_ORACLE_CAP,
};
use crate::matrix::{check_kraus_complete, CMatrix, Complex, Tolerance};
use crate::sum::CompensatedSum;

/// One-way QFA with quantum and classical states.
///
/// In classical state `s` on symbol `a` the quantum register undergoes the general
/// measurement `{M^c_{s,a}}`; outcome `c` moves the classical part to `trans(s, a, c)`.
/// The word is accepted when the final classical state is accepting.
#[derive(Clone, Debug, PartialEq)]
pub struct QcfaAut {
    alphabet: Alphabet,
    outcomes: Alphabet,
    q_init: usize,
    c_init: usize,
    /// `measurements[s][a][c]`
    measurements: Vec<Vec<Vec<CMatrix>>>,
    /// `trans[s][a][c]`
    trans: Vec<Vec<Vec<usize>>>,
    accepting: Vec<bool>,
}

impl QcfaAut {
    pub fn new(
        alphabet: Alphabet,
        outcomes: Alphabet,
        q_init: usize,
        c_init: usize,
        measurements: Vec<Vec<Vec<CMatrix>>>,
        trans: Vec<Vec<Vec<usize>>>,
        accepting: &[usize],
    ) -> Result<Self, ModelError> {
        let k = measurements.len();
        if k == 0 {
            return Err(ModelError::shape("classical states", "at least 1", 0));
        }
        require_len(&trans, k, || "transitions".into())?;
        require_len(&measurements[0], alphabet.len(), || "measurements[0]".into())?;
        require_len(&measurements[0][0], outcomes.len(), || "measurements[0][0]".into())?;
        let q = measurements[0][0][0].rows();
        for s in 0..k {
            require_len(&measurements[s], alphabet.len(), || format!("measurements[{s}]"))?;
            require_len(&trans[s], alphabet.len(), || format!("transitions[{s}]"))?;
            for a in 0..alphabet.len() {
                let sym = alphabet.symbol(a);
                require_len(&measurements[s][a], outcomes.len(), || {
                    format!("measurements[{s}][{sym}]")
                })?;
                require_len(&trans[s][a], outcomes.len(), || format!("transitions[{s}][{sym}]"))?;
                for (c, m) in measurements[s][a].iter().enumerate() {
                    require_dim(m, q, || {
                        format!("measurement[{s}][{sym}][{}]", outcomes.symbol(c))
                    })?;
                    let t = trans[s][a][c];
                    if t >= k {
                        return Err(ModelError::index(format!("transition ({s}, {a}, {c})"), t, k));
                    }
                }
            }
        }
        if q_init >= q {
            return Err(ModelError::index("q_init", q_init, q));
        }
        if c_init >= k {
            return Err(ModelError::index("c_init", c_init, k));
        }
        let mut acc = alloc::vec![false; k];
        for &s in accepting {
            if s >= k {
                return Err(ModelError::index("accepting state", s, k));
            }
            acc[s] = true;
        }
        Ok(QcfaAut {
            alphabet,
            outcomes,
            q_init,
            c_init,
            measurements,
            trans,
            accepting: acc,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn outcomes(&self) -> &Alphabet {
        &self.outcomes
    }

    pub fn q_dim(&self) -> usize {
        self.measurements[0][0][0].rows()
    }

    pub fn num_c_states(&self) -> usize {
        self.measurements.len()
    }

    pub fn q_init(&self) -> usize {
        self.q_init
    }

    pub fn c_init(&self) -> usize {
        self.c_init
    }

    /// Measurement operators `{M^c_{s,a}}` indexed by outcome.
    pub fn measurement(&self, state: usize, symbol: usize) -> &[CMatrix] {
        &self.measurements[state][symbol]
    }

    pub fn measurements(&self) -> &[Vec<Vec<CMatrix>>] {
        &self.measurements
    }

    pub fn next(&self, state: usize, symbol: usize, outcome: usize) -> usize {
        self.trans[state][symbol][outcome]
    }

    pub fn transitions(&self) -> &[Vec<Vec<usize>>] {
        &self.trans
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        self.accepting
            .iter()
            .enumerate()
            .filter_map(|(s, &a)| a.then_some(s))
    }

    pub fn validate(&self) -> Vec<Violation> {
        let tol = Tolerance::VALIDATION;
        let mut out = Vec::new();
        for (s, row) in self.measurements.iter().enumerate() {
            for (a, ops) in row.iter().enumerate() {
                record(
                    &mut out,
                    "measurement completeness",
                    || format!("measurement[{s}][{}]", self.alphabet.symbol(a)),
                    check_kraus_complete(ops, tol),
                );
            }
        }
        out
    }

    pub fn accept_prob_oracle(&self, word: &[usize]) -> Result<f64, ModelError> {
        self.accept_prob_oracle_capped(word, DEFAULT_ORACLE_CAP)
    }

    /// Sums `|| M^{c_n}_{s_n,x_n} ... M^{c_1}_{s_1,x_1} |q_init> ||^2` over all outcome
    /// words whose classical trajectory ends in an accepting state. Cost is `|C|^|x|`.
    pub fn accept_prob_oracle_capped(&self, word: &[usize], cap: usize) -> Result<f64, ModelError> {
        settle_probability(self.enumerate(word, cap, true)?)
    }

    /// Sum of all branch weights regardless of acceptance; 1 for a valid model.
    pub fn total_branch_weight(&self, word: &[usize], cap: usize) -> Result<f64, ModelError> {
        self.enumerate(word, cap, false)
    }

    fn enumerate(&self, word: &[usize], cap: usize, filter: bool) -> Result<f64, ModelError> {
        self.alphabet.check_word(word)?;
        if word.len() > cap {
            return Err(ModelError::OracleCap {
                len: word.len(),
                cap,
            });
        }
        let mut acc = CompensatedSum::new();
        let psi = basis_vector(self.q_dim(), self.q_init);
        self.branch(word, psi, self.c_init, filter, &mut acc);
        Ok(acc.total())
    }

    fn branch(
        &self,
        rest: &[usize],
        psi: Vec<Complex>,
        s: usize,
        filter: bool,
        acc: &mut CompensatedSum,
    ) {
        let Some((&a, tail)) = rest.split_first() else {
            if !filter || self.accepting[s] {
                acc.add(psi.iter().map(|z| z.norm_sqr()).sum());
            }
            return;
        };
        for (c, m) in self.measurements[s][a].iter().enumerate() {
            self.branch(tail, m.apply(&psi), self.trans[s][a][c], filter, acc);
        }
    }
}
