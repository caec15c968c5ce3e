use alloc::format;
use alloc::vec::Vec;

use super::{
    basis_vector, record, require_dim, require_len, settle_probability, Alphabet, Dfa, ModelError,
    Violation, DEFAULT_ORACLE_CAP,
};
use crate::matrix::{check_projective_measurement, check_unitary, CMatrix, Complex, Tolerance};
use crate::sum::CompensatedSum;

/// One-way QFA with control language.
///
/// On each symbol `a` the quantum state is hit by `U_a` and then measured with the
/// projective measurement `{P_c}`; the word of outcomes must be accepted by the control
/// DFA, whose alphabet is the outcome set.
#[derive(Clone, Debug, PartialEq)]
pub struct ClQfa {
    alphabet: Alphabet,
    q_init: usize,
    unitaries: Vec<CMatrix>,
    measurement: Vec<CMatrix>,
    control: Dfa,
}

impl ClQfa {
    /// `unitaries[a]` per input symbol, `measurement[c]` per outcome of
    /// `control.alphabet()`.
    pub fn new(
        alphabet: Alphabet,
        q_init: usize,
        unitaries: Vec<CMatrix>,
        measurement: Vec<CMatrix>,
        control: Dfa,
    ) -> Result<Self, ModelError> {
        require_len(&unitaries, alphabet.len(), || "unitaries".into())?;
        require_len(&measurement, control.alphabet().len(), || {
            "measurement (one projector per control-alphabet outcome)".into()
        })?;
        let q = unitaries[0].rows();
        for (a, u) in unitaries.iter().enumerate() {
            require_dim(u, q, || format!("unitary[{}]", alphabet.symbol(a)))?;
        }
        for (c, p) in measurement.iter().enumerate() {
            require_dim(p, q, || format!("projector[{}]", control.alphabet().symbol(c)))?;
        }
        if q_init >= q {
            return Err(ModelError::index("q_init", q_init, q));
        }
        Ok(ClQfa {
            alphabet,
            q_init,
            unitaries,
            measurement,
            control,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The outcome alphabet, shared with the control DFA.
    pub fn outcomes(&self) -> &Alphabet {
        self.control.alphabet()
    }

    pub fn q_dim(&self) -> usize {
        self.unitaries[0].rows()
    }

    pub fn q_init(&self) -> usize {
        self.q_init
    }

    pub fn unitary(&self, symbol: usize) -> &CMatrix {
        &self.unitaries[symbol]
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    pub fn projector(&self, outcome: usize) -> &CMatrix {
        &self.measurement[outcome]
    }

    pub fn measurement(&self) -> &[CMatrix] {
        &self.measurement
    }

    pub fn control(&self) -> &Dfa {
        &self.control
    }

    pub fn validate(&self) -> Vec<Violation> {
        let tol = Tolerance::VALIDATION;
        let mut out = Vec::new();
        for (a, u) in self.unitaries.iter().enumerate() {
            record(
                &mut out,
                "check_unitary",
                || format!("unitary[{}]", self.alphabet.symbol(a)),
                check_unitary(u, tol),
            );
        }
        record(
            &mut out,
            "check_projective_measurement",
            || "measurement".into(),
            check_projective_measurement(&self.measurement, tol),
        );
        out
    }

    /// Acceptance probability by explicit enumeration of outcome words, with the
    /// default cap of [`DEFAULT_ORACLE_CAP`] symbols.
    pub fn accept_prob_oracle(&self, word: &[usize]) -> Result<f64, ModelError> {
        self.accept_prob_oracle_capped(word, DEFAULT_ORACLE_CAP)
    }

    /// Sums `|| P_{y_n} U_{x_n} ... P_{y_1} U_{x_1} |q_init> ||^2` over every outcome word
    /// `y` accepted by the control DFA. Cost is `|C|^|x|`.
    pub fn accept_prob_oracle_capped(&self, word: &[usize], cap: usize) -> Result<f64, ModelError> {
        let total = self.enumerate(word, cap, true)?;
        settle_probability(total)
    }

    /// Sum of all branch weights, ignoring the control language. Equals 1 for a valid model.
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
        // steps[a][c] = P_c U_a
        let steps: Vec<Vec<CMatrix>> = self
            .unitaries
            .iter()
            .map(|u| self.measurement.iter().map(|p| p * u).collect())
            .collect();
        let mut acc = CompensatedSum::new();
        let psi = basis_vector(self.q_dim(), self.q_init);
        self.branch(&steps, word, psi, self.control.initial(), filter, &mut acc);
        Ok(acc.total())
    }

    fn branch(
        &self,
        steps: &[Vec<CMatrix>],
        rest: &[usize],
        psi: Vec<Complex>,
        control_state: usize,
        filter: bool,
        acc: &mut CompensatedSum,
    ) {
        let Some((&a, tail)) = rest.split_first() else {
            if !filter || self.control.is_accepting(control_state) {
                acc.add(psi.iter().map(|z| z.norm_sqr()).sum());
            }
            return;
        };
        for (c, op) in steps[a].iter().enumerate() {
            let next = op.apply(&psi);
            self.branch(steps, tail, next, self.control.next(control_state, c), filter, acc);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn hadamard() -> CMatrix {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_real(&[&[h, h], &[h, -h]]).unwrap()
    }

    /// Control DFA over {0, 1} accepting exactly the word "0".
    fn zero_acceptor() -> Dfa {
        Dfa::new(
            Alphabet::new(["0", "1"]).unwrap(),
            0,
            &[1],
            vec![vec![1, 2], vec![2, 2], vec![2, 2]],
        )
        .unwrap()
    }

    fn trivial(accept_all: bool) -> ClQfa {
        let control = Dfa::new(
            Alphabet::new(["c0"]).unwrap(),
            0,
            if accept_all { &[0] } else { &[] },
            vec![vec![0]],
        )
        .unwrap();
        ClQfa::new(
            Alphabet::new(["a"]).unwrap(),
            0,
            vec![CMatrix::identity(2)],
            vec![CMatrix::identity(2)],
            control,
        )
        .unwrap()
    }

    #[test]
    fn trivial_models() {
        for len in 0..4 {
            let w = vec![0; len];
            assert_eq!(trivial(true).accept_prob_oracle(&w).unwrap(), 1.0);
            assert_eq!(trivial(false).accept_prob_oracle(&w).unwrap(), 0.0);
        }
    }

    #[test]
    fn hadamard_readout() {
        let m = ClQfa::new(
            Alphabet::new(["a"]).unwrap(),
            0,
            vec![hadamard()],
            vec![CMatrix::ket_bra(2, 0, 0), CMatrix::ket_bra(2, 1, 1)],
            zero_acceptor(),
        )
        .unwrap();
        assert!(m.validate().is_empty());
        assert!((m.accept_prob_oracle(&[0]).unwrap() - 0.5).abs() < 1e-15);
        assert!((m.total_branch_weight(&[0, 0, 0], 10).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn oracle_cap_enforced() {
        let m = trivial(true);
        assert!(matches!(
            m.accept_prob_oracle(&[0; 11]),
            Err(ModelError::OracleCap { len: 11, cap: 10 })
        ));
        assert!(m.accept_prob_oracle_capped(&[0; 11], 11).is_ok());
    }

    #[test]
    fn non_unitary_flagged() {
        let m = ClQfa::new(
            Alphabet::new(["a"]).unwrap(),
            0,
            vec![CMatrix::real_diag(&[1.0, 2.0])],
            vec![CMatrix::identity(2)],
            trivial(true).control().clone(),
        )
        .unwrap();
        let v = m.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].check, "check_unitary");
        assert_eq!(v[0].residual, 3.0);
    }

    #[test]
    fn measurement_must_match_control_alphabet() {
        let r = ClQfa::new(
            Alphabet::new(["a"]).unwrap(),
            0,
            vec![hadamard()],
            vec![CMatrix::identity(2)],
            zero_acceptor(),
        );
        assert!(matches!(r, Err(ModelError::Shape { .. })));
    }
}
