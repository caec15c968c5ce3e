use alloc::format;
use alloc::vec::Vec;

use super::{require_len, Alphabet, ModelError};

/// Deterministic finite automaton with a total transition function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    accepting: Vec<bool>,
    /// `trans[s * |alphabet| + a]`
    trans: Vec<usize>,
}

/// Result of running a DFA on a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DfaRun {
    pub final_state: usize,
    pub accepted: bool,
}

impl Dfa {
    /// `transitions[s][a]` is the successor of state `s` on symbol `a`; the number of
    /// states is `transitions.len()`.
    pub fn new(
        alphabet: Alphabet,
        initial: usize,
        accepting: &[usize],
        transitions: Vec<Vec<usize>>,
    ) -> Result<Self, ModelError> {
        let n = transitions.len();
        if n == 0 {
            return Err(ModelError::shape("dfa states", "at least 1", 0));
        }
        if initial >= n {
            return Err(ModelError::index("dfa initial state", initial, n));
        }
        let mut acc = alloc::vec![false; n];
        for &s in accepting {
            if s >= n {
                return Err(ModelError::index("dfa accepting state", s, n));
            }
            acc[s] = true;
        }
        let k = alphabet.len();
        let mut trans = Vec::with_capacity(n * k);
        for (s, row) in transitions.into_iter().enumerate() {
            require_len(&row, k, || format!("dfa transitions of state {s}"))?;
            for (a, &t) in row.iter().enumerate() {
                if t >= n {
                    return Err(ModelError::index(format!("dfa transition ({s}, {a})"), t, n));
                }
            }
            trans.extend(row);
        }
        Ok(Dfa {
            alphabet,
            initial,
            accepting: acc,
            trans,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
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

    pub fn next(&self, state: usize, symbol: usize) -> usize {
        self.trans[state * self.alphabet.len() + symbol]
    }

    /// Transition table as nested rows, `rows[s][a]`.
    pub fn transition_rows(&self) -> Vec<Vec<usize>> {
        self.trans
            .chunks(self.alphabet.len())
            .map(<[usize]>::to_vec)
            .collect()
    }

    /// Extended transition function; the empty word leaves the state unchanged.
    pub fn delta_star(&self, state: usize, word: &[usize]) -> usize {
        word.iter().fold(state, |s, &a| self.next(s, a))
    }

    pub fn run(&self, word: &[usize]) -> Result<DfaRun, ModelError> {
        self.alphabet.check_word(word)?;
        let final_state = self.delta_star(self.initial, word);
        Ok(DfaRun {
            final_state,
            accepted: self.accepting[final_state],
        })
    }

    pub fn accepts(&self, word: &[usize]) -> Result<bool, ModelError> {
        Ok(self.run(word)?.accepted)
    }
}
