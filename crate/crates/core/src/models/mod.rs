//! Automaton models and their definition-level acceptance semantics.
//!
//! Symbols, classical states and outcomes are plain indices. Constructors check
//! structure (shapes, ranges, totality); numerical invariants such as unitarity are
//! reported separately by `validate`, so a structurally sound model with a bad unitary
//! can still be loaded and inspected.

mod cl;
mod dfa;
mod mo;
mod qcfa;
mod qfac;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

pub use cl::ClQfa;
pub use dfa::{Dfa, DfaRun};
pub use mo::MoGqfa;
pub use qcfa::QcfaAut;
pub use qfac::QfacAut;

use crate::matrix::{CMatrix, Complex, MatrixError};

/// Longest word the brute-force outcome-enumeration oracles accept by default.
pub const DEFAULT_ORACLE_CAP: usize = 10;

/// Slack within which a probability slightly outside `[0, 1]` is treated as rounding noise.
pub const PROBABILITY_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum ModelError {
    Matrix { context: String, source: MatrixError },
    EmptyAlphabet,
    DuplicateSymbol(String),
    UnknownSymbol(String),
    SymbolOutOfRange { position: usize, symbol: usize, alphabet_len: usize },
    Shape { what: String, expected: String, got: String },
    IndexOutOfRange { what: String, index: usize, bound: usize },
    AlphabetMismatch { what: String },
    OracleCap { len: usize, cap: usize },
    ProbabilityOutOfRange { value: f64 },
    Invariant(Vec<Violation>),
}

impl ModelError {
    pub(crate) fn shape(what: impl Into<String>, expected: impl fmt::Display, got: impl fmt::Display) -> Self {
        ModelError::Shape {
            what: what.into(),
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }

    pub(crate) fn index(what: impl Into<String>, index: usize, bound: usize) -> Self {
        ModelError::IndexOutOfRange {
            what: what.into(),
            index,
            bound,
        }
    }

    /// True for numerical invariant failures, false for structural problems.
    pub fn is_invariant(&self) -> bool {
        matches!(self, ModelError::Invariant(_))
    }
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Matrix { context, source } => write!(f, "{context}: {source}"),
            ModelError::EmptyAlphabet => write!(f, "alphabet is empty"),
            ModelError::DuplicateSymbol(s) => write!(f, "duplicate symbol {s:?}"),
            ModelError::UnknownSymbol(s) => write!(f, "symbol {s:?} is not in the alphabet"),
            ModelError::SymbolOutOfRange {
                position,
                symbol,
                alphabet_len,
            } => write!(
                f,
                "symbol index {symbol} at position {position} is outside an alphabet of {alphabet_len}"
            ),
            ModelError::Shape { what, expected, got } => {
                write!(f, "{what}: expected {expected}, got {got}")
            }
            ModelError::IndexOutOfRange { what, index, bound } => {
                write!(f, "{what}: index {index} out of range (must be < {bound})")
            }
            ModelError::AlphabetMismatch { what } => write!(f, "alphabet mismatch: {what}"),
            ModelError::OracleCap { len, cap } => write!(
                f,
                "oracle cap: word length {len} exceeds enumeration cap {cap}"
            ),
            ModelError::ProbabilityOutOfRange { value } => write!(
                f,
                "acceptance probability {value} lies outside [0, 1]; the model is corrupted"
            ),
            ModelError::Invariant(violations) => {
                write!(f, "invariant violations:")?;
                for v in violations {
                    write!(f, " [{v}]")?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for ModelError {}

/// A numerical invariant that failed validation.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    /// Name of the failed check, e.g. `check_unitary`.
    pub check: &'static str,
    /// Which component failed, e.g. `unitary[a]`.
    pub location: String,
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed for {}: residual {:e}", self.check, self.location, self.residual)
    }
}

pub(crate) fn violations_to_result(violations: Vec<Violation>) -> Result<(), ModelError> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ModelError::Invariant(violations))
    }
}

/// Runs a check and records a violation when it fails.
pub(crate) fn record(
    out: &mut Vec<Violation>,
    check: &'static str,
    location: impl FnOnce() -> String,
    result: Result<crate::matrix::Check, MatrixError>,
) {
    match result {
        Ok(c) if c.passed => {}
        Ok(c) => out.push(Violation {
            check,
            location: location(),
            residual: c.residual,
        }),
        // Shapes are checked at construction; treat anything else as maximal failure.
        Err(_) => out.push(Violation {
            check,
            location: location(),
            residual: f64::INFINITY,
        }),
    }
}

/// Finite alphabet of named symbols. Symbols are addressed by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self, ModelError> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(ModelError::EmptyAlphabet);
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(ModelError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    fn single_chars(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Parses a word. With single-character symbols the text is read character by
    /// character; otherwise symbols are separated by commas or whitespace.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>, ModelError> {
        let lookup = |s: &str| {
            self.index_of(s)
                .ok_or_else(|| ModelError::UnknownSymbol(s.to_string()))
        };
        if self.single_chars() {
            let mut buf = [0u8; 4];
            text.chars().map(|ch| lookup(ch.encode_utf8(&mut buf))).collect()
        } else {
            text.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(lookup)
                .collect()
        }
    }

    /// Inverse of [`Alphabet::parse_word`].
    pub fn render(&self, word: &[usize]) -> String {
        let sep = if self.single_chars() { "" } else { "," };
        let mut out = String::new();
        for (i, &s) in word.iter().enumerate() {
            if i > 0 {
                out.push_str(sep);
            }
            out.push_str(&self.symbols[s]);
        }
        out
    }

    /// Checks that every symbol index of `word` is in range.
    pub fn check_word(&self, word: &[usize]) -> Result<(), ModelError> {
        match word.iter().position(|&s| s >= self.len()) {
            None => Ok(()),
            Some(position) => Err(ModelError::SymbolOutOfRange {
                position,
                symbol: word[position],
                alphabet_len: self.len(),
            }),
        }
    }
}

/// Model tag used by file formats and conversion reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Dfa,
    Mo1gqfa,
    Cl1qfa,
    Qfac,
    Qcfa,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Dfa,
        ModelKind::Mo1gqfa,
        ModelKind::Cl1qfa,
        ModelKind::Qfac,
        ModelKind::Qcfa,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Dfa => "dfa",
            ModelKind::Mo1gqfa => "mo1gqfa",
            ModelKind::Cl1qfa => "cl1qfa",
            ModelKind::Qfac => "1qfac",
            ModelKind::Qcfa => "1qcfa",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        ModelKind::ALL.into_iter().find(|k| k.tag() == tag)
    }

    /// True for the three hybrid models that convert into an MO-1gQFA with classical factor.
    pub fn is_semi_quantum(self) -> bool {
        matches!(self, ModelKind::Cl1qfa | ModelKind::Qfac | ModelKind::Qcfa)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Any of the supported automata.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Dfa(Dfa),
    Mo(MoGqfa),
    Cl(ClQfa),
    Qfac(QfacAut),
    Qcfa(QcfaAut),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Dfa(_) => ModelKind::Dfa,
            Model::Mo(_) => ModelKind::Mo1gqfa,
            Model::Cl(_) => ModelKind::Cl1qfa,
            Model::Qfac(_) => ModelKind::Qfac,
            Model::Qcfa(_) => ModelKind::Qcfa,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Model::Dfa(m) => m.alphabet(),
            Model::Mo(m) => m.alphabet(),
            Model::Cl(m) => m.alphabet(),
            Model::Qfac(m) => m.alphabet(),
            Model::Qcfa(m) => m.alphabet(),
        }
    }

    /// Every numerical invariant violated at the default validation tolerance.
    pub fn validate(&self) -> Vec<Violation> {
        match self {
            Model::Dfa(_) => Vec::new(),
            Model::Mo(m) => m.validate(),
            Model::Cl(m) => m.validate(),
            Model::Qfac(m) => m.validate(),
            Model::Qcfa(m) => m.validate(),
        }
    }

    /// `Ok` when [`Model::validate`] finds nothing, else [`ModelError::Invariant`].
    pub fn check(&self) -> Result<(), ModelError> {
        violations_to_result(self.validate())
    }

    /// Acceptance probability under each model's own semantics. CL-1QFA and 1QCFA use
    /// the enumeration oracles with the default cap; a DFA yields 0 or 1.
    pub fn accept_prob(&self, word: &[usize]) -> Result<f64, ModelError> {
        match self {
            Model::Dfa(m) => Ok(if m.run(word)?.accepted { 1.0 } else { 0.0 }),
            Model::Mo(m) => m.accept_prob(word),
            Model::Cl(m) => m.accept_prob_oracle(word),
            Model::Qfac(m) => m.accept_prob(word),
            Model::Qcfa(m) => m.accept_prob_oracle(word),
        }
    }
}

/// Maps a raw probability into `[0, 1]`, absorbing rounding noise up to
/// [`PROBABILITY_SLACK`] and rejecting anything larger.
pub(crate) fn settle_probability(p: f64) -> Result<f64, ModelError> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else if (-PROBABILITY_SLACK..0.0).contains(&p) {
        log::warn!("clamping acceptance probability {p:e} up to 0");
        Ok(0.0)
    } else if p > 1.0 && p <= 1.0 + PROBABILITY_SLACK {
        log::warn!("clamping acceptance probability 1 + {:e} down to 1", p - 1.0);
        Ok(1.0)
    } else {
        Err(ModelError::ProbabilityOutOfRange { value: p })
    }
}

/// `|i>` as a column vector of length `n`.
pub(crate) fn basis_vector(n: usize, i: usize) -> Vec<Complex> {
    let mut v = alloc::vec![Complex::new(0.0, 0.0); n];
    v[i] = Complex::new(1.0, 0.0);
    v
}

/// Requires `m` to be `n x n`.
pub(crate) fn require_dim(m: &CMatrix, n: usize, what: impl FnOnce() -> String) -> Result<(), ModelError> {
    if m.shape() == (n, n) {
        Ok(())
    } else {
        Err(ModelError::shape(
            what(),
            alloc::format!("{n}x{n}"),
            alloc::format!("{}x{}", m.rows(), m.cols()),
        ))
    }
}

pub(crate) fn require_len<T>(items: &[T], n: usize, what: impl FnOnce() -> String) -> Result<(), ModelError> {
    if items.len() == n {
        Ok(())
    } else {
        Err(ModelError::shape(
            what(),
            alloc::format!("{n} entries"),
            alloc::format!("{} entries", items.len()),
        ))
    }
}
