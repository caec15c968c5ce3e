//! Size bounds relating MO-1gQFA dimension, isolation radius and DFA size, plus
//! bounded-length audits of their premises on concrete automata.
//!
//! For an `n`-dimensional MO-1gQFA recognising `L` with cut-point isolated by `delta`,
//! the states `vec(rho_x)` of words in different Nerode classes of `L` are at least
//! `2 delta / sqrt(n)` apart inside the unit ball of `C^{n^2}`. Packing balls of radius
//! `delta / sqrt(n)` gives
//!
//! ```text
//! d <= (1 + sqrt(n)/delta)^(2 n^2)        (minimal DFA size d)
//! n >= [log d / (2 log(2/delta))]^(4/9)   (dimension lower bound)
//! ```
//!
//! and through the `q*k`-dimensional simulation the second also bounds `q*k` for the
//! hybrid automata. All logarithm ratios are base-invariant; natural and binary logs are
//! used interchangeably.

mod audit;
mod minimize;

use core::fmt;

pub use audit::{
    estimate_isolation, estimate_isolation_with_budget, nerode_lower_bound, separation_audit,
    separation_audit_with_budget, widest_gap_cutpoint, word_count, IsolationEstimate,
    SeparationAudit, DEFAULT_BUDGET, NEAR_CUTPOINT,
};
pub use minimize::{distinguishing_word, finite_language_dfa, minimal_dfa};

use crate::models::ModelError;

/// Beyond `2^LINEAR_LOG2_LIMIT` (about `1e300`) values are reported in log space only.
pub const LINEAR_LOG2_LIMIT: f64 = 996.0;

#[derive(Clone, Debug, PartialEq)]
pub enum BoundError {
    InvalidDelta(f64),
    InvalidCutPoint(f64),
    InvalidSize(&'static str),
    BudgetExceeded { words: u128, budget: u128 },
    Model(ModelError),
}

impl fmt::Display for BoundError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundError::InvalidDelta(d) => write!(f, "isolation delta {d} is outside (0, 1/2]"),
            BoundError::InvalidCutPoint(l) => write!(f, "cut-point {l} is outside (0, 1]"),
            BoundError::InvalidSize(what) => write!(f, "{what} must be at least 1"),
            BoundError::BudgetExceeded { words, budget } => write!(
                f,
                "enumeration of {words} words exceeds the budget of {budget}"
            ),
            BoundError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for BoundError {}

impl From<ModelError> for BoundError {
    fn from(e: ModelError) -> Self {
        BoundError::Model(e)
    }
}

fn check_delta(delta: f64) -> Result<(), BoundError> {
    if delta > 0.0 && delta <= 0.5 {
        Ok(())
    } else {
        Err(BoundError::InvalidDelta(delta))
    }
}

fn check_lambda(lambda: f64) -> Result<(), BoundError> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(BoundError::InvalidCutPoint(lambda))
    }
}

/// Cut-point `lambda` with isolation radius `iso_delta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutPointSpec {
    pub lambda: f64,
    pub iso_delta: f64,
}

impl CutPointSpec {
    /// `lambda + iso_delta > 1` is allowed: no word can then be accepted, which the
    /// consistency checks will report.
    pub fn new(lambda: f64, iso_delta: f64) -> Result<Self, BoundError> {
        check_lambda(lambda)?;
        check_delta(iso_delta)?;
        Ok(CutPointSpec { lambda, iso_delta })
    }

    /// Whether `p` keeps at least `iso_delta` away from the cut-point.
    pub fn isolates(&self, p: f64) -> bool {
        (p - self.lambda).abs() >= self.iso_delta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundFormula {
    DfaUpper,
    DimLower,
    QkLower,
}

impl BoundFormula {
    pub fn id(self) -> &'static str {
        match self {
            BoundFormula::DfaUpper => "dfa_upper",
            BoundFormula::DimLower => "dim_lower",
            BoundFormula::QkLower => "qk_lower",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundInput {
    /// MO-1gQFA dimension `n`.
    QfaDim(usize),
    /// `log2` of the minimal DFA size `d`.
    DfaStatesLog2(f64),
}

/// An evaluated bound and the inputs that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub formula: BoundFormula,
    pub input: BoundInput,
    pub iso_delta: f64,
    /// `log2` of the bound; `-inf` when the bound is 0.
    pub log2_value: f64,
    /// Linear value, present when below `2^LINEAR_LOG2_LIMIT`.
    pub value: Option<f64>,
}

/// Upper bound `(1 + sqrt(n)/delta)^(2 n^2)` on the minimal DFA size of a language
/// recognised by an `n`-dimensional MO-1gQFA with cut-point isolated by `delta`.
pub fn dfa_upper_bound_from_qfa(n: usize, iso_delta: f64) -> Result<BoundReport, BoundError> {
    if n == 0 {
        return Err(BoundError::InvalidSize("dimension"));
    }
    check_delta(iso_delta)?;
    let nf = n as f64;
    let base = 1.0 + libm::sqrt(nf) / iso_delta;
    let exponent = 2.0 * nf * nf;
    let log2_value = exponent * libm::log2(base);
    let value = (log2_value < LINEAR_LOG2_LIMIT).then(|| libm::pow(base, exponent));
    Ok(BoundReport {
        formula: BoundFormula::DfaUpper,
        input: BoundInput::QfaDim(n),
        iso_delta,
        log2_value,
        value,
    })
}

fn lower_bound(formula: BoundFormula, log2_d: f64, iso_delta: f64) -> Result<BoundReport, BoundError> {
    if log2_d.is_nan() || log2_d < 0.0 {
        return Err(BoundError::InvalidSize("DFA state count"));
    }
    check_delta(iso_delta)?;
    let ratio = log2_d / (2.0 * libm::log2(2.0 / iso_delta));
    let value = libm::pow(ratio, 4.0 / 9.0);
    Ok(BoundReport {
        formula,
        input: BoundInput::DfaStatesLog2(log2_d),
        iso_delta,
        log2_value: libm::log2(value),
        value: Some(value),
    })
}

fn log2_of_count(d: u128) -> Result<f64, BoundError> {
    if d == 0 {
        Err(BoundError::InvalidSize("DFA state count"))
    } else {
        Ok(libm::log2(d as f64))
    }
}

/// Lower bound `[log d / (2 log(2/delta))]^(4/9)` on the dimension of an MO-1gQFA
/// whose language needs `d` DFA states.
pub fn mo_dim_lower_bound(d: u128, iso_delta: f64) -> Result<BoundReport, BoundError> {
    lower_bound(BoundFormula::DimLower, log2_of_count(d)?, iso_delta)
}

/// [`mo_dim_lower_bound`] with `d` given as `log2 d`, for sizes beyond `u128`.
pub fn mo_dim_lower_bound_log2(log2_d: f64, iso_delta: f64) -> Result<BoundReport, BoundError> {
    lower_bound(BoundFormula::DimLower, log2_d, iso_delta)
}

/// The same bound applied to `q*k` for any of the three hybrid automata.
pub fn qk_lower_bound(d: u128, iso_delta: f64) -> Result<BoundReport, BoundError> {
    lower_bound(BoundFormula::QkLower, log2_of_count(d)?, iso_delta)
}

pub fn qk_lower_bound_log2(log2_d: f64, iso_delta: f64) -> Result<BoundReport, BoundError> {
    lower_bound(BoundFormula::QkLower, log2_d, iso_delta)
}

/// Both sides, in `log2`, of `(1 + sqrt(n)/delta)^(2n^2) <= (2/delta)^(2 n^(9/4))`,
/// the step that turns the DFA upper bound into the dimension lower bound.
pub fn proof_chain_log2(n: usize, iso_delta: f64) -> Result<(f64, f64), BoundError> {
    let upper = dfa_upper_bound_from_qfa(n, iso_delta)?;
    let nf = n as f64;
    let rhs = 2.0 * libm::pow(nf, 9.0 / 4.0) * libm::log2(2.0 / iso_delta);
    Ok((upper.log2_value, rhs))
}
