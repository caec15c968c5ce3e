//! Bounded-length audits over all words up to a maximum length.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{check_delta, check_lambda, BoundError};
use crate::matrix::{vec_norm, CMatrix, Complex};
use crate::models::{Dfa, ModelError, MoGqfa};

/// Default cap on the number of enumerated words.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// Probabilities this close to the cut-point count as sitting on it: isolation 0 and
/// not strictly above.
pub const NEAR_CUTPOINT: f64 = 1e-9;

const UNIT_BALL_SLACK: f64 = 1e-9;
const SEPARATION_SLACK: f64 = 1e-9;

/// Number of words of length at most `max_len` over `k` symbols, saturating.
pub fn word_count(k: usize, max_len: usize) -> u128 {
    let k = k as u128;
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(level);
        level = level.saturating_mul(k);
    }
    total
}

fn check_budget(k: usize, max_len: usize, budget: u128) -> Result<u128, BoundError> {
    let words = word_count(k, max_len);
    if words > budget {
        Err(BoundError::BudgetExceeded { words, budget })
    } else {
        Ok(words)
    }
}

fn check_alphabets(m: &MoGqfa, d: &Dfa) -> Result<(), BoundError> {
    if m.alphabet() == d.alphabet() {
        Ok(())
    } else {
        Err(ModelError::AlphabetMismatch {
            what: "automaton and DFA alphabets differ".into(),
        }
        .into())
    }
}

/// Depth-first walk over every word of length `<= max_len` in lexicographic pre-order,
/// carrying `rho_x` and an auxiliary DFA state.
fn walk<F>(m: &MoGqfa, d: Option<&Dfa>, max_len: usize, mut visit: F) -> Result<(), ModelError>
where
    F: FnMut(&[usize], &CMatrix, usize) -> Result<(), ModelError>,
{
    fn go<F>(
        m: &MoGqfa,
        d: Option<&Dfa>,
        word: &mut Vec<usize>,
        rho: &CMatrix,
        state: usize,
        remaining: usize,
        visit: &mut F,
    ) -> Result<(), ModelError>
    where
        F: FnMut(&[usize], &CMatrix, usize) -> Result<(), ModelError>,
    {
        visit(word, rho, state)?;
        if remaining == 0 {
            return Ok(());
        }
        for a in 0..m.alphabet().len() {
            let next_rho = m.step(rho, a);
            let next_state = d.map_or(0, |d| d.next(state, a));
            word.push(a);
            go(m, d, word, &next_rho, next_state, remaining - 1, visit)?;
            word.pop();
        }
        Ok(())
    }
    let start = d.map_or(0, Dfa::initial);
    go(m, d, &mut Vec::new(), m.rho0(), start, max_len, &mut visit)
}

/// Shortlex order: shorter first, then lexicographic.
fn shortlex(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Bounded-length estimate of how well `lambda` is isolated.
#[derive(Clone, Debug, PartialEq)]
pub struct IsolationEstimate {
    /// `min |P(x) - lambda|` over the enumerated words. The true isolation over all of
    /// `Sigma*` can only be smaller, so this is an upper bound.
    pub iso_hat: f64,
    /// Whether `P(x) > lambda` agreed with membership in the DFA language on every word.
    pub consistent: bool,
    /// Shortlex-first word on which they disagreed.
    pub witness: Option<Vec<usize>>,
    pub words_checked: u128,
    pub max_len: usize,
}

pub fn estimate_isolation(
    m: &MoGqfa,
    lang: &Dfa,
    lambda: f64,
    max_len: usize,
) -> Result<IsolationEstimate, BoundError> {
    estimate_isolation_with_budget(m, lang, lambda, max_len, DEFAULT_BUDGET)
}

pub fn estimate_isolation_with_budget(
    m: &MoGqfa,
    lang: &Dfa,
    lambda: f64,
    max_len: usize,
    budget: u128,
) -> Result<IsolationEstimate, BoundError> {
    check_lambda(lambda)?;
    check_alphabets(m, lang)?;
    let words_checked = check_budget(m.alphabet().len(), max_len, budget)?;
    let mut iso_hat = f64::INFINITY;
    let mut witness: Option<Vec<usize>> = None;
    walk(m, Some(lang), max_len, |word, rho, state| {
        let p = m.accept_prob_of(rho)?;
        let gap = (p - lambda).abs();
        let (gap, above) = if gap <= NEAR_CUTPOINT {
            (0.0, false)
        } else {
            (gap, p > lambda)
        };
        iso_hat = iso_hat.min(gap);
        if above != lang.is_accepting(state)
            && witness
                .as_deref()
                .is_none_or(|w| shortlex(word, w) == Ordering::Less)
        {
            witness = Some(word.to_vec());
        }
        Ok(())
    })?;
    Ok(IsolationEstimate {
        iso_hat,
        consistent: witness.is_none(),
        witness,
        words_checked,
        max_len,
    })
}

/// Result of checking the separation premise of the DFA-size bound.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationAudit {
    pub max_len: usize,
    pub words_checked: u128,
    /// Nerode classes (minimal-DFA states) reached by the enumerated words.
    pub class_count: usize,
    /// Distinct `(class, vec(rho_x))` points after merging numerically identical states.
    pub distinct_points: usize,
    /// `2 delta / sqrt(n)`.
    pub threshold: f64,
    /// Smallest distance between points of different classes; `None` if only one class
    /// was reached.
    pub min_cross_distance: Option<f64>,
    pub max_vec_norm: f64,
    /// Words whose `vec(rho_x)` left the unit ball.
    pub unit_ball_violations: Vec<Vec<usize>>,
    /// Word pairs from different classes closer than the threshold.
    pub violations: Vec<(Vec<usize>, Vec<usize>)>,
}

impl SeparationAudit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.unit_ball_violations.is_empty()
    }
}

pub fn separation_audit(
    m: &MoGqfa,
    min_dfa: &Dfa,
    iso_delta: f64,
    max_len: usize,
) -> Result<SeparationAudit, BoundError> {
    separation_audit_with_budget(m, min_dfa, iso_delta, max_len, DEFAULT_BUDGET)
}

struct Point {
    class: usize,
    vec: Vec<Complex>,
    word: Vec<usize>,
}

/// Checks that every `vec(rho_x)` lies in the unit ball and that words in different
/// Nerode classes of `min_dfa`'s language are at least `2 delta / sqrt(n)` apart.
///
/// Words reaching the same class with the same state (to 1e-12 per coordinate) are
/// merged before the exact pairwise comparison; the shortlex-first word represents
/// each merged point.
pub fn separation_audit_with_budget(
    m: &MoGqfa,
    min_dfa: &Dfa,
    iso_delta: f64,
    max_len: usize,
    budget: u128,
) -> Result<SeparationAudit, BoundError> {
    check_delta(iso_delta)?;
    check_alphabets(m, min_dfa)?;
    let words_checked = check_budget(m.alphabet().len(), max_len, budget)?;
    let threshold = 2.0 * iso_delta / libm::sqrt(m.dim() as f64);

    let mut max_vec_norm = 0.0f64;
    let mut unit_ball_violations = Vec::new();
    let mut index: BTreeMap<(usize, Vec<i64>), usize> = BTreeMap::new();
    let mut points: Vec<Point> = Vec::new();
    walk(m, Some(min_dfa), max_len, |word, rho, class| {
        let v = rho.data();
        let norm = vec_norm(v);
        max_vec_norm = max_vec_norm.max(norm);
        if norm > 1.0 + UNIT_BALL_SLACK {
            unit_ball_violations.push(word.to_vec());
        }
        let key: Vec<i64> = v
            .iter()
            .flat_map(|z| [z.re, z.im])
            .map(|x| libm::round(x * 1e12) as i64)
            .collect();
        match index.get(&(class, key.clone())) {
            Some(&i) => {
                if shortlex(word, &points[i].word) == Ordering::Less {
                    points[i].word = word.to_vec();
                }
            }
            None => {
                index.insert((class, key), points.len());
                points.push(Point {
                    class,
                    vec: v.to_vec(),
                    word: word.to_vec(),
                });
            }
        }
        Ok(())
    })?;

    let class_count = points.iter().map(|p| p.class).collect::<BTreeSet<_>>().len();
    let mut min_cross: Option<f64> = None;
    let mut violations = Vec::new();
    let mut diff = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            if p.class == q.class {
                continue;
            }
            diff.clear();
            diff.extend(p.vec.iter().zip(&q.vec).map(|(a, b)| a - b));
            let dist = vec_norm(&diff);
            min_cross = Some(min_cross.map_or(dist, |m: f64| m.min(dist)));
            if dist < threshold - SEPARATION_SLACK {
                violations.push((p.word.clone(), q.word.clone()));
            }
        }
    }
    violations.sort_by(|a, b| shortlex(&a.0, &b.0).then_with(|| shortlex(&a.1, &b.1)));
    Ok(SeparationAudit {
        max_len,
        words_checked,
        class_count,
        distinct_points: points.len(),
        threshold,
        min_cross_distance: min_cross,
        max_vec_norm,
        unit_ball_violations,
        violations,
    })
}

/// Lower bound on the Nerode index of `{x : P(x) > lambda}` from a finite observation
/// table: rows are words of length `<= prefix_len`, columns are suffixes of length
/// `<= suffix_len`, and two rows that differ in some column belong to different
/// classes. Probabilities within [`NEAR_CUTPOINT`] of `lambda` count as not above it.
pub fn nerode_lower_bound(
    m: &MoGqfa,
    lambda: f64,
    prefix_len: usize,
    suffix_len: usize,
    budget: u128,
) -> Result<usize, BoundError> {
    check_lambda(lambda)?;
    let k = m.alphabet().len();
    let cells = word_count(k, prefix_len).saturating_mul(word_count(k, suffix_len));
    if cells > budget {
        return Err(BoundError::BudgetExceeded {
            words: cells,
            budget,
        });
    }
    let mut rows: BTreeSet<Vec<bool>> = BTreeSet::new();
    walk(m, None, prefix_len, |_, rho, _| {
        let sub = MoGqfa::new(
            m.alphabet().clone(),
            rho.clone(),
            m.channels().to_vec(),
            m.p_acc().clone(),
        )?;
        let mut row = Vec::new();
        walk(&sub, None, suffix_len, |_, r, _| {
            let p = sub.accept_prob_of(r)?;
            row.push(p - lambda > NEAR_CUTPOINT);
            Ok(())
        })?;
        rows.insert(row);
        Ok(())
    })?;
    Ok(rows.len())
}

/// Cut-point at the middle of the widest gap between consecutive values of
/// `{0, 1} + probs`, with half that gap as isolation radius. Returns `None` when the
/// widest gap sits at 0 with zero width.
pub fn widest_gap_cutpoint(probs: &[f64]) -> Option<(f64, f64)> {
    let mut pts: Vec<f64> = probs.iter().copied().filter(|p| p.is_finite()).collect();
    pts.push(0.0);
    pts.push(1.0);
    pts.sort_by(f64::total_cmp);
    let (lo, hi) = pts
        .windows(2)
        .map(|w| (w[0], w[1]))
        .max_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0)))?;
    let half = (hi - lo) / 2.0;
    let lambda = lo + half;
    (half > 0.0 && lambda > 0.0).then_some((lambda, half.min(0.5)))
}
