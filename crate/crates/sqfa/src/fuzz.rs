//! Randomised equivalence check between each hybrid model's own semantics and its
//! MO-1gQFA simulation.

use rand::Rng;
use sqfa_core::conversion::to_mo;
use sqfa_core::matrix::{check_density, check_kraus_complete};
use sqfa_core::{CMatrix, ModelError, ModelKind, MoGqfa, Tolerance};
use thiserror::Error;

use crate::generate::{random_model, ConfigError, FuzzConfig};

/// Length cap for the exhaustive part of the string set.
pub const EXHAUSTIVE_LEN: usize = 4;
/// Random strings per trial, lengths uniform in `0..=max_len`.
pub const RANDOM_WORDS: usize = 20;

#[derive(Debug, Error)]
pub enum FuzzError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("equivalence fuzzing needs a convertible kind (dfa, cl1qfa, 1qfac, 1qcfa), got {0}")]
    Kind(ModelKind),
    #[error("trial {trial}: {source}")]
    Model { trial: usize, source: ModelError },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuzzFailure {
    pub trial: usize,
    pub word: Vec<usize>,
    pub direct: f64,
    pub converted: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuzzReport {
    pub kind: ModelKind,
    pub trials_run: usize,
    pub strings_compared: usize,
    pub max_abs_diff: f64,
    pub tolerance: f64,
    pub failures: Vec<FuzzFailure>,
    /// Largest `||sum E^dagger E - I||_max` over every constructed channel.
    pub max_completeness_residual: f64,
    /// Largest density residual over every intermediate state of the converted model.
    pub max_density_residual: f64,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All words over `k` symbols of length `<= max_len`, in shortlex order.
pub fn all_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut words = vec![vec![]];
    let mut start = 0;
    for _ in 0..max_len {
        let end = words.len();
        for i in start..end {
            for a in 0..k {
                let mut w = words[i].clone();
                w.push(a);
                words.push(w);
            }
        }
        start = end;
    }
    words
}

/// All words of length `<= min(max_len, EXHAUSTIVE_LEN)`, then `extra` random words of
/// length `<= max_len`.
pub fn string_set(k: usize, max_len: usize, extra: usize, rng: &mut impl Rng) -> Vec<Vec<usize>> {
    let mut words = all_words(k, max_len.min(EXHAUSTIVE_LEN));
    for _ in 0..extra {
        let len = rng.gen_range(0..=max_len);
        words.push((0..len).map(|_| rng.gen_range(0..k)).collect());
    }
    words
}

fn max_density_residual(mo: &MoGqfa, words: &[Vec<usize>]) -> Result<f64, ModelError> {
    let mut worst = 0.0f64;
    let mut visit = |rho: &CMatrix| -> Result<(), ModelError> {
        let check = check_density(rho, Tolerance::VALIDATION).map_err(|e| ModelError::Matrix {
            context: "intermediate state".into(),
            source: e,
        })?;
        worst = worst.max(check.residual);
        Ok(())
    };
    for w in words {
        let mut rho = mo.rho0().clone();
        visit(&rho)?;
        for &a in w {
            rho = mo.step(&rho, a);
            visit(&rho)?;
        }
    }
    Ok(worst)
}

pub fn equivalence_fuzz(cfg: &FuzzConfig, kind: ModelKind) -> Result<FuzzReport, FuzzError> {
    cfg.validate()?;
    if kind == ModelKind::Mo1gqfa {
        return Err(FuzzError::Kind(kind));
    }
    let mut report = FuzzReport {
        kind,
        trials_run: 0,
        strings_compared: 0,
        max_abs_diff: 0.0,
        tolerance: cfg.tolerance,
        failures: Vec::new(),
        max_completeness_residual: 0.0,
        max_density_residual: 0.0,
    };
    for trial in 0..cfg.trials {
        let wrap = |source| FuzzError::Model { trial, source };
        let mut rng = cfg.trial_rng(trial);
        let model = random_model(kind, cfg, &mut rng);
        let (mo, _) = to_mo(&model).map_err(wrap)?;
        for elems in mo.channels() {
            let check = check_kraus_complete(elems, Tolerance::VALIDATION).map_err(|e| {
                wrap(ModelError::Matrix {
                    context: "constructed channel".into(),
                    source: e,
                })
            })?;
            report.max_completeness_residual = report.max_completeness_residual.max(check.residual);
        }
        let words = string_set(model.alphabet().len(), cfg.max_len, RANDOM_WORDS, &mut rng);
        for w in &words {
            let direct = model.accept_prob(w).map_err(wrap)?;
            let converted = mo.accept_prob(w).map_err(wrap)?;
            let diff = (direct - converted).abs();
            report.max_abs_diff = report.max_abs_diff.max(diff);
            if diff.is_nan() || diff > cfg.tolerance {
                report.failures.push(FuzzFailure {
                    trial,
                    word: w.clone(),
                    direct,
                    converted,
                });
            }
        }
        report.strings_compared += words.len();
        report.max_density_residual = report
            .max_density_residual
            .max(max_density_residual(&mo, &words).map_err(wrap)?);
        report.trials_run += 1;
    }
    Ok(report)
}
