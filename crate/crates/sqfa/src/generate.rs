//! Seeded random models.
//!
//! The PRNG is ChaCha8 seeded with `seed_from_u64`, which is portable and stable across
//! platforms. Gaussians come from `rand_distr::StandardNormal` (ziggurat). Trial `t` of a
//! fuzz run uses stream `t` of the generator seeded with the run seed, so trials are
//! independent of each other and of evaluation order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sqfa_core::{
    Alphabet, CMatrix, ClQfa, Complex, Dfa, Model, ModelKind, MoGqfa, QcfaAut, QfacAut,
};
use thiserror::Error;

pub type SeededRng = ChaCha8Rng;

pub const MAX_Q: usize = 4;
pub const MAX_K: usize = 4;
pub const MAX_OUTCOMES: usize = 3;
pub const MAX_LEN: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("trials must be positive")]
    NoTrials,
    #[error("{field} = {value} exceeds the cap {cap}")]
    Cap {
        field: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("{field} must be at least 1")]
    Zero { field: &'static str },
    #[error("tolerance must be finite and non-negative, got {0}")]
    Tolerance(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_q: usize,
    pub max_k: usize,
    pub max_outcomes: usize,
    pub max_len: usize,
    pub tolerance: f64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 0,
            trials: 100,
            max_q: 3,
            max_k: 3,
            max_outcomes: 3,
            max_len: 6,
            tolerance: 1e-7,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::NoTrials);
        }
        for (field, value, cap) in [
            ("max_q", self.max_q, MAX_Q),
            ("max_k", self.max_k, MAX_K),
            ("max_outcomes", self.max_outcomes, MAX_OUTCOMES),
        ] {
            if value == 0 {
                return Err(ConfigError::Zero { field });
            }
            if value > cap {
                return Err(ConfigError::Cap { field, value, cap });
            }
        }
        if self.max_len > MAX_LEN {
            return Err(ConfigError::Cap {
                field: "max_len",
                value: self.max_len,
                cap: MAX_LEN,
            });
        }
        if !(self.tolerance.is_finite() && self.tolerance >= 0.0) {
            return Err(ConfigError::Tolerance(self.tolerance));
        }
        Ok(())
    }

    /// Generator for trial `trial` of this run.
    pub fn trial_rng(&self, trial: usize) -> SeededRng {
        let mut rng = SeededRng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }
}

pub fn rng_from_seed(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    CMatrix::new(rows, cols, data).expect("gaussian entries are finite")
}

/// Modified Gram-Schmidt on the columns. Each pivot `R_jj` is the positive column norm,
/// so the result is the Q factor with real positive diagonal `R`. Returns `None` when a
/// column is numerically dependent on the previous ones.
fn orthonormal_columns(a: &CMatrix) -> Option<CMatrix> {
    let n = a.rows();
    let mut q = a.clone();
    for j in 0..a.cols() {
        for p in 0..j {
            let proj: Complex = (0..n).map(|i| q.get(i, p).conj() * q.get(i, j)).sum();
            for i in 0..n {
                let v = q.get(i, j) - proj * q.get(i, p);
                q.set(i, j, v);
            }
        }
        let norm = (0..n).map(|i| q.get(i, j).norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        for i in 0..n {
            let v = q.get(i, j) / norm;
            q.set(i, j, v);
        }
    }
    Some(q)
}

/// Haar-distributed unitary drawn from `rng`.
pub fn haar_unitary_with(dim: usize, rng: &mut impl Rng) -> CMatrix {
    assert!(dim >= 1, "dimension must be positive");
    loop {
        if let Some(u) = orthonormal_columns(&gaussian_matrix(dim, dim, rng)) {
            return u;
        }
    }
}

pub fn gen_haar_unitary(dim: usize, seed: u64) -> CMatrix {
    haar_unitary_with(dim, &mut rng_from_seed(seed))
}

/// `G G^dagger / Tr` for a Gaussian `G`.
pub fn random_density(dim: usize, rng: &mut impl Rng) -> CMatrix {
    loop {
        let g = gaussian_matrix(dim, dim, rng);
        let p = &g * &g.adjoint();
        let t = p.trace().re;
        if t > 1e-12 {
            return p.scale(Complex::new(1.0 / t, 0.0));
        }
    }
}

/// `count` operation elements on `dim` dimensions: the row blocks of an isometry taken
/// from a Haar unitary on `dim * count` dimensions. Also a valid POVM via `E^dagger E`.
pub fn random_channel(dim: usize, count: usize, rng: &mut impl Rng) -> Vec<CMatrix> {
    let u = haar_unitary_with(dim * count, rng);
    (0..count)
        .map(|k| {
            let mut e = CMatrix::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    e.set(i, j, u.get(k * dim + i, j));
                }
            }
            e
        })
        .collect()
}

/// Partitions the columns of a Haar-rotated basis into `groups` non-empty groups and
/// returns the projector onto each group's span.
pub fn random_projective_measurement(dim: usize, groups: usize, rng: &mut impl Rng) -> Vec<CMatrix> {
    assert!(groups >= 1 && groups <= dim, "need 1 <= groups <= dim");
    let v = haar_unitary_with(dim, rng);
    let mut order: Vec<usize> = (0..dim).collect();
    order.shuffle(rng);
    let mut projs = vec![CMatrix::zeros(dim, dim); groups];
    for (pos, &j) in order.iter().enumerate() {
        let g = if pos < groups {
            pos
        } else {
            rng.gen_range(0..groups)
        };
        let col: Vec<Complex> = (0..dim).map(|i| v.get(i, j)).collect();
        projs[g] = &projs[g] + &CMatrix::outer(&col, &col);
    }
    projs
}

/// Diagonal 0/1 projector with each basis vector kept with probability 1/2.
pub fn random_basis_projector(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let d: Vec<f64> = (0..dim)
        .map(|_| if rng.gen_bool(0.5) { 1.0 } else { 0.0 })
        .collect();
    CMatrix::real_diag(&d)
}

pub fn random_dfa(alphabet: Alphabet, states: usize, rng: &mut impl Rng) -> Dfa {
    let k = alphabet.len();
    let trans = (0..states)
        .map(|_| (0..k).map(|_| rng.gen_range(0..states)).collect())
        .collect();
    let accepting: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.5)).collect();
    Dfa::new(alphabet, 0, &accepting, trans).expect("generated DFA is well formed")
}

fn outcome_alphabet(c: usize, prefix: &str) -> Alphabet {
    Alphabet::new((0..c).map(|i| format!("{prefix}{i}"))).expect("distinct symbols")
}

pub fn binary_alphabet() -> Alphabet {
    Alphabet::new(["a", "b"]).expect("distinct symbols")
}

/// Random model of `kind` over `{a, b}` with sizes drawn uniformly within the caps of
/// `cfg`. The number of outcomes never exceeds the quantum dimension.
pub fn random_model(kind: ModelKind, cfg: &FuzzConfig, rng: &mut impl Rng) -> Model {
    let sigma = binary_alphabet();
    let q = rng.gen_range(1..=cfg.max_q);
    let k = rng.gen_range(1..=cfg.max_k);
    let c = rng.gen_range(1..=cfg.max_outcomes.min(q));
    match kind {
        ModelKind::Dfa => Model::Dfa(random_dfa(sigma, k, rng)),
        ModelKind::Mo1gqfa => {
            let channels = (0..sigma.len()).map(|_| random_channel(q, c, rng)).collect();
            let rho0 = random_density(q, rng);
            let v = haar_unitary_with(q, rng);
            let p = random_basis_projector(q, rng);
            let p_acc = &(&v * &p) * &v.adjoint();
            Model::Mo(MoGqfa::new(sigma, rho0, channels, p_acc).expect("shapes agree"))
        }
        ModelKind::Cl1qfa => {
            let us = (0..sigma.len()).map(|_| haar_unitary_with(q, rng)).collect();
            let meas = random_projective_measurement(q, c, rng);
            let control = random_dfa(outcome_alphabet(c, "c"), k, rng);
            Model::Cl(ClQfa::new(sigma, 0, us, meas, control).expect("shapes agree"))
        }
        ModelKind::Qfac => {
            let us = (0..k)
                .map(|_| (0..sigma.len()).map(|_| haar_unitary_with(q, rng)).collect())
                .collect();
            let trans = (0..k)
                .map(|_| (0..sigma.len()).map(|_| rng.gen_range(0..k)).collect())
                .collect();
            let projs = (0..k).map(|_| random_basis_projector(q, rng)).collect();
            Model::Qfac(QfacAut::new(sigma, 0, 0, us, trans, projs).expect("shapes agree"))
        }
        ModelKind::Qcfa => {
            let mut ms = Vec::with_capacity(k);
            for _ in 0..k {
                let mut row = Vec::with_capacity(sigma.len());
                for _ in 0..sigma.len() {
                    let u = haar_unitary_with(q, rng);
                    let parts = random_projective_measurement(q, c, rng);
                    row.push(parts.iter().map(|p| p * &u).collect::<Vec<_>>());
                }
                ms.push(row);
            }
            let trans = (0..k)
                .map(|_| {
                    (0..sigma.len())
                        .map(|_| (0..c).map(|_| rng.gen_range(0..k)).collect())
                        .collect()
                })
                .collect();
            let accepting: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.5)).collect();
            Model::Qcfa(
                QcfaAut::new(sigma, outcome_alphabet(c, "o"), 0, 0, ms, trans, &accepting)
                    .expect("shapes agree"),
            )
        }
    }
}

/// Model for `gen --kind K --seed S`: trial 0 of a default-capped run with that seed.
pub fn gen_random_model(kind: ModelKind, cfg: &FuzzConfig) -> Model {
    random_model(kind, cfg, &mut cfg.trial_rng(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use sqfa_core::matrix::check_unitary;
    use sqfa_core::Tolerance;

    #[test]
    fn scalar_unitary_has_unit_modulus() {
        let u = gen_haar_unitary(1, 3);
        assert!((u.get(0, 0).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn seed_42_dim_4_is_unitary() {
        let check = check_unitary(&gen_haar_unitary(4, 42), Tolerance::new(1e-10).unwrap()).unwrap();
        assert!(check.passed, "residual {}", check.residual);
    }

    #[test]
    fn same_seed_same_bits() {
        let a = gen_haar_unitary(3, 9);
        let b = gen_haar_unitary(3, 9);
        let bits = |m: &CMatrix| m.data().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(bits(&a), bits(&gen_haar_unitary(3, 10)));
    }

    #[test]
    fn single_outcome_qcfa_is_unitary_evolution() {
        let cfg = FuzzConfig {
            max_outcomes: 1,
            ..FuzzConfig::default()
        };
        let Model::Qcfa(m) = gen_random_model(ModelKind::Qcfa, &cfg) else {
            unreachable!()
        };
        for row in m.measurements() {
            for ops in row {
                assert_eq!(ops.len(), 1);
                assert!(check_unitary(&ops[0], Tolerance::VALIDATION).unwrap().passed);
            }
        }
    }

    #[test]
    fn caps_are_enforced() {
        let bad = FuzzConfig {
            max_q: 5,
            ..FuzzConfig::default()
        };
        assert!(matches!(bad.validate(), Err(ConfigError::Cap { field: "max_q", .. })));
        let none = FuzzConfig {
            trials: 0,
            ..FuzzConfig::default()
        };
        assert_eq!(none.validate(), Err(ConfigError::NoTrials));
        assert!(FuzzConfig::default().validate().is_ok());
    }

    #[test]
    fn every_kind_validates() {
        let cfg = FuzzConfig::default();
        for trial in 0..20 {
            for kind in ModelKind::ALL {
                let m = random_model(kind, &cfg, &mut cfg.trial_rng(trial));
                assert!(m.validate().is_empty(), "{kind} trial {trial}: {:?}", m.validate());
            }
        }
    }
}
