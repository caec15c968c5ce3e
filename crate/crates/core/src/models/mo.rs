use alloc::format;
use alloc::vec::Vec;

use super::{record, require_dim, require_len, settle_probability, Alphabet, ModelError, Violation};
use crate::matrix::{
    apply_operation_unchecked, check_density, check_kraus_complete, projector_residual, CMatrix,
    Check, Tolerance,
};

/// Measure-once one-way general QFA: a density operator evolved by one trace-preserving
/// operation per symbol, followed by a single projective accept/reject measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MoGqfa {
    alphabet: Alphabet,
    rho0: CMatrix,
    /// Operation elements per symbol, in alphabet order.
    channels: Vec<Vec<CMatrix>>,
    p_acc: CMatrix,
}

impl MoGqfa {
    pub fn new(
        alphabet: Alphabet,
        rho0: CMatrix,
        channels: Vec<Vec<CMatrix>>,
        p_acc: CMatrix,
    ) -> Result<Self, ModelError> {
        let n = rho0.rows();
        require_dim(&rho0, n, || "rho0".into())?;
        require_dim(&p_acc, n, || "p_acc".into())?;
        require_len(&channels, alphabet.len(), || "channels".into())?;
        for (a, elems) in channels.iter().enumerate() {
            if elems.is_empty() {
                return Err(ModelError::shape(
                    format!("channel[{}]", alphabet.symbol(a)),
                    "at least one operation element",
                    0,
                ));
            }
            for (k, e) in elems.iter().enumerate() {
                require_dim(e, n, || format!("channel[{}][{k}]", alphabet.symbol(a)))?;
            }
        }
        Ok(MoGqfa {
            alphabet,
            rho0,
            channels,
            p_acc,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.rho0.rows()
    }

    pub fn rho0(&self) -> &CMatrix {
        &self.rho0
    }

    pub fn channel(&self, symbol: usize) -> &[CMatrix] {
        &self.channels[symbol]
    }

    pub fn channels(&self) -> &[Vec<CMatrix>] {
        &self.channels
    }

    pub fn p_acc(&self) -> &CMatrix {
        &self.p_acc
    }

    /// `I - P_acc`.
    pub fn p_rej(&self) -> CMatrix {
        &CMatrix::identity(self.dim()) - &self.p_acc
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.validate_with(Tolerance::VALIDATION)
    }

    pub fn validate_with(&self, tol: Tolerance) -> Vec<Violation> {
        let mut out = Vec::new();
        record(&mut out, "check_density", || "rho0".into(), check_density(&self.rho0, tol));
        for (a, elems) in self.channels.iter().enumerate() {
            record(
                &mut out,
                "check_kraus_complete",
                || format!("channel[{}]", self.alphabet.symbol(a)),
                check_kraus_complete(elems, tol),
            );
        }
        record(
            &mut out,
            "projector",
            || "p_acc".into(),
            projector_residual(&self.p_acc).map(|r| Check {
                passed: r <= tol.eps(),
                residual: r,
            }),
        );
        out
    }

    /// One symbol of evolution: `rho -> E_symbol(rho)`.
    pub fn step(&self, rho: &CMatrix, symbol: usize) -> CMatrix {
        apply_operation_unchecked(&self.channels[symbol], rho)
    }

    /// `rho_x = E_{x_n} o ... o E_{x_1}(rho0)`; `rho0` for the empty word.
    pub fn state_after(&self, word: &[usize]) -> Result<CMatrix, ModelError> {
        self.alphabet.check_word(word)?;
        Ok(word
            .iter()
            .fold(self.rho0.clone(), |rho, &a| self.step(&rho, a)))
    }

    /// `Re Tr(P_acc rho)`, unclamped.
    pub fn raw_accept_prob_of(&self, rho: &CMatrix) -> f64 {
        trace_of_product(&self.p_acc, rho)
    }

    /// Acceptance probability of a state reached by this automaton.
    pub fn accept_prob_of(&self, rho: &CMatrix) -> Result<f64, ModelError> {
        settle_probability(self.raw_accept_prob_of(rho))
    }

    /// `Re Tr(P_rej rho)`, unclamped.
    pub fn reject_prob_of(&self, rho: &CMatrix) -> f64 {
        trace_of_product(&self.p_rej(), rho)
    }

    /// `Tr(P_acc rho_x)`.
    pub fn accept_prob(&self, word: &[usize]) -> Result<f64, ModelError> {
        let rho = self.state_after(word)?;
        self.accept_prob_of(&rho)
    }
}

/// `Re Tr(A B)` without forming the product.
fn trace_of_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.rows();
    let mut acc = crate::sum::CompensatedSum::new();
    for i in 0..n {
        for j in 0..n {
            acc.add((a.get(i, j) * b.get(j, i)).re);
        }
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Complex;
    use alloc::vec;

    fn ab() -> Alphabet {
        Alphabet::new(["a"]).unwrap()
    }

    fn flip() -> Vec<Vec<CMatrix>> {
        vec![vec![CMatrix::ket_bra(2, 1, 0), CMatrix::ket_bra(2, 0, 1)]]
    }

    fn parity() -> MoGqfa {
        MoGqfa::new(ab(), CMatrix::ket_bra(2, 0, 0), flip(), CMatrix::ket_bra(2, 0, 0)).unwrap()
    }

    #[test]
    fn total_projector_accepts_everything() {
        let m = MoGqfa::new(ab(), CMatrix::ket_bra(2, 0, 0), flip(), CMatrix::identity(2)).unwrap();
        for len in 0..5 {
            assert_eq!(m.accept_prob(&vec![0; len]).unwrap(), 1.0);
        }
    }

    #[test]
    fn parity_embedding() {
        let m = parity();
        assert!(m.validate().is_empty());
        assert_eq!(m.accept_prob(&[]).unwrap(), 1.0);
        assert_eq!(m.accept_prob(&[0]).unwrap(), 0.0);
        assert_eq!(m.accept_prob(&[0, 0]).unwrap(), 1.0);
    }

    #[test]
    fn heavy_trace_fails_validation() {
        let m = MoGqfa::new(ab(), CMatrix::real_diag(&[0.7, 0.7]), flip(), CMatrix::ket_bra(2, 0, 0))
            .unwrap();
        let v = m.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].check, "check_density");
        assert!((v[0].residual - 0.4).abs() < 1e-15);
    }

    #[test]
    fn corrupted_model_is_an_error() {
        let m = MoGqfa::new(
            ab(),
            CMatrix::ket_bra(2, 0, 0),
            vec![vec![CMatrix::identity(2).scale(Complex::new(2.0, 0.0))]],
            CMatrix::identity(2),
        )
        .unwrap();
        assert!(matches!(
            m.accept_prob(&[0]),
            Err(ModelError::ProbabilityOutOfRange { .. })
        ));
    }

    #[test]
    fn structural_errors() {
        assert!(MoGqfa::new(ab(), CMatrix::ket_bra(2, 0, 0), vec![], CMatrix::identity(2)).is_err());
        assert!(MoGqfa::new(ab(), CMatrix::ket_bra(2, 0, 0), vec![vec![]], CMatrix::identity(2)).is_err());
        assert!(MoGqfa::new(ab(), CMatrix::ket_bra(2, 0, 0), flip(), CMatrix::identity(3)).is_err());
        assert!(MoGqfa::new(
            ab(),
            CMatrix::ket_bra(2, 0, 0),
            vec![vec![CMatrix::identity(3)]],
            CMatrix::identity(2)
        )
        .is_err());
    }
}
