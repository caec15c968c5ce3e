#![allow(dead_code)]

use proptest::prelude::*;
use sqfa_core::{CMatrix, Complex};

pub fn hadamard() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_real(&[&[h, h], &[h, -h]]).unwrap()
}

pub fn complex_entries(len: usize) -> impl Strategy<Value = Vec<Complex>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex::new(re, im)).collect())
}

pub fn square(n: usize) -> impl Strategy<Value = CMatrix> {
    complex_entries(n * n).prop_map(move |d| CMatrix::new(n, n, d).unwrap())
}

/// Classical Gram-Schmidt on columns; falls back to the identity for degenerate draws.
pub fn orthonormalize(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let mut cols: Vec<Vec<Complex>> = Vec::new();
    for j in 0..n {
        let mut v: Vec<Complex> = (0..n).map(|i| a.get(i, j)).collect();
        for u in &cols {
            let proj: Complex = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            return CMatrix::identity(n);
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut out = CMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, z) in c.iter().enumerate() {
            out.set(i, j, *z);
        }
    }
    out
}

pub fn unitary(n: usize) -> impl Strategy<Value = CMatrix> {
    square(n).prop_map(|a| orthonormalize(&a))
}

/// `G G^dagger / Tr`.
pub fn density(n: usize) -> impl Strategy<Value = CMatrix> {
    square(n).prop_map(|g| {
        let p = &g * &g.adjoint();
        let t = p.trace().re;
        if t < 1e-9 {
            CMatrix::identity(g.rows()).scale(Complex::new(1.0 / g.rows() as f64, 0.0))
        } else {
            p.scale(Complex::new(1.0 / t, 0.0))
        }
    })
}

/// Operation elements `E_k = <k| (x) I` applied to an isometry taken from a unitary on
/// `n * count` dimensions: `E_k` is the `k`-th `n x n` row block of the first `n` columns.
pub fn channel(n: usize, count: usize) -> impl Strategy<Value = Vec<CMatrix>> {
    unitary(n * count).prop_map(move |u| {
        (0..count)
            .map(|k| {
                let mut e = CMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        e.set(i, j, u.get(k * n + i, j));
                    }
                }
                e
            })
            .collect()
    })
}

use sqfa_core::{Alphabet, ClQfa, Dfa, QcfaAut, QfacAut};

pub fn symbols(n: usize, prefix: &str) -> Alphabet {
    Alphabet::new((0..n).map(|i| format!("{prefix}{i}"))).unwrap()
}

/// Projective measurement with `outcomes` non-empty groups of a rotated basis.
/// `assign[j]` picks the group of basis vector `j` for `j >= outcomes`.
pub fn partition_projectors(v: &CMatrix, outcomes: usize, assign: &[usize]) -> Vec<CMatrix> {
    let n = v.rows();
    let mut projs = vec![CMatrix::zeros(n, n); outcomes];
    for j in 0..n {
        let group = if j < outcomes { j } else { assign[j] % outcomes };
        let col: Vec<Complex> = (0..n).map(|i| v.get(i, j)).collect();
        projs[group] = &projs[group] + &CMatrix::outer(&col, &col);
    }
    projs
}

pub fn dfa(alphabet: Alphabet, states: usize) -> impl Strategy<Value = Dfa> {
    let k = alphabet.len();
    (
        prop::collection::vec(prop::collection::vec(0..states, k), states),
        prop::collection::vec(any::<bool>(), states),
    )
        .prop_map(move |(trans, acc)| {
            let accepting: Vec<usize> = (0..states).filter(|&s| acc[s]).collect();
            Dfa::new(alphabet.clone(), 0, &accepting, trans).unwrap()
        })
}

/// Random CL-1QFA over {a, b} with `q` basis states, `c <= q` outcomes and a
/// `k`-state control DFA.
pub fn cl_qfa(q: usize, c: usize, k: usize) -> impl Strategy<Value = ClQfa> {
    (
        prop::collection::vec(unitary(q), 2),
        unitary(q),
        prop::collection::vec(0..c, q),
        dfa(symbols(c, "c"), k),
    )
        .prop_map(move |(us, v, assign, control)| {
            ClQfa::new(
                Alphabet::new(["a", "b"]).unwrap(),
                0,
                us,
                partition_projectors(&v, c, &assign),
                control,
            )
            .unwrap()
        })
}

pub fn qfac(q: usize, k: usize) -> impl Strategy<Value = QfacAut> {
    (
        prop::collection::vec(prop::collection::vec(unitary(q), 2), k),
        prop::collection::vec(prop::collection::vec(0..k, 2), k),
        prop::collection::vec(prop::collection::vec(any::<bool>(), q), k),
    )
        .prop_map(move |(us, trans, keep)| {
            let projs = keep
                .iter()
                .map(|row| {
                    let d: Vec<f64> = row.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
                    CMatrix::real_diag(&d)
                })
                .collect();
            QfacAut::new(Alphabet::new(["a", "b"]).unwrap(), 0, 0, us, trans, projs).unwrap()
        })
}

/// General measurements `M^c = P_c U` from a unitary and a projective partition.
pub fn qcfa(q: usize, c: usize, k: usize) -> impl Strategy<Value = QcfaAut> {
    let op = (unitary(q), unitary(q), prop::collection::vec(0..c, q)).prop_map(move |(u, v, assign)| {
        partition_projectors(&v, c, &assign)
            .iter()
            .map(|p| p * &u)
            .collect::<Vec<_>>()
    });
    (
        prop::collection::vec(prop::collection::vec(op, 2), k),
        prop::collection::vec(prop::collection::vec(prop::collection::vec(0..k, c), 2), k),
        prop::collection::vec(any::<bool>(), k),
    )
        .prop_map(move |(ms, trans, acc)| {
            let accepting: Vec<usize> = (0..k).filter(|&s| acc[s]).collect();
            QcfaAut::new(
                Alphabet::new(["a", "b"]).unwrap(),
                symbols(c, "o"),
                0,
                0,
                ms,
                trans,
                &accepting,
            )
            .unwrap()
        })
}

/// All words over `k` symbols of length at most `max_len`, shortlex order.
pub fn all_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut level = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for a in 0..k {
                let mut x: Vec<usize> = w.clone();
                x.push(a);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}
