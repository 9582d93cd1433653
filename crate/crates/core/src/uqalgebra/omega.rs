//! The truncated quasi-Casimir `Ω_{≤p}` as a dual-basis sum.

use super::fbasis::f_component_basis;
use crate::findim::Module;
use crate::linalg::Mat;
use crate::rootdata::RootDatum;
use crate::scalars::Scalar;
use serde::{Deserialize, Serialize};

/// One summand `c_ν · b⁻ K̃_ν (b*)⁺` of `Ω`; `raise` lists the words of `b*`
/// and the `E`-word of a word `j_1⋯j_L` is `E_{j_L}⋯E_{j_1}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OmegaTerm {
    pub nu: Vec<u32>,
    pub lower: Vec<u8>,
    /// `b*` as a combination of words.
    pub raise: Vec<(Scalar, Vec<u8>)>,
    pub coeff: Scalar,
}

/// `c_ν = q^{Σ ν_i (i·i) - (ν·ν)/2}`.
pub fn omega_coeff(nu: &[u32], datum: &RootDatum) -> Scalar {
    let n = nu.len();
    let mut lin = 0i64;
    let mut quad = 0i64;
    for i in 0..n {
        lin += nu[i] as i64 * datum.dot(i, i);
        for j in 0..n {
            quad += nu[i] as i64 * nu[j] as i64 * datum.dot(i, j);
        }
    }
    Scalar::qt_pow((4 * lin - 2 * quad) as i32)
}

fn gradings(rank: usize, total: u32) -> Vec<Vec<u32>> {
    if rank == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for k in 0..=total {
        for mut rest in gradings(rank - 1, total - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

/// All gradings `ν ≠ 0` with `tr ν ≤ p`, ordered by `tr ν`.
pub fn gradings_upto(rank: usize, p: u32) -> Vec<Vec<u32>> {
    (1..=p).flat_map(|t| gradings(rank, t)).collect()
}

pub fn omega_truncated(p: u32, datum: &RootDatum) -> Vec<OmegaTerm> {
    let mut out = vec![OmegaTerm { nu: vec![0; datum.rank()], lower: vec![], raise: vec![(Scalar::one(), vec![])], coeff: Scalar::one() }];
    for nu in gradings_upto(datum.rank(), p) {
        let b = f_component_basis(&nu, datum);
        let c = omega_coeff(&nu, datum);
        for k in 0..b.dim() {
            let raise = (0..b.dim())
                .filter(|&l| !b.dual.get(k, l).is_zero())
                .map(|l| (b.dual.get(k, l).clone(), b.basis_word(l).to_vec()))
                .collect();
            out.push(OmegaTerm { nu: nu.clone(), lower: b.basis_word(k).to_vec(), raise, coeff: c.clone() });
        }
    }
    out
}

/// Matrix of `Ω_{≤p}` on a module.
pub fn omega_matrix(m: &Module, p: u32, datum: &RootDatum) -> Mat {
    let n = m.dim();
    let mut acc = Mat::identity(n);
    for t in omega_truncated(p, datum).into_iter().skip(1) {
        let mut up = Mat::zeros(n, n);
        for (c, w) in &t.raise {
            // (b*)⁺ is read right to left
            let rev: Vec<u8> = w.iter().rev().copied().collect();
            up = up.add(&m.eword(&rev).scale(c));
        }
        if up.is_zero() {
            continue;
        }
        let kdiag: Vec<Scalar> = (0..n).map(|r| m.kt_nu_eigen(r, &t.nu)).collect();
        let mid = Mat::diag(&kdiag).mul(&up);
        acc = acc.add(&m.fword(&t.lower).mul(&mid).scale(&t.coeff));
    }
    acc
}
