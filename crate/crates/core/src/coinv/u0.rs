//! `U₀`-coinvariants of a product of weight-graded spaces.

use crate::linalg::Mat;
use crate::rootdata::{pairing, Weight};
use crate::scalars::Scalar;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct U0Coinv {
    pub dims: Vec<usize>,
    /// Multi-indices of the weight-zero basis tensors.
    pub basis: Vec<Vec<usize>>,
    /// `dim - rank` of the stacked `(K_ω - 1, K̃_1 - 1)` image.
    pub rank_check: usize,
}

impl U0Coinv {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn consistent(&self) -> bool {
        self.rank_check == self.basis.len()
    }
}

fn multi_indices(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &d in dims {
        out = out.into_iter().flat_map(|v| (0..d).map(move |k| {
            let mut w = v.clone();
            w.push(k);
            w
        })).collect();
    }
    out
}

/// Weight matching on `⊗ factors`; the quotient by `K_μ - 1` keeps exactly
/// the total-weight-zero tensors.
pub fn u0_coinvariants(factors: &[&[Weight]]) -> U0Coinv {
    let dims: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let all = multi_indices(&dims);
    let total = |ix: &[usize]| ix.iter().enumerate().fold(Weight::ZERO, |acc, (j, &k)| acc.add(factors[j][k]));
    let basis: Vec<Vec<usize>> = all.iter().filter(|ix| total(ix) == Weight::ZERO).cloned().collect();
    // exact cross-check: K_ω - 1 sees the base symbols, K̃_1 - 1 the ω-offset
    let n = all.len();
    let mut m = Mat::zeros(2 * n, n);
    for (c, ix) in all.iter().enumerate() {
        let w = total(ix);
        let k_om = pairing(Weight::omega(1), w).expect("ω pairs with every weight");
        let k_1 = pairing(Weight::omega(2), w).expect("α pairs with every weight");
        m.set(c, c, &k_om - &Scalar::one());
        m.set(n + c, c, &k_1 - &Scalar::one());
    }
    let rank_check = n - m.rank();
    U0Coinv { dims, basis, rank_check }
}
