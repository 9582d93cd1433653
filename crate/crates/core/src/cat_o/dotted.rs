//! `(V ⊗ X)_n` in the basis `Δ(b)(n ⊗ y)`, `deg b < n`, with its `T_n`.

use super::sugawara::{omega_dual, sugawara_from_omega};
use super::verma::{build_verma, VermaTrunc};
use super::CatError;
use crate::findim::Module;
use crate::linalg::Mat;
use crate::rootdata::Weight;
use crate::scalars::Scalar;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DottedTrunc {
    pub n: usize,
    pub module: Module,
    /// F-degree of `b` for each basis vector.
    pub levels: Vec<usize>,
    pub t: Mat,
    /// `T_n` computed from `Ω_{≤n-1}` and `Ω_{≤n}` agree.
    pub p_independent: bool,
}

impl DottedTrunc {
    pub fn dim(&self) -> usize {
        self.levels.len()
    }
}

/// Truncation `(V ⊗ X)_n` of the product of a (generalized) Verma module and
/// a finite-dimensional module, with `T_n` relative to the base point `a`.
pub fn dotted_tensor(v: &VermaTrunc, x: &Module, n: usize, a: Weight) -> Result<DottedTrunc, CatError> {
    if n == 0 {
        return Err(CatError::Level(0));
    }
    let big_n = 2 * n;
    let vb: VermaTrunc = build_verma(&v.nil, &v.module.z, big_n)?;
    let dx = x.dim();
    let big = vb.module.tensor(x);
    let dim = big.dim();
    // columns Δ(b)(n_j ⊗ y)
    let mut p = Mat::zeros(dim, dim);
    let start_of = |j: usize| vb.labels.iter().position(|l| l.word.is_empty() && l.nil == j).expect("level 0");
    for r in 0..vb.dim() {
        let l = &vb.labels[r];
        for y in 0..dx {
            let mut vec = vec![Scalar::zero(); dim];
            vec[start_of(l.nil) * dx + y] = Scalar::one();
            for &i in l.word.iter().rev() {
                vec = big.f[i as usize].mul_vec(&vec);
            }
            for (k, s) in vec.into_iter().enumerate() {
                if !s.is_zero() {
                    p.set(k, r * dx + y, s);
                }
            }
        }
    }
    let pinv = p.inverse().ok_or(CatError::Singular)?;
    let keep: Vec<usize> = (0..dim).filter(|&c| vb.levels[c / dx] < n).collect();
    let rows_all: Vec<usize> = (0..dim).collect();
    let levels: Vec<usize> = keep.iter().map(|&c| vb.levels[c / dx]).collect();
    let weights: Vec<Weight> = keep.iter().map(|&c| vb.module.weights[c / dx].add(x.weights[c % dx])).collect();
    let pk = p.select(&rows_all, &keep);
    let kcols: Vec<usize> = (0..keep.len()).collect();
    let project = |m: &Mat| -> Mat { pinv.mul(&m.mul(&pk)).select(&keep, &kcols) };
    let vn = build_verma(&v.nil, &v.module.z, n)?;
    let ix = Mat::identity(dx);
    let e = [0, 1].map(|i| project(&big.e[i]));
    let f = [0, 1].map(|i| vn.module.f[i].kron(&ix));
    let module = Module { weights, e, f, z: big.z.clone() };
    let t_of = |pp: usize| -> Result<Mat, CatError> {
        let om = omega_dual(&big, pp);
        Ok(project(&sugawara_from_omega(&big, &om, a)?))
    };
    let t = t_of(n - 1)?;
    let p_independent = t_of(n)? == t;
    Ok(DottedTrunc { n, module, levels, t, p_independent })
}
