//! Nil-modules and truncated (generalized) Verma modules.

use super::CatError;
use crate::findim::Module;
use crate::linalg::Mat;
use crate::rootdata::{ktilde, RootDatum, Weight};
use crate::scalars::Scalar;
use crate::uqalgebra::{f_component_basis, gradings_upto};
use serde::{Deserialize, Serialize};

/// A weight-graded `U⁺`-module on which words of length `≥ level` act by zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NilModule {
    pub weights: Vec<Weight>,
    pub e: [Mat; 2],
    pub level: usize,
}

impl NilModule {
    /// The one-dimensional `𝒱_a` with trivial `E`-action.
    pub fn one_dim(w: Weight) -> NilModule {
        NilModule { weights: vec![w], e: [Mat::zeros(1, 1), Mat::zeros(1, 1)], level: 1 }
    }

    /// Validates grading and finds the nilpotency level.
    pub fn new(weights: Vec<Weight>, e: [Mat; 2]) -> Result<NilModule, CatError> {
        let n = weights.len();
        for (i, m) in e.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(CatError::Shape(format!("E{i} is {}x{}, expected {n}x{n}", m.rows(), m.cols())));
            }
            for r in 0..n {
                for c in 0..n {
                    if !m.get(r, c).is_zero() && weights[r] != weights[c].plus_root(i, 1) {
                        return Err(CatError::Grading(format!("E{i}[{r},{c}]")));
                    }
                }
            }
        }
        // words of length k span U⁺^k 𝒩; stop at the first k where all vanish
        let mut layer = vec![Mat::identity(n)];
        for level in 0..=n {
            if layer.iter().all(|m| m.is_zero()) {
                return Ok(NilModule { weights, e, level });
            }
            layer = layer.iter().flat_map(|m| [e[0].mul(m), e[1].mul(m)]).filter(|m| !m.is_zero()).collect();
        }
        Err(CatError::NotNilpotent)
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn is_e_killed(&self) -> bool {
        self.e.iter().all(|m| m.is_zero())
    }
}

/// Basis label of a truncation: a basis word of `f_ν` applied to a nil vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VermaLabel {
    pub nu: Vec<u32>,
    pub word: Vec<u8>,
    pub nil: usize,
}

/// `M_n = 𝒩^z / M_(n)`: F-degrees `0..n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VermaTrunc {
    pub nil: NilModule,
    pub n: usize,
    pub module: Module,
    pub labels: Vec<VermaLabel>,
    pub levels: Vec<usize>,
}

impl VermaTrunc {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn level_indices(&self, k: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&r| self.levels[r] == k).collect()
    }

    /// Index of `(ν, basis position, nil)`.
    fn index_of(&self, nu: &[u32], word: &[u8], nil: usize) -> Option<usize> {
        self.labels.iter().position(|l| l.nu == nu && l.word == word && l.nil == nil)
    }
}

fn content(w: &[u8]) -> Vec<u32> {
    let mut c = vec![0u32; 2];
    for &i in w {
        c[i as usize] += 1;
    }
    c
}

fn lower_by(w: Weight, nu: &[u32]) -> Weight {
    w.plus_root(0, -(nu[0] as i32)).plus_root(1, -(nu[1] as i32))
}

/// `[E_i, F_i]` on weight `λ`.
pub(crate) fn cartan_scalar(i: usize, l: Weight, z: &Scalar) -> Scalar {
    let k = ktilde(i, l, z);
    let q = Scalar::qt_pow(4);
    (&k - &k.inv().unwrap()).div(&(&q - &q.inv().unwrap()))
}

/// The truncation `M_n` of `U ⊗_{U_{≥0}} 𝒩` with `Z = z`.
pub fn build_verma(nil: &NilModule, z: &Scalar, n: usize) -> Result<VermaTrunc, CatError> {
    if n == 0 {
        return Err(CatError::Level(0));
    }
    let datum = RootDatum::affine_sl2();
    let mut grads = vec![vec![0u32, 0]];
    grads.extend(gradings_upto(2, (n - 1) as u32));
    let mut labels = Vec::new();
    let mut levels = Vec::new();
    let mut weights = Vec::new();
    for nu in &grads {
        let b = f_component_basis(nu, &datum);
        for k in 0..b.dim() {
            for j in 0..nil.dim() {
                labels.push(VermaLabel { nu: nu.clone(), word: b.basis_word(k).to_vec(), nil: j });
                levels.push(nu.iter().sum::<u32>() as usize);
                weights.push(lower_by(nil.weights[j], nu));
            }
        }
    }
    let dim = labels.len();
    let mut v = VermaTrunc {
        nil: nil.clone(),
        n,
        module: Module { weights, e: [Mat::zeros(dim, dim), Mat::zeros(dim, dim)], f: [Mat::zeros(dim, dim), Mat::zeros(dim, dim)], z: z.clone() },
        labels,
        levels,
    };
    // index lookup by (ν, word) block start
    let block = |v: &VermaTrunc, nu: &[u32]| -> Option<usize> { v.labels.iter().position(|l| l.nu == nu) };
    let nd = nil.dim();
    let mut e = [Mat::zeros(dim, dim), Mat::zeros(dim, dim)];
    let mut f = [Mat::zeros(dim, dim), Mat::zeros(dim, dim)];
    for c in 0..dim {
        let l = v.labels[c].clone();
        let lev = v.levels[c];
        for i in 0..2u8 {
            // F_i: prepend and reduce
            if lev + 1 < n {
                let mut w = vec![i];
                w.extend(&l.word);
                let nu2 = content(&w);
                let b = f_component_basis(&nu2, &datum);
                let start = block(&v, &nu2).expect("grading present");
                for (k, x) in b.reduce(&w).into_iter().enumerate() {
                    if !x.is_zero() {
                        f[i as usize].set(start + k * nd + l.nil, c, x);
                    }
                }
            }
            // E_i: commutators through the word, then E_i on the nil vector
            for p in 0..l.word.len() {
                if l.word[p] != i {
                    continue;
                }
                let suffix = &l.word[p + 1..];
                let wt = lower_by(nil.weights[l.nil], &content(suffix));
                let s = cartan_scalar(i as usize, wt, z);
                let mut w = l.word[..p].to_vec();
                w.extend(suffix);
                let nu2 = content(&w);
                let b = f_component_basis(&nu2, &datum);
                let start = block(&v, &nu2).expect("grading present");
                for (k, x) in b.reduce(&w).into_iter().enumerate() {
                    if !x.is_zero() {
                        let r = start + k * nd + l.nil;
                        let cur = e[i as usize].get(r, c).clone();
                        e[i as usize].set(r, c, &cur + &(&x * &s));
                    }
                }
            }
            for j in 0..nd {
                let x = nil.e[i as usize].get(j, l.nil);
                if !x.is_zero() {
                    let r = v.index_of(&l.nu, &l.word, j).expect("label present");
                    let cur = e[i as usize].get(r, c).clone();
                    e[i as usize].set(r, c, &cur + x);
                }
            }
        }
    }
    v.module.e = e;
    v.module.f = f;
    Ok(v)
}

/// `V^z_a` truncated to `n` levels.
pub fn verma_va(base: Weight, z: &Scalar, n: usize) -> VermaTrunc {
    build_verma(&NilModule::one_dim(base), z, n).expect("one-dimensional nil-module")
}
