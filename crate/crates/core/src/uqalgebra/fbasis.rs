//! Graded pieces `f_ν` of the half algebra, as the free algebra on `θ_i`
//! modulo the radical of Lusztig's form.

use crate::linalg::{Echelon, Mat};
use crate::rootdata::RootDatum;
use crate::scalars::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FSpaceBasis {
    pub nu: Vec<u32>,
    /// All words with content `ν`, lexicographic.
    pub words: Vec<Vec<u8>>,
    pub gram: Mat,
    /// Indices into `words` of the chosen quotient basis `B`.
    pub basis: Vec<usize>,
    /// Row `k` expresses `b*_k` in the basis `B`.
    pub dual: Mat,
    /// `G_BB^{-1}`, used to reduce free words into `B`.
    gbb_inv: Mat,
}

impl FSpaceBasis {
    pub fn free_dim(&self) -> usize {
        self.words.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_word(&self, k: usize) -> &[u8] {
        &self.words[self.basis[k]]
    }

    pub fn word_index(&self, w: &[u8]) -> Option<usize> {
        self.words.binary_search_by(|x| x.as_slice().cmp(w)).ok()
    }

    /// Coordinates of the image of a free word in `f_ν` with respect to `B`.
    pub fn reduce(&self, w: &[u8]) -> Vec<Scalar> {
        let j = self.word_index(w).expect("word content differs from ν");
        let col: Vec<Scalar> = self.basis.iter().map(|&b| self.gram.get(b, j).clone()).collect();
        self.gbb_inv.mul_vec(&col)
    }
}

fn words_of(nu: &[u32]) -> Vec<Vec<u8>> {
    let total: u32 = nu.iter().sum();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(total as usize);
    let mut left = nu.to_vec();
    fn rec(left: &mut Vec<u32>, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>, total: usize) {
        if cur.len() == total {
            out.push(cur.clone());
            return;
        }
        for i in 0..left.len() {
            if left[i] > 0 {
                left[i] -= 1;
                cur.push(i as u8);
                rec(left, cur, out, total);
                cur.pop();
                left[i] += 1;
            }
        }
    }
    rec(&mut left, &mut cur, &mut out, total as usize);
    out
}

struct FormCtx<'a> {
    datum: &'a RootDatum,
    memo: HashMap<(Vec<u8>, Vec<u8>), Scalar>,
}

impl FormCtx<'_> {
    /// `(x, y)` via `(θ_j x', y) = (θ_j, θ_j)(x', _j r(y))`.
    fn form(&mut self, x: &[u8], y: &[u8]) -> Scalar {
        if x.len() != y.len() {
            return Scalar::zero();
        }
        if x.is_empty() {
            return Scalar::one();
        }
        let key = (x.to_vec(), y.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let j = x[0] as usize;
        let qi = self.datum.qi_exp(j);
        let tt = (&Scalar::one() - &Scalar::qt_pow(-2 * qi)).inv().unwrap();
        let mut acc = Scalar::zero();
        let mut e = 0i64;
        for p in 0..y.len() {
            if y[p] as usize == j {
                let mut rest = y[..p].to_vec();
                rest.extend_from_slice(&y[p + 1..]);
                let v = self.form(&x[1..], &rest);
                if !v.is_zero() {
                    acc = &acc + &(&v * &Scalar::qt_pow((4 * e) as i32));
                }
            }
            e += self.datum.dot(y[p] as usize, j);
        }
        let v = &acc * &tt;
        self.memo.insert(key, v.clone());
        v
    }
}

type Cache = Mutex<HashMap<(Vec<Vec<i64>>, Vec<u32>), Arc<FSpaceBasis>>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `f_ν` with its Gram matrix, a quotient basis and the dual basis.
pub fn f_component_basis(nu: &[u32], datum: &RootDatum) -> Arc<FSpaceBasis> {
    let key = (datum.pairing.clone(), nu.to_vec());
    if let Some(b) = cache().lock().unwrap().get(&key) {
        return b.clone();
    }
    let words = words_of(nu);
    let mut ctx = FormCtx { datum, memo: HashMap::new() };
    let n = words.len();
    let mut gram = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = ctx.form(&words[i], &words[j]);
            gram.set(j, i, v.clone());
            gram.set(i, j, v);
        }
    }
    let basis = Echelon::new(gram.clone()).pivots;
    let gbb = gram.select(&basis, &basis);
    let gbb_inv = gbb.inverse().expect("principal Gram block on independent rows is invertible");
    let b = Arc::new(FSpaceBasis { nu: nu.to_vec(), words, gram, basis, dual: gbb_inv.clone(), gbb_inv });
    cache().lock().unwrap().insert(key, b.clone());
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_components() {
        let r = RootDatum::affine_sl2();
        let b = f_component_basis(&[0, 1], &r);
        assert_eq!((b.free_dim(), b.dim()), (1, 1));
        let b = f_component_basis(&[0, 2], &r);
        assert_eq!((b.free_dim(), b.dim()), (1, 1));
        assert!(!b.gram.get(0, 0).is_zero());
        let b = f_component_basis(&[1, 1], &r);
        assert_eq!((b.free_dim(), b.dim()), (2, 2));
    }

    #[test]
    fn serre_degree_has_radical() {
        // θ_1³θ_0 etc: 4 free words, Serre kills one
        let r = RootDatum::affine_sl2();
        let b = f_component_basis(&[1, 3], &r);
        assert_eq!((b.free_dim(), b.dim()), (4, 3));
        let g = b.gram.select(&b.basis, &b.basis);
        assert!(g.mul(&b.dual).is_identity());
    }
}
