//! Weight modules with explicit generator matrices, and the rigid
//! category of finite-dimensional ones.

mod hom;
mod relations;

pub use hom::{
    coev, compatible_pairs, ev, finite_braiding, hom_space, hom_space_series, phi_inverse, phi_transform, zigzag_residuals, ActionSet,
    HomError,
};
pub use relations::{check_relations, RelationReport};

use crate::linalg::{Mat, SerMat};
use crate::rootdata::{ktilde, pairing, Weight};
use crate::scalars::{qint, Scalar};
use crate::uqalgebra::Gen;
use serde::{Deserialize, Serialize};

/// A weight-graded module: `K_μ` acts diagonally through the weights, `Z` by `z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Module {
    pub weights: Vec<Weight>,
    pub e: [Mat; 2],
    pub f: [Mat; 2],
    pub z: Scalar,
}

pub type FinModule = Module;

#[derive(Debug, thiserror::Error)]
pub enum ModuleError {
    #[error("relation check failed: {0}")]
    Relations(String),
    #[error("no nonzero solution for the E0/F0 pattern")]
    NoSolution,
}

impl Module {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// The trivial module `1`.
    pub fn trivial() -> Module {
        Module {
            weights: vec![Weight::ZERO],
            e: [Mat::zeros(1, 1), Mat::zeros(1, 1)],
            f: [Mat::zeros(1, 1), Mat::zeros(1, 1)],
            z: Scalar::one(),
        }
    }

    pub fn kt_eigen(&self, i: usize, row: usize) -> Scalar {
        ktilde(i, self.weights[row], &self.z)
    }

    /// `∏ K̃_i^{ν_i}` on basis vector `row`.
    pub fn kt_nu_eigen(&self, row: usize, nu: &[u32]) -> Scalar {
        let mut s = Scalar::one();
        for (i, &k) in nu.iter().enumerate() {
            if k > 0 {
                s = &s * &self.kt_eigen(i, row).pow(k as i32);
            }
        }
        s
    }

    pub fn kt(&self, i: usize, e: i32) -> Mat {
        Mat::diag(&(0..self.dim()).map(|r| self.kt_eigen(i, r).pow(e)).collect::<Vec<_>>())
    }

    pub fn gen(&self, g: Gen) -> Mat {
        match g {
            Gen::E(i) => self.e[i as usize].clone(),
            Gen::F(i) => self.f[i as usize].clone(),
            Gen::K(a, b) => Mat::diag(
                &(0..self.dim())
                    .map(|r| &self.kt_eigen(0, r).pow(a) * &self.kt_eigen(1, r).pow(b))
                    .collect::<Vec<_>>(),
            ),
            Gen::Z(e) => Mat::identity(self.dim()).scale(&self.z.pow(e)),
        }
    }

    /// Matrix of a word `g_1 g_2 ⋯ g_k` (rightmost acts first).
    pub fn word(&self, w: &[Gen]) -> Mat {
        let mut m = Mat::identity(self.dim());
        for g in w {
            m = m.mul(&self.gen(*g));
        }
        m
    }

    pub fn eword(&self, w: &[u8]) -> Mat {
        let mut m = Mat::identity(self.dim());
        for &i in w {
            m = m.mul(&self.e[i as usize]);
        }
        m
    }

    pub fn fword(&self, w: &[u8]) -> Mat {
        let mut m = Mat::identity(self.dim());
        for &i in w {
            m = m.mul(&self.f[i as usize]);
        }
        m
    }

    /// `X ⊗ Y` via `Δ(E) = E⊗1 + K̃⊗E`, `Δ(F) = F⊗K̃⁻¹ + 1⊗F`.
    pub fn tensor(&self, o: &Module) -> Module {
        let weights = self.weights.iter().flat_map(|a| o.weights.iter().map(move |b| a.add(*b))).collect();
        let ia = Mat::identity(self.dim());
        let ib = Mat::identity(o.dim());
        let e = [0, 1].map(|i| self.e[i].kron(&ib).add(&self.kt(i, 1).kron(&o.e[i])));
        let f = [0, 1].map(|i| self.f[i].kron(&o.kt(i, -1)).add(&ia.kron(&o.f[i])));
        Module { weights, e, f, z: &self.z * &o.z }
    }

    /// `X*` with `ρ(S(h))^T`.
    pub fn dual(&self) -> Module {
        let weights = self.weights.iter().map(|w| w.neg()).collect();
        let e = [0, 1].map(|i| self.e[i].transpose().mul(&self.kt(i, -1)).neg());
        let f = [0, 1].map(|i| self.kt(i, 1).mul(&self.f[i].transpose()).neg());
        Module { weights, e, f, z: self.z.inv().unwrap() }
    }

    /// `ωM`: same space, `E ↔ F`, weights negated, `z ↦ z⁻¹`.
    pub fn omega_twist(&self) -> Module {
        Module {
            weights: self.weights.iter().map(|w| w.neg()).collect(),
            e: self.f.clone(),
            f: self.e.clone(),
            z: self.z.inv().unwrap(),
        }
    }

    /// `T_u(X)` (through `ψ_u`) or `T^φ_u(X)` (through `φ_u`).
    pub fn twist(&self, u: &Scalar, phi: bool) -> Module {
        let mut m = self.clone();
        if phi {
            m.e[0] = m.e[0].scale(&u.pow(4));
            m.f[0] = m.f[0].scale(&u.pow(-4));
        } else {
            for i in 0..2 {
                m.e[i] = m.e[i].scale(&u.pow(2));
                m.f[i] = m.f[i].scale(&u.pow(-2));
            }
        }
        m
    }

    /// Action series of `X[t]` on the generators `E_i`, `Φ_i = t²F_i` (orders `< n`).
    pub fn gamma_twisted(&self, n: usize) -> ActionSet {
        let mut gens = Vec::new();
        for i in 0..2 {
            gens.push(SerMat::monomial(self.e[i].clone(), 2, n));
        }
        for i in 0..2 {
            gens.push(SerMat::constant(self.f[i].clone(), n));
        }
        ActionSet { gens }
    }

    /// Action series of an untwisted module on `E_i`, `Φ_i = t²F_i`.
    pub fn gamma_plain(&self, n: usize) -> ActionSet {
        let mut gens = Vec::new();
        for i in 0..2 {
            gens.push(SerMat::constant(self.e[i].clone(), n));
        }
        for i in 0..2 {
            gens.push(SerMat::monomial(self.f[i].clone(), 2, n));
        }
        ActionSet { gens }
    }

    /// The `(λ, μ)` block factor `q^{-[λ̄, μ̄]}` for `self ⊗ o`, as a diagonal matrix.
    pub fn xi(&self, o: &Module) -> Mat {
        let d: Vec<Scalar> = self
            .weights
            .iter()
            .flat_map(|a| o.weights.iter().map(move |b| pairing(*a, *b).expect("declared pairing").inv().unwrap()))
            .collect();
        Mat::diag(&d)
    }

    /// Weight multiset.
    pub fn weight_multiset(&self) -> std::collections::BTreeMap<Weight, usize> {
        let mut m = std::collections::BTreeMap::new();
        for w in &self.weights {
            *m.entry(*w).or_insert(0) += 1;
        }
        m
    }

    /// Basis indices of weight `w`.
    pub fn weight_space(&self, w: Weight) -> Vec<usize> {
        (0..self.dim()).filter(|&r| self.weights[r] == w).collect()
    }
}

/// Permutation `x ⊗ y ↦ y ⊗ x` from `X ⊗ Y` to `Y ⊗ X`.
pub fn swap(dx: usize, dy: usize) -> Mat {
    let mut m = Mat::zeros(dx * dy, dx * dy);
    for a in 0..dx {
        for b in 0..dy {
            m.set(b * dx + a, a * dy + b, Scalar::one());
        }
    }
    m
}

/// The `(m+1)`-dimensional evaluation module at spectral point 1.
///
/// The finite part is the standard `U_q(sl₂)` module; `E₀`, `F₀` are found by
/// solving the relations on the prescribed weight pattern.
pub fn build_simple(m: usize) -> Result<Module, ModuleError> {
    let n = m + 1;
    let weights: Vec<Weight> = (0..n).map(|k| Weight::omega(m as i32 - 2 * k as i32)).collect();
    let mut e1 = Mat::zeros(n, n);
    let mut f1 = Mat::zeros(n, n);
    for k in 0..n {
        if k + 1 < n {
            f1.set(k + 1, k, qint(k as i64 + 1, 4));
        }
        if k > 0 {
            e1.set(k - 1, k, qint((m - k + 1) as i64, 4));
        }
    }
    // E0 lowers like F1: unknown x_k on v_k -> v_{k+1}; impose [E0, F1] = 0.
    let pattern_down = |x: &[Scalar]| {
        let mut a = Mat::zeros(n, n);
        for k in 0..n - 1 {
            a.set(k + 1, k, x[k].clone());
        }
        a
    };
    let pattern_up = |y: &[Scalar]| {
        let mut a = Mat::zeros(n, n);
        for k in 1..n {
            a.set(k - 1, k, y[k - 1].clone());
        }
        a
    };
    let e0 = if m == 0 {
        Mat::zeros(1, 1)
    } else {
        let sys = linear_system(m, |x| pattern_down(x).commutator(&f1));
        let ker = sys.kernel();
        if ker.len() != 1 {
            return Err(ModuleError::NoSolution);
        }
        // normalise the spectral point: first entry 1
        let v = &ker[0];
        let piv = v.iter().position(|x| !x.is_zero()).ok_or(ModuleError::NoSolution)?;
        let c = v[piv].inv().unwrap();
        let x: Vec<Scalar> = v.iter().map(|s| s * &c).collect();
        pattern_down(&x)
    };
    let mut module = Module { weights, e: [e0.clone(), e1.clone()], f: [Mat::zeros(n, n), f1.clone()], z: Scalar::one() };
    if m > 0 {
        // F0 raises like E1: [E1, F0] = 0 fixes it up to scale, [E0, F0] fixes the scale.
        let ker = linear_system(m, |y| e1.commutator(&pattern_up(y))).kernel();
        if ker.len() != 1 {
            return Err(ModuleError::NoSolution);
        }
        let f0 = pattern_up(&ker[0]);
        let lhs = e0.commutator(&f0);
        let q = Scalar::qt_pow(4);
        let rhs = module.kt(0, 1).sub(&module.kt(0, -1)).scale(&(&q - &q.inv().unwrap()).inv().unwrap());
        let (r, c) = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .find(|&(r, c)| !lhs.get(r, c).is_zero())
            .ok_or(ModuleError::NoSolution)?;
        let y = rhs.get(r, c) / lhs.get(r, c);
        module.f[0] = f0.scale(&y);
    }
    let rep = check_relations(&module, None);
    if !rep.all_pass() {
        return Err(ModuleError::Relations(rep.failures().join(", ")));
    }
    Ok(module)
}

/// Coefficient matrix of a linear map `x ↦ L(x)` from `Scalar^k` to matrices.
fn linear_system(k: usize, l: impl Fn(&[Scalar]) -> Mat) -> Mat {
    let mut cols = Vec::with_capacity(k);
    for j in 0..k {
        let mut x = vec![Scalar::zero(); k];
        x[j] = Scalar::one();
        let m = l(&x);
        let mut v = Vec::new();
        for r in 0..m.rows() {
            v.extend(m.row(r).iter().cloned());
        }
        cols.push(v);
    }
    let rows = cols[0].len();
    Mat::from_fn(rows, k, |r, c| cols[c][r].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v1_shape() {
        let v = build_simple(1).unwrap();
        assert_eq!(v.dim(), 2);
        assert_eq!(v.weights, vec![Weight::omega(1), Weight::omega(-1)]);
        assert!(v.e[1].mul(&v.e[1]).is_zero());
        assert!(v.z.is_one());
    }

    #[test]
    fn double_dual_is_twist() {
        let v = build_simple(2).unwrap();
        let dd = v.dual().dual();
        let t = v.twist(&Scalar::qt_pow(-4), false);
        assert_eq!(dd.e, t.e);
        assert_eq!(dd.f, t.f);
    }
}
