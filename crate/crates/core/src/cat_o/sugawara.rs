//! Sugawara operators `T = 𝓛_{(Zq̃²)^{-2}} Ω G` on truncations, their
//! intertwining identities and spectra.

use super::CatError;
use crate::findim::Module;
use crate::linalg::Mat;
use crate::rootdata::{pairing, RootDatum, Weight};
use crate::scalars::{Scalar, QT};
use crate::uqalgebra::omega_matrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OmegaRoute {
    /// `Ω(F_i v) = F_i K̃_i Ω K̃_i v`, `Ω = 1` on the generating `E`-killed vectors.
    Recursion,
    /// Dual-basis sum over `f_ν`.
    DualBasis,
}

/// `G^a(λ)` for `λ = a + kω`.
pub fn g_value(l: Weight, a: Weight) -> Result<Scalar, CatError> {
    if l.base != a.base {
        return Err(CatError::Fiber(l, a));
    }
    let k = l.off - a.off;
    let p = pairing(a.add(Weight::omega(1)), Weight::omega(k)).map_err(|_| CatError::Fiber(l, a))?;
    Ok(&p.pow(2) * &Scalar::qt_pow(2 * k * k))
}

/// `𝓛^a_u(λ) = u^k` for `λ = a + kω`.
pub fn l_value(l: Weight, a: Weight, u: &Scalar) -> Result<Scalar, CatError> {
    if l.base != a.base {
        return Err(CatError::Fiber(l, a));
    }
    Ok(u.pow(l.off - a.off))
}

/// `(Z q̃^{h∨})^{-2}` with `Z = z`.
pub fn sugawara_u(z: &Scalar) -> Scalar {
    (z * &Scalar::qt_pow(2)).pow(-2)
}

fn diag_of(m: &Module, f: impl Fn(Weight) -> Result<Scalar, CatError>) -> Result<Mat, CatError> {
    Ok(Mat::diag(&m.weights.iter().map(|w| f(*w)).collect::<Result<Vec<_>, _>>()?))
}

/// `Ω` via the recursion. `levels[r]` is the F-degree of basis vector `r`;
/// `words[r]` its leading letter and tail coordinates are taken from `lower`.
pub(crate) fn omega_recursion(m: &Module, levels: &[usize], generated: &dyn Fn(usize) -> Option<(u8, Vec<Scalar>)>) -> Mat {
    let n = m.dim();
    let mut om = Mat::zeros(n, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&r| levels[r]);
    for c in order {
        match generated(c) {
            None => om.set(c, c, Scalar::one()),
            Some((i, tail)) => {
                // Ω(F_i x) = F_i K̃_i Ω K̃_i x
                let k: Vec<Scalar> = (0..n).map(|r| m.kt_eigen(i as usize, r)).collect();
                let x: Vec<Scalar> = tail.iter().zip(&k).map(|(a, b)| a * b).collect();
                let y = om.mul_vec(&x);
                let y: Vec<Scalar> = y.iter().zip(&k).map(|(a, b)| a * b).collect();
                let col = m.f[i as usize].mul_vec(&y);
                for (r, v) in col.into_iter().enumerate() {
                    if !v.is_zero() {
                        om.set(r, c, v);
                    }
                }
            }
        }
    }
    om
}

/// `T = 𝓛 Ω G` from a given `Ω`.
pub fn sugawara_from_omega(m: &Module, omega: &Mat, a: Weight) -> Result<Mat, CatError> {
    let g = diag_of(m, |w| g_value(w, a))?;
    let u = sugawara_u(&m.z);
    let l = diag_of(m, |w| l_value(w, a, &u))?;
    Ok(l.mul(omega).mul(&g))
}

/// `Ω_{≤p}` by the dual-basis route.
pub fn omega_dual(m: &Module, p: usize) -> Mat {
    omega_matrix(m, p as u32, &RootDatum::affine_sl2())
}

/// Intertwining residuals of `T`: `T E_i = (zq̃²)^{-4} E_i T`, `T F_i = q₁ F_i T`.
/// With `levels = Some((lv, top))` the `E` checks compare rows of level
/// `≤ top` only: `E` does not preserve `M_(n)`, so on a truncation the
/// identity holds modulo `M_(n-1)`.
pub fn intertwining_residuals(m: &Module, t: &Mat, levels: Option<(&[usize], usize)>) -> Vec<(String, usize)> {
    let c = (&m.z * &Scalar::qt_pow(2)).pow(4);
    let ci = c.inv().unwrap();
    let rows: Vec<usize> = match levels {
        None => (0..m.dim()).collect(),
        Some((lv, top)) => (0..m.dim()).filter(|&r| lv[r] <= top).collect(),
    };
    let cols: Vec<usize> = (0..m.dim()).collect();
    let mut out = Vec::new();
    for i in 0..2 {
        let re = t.mul(&m.e[i]).sub(&m.e[i].mul(t).scale(&ci)).select(&rows, &cols);
        out.push((format!("T E{i}"), re.nnz()));
        let rf = t.mul(&m.f[i]).sub(&m.f[i].mul(t).scale(&c));
        out.push((format!("T F{i}"), rf.nnz()));
    }
    out
}

/// `Ť_W = (T_{ωW})^{-1}` given `T` on `ωW`.
pub fn t_check(t_omega: &Mat) -> Result<Mat, CatError> {
    t_omega.inverse().ok_or(CatError::Singular)
}

/// Residuals of `Ť E_i = (zq̃^{-2})^{4} E_i Ť`, `Ť F_i = (zq̃^{-2})^{-4} F_i Ť` on `W`.
pub fn t_check_residuals(w: &Module, tc: &Mat) -> Vec<(String, usize)> {
    let c = (&w.z * &Scalar::qt_pow(-2)).pow(4);
    let ci = c.inv().unwrap();
    let mut out = Vec::new();
    for i in 0..2 {
        out.push((format!("Ť E{i}"), tc.mul(&w.e[i]).sub(&w.e[i].mul(tc).scale(&c)).nnz()));
        out.push((format!("Ť F{i}"), tc.mul(&w.f[i]).sub(&w.f[i].mul(tc).scale(&ci)).nnz()));
    }
    out
}

/// Eigenvalues of `T` grouped by level: `spectrum[k]` is `L_{k+1}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    pub levels: Vec<Vec<(Scalar, usize)>>,
}

/// Reads eigenvalues off the diagonal blocks of the level filtration. Each
/// block must be triangular in basis order.
pub fn spectrum(t: &Mat, levels: &[usize]) -> Result<Spectrum, CatError> {
    let top = levels.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    for k in 0..=top {
        let idx: Vec<usize> = (0..levels.len()).filter(|&r| levels[r] == k).collect();
        let b = t.select(&idx, &idx);
        let n = idx.len();
        let upper = (0..n).all(|r| (0..r).all(|c| b.get(r, c).is_zero()));
        let lower = (0..n).all(|r| (r + 1..n).all(|c| b.get(r, c).is_zero()));
        if !upper && !lower {
            return Err(CatError::NonTriangular(k));
        }
        let mut ev: Vec<(Scalar, usize)> = Vec::new();
        for r in 0..n {
            let x = b.get(r, r).clone();
            match ev.iter_mut().find(|(y, _)| *y == x) {
                Some(e) => e.1 += 1,
                None => ev.push((x, 1)),
            }
        }
        out.push(ev);
    }
    Ok(Spectrum { levels: out })
}

impl Spectrum {
    /// `k` with `ℓ = (z^d q)^{2k} = z^{4k} q̃^{8k}`, if `ℓ` lies on that grid.
    pub fn grid_index(l: &Scalar, z: &Scalar) -> Option<i32> {
        let (sign, e) = l.as_unit_monomial()?;
        if sign != 1 || e[QT] % 8 != 0 {
            return None;
        }
        let k = e[QT] / 8;
        let g = (z * &Scalar::qt_pow(2)).pow(4 * k);
        (*l == g).then_some(k)
    }

    pub fn on_grid(&self, z: &Scalar) -> bool {
        self.levels.iter().flatten().all(|(l, _)| Spectrum::grid_index(l, z).is_some_and(|k| k >= 0))
    }

    /// `L_{n+1} ⊆ ∪_{n≤k≤3n} q₁^k L_1` for every level present.
    pub fn inclusion_holds(&self, z: &Scalar) -> bool {
        let q1 = (z * &Scalar::qt_pow(2)).pow(4);
        let l1: Vec<&Scalar> = self.levels[0].iter().map(|(l, _)| l).collect();
        self.levels.iter().enumerate().skip(1).all(|(n, ln)| {
            ln.iter().all(|(l, _)| (n..=3 * n).any(|k| l1.iter().any(|b| *l == &q1.pow(k as i32) * *b)))
        })
    }
}
