//! The quasi-R-matrix `Θ = Σ_ν (-1)^{tr ν} v_ν Σ_b b⁻ ⊗ (b*)⁺` and the
//! braidings `s_{V',V''} = Θ Ξ σ (𝓛 ⊗ 𝓛)` built from it.

use crate::findim::{swap, Module};
use crate::linalg::{Mat, SerMat};
use crate::rootdata::RootDatum;
use crate::scalars::Scalar;
use crate::uqalgebra::{f_component_basis, gradings_upto};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaConv {
    pub reverse: bool,
    /// `v_ν = q^{sign·tr ν}`.
    pub sign: i32,
}

pub const THETA_CONV: ThetaConv = ThetaConv { reverse: false, sign: 1 };

/// `Θ` on `A ⊗ B` (lowering part on `A`, raising part on `B`) for
/// `tr ν ≤ max_deg`. With `psi = Some(n)` each raising letter carries `t²`
/// and the result is truncated at `tⁿ`; otherwise the series has order 1.
pub fn theta_with(a: &Module, b: &Module, max_deg: u32, psi: Option<usize>, conv: ThetaConv) -> SerMat {
    let datum = RootDatum::affine_sl2();
    let order = psi.unwrap_or(1);
    let dim = a.dim() * b.dim();
    let mut out = SerMat::constant(Mat::identity(dim), order);
    for nu in gradings_upto(2, max_deg) {
        let tr: u32 = nu.iter().sum();
        let deg = if psi.is_some() { 2 * tr as usize } else { 0 };
        if deg >= order {
            continue;
        }
        let basis = f_component_basis(&nu, &datum);
        let sgn = if tr % 2 == 0 { 1 } else { -1 };
        let c = &Scalar::from_int(sgn) * &Scalar::qt_pow(4 * conv.sign * tr as i32);
        let mut acc = Mat::zeros(dim, dim);
        for k in 0..basis.dim() {
            let low = a.fword(basis.basis_word(k));
            if low.is_zero() {
                continue;
            }
            let mut up = Mat::zeros(b.dim(), b.dim());
            for l in 0..basis.dim() {
                let x = basis.dual.get(k, l);
                if x.is_zero() {
                    continue;
                }
                let w = basis.basis_word(l);
                let w: Vec<u8> = if conv.reverse { w.iter().rev().copied().collect() } else { w.to_vec() };
                up = up.add(&b.eword(&w).scale(x));
            }
            if !up.is_zero() {
                acc = acc.add(&low.kron(&up));
            }
        }
        if !acc.is_zero() {
            out.coeffs[deg] = out.coeffs[deg].add(&acc.scale(&c));
        }
    }
    out
}

pub fn theta(a: &Module, b: &Module, max_deg: u32, psi: Option<usize>) -> SerMat {
    theta_with(a, b, max_deg, psi, THETA_CONV)
}

/// `Ξ σ` from `X ⊗ Y` to `Y ⊗ X`: swap, then `q^{-[λ_Y, λ_X]}`.
pub fn xi_sigma_plain(x: &Module, y: &Module) -> Mat {
    y.xi(x).mul(&swap(x.dim(), y.dim()))
}

fn l_diag(x: &Module, u: &Scalar) -> Mat {
    Mat::diag(&x.weights.iter().map(|w| u.pow(w.off)).collect::<Vec<_>>())
}

/// `s_{V,X}: V ⊗ X → T_z(X) ⊗ V` for `V` with `Z = z` and finite `X`.
/// `max_deg` must bound the length of nonzero `E`-words on `V`.
pub fn s_verma_finite(v: &Module, x: &Module, max_deg: u32) -> Mat {
    let xt = x.twist(&v.z, false);
    let th = theta(&xt, v, max_deg, None).coeffs.swap_remove(0);
    let l = Mat::identity(v.dim()).kron(&l_diag(x, &v.z));
    th.mul(&x.xi(v)).mul(&swap(v.dim(), x.dim())).mul(&l)
}

/// `s_{X[t],W}: T_{z_W⁻¹}(X)[t] ⊗ W → W ⊗ X[t]` mod `tⁿ` for finite `X`.
pub fn s_finite_lower(x: &Module, w: &Module, n: usize) -> SerMat {
    let th = theta(w, x, (n.saturating_sub(1) / 2) as u32, Some(n));
    let l = l_diag(x, &w.z).kron(&Mat::identity(w.dim()));
    th.mul(&SerMat::constant(w.xi(x).mul(&swap(x.dim(), w.dim())).mul(&l), n))
}
