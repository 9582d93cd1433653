//! Intertwiner spaces, duality morphisms and the map `φ^{X,Y}_{V,W}`.

use super::{swap, Module};
use crate::linalg::{Echelon, Mat, SerMat};
use crate::rootdata::Weight;
use crate::scalars::Scalar;

/// Generator actions as series in `t` (coefficient of `t^k` at index `k`).
#[derive(Clone, Debug)]
pub struct ActionSet {
    pub gens: Vec<SerMat>,
}

#[derive(Debug, thiserror::Error)]
pub enum HomError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("no solution")]
    NoSolution,
}

/// Weight-compatible `(row, col)` pairs of a map from `src` to `tgt` weights.
pub fn compatible_pairs(src: &[Weight], tgt: &[Weight]) -> Vec<(usize, usize)> {
    let mut p = Vec::new();
    for (r, wt) in tgt.iter().enumerate() {
        for (c, ws) in src.iter().enumerate() {
            if wt == ws {
                p.push((r, c));
            }
        }
    }
    p
}

/// Basis (over the scalar field) of the `A_n`-module of weight-preserving maps
/// `A(t)` with `A ∘ src(g) = tgt(g) ∘ A` mod `t^n` for every generator.
pub fn hom_space_series(
    src: &ActionSet,
    src_w: &[Weight],
    tgt: &ActionSet,
    tgt_w: &[Weight],
    n: usize,
) -> Vec<SerMat> {
    let (ds, dt) = (src_w.len(), tgt_w.len());
    let pairs = compatible_pairs(src_w, tgt_w);
    let np = pairs.len();
    let mut index = std::collections::HashMap::new();
    for (k, &p) in pairs.iter().enumerate() {
        index.insert(p, k);
    }
    let nun = n * np;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (s, t) in src.gens.iter().zip(&tgt.gens) {
        for k in 0..n {
            for r in 0..dt {
                for c in 0..ds {
                    let mut row = vec![Scalar::zero(); nun];
                    let mut any = false;
                    for j in 0..=k {
                        let sm = &s.coeffs[k - j];
                        let tm = &t.coeffs[k - j];
                        // (A_j S)[r,c] = Σ_{c'} A_j[r,c'] S[c',c]
                        for cp in 0..ds {
                            let v = sm.get(cp, c);
                            if v.is_zero() {
                                continue;
                            }
                            if let Some(&u) = index.get(&(r, cp)) {
                                let slot = &mut row[j * np + u];
                                *slot = &*slot + v;
                                any = true;
                            }
                        }
                        // -(T A_j)[r,c] = -Σ_{r'} T[r,r'] A_j[r',c]
                        for rp in 0..dt {
                            let v = tm.get(r, rp);
                            if v.is_zero() {
                                continue;
                            }
                            if let Some(&u) = index.get(&(rp, c)) {
                                let slot = &mut row[j * np + u];
                                *slot = &*slot - v;
                                any = true;
                            }
                        }
                    }
                    if any && row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let ker = if rows.is_empty() {
        (0..nun)
            .map(|u| {
                let mut v = vec![Scalar::zero(); nun];
                v[u] = Scalar::one();
                v
            })
            .collect()
    } else {
        Echelon::new(Mat::from_rows(rows)).kernel()
    };
    ker.into_iter()
        .map(|v| {
            let mut s = SerMat::zeros(dt, ds, n);
            for j in 0..n {
                for (u, &(r, c)) in pairs.iter().enumerate() {
                    let x = &v[j * np + u];
                    if !x.is_zero() {
                        s.coeffs[j].set(r, c, x.clone());
                    }
                }
            }
            s
        })
        .collect()
}

/// Intertwiners `X → Y` (no `t`).
pub fn hom_space(x: &Module, y: &Module) -> Vec<Mat> {
    if x.z != y.z {
        return vec![];
    }
    let act = |m: &Module| ActionSet {
        gens: vec![
            SerMat::constant(m.e[0].clone(), 1),
            SerMat::constant(m.e[1].clone(), 1),
            SerMat::constant(m.f[0].clone(), 1),
            SerMat::constant(m.f[1].clone(), 1),
        ],
    };
    hom_space_series(&act(x), &x.weights, &act(y), &y.weights, 1)
        .into_iter()
        .map(|s| s.coeffs.into_iter().next().unwrap())
        .collect()
}

/// `i_X: 1 → X ⊗ X*`.
pub fn coev(d: usize) -> Mat {
    let mut m = Mat::zeros(d * d, 1);
    for k in 0..d {
        m.set(k * d + k, 0, Scalar::one());
    }
    m
}

/// `e_X: X* ⊗ X → 1`.
pub fn ev(d: usize) -> Mat {
    coev(d).transpose()
}

/// Nonzero-entry counts of the two zig-zag residuals, and whether `i_X`, `e_X`
/// intertwine.
pub fn zigzag_residuals(x: &Module) -> (usize, usize, bool) {
    let d = x.dim();
    let id = Mat::identity(d);
    let z1 = id.kron(&ev(d)).mul(&coev(d).kron(&id)).sub(&id);
    let z2 = ev(d).kron(&id).mul(&id.kron(&coev(d))).sub(&id);
    let xs = x.dual();
    let one = Module::trivial();
    let xxs = x.tensor(&xs);
    let xsx = xs.tensor(x);
    let mut ok = true;
    for i in 0..2 {
        ok &= xxs.e[i].mul(&coev(d)).sub(&coev(d).mul(&one.e[i])).is_zero();
        ok &= xxs.f[i].mul(&coev(d)).sub(&coev(d).mul(&one.f[i])).is_zero();
        ok &= ev(d).mul(&xsx.e[i]).sub(&one.e[i].mul(&ev(d))).is_zero();
        ok &= ev(d).mul(&xsx.f[i]).sub(&one.f[i].mul(&ev(d))).is_zero();
    }
    (z1.nnz(), z2.nnz(), ok)
}

/// `φ^{X,Y}_{V,W}(a)` for `a: V ⊗ X → Y ⊗ W`; returns `Y* ⊗ V → W ⊗ X*`.
pub fn phi_transform(a: &Mat, dv: usize, dx: usize, dy: usize, dw: usize) -> Result<Mat, HomError> {
    if a.rows() != dy * dw || a.cols() != dv * dx {
        return Err(HomError::Shape(format!("expected {}x{}, got {}x{}", dy * dw, dv * dx, a.rows(), a.cols())));
    }
    let iv = Mat::identity(dv);
    let iys = Mat::identity(dy);
    let iw = Mat::identity(dw);
    let ixs = Mat::identity(dx);
    let step1 = iys.kron(&iv).kron(&coev(dx));
    let step2 = iys.kron(a).kron(&ixs);
    let step3 = ev(dy).kron(&iw).kron(&ixs);
    Ok(step3.mul(&step2).mul(&step1))
}

/// Inverse of [`phi_transform`]: `b: Y* ⊗ V → W ⊗ X*` back to `V ⊗ X → Y ⊗ W`.
pub fn phi_inverse(b: &Mat, dv: usize, dx: usize, dy: usize, dw: usize) -> Result<Mat, HomError> {
    if b.rows() != dw * dx || b.cols() != dy * dv {
        return Err(HomError::Shape(format!("expected {}x{}, got {}x{}", dw * dx, dy * dv, b.rows(), b.cols())));
    }
    let iy = Mat::identity(dy);
    let iw = Mat::identity(dw);
    let ivx = Mat::identity(dv * dx);
    let ix = Mat::identity(dx);
    let step1 = coev(dy).kron(&ivx);
    let step2 = iy.kron(b).kron(&ix);
    let step3 = iy.kron(&iw).kron(&ev(dx));
    Ok(step3.mul(&step2).mul(&step1))
}

/// Braiding `V ⊗ X → X ⊗ V` for the finite subalgebra `U_q(sl₂)` generated
/// by `E_1, F_1, K̃_1`: `s = Θ Ξ P` with `Θ = Σ a_k F_1^k ⊗ E_1^k`, `a_0 = 1`.
pub fn finite_braiding(v: &Module, x: &Module) -> Result<Mat, HomError> {
    let (dv, dx) = (v.dim(), x.dim());
    let p = swap(dv, dx);
    let xv = x.tensor(v);
    let vx = v.tensor(x);
    let base = x.xi(v).mul(&p);
    let kmax = dv.min(dx);
    let mut pieces = Vec::new();
    let mut fk = Mat::identity(dx);
    let mut ek = Mat::identity(dv);
    for _ in 0..kmax {
        pieces.push(fk.kron(&ek).mul(&base));
        fk = fk.mul(&x.f[1]);
        ek = ek.mul(&v.e[1]);
    }
    // unknowns a_1..a_{k-1}; equations s ρ_{V⊗X}(g) = ρ_{X⊗V}(g) s for g = E_1, F_1
    let nk = pieces.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (gs, gt) in [(&vx.e[1], &xv.e[1]), (&vx.f[1], &xv.f[1])] {
        let res: Vec<Mat> = pieces.iter().map(|pc| pc.mul(gs).sub(&gt.mul(pc))).collect();
        for r in 0..dv * dx {
            for c in 0..dv * dx {
                let row: Vec<Scalar> = (1..nk).map(|k| res[k].get(r, c).clone()).collect();
                let b = res[0].get(r, c).neg();
                if row.iter().any(|s| !s.is_zero()) || !b.is_zero() {
                    rows.push(row);
                    rhs.push(b);
                }
            }
        }
    }
    let mut s = pieces[0].clone();
    if nk > 1 {
        let a = Mat::from_rows(rows).solve(&rhs).ok_or(HomError::NoSolution)?;
        for k in 1..nk {
            s = s.add(&pieces[k].scale(&a[k - 1]));
        }
    } else if rows.iter().zip(&rhs).any(|(_, b)| !b.is_zero()) {
        return Err(HomError::NoSolution);
    }
    Ok(s)
}
