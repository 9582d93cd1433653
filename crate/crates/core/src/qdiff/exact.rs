//! The same recursion over exact scalars.

use super::QdiffError;
use crate::linalg::{Mat, SerMat};
use crate::scalars::Scalar;

fn vec_cols(m: &Mat) -> Vec<Scalar> {
    (0..m.cols()).flat_map(|j| m.col(j)).collect()
}

fn unvec_cols(v: &[Scalar], n: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| v[j * n + i].clone())
}

/// Exact coefficients `f_0..f_{order-1}` for `F(pt)ψ(t) = φ(t)F(t)`,
/// with `φ` given by its Taylor coefficients.
pub fn series_solve_exact(phi: &SerMat, psi: &SerMat, p: &Scalar, order: usize) -> Result<SerMat, QdiffError> {
    let n = phi.rows();
    if phi.cols() != n || psi.rows() != n || psi.cols() != n {
        return Err(QdiffError::Shape(format!("phi {}x{}, psi {}x{}", phi.rows(), phi.cols(), psi.rows(), psi.cols())));
    }
    if phi.order() < order {
        return Err(QdiffError::Shape(format!("phi known to order {}, need {order}", phi.order())));
    }
    let phi0 = &phi.coeffs[0];
    if phi0 != &psi.coeffs[0] {
        return Err(QdiffError::Inconsistent(f64::NAN));
    }
    if phi0.inverse().is_none() {
        return Err(QdiffError::SingularAtZero);
    }
    let id = Mat::identity(n);
    let left = phi0.transpose().kron(&id);
    let right = id.kron(phi0);
    let mut f = vec![Mat::identity(n)];
    for j in 1..order {
        let k = left.scale(&p.pow(j as i32)).sub(&right);
        let mut rhs = Mat::zeros(n, n);
        for kk in 1..=j {
            rhs = rhs.add(&phi.coeffs[kk].mul(&f[j - kk]));
            if kk < psi.order() {
                rhs = rhs.sub(&f[j - kk].mul(&psi.coeffs[kk]).scale(&p.pow((j - kk) as i32)));
            }
        }
        let x = k.solve(&vec_cols(&rhs)).ok_or(QdiffError::Resonance { j })?;
        f.push(unvec_cols(&x, n));
    }
    Ok(SerMat { coeffs: f })
}

/// `F(pt)ψ(t) − φ(t)F(t)` modulo `t^order`, as a count of nonzero entries.
pub fn exact_residual(phi: &SerMat, psi: &SerMat, p: &Scalar, f: &SerMat) -> usize {
    let ord = f.order();
    let lhs = f.scale_t(p).mul(&psi.truncate(ord));
    let rhs = phi.truncate(ord).mul(f);
    lhs.sub(&rhs).coeffs.iter().map(|m| m.nnz()).sum()
}
