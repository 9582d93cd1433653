//! Feeding a rational braiding fit `S = N/Q` into the solver: with
//! `φ(t) = S(pt)^{-1}S(t)` and `ψ = Id` the normalized solution is
//! `S(t)^{-1}S(0)`, which is compared with the braiding series itself.

use super::{certify_convergence, continue_meromorphic, series_solve, CMat, ConvergenceCertificate, DifferenceSystem, PolyMat, QdiffError};
use crate::braiding::{poly_roots, RationalFit};
use crate::linalg::SerMat;
use crate::scalars::NVARS;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GluingReport {
    pub p: (f64, f64),
    pub certificate: ConvergenceCertificate,
    /// Nearest pole of the fit in `t`.
    pub pole_radius: f64,
    pub inner_radius: f64,
    pub inner_points: usize,
    /// Max relative gap to the braiding series inside `inner_radius`.
    pub inner_discrepancy: f64,
    pub outer_points: usize,
    /// Max relative gap, via continuation, to the fit on an annulus beyond the series disc.
    pub outer_discrepancy: f64,
}

impl GluingReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.inner_discrepancy <= tol && self.outer_discrepancy <= tol
    }
}

fn fit_polys(fit: &RationalFit, at: &[Complex64; NVARS]) -> Result<(PolyMat, Vec<Complex64>), QdiffError> {
    let (r, c) = (fit.num[0].rows(), fit.num[0].cols());
    if r != c {
        return Err(QdiffError::Shape(format!("fit is {r}x{c}")));
    }
    let ev = |s: &crate::scalars::Scalar| s.eval(at).map_err(|e| QdiffError::Parse(e.to_string()));
    let mut num = vec![CMat::zeros(r, r); fit.step * (fit.num.len() - 1) + 1];
    for (k, m) in fit.num.iter().enumerate() {
        for i in 0..r {
            for j in 0..r {
                num[fit.step * k][(i, j)] = ev(m.get(i, j))?;
            }
        }
    }
    let mut den = vec![Complex64::new(0.0, 0.0); fit.step * (fit.den.len() - 1) + 1];
    for (k, d) in fit.den.iter().enumerate() {
        den[fit.step * k] = ev(d)?;
    }
    Ok((PolyMat { coeffs: num }, den))
}

fn ser_eval(s: &[CMat], t: Complex64) -> CMat {
    let n = s[0].nrows();
    s.iter().rev().fold(CMat::zeros(n, n), |acc, m| acc * t + m)
}

fn rel(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// Golden-angle points filling the annulus `r0 ≤ |t| ≤ r1`.
pub fn sample_points(r0: f64, r1: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let x = (k as f64 + 0.5) / count as f64;
            let r = (r0 * r0 + x * (r1 * r1 - r0 * r0)).sqrt();
            Complex64::from_polar(r, 2.399963229728653 * k as f64)
        })
        .collect()
}

pub fn glue_braiding(fit: &RationalFit, series: &SerMat, at: &[Complex64; NVARS], p: Complex64, order: usize) -> Result<GluingReport, QdiffError> {
    let (n_t, q_t) = fit_polys(fit, at)?;
    let d = n_t.size().0;
    let q_poly = PolyMat::scalar(&q_t, d);
    // S(pt)^{-1}S(t) = (Q(t)N(pt))^{-1} Q(pt)N(t)
    let a = q_poly.rescale(p).mul(&n_t);
    let b = q_poly.mul(&n_t.rescale(p));
    let sys = DifferenceSystem::new(a, b, PolyMat::identity(d), p)?;
    let sol = series_solve(&sys, order)?;
    let cert = certify_convergence(&sys, &sol, None);
    let pole_radius = poly_roots(&q_t).iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min);

    let inv = series.inverse().ok_or(QdiffError::SingularAtZero)?;
    let s0 = series.coeffs[0].clone();
    let direct: Vec<CMat> = inv
        .coeffs
        .iter()
        .map(|m| CMat::from_fn(d, d, |i, j| m.get(i, j).eval(at).unwrap_or(Complex64::new(f64::NAN, 0.0))))
        .collect();
    let s0 = CMat::from_fn(d, d, |i, j| s0.get(i, j).eval(at).unwrap_or(Complex64::new(f64::NAN, 0.0)));
    let eval_r = cert.eval_radius();
    // keep the truncation error of the direct series below 1e-12
    let rho = cert.estimated_radius.min(pole_radius);
    let inner_radius = eval_r.min(rho * 1e-12f64.powf(1.0 / series.order() as f64));
    let inner: Vec<Complex64> = sample_points(0.0, inner_radius, 100);
    let inner_discrepancy = inner
        .iter()
        .map(|&t| {
            let want = ser_eval(&direct, t) * &s0;
            match continue_meromorphic(&sys, &sol, eval_r, t).value() {
                Some(v) => rel(v, &want),
                None => f64::INFINITY,
            }
        })
        .fold(0.0, f64::max);

    let fit_at = |t: Complex64| CMat::from_row_slice(d, d, &fit.eval(t, at));
    let f0 = fit_at(Complex64::new(0.0, 0.0));
    let outer_hi = 0.8 * pole_radius.min(cert.holomorphy_radius.max(eval_r));
    let outer: Vec<Complex64> = if outer_hi > eval_r { sample_points(eval_r, outer_hi, 60) } else { vec![] };
    let outer_discrepancy = outer
        .iter()
        .map(|&t| {
            let want = match fit_at(t).try_inverse() {
                Some(x) => x * &f0,
                None => return f64::INFINITY,
            };
            match continue_meromorphic(&sys, &sol, eval_r, t).value() {
                Some(v) => rel(v, &want),
                None => f64::INFINITY,
            }
        })
        .fold(0.0, f64::max);
    Ok(GluingReport {
        p: (p.re, p.im),
        certificate: cert,
        pole_radius,
        inner_radius,
        inner_points: inner.len(),
        inner_discrepancy,
        outer_points: outer.len(),
        outer_discrepancy,
    })
}
