//! Matrix q-difference equations `F(pt)ψ(t) = φ(t)F(t)` with `F(0) = Id`.
//!
//! `φ` is stored as a left matrix fraction `B(t)^{-1}A(t)` and `ψ` as a
//! polynomial matrix, so the equation reads `B(t)F(pt)ψ(t) = A(t)F(t)`.

mod exact;
mod glue;
mod load;

pub use exact::{exact_residual, series_solve_exact};
pub use glue::{glue_braiding, GluingReport};
pub use load::{load_system, parse_system, SystemSpec};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type CMat = DMatrix<Complex64>;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QdiffError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("modulus |p| = {0} outside (0, 1)")]
    Modulus(f64),
    #[error("phi is singular or has a pole at t = 0")]
    SingularAtZero,
    #[error("phi(0) and psi(0) differ by {0:e}")]
    Inconsistent(f64),
    #[error("resonance at order {j}: p^{j} M phi(0) - phi(0) M is singular")]
    Resonance { j: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// `Σ_k C_k t^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMat {
    pub coeffs: Vec<CMat>,
}

impl PolyMat {
    pub fn constant(m: CMat) -> PolyMat {
        PolyMat { coeffs: vec![m] }
    }

    pub fn identity(n: usize) -> PolyMat {
        PolyMat::constant(CMat::identity(n, n))
    }

    /// `c(t)·Id`.
    pub fn scalar(c: &[Complex64], n: usize) -> PolyMat {
        PolyMat { coeffs: c.iter().map(|x| CMat::identity(n, n) * *x).collect() }
    }

    pub fn size(&self) -> (usize, usize) {
        self.coeffs.first().map_or((0, 0), |m| m.shape())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|m| m.iter().any(|x| x.norm() > 0.0)).unwrap_or(0)
    }

    pub fn eval(&self, t: Complex64) -> CMat {
        let (r, c) = self.size();
        let mut acc = CMat::zeros(r, c);
        for m in self.coeffs.iter().rev() {
            acc = acc * t + m;
        }
        acc
    }

    pub fn coeff(&self, k: usize) -> Option<&CMat> {
        self.coeffs.get(k)
    }

    /// `C(ct)`.
    pub fn rescale(&self, c: Complex64) -> PolyMat {
        let mut p = C1;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for m in &self.coeffs {
            out.push(m * p);
            p *= c;
        }
        PolyMat { coeffs: out }
    }

    pub fn mul(&self, o: &PolyMat) -> PolyMat {
        let (r, _) = self.size();
        let (_, c) = o.size();
        let mut out = vec![CMat::zeros(r, c); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyMat { coeffs: out }
    }
}

fn op_norm(m: &CMat) -> f64 {
    m.clone().singular_values().max()
}

fn min_sv_ratio(m: &CMat) -> f64 {
    let s = m.clone().singular_values();
    let hi = s.max();
    if hi == 0.0 {
        return 0.0;
    }
    s.min() / hi.max(1.0)
}

/// `B(t)F(pt)ψ(t) = A(t)F(t)`.
#[derive(Debug, Clone)]
pub struct DifferenceSystem {
    pub n: usize,
    pub phi_num: PolyMat,
    pub phi_den: PolyMat,
    pub psi: PolyMat,
    pub p: Complex64,
}

impl DifferenceSystem {
    pub fn new(phi_num: PolyMat, phi_den: PolyMat, psi: PolyMat, p: Complex64) -> Result<DifferenceSystem, QdiffError> {
        let n = phi_num.size().0;
        for (name, m) in [("phi numerator", &phi_num), ("phi denominator", &phi_den), ("psi", &psi)] {
            if m.size() != (n, n) || m.coeffs.is_empty() {
                return Err(QdiffError::Shape(format!("{name} is {:?}, expected {n}x{n}", m.size())));
            }
        }
        if !(p.norm() > 0.0 && p.norm() < 1.0) {
            return Err(QdiffError::Modulus(p.norm()));
        }
        let b0 = phi_den.eval(C0);
        let a0 = phi_num.eval(C0);
        if min_sv_ratio(&b0) < 1e-12 || min_sv_ratio(&a0) < 1e-12 {
            return Err(QdiffError::SingularAtZero);
        }
        let sys = DifferenceSystem { n, phi_num, phi_den, psi, p };
        let phi0 = sys.phi(C0).unwrap();
        let d = (&phi0 - sys.psi.eval(C0)).norm() / phi0.norm().max(1.0);
        if d > 1e-10 {
            return Err(QdiffError::Inconsistent(d));
        }
        Ok(sys)
    }

    /// Scalar system `φ = num/den`, `ψ = psi`.
    pub fn scalar(num: &[Complex64], den: &[Complex64], psi: &[Complex64], p: Complex64) -> Result<DifferenceSystem, QdiffError> {
        DifferenceSystem::new(PolyMat::scalar(num, 1), PolyMat::scalar(den, 1), PolyMat::scalar(psi, 1), p)
    }

    /// `φ(t)`, or `None` at a pole.
    pub fn phi(&self, t: Complex64) -> Option<CMat> {
        self.phi_den.eval(t).lu().solve(&self.phi_num.eval(t))
    }

    /// Radius of the largest disc about 0 free of zeros of `det B`.
    pub fn holomorphy_radius(&self) -> f64 {
        let deg = self.n * self.phi_den.degree();
        min_zero_modulus(|t| self.phi_den.eval(t).determinant(), deg)
    }
}

fn winding(f: &impl Fn(Complex64) -> Complex64, r: f64, samples: usize) -> Option<i64> {
    let mut prev = f(Complex64::new(r, 0.0));
    let mut total = 0.0;
    for k in 1..=samples {
        let z = Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / samples as f64);
        let cur = f(z);
        if cur.norm() == 0.0 || prev.norm() == 0.0 {
            return None;
        }
        total += (cur / prev).arg();
        prev = cur;
    }
    Some((total / std::f64::consts::TAU).round() as i64)
}

/// Smallest `|t|` with `f(t) = 0`, for `f` polynomial of degree at most
/// `deg`, by counting zeros inside circles.
pub fn min_zero_modulus(f: impl Fn(Complex64) -> Complex64, deg: usize) -> f64 {
    if deg == 0 {
        return f64::INFINITY;
    }
    let samples = (64 * deg).max(512);
    let inside = |r: f64| winding(&f, r, samples).is_none_or(|w| w > 0);
    let mut hi = None;
    for k in -40..=40 {
        let r = 2f64.powi(k);
        if inside(r) {
            hi = Some(r);
            break;
        }
    }
    let Some(mut hi) = hi else { return f64::INFINITY };
    let mut lo = hi / 2.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `vec(K_j M)` with `K_j M = p^j M φ0 − φ0 M`, column-major `vec`.
fn k_matrix(phi0: &CMat, pj: Complex64) -> CMat {
    let n = phi0.nrows();
    let id = CMat::identity(n, n);
    phi0.transpose().kronecker(&id) * pj - id.kronecker(phi0)
}

#[derive(Debug, Clone)]
pub struct SeriesSolution {
    pub coeffs: Vec<CMat>,
    /// Condition number of `K_j`, `j ≥ 1`.
    pub conds: Vec<f64>,
}

impl SeriesSolution {
    pub fn eval(&self, t: Complex64) -> CMat {
        let n = self.coeffs[0].nrows();
        let mut acc = CMat::zeros(n, n);
        for m in self.coeffs.iter().rev() {
            acc = acc * t + m;
        }
        acc
    }
}

/// `f_0 = Id` and, at order `j`,
/// `p^j B_0 f_j ψ_0 − A_0 f_j = Σ_{k≥1} A_k f_{j−k} − Σ_{k+l≥1} p^m B_k f_m ψ_l`
/// with `m = j − k − l`. The left side is `B_0 K_j f_j`.
pub fn series_solve(sys: &DifferenceSystem, order: usize) -> Result<SeriesSolution, QdiffError> {
    let n = sys.n;
    let phi0 = sys.phi(C0).expect("checked at construction");
    let (a0, b0, psi0) = (sys.phi_num.eval(C0), sys.phi_den.eval(C0), sys.psi.eval(C0));
    let id = CMat::identity(n, n);
    let mut f = vec![id.clone()];
    let mut conds = Vec::new();
    let mut pj = C1;
    for j in 1..order {
        pj *= sys.p;
        let sv = k_matrix(&phi0, pj).singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        if lo <= 1e-13 * hi.max(1.0) {
            return Err(QdiffError::Resonance { j });
        }
        conds.push(hi / lo);
        let op = psi0.transpose().kronecker(&b0) * pj - id.kronecker(&a0);
        let mut rhs = CMat::zeros(n, n);
        for k in 1..=j.min(sys.phi_num.coeffs.len() - 1) {
            rhs += &sys.phi_num.coeffs[k] * &f[j - k];
        }
        for (k, bk) in sys.phi_den.coeffs.iter().enumerate().take(j + 1) {
            for (l, pl) in sys.psi.coeffs.iter().enumerate().take(j + 1 - k) {
                if k + l == 0 {
                    continue;
                }
                let m = j - k - l;
                rhs -= bk * &f[m] * pl * sys.p.powu(m as u32);
            }
        }
        let v = CMat::from_column_slice(n * n, 1, rhs.as_slice());
        let x = op.lu().solve(&v).ok_or(QdiffError::Resonance { j })?;
        f.push(CMat::from_column_slice(n, n, x.as_slice()));
    }
    Ok(SeriesSolution { coeffs: f, conds })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceCertificate {
    pub phi0_norm: f64,
    /// Radius of holomorphy `R` of `φ`.
    pub holomorphy_radius: f64,
    /// `R/(‖φ(0)‖ + 1)`.
    pub stated_bound: f64,
    /// Lower bound from a majorant series for the recursion.
    pub majorant_bound: f64,
    /// `sup_j ‖K_j^{-1}‖`.
    pub kinv_sup: f64,
    /// Root-test estimate from the computed coefficients.
    pub estimated_radius: f64,
    pub max_cond: f64,
    pub respects_stated_bound: bool,
    pub respects_majorant_bound: bool,
}

impl ConvergenceCertificate {
    /// Radius inside which series evaluation is used directly.
    pub fn eval_radius(&self) -> f64 {
        0.5 * self.estimated_radius.min(1e6)
    }
}

/// Slope fit of `log ‖f_j‖` over the upper half of the coefficients.
fn estimate_radius(coeffs: &[CMat]) -> f64 {
    let n = coeffs.len();
    let pts: Vec<(f64, f64)> = (n / 2..n)
        .filter(|&j| j > 0)
        .filter_map(|j| {
            let x = coeffs[j].norm();
            (x > 1e-290).then(|| (j as f64, x.ln()))
        })
        .collect();
    if pts.len() < 2 {
        return f64::INFINITY;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (-num / den).exp()
}

fn kinv_sup(sys: &DifferenceSystem, phi0: &CMat, upto: usize) -> f64 {
    let inv = match phi0.clone().try_inverse() {
        Some(x) => x,
        None => return f64::INFINITY,
    };
    let c = op_norm(phi0) * op_norm(&inv);
    let mut best: f64 = 0.0;
    let mut pj = C1;
    let mut j = 1;
    loop {
        pj *= sys.p;
        let tail = pj.norm() * c;
        if j > upto && tail <= 0.5 {
            // Neumann bound for all remaining j
            best = best.max(op_norm(&inv) / (1.0 - tail));
            return best;
        }
        let sv = k_matrix(phi0, pj).singular_values();
        best = best.max(1.0 / sv.min());
        j += 1;
        if j > 100_000 {
            return f64::INFINITY;
        }
    }
}

/// Smallest `s ∈ (0, r)` with `K(M s/(r−s) + Σ‖ψ_k‖ s^k) = 1`.
fn majorant_root(k: f64, m: f64, r: f64, psi: &[f64]) -> f64 {
    let g = |s: f64| k * (m * s / (r - s) + psi.iter().enumerate().skip(1).map(|(j, c)| c * s.powi(j as i32)).sum::<f64>()) - 1.0;
    let (mut lo, mut hi) = (0.0, r);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Compares the computed coefficients with the stated and majorant bounds.
/// `radius` overrides the holomorphy radius of `φ`.
pub fn certify_convergence(sys: &DifferenceSystem, sol: &SeriesSolution, radius: Option<f64>) -> ConvergenceCertificate {
    let phi0 = sys.phi(C0).expect("checked at construction");
    let phi0_norm = op_norm(&phi0);
    let r_hol = radius.unwrap_or_else(|| sys.holomorphy_radius());
    let stated_bound = r_hol / (phi0_norm + 1.0);
    let ks = kinv_sup(sys, &phi0, sol.coeffs.len());
    let psi_norms: Vec<f64> = sys.psi.coeffs.iter().map(op_norm).collect();
    let rs: Vec<f64> = if r_hol.is_finite() {
        (1..40).map(|i| r_hol * (1.0 - 0.85f64.powi(i))).collect()
    } else {
        (-10..30).map(|i| 2f64.powi(i)).collect()
    };
    let majorant_bound = rs
        .par_iter()
        .map(|&r| {
            let m = (0..256)
                .map(|k| {
                    let t = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / 256.0);
                    sys.phi(t).map_or(f64::INFINITY, |x| op_norm(&x))
                })
                .fold(0.0, f64::max);
            if m.is_finite() {
                majorant_root(ks, m, r, &psi_norms)
            } else {
                0.0
            }
        })
        .reduce(|| 0.0, f64::max);
    let estimated_radius = estimate_radius(&sol.coeffs);
    let tol = 1.0 - 1e-6;
    ConvergenceCertificate {
        phi0_norm,
        holomorphy_radius: r_hol,
        stated_bound,
        majorant_bound,
        kinv_sup: ks,
        estimated_radius,
        max_cond: sol.conds.iter().copied().fold(1.0, f64::max),
        respects_stated_bound: estimated_radius >= stated_bound * tol,
        respects_majorant_bound: estimated_radius >= majorant_bound * tol,
    }
}

#[derive(Debug, Clone)]
pub enum Continuation {
    Value { value: CMat, steps: usize },
    /// `φ` drops rank at `p^k t`.
    Pole { k: usize, singularity: Complex64 },
}

impl Continuation {
    pub fn value(&self) -> Option<&CMat> {
        match self {
            Continuation::Value { value, .. } => Some(value),
            Continuation::Pole { .. } => None,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, Continuation::Pole { .. })
    }
}

/// `F(t) = A(t)^{-1}B(t) F(pt) ψ(t)` iterated until `|p^k t| ≤ eval_radius`.
pub fn continue_meromorphic(sys: &DifferenceSystem, sol: &SeriesSolution, eval_radius: f64, t: Complex64) -> Continuation {
    let n = sys.n;
    let mut left = CMat::identity(n, n);
    let mut right = CMat::identity(n, n);
    let mut s = t;
    let mut k = 0;
    while s.norm() > eval_radius {
        let a = sys.phi_num.eval(s);
        if min_sv_ratio(&a) < 1e-10 {
            return Continuation::Pole { k, singularity: s };
        }
        let b = sys.phi_den.eval(s);
        left *= a.lu().solve(&b).expect("rank checked");
        right = sys.psi.eval(s) * right;
        s *= sys.p;
        k += 1;
    }
    Continuation::Value { value: left * sol.eval(s) * right, steps: k }
}

/// `‖F(pt)ψ(t) − φ(t)F(t)‖ / max(1, ‖φ(t)F(t)‖)` with `F` from the series.
pub fn functional_residual(sys: &DifferenceSystem, sol: &SeriesSolution, t: Complex64) -> f64 {
    let phi = match sys.phi(t) {
        Some(x) => x,
        None => return f64::INFINITY,
    };
    let rhs = phi * sol.eval(t);
    let lhs = sol.eval(sys.p * t) * sys.psi.eval(t);
    (lhs - &rhs).norm() / rhs.norm().max(1.0)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceRow {
    pub re: f64,
    pub im: f64,
    pub norm: f64,
    pub pole: bool,
    pub steps: usize,
}

/// Continuation at many points, in parallel.
pub fn continuation_trace(sys: &DifferenceSystem, sol: &SeriesSolution, eval_radius: f64, ts: &[Complex64]) -> Vec<TraceRow> {
    ts.par_iter()
        .map(|&t| match continue_meromorphic(sys, sol, eval_radius, t) {
            Continuation::Value { value, steps } => TraceRow { re: t.re, im: t.im, norm: value.norm(), pole: false, steps },
            Continuation::Pole { k, .. } => TraceRow { re: t.re, im: t.im, norm: f64::INFINITY, pole: true, steps: k },
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoleRow {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    /// The pole is `p^{-k}` times a zero of `det A`.
    pub k: usize,
    pub base_re: f64,
    pub base_im: f64,
    /// Continuation stops at this point.
    pub confirmed: bool,
}

/// Coefficients of `det A(t)` by interpolation on roots of unity.
fn det_coeffs(a: &PolyMat, n: usize) -> Vec<Complex64> {
    let d = n * a.degree();
    let m = d + 1;
    let vals: Vec<Complex64> = (0..m).map(|j| a.eval(Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64)).determinant()).collect();
    let mut c: Vec<Complex64> = (0..m)
        .map(|k| vals.iter().enumerate().map(|(j, v)| v * Complex64::from_polar(1.0, -std::f64::consts::TAU * (j * k) as f64 / m as f64)).sum::<Complex64>() / m as f64)
        .collect();
    let big = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    while c.len() > 1 && c.last().unwrap().norm() <= 1e-12 * big {
        c.pop();
    }
    c
}

/// Candidate poles `p^{-k} s` of `F` with `|·| ≤ max_modulus`, over zeros `s`
/// of `det A`, sorted by modulus.
pub fn pole_table(sys: &DifferenceSystem, sol: &SeriesSolution, eval_radius: f64, max_modulus: f64) -> Vec<PoleRow> {
    let snap = |x: Complex64| {
        let m = x.norm();
        Complex64::new(if x.re.abs() <= 1e-12 * m { 0.0 } else { x.re }, if x.im.abs() <= 1e-12 * m { 0.0 } else { x.im })
    };
    let roots: Vec<Complex64> = crate::braiding::poly_roots(&det_coeffs(&sys.phi_num, sys.n)).into_iter().map(snap).collect();
    let mut out = Vec::new();
    for s in roots {
        let mut t = s;
        let mut k = 0;
        while t.norm() <= max_modulus && k < 10_000 {
            let confirmed = continue_meromorphic(sys, sol, eval_radius, t).is_pole();
            out.push(PoleRow { re: t.re, im: t.im, modulus: t.norm(), k, base_re: s.re, base_im: s.im, confirmed });
            t = snap(t / sys.p);
            k += 1;
        }
    }
    out.sort_by(|a, b| a.modulus.total_cmp(&b.modulus).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im)));
    out
}
