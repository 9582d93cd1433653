//! Padé-type rational fits of braiding series and their poles.

use crate::linalg::{Mat, SerMat};
use crate::scalars::{Scalar, NVARS};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `S(t) ≈ P(τ)/Q(τ)` with `τ = t^step`, `Q(0) = 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalFit {
    pub step: usize,
    pub den: Vec<Scalar>,
    pub num: Vec<Mat>,
    /// Orders in `τ` used to determine the fit.
    pub determined: usize,
    /// Further orders in `τ` that the fit reproduces exactly.
    pub surplus: usize,
    /// Orders in `τ` available.
    pub available: usize,
    pub certified: bool,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(Q·c)_k` for the coefficient list `c`.
fn qc(den: &[Scalar], c: &[Mat], k: usize) -> Mat {
    let mut acc = Mat::zeros(c[0].rows(), c[0].cols());
    for (j, q) in den.iter().enumerate() {
        if j <= k && !q.is_zero() {
            acc = acc.add(&c[k - j].scale(q));
        }
    }
    acc
}

/// Smallest-degree fit with `deg P, deg Q ≤ d ≤ maxdeg` matching every
/// available order. When none exists the best attempt is returned uncertified.
pub fn rational_fit(s: &SerMat, maxdeg: usize) -> RationalFit {
    let step = (1..s.order()).filter(|&k| !s.coeffs[k].is_zero()).fold(0, gcd).max(1);
    let c: Vec<Mat> = s.coeffs.iter().step_by(step).cloned().collect();
    let avail = c.len();
    let (r, cc) = (s.rows(), s.cols());
    let mut best: Option<RationalFit> = None;
    for d in 0..=maxdeg {
        if 2 * d + 1 > avail {
            break;
        }
        // unknowns q_1..q_d from orders d+1..2d
        let mut den = vec![Scalar::one()];
        if d > 0 {
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for k in d + 1..=2 * d {
                for a in 0..r {
                    for b in 0..cc {
                        rows.push((1..=d).map(|j| c[k - j].get(a, b).clone()).collect::<Vec<_>>());
                        rhs.push(c[k].get(a, b).neg());
                    }
                }
            }
            match Mat::from_rows(rows).solve(&rhs) {
                Some(q) => den.extend(q),
                None => continue,
            }
        }
        let num: Vec<Mat> = (0..=d).map(|k| qc(&den, &c, k)).collect();
        let mut surplus = 0;
        for k in 2 * d + 1..avail {
            if qc(&den, &c, k).is_zero() {
                surplus += 1;
            } else {
                break;
            }
        }
        let all = 2 * d + 1 + surplus == avail;
        let fit = RationalFit { step, den, num, determined: 2 * d + 1, surplus, available: avail, certified: all && surplus >= 1 };
        if all {
            return fit;
        }
        if best.as_ref().is_none_or(|b| fit.surplus > b.surplus) {
            best = Some(fit);
        }
    }
    best.unwrap_or(RationalFit {
        step,
        den: vec![Scalar::one()],
        num: vec![c[0].clone()],
        determined: 1,
        surplus: 0,
        available: avail,
        certified: false,
    })
}

impl RationalFit {
    pub fn den_degree(&self) -> usize {
        self.den.iter().rposition(|q| !q.is_zero()).unwrap_or(0)
    }

    /// `(k, m)` with `Q` a polynomial of degree `m` in `t^k`.
    pub fn den_variable_degree(&self) -> (usize, usize) {
        let g = (1..self.den.len()).filter(|&j| !self.den[j].is_zero()).fold(0, gcd);
        if g == 0 {
            return (self.step, 0);
        }
        (self.step * g, self.den_degree() / g)
    }

    fn num_den_at(&self, tau: Complex64, at: &[Complex64; NVARS]) -> (Vec<Complex64>, Complex64) {
        let mut q = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for d in &self.den {
            q += d.eval(at).unwrap_or(Complex64::new(f64::NAN, 0.0)) * p;
            p *= tau;
        }
        let (r, c) = (self.num[0].rows(), self.num[0].cols());
        let mut out = vec![Complex64::new(0.0, 0.0); r * c];
        let mut p = Complex64::new(1.0, 0.0);
        for m in &self.num {
            for a in 0..r {
                for b in 0..c {
                    let v = m.get(a, b);
                    if !v.is_zero() {
                        out[a * c + b] += v.eval(at).unwrap_or(Complex64::new(f64::NAN, 0.0)) * p;
                    }
                }
            }
            p *= tau;
        }
        (out, q)
    }

    /// Entries of `P(τ)/Q(τ)` at `τ = t^step`, row-major.
    pub fn eval(&self, t: Complex64, at: &[Complex64; NVARS]) -> Vec<Complex64> {
        let tau = t.powu(self.step as u32);
        let (p, q) = self.num_den_at(tau, at);
        p.into_iter().map(|x| x / q).collect()
    }

    /// Numeric denominator coefficients in `τ`.
    pub fn den_numeric(&self, at: &[Complex64; NVARS]) -> Vec<Complex64> {
        self.den[..=self.den_degree()].iter().map(|d| d.eval(at).unwrap_or(Complex64::new(f64::NAN, 0.0))).collect()
    }
}

/// Roots of `Σ c_k x^k` by Aberth iteration.
pub fn poly_roots(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.iter().rposition(|x| x.norm() > 0.0).unwrap_or(0);
    if deg == 0 {
        return vec![];
    }
    let lead = c[deg];
    let a: Vec<Complex64> = c[..=deg].iter().map(|x| x / lead).collect();
    let bound = 1.0 + a[..deg].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> =
        (0..deg).map(|k| Complex64::from_polar(bound * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / deg as f64)).collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for k in (0..=deg).rev() {
            dp = dp * x + p;
            p = p * x + a[k];
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoleReport {
    /// Poles in the `t`-plane inside the region, after dropping removable ones.
    pub poles: Vec<(f64, f64)>,
    /// Roots of the fitted denominator in `τ`.
    pub den_roots: Vec<(f64, f64)>,
    pub zero_excluded: bool,
    /// `|Q(root)|` at each retained pole.
    pub den_residuals: Vec<f64>,
    /// Nearest-pole modulus estimated from the series coefficients, if available.
    pub ratio_radius: Option<f64>,
    /// `|ratio_radius − min |pole||`.
    pub ratio_discrepancy: Option<f64>,
}

/// Poles of a certified fit at a numeric point, inside `|t| < radius`.
/// `series` (when given) supplies an independent ratio-test estimate of the
/// nearest pole.
pub fn pole_analysis(fit: &RationalFit, at: &[Complex64; NVARS], radius: f64, series: Option<&SerMat>) -> PoleReport {
    let den = fit.den_numeric(at);
    let roots = poly_roots(&den);
    let mut poles = Vec::new();
    let mut res = Vec::new();
    for r in &roots {
        let (p, _) = fit.num_den_at(*r, at);
        let scale = p.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if scale < 1e-9 {
            continue;
        }
        let q: Complex64 = den.iter().enumerate().map(|(k, c)| c * r.powu(k as u32)).sum();
        // t^step = r
        let m = r.norm().powf(1.0 / fit.step as f64);
        let th = r.arg() / fit.step as f64;
        for j in 0..fit.step {
            let t = Complex64::from_polar(m, th + 2.0 * std::f64::consts::PI * j as f64 / fit.step as f64);
            if t.norm() < radius {
                poles.push((t.re, t.im));
                res.push(q.norm());
            }
        }
    }
    let zero_excluded = den.first().is_some_and(|q0| q0.norm() > 1e-12);
    let ratio_radius = series.and_then(|s| ratio_estimate(s, at));
    let nearest = poles.iter().map(|(a, b)| Complex64::new(*a, *b).norm()).fold(f64::INFINITY, f64::min);
    let ratio_discrepancy = ratio_radius.filter(|_| nearest.is_finite()).map(|r| (r - nearest).abs());
    PoleReport { poles, den_roots: roots.iter().map(|r| (r.re, r.im)).collect(), zero_excluded, den_residuals: res, ratio_radius, ratio_discrepancy }
}

/// `|c_j / c_k|^{1/(k-j)}` from the last two nonzero orders `j < k` of the
/// entry that is largest at its last order.
fn ratio_estimate(s: &SerMat, at: &[Complex64; NVARS]) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    for a in 0..s.rows() {
        for b in 0..s.cols() {
            let nz: Vec<(usize, f64)> = s
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.get(a, b).is_zero())
                .filter_map(|(k, c)| c.get(a, b).eval(at).ok().map(|x| (k, x.norm())))
                .filter(|(_, x)| *x > 1e-300)
                .collect();
            if nz.len() < 3 {
                continue;
            }
            let (j, xj) = nz[nz.len() - 2];
            let (k, xk) = nz[nz.len() - 1];
            let est = (xj / xk).powf(1.0 / (k - j) as f64);
            if best.is_none_or(|(m, _)| xk > m) {
                best = Some((xk, est));
            }
        }
    }
    best.map(|b| b.1)
}
