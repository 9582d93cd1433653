//! Systems from JSON. Matrix entries are scalar strings in which `t` is the
//! series variable; `v` is reserved for it.
//!
//! ```json
//! { "p": "1/2", "phi": [["1/(1-t)"]], "psi": [["1"]], "assign": { "qt": 0.3 } }
//! ```

use super::{DifferenceSystem, PolyMat, QdiffError, CMat};
use crate::linalg::SerMat;
use crate::scalars::mono::var_index;
use crate::scalars::{Poly, Scalar, TruncSeries, NVARS, V};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Real(f64),
    Complex([f64; 2]),
}

impl Num {
    pub fn value(&self) -> Complex64 {
        match self {
            Num::Real(x) => Complex64::new(*x, 0.0),
            Num::Complex([a, b]) => Complex64::new(*a, *b),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub p: String,
    pub phi: Vec<Vec<String>>,
    #[serde(default)]
    pub psi: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub assign: BTreeMap<String, Num>,
    /// Holomorphy radius of `φ`, when known.
    #[serde(default)]
    pub radius: Option<f64>,
}

fn retarget(s: &str) -> Result<String, QdiffError> {
    let mut out = String::with_capacity(s.len());
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        if b[i].is_ascii_alphabetic() {
            let j = (i..b.len()).find(|&j| !b[j].is_ascii_alphanumeric()).unwrap_or(b.len());
            match &s[i..j] {
                "t" => out.push('v'),
                "v" => return Err(QdiffError::Parse(format!("`v` is reserved in {s:?}"))),
                w => out.push_str(w),
            }
            i = j;
        } else {
            out.push(b[i] as char);
            i += 1;
        }
    }
    Ok(out)
}

fn parse_entry(s: &str) -> Result<Scalar, QdiffError> {
    retarget(s)?.parse::<Scalar>().map_err(|e| QdiffError::Parse(format!("{s:?}: {e}")))
}

fn parse_matrix(rows: &[Vec<String>]) -> Result<Vec<Vec<Scalar>>, QdiffError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(QdiffError::Shape("matrix must be square and nonempty".into()));
    }
    rows.iter().map(|r| r.iter().map(|s| parse_entry(s)).collect()).collect()
}

/// Common denominator and the polynomial numerator matrix.
fn clear_denominators(m: &[Vec<Scalar>]) -> (Scalar, Vec<Vec<Scalar>>) {
    let mut dens: Vec<Poly> = Vec::new();
    for e in m.iter().flatten() {
        let (_, d) = e.to_num_den();
        if !d.is_constant() && !dens.contains(&d) {
            dens.push(d);
        }
    }
    let d = dens.into_iter().fold(Scalar::one(), |acc, p| acc.mul(&Scalar::from_poly(p)));
    let a = m.iter().map(|r| r.iter().map(|e| e.mul(&d)).collect()).collect();
    (d, a)
}

/// Coefficients in `t` of a scalar polynomial in `t`, as scalars.
fn t_coeffs(s: &Scalar) -> Result<Vec<Scalar>, QdiffError> {
    let (num, den) = s.to_num_den();
    if den.terms().iter().any(|(m, _)| m.exp(V) > 0) {
        return Err(QdiffError::Parse(format!("{s} is not polynomial in t")));
    }
    let dinv = Scalar::from_poly(den).inv().map_err(|e| QdiffError::Parse(e.to_string()))?;
    let mut out: Vec<Scalar> = Vec::new();
    for (m, c) in num.terms() {
        let (rest, k) = m.split_var(V);
        let k = k as usize;
        if out.len() <= k {
            out.resize(k + 1, Scalar::zero());
        }
        out[k] = out[k].add(&Scalar::from_poly(Poly::monomial(rest, c.clone())));
    }
    if out.is_empty() {
        out.push(Scalar::zero());
    }
    Ok(out.into_iter().map(|c| c.mul(&dinv)).collect())
}

fn numeric(c: &Scalar, at: &[Complex64; NVARS]) -> Result<Complex64, QdiffError> {
    c.eval(at).map_err(|e| QdiffError::Parse(format!("{c}: {e}")))
}

fn poly_mat(m: &[Vec<Vec<Scalar>>], at: &[Complex64; NVARS]) -> Result<PolyMat, QdiffError> {
    let n = m.len();
    let deg = m.iter().flatten().map(|c| c.len()).max().unwrap_or(1);
    let mut coeffs = vec![CMat::zeros(n, n); deg];
    for i in 0..n {
        for j in 0..n {
            for (k, c) in m[i][j].iter().enumerate() {
                coeffs[k][(i, j)] = numeric(c, at)?;
            }
        }
    }
    Ok(PolyMat { coeffs })
}

fn grid<T, U>(m: &[Vec<T>], f: impl Fn(&T) -> Result<U, QdiffError>) -> Result<Vec<Vec<U>>, QdiffError> {
    m.iter().map(|r| r.iter().map(&f).collect()).collect()
}

impl SystemSpec {
    pub fn assignment(&self) -> Result<[Complex64; NVARS], QdiffError> {
        let mut at = [Complex64::new(1.0, 0.0); NVARS];
        for (k, v) in &self.assign {
            let idx = var_index(k).filter(|&i| i != V).ok_or_else(|| QdiffError::Parse(format!("cannot assign {k:?}")))?;
            at[idx] = v.value();
        }
        Ok(at)
    }

    fn parts(&self) -> Result<(Scalar, Vec<Vec<Scalar>>, Vec<Vec<Scalar>>), QdiffError> {
        let phi = parse_matrix(&self.phi)?;
        let n = phi.len();
        let psi = match &self.psi {
            Some(m) => parse_matrix(m)?,
            None => (0..n).map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect(),
        };
        if psi.len() != n {
            return Err(QdiffError::Shape(format!("psi is {}x{0}, phi is {n}x{n}", psi.len())));
        }
        let p = parse_entry(&self.p)?;
        Ok((p, phi, psi))
    }

    /// Numeric system at the assignment.
    pub fn numeric(&self) -> Result<DifferenceSystem, QdiffError> {
        let at = self.assignment()?;
        let (p, phi, psi) = self.parts()?;
        let n = phi.len();
        let (d, a) = clear_denominators(&phi);
        let dc: Vec<Complex64> = t_coeffs(&d)?.iter().map(|c| numeric(c, &at)).collect::<Result<_, _>>()?;
        let a = poly_mat(&grid(&a, t_coeffs)?, &at)?;
        let psi = poly_mat(&grid(&psi, t_coeffs)?, &at)?;
        DifferenceSystem::new(a, PolyMat::scalar(&dc, n), psi, numeric(&p, &at)?)
    }

    /// Exact Taylor data `(φ, ψ, p)` to the given order; `assign` is ignored.
    pub fn exact(&self, order: usize) -> Result<(SerMat, SerMat, Scalar), QdiffError> {
        let (p, phi, psi) = self.parts()?;
        let n = phi.len();
        let (d, a) = clear_denominators(&phi);
        let dinv = TruncSeries::from_coeffs(t_coeffs(&d)?, order).inv().map_err(|e| QdiffError::Parse(e.to_string()))?;
        let to_ser = |m: &[Vec<Scalar>], scale: Option<&TruncSeries>| -> Result<SerMat, QdiffError> {
            let mut out = SerMat::zeros(n, n, order);
            for i in 0..n {
                for j in 0..n {
                    let mut s = TruncSeries::from_coeffs(t_coeffs(&m[i][j])?, order);
                    if let Some(x) = scale {
                        s = s.mul(x).map_err(|e| QdiffError::Parse(e.to_string()))?;
                    }
                    for k in 0..order {
                        out.coeffs[k].set(i, j, s.coeff(k).clone());
                    }
                }
            }
            Ok(out)
        };
        Ok((to_ser(&a, Some(&dinv))?, to_ser(&psi, None)?, p))
    }
}

pub fn parse_system(json: &str) -> Result<SystemSpec, QdiffError> {
    serde_json::from_str(json).map_err(|e| QdiffError::Parse(e.to_string()))
}

pub fn load_system(path: &std::path::Path) -> Result<SystemSpec, QdiffError> {
    let s = std::fs::read_to_string(path).map_err(|e| QdiffError::Parse(format!("{}: {e}", path.display())))?;
    parse_system(&s)
}

