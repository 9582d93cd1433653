//! Truncated power series in `t` over the scalar field: elements of `A/t^n A`.

use super::mono::NVARS;
use super::ratfun::{Scalar, ScalarError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct TruncSeries {
    order: usize,
    coeffs: Vec<Scalar>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> TruncSeries {
        assert!(order > 0, "series order must be positive");
        TruncSeries { order, coeffs: vec![Scalar::zero(); order] }
    }

    pub fn constant(c: Scalar, order: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> TruncSeries {
        TruncSeries::constant(Scalar::one(), order)
    }

    /// Coefficients beyond `order` are dropped, missing ones are zero.
    pub fn from_coeffs(mut c: Vec<Scalar>, order: usize) -> TruncSeries {
        assert!(order > 0, "series order must be positive");
        c.resize(order, Scalar::zero());
        TruncSeries { order, coeffs: c }
    }

    /// `c t^k`.
    pub fn monomial(c: Scalar, k: usize, order: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(order);
        if k < order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, o: &TruncSeries) -> Result<(), SeriesError> {
        if self.order != o.order {
            Err(SeriesError::OrderMismatch(self.order, o.order))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, o: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.check(o)?;
        Ok(TruncSeries { order: self.order, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, o: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.check(o)?;
        Ok(TruncSeries { order: self.order, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries { order: self.order, coeffs: self.coeffs.iter().map(|a| a.neg()).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> TruncSeries {
        TruncSeries { order: self.order, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.check(o)?;
        let n = self.order;
        let mut c = vec![Scalar::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = &c[i + j] + &(a * b);
                }
            }
        }
        Ok(TruncSeries { order: n, coeffs: c })
    }

    pub fn inv(&self) -> Result<TruncSeries, SeriesError> {
        let c0inv = self.coeffs[0].inv().map_err(|_| SeriesError::NotInvertible)?;
        let n = self.order;
        let mut r = vec![Scalar::zero(); n];
        r[0] = c0inv.clone();
        for k in 1..n {
            let mut s = Scalar::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !r[k - j].is_zero() {
                    s = &s + &(&self.coeffs[j] * &r[k - j]);
                }
            }
            r[k] = (&s * &c0inv).neg();
        }
        Ok(TruncSeries { order: n, coeffs: r })
    }

    /// The substitution `t ↦ u t`.
    pub fn scale_t(&self, u: &Scalar) -> TruncSeries {
        let mut p = Scalar::one();
        let mut c = Vec::with_capacity(self.order);
        for a in &self.coeffs {
            c.push(a * &p);
            p = &p * u;
        }
        TruncSeries { order: self.order, coeffs: c }
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(self.order);
        for i in 0..self.order.saturating_sub(k) {
            s.coeffs[i + k] = self.coeffs[i].clone();
        }
        s
    }

    /// Change the truncation order (dropping or zero-padding).
    pub fn truncate(&self, order: usize) -> TruncSeries {
        TruncSeries::from_coeffs(self.coeffs.clone(), order)
    }

    /// Value of the polynomial `Σ c_k t^k` at a numeric point.
    pub fn eval(&self, at: &[Complex64; NVARS], t: Complex64) -> Result<Complex64, SeriesError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c.eval(at)?;
        }
        Ok(acc)
    }

    /// Coefficients evaluated numerically.
    pub fn eval_coeffs(&self, at: &[Complex64; NVARS]) -> Result<Vec<Complex64>, SeriesError> {
        self.coeffs.iter().map(|c| c.eval(at).map_err(SeriesError::from)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse::sc;

    fn s(c: &[&str], n: usize) -> TruncSeries {
        TruncSeries::from_coeffs(c.iter().map(|x| sc(x)).collect(), n)
    }

    #[test]
    fn geometric_inverse() {
        assert_eq!(s(&["1", "-1"], 3).inv().unwrap(), s(&["1", "1", "1"], 3));
    }

    #[test]
    fn scale_t_substitutes() {
        assert_eq!(s(&["1", "1"], 2).scale_t(&sc("u")), s(&["1", "u"], 2));
    }

    #[test]
    fn truncated_product() {
        assert_eq!(s(&["1", "1"], 2).mul(&s(&["1", "-1"], 2)).unwrap(), s(&["1"], 2));
    }

    #[test]
    fn order_mismatch_and_noninvertible() {
        assert!(s(&["1"], 2).add(&s(&["1"], 3)).is_err());
        assert_eq!(s(&["0", "1"], 2).inv(), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn numeric_value() {
        let at = [Complex64::new(1.0, 0.0); NVARS];
        let v = s(&["1", "1", "1"], 3).eval(&at, Complex64::new(0.5, 0.0)).unwrap();
        assert!((v.re - 1.75).abs() < 1e-15);
    }
}
