//! Sparse multivariate polynomials over the integers.

use super::mono::{Mono, NVARS};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Terms sorted by descending monomial, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    pub(crate) terms: Vec<(Mono, BigInt)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Mono::ONE, c)] }
        }
    }

    pub fn from_i64(c: i64) -> Poly {
        Poly::constant(BigInt::from(c))
    }

    pub fn monomial(m: Mono, c: BigInt) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(k: usize) -> Poly {
        Poly::monomial(Mono::var(k, 1), BigInt::one())
    }

    /// Build from unsorted terms, merging duplicates.
    pub fn from_terms(mut t: Vec<(Mono, BigInt)>) -> Poly {
        t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, BigInt)> = Vec::with_capacity(t.len());
        for (m, c) in t {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, BigInt)] {
        &self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        if self.is_zero() {
            Some(BigInt::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn lm(&self) -> Mono {
        self.terms[0].0
    }

    pub fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn neg_mut(&mut self) {
        for t in self.terms.iter_mut() {
            t.1 = -std::mem::take(&mut t.1);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        merge(&self.terms, &o.terms, false)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        merge(&self.terms, &o.terms, true)
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn mul_mono(&self, m: Mono) -> Poly {
        Poly { terms: self.terms.iter().map(|(x, c)| (x.mul(m), c.clone())).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.terms.len() == 1 {
            let (m, c) = &o.terms[0];
            return Poly { terms: self.terms.iter().map(|(x, d)| (x.mul(*m), d * c)).collect() };
        }
        if self.terms.len() == 1 {
            return o.mul(self);
        }
        let mut t = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                t.push((m1.mul(*m2), c1 * c2));
            }
        }
        Poly::from_terms(t)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !dm.divides(*m) {
                    return None;
                }
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                out.push((dm.div_of(*m), q));
            }
            return Some(Poly { terms: out });
        }
        let (dm, dc) = (d.terms[0].0, d.terms[0].1.clone());
        let mut r = self.clone();
        let mut q: Vec<(Mono, BigInt)> = Vec::new();
        while !r.is_zero() {
            let (rm, rc) = (r.terms[0].0, &r.terms[0].1);
            if !dm.divides(rm) {
                return None;
            }
            let (qc, rem) = rc.div_rem(&dc);
            if !rem.is_zero() {
                return None;
            }
            let qm = dm.div_of(rm);
            let sub = Poly { terms: d.terms.iter().map(|(m, c)| (m.mul(qm), c * &qc)).collect() };
            r = r.sub(&sub);
            q.push((qm, qc));
        }
        Some(Poly { terms: q })
    }

    pub fn div_int_exact(&self, c: &BigInt) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, x)| (*m, x / c)).collect() }
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive(&self) -> (BigInt, Poly) {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return (c, self.clone());
        }
        (c.clone(), self.div_int_exact(&c))
    }

    /// Largest monomial dividing every term.
    pub fn mono_content(&self) -> Mono {
        let mut it = self.terms.iter();
        let mut g = match it.next() {
            Some(t) => t.0,
            None => return Mono::ONE,
        };
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(*m);
        }
        g
    }

    pub fn div_mono(&self, m: Mono) -> Poly {
        if m.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(x, c)| (m.div_of(*x), c.clone())).collect() }
    }

    pub fn max_norm(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.abs()).max().unwrap_or_default()
    }

    pub fn support(&self) -> u8 {
        self.terms.iter().fold(0u8, |s, (m, _)| s | m.support())
    }

    pub fn degree_in(&self, k: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exp(k)).max().unwrap_or(0)
    }

    /// Substitute integer `x` for variable `k`.
    pub fn eval_var(&self, k: usize, x: &BigInt) -> Poly {
        let mut pows: Vec<BigInt> = vec![BigInt::one()];
        let mut t = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let (r, e) = m.split_var(k);
            while pows.len() <= e as usize {
                let nx = pows.last().unwrap() * x;
                pows.push(nx);
            }
            t.push((r, c * &pows[e as usize]));
        }
        Poly::from_terms(t)
    }

    /// View as a univariate polynomial in variable `k`: `coeffs[e]` multiplies `x_k^e`.
    pub fn to_univariate(&self, k: usize) -> Vec<Poly> {
        let deg = self.degree_in(k) as usize;
        let mut buckets: Vec<Vec<(Mono, BigInt)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (r, e) = m.split_var(k);
            buckets[e as usize].push((r, c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    pub fn from_univariate(k: usize, coeffs: &[Poly]) -> Poly {
        let mut t = Vec::new();
        for (e, c) in coeffs.iter().enumerate() {
            let xm = Mono::var(k, e as u16);
            for (m, x) in &c.terms {
                t.push((m.mul(xm), x.clone()));
            }
        }
        Poly::from_terms(t)
    }

    /// Numeric value; also returns the sum of term magnitudes for cancellation checks.
    pub fn eval_complex(&self, at: &[Complex64; NVARS]) -> (Complex64, f64) {
        let mut s = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for (m, c) in &self.terms {
            let mut v = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (k, a) in at.iter().enumerate() {
                let e = m.exp(k);
                if e > 0 {
                    v *= a.powi(e as i32);
                }
            }
            mag += v.norm();
            s += v;
        }
        (s, mag)
    }
}

fn merge(a: &[(Mono, BigInt)], b: &[(Mono, BigInt)], negate_b: bool) -> Poly {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        let c = if negate_b { -&t.1 } else { t.1.clone() };
        out.push((t.0, c));
    }
    Poly { terms: out }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", a, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::mono::{QT, Z};

    fn x() -> Poly {
        Poly::var(QT)
    }

    #[test]
    fn difference_of_squares() {
        let one = Poly::one();
        let p = x().add(&one).mul(&x().sub(&one));
        assert_eq!(p, x().mul(&x()).sub(&one));
        assert_eq!(p.exact_div(&x().add(&one)), Some(x().sub(&one)));
        assert_eq!(p.exact_div(&x().add(&Poly::from_i64(2))), None);
    }

    #[test]
    fn eval_and_univariate() {
        let p = x().mul(&Poly::var(Z)).add(&Poly::from_i64(3));
        let e = p.eval_var(QT, &BigInt::from(2));
        assert_eq!(e, Poly::var(Z).scale(&BigInt::from(2)).add(&Poly::from_i64(3)));
        let u = p.to_univariate(QT);
        assert_eq!(u.len(), 2);
        assert_eq!(Poly::from_univariate(QT, &u), p);
    }
}
