//! Canonical rational functions with a Laurent monomial factor.

use super::gcd::gcd_cofactors;
use super::mono::{Mono, NVARS, QT};
use super::poly::Poly;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: denominator {0} vanishes at the evaluation point")]
    Pole(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// `x^mono * num / den` in canonical form.
///
/// `num` and `den` carry no monomial content, are coprime over the integers,
/// and `den` has a positive leading coefficient. Zero is `0/1` with `mono = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    mono: [i32; NVARS],
    num: Poly,
    den: Poly,
}

fn split_laurent(m: &[i32; NVARS]) -> (Mono, Mono) {
    let mut p = [0u16; NVARS];
    let mut n = [0u16; NVARS];
    for k in 0..NVARS {
        if m[k] >= 0 {
            p[k] = m[k] as u16;
        } else {
            n[k] = (-m[k]) as u16;
        }
    }
    (Mono::from_exps(&p), Mono::from_exps(&n))
}

fn add_mono(a: &[i32; NVARS], m: Mono, sign: i32) -> [i32; NVARS] {
    let mut r = *a;
    for (k, x) in r.iter_mut().enumerate() {
        *x += sign * m.exp(k) as i32;
    }
    r
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { mono: [0; NVARS], num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Scalar {
        Scalar::from_int(1)
    }

    pub fn from_int(c: i64) -> Scalar {
        Scalar::from_bigint(BigInt::from(c))
    }

    pub fn from_bigint(c: BigInt) -> Scalar {
        Scalar { mono: [0; NVARS], num: Poly::constant(c), den: Poly::one() }
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::from_int(n).div(&Scalar::from_int(d))
    }

    /// Variable `k` raised to an integer power.
    pub fn var_pow(k: usize, e: i32) -> Scalar {
        let mut mono = [0; NVARS];
        mono[k] = e;
        Scalar { mono, num: Poly::one(), den: Poly::one() }
    }

    pub fn var(k: usize) -> Scalar {
        Scalar::var_pow(k, 1)
    }

    /// `q̃^e`.
    pub fn qt_pow(e: i32) -> Scalar {
        Scalar::var_pow(QT, e)
    }

    /// Laurent monomial with integer coefficient.
    pub fn monomial(c: i64, exps: [i32; NVARS]) -> Scalar {
        if c == 0 {
            return Scalar::zero();
        }
        Scalar { mono: exps, num: Poly::from_i64(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Scalar {
        Scalar::from_parts([0; NVARS], p, Poly::one())
    }

    /// Canonicalize an arbitrary `x^mono * num / den`.
    pub fn from_parts(mono: [i32; NVARS], num: Poly, den: Poly) -> Scalar {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar::zero();
        }
        let mn = num.mono_content();
        let md = den.mono_content();
        let mut mono = add_mono(&mono, mn, 1);
        mono = add_mono(&mono, md, -1);
        let num = num.div_mono(mn);
        let den = den.div_mono(md);
        let (_, n, d) = gcd_cofactors(&num, &den);
        Scalar::signed(mono, n, d)
    }

    fn signed(mono: [i32; NVARS], mut num: Poly, mut den: Poly) -> Scalar {
        if den.lc().is_negative() {
            num.neg_mut();
            den.neg_mut();
        }
        Scalar { mono, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one() && self.mono == [0; NVARS]
    }

    /// True if the value is `c · monomial` for an integer or rational `c`.
    pub fn is_monomial(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn mono_exps(&self) -> [i32; NVARS] {
        self.mono
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    /// Full numerator and denominator polynomials with the monomial factor absorbed.
    pub fn to_num_den(&self) -> (Poly, Poly) {
        let (p, n) = split_laurent(&self.mono);
        (self.num.mul_mono(p), self.den.mul_mono(n))
    }

    pub fn neg(&self) -> Scalar {
        Scalar { mono: self.mono, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let mut mono = self.mono;
        for (k, x) in mono.iter_mut().enumerate() {
            *x += o.mono[k];
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { mono, num: self.num.mul(&o.num), den: Poly::one() };
        }
        let (_, n1, d2) = if o.den.is_one() {
            (Poly::one(), self.num.clone(), Poly::one())
        } else {
            gcd_cofactors(&self.num, &o.den)
        };
        let (_, n2, d1) = if self.den.is_one() {
            (Poly::one(), o.num.clone(), Poly::one())
        } else {
            gcd_cofactors(&o.num, &self.den)
        };
        Scalar::signed(mono, n1.mul(&n2), d1.mul(&d2))
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let mut m = [0i32; NVARS];
        let mut e1 = [0u16; NVARS];
        let mut e2 = [0u16; NVARS];
        for k in 0..NVARS {
            m[k] = self.mono[k].min(o.mono[k]);
            e1[k] = (self.mono[k] - m[k]) as u16;
            e2[k] = (o.mono[k] - m[k]) as u16;
        }
        let x1 = Mono::from_exps(&e1);
        let x2 = Mono::from_exps(&e2);
        if self.den == o.den {
            let t = self.num.mul_mono(x1).add(&o.num.mul_mono(x2));
            if t.is_zero() {
                return Scalar::zero();
            }
            let mt = t.mono_content();
            let t = t.div_mono(mt);
            let m = add_mono(&m, mt, 1);
            if self.den.is_one() {
                return Scalar { mono: m, num: t, den: Poly::one() };
            }
            let (_, n, d) = gcd_cofactors(&t, &self.den);
            return Scalar::signed(m, n, d);
        }
        // Henrici addition
        let (g, b1, d1) = gcd_cofactors(&self.den, &o.den);
        let t = self.num.mul_mono(x1).mul(&d1).add(&o.num.mul_mono(x2).mul(&b1));
        if t.is_zero() {
            return Scalar::zero();
        }
        let mt = t.mono_content();
        let t = t.div_mono(mt);
        let m = add_mono(&m, mt, 1);
        let (g2, n, _) = if g.is_one() { (Poly::one(), t, Poly::one()) } else { gcd_cofactors(&t, &g) };
        let d = if g2.is_one() { o.den.clone() } else { o.den.exact_div(&g2).expect("gcd divides") };
        Scalar::signed(m, n, b1.mul(&d))
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let mut mono = self.mono;
        for x in mono.iter_mut() {
            *x = -*x;
        }
        Ok(Scalar::signed(mono, self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Scalar) -> Scalar {
        self.mul(&o.inv().expect("division by zero scalar"))
    }

    pub fn try_div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Scalar {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut r = Scalar::one();
        let mut b = self.clone();
        let mut e = e as u32;
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

    pub fn mul_int(&self, c: i64) -> Scalar {
        self.mul(&Scalar::from_int(c))
    }

    /// Substitute `x_k ↦ s`.
    pub fn subs(&self, k: usize, s: &Scalar) -> Scalar {
        let ev = |p: &Poly| -> Scalar {
            let mut acc = Scalar::zero();
            for (m, c) in p.terms() {
                let (rest, e) = m.split_var(k);
                let mut exps = [0i32; NVARS];
                for (j, x) in exps.iter_mut().enumerate() {
                    *x = rest.exp(j) as i32;
                }
                let t = Scalar { mono: exps, num: Poly::constant(c.clone()), den: Poly::one() };
                acc = acc.add(&t.mul(&s.pow(e as i32)));
            }
            acc
        };
        let mut rest = self.mono;
        let e = rest[k];
        rest[k] = 0;
        let base = Scalar { mono: rest, num: Poly::one(), den: Poly::one() };
        base.mul(&s.pow(e)).mul(&ev(&self.num)).div(&ev(&self.den))
    }

    /// Numeric value at a point; errors on a (numerical) pole.
    pub fn eval(&self, at: &[Complex64; NVARS]) -> Result<Complex64, ScalarError> {
        let (nv, _) = self.num.eval_complex(at);
        let (dv, dmag) = self.den.eval_complex(at);
        if dv.norm() <= 1e-14 * dmag {
            return Err(ScalarError::Pole(self.den.to_string()));
        }
        let mut m = Complex64::new(1.0, 0.0);
        for (k, a) in at.iter().enumerate() {
            let e = self.mono[k];
            if e == 0 {
                continue;
            }
            if e < 0 && a.norm() == 0.0 {
                return Err(ScalarError::Pole(crate::scalars::mono::VAR_NAMES[k].to_string()));
            }
            m *= a.powi(e);
        }
        Ok(m * nv / dv)
    }

    /// Evaluate with only `q̃` (and optionally other variables) assigned; unassigned variables default to 1.
    pub fn eval_named(&self, assign: &[(&str, Complex64)]) -> Result<Complex64, ScalarError> {
        let mut at = [Complex64::new(1.0, 0.0); NVARS];
        for (name, v) in assign {
            if *name == "q" {
                at[QT] = v.powf(0.25);
                continue;
            }
            let k = crate::scalars::mono::var_index(name).ok_or_else(|| ScalarError::Parse {
                pos: 0,
                msg: format!("unknown symbol {name}"),
            })?;
            at[k] = *v;
        }
        self.eval(&at)
    }

    /// Rational constant value, if this scalar is a constant.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        if self.mono != [0; NVARS] {
            return if self.is_zero() { Some((BigInt::zero(), BigInt::one())) } else { None };
        }
        Some((self.num.constant_value()?, self.den.constant_value()?))
    }

    /// Exponents of a pure monomial `c · x^e` with `c = ±1`.
    pub fn as_unit_monomial(&self) -> Option<(i32, [i32; NVARS])> {
        if !self.is_monomial() || self.is_zero() {
            return None;
        }
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        if d.is_one() && n.abs().is_one() {
            Some((if n.is_negative() { -1 } else { 1 }, self.mono))
        } else {
            None
        }
    }

    pub fn total_terms(&self) -> usize {
        self.num.nterms() + self.den.nterms()
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.to_num_den();
        if d.is_one() {
            write!(f, "{}", n)
        } else if n.nterms() > 1 {
            write!(f, "({})/({})", n, d)
        } else {
            write!(f, "{}/({})", n, d)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Scalar {
    fn from(c: i64) -> Self {
        Scalar::from_int(c)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                Scalar::$m(self, o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                Scalar::$m(self, &o)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

/// Quantum integer `[n] = (q^n - q^-n)/(q - q^-1)` in the parameter `q_i = qt^e`.
pub fn qint(n: i64, qexp: i32) -> Scalar {
    if n == 0 {
        return Scalar::zero();
    }
    let sign = if n < 0 { -1 } else { 1 };
    let n = n.abs();
    // [n] = q^{-(n-1)} (1 + q^2 + ... + q^{2(n-1)})
    let mut t = Vec::new();
    for j in 0..n {
        t.push((Mono::var(QT, (2 * j as i32 * qexp) as u16), BigInt::from(1)));
    }
    let p = Poly::from_terms(t);
    let mut mono = [0; NVARS];
    mono[QT] = -((n - 1) as i32) * qexp;
    Scalar::from_parts(mono, p, Poly::one()).mul_int(sign)
}
