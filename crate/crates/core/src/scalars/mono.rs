//! Packed monomials in the six coefficient variables.
//!
//! Layout of the `u128`: bits 112..128 hold the total degree, variable `k`
//! sits in bits `96 - 16k .. 112 - 16k`. Integer comparison of the packed
//! word is then graded-lexicographic with `qt > z > al > be > u > v`, and
//! multiplication is plain addition.

use std::fmt;

pub const NVARS: usize = 6;

/// Variable names as they appear in the string grammar.
pub const VAR_NAMES: [&str; NVARS] = ["qt", "z", "al", "be", "u", "v"];

pub const QT: usize = 0;
pub const Z: usize = 1;
pub const AL: usize = 2;
pub const BE: usize = 3;
pub const U: usize = 4;
pub const V: usize = 5;

pub fn var_index(name: &str) -> Option<usize> {
    VAR_NAMES.iter().position(|n| *n == name)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono(pub(crate) u128);

const DEG_SHIFT: u32 = 112;

#[inline]
const fn shift(k: usize) -> u32 {
    96 - 16 * k as u32
}

impl Mono {
    pub const ONE: Mono = Mono(0);

    pub fn from_exps(e: &[u16; NVARS]) -> Mono {
        let mut w = 0u128;
        let mut d = 0u128;
        for (k, &x) in e.iter().enumerate() {
            w |= (x as u128) << shift(k);
            d += x as u128;
        }
        assert!(d < 1 << 16, "monomial degree overflow");
        Mono(w | (d << DEG_SHIFT))
    }

    pub fn var(k: usize, e: u16) -> Mono {
        let mut ex = [0u16; NVARS];
        ex[k] = e;
        Mono::from_exps(&ex)
    }

    #[inline]
    pub fn exp(self, k: usize) -> u16 {
        (self.0 >> shift(k)) as u16
    }

    pub fn exps(self) -> [u16; NVARS] {
        let mut e = [0u16; NVARS];
        for (k, x) in e.iter_mut().enumerate() {
            *x = self.exp(k);
        }
        e
    }

    #[inline]
    pub fn deg(self) -> u16 {
        (self.0 >> DEG_SHIFT) as u16
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn mul(self, o: Mono) -> Mono {
        Mono(self.0 + o.0)
    }

    pub fn divides(self, o: Mono) -> bool {
        if self.deg() > o.deg() {
            return false;
        }
        (0..NVARS).all(|k| self.exp(k) <= o.exp(k))
    }

    /// `o / self`, caller guarantees divisibility.
    #[inline]
    pub fn div_of(self, o: Mono) -> Mono {
        Mono(o.0 - self.0)
    }

    pub fn gcd(self, o: Mono) -> Mono {
        let mut e = [0u16; NVARS];
        for (k, x) in e.iter_mut().enumerate() {
            *x = self.exp(k).min(o.exp(k));
        }
        Mono::from_exps(&e)
    }

    /// Drop variable `k`, returning the stripped monomial and its exponent.
    pub fn split_var(self, k: usize) -> (Mono, u16) {
        let e = self.exp(k);
        let m = Mono(self.0 - ((e as u128) << shift(k)) - ((e as u128) << DEG_SHIFT));
        (m, e)
    }

    /// Bitmask of variables with nonzero exponent.
    pub fn support(self) -> u8 {
        let mut s = 0u8;
        for k in 0..NVARS {
            if self.exp(k) != 0 {
                s |= 1 << k;
            }
        }
        s
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in 0..NVARS {
            let e = self.exp(k);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", VAR_NAMES[k])?;
            } else {
                write!(f, "{}^{}", VAR_NAMES[k], e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let qt = Mono::var(QT, 1);
        let z = Mono::var(Z, 1);
        let z2 = Mono::var(Z, 2);
        assert!(qt > z);
        assert!(z2 > qt);
        assert!(qt.mul(z) > z2 || qt.mul(z) < z2);
        assert!(qt.mul(z) > z2);
    }

    #[test]
    fn split_and_divide() {
        let m = Mono::from_exps(&[2, 1, 0, 3, 0, 1]);
        let (r, e) = m.split_var(3);
        assert_eq!(e, 3);
        assert_eq!(r, Mono::from_exps(&[2, 1, 0, 0, 0, 1]));
        assert!(r.divides(m));
        assert_eq!(r.div_of(m), Mono::var(3, 3));
        assert_eq!(m.deg(), 7);
    }
}
