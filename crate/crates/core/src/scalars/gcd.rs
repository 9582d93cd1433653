//! Multivariate integer polynomial gcd.
//!
//! Heuristic evaluation/interpolation gcd (Char, Geddes, Gonnet) with a
//! recursive primitive PRS fallback.

use super::mono::{Mono, NVARS};
use super::poly::Poly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

const HEU_TRIES: usize = 6;

/// `(g, f/g, h/g)` with `g` normalized to a positive leading coefficient.
pub fn gcd_cofactors(f: &Poly, g: &Poly) -> (Poly, Poly, Poly) {
    if f.is_zero() && g.is_zero() {
        return (Poly::zero(), Poly::zero(), Poly::zero());
    }
    if f.is_zero() {
        let s = if g.lc().is_negative() { -BigInt::one() } else { BigInt::one() };
        return (g.scale(&s), Poly::zero(), Poly::constant(s));
    }
    if g.is_zero() {
        let s = if f.lc().is_negative() { -BigInt::one() } else { BigInt::one() };
        return (f.scale(&s), Poly::constant(s), Poly::zero());
    }
    if f == g {
        let s = if f.lc().is_negative() { -BigInt::one() } else { BigInt::one() };
        return (f.scale(&s), Poly::constant(s.clone()), Poly::constant(s));
    }
    // split monomial content
    let mf = f.mono_content();
    let mg = g.mono_content();
    let m = mf.gcd(mg);
    let f1 = f.div_mono(mf);
    let g1 = g.div_mono(mg);
    let (h, a, b) = gcd_nomono(&f1, &g1);
    let (h, a, b) = if h.lc().is_negative() { (h.neg(), a.neg(), b.neg()) } else { (h, a, b) };
    (h.mul_mono(m), a.mul_mono(m.div_of(mf)), b.mul_mono(m.div_of(mg)))
}

pub fn gcd(f: &Poly, g: &Poly) -> Poly {
    gcd_cofactors(f, g).0
}

fn gcd_nomono(f: &Poly, g: &Poly) -> (Poly, Poly, Poly) {
    if f.is_constant() || g.is_constant() {
        let c = f.content().gcd(&g.content());
        return (Poly::constant(c.clone()), f.div_int_exact(&c), g.div_int_exact(&c));
    }
    if let Some(r) = heu_gcd(f, g) {
        return r;
    }
    let h = prs_gcd(f, g);
    let a = f.exact_div(&h).expect("prs gcd does not divide");
    let b = g.exact_div(&h).expect("prs gcd does not divide");
    (h, a, b)
}

fn main_var(f: &Poly, g: &Poly) -> Option<usize> {
    let s = f.support() | g.support();
    (0..NVARS).find(|k| s & (1 << k) != 0)
}

fn symmetric_mod(c: &BigInt, x: &BigInt) -> BigInt {
    let r = c.mod_floor(x);
    if r > x / 2 {
        r - x
    } else {
        r
    }
}

/// Recover a polynomial in `x_k` from its image at `x_k = x`.
fn interpolate(h: &Poly, x: &BigInt, k: usize) -> Poly {
    let mut h = h.clone();
    let mut t: Vec<(Mono, BigInt)> = Vec::new();
    let mut i: u16 = 0;
    while !h.is_zero() {
        let g = Poly::from_terms(h.terms().iter().map(|(m, c)| (*m, symmetric_mod(c, x))).collect());
        let xm = Mono::var(k, i);
        for (m, c) in g.terms() {
            t.push((m.mul(xm), c.clone()));
        }
        h = h.sub(&g).div_int_exact(x);
        i += 1;
    }
    let p = Poly::from_terms(t);
    if !p.is_zero() && p.lc().is_negative() {
        p.neg()
    } else {
        p
    }
}

fn heu_gcd(f: &Poly, g: &Poly) -> Option<(Poly, Poly, Poly)> {
    if f.is_zero() || g.is_zero() {
        return None;
    }
    if f.is_constant() || g.is_constant() {
        let c = f.content().gcd(&g.content());
        return Some((Poly::constant(c.clone()), f.div_int_exact(&c), g.div_int_exact(&c)));
    }
    let k = main_var(f, g)?;
    let c = f.content().gcd(&g.content());
    let f = f.div_int_exact(&c);
    let g = g.div_int_exact(&c);
    let fn_ = f.max_norm();
    let gn = g.max_norm();
    let b: BigInt = BigInt::from(2) * (&fn_).min(&gn) + 29;
    let s = BigInt::from(99) * b.sqrt();
    let l = (&fn_ / f.lc().abs()).min(&gn / g.lc().abs()) * 2 + 2;
    let mut x = std::cmp::max(std::cmp::min(b.clone(), s), l);
    for _ in 0..HEU_TRIES {
        let ff = f.eval_var(k, &x);
        let gg = g.eval_var(k, &x);
        if !ff.is_zero() && !gg.is_zero() {
            let (h, cff, cfg) = heu_gcd(&ff, &gg)?;
            let h = interpolate(&h, &x, k).primitive().1;
            if !h.is_zero() {
                if let Some(a) = f.exact_div(&h) {
                    if let Some(bb) = g.exact_div(&h) {
                        return Some((h.scale(&c), a, bb));
                    }
                }
            }
            let cff = interpolate(&cff, &x, k);
            if !cff.is_zero() {
                if let Some(h) = f.exact_div(&cff) {
                    if !h.is_zero() {
                        if let Some(bb) = g.exact_div(&h) {
                            return Some((h.scale(&c), cff, bb));
                        }
                    }
                }
            }
            let cfg = interpolate(&cfg, &x, k);
            if !cfg.is_zero() {
                if let Some(h) = g.exact_div(&cfg) {
                    if !h.is_zero() {
                        if let Some(a) = f.exact_div(&h) {
                            return Some((h.scale(&c), a, cfg));
                        }
                    }
                }
            }
        }
        let r = x.sqrt().sqrt();
        x = BigInt::from(73794) * &x * r / 27011;
    }
    None
}

/// Gcd of a list of polynomials (with content and sign normalization).
fn gcd_many(ps: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for p in ps {
        if p.is_zero() {
            continue;
        }
        g = if g.is_zero() { p.clone() } else { gcd(&g, p) };
        if g.is_one() {
            break;
        }
    }
    if !g.is_zero() && g.lc().is_negative() {
        g.neg()
    } else {
        g
    }
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().is_some_and(|p| p.is_zero()) {
        v.pop();
    }
}

fn prem(f: &[Poly], g: &[Poly]) -> Vec<Poly> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    let lg = g[dg].clone();
    let mut times = (f.len() as i64) - (dg as i64);
    trim(&mut r);
    while r.len() > dg && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - dg;
        for p in r.iter_mut() {
            *p = p.mul(&lg);
        }
        for (j, gj) in g.iter().enumerate() {
            r[j + shift] = r[j + shift].sub(&gj.mul(&lr));
        }
        trim(&mut r);
        times -= 1;
    }
    while times > 0 {
        for p in r.iter_mut() {
            *p = p.mul(&lg);
        }
        times -= 1;
    }
    r
}

/// Recursive primitive PRS in the main variable.
pub fn prs_gcd(f: &Poly, g: &Poly) -> Poly {
    if f.is_zero() {
        return gcd_many(std::slice::from_ref(g));
    }
    if g.is_zero() {
        return gcd_many(std::slice::from_ref(f));
    }
    let k = match main_var(f, g) {
        Some(k) => k,
        None => return Poly::constant(f.content().gcd(&g.content())),
    };
    let mut a = f.to_univariate(k);
    let mut b = g.to_univariate(k);
    let ca = gcd_many(&a);
    let cb = gcd_many(&b);
    let cont = gcd(&ca, &cb);
    for p in a.iter_mut() {
        *p = p.exact_div(&ca).unwrap();
    }
    for p in b.iter_mut() {
        *p = p.exact_div(&cb).unwrap();
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() && b.len() > 1 {
        let r = prem(&a, &b);
        a = b;
        if r.is_empty() {
            b = Vec::new();
            break;
        }
        let cr = gcd_many(&r);
        b = r.iter().map(|p| p.exact_div(&cr).unwrap()).collect();
    }
    let h = if b.len() == 1 {
        Poly::one()
    } else {
        let ch = gcd_many(&a);
        let pa: Vec<Poly> = a.iter().map(|p| p.exact_div(&ch).unwrap()).collect();
        Poly::from_univariate(k, &pa)
    };
    let h = h.mul(&cont);
    if h.lc().is_negative() {
        h.neg()
    } else {
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::mono::{AL, QT, Z};

    fn p(terms: &[(i64, [u16; NVARS])]) -> Poly {
        Poly::from_terms(terms.iter().map(|(c, e)| (Mono::from_exps(e), BigInt::from(*c))).collect())
    }

    #[test]
    fn common_factor_recovered() {
        let x = Poly::var(QT);
        let y = Poly::var(Z);
        let w = Poly::var(AL);
        let common = x.mul(&y).add(&Poly::from_i64(3)).sub(&w.mul(&w));
        let f = common.mul(&x.add(&y));
        let g = common.mul(&x.sub(&Poly::from_i64(7)).mul(&w.add(&Poly::one())));
        let h = gcd(&f, &g);
        assert_eq!(h, common);
        assert_eq!(prs_gcd(&f, &g), common);
    }

    #[test]
    fn integer_content_included() {
        let f = p(&[(6, [1, 0, 0, 0, 0, 0]), (4, [0; NVARS])]);
        let g = p(&[(9, [1, 0, 0, 0, 0, 0]), (6, [0; NVARS])]);
        assert_eq!(gcd(&f, &g), p(&[(3, [1, 0, 0, 0, 0, 0]), (2, [0; NVARS])]));
    }

    #[test]
    fn monomial_content() {
        let f = p(&[(1, [3, 1, 0, 0, 0, 0]), (1, [2, 2, 0, 0, 0, 0])]);
        let g = p(&[(2, [2, 0, 0, 0, 0, 0])]);
        assert_eq!(gcd(&f, &g), p(&[(1, [2, 0, 0, 0, 0, 0])]));
    }
}
