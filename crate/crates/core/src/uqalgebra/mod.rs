//! Generator words, Hopf structure, twists, the half algebra `f` and `Ω`.

mod fbasis;
mod omega;

pub use fbasis::{f_component_basis, FSpaceBasis};
pub use omega::{gradings_upto, omega_coeff, omega_matrix, omega_truncated, OmegaTerm};

use crate::findim::Module;
use crate::linalg::Mat;
use crate::scalars::{Scalar, ScalarError};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A generator. `K(a, b)` is `K̃_0^a K̃_1^b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Gen {
    E(u8),
    F(u8),
    K(i32, i32),
    Z(i32),
}

pub type Word = Vec<Gen>;

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::E(i) => write!(f, "E{i}"),
            Gen::F(i) => write!(f, "F{i}"),
            Gen::K(a, b) => write!(f, "K({a},{b})"),
            Gen::Z(1) => write!(f, "Z"),
            Gen::Z(e) => write!(f, "Z^{e}"),
        }
    }
}

pub fn kt(i: u8, e: i32) -> Gen {
    if i == 0 {
        Gen::K(e, 0)
    } else {
        Gen::K(0, e)
    }
}

/// Formal linear combination of words.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct AlgElement {
    pub terms: Vec<(Scalar, Word)>,
}

/// Element of `U ⊗ U` as a list of word pairs.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct TensorElement {
    pub terms: Vec<(Scalar, Word, Word)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopfMap {
    Coproduct,
    Antipode,
    Counit,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HopfImage {
    Tensor(TensorElement),
    Element(AlgElement),
    Scalar(Scalar),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistKind {
    Psi,
    Phi,
    Omega,
}

impl AlgElement {
    pub fn zero() -> AlgElement {
        AlgElement { terms: vec![] }
    }

    pub fn one() -> AlgElement {
        AlgElement::word(vec![])
    }

    pub fn gen(g: Gen) -> AlgElement {
        AlgElement::word(vec![g])
    }

    pub fn word(w: Word) -> AlgElement {
        AlgElement { terms: vec![(Scalar::one(), w)] }
    }

    pub fn add(&self, o: &AlgElement) -> AlgElement {
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        AlgElement { terms: t }
    }

    pub fn scale(&self, c: &Scalar) -> AlgElement {
        AlgElement { terms: self.terms.iter().map(|(a, w)| (a * c, w.clone())).collect() }
    }

    pub fn mul(&self, o: &AlgElement) -> AlgElement {
        let mut t = Vec::new();
        for (a, w) in &self.terms {
            for (b, v) in &o.terms {
                let mut x = w.clone();
                x.extend(v.iter().copied());
                t.push((a * b, x));
            }
        }
        AlgElement { terms: t }
    }

    /// Action on a module.
    pub fn act(&self, m: &Module) -> Mat {
        let mut acc = Mat::zeros(m.dim(), m.dim());
        for (c, w) in &self.terms {
            acc = acc.add(&m.word(w).scale(c));
        }
        acc
    }

    pub fn hopf(&self, which: HopfMap) -> HopfImage {
        match which {
            HopfMap::Coproduct => HopfImage::Tensor(self.coproduct()),
            HopfMap::Antipode => HopfImage::Element(self.antipode()),
            HopfMap::Counit => HopfImage::Scalar(self.counit()),
        }
    }

    pub fn coproduct(&self) -> TensorElement {
        let mut out = Vec::new();
        for (c, w) in &self.terms {
            let mut acc: Vec<(Scalar, Word, Word)> = vec![(c.clone(), vec![], vec![])];
            for g in w {
                let dg = gen_coproduct(*g);
                let mut next = Vec::with_capacity(acc.len() * dg.len());
                for (a, l, r) in &acc {
                    for (b, gl, gr) in &dg {
                        let mut l2 = l.clone();
                        l2.extend(gl.iter().copied());
                        let mut r2 = r.clone();
                        r2.extend(gr.iter().copied());
                        next.push((a * b, l2, r2));
                    }
                }
                acc = next;
            }
            out.extend(acc);
        }
        TensorElement { terms: out }
    }

    pub fn antipode(&self) -> AlgElement {
        let mut out = AlgElement::zero();
        for (c, w) in &self.terms {
            let mut acc = AlgElement { terms: vec![(c.clone(), vec![])] };
            for g in w.iter().rev() {
                acc = acc.mul(&gen_antipode(*g));
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn counit(&self) -> Scalar {
        let mut s = Scalar::zero();
        for (c, w) in &self.terms {
            if w.iter().all(|g| matches!(g, Gen::K(..) | Gen::Z(_))) {
                s = &s + c;
            }
        }
        s
    }

    /// `ψ_u`, `φ_u` or `ω` applied to every generator (`u` ignored for `ω`).
    pub fn twist(&self, which: TwistKind, u: &Scalar) -> AlgElement {
        let mut out = Vec::new();
        for (c, w) in &self.terms {
            let mut c = c.clone();
            let mut nw = Vec::with_capacity(w.len());
            for g in w {
                let (f, h) = gen_twist(*g, which, u);
                c = &c * &f;
                nw.push(h);
            }
            out.push((c, nw));
        }
        AlgElement { terms: out }
    }
}

impl TensorElement {
    /// Action on `M ⊗ N`.
    pub fn act(&self, m: &Module, n: &Module) -> Mat {
        let mut acc = Mat::zeros(m.dim() * n.dim(), m.dim() * n.dim());
        for (c, l, r) in &self.terms {
            acc = acc.add(&m.word(l).kron(&n.word(r)).scale(c));
        }
        acc
    }

    /// `(Δ ⊗ id)` when `left`, else `(id ⊗ Δ)`; the result acts on a triple product.
    pub fn coproduct_side(&self, left: bool) -> Vec<(Scalar, Word, Word, Word)> {
        let mut out = Vec::new();
        for (c, l, r) in &self.terms {
            let src = if left { l } else { r };
            let d = AlgElement::word(src.clone()).coproduct();
            for (b, x, y) in d.terms {
                if left {
                    out.push((c * &b, x, y, r.clone()));
                } else {
                    out.push((c * &b, l.clone(), x, y));
                }
            }
        }
        out
    }
}

fn gen_coproduct(g: Gen) -> Vec<(Scalar, Word, Word)> {
    let one = Scalar::one();
    match g {
        Gen::E(i) => vec![(one.clone(), vec![Gen::E(i)], vec![]), (one, vec![kt(i, 1)], vec![Gen::E(i)])],
        Gen::F(i) => vec![(one.clone(), vec![Gen::F(i)], vec![kt(i, -1)]), (one, vec![], vec![Gen::F(i)])],
        g => vec![(one, vec![g], vec![g])],
    }
}

fn gen_antipode(g: Gen) -> AlgElement {
    let m1 = Scalar::from_int(-1);
    match g {
        Gen::E(i) => AlgElement { terms: vec![(m1, vec![kt(i, -1), Gen::E(i)])] },
        Gen::F(i) => AlgElement { terms: vec![(m1, vec![Gen::F(i), kt(i, 1)])] },
        Gen::K(a, b) => AlgElement::gen(Gen::K(-a, -b)),
        Gen::Z(e) => AlgElement::gen(Gen::Z(-e)),
    }
}

fn gen_twist(g: Gen, which: TwistKind, u: &Scalar) -> (Scalar, Gen) {
    // affine sl₂: d(i·i)/2 = 2, d h∨ = 4
    match (which, g) {
        (TwistKind::Omega, Gen::E(i)) => (Scalar::one(), Gen::F(i)),
        (TwistKind::Omega, Gen::F(i)) => (Scalar::one(), Gen::E(i)),
        (TwistKind::Omega, Gen::K(a, b)) => (Scalar::one(), Gen::K(-a, -b)),
        (TwistKind::Omega, Gen::Z(e)) => (Scalar::one(), Gen::Z(-e)),
        (TwistKind::Psi, Gen::E(i)) => (u.pow(2), Gen::E(i)),
        (TwistKind::Psi, Gen::F(i)) => (u.pow(-2), Gen::F(i)),
        (TwistKind::Phi, Gen::E(0)) => (u.pow(4), Gen::E(0)),
        (TwistKind::Phi, Gen::F(0)) => (u.pow(-4), Gen::F(0)),
        (_, g) => (Scalar::one(), g),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("at {pos}: {msg}")]
    At { pos: usize, msg: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Parse a single word such as `E0*F1*K(1,0)*Z^-1`; `1` is the empty word.
pub fn parse_word(s: &str) -> Result<Word, ParseError> {
    let s = s.trim();
    if s == "1" {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    let mut pos = 0;
    for tok in s.split('*') {
        let t = tok.trim();
        let err = |m: &str| ParseError::At { pos, msg: format!("{m}: {t:?}") };
        let g = if let Some(r) = t.strip_prefix('E') {
            Gen::E(r.parse::<u8>().ok().filter(|&i| i < 2).ok_or_else(|| err("bad index"))?)
        } else if let Some(r) = t.strip_prefix('F') {
            Gen::F(r.parse::<u8>().ok().filter(|&i| i < 2).ok_or_else(|| err("bad index"))?)
        } else if let Some(r) = t.strip_prefix("K(") {
            let r = r.strip_suffix(')').ok_or_else(|| err("missing ')'"))?;
            let v: Vec<&str> = r.split(',').collect();
            if v.len() != 2 {
                return Err(err("K expects two exponents"));
            }
            let a = v[0].trim().parse().map_err(|_| err("bad exponent"))?;
            let b = v[1].trim().parse().map_err(|_| err("bad exponent"))?;
            Gen::K(a, b)
        } else if t == "Z" {
            Gen::Z(1)
        } else if let Some(r) = t.strip_prefix("Z^") {
            let r = r.trim_start_matches('(').trim_end_matches(')');
            Gen::Z(r.parse().map_err(|_| err("bad exponent"))?)
        } else {
            return Err(err("unknown generator"));
        };
        out.push(g);
        pos += tok.len() + 1;
    }
    Ok(out)
}

/// Parse `c1 [w1] + c2 [w2] ...`: terms separated by `;`, each `coeff : word` or just `word`.
pub fn parse_element(s: &str) -> Result<AlgElement, ParseError> {
    let mut terms = Vec::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once(':') {
            Some((c, w)) => terms.push((c.trim().parse::<Scalar>()?, parse_word(w)?)),
            None => terms.push((Scalar::one(), parse_word(part)?)),
        }
    }
    Ok(AlgElement { terms })
}

pub fn word_string(w: &[Gen]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("*")
}
