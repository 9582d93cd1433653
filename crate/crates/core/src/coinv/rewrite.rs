//! Moving a factor across a tensor product modulo coinvariants.

use crate::findim::Module;
use crate::scalars::Scalar;
use crate::uqalgebra::{kt, AlgElement, Gen, TensorElement};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `x ⊗ 1 ≡ 1 ⊗ S(x)`.
    Left,
    /// `1 ⊗ x ≡ S⁻¹(x) ⊗ 1`.
    Right,
}

/// `source = target + Σ_r Δ(y_r) · (a_r ⊗ b_r)` with `ε(y_r) = 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RewriteRule {
    pub side: Side,
    pub source: TensorElement,
    pub target: TensorElement,
    /// `(y_r, a_r ⊗ b_r)`.
    pub ideal: Vec<(AlgElement, TensorElement)>,
}

fn inv_antipode(x: &AlgElement) -> AlgElement {
    let m1 = Scalar::from_int(-1);
    let mut out = AlgElement::zero();
    for (c, w) in &x.terms {
        let mut acc = AlgElement { terms: vec![(c.clone(), vec![])] };
        for g in w.iter().rev() {
            let s = match *g {
                Gen::E(i) => AlgElement { terms: vec![(m1.clone(), vec![Gen::E(i), kt(i, -1)])] },
                Gen::F(i) => AlgElement { terms: vec![(m1.clone(), vec![kt(i, 1), Gen::F(i)])] },
                Gen::K(a, b) => AlgElement::gen(Gen::K(-a, -b)),
                Gen::Z(e) => AlgElement::gen(Gen::Z(-e)),
            };
            acc = acc.mul(&s);
        }
        out = out.add(&acc);
    }
    out
}

/// The identity `x ⊗ 1 = Σ Δ(x'_r)(1 ⊗ S(x''_r))` (or its mirror) split into
/// the transported term and explicit `Δ(H₀)`-terms.
pub fn rewrite_across(x: &AlgElement, side: Side) -> RewriteRule {
    let mut source = TensorElement::default();
    let mut target = TensorElement::default();
    let mut ideal = Vec::new();
    for (c, w) in &x.terms {
        let one = AlgElement::word(w.clone());
        match side {
            Side::Left => {
                source.terms.push((c.clone(), w.clone(), vec![]));
                for (s, t) in one.antipode().terms {
                    target.terms.push((c * &s, vec![], t));
                }
                for (d, l, r) in one.coproduct().terms {
                    if l.is_empty() {
                        continue;
                    }
                    let y = AlgElement::word(l);
                    let y0 = y.add(&AlgElement::one().scale(&y.counit().neg()));
                    let sr = AlgElement::word(r).antipode();
                    let mut te = TensorElement::default();
                    for (s, t) in sr.terms {
                        te.terms.push((&(c * &d) * &s, vec![], t));
                    }
                    ideal.push((y0, te));
                }
            }
            Side::Right => {
                source.terms.push((c.clone(), vec![], w.clone()));
                for (s, t) in inv_antipode(&one).terms {
                    target.terms.push((c * &s, t, vec![]));
                }
                for (d, l, r) in one.coproduct().terms {
                    if r.is_empty() {
                        continue;
                    }
                    let y = AlgElement::word(r);
                    let y0 = y.add(&AlgElement::one().scale(&y.counit().neg()));
                    let sl = inv_antipode(&AlgElement::word(l));
                    let mut te = TensorElement::default();
                    for (s, t) in sl.terms {
                        te.terms.push((&(c * &d) * &s, t, vec![]));
                    }
                    ideal.push((y0, te));
                }
            }
        }
    }
    RewriteRule { side, source, target, ideal }
}

impl RewriteRule {
    /// Number of nonzero entries of `source - target - Σ Δ(y_r)(a_r ⊗ b_r)`
    /// acting on `M ⊗ N`, and whether every `y_r` has `ε(y_r) = 0`.
    pub fn residual(&self, m: &Module, n: &Module) -> (usize, bool) {
        let mut acc = self.source.act(m, n).sub(&self.target.act(m, n));
        let mut aug = true;
        for (y, te) in &self.ideal {
            aug &= y.counit().is_zero();
            let dy = y.coproduct().act(m, n);
            acc = acc.sub(&dy.mul(&te.act(m, n)));
        }
        (acc.nnz(), aug)
    }

    /// `x = 1`: nothing to move.
    pub fn is_trivial(&self) -> bool {
        self.ideal.is_empty() && self.source == self.target
    }
}
