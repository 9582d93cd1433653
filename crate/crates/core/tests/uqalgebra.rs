use qaffine::findim::{build_simple, Module};
use qaffine::linalg::Mat;
use qaffine::scalars::{sc, Scalar};
use qaffine::uqalgebra::*;

fn words() -> Vec<Word> {
    ["E0", "F1", "E1*F0", "F0*E0*K(1,-1)", "E1*E1*F1", "Z*F0*F1"].iter().map(|s| parse_word(s).unwrap()).collect()
}

fn triple(t: &[(Scalar, Word, Word, Word)], a: &Module, b: &Module, c: &Module) -> Mat {
    let n = a.dim() * b.dim() * c.dim();
    let mut acc = Mat::zeros(n, n);
    for (k, x, y, z) in t {
        acc = acc.add(&a.word(x).kron(&b.word(y)).kron(&c.word(z)).scale(k));
    }
    acc
}

#[test]
fn coproduct_matches_tensor_action() {
    let (a, b) = (build_simple(1).unwrap(), build_simple(2).unwrap());
    let ab = a.tensor(&b);
    for w in words() {
        let x = AlgElement::word(w.clone());
        assert_eq!(x.coproduct().act(&a, &b), x.act(&ab), "{}", word_string(&w));
    }
}

#[test]
fn coassociativity() {
    let v = build_simple(1).unwrap();
    for w in words() {
        let d = AlgElement::word(w).coproduct();
        assert_eq!(triple(&d.coproduct_side(true), &v, &v, &v), triple(&d.coproduct_side(false), &v, &v, &v));
    }
}

#[test]
fn antipode_axiom() {
    // m (S ⊗ id) Δ(x) = ε(x) on V(2)
    let v = build_simple(2).unwrap();
    for w in words() {
        let x = AlgElement::word(w);
        let mut acc = Mat::zeros(v.dim(), v.dim());
        for (c, l, r) in &x.coproduct().terms {
            let s = AlgElement::word(l.clone()).antipode().act(&v);
            acc = acc.add(&s.mul(&v.word(r)).scale(c));
        }
        assert_eq!(acc, Mat::identity(v.dim()).scale(&x.counit()));
    }
}

#[test]
fn antipode_gives_dual_action() {
    let v = build_simple(2).unwrap();
    let d = v.dual();
    for w in words() {
        let x = AlgElement::word(w);
        assert_eq!(x.act(&d), x.antipode().act(&v).transpose());
    }
}

#[test]
fn twists_on_elements_match_module_twists() {
    let v = build_simple(1).unwrap();
    let u = sc("u");
    for w in words() {
        let x = AlgElement::word(w);
        assert_eq!(x.twist(TwistKind::Psi, &u).act(&v), x.act(&v.twist(&u, false)));
        assert_eq!(x.twist(TwistKind::Phi, &u).act(&v), x.act(&v.twist(&u, true)));
        assert_eq!(x.twist(TwistKind::Omega, &u).act(&v), x.act(&v.omega_twist()));
        let om = x.twist(TwistKind::Omega, &u).twist(TwistKind::Omega, &u);
        assert_eq!(om, x);
    }
}

#[test]
fn parse_round_trip_and_errors() {
    for w in words() {
        assert_eq!(parse_word(&word_string(&w)).unwrap(), w);
    }
    assert!(parse_word("E2").is_err());
    assert!(parse_word("K(1)").is_err());
    let e = parse_element("qt^2 : E0*F0; F1").unwrap();
    assert_eq!(e.terms.len(), 2);
    assert_eq!(e.terms[0].0, sc("qt^2"));
}
