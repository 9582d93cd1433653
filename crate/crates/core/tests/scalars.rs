use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;
use qaffine::scalars::gcd::{gcd, prs_gcd};
use qaffine::scalars::mono::Mono;
use qaffine::scalars::{sc, Poly, Scalar, TruncSeries, NVARS, QT, Z};

fn poly_strategy(vars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::array::uniform3(0u16..3), -4i64..5), 1..4).prop_map(move |terms| {
        Poly::from_terms(
            terms
                .into_iter()
                .map(|(e, c)| {
                    let mut ex = [0u16; NVARS];
                    for (k, x) in e.iter().enumerate().take(vars) {
                        ex[k] = *x;
                    }
                    (Mono::from_exps(&ex), BigInt::from(c))
                })
                .collect(),
        )
    })
}

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (poly_strategy(3), poly_strategy(3), -2i32..3).prop_map(|(n, d, e)| {
        let d = if d.is_zero() { Poly::one() } else { d };
        let mut m = [0; NVARS];
        m[QT] = e;
        Scalar::from_parts(m, n, d)
    })
}

fn point() -> [Complex64; NVARS] {
    [
        Complex64::new(0.31, 0.17),
        Complex64::new(1.3, -0.4),
        Complex64::new(0.7, 0.9),
        Complex64::new(-1.1, 0.2),
        Complex64::new(0.5, 0.5),
        Complex64::new(2.0, 0.1),
    ]
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12 * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn numeric_eval_is_a_homomorphism(a in scalar_strategy(), b in scalar_strategy()) {
        let p = point();
        let (Ok(x), Ok(y)) = (a.eval(&p), b.eval(&p)) else { return Ok(()) };
        if let Ok(s) = (&a + &b).eval(&p) {
            prop_assert!(close(s, x + y));
        }
        if let Ok(m) = (&a * &b).eval(&p) {
            prop_assert!(close(m, x * y));
        }
    }

    #[test]
    fn gcd_divides_and_matches_prs(f in poly_strategy(3), g in poly_strategy(3), h in poly_strategy(3)) {
        prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
        let a = f.mul(&h);
        let b = g.mul(&h);
        let d = gcd(&a, &b);
        prop_assert!(a.exact_div(&d).is_some());
        prop_assert!(b.exact_div(&d).is_some());
        prop_assert!(d.exact_div(&h.primitive().1).is_some() || d.exact_div(&h.primitive().1.neg()).is_some());
        let e = prs_gcd(&a, &b);
        prop_assert_eq!(d, e);
    }

    #[test]
    fn display_round_trips(a in scalar_strategy()) {
        let s = a.to_string();
        let b: Scalar = s.parse().unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn scale_t_composes(c in prop::collection::vec(scalar_strategy(), 1..4), u in scalar_strategy(), v in scalar_strategy()) {
        let n = c.len();
        let f = TruncSeries::from_coeffs(c, n);
        prop_assert_eq!(f.scale_t(&u).scale_t(&v), f.scale_t(&(&u * &v)));
    }
}

#[test]
fn spec_examples() {
    assert_eq!(&(&sc("qt") + &sc("1")) * &(&sc("qt") - &sc("1")), sc("qt^2 - 1"));
    assert_eq!(sc("qt^2").inv().unwrap().to_string(), "1/(qt^2)");
    assert_eq!(sc("q"), Scalar::qt_pow(4));
    let v = sc("q").eval(&qaffine::scalars::assignment(&[(QT, Complex64::new(0.3, 0.0))])).unwrap();
    assert!((v.re - 0.0081).abs() < 1e-15);
    let e = sc("1/(qt - 1)").eval(&qaffine::scalars::assignment(&[(QT, Complex64::new(1.0, 0.0))]));
    assert!(matches!(e, Err(qaffine::scalars::ScalarError::Pole(_))));
}

#[test]
fn canonical_form_is_syntactic() {
    let a = sc("(qt^2 - z^2)/(qt - z)");
    assert_eq!(a, sc("qt + z"));
    let b = sc("(2*qt + 2)/(4*z)");
    assert_eq!(b.to_string(), "(qt + 1)/(2*z)");
    assert_eq!(sc("(-qt)/(-z)"), sc("qt/z"));
    let _ = Z;
}
