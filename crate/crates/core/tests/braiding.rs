use num_complex::Complex64;
use qaffine::braiding::*;
use qaffine::findim::{build_simple, Module};
use qaffine::linalg::{Mat, SerMat};
use qaffine::scalars::{assignment, sc, Scalar, QT};

fn v(m: usize) -> Module {
    build_simple(m).unwrap()
}

#[test]
fn xi_examples() {
    let x = xi_operator(&v(1), &v(1)).unwrap();
    assert_eq!(*x.get(0, 0), sc("qt^-2"));
    assert_eq!(*x.get(1, 1), sc("qt^2"));
    // symmetric in the two factors
    let (a, b) = (v(1), v(2));
    let p = qaffine::findim::swap(a.dim(), b.dim());
    assert_eq!(p.mul(&xi_operator(&a, &b).unwrap()), xi_operator(&b, &a).unwrap().mul(&p));
    // zero weight pairs trivially
    let one = Module::trivial();
    assert!(xi_operator(&one, &a).unwrap().is_identity());
}

#[test]
fn v1_v1_rank_one_residual_zero_and_oracle() {
    let (x, y) = (v(1), v(1));
    let s = solve_braiding(&x, &y, 6).unwrap().gauged().unwrap();
    assert_eq!(s.kernel_ranks, vec![1; 6]);
    assert_eq!(intertwiner_residual(&s.series, &x, &y), 0);
    assert_eq!(s.series.coeffs[0], xi_sigma(&x, &y).unwrap());
    assert_eq!(oracle_gauged(&x, &y, 6).unwrap(), s.series);
}

#[test]
fn v1_v1_series_frozen() {
    // frozen from the hom-space oracle at order 8
    let s = solve_braiding(&v(1), &v(1), 8).unwrap().gauged().unwrap().series;
    assert_eq!(*s.coeffs[2].get(1, 1), sc("(1-qt^8)/qt^2"));
    assert_eq!(*s.coeffs[4].get(1, 2), sc("qt^10-qt^2"));
    assert_eq!(*s.coeffs[6].get(2, 2), sc("qt^6-qt^14"));
    assert!(s.coeffs[1].is_zero() && s.coeffs[3].is_zero());
}

#[test]
fn other_pairs_match_oracle() {
    for (a, b) in [(1, 2), (2, 1)] {
        let (x, y) = (v(a), v(b));
        let s = solve_braiding(&x, &y, 4).unwrap().gauged().unwrap();
        assert_eq!(intertwiner_residual(&s.series, &x, &y), 0);
        assert_eq!(oracle_gauged(&x, &y, 4).unwrap(), s.series);
    }
}

#[test]
fn hexagon_braid_unit() {
    let x = v(1);
    let h = verify_hexagon(&x, &x, &x, 4).unwrap();
    assert!(h.all_pass(), "{:?}", h);
    let b = verify_braid(&x, &x, &x, 4).unwrap();
    assert!(b.all_pass(), "{:?}", b);
    let u = verify_unit(&v(2), 4).unwrap();
    assert!(u.all_pass(), "{:?}", u);
}

#[test]
fn equivariance_under_rescaling() {
    let (x, y) = (v(1), v(2));
    let u = sc("u");
    let s = solve_braiding(&x, &y, 5).unwrap().gauged().unwrap().series;
    assert_eq!(intertwiner_residual(&s.scale_t(&u), &x.twist(&u, false), &y), 0);
}

#[test]
fn functoriality_under_basis_change() {
    let x = v(1);
    let y = v(1);
    let c = sc("v");
    let d = Mat::diag(&[Scalar::one(), c.clone()]);
    let di = Mat::diag(&[Scalar::one(), c.inv().unwrap()]);
    let mut x2 = x.clone();
    for i in 0..2 {
        x2.e[i] = d.mul(&x.e[i]).mul(&di);
        x2.f[i] = d.mul(&x.f[i]).mul(&di);
    }
    let n = 5;
    let s1 = solve_braiding(&x, &y, n).unwrap().gauged().unwrap().series;
    let s2 = solve_braiding(&x2, &y, n).unwrap().gauged().unwrap().series;
    let id = SerMat::constant(Mat::identity(2), n);
    let f = SerMat::constant(d, n);
    assert_eq!(s2.mul(&f.kron(&id)), id.kron(&f).mul(&s1));
}

#[test]
fn rational_fit_and_poles() {
    let s = solve_braiding(&v(1), &v(1), 16).unwrap().gauged().unwrap().series;
    let fit = rational_fit(&s, 4);
    assert!(fit.certified);
    assert!(fit.surplus >= 2);
    assert_eq!(fit.den_variable_degree(), (4, 1));
    assert_eq!(fit.den, vec![Scalar::one(), Scalar::zero(), sc("-qt^8")]);
    let at = assignment(&[(QT, Complex64::new(0.3, 0.0))]);
    let rep = pole_analysis(&fit, &at, 100.0, Some(&s));
    assert!(rep.zero_excluded);
    // t⁴ = q̃^{-8}: four poles of modulus q̃^{-2}
    assert_eq!(rep.poles.len(), 4);
    for (re, im) in &rep.poles {
        assert!((Complex64::new(*re, *im).norm() - 0.3f64.powi(-2)).abs() < 1e-8);
    }
    assert!(rep.den_residuals.iter().all(|r| *r < 1e-8));
    assert!(rep.ratio_discrepancy.unwrap() < 1e-8);
}

#[test]
fn constant_and_non_rational_fits() {
    let c = SerMat::constant(Mat::identity(2), 6);
    let f = rational_fit(&c, 2);
    assert_eq!(f.den_degree(), 0);
    // exp-like: coefficients 1/k!
    let mut s = SerMat::zeros(1, 1, 12);
    let mut fact = 1i64;
    for k in 0..12 {
        if k > 0 {
            fact *= k as i64;
        }
        s.coeffs[k].set(0, 0, Scalar::ratio(1, fact));
    }
    assert!(!rational_fit(&s, 3).certified);
}
