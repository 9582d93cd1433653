use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qaffine::braiding::{rational_fit, solve_braiding};
use qaffine::findim::build_simple;
use qaffine::qdiff::*;
use qaffine::scalars::{assignment, sc, Scalar, QT, Z};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Coefficients of a product of polynomials, truncated.
fn product(factors: impl Iterator<Item = Vec<f64>>, n: usize) -> Vec<f64> {
    let mut acc = vec![0.0; n];
    acc[0] = 1.0;
    for f in factors {
        let mut out = vec![0.0; n];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                if i + j < n {
                    out[i + j] += a * b;
                }
            }
        }
        acc = out;
    }
    acc
}

fn pochhammer_system(p: f64) -> DifferenceSystem {
    // φ = 1/(1−t), ψ = 1
    DifferenceSystem::scalar(&[c(1.0)], &[c(1.0), c(-1.0)], &[c(1.0)], c(p)).unwrap()
}

fn inverse_system(p: f64) -> DifferenceSystem {
    // φ = 1−t, ψ = 1
    DifferenceSystem::scalar(&[c(1.0), c(-1.0)], &[c(1.0)], &[c(1.0)], c(p)).unwrap()
}

#[test]
fn constant_system_gives_identity() {
    let m = DMatrix::from_row_slice(2, 2, &[c(2.0), c(1.0), c(0.0), c(3.0)]);
    let sys = DifferenceSystem::new(PolyMat::constant(m.clone()), PolyMat::identity(2), PolyMat::constant(m), c(0.4)).unwrap();
    let sol = series_solve(&sys, 10).unwrap();
    assert!(sol.coeffs[1..].iter().all(|f| f.norm() < 1e-15));
    let cert = certify_convergence(&sys, &sol, None);
    assert!(cert.estimated_radius.is_infinite());
}

#[test]
fn euler_expansion_of_pochhammer() {
    let p = 0.5;
    let sol = series_solve(&pochhammer_system(p), 20).unwrap();
    let brute = product((0..200).map(|k| vec![1.0, -p.powi(k)]), 20);
    for j in 0..20 {
        assert!((sol.coeffs[j][(0, 0)].re - brute[j]).abs() < 1e-12, "j = {j}");
        assert!(sol.coeffs[j][(0, 0)].im.abs() < 1e-15);
    }
    // frozen: (−1)^j p^{j(j−1)/2} / (p; p)_j at j = 3
    assert!((brute[3] - (-0.125 / (0.5 * 0.75 * 0.875))).abs() < 1e-15);
}

#[test]
fn inverse_pochhammer_expansion() {
    let p = 0.5;
    let sol = series_solve(&inverse_system(p), 20).unwrap();
    let brute = product((0..200).map(|k| (0..20).map(|j| p.powi(k * j)).collect()), 20);
    for j in 0..20 {
        assert!((sol.coeffs[j][(0, 0)].re - brute[j]).abs() < 1e-12, "j = {j}");
    }
}

fn matrix_system(p: f64) -> DifferenceSystem {
    // φ = [[1/(1−t), t/(1−t)], [0, (3+t)/(1−t)]], ψ = [[1, 0], [t, 3]]
    let m = |a: [f64; 4]| DMatrix::from_row_slice(2, 2, &a.map(c));
    let a = PolyMat { coeffs: vec![m([1.0, 0.0, 0.0, 3.0]), m([0.0, 1.0, 0.0, 1.0])] };
    let b = PolyMat::scalar(&[c(1.0), c(-1.0)], 2);
    let psi = PolyMat { coeffs: vec![m([1.0, 0.0, 0.0, 3.0]), m([0.0, 0.0, 1.0, 0.0])] };
    DifferenceSystem::new(a, b, psi, c(p)).unwrap()
}

#[test]
fn resonance_is_reported() {
    // p·2 = 1 at order 1
    let m = |a: [f64; 4]| DMatrix::from_row_slice(2, 2, &a.map(c));
    let sys = DifferenceSystem::new(
        PolyMat { coeffs: vec![m([1.0, 0.0, 0.0, 2.0]), m([0.0, 1.0, 1.0, 0.0])] },
        PolyMat::identity(2),
        PolyMat::constant(m([1.0, 0.0, 0.0, 2.0])),
        c(0.5),
    )
    .unwrap();
    assert_eq!(series_solve(&sys, 5).unwrap_err(), QdiffError::Resonance { j: 1 });
}

#[test]
fn validation_errors() {
    assert!(matches!(DifferenceSystem::scalar(&[c(1.0)], &[c(1.0)], &[c(1.0)], c(1.5)), Err(QdiffError::Modulus(_))));
    assert!(matches!(DifferenceSystem::scalar(&[c(0.0), c(1.0)], &[c(1.0)], &[c(0.0)], c(0.5)), Err(QdiffError::SingularAtZero)));
    assert!(matches!(DifferenceSystem::scalar(&[c(1.0)], &[c(1.0)], &[c(2.0)], c(0.5)), Err(QdiffError::Inconsistent(_))));
}

#[test]
fn residual_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for sys in [pochhammer_system(0.5), inverse_system(0.5), matrix_system(0.3)] {
        let sol = series_solve(&sys, 60).unwrap();
        let cert = certify_convergence(&sys, &sol, None);
        let r = cert.eval_radius().min(0.9 * cert.holomorphy_radius);
        for _ in 0..100 {
            let t = Complex64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            let res = functional_residual(&sys, &sol, t);
            assert!(res <= 1e-10, "{res} at {t}");
        }
    }
}

#[test]
fn convergence_radius_respects_stated_bound() {
    for sys in [pochhammer_system(0.5), matrix_system(0.5)] {
        let sol = series_solve(&sys, 40).unwrap();
        let cert = certify_convergence(&sys, &sol, None);
        assert!((cert.holomorphy_radius - 1.0).abs() < 1e-9);
        assert!(cert.respects_stated_bound, "{cert:?}");
        assert!(cert.respects_majorant_bound, "{cert:?}");
    }
    // the product is entire: the estimate keeps growing with the order
    let short = certify_convergence(&pochhammer_system(0.5), &series_solve(&pochhammer_system(0.5), 20).unwrap(), None);
    let long = certify_convergence(&pochhammer_system(0.5), &series_solve(&pochhammer_system(0.5), 40).unwrap(), None);
    assert!(long.estimated_radius > short.estimated_radius && short.estimated_radius > 100.0);
}

#[test]
fn entire_phi_with_polar_solution() {
    // φ = 1−t is entire yet F has a pole at t = 1
    let sys = inverse_system(0.5);
    let sol = series_solve(&sys, 60).unwrap();
    let cert = certify_convergence(&sys, &sol, None);
    assert!(cert.holomorphy_radius.is_infinite());
    assert!((cert.estimated_radius - 1.0).abs() < 1e-3);
    assert!(!cert.respects_stated_bound);
    assert!(cert.respects_majorant_bound);
    assert!(cert.majorant_bound <= 1.0);
}

#[test]
fn continuation_matches_direct_product() {
    let p = 0.5;
    let sys = pochhammer_system(p);
    let sol = series_solve(&sys, 40).unwrap();
    let r = certify_convergence(&sys, &sol, None).eval_radius();
    for t in [2.0, 2.5, -3.7, 7.0] {
        let direct: f64 = (0..400).map(|k| 1.0 - t * p.powi(k)).product();
        let v = continue_meromorphic(&sys, &sol, r.min(1.0), c(t)).value().unwrap()[(0, 0)];
        assert!((v - c(direct)).norm() < 1e-10 * direct.abs().max(1.0), "t = {t}: {v} vs {direct}");
    }
    assert_eq!(*continue_meromorphic(&sys, &sol, r, c(0.0)).value().unwrap(), DMatrix::identity(1, 1));
}

#[test]
fn pole_ladder_detected() {
    let p = 0.5;
    let sys = inverse_system(p);
    let sol = series_solve(&sys, 60).unwrap();
    let r = certify_convergence(&sys, &sol, None).eval_radius();
    for k in 0..6 {
        match continue_meromorphic(&sys, &sol, r, c(p.powi(-k))) {
            Continuation::Pole { k: kk, singularity } => {
                assert_eq!(kk, k as usize);
                assert!((singularity - c(1.0)).norm() < 1e-9);
            }
            other => panic!("no pole at p^-{k}: {other:?}"),
        }
        let t = 1.1 * p.powi(-k);
        let direct: f64 = (0..400).map(|j| 1.0 / (1.0 - t * p.powi(j))).product();
        let v = continue_meromorphic(&sys, &sol, r, c(t)).value().unwrap()[(0, 0)];
        assert!((v - c(direct)).norm() < 1e-9 * direct.abs().max(1.0));
    }
    let trace = continuation_trace(&sys, &sol, r, &[c(1.0), c(1.5), c(2.0), c(3.0)]);
    assert_eq!(trace.iter().map(|x| x.pole).collect::<Vec<_>>(), vec![true, false, true, false]);
}

#[test]
fn exact_mode_matches_euler() {
    let spec = parse_system(r#"{"p": "u", "phi": [["1/(1-t)"]]}"#).unwrap();
    let (phi, psi, p) = spec.exact(8).unwrap();
    let f = series_solve_exact(&phi, &psi, &p, 8).unwrap();
    assert_eq!(exact_residual(&phi, &psi, &p, &f), 0);
    let mut poch = Scalar::one();
    for j in 0..8i32 {
        if j > 0 {
            poch = &poch * &(&Scalar::one() - &sc("u").pow(j));
        }
        let want = sc("-1").pow(j).mul(&sc("u").pow(j * (j - 1) / 2)).div(&poch);
        assert_eq!(*f.coeffs[j as usize].get(0, 0), want);
    }
}

#[test]
fn exact_resonance() {
    let spec = parse_system(r#"{"p": "1/2", "phi": [["1", "t"], ["t", "2"]], "psi": [["1", "0"], ["0", "2"]]}"#).unwrap();
    let (phi, psi, p) = spec.exact(4).unwrap();
    assert_eq!(series_solve_exact(&phi, &psi, &p, 4).unwrap_err(), QdiffError::Resonance { j: 1 });
}

#[test]
fn json_numeric_system() {
    let spec = parse_system(r#"{"p": "qt^2", "phi": [["1/(1-t)"]], "assign": {"qt": 0.5}}"#).unwrap();
    let sys = spec.numeric().unwrap();
    assert!((sys.p - c(0.25)).norm() < 1e-15);
    let sol = series_solve(&sys, 20).unwrap();
    let brute = product((0..200).map(|k| vec![1.0, -(0.25f64).powi(k)]), 20);
    assert!((0..20).all(|j| (sol.coeffs[j][(0, 0)].re - brute[j]).abs() < 1e-12));
    assert!(parse_system(r#"{"p": "1/2", "phi": [["v"]]}"#).unwrap().numeric().is_err());
    assert!(parse_system(r#"{"p": "1/2", "phi": [["1", "2"]]}"#).unwrap().numeric().is_err());
    assert!(parse_system(r#"{"p": "1/2", "phi": [["1"]], "bogus": 1}"#).is_err());
}

#[test]
fn gluing_with_braiding_fit() {
    let x = build_simple(1).unwrap();
    let s = solve_braiding(&x, &x, 16).unwrap().gauged().unwrap().series;
    let fit = rational_fit(&s, 4);
    assert!(fit.certified);
    let at = assignment(&[(QT, c(0.3)), (Z, c(20.0))]);
    let p = sc("1/(z*qt^2)").eval(&at).unwrap();
    let rep = glue_braiding(&fit, &s, &at, p, 60).unwrap();
    assert!(rep.inner_points > 0 && rep.outer_points > 0);
    assert!(rep.passes(1e-8), "{rep:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Conjugating by a permutation permutes the solution.
    #[test]
    fn uniqueness_under_reordering(a in proptest::collection::vec(-1.0f64..1.0, 8), d in proptest::collection::vec(0.5f64..2.0, 2), p in 0.1f64..0.6) {
        let m = |v: &[f64]| DMatrix::from_row_slice(2, 2, &v.iter().map(|x| c(*x)).collect::<Vec<_>>());
        let phi0 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(d[0]), c(d[0] * 1.7 + d[1])]));
        let phi = PolyMat { coeffs: vec![phi0.clone(), m(&a[..4])] };
        let psi = PolyMat { coeffs: vec![phi0, m(&a[4..])] };
        let sys = DifferenceSystem::new(phi.clone(), PolyMat::identity(2), psi.clone(), c(p)).unwrap();
        let sw = m(&[0.0, 1.0, 1.0, 0.0]);
        let conj = |q: &PolyMat| PolyMat { coeffs: q.coeffs.iter().map(|x| &sw * x * &sw).collect() };
        let sys2 = DifferenceSystem::new(conj(&phi), PolyMat::identity(2), conj(&psi), c(p)).unwrap();
        match (series_solve(&sys, 12), series_solve(&sys2, 12)) {
            (Ok(f), Ok(g)) => {
                for j in 0..12 {
                    prop_assert!((&sw * &f.coeffs[j] * &sw - &g.coeffs[j]).norm() < 1e-9 * (1.0 + f.coeffs[j].norm()));
                }
            }
            (Err(e1), Err(e2)) => prop_assert_eq!(e1, e2),
            _ => prop_assert!(false, "solvability differs"),
        }
    }

    /// Scalar systems `φ = (1 + at)/(1 − bt)`: residual vanishes near 0.
    #[test]
    fn scalar_residual(a in -1.0f64..1.0, b in -0.9f64..0.9, p in 0.1f64..0.9, r in 0.0f64..1.0, th in 0.0f64..std::f64::consts::TAU) {
        let sys = DifferenceSystem::scalar(&[c(1.0), c(a)], &[c(1.0), c(-b)], &[c(1.0)], c(p)).unwrap();
        let sol = series_solve(&sys, 60).unwrap();
        let cert = certify_convergence(&sys, &sol, None);
        let t = Complex64::from_polar(r * cert.eval_radius().min(0.5), th);
        prop_assert!(functional_residual(&sys, &sol, t) < 1e-10);
    }
}

#[test]
fn pole_table_lists_ladders_by_modulus() {
    let sys = inverse_system(0.5);
    let sol = series_solve(&sys, 60).unwrap();
    let r = certify_convergence(&sys, &sol, None).eval_radius();
    let rows = pole_table(&sys, &sol, r, 10.0);
    assert_eq!(rows.iter().map(|p| (p.k, p.modulus)).collect::<Vec<_>>(), vec![(0, 1.0), (1, 2.0), (2, 4.0), (3, 8.0)]);
    assert!(rows.iter().all(|p| p.confirmed && p.im == 0.0));
    // entire solution: no candidates
    let sys = pochhammer_system(0.5);
    let sol = series_solve(&sys, 40).unwrap();
    assert!(pole_table(&sys, &sol, 1.0, 10.0).is_empty());
    // det A = (1 − t)(3 + t)·… for the matrix system: zeros at 1 and −3
    let m = |a: [f64; 4]| DMatrix::from_row_slice(2, 2, &a.map(c));
    let a = PolyMat { coeffs: vec![m([1.0, 0.0, 0.0, 3.0]), m([-1.0, 0.0, 0.0, 1.0])] };
    let sys = DifferenceSystem::new(a, PolyMat::identity(2), PolyMat::constant(m([1.0, 0.0, 0.0, 3.0])), c(0.5)).unwrap();
    let sol = series_solve(&sys, 40).unwrap();
    let r = certify_convergence(&sys, &sol, None).eval_radius();
    let mods: Vec<f64> = pole_table(&sys, &sol, r, 7.0).iter().map(|p| (p.modulus * 1e9).round() / 1e9).collect();
    assert_eq!(mods, vec![1.0, 2.0, 3.0, 4.0, 6.0]);
}
