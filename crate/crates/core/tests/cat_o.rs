use qaffine::cat_o::*;
use qaffine::findim::{build_simple, check_relations};
use qaffine::rootdata::Weight;
use qaffine::scalars::{sc, Scalar};
use std::time::Instant;

fn z() -> Scalar {
    sc("z")
}

#[test]
fn verma_dimensions() {
    let a = Weight::base_a();
    // PBW count for affine sl₂: 1, 2, 4, 8 at F-degrees 0..3
    let dims: Vec<usize> = (1..=4).map(|n| verma_va(a, &z(), n).dim()).collect();
    assert_eq!(dims, vec![1, 3, 7, 15]);
    let v = verma_va(a, &z(), 2);
    let mut w = v.module.weights.clone();
    w.sort();
    let mut e = vec![a, a.plus_root(0, -1), a.plus_root(1, -1)];
    e.sort();
    assert_eq!(w, e);
}

#[test]
fn verma_relations_and_z() {
    let t = Instant::now();
    let v = verma_va(Weight::base_a(), &z(), 4);
    let r = check_relations(&v.module, v.inner_levels());
    assert!(r.all_pass(), "{:?}", r.failures());
    assert_eq!(v.module.z, z());
    eprintln!("M_4 relations {:?}", t.elapsed());
}

#[test]
fn omega_routes_agree_and_intertwine() {
    let t0 = Instant::now();
    let a = Weight::base_a();
    let v = verma_va(a, &z(), 4);
    let om_r = v.omega(OmegaRoute::Recursion).unwrap();
    let om_d = v.omega(OmegaRoute::DualBasis).unwrap();
    assert_eq!(om_r, om_d);
    let (t, route) = v.sugawara(a);
    assert_eq!(route, OmegaRoute::Recursion);
    assert!(t.get(0, 0).is_one());
    for (name, nnz) in intertwining_residuals(&v.module, &t, None) {
        assert_eq!(nnz, 0, "{name}");
    }
    let sp = spectrum(&t, &v.levels).unwrap();
    assert!(sp.on_grid(&z()));
    assert!(sp.inclusion_holds(&z()));
    assert_eq!(sp.levels[0], vec![(Scalar::one(), 1)]);
    let q1 = sc("z^4*q^2");
    assert_eq!(sp.levels[1], vec![(q1, 2)]);
    eprintln!("Ω routes {:?}", t0.elapsed());
}

#[test]
fn t_check_on_omega_twist() {
    let b = Weight::base_b();
    let v = verma_va(b, &z(), 3);
    let (t, _) = v.sugawara(b);
    let w = v.module.omega_twist();
    let tc = t_check(&t).unwrap();
    for (name, nnz) in t_check_residuals(&w, &tc) {
        assert_eq!(nnz, 0, "{name}");
    }
}

#[test]
fn generalized_verma_filtration() {
    let (m, ok) = filtration_example(&z(), 3).unwrap();
    assert!(ok);
    assert!(matches!(m.omega_recursion(), Err(CatError::Unsupported)));
    let (t, route) = m.sugawara(Weight::base_a());
    assert_eq!(route, OmegaRoute::DualBasis);
    for (name, nnz) in intertwining_residuals(&m.module, &t, m.inner_levels()) {
        assert_eq!(nnz, 0, "{name}");
    }
    let r = check_relations(&m.module, m.inner_levels());
    assert!(r.all_pass(), "{:?}", r.failures());
}

#[test]
fn nil_module_validation() {
    assert!(NilModule::new(vec![Weight::ZERO], [qaffine::linalg::Mat::identity(1), qaffine::linalg::Mat::zeros(1, 1)]).is_err());
    assert_eq!(NilModule::one_dim(Weight::base_a()).level, 1);
}

#[test]
fn dotted_tensor_v1() {
    let t0 = Instant::now();
    let a = Weight::base_a();
    let v = verma_va(a, &z(), 2);
    let x = build_simple(1).unwrap();
    let d = dotted_tensor(&v, &x, 2, a).unwrap();
    assert_eq!(d.dim(), v.dim() * x.dim());
    assert!(d.p_independent);
    let lv = d.levels.clone();
    let r = check_relations(&d.module, Some((&lv, 0)));
    assert!(r.all_pass(), "{:?}", r.failures());
    for (name, nnz) in intertwining_residuals(&d.module, &d.t, Some((&lv, 0))) {
        assert_eq!(nnz, 0, "{name}");
    }
    eprintln!("dotted {:?}", t0.elapsed());
}
