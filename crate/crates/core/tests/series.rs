use hogeom_core::cfunction::c_function;
use hogeom_core::hcseries::{gamma_coeffs, HcConfig, HcEvaluator};
use hogeom_core::localseries::{eval_taylor, f_taylor, g_taylor};
use hogeom_core::multiplicity::Mult;
use hogeom_core::rootsys::RootSystem;
use hogeom_core::taufun::{Engine, EvalOptions, Method};
use hogeom_core::C64;
use proptest::prelude::*;

fn cx(v: &[(f64, f64)]) -> Vec<C64> {
    v.iter().map(|&(a, b)| C64::new(a, b)).collect()
}

#[test]
fn c_function_is_one_at_rho() {
    for r in 1..=3 {
        let rs = RootSystem::build_bc(r).unwrap();
        let m = Mult::new(2.0, 1.0, 1.0);
        let rho: Vec<C64> = rs.rho(&m).into_iter().map(C64::from).collect();
        assert!((c_function(&rs, &m, &rho).unwrap() - 1.0).norm() < 1e-13);
    }
}

#[test]
fn series_and_taylor_overlap_rank_two() {
    let rs = RootSystem::build_bc(2).unwrap();
    let m = Mult::new(1.5, 0.7, 1.0);
    let lam = cx(&[(0.31, 0.4), (1.13, -0.2)]);
    let hc = HcEvaluator::new(&rs, &m, &lam, HcConfig::for_margin(2, 0.2)).unwrap();
    let p = f_taylor(&rs, &m, &lam, 30).unwrap();
    for x in [[0.25, 0.6], [0.3, 0.65], [0.35, 0.7]] {
        let a = hc.eval(&x).unwrap();
        let b = eval_taylor(&p, &x, 0.8).unwrap();
        assert!((a.value - b.value).norm() < 1e-9, "{x:?}: {} {}", a.value, b.value);
    }
}

#[test]
fn rho_gives_one_on_both_paths() {
    let rs = RootSystem::build_bc(2).unwrap();
    let m = Mult::new(2.0, 1.0, 1.0);
    let rho: Vec<C64> = rs.rho(&m).into_iter().map(C64::from).collect();
    let mut hc = Engine::new(&rs, &m, &rho, EvalOptions::with_method(Method::HcSeries)).unwrap();
    let mut ty = Engine::new(&rs, &m, &rho, EvalOptions::with_method(Method::Taylor)).unwrap();
    for x in [[0.5, 1.0], [1.5, 3.0], [2.0, 6.0]] {
        assert!((hc.f(&x).unwrap().0.value - 1.0).norm() < 1e-8);
    }
    for x in [[0.0, 0.0], [0.1, 0.3], [0.3, 0.3], [-0.2, 0.5]] {
        assert!((ty.f(&x).unwrap().0.value - 1.0).norm() < 1e-12);
    }
}

#[test]
fn g_weyl_average_matches_f() {
    let rs = RootSystem::build_bc(2).unwrap();
    let m = Mult::new(2.0, 1.0, 1.0);
    let lam = cx(&[(0.2, 0.7), (0.9, -0.3)]);
    let g = g_taylor(&rs, &m, &lam, 24).unwrap();
    let f = f_taylor(&rs, &m, &lam, 24).unwrap();
    let x = [0.15, -0.35];
    let mean: C64 =
        rs.weyl_elements().iter().map(|w| eval_taylor(&g, &w.act(&x), 0.8).unwrap().value).sum::<C64>() / 8.0;
    assert!((mean - eval_taylor(&f, &x, 0.8).unwrap().value).norm() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn recursion_recheck(ms in 0.3f64..4.0, mm in 0.2f64..3.0, ml in -0.5f64..1.5,
                         l1 in -2.0f64..2.0, l2 in -2.0f64..2.0, i1 in -1.0f64..1.0, i2 in -1.0f64..1.0) {
        let rs = RootSystem::build_bc(2).unwrap();
        let st = gamma_coeffs(&rs, &Mult::new(ms, mm, ml), &cx(&[(l1, i1), (l2, i2)]), 16);
        if let Ok(st) = st {
            prop_assert!(st.recheck(&rs) < 1e-9);
        }
    }

    #[test]
    fn taylor_at_origin_is_one(ms in 0.2f64..4.0, mm in 0.2f64..3.0, ml in -0.05f64..1.5, l1 in -2.0f64..2.0, l2 in -2.0f64..2.0) {
        let rs = RootSystem::build_bc(2).unwrap();
        let m = Mult::new(ms, mm, ml);
        let lam = cx(&[(l1, 0.3), (l2, -0.4)]);
        let f = f_taylor(&rs, &m, &lam, 8).unwrap();
        prop_assert!((eval_taylor(&f, &[0.0, 0.0], 0.8).unwrap().value - 1.0).norm() < 1e-14);
    }
}
