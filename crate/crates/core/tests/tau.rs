use hogeom_core::multiplicity::Mult;
use hogeom_core::rankone::{f_ell_r1, f_ell_r1_integral, g_ell_r1, g_ell_r1_difference, g_lambda};
use hogeom_core::rootsys::RootSystem;
use hogeom_core::taufun::{f_ell, g_ell, EvalOptions, Method, TauEvaluator, TauRequest};
use hogeom_core::C64;
use proptest::prelude::*;

// mpmath, 30 digits
#[test]
fn frozen_rank_one_values() {
    let m = Mult::new(2.0, 0.0, 1.0);
    let v = f_ell_r1(&m, 1.0, C64::new(0.5, 0.0), 1.0).unwrap();
    assert!((v - 0.5896635202563175).norm() < 1e-13);
    let m = Mult::new(3.1, 0.0, 1.0);
    let v = f_ell_r1(&m, -0.6, C64::new(0.4, 1.1), 2.3).unwrap();
    assert!((v - C64::new(0.03116268967921173, 0.02178248385363225)).norm() < 1e-13);
    let g = g_lambda(&Mult::new(1.3, 0.0, -0.4), C64::new(0.7, 0.9), 1.7).unwrap();
    assert!((g.value - C64::new(0.8595129352603215, 1.8060534155832672)).norm() < 1e-12);
    let d = g_ell_r1_difference(&Mult::new(3.1, 0.0, 1.0), 0.7, C64::new(0.4, 1.1), 0.9).unwrap();
    let direct = g_ell_r1(&Mult::new(3.1, 0.0, 1.0), -0.7, C64::new(0.4, 1.1), 0.9).unwrap()
        - g_ell_r1(&Mult::new(3.1, 0.0, 1.0), 0.7, C64::new(0.4, 1.1), 0.9).unwrap();
    assert!((d - direct).norm() < 1e-12);
}

#[test]
fn rank_two_routes_agree_in_overlap() {
    let rs = RootSystem::build_bc(2).unwrap();
    let lam = vec![C64::new(0.4, 0.5), C64::new(1.3, -0.2)];
    let x = [0.3, 0.68];
    let a = f_ell(&rs, &TauRequest::new(Mult::new(2.0, 1.0, 1.0), 0.5, lam.clone(), Method::HcSeries).unwrap(), &x)
        .unwrap();
    let b = f_ell(&rs, &TauRequest::new(Mult::new(2.0, 1.0, 1.0), 0.5, lam, Method::Taylor).unwrap(), &x).unwrap();
    assert!((a.value - b.value).norm() < 1e-9);
    assert_eq!(a.label(), "hcseries");
    assert_eq!(b.label(), "taylor");
}

#[test]
fn rho_of_deformed_gives_u_power() {
    let rs = RootSystem::build_bc(2).unwrap();
    let m = Mult::new(2.0, 1.0, 1.0);
    let ell = 0.5;
    let rho: Vec<C64> = rs.rho(&m.deform(ell)).into_iter().map(C64::from).collect();
    let req = TauRequest::new(m, ell, rho, Method::Auto).unwrap();
    for x in [[0.1, 0.2], [1.0, 2.5]] {
        let v = f_ell(&rs, &req, &x).unwrap().value;
        let u: f64 = x.iter().map(|t: &f64| t.cosh()).product();
        assert!((v - u.powf(-ell)).norm() < 1e-8);
    }
    let g = g_ell(&rs, &req, &[0.0, 0.0]).unwrap();
    assert!((g.value - 1.0).norm() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn rank_one_even_in_ell(ms in 0.2f64..5.0, t in -0.95f64..0.95, lr in -3.0f64..3.0, li in -3.0f64..3.0, x in 0.0f64..3.0) {
        let m = Mult::new(ms, 0.0, 1.0);
        let ell = t * (ms / 2.0 + 1.0);
        let lam = C64::new(lr, li);
        let a = f_ell_r1(&m, ell, lam, x).unwrap();
        let b = f_ell_r1(&m, -ell, lam, x).unwrap();
        prop_assert!((a - b).norm() <= 1e-11 * (1.0 + a.norm()));
    }

    #[test]
    fn rank_one_positive_and_dominated(ms in 0.2f64..5.0, t in 0.0f64..1.0, lr in -3.0f64..3.0, li in -3.0f64..3.0, x in 0.0f64..3.0) {
        let m = Mult::new(ms, 0.0, 1.0);
        let ell = -ms / 2.0 + t * (ms + 1.0);
        let re = f_ell_r1(&m, ell, C64::new(lr, 0.0), x).unwrap();
        prop_assert!(re.re > 0.0 && re.im.abs() < 1e-12);
        let z = f_ell_r1(&m, ell, C64::new(lr, li), x).unwrap();
        prop_assert!(z.norm() <= re.re * (1.0 + 1e-10) + 1e-14);
    }

    #[test]
    fn integral_matches_closed_form(ms in 0.5f64..4.0, t in -0.5f64..0.5, lr in -0.4f64..0.4, li in -2.0f64..2.0, x in 0.0f64..3.0) {
        let m = Mult::new(ms, 0.0, 1.0);
        let ell = t * (ms / 2.0 + 1.0);
        let lam = C64::new(lr, li);
        let q = f_ell_r1_integral(&m, ell, lam, x).unwrap();
        let c = f_ell_r1(&m, ell, lam, x).unwrap();
        prop_assert!((q.value - c).norm() < 1e-8, "{} {}", q.value, c);
    }

    #[test]
    fn evaluator_matches_rank_one(ms in 0.5f64..4.0, t in -0.9f64..0.9, lr in -2.0f64..2.0, li in -2.0f64..2.0, x in 0.35f64..4.0) {
        let rs = RootSystem::build_bc(1).unwrap();
        let m = Mult::new(ms, 1.0, 1.0);
        let ell = t * (ms / 2.0 + 1.0);
        let lam = C64::new(lr, li);
        let req = TauRequest::new(m, ell, vec![lam], Method::HcSeries).unwrap();
        let mut ev = TauEvaluator::new(&rs, req, EvalOptions::default()).unwrap();
        let v = ev.f_ell(&[x]).unwrap();
        let want = f_ell_r1(&m, ell, lam, x).unwrap();
        prop_assert!((v.value - want).norm() < 1e-8 * (1.0 + want.norm()), "{} {} {}", v.value, want, v.label());
    }
}
