use hogeom_core::multiplicity::Mult;
use hogeom_core::rootsys::RootSystem;
use hogeom_core::taufun::Engine;
use hogeom_core::taufun::{EvalOptions, Method, TauEvaluator, TauRequest};
use hogeom_core::verify::{apply_cherednik_ell, apply_l, apply_l_ell, bilinear, relative_residual, FdConfig};
use hogeom_core::C64;

fn lam2() -> Vec<C64> {
    vec![C64::new(0.3, 0.8), C64::new(1.1, -0.4)]
}

#[test]
fn series_solves_the_laplace_equation() {
    let rs = RootSystem::build_bc(2).unwrap();
    let m = Mult::new(2.0, 1.0, 1.0);
    let lam = lam2();
    let mut eng = Engine::new(&rs, &m, &lam, EvalOptions::default()).unwrap();
    let rho2: f64 = rs.rho(&m).iter().map(|r| r * r).sum();
    let ll = bilinear(&lam, &lam);
    for x in [[0.7, 1.6], [1.2, 3.0], [0.2, 0.5]] {
        let f0 = eng.f(&x).unwrap().0.value;
        let l = apply_l(&rs, &m, |y| eng.f(y).map(|v| v.0.value), &x, &FdConfig::default()).unwrap();
        assert!(relative_residual(l + f0 * rho2, f0 * ll) < 1e-4);
    }
}

#[test]
fn tau_equations_rank_two() {
    let rs = RootSystem::build_bc(2).unwrap();
    let m = Mult::new(2.0, 1.0, 1.0);
    let lam = lam2();
    let ell = 0.6;
    let req = TauRequest::new(m, ell, lam.clone(), Method::Auto).unwrap();
    let mut ev = TauEvaluator::new(&rs, req, EvalOptions::default()).unwrap();
    let rho2: f64 = rs.rho(&m).iter().map(|r| r * r).sum();
    let ll = bilinear(&lam, &lam);
    let cfg = FdConfig::default();
    for x in [[0.2, 0.45], [0.9, 2.1]] {
        let f0 = ev.f_ell(&x).unwrap().value;
        let l = apply_l_ell(&rs, &m, ell, |y| ev.f_ell(y).map(|v| v.value), &x, &cfg).unwrap();
        assert!(relative_residual(l + f0 * rho2, f0 * ll) < 1e-4);
    }
    let x = [0.15, -0.4];
    let g0 = ev.g_ell(&x).unwrap().value;
    for xi in [[1.0, 0.0], [0.0, 1.0]] {
        let t = apply_cherednik_ell(&rs, &m, ell, &xi, |y| ev.g_ell(y).map(|v| v.value), &x, &cfg).unwrap();
        let want = g0 * (lam[0] * xi[0] + lam[1] * xi[1]);
        assert!(relative_residual(t, want) < 1e-4);
    }
}
