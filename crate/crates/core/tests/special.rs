use hogeom_core::specfun::{beta, gamma, gauss_2f1, log_gamma};
use hogeom_core::C64;
use proptest::prelude::*;

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

#[test]
fn gamma_values() {
    assert!(close(gamma(C64::new(5.0, 0.0)).unwrap(), C64::new(24.0, 0.0), 1e-14));
    let half = gamma(C64::new(0.5, 0.0)).unwrap();
    assert!(close(half, C64::new(std::f64::consts::PI.sqrt(), 0.0), 1e-14));
    assert!(gamma(C64::new(-2.0, 0.0)).is_err());
}

#[test]
fn elementary_hypergeometric() {
    for z in [-3.0, -0.7, 0.1, 0.5, 0.9] {
        let want = -(1.0f64 - z).ln() / z;
        let got = gauss_2f1(C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0), z).unwrap();
        assert!(close(got, C64::new(want, 0.0), 1e-13), "{z}");
    }
}

proptest! {
    #[test]
    fn gamma_recurrence(re in 0.1f64..20.0, im in -10.0f64..10.0) {
        let z = C64::new(re, im);
        let a = log_gamma(z + 1.0).unwrap();
        let b = log_gamma(z).unwrap() + z.ln();
        let d = a - b;
        let k = (d.im / (2.0 * std::f64::consts::PI)).round();
        prop_assert!((d - C64::new(0.0, 2.0 * std::f64::consts::PI * k)).norm() < 1e-11);
    }

    #[test]
    fn reflection_formula(re in -3.7f64..3.7, im in 0.05f64..3.0) {
        let z = C64::new(re, im);
        let lhs = gamma(z).unwrap() * gamma(C64::new(1.0, 0.0) - z).unwrap();
        let rhs = C64::new(std::f64::consts::PI, 0.0) / (z * std::f64::consts::PI).sin();
        prop_assert!(close(lhs, rhs, 1e-11));
    }

    #[test]
    fn beta_symmetric(a in 0.2f64..6.0, b in 0.2f64..6.0) {
        let x = beta(C64::new(a, 0.0), C64::new(b, 0.0)).unwrap();
        let y = beta(C64::new(b, 0.0), C64::new(a, 0.0)).unwrap();
        prop_assert!(close(x, y, 1e-14));
    }

    #[test]
    fn binomial_series(a in -3.0f64..3.0, b in 0.3f64..4.0, z in -5.0f64..0.95) {
        let got = gauss_2f1(C64::new(a, 0.0), C64::new(b, 0.0), C64::new(b, 0.0), z).unwrap();
        prop_assert!(close(got, C64::new((1.0 - z).powf(-a), 0.0), 1e-11));
    }

    #[test]
    fn euler_transformation(a in -2.0f64..2.0, b in -2.0f64..2.0, c in 0.5f64..4.0, z in 0.0f64..0.9) {
        let f = gauss_2f1(C64::new(a, 0.0), C64::new(b, 0.0), C64::new(c, 0.0), z).unwrap();
        let g = gauss_2f1(C64::new(c - a, 0.0), C64::new(c - b, 0.0), C64::new(c, 0.0), z).unwrap()
            * (1.0 - z).powf(c - a - b);
        prop_assert!(close(f, g, 1e-10));
    }
}
