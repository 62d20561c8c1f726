//! Finite-difference differential-reflection operators, hull membership for the
//! boundedness classifier, and the estimate suites.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::multiplicity::Mult;
use crate::rootsys::{dominant_representative, simple_coordinates_f64, RootClass, RootSystem};
use crate::C64;

mod suites;

pub use suites::{
    default_points, hull_agreement, ray_scan, run_case, run_suite, suite_cases, Case, CaseResult, RayScan, Suite,
    SuiteConfig, SuiteReport,
};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FdConfig {
    pub h: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig { h: 1e-3 }
    }
}

fn shifted(x: &[f64], dir: &[f64], s: f64) -> Vec<f64> {
    x.iter().zip(dir).map(|(a, d)| a + s * d).collect()
}

fn unit(r: usize, j: usize) -> Vec<f64> {
    let mut e = vec![0.0; r];
    e[j] = 1.0;
    e
}

fn check_regular(rs: &RootSystem, m: &Mult, x: &[f64], h: f64) -> Result<()> {
    if x.len() != rs.rank() {
        return Err(Error::DimensionMismatch { expected: rs.rank(), found: x.len() });
    }
    for a in rs.positive_roots() {
        if m.of(a.class) != 0.0 && a.eval(x).abs() < 2.0 * h {
            return Err(Error::SingularPoint);
        }
    }
    Ok(())
}

/// L(m)f = Δf + Σ_{α>0} m_α coth(α(x)) ⟨∇f, α⟩ by central differences.
pub fn apply_l<F>(rs: &RootSystem, m: &Mult, mut f: F, x: &[f64], cfg: &FdConfig) -> Result<C64>
where
    F: FnMut(&[f64]) -> Result<C64>,
{
    let h = cfg.h;
    check_regular(rs, m, x, h)?;
    let r = rs.rank();
    let f0 = f(x)?;
    let mut lap = C64::new(0.0, 0.0);
    let mut grad = vec![C64::new(0.0, 0.0); r];
    for j in 0..r {
        let e = unit(r, j);
        let fp = f(&shifted(x, &e, h))?;
        let fm = f(&shifted(x, &e, -h))?;
        lap += (fp - f0 * 2.0 + fm) / (h * h);
        grad[j] = (fp - fm) / (2.0 * h);
    }
    let mut drift = C64::new(0.0, 0.0);
    for a in rs.positive_roots() {
        let ma = m.of(a.class);
        if ma == 0.0 {
            continue;
        }
        let t = a.eval(x);
        let coth = 1.0 / t.tanh();
        let d: C64 = grad.iter().zip(&a.vector).map(|(g, &v)| g * f64::from(v)).sum();
        drift += d * (ma * coth);
    }
    Ok(lap + drift)
}

/// L_ℓ(m)f = L(m)f + ℓ² Σ_j cosh^{−2}(x_j) f.
pub fn apply_l_ell<F>(rs: &RootSystem, m: &Mult, ell: f64, mut f: F, x: &[f64], cfg: &FdConfig) -> Result<C64>
where
    F: FnMut(&[f64]) -> Result<C64>,
{
    let base = apply_l(rs, m, &mut f, x, cfg)?;
    let pot: f64 = x.iter().map(|v| v.cosh().powi(-2)).sum();
    Ok(base + f(x)? * (ell * ell * pot))
}

/// T_ξ(m)f = ∂_ξ f − ρ(m)(ξ) f + Σ_{α>0} m_α α(ξ)(1 − e^{−2α(x)})^{−1}(f(x) − f(r_α x)).
pub fn apply_cherednik<F>(rs: &RootSystem, m: &Mult, xi: &[f64], mut f: F, x: &[f64], cfg: &FdConfig) -> Result<C64>
where
    F: FnMut(&[f64]) -> Result<C64>,
{
    let h = cfg.h;
    check_regular(rs, m, x, h)?;
    if xi.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: xi.len() });
    }
    let f0 = f(x)?;
    let d = (f(&shifted(x, xi, h))? - f(&shifted(x, xi, -h))?) / (2.0 * h);
    let rho_xi: f64 = rs.rho(m).iter().zip(xi).map(|(a, b)| a * b).sum();
    let mut out = d - f0 * rho_xi;
    for a in rs.positive_roots() {
        let ma = m.of(a.class);
        if ma == 0.0 {
            continue;
        }
        let ax = a.eval(x);
        let axi = a.eval(xi);
        let fr = f(&a.reflection.act(x))?;
        out += (f0 - fr) * (ma * axi / -(-2.0 * ax).exp_m1());
    }
    Ok(out)
}

/// T_{ℓ,ξ}(m) = T_ξ(m(ℓ)) + ℓ Σ_j ξ_j tanh(x_j).
pub fn apply_cherednik_ell<F>(
    rs: &RootSystem,
    m: &Mult,
    ell: f64,
    xi: &[f64],
    mut f: F,
    x: &[f64],
    cfg: &FdConfig,
) -> Result<C64>
where
    F: FnMut(&[f64]) -> Result<C64>,
{
    let base = apply_cherednik(rs, &m.deform(ell), xi, &mut f, x, cfg)?;
    let t: f64 = xi.iter().zip(x).map(|(a, b)| a * b.tanh()).sum();
    Ok(base + f(x)? * (ell * t))
}

/// |lhs − rhs| / (|rhs| + 1).
pub fn relative_residual(lhs: C64, rhs: C64) -> f64 {
    (lhs - rhs).norm() / (rhs.norm() + 1.0)
}

/// ⟨λ, λ⟩ extended bilinearly.
pub fn bilinear(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Re λ ∈ conv(W ρ), by the dominance order on the dominant representative.
pub fn hull_membership(rho: &[f64], re_lam: &[f64]) -> bool {
    let (xp, _) = dominant_representative(re_lam);
    let diff: Vec<f64> = rho.iter().zip(&xp).map(|(a, b)| a - b).collect();
    let scale = 1.0 + rho.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    simple_coordinates_f64(&diff).iter().all(|&c| c >= -1e-9 * scale)
}

/// Facets n·y ≤ d of conv(W ρ), enumerated from vertex r-subsets; rank ≤ 3.
pub fn hull_facets(rs: &RootSystem, rho: &[f64]) -> Option<Vec<(Vec<f64>, f64)>> {
    let r = rs.rank();
    if r > 3 {
        return None;
    }
    let mut verts: Vec<Vec<f64>> = Vec::new();
    for w in rs.weyl_elements() {
        let v = w.act(rho);
        if !verts.iter().any(|u| u.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-12)) {
            verts.push(v);
        }
    }
    let scale = 1.0 + rho.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let tol = 1e-10 * scale * scale;
    let mut facets: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut push = |n: Vec<f64>, d: f64| {
        let len = n.iter().map(|a| a * a).sum::<f64>().sqrt();
        if len < tol {
            return;
        }
        let n: Vec<f64> = n.iter().map(|a| a / len).collect();
        let d = d / len;
        let side = |sgn: f64| {
            verts.iter().all(|v| sgn * (n.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() - d) <= 1e-9 * scale)
        };
        for sgn in [1.0, -1.0] {
            if side(sgn) {
                let nn: Vec<f64> = n.iter().map(|a| a * sgn).collect();
                if !facets
                    .iter()
                    .any(|(m, e)| (e - d * sgn).abs() < 1e-9 && m.iter().zip(&nn).all(|(a, b)| (a - b).abs() < 1e-9))
                {
                    facets.push((nn, d * sgn));
                }
            }
        }
    };
    let nv = verts.len();
    match r {
        1 => {
            for v in &verts {
                push(vec![v[0].signum()], v[0].abs());
            }
        }
        2 => {
            for i in 0..nv {
                for j in i + 1..nv {
                    let (a, b) = (&verts[i], &verts[j]);
                    let n = vec![-(b[1] - a[1]), b[0] - a[0]];
                    let d = n[0] * a[0] + n[1] * a[1];
                    push(n, d);
                }
            }
        }
        _ => {
            for i in 0..nv {
                for j in i + 1..nv {
                    for k in j + 1..nv {
                        let (a, b, c) = (&verts[i], &verts[j], &verts[k]);
                        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
                        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
                        let n = vec![u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
                        let d = n[0] * a[0] + n[1] * a[1] + n[2] * a[2];
                        push(n, d);
                    }
                }
            }
        }
    }
    Some(facets)
}

/// Brute-force containment in conv(W ρ); `None` above rank 3.
pub fn hull_membership_brute(rs: &RootSystem, rho: &[f64], re_lam: &[f64]) -> Option<bool> {
    let facets = hull_facets(rs, rho)?;
    Some(contains(&facets, rho, re_lam))
}

fn contains(facets: &[(Vec<f64>, f64)], rho: &[f64], p: &[f64]) -> bool {
    let scale = 1.0 + rho.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if facets.is_empty() {
        return p.iter().all(|v| v.abs() <= 1e-9 * scale);
    }
    facets.iter().all(|(n, d)| n.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() <= d + 1e-9 * scale)
}

/// Σ⁰_{λ₀}: positive short and medium roots orthogonal to λ₀, as root vectors.
pub fn sigma_zero(rs: &RootSystem, lam0: &[f64]) -> Vec<Vec<i32>> {
    let scale = 1.0 + lam0.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    rs.positive_roots()
        .iter()
        .filter(|a| a.class != RootClass::Long)
        .filter(|a| a.vector.iter().zip(lam0).map(|(&v, l)| f64::from(v) * l).sum::<f64>().abs() < 1e-12 * scale)
        .map(|a| a.vector.clone())
        .collect()
}

/// max_w Re(wλ)(x).
pub fn max_weyl_pairing(rs: &RootSystem, lam: &[C64], x: &[f64]) -> f64 {
    rs.weyl_elements()
        .iter()
        .map(|w| w.act_complex(lam).iter().zip(x).map(|(l, xi)| l.re * xi).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rankone;

    #[test]
    fn constant_function() {
        let rs = RootSystem::build_bc(2).unwrap();
        let m = Mult::new(2.0, 1.0, 1.0);
        let cfg = FdConfig::default();
        let one = |_: &[f64]| Ok(C64::new(1.0, 0.0));
        let l = apply_l(&rs, &m, one, &[0.4, 0.9], &cfg).unwrap();
        assert!(l.norm() < 1e-9);
        let t = apply_cherednik(&rs, &m, &[1.0, 0.5], one, &[0.4, 0.9], &cfg).unwrap();
        assert!((t + 3.5).norm() < 1e-9);
        assert_eq!(apply_l(&rs, &m, one, &[0.4, 0.4], &cfg), Err(Error::SingularPoint));
    }

    #[test]
    fn leading_exponential() {
        // e^{(λ−ρ)(x)} with coth → 1 gives ⟨λ,λ⟩ − ⟨ρ,ρ⟩ asymptotically
        let rs = RootSystem::build_bc(2).unwrap();
        let m = Mult::new(2.0, 1.0, 1.0);
        let lam = [0.7, 1.9];
        let rho = rs.rho(&m);
        let f = |x: &[f64]| Ok(C64::from(((lam[0] - rho[0]) * x[0] + (lam[1] - rho[1]) * x[1]).exp()));
        let x = [9.0, 19.0];
        let v = apply_l(&rs, &m, f, &x, &FdConfig::default()).unwrap() / f(&x).unwrap();
        let want = lam[0] * lam[0] + lam[1] * lam[1] - rho[0] * rho[0] - rho[1] * rho[1];
        assert!((v.re - want).abs() < 1e-5, "{v} {want}");
    }

    #[test]
    fn rank_one_eigen_equations() {
        let rs = RootSystem::build_bc(1).unwrap();
        let m = Mult::new(3.0, 0.0, 1.0);
        let lam = C64::new(0.4, 1.1);
        let cfg = FdConfig::default();
        let ell = 0.7;
        let f = |x: &[f64]| rankone::f_ell_r1(&m, ell, lam, x[0]);
        let rho2 = 2.5 * 2.5;
        let l = apply_l_ell(&rs, &m, ell, f, &[0.9], &cfg).unwrap() + f(&[0.9]).unwrap() * rho2;
        assert!(relative_residual(l, f(&[0.9]).unwrap() * lam * lam) < 1e-6);
        let g = |x: &[f64]| rankone::g_ell_r1(&m, ell, lam, x[0]);
        let t = apply_cherednik_ell(&rs, &m, ell, &[1.0], g, &[0.9], &cfg).unwrap();
        assert!(relative_residual(t, g(&[0.9]).unwrap() * lam) < 1e-6);
    }

    #[test]
    fn hull_examples() {
        assert!(hull_membership(&[2.0], &[1.5]));
        assert!(hull_membership(&[2.0], &[-2.0]));
        assert!(!hull_membership(&[2.0], &[2.5]));
        assert!(hull_membership(&[2.0, 3.0], &[2.0, 3.0]));
        assert!(hull_membership(&[2.0, 3.0], &[2.5, 2.5]));
        assert!(!hull_membership(&[2.0, 3.0], &[2.6, 2.6]));
        let rs = RootSystem::build_bc(2).unwrap();
        assert_eq!(hull_membership_brute(&rs, &[2.0, 3.0], &[2.5, 2.5]), Some(true));
        assert_eq!(hull_membership_brute(&rs, &[2.0, 3.0], &[-3.1, 0.5]), Some(false));
        assert_eq!(hull_facets(&rs, &[2.0, 3.0]).unwrap().len(), 8);
    }

    #[test]
    fn sigma_zero_examples() {
        let rs = RootSystem::build_bc(2).unwrap();
        assert_eq!(sigma_zero(&rs, &[0.0, 0.0]).len(), 4);
        assert_eq!(sigma_zero(&rs, &[0.0, 1.0]), vec![vec![1, 0]]);
        assert_eq!(sigma_zero(&rs, &[1.0, 1.0]), vec![vec![-1, 1]]);
        assert!(sigma_zero(&rs, &[1.0, 3.0]).is_empty());
    }

    #[test]
    fn weyl_pairing() {
        let rs = RootSystem::build_bc(2).unwrap();
        let v = max_weyl_pairing(&rs, &[C64::new(-1.0, 4.0), C64::new(0.5, 0.0)], &[0.2, -3.0]);
        assert!((v - 3.1).abs() < 1e-15);
    }
}
