//! Rank one: Jacobi functions, F_{ℓ,λ} and G_{ℓ,λ} in closed form, and their
//! Euler-type integral representations.

use core::f64::consts::LN_2;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::multiplicity::Mult;
use crate::specfun::{gauss_2f1, gauss_2f1_estimate, integrate01_log, ln_beta, QuadratureRule};
use crate::{Estimate, C64};

/// Parameters of the rank-one τ₋ℓ family with m_l = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankOneParams {
    /// a = m_s/2.
    pub a: f64,
    pub ell: f64,
    /// ρ(m) = a + 1.
    pub rho: f64,
    pub lam: C64,
    pub x: f64,
}

impl RankOneParams {
    pub fn new(m: &Mult, ell: f64, lam: C64, x: f64) -> Result<Self> {
        if m.m_l != 1.0 {
            return Err(Error::LongMultiplicityNotOne);
        }
        let a = m.m_s / 2.0;
        Ok(RankOneParams { a, ell, rho: a + m.m_l, lam, x })
    }

    /// Jacobi b-parameter b(ℓ) = −ℓ.
    pub fn b(&self) -> f64 {
        -self.ell
    }

    /// ρ(m(ℓ)) = a + 1 − ℓ.
    pub fn rho_ell(&self) -> f64 {
        self.rho - self.ell
    }
}

/// φ^{(a,b)}_{iλ}(x) = ₂F₁((a+b+1−λ)/2, (a+b+1+λ)/2; a+1; −sinh²x).
pub fn jacobi_phi(a: f64, b: f64, lam: C64, x: f64) -> Result<C64> {
    jacobi_phi_estimate(a, b, lam, x).map(|e| e.value)
}

pub fn jacobi_phi_estimate(a: f64, b: f64, lam: C64, x: f64) -> Result<Estimate> {
    let s = a + b + 1.0;
    gauss_2f1_estimate((-lam + s) * 0.5, (lam + s) * 0.5, C64::from(a + 1.0), -x.sinh().powi(2))
}

/// Jacobi parameters (α, β) = ((m_s+m_l−1)/2, (m_l−1)/2) of a rank-one multiplicity.
pub fn jacobi_params(m: &Mult) -> (f64, f64) {
    ((m.m_s + m.m_l - 1.0) / 2.0, (m.m_l - 1.0) / 2.0)
}

/// F_λ(m; x) for any rank-one m.
pub fn f_lambda(m: &Mult, lam: C64, x: f64) -> Result<Estimate> {
    let (al, be) = jacobi_params(m);
    jacobi_phi_estimate(al, be, lam, x)
}

/// G_λ(m; x) = φ^{(α,β)} + (λ+ρ)/(4(α+1)) sinh(2x) φ^{(α+1,β+1)}.
pub fn g_lambda(m: &Mult, lam: C64, x: f64) -> Result<Estimate> {
    let (al, be) = jacobi_params(m);
    let f = jacobi_phi_estimate(al, be, lam, x)?;
    if x == 0.0 {
        return Ok(f);
    }
    let h = jacobi_phi_estimate(al + 1.0, be + 1.0, lam, x)?;
    let k = (lam + al + be + 1.0) / (4.0 * (al + 1.0)) * (2.0 * x).sinh();
    Ok(Estimate { value: f.value + k * h.value, error: f.error + k.norm() * h.error })
}

/// F_{ℓ,λ}(m; x) as (cosh x)^{λ−ρ} ₂F₁((ρ−λ−ℓ)/2, (ρ−λ+ℓ)/2; ρ; tanh²x).
pub fn f_ell_r1(m: &Mult, ell: f64, lam: C64, x: f64) -> Result<C64> {
    let p = RankOneParams::new(m, ell, lam, x)?;
    tanh_form(&p).map(|e| e.value)
}

fn tanh_form(p: &RankOneParams) -> Result<Estimate> {
    let c = p.x.cosh();
    let pre = ((p.lam - p.rho) * c.ln()).exp();
    let h = gauss_2f1_estimate(
        (-p.lam + p.rho - p.ell) * 0.5,
        (-p.lam + p.rho + p.ell) * 0.5,
        C64::from(p.rho),
        p.x.tanh().powi(2),
    )?;
    Ok(Estimate { value: pre * h.value, error: pre.norm() * h.error })
}

/// Both closed forms: (cosh x)^{−ℓ} φ^{(a,−ℓ)}_{iλ}(x) and the tanh² form.
pub fn f_ell_r1_forms(m: &Mult, ell: f64, lam: C64, x: f64) -> Result<(C64, C64)> {
    let p = RankOneParams::new(m, ell, lam, x)?;
    let s = p.rho_ell();
    // parameters swapped so the negative-argument transform runs on the other one
    let phi = gauss_2f1((lam + s) * 0.5, (-lam + s) * 0.5, C64::from(p.a + 1.0), -x.sinh().powi(2))?;
    let jac = phi * x.cosh().powf(-ell);
    Ok((jac, tanh_form(&p)?.value))
}

/// F_{ℓ,λ} via the closed form with an error bound.
pub fn f_ell_r1_estimate(m: &Mult, ell: f64, lam: C64, x: f64) -> Result<Estimate> {
    tanh_form(&RankOneParams::new(m, ell, lam, x)?)
}

/// G_{ℓ,λ}(m; x) = (cosh x)^{−ℓ} G_λ(m(ℓ); x).
pub fn g_ell_r1(m: &Mult, ell: f64, lam: C64, x: f64) -> Result<C64> {
    g_ell_r1_estimate(m, ell, lam, x).map(|e| e.value)
}

pub fn g_ell_r1_estimate(m: &Mult, ell: f64, lam: C64, x: f64) -> Result<Estimate> {
    RankOneParams::new(m, ell, lam, x)?;
    let g = g_lambda(&m.deform(ell), lam, x)?;
    let u = x.cosh().powf(-ell);
    Ok(Estimate { value: g.value * u, error: g.error * u })
}

/// 2 sinh x [c(−ℓ) F_{ℓ+1,λ}(m'; x) − c(ℓ) F_{ℓ−1,λ}(m'; x)] with m' = m + 2·1_s and
/// c(ℓ) = (λ+a+1−ℓ)/(4(a+1)); equals G_{−ℓ,λ} − G_{ℓ,λ}.
pub fn g_ell_r1_difference(m: &Mult, ell: f64, lam: C64, x: f64) -> Result<C64> {
    let p = RankOneParams::new(m, ell, lam, x)?;
    let shifted = Mult::new(m.m_s + 2.0, m.m_m, m.m_l);
    let c = |l: f64| (lam + p.a + 1.0 - l) / (4.0 * (p.a + 1.0));
    let up = f_ell_r1(&shifted, ell + 1.0, lam, x)?;
    let down = f_ell_r1(&shifted, ell - 1.0, lam, x)?;
    Ok((c(-ell) * up - c(ell) * down) * (2.0 * x.sinh()))
}

struct BetaParams {
    p: C64,
    q: C64,
    s: C64,
    ln_b: C64,
}

fn beta_params(pr: &RankOneParams) -> Result<BetaParams> {
    let p = (pr.lam + pr.rho - pr.ell) * 0.5;
    let q = (-pr.lam + pr.rho + pr.ell) * 0.5;
    if p.re <= 0.0 || q.re <= 0.0 {
        return Err(Error::StripViolation);
    }
    let s = (-pr.lam + pr.rho - pr.ell) * 0.5;
    Ok(BetaParams { p, q, s, ln_b: ln_beta(p, q)? })
}

/// (cosh x)^{−ℓ} B(p,q)^{−1} ∫₀¹ u^{p−1}(1−u)^{q−1}(1+u sinh²x)^{−(ρ−λ−ℓ)/2} du
/// with p = (ρ+λ−ℓ)/2, q = (ρ−λ+ℓ)/2.
pub fn f_ell_r1_integral(m: &Mult, ell: f64, lam: C64, x: f64) -> Result<Estimate> {
    let pr = RankOneParams::new(m, ell, lam, x)?;
    let bp = beta_params(&pr)?;
    let sh2 = x.sinh().powi(2);
    let rule = QuadratureRule::default();
    let e = integrate01_log(
        |n| (bp.p - 1.0) * n.ln_u + (bp.q - 1.0) * n.ln_one_minus_u - bp.s * (n.u * sh2).ln_1p() - bp.ln_b,
        &rule,
    )?;
    let u = x.cosh().powf(-ell);
    Ok(Estimate { value: e.value * u, error: e.error * u })
}

fn ln_sinh(t: f64, ln_t: f64) -> f64 {
    if t < 1e-4 {
        ln_t + t * t / 6.0
    } else {
        t + (-(-2.0 * t).exp_m1()).ln() - LN_2
    }
}

fn ln_cosh(t: f64) -> f64 {
    t + (-2.0 * t).exp().ln_1p() - LN_2
}

/// The same integral after u = tanh²t:
/// 2 (cosh x)^{−ℓ} B(p,q)^{−1} ∫₀^∞ sinh^{2p−1}t cosh^{1−ρ−λ−ℓ}t (cosh²t + sinh²x sinh²t)^{−(ρ−λ−ℓ)/2} dt.
pub fn f_ell_r1_integral_t(m: &Mult, ell: f64, lam: C64, x: f64) -> Result<Estimate> {
    let pr = RankOneParams::new(m, ell, lam, x)?;
    let bp = beta_params(&pr)?;
    let sh2 = x.sinh().powi(2);
    let rule = QuadratureRule::default();
    let k = -lam + (1.0 - pr.rho - ell);
    // t = v/(1−v)
    let e = integrate01_log(
        |n| {
            let ln_t = n.ln_u - n.ln_one_minus_u;
            let t = ln_t.exp();
            if !t.is_finite() {
                return C64::new(f64::NEG_INFINITY, 0.0);
            }
            let lc = ln_cosh(t);
            let tanh2 = (t.tanh()).powi(2);
            (bp.p * 2.0 - 1.0) * ln_sinh(t, ln_t) + k * lc
                - bp.s * (2.0 * lc + (sh2 * tanh2).ln_1p())
                - 2.0 * n.ln_one_minus_u
                + LN_2
                - bp.ln_b
        },
        &rule,
    )?;
    let u = x.cosh().powf(-ell);
    Ok(Estimate { value: e.value * u, error: e.error * u })
}
