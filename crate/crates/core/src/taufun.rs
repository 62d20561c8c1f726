//! τ₋ℓ functions F_{ℓ,λ} = u^{−ℓ} F_λ(m(ℓ)) and G_{ℓ,λ} = u^{−ℓ} G_λ(m(ℓ)),
//! with dispatch over the rank-one, Harish-Chandra and Taylor engines.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use crate::cfunction::c_tilde;
use crate::error::{Error, Result};
use crate::hcseries::{CircleConfig, CircleEvaluator, HcConfig, HcEvaluator};
use crate::localseries::{self, eval_taylor, TaylorPoly};
use crate::multiplicity::Mult;
use crate::rankone;
use crate::rootsys::{dominant_representative, RootSystem};
use crate::{Estimate, C64};

/// Requested evaluation method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Method {
    #[default]
    Auto,
    HcSeries,
    Taylor,
    RankOne,
}

/// The engine that produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    RankOne,
    HcSeries,
    HcCircle,
    Taylor,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::RankOne => "rankone",
            Route::HcSeries => "hcseries",
            Route::HcCircle => "hcseries-circle",
            Route::Taylor => "taylor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Value {
    pub value: C64,
    pub error: f64,
    pub route: Route,
    /// Computed from the −ℓ side through F_{ℓ,λ} = F_{−ℓ,λ}.
    pub reflected: bool,
}

impl Value {
    pub fn label(&self) -> String {
        if self.reflected {
            format!("{}-reflected", self.route.name())
        } else {
            String::from(self.route.name())
        }
    }

    pub fn estimate(&self) -> Estimate {
        Estimate { value: self.value, error: self.error }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct EvalOptions {
    pub method: Method,
    /// Chamber margin from which the Harish-Chandra series is preferred.
    pub delta: f64,
    /// Smallest chamber margin the series is still tried at.
    pub min_margin: f64,
    /// Fixed series height; chosen from the margin when absent.
    pub max_height: Option<usize>,
    /// Taylor degree; chosen from the rank when absent.
    pub degree: Option<usize>,
    pub trust_radius: f64,
    pub circle: CircleConfig,
    /// Relative error above which a generic series value is recomputed by the circle mean.
    pub circle_switch: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            method: Method::Auto,
            delta: 0.3,
            min_margin: 0.075,
            max_height: None,
            degree: None,
            trust_radius: localseries::DEFAULT_TRUST_RADIUS,
            circle: CircleConfig::default(),
            circle_switch: 1e-9,
        }
    }
}

impl EvalOptions {
    pub fn with_method(method: Method) -> Self {
        EvalOptions { method, ..Self::default() }
    }

    fn taylor_degree(&self, rank: usize) -> usize {
        self.degree.unwrap_or(match rank {
            1 | 2 => 30,
            3 => 24,
            _ => 16,
        })
    }

    fn buckets(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut d = self.delta;
        while d >= self.min_margin * (1.0 - 1e-12) {
            out.push(d);
            d /= 2.0;
        }
        out
    }
}

#[derive(Debug, Clone)]
struct HcSlot {
    delta: f64,
    generic: Option<Result<HcEvaluator>>,
    circle: Option<Result<CircleEvaluator>>,
}

enum Build {
    Generic(usize),
    Circle(usize),
    TaylorF,
    TaylorG,
}

enum Step {
    Done(Estimate, Route),
    Build(Build),
    Fail(Error),
}

/// Evaluates F_λ(m) and G_λ(m) for one (m, λ), reusing the engines across points.
#[derive(Debug, Clone)]
pub struct Engine {
    rs: RootSystem,
    pub m: Mult,
    pub lam: Vec<C64>,
    pub options: EvalOptions,
    normalizable: bool,
    hc: Vec<HcSlot>,
    taylor_f: Option<Result<TaylorPoly>>,
    taylor_g: Option<Result<TaylorPoly>>,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl Engine {
    pub fn new(rs: &RootSystem, m: &Mult, lam: &[C64], options: EvalOptions) -> Result<Self> {
        if lam.len() != rs.rank() {
            return Err(Error::DimensionMismatch { expected: rs.rank(), found: lam.len() });
        }
        let rho: Vec<C64> = rs.rho(m).into_iter().map(C64::from).collect();
        let normalizable = c_tilde(rs, m, &rho).is_regular();
        let hc = options.buckets().into_iter().map(|delta| HcSlot { delta, generic: None, circle: None }).collect();
        Ok(Engine {
            rs: rs.clone(),
            m: *m,
            lam: lam.to_vec(),
            options,
            normalizable,
            hc,
            taylor_f: None,
            taylor_g: None,
        })
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: x.len() });
        }
        Ok(())
    }

    fn hc_config(&self, delta: f64) -> HcConfig {
        match self.options.max_height {
            Some(h) => HcConfig { max_height: h, delta },
            None => HcConfig::for_margin(self.rank(), delta),
        }
    }

    fn build(&mut self, b: Build) {
        match b {
            Build::Generic(k) => {
                let cfg = self.hc_config(self.hc[k].delta);
                let ev = HcEvaluator::new(&self.rs, &self.m, &self.lam, cfg).and_then(|ev| {
                    if ev.genericity_margin() < 1e-4 {
                        Err(Error::GenericityViolation { mu: Vec::new() })
                    } else {
                        Ok(ev)
                    }
                });
                self.hc[k].generic = Some(ev);
            }
            Build::Circle(k) => {
                let cfg = self.hc_config(self.hc[k].delta);
                self.hc[k].circle = Some(CircleEvaluator::new(&self.rs, &self.m, &self.lam, cfg, self.options.circle));
            }
            Build::TaylorF => {
                let d = self.options.taylor_degree(self.rank());
                self.taylor_f = Some(localseries::f_taylor(&self.rs, &self.m, &self.lam, d));
            }
            Build::TaylorG => {
                let d = self.options.taylor_degree(self.rank());
                self.taylor_g = Some(localseries::g_taylor(&self.rs, &self.m, &self.lam, d));
            }
        }
    }

    fn hc_step(&self, x: &[f64]) -> Step {
        if !self.normalizable {
            return Step::Fail(Error::CFunctionPole);
        }
        let (xp, _) = dominant_representative(x);
        let margin = self.rs.chamber_margin(&xp);
        let Some(k) = self.hc.iter().position(|s| margin >= s.delta) else {
            return Step::Fail(Error::OutsideChamber);
        };
        let slot = &self.hc[k];
        if let Some(c) = &slot.circle {
            return match c.as_ref().map_err(Clone::clone).and_then(|c| c.eval(&xp)) {
                Ok(e) => Step::Done(e, Route::HcCircle),
                Err(e) => Step::Fail(e),
            };
        }
        match &slot.generic {
            None => Step::Build(Build::Generic(k)),
            Some(Err(_)) => Step::Build(Build::Circle(k)),
            Some(Ok(ev)) => match ev.eval(&xp) {
                Ok(e) if e.error <= self.options.circle_switch * e.value.norm().max(1.0) => {
                    Step::Done(e, Route::HcSeries)
                }
                _ => Step::Build(Build::Circle(k)),
            },
        }
    }

    fn taylor_step(&self, x: &[f64], g: bool) -> Step {
        let slot = if g { &self.taylor_g } else { &self.taylor_f };
        match slot {
            None if norm(x) > self.options.trust_radius => Step::Fail(Error::OutsideTrustRadius),
            None => Step::Build(if g { Build::TaylorG } else { Build::TaylorF }),
            Some(Err(e)) => Step::Fail(e.clone()),
            Some(Ok(p)) => match eval_taylor(p, x, self.options.trust_radius) {
                Ok(e) => Step::Done(e, Route::Taylor),
                Err(e) => Step::Fail(e),
            },
        }
    }

    fn rankone_step(&self, x: &[f64], g: bool) -> core::result::Result<Estimate, Error> {
        if self.rank() != 1 {
            return Err(Error::MethodUnavailable);
        }
        if g {
            rankone::g_lambda(&self.m, self.lam[0], x[0])
        } else {
            rankone::f_lambda(&self.m, self.lam[0], x[0])
        }
    }

    fn f_step(&self, x: &[f64]) -> Step {
        match self.options.method {
            Method::RankOne => match self.rankone_step(x, false) {
                Ok(e) => Step::Done(e, Route::RankOne),
                Err(e) => Step::Fail(e),
            },
            Method::Taylor => self.taylor_step(x, false),
            Method::HcSeries => self.hc_step(x),
            Method::Auto => {
                if self.rank() == 1 {
                    return match self.rankone_step(x, false) {
                        Ok(e) => Step::Done(e, Route::RankOne),
                        Err(Error::NonConvergent) => self.hc_step(x),
                        Err(e) => Step::Fail(e),
                    };
                }
                let (xp, _) = dominant_representative(x);
                if self.rs.chamber_margin(&xp) >= self.options.delta || norm(x) > self.options.trust_radius {
                    let inside = norm(x) <= self.options.trust_radius;
                    match self.hc_step(x) {
                        Step::Fail(_) if inside => self.taylor_step(x, false),
                        Step::Done(e, r)
                            if inside && e.error > self.options.circle_switch * e.value.norm().max(1.0) =>
                        {
                            match self.taylor_step(x, false) {
                                Step::Done(t, tr) if t.error < e.error => Step::Done(t, tr),
                                Step::Build(b) => Step::Build(b),
                                _ => Step::Done(e, r),
                            }
                        }
                        s => s,
                    }
                } else {
                    self.taylor_step(x, false)
                }
            }
        }
    }

    fn g_step(&self, x: &[f64]) -> Step {
        match self.options.method {
            Method::HcSeries => Step::Fail(Error::MethodUnavailable),
            Method::Taylor => self.taylor_step(x, true),
            Method::RankOne => match self.rankone_step(x, true) {
                Ok(e) => Step::Done(e, Route::RankOne),
                Err(e) => Step::Fail(e),
            },
            Method::Auto => {
                if self.rank() == 1 {
                    match self.rankone_step(x, true) {
                        Ok(e) => Step::Done(e, Route::RankOne),
                        Err(e) => Step::Fail(e),
                    }
                } else {
                    self.taylor_step(x, true)
                }
            }
        }
    }

    fn run(&mut self, x: &[f64], g: bool) -> Result<(Estimate, Route)> {
        self.check(x)?;
        for _ in 0..4 {
            let step = if g { self.g_step(x) } else { self.f_step(x) };
            match step {
                Step::Done(e, r) => return Ok((e, r)),
                Step::Fail(e) => return Err(e),
                Step::Build(b) => self.build(b),
            }
        }
        Err(Error::MethodUnavailable)
    }

    fn run_shared(&self, x: &[f64], g: bool) -> Result<(Estimate, Route)> {
        self.check(x)?;
        match if g { self.g_step(x) } else { self.f_step(x) } {
            Step::Done(e, r) => Ok((e, r)),
            Step::Fail(e) => Err(e),
            Step::Build(_) => Err(Error::MethodUnavailable),
        }
    }

    /// F_λ(m; x), building engines as needed.
    pub fn f(&mut self, x: &[f64]) -> Result<(Estimate, Route)> {
        self.run(x, false)
    }

    /// G_λ(m; x), building engines as needed.
    pub fn g(&mut self, x: &[f64]) -> Result<(Estimate, Route)> {
        self.run(x, true)
    }

    /// Builds every engine needed at the given points; errors are left for evaluation.
    pub fn prepare(&mut self, points: &[Vec<f64>], g: bool) {
        for x in points {
            let _ = self.run(x, g);
        }
    }

    /// F_λ(m; x) from engines already built by [`Engine::prepare`] or earlier calls.
    pub fn f_shared(&self, x: &[f64]) -> Result<(Estimate, Route)> {
        self.run_shared(x, false)
    }

    pub fn g_shared(&self, x: &[f64]) -> Result<(Estimate, Route)> {
        self.run_shared(x, true)
    }
}

/// u(x) = Π_j cosh x_j.
pub fn u_func(x: &[f64]) -> f64 {
    x.iter().map(|v| v.cosh()).product()
}

/// ln u(x), stable for large x.
pub fn ln_u(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| {
            let a = v.abs();
            a + (-2.0 * a).exp().ln_1p() - core::f64::consts::LN_2
        })
        .sum()
}

/// ρ(m(ℓ)) = ρ(m) − ℓ Σ_j e_j.
pub fn rho_ell(rs: &RootSystem, m: &Mult, ell: f64) -> Vec<f64> {
    rs.rho(m).into_iter().map(|r| r - ell).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauRequest {
    pub m: Mult,
    pub ell: f64,
    pub lam: Vec<C64>,
    pub method: Method,
}

impl TauRequest {
    pub fn new(m: Mult, ell: f64, lam: Vec<C64>, method: Method) -> Result<Self> {
        if m.m_l != 1.0 {
            return Err(Error::LongMultiplicityNotOne);
        }
        Ok(TauRequest { m, ell, lam, method })
    }
}

/// Evaluator of F_{ℓ,λ} and G_{ℓ,λ} for one request.
#[derive(Debug, Clone)]
pub struct TauEvaluator {
    pub request: TauRequest,
    main: Engine,
    mirror: Option<Engine>,
}

fn fallback_worthy(e: &Error) -> bool {
    matches!(e, Error::CFunctionPole | Error::SingularLayer { .. } | Error::InconsistentSystem { .. })
}

impl TauEvaluator {
    pub fn new(rs: &RootSystem, request: TauRequest, options: EvalOptions) -> Result<Self> {
        if request.m.m_l != 1.0 {
            return Err(Error::LongMultiplicityNotOne);
        }
        let options = EvalOptions { method: request.method, ..options };
        let main = Engine::new(rs, &request.m.deform(request.ell), &request.lam, options)?;
        let mirror = if request.ell != 0.0 {
            Some(Engine::new(rs, &request.m.deform(-request.ell), &request.lam, options)?)
        } else {
            None
        };
        Ok(TauEvaluator { request, main, mirror })
    }

    fn wrap(&self, e: Estimate, route: Route, ell: f64, x: &[f64], reflected: bool) -> Value {
        let s = (-ell * ln_u(x)).exp();
        Value { value: e.value * s, error: e.error * s, route, reflected }
    }

    /// F_{ℓ,λ}(m; x).
    pub fn f_ell(&mut self, x: &[f64]) -> Result<Value> {
        let ell = self.request.ell;
        match self.main.f(x) {
            Ok((e, r)) => Ok(self.wrap(e, r, ell, x, false)),
            Err(err) if fallback_worthy(&err) && self.mirror.is_some() => {
                let (e, r) = self.mirror.as_mut().expect("checked").f(x)?;
                Ok(self.wrap(e, r, -ell, x, true))
            }
            Err(err) => Err(err),
        }
    }

    /// G_{ℓ,λ}(m; x).
    pub fn g_ell(&mut self, x: &[f64]) -> Result<Value> {
        let (e, r) = self.main.g(x)?;
        Ok(self.wrap(e, r, self.request.ell, x, false))
    }

    pub fn prepare(&mut self, points: &[Vec<f64>], g: bool) {
        for x in points {
            if g {
                let _ = self.g_ell(x);
            } else {
                let _ = self.f_ell(x);
            }
        }
    }

    pub fn f_ell_shared(&self, x: &[f64]) -> Result<Value> {
        let ell = self.request.ell;
        match self.main.f_shared(x) {
            Ok((e, r)) => Ok(self.wrap(e, r, ell, x, false)),
            Err(err) if fallback_worthy(&err) && self.mirror.is_some() => {
                let (e, r) = self.mirror.as_ref().expect("checked").f_shared(x)?;
                Ok(self.wrap(e, r, -ell, x, true))
            }
            Err(err) => Err(err),
        }
    }

    pub fn g_ell_shared(&self, x: &[f64]) -> Result<Value> {
        let (e, r) = self.main.g_shared(x)?;
        Ok(self.wrap(e, r, self.request.ell, x, false))
    }
}

/// One-shot F_{ℓ,λ}(m; x).
pub fn f_ell(rs: &RootSystem, req: &TauRequest, x: &[f64]) -> Result<Value> {
    TauEvaluator::new(rs, req.clone(), EvalOptions::default())?.f_ell(x)
}

/// One-shot G_{ℓ,λ}(m; x).
pub fn g_ell(rs: &RootSystem, req: &TauRequest, x: &[f64]) -> Result<Value> {
    TauEvaluator::new(rs, req.clone(), EvalOptions::default())?.g_ell(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn re(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn u_examples() {
        assert_eq!(u_func(&[0.0, 0.0]), 1.0);
        assert!((u_func(&[1.0]) - 1.543_080_634_815_243_7).abs() < 1e-15);
        assert!((ln_u(&[0.3, -2.0, 40.0]) - u_func(&[0.3, -2.0, 40.0]).ln()).abs() < 1e-12);
    }

    #[test]
    fn rho_ell_examples() {
        let rs = RootSystem::build_bc(2).unwrap();
        let m = Mult::new(2.0, 1.0, 1.0);
        assert_eq!(rho_ell(&rs, &m, 1.0), vec![1.0, 2.0]);
        assert_eq!(rho_ell(&rs, &m, 1.0), rs.rho(&m.deform(1.0)));
        let rs = RootSystem::build_bc(1).unwrap();
        assert_eq!(rho_ell(&rs, &Mult::new(2.0, 0.0, 1.0), 0.5), vec![1.5]);
    }

    #[test]
    fn request_requires_unit_long_multiplicity() {
        assert_eq!(
            TauRequest::new(Mult::new(2.0, 1.0, 2.0), 0.0, re(&[1.0]), Method::Auto),
            Err(Error::LongMultiplicityNotOne)
        );
    }

    #[test]
    fn rank_one_routes_agree() {
        let rs = RootSystem::build_bc(1).unwrap();
        let m = Mult::new(2.0, 1.0, 1.0);
        let lam = vec![C64::new(0.8, 0.6)];
        let want = rankone::f_ell_r1(&m, 0.7, lam[0], 1.3).unwrap();
        for method in [Method::Auto, Method::HcSeries, Method::RankOne] {
            let req = TauRequest::new(m, 0.7, lam.clone(), method).unwrap();
            let v = f_ell(&rs, &req, &[1.3]).unwrap();
            assert!((v.value - want).norm() < 1e-10, "{method:?} {v:?}");
        }
        let req = TauRequest::new(m, 0.7, lam.clone(), Method::Taylor).unwrap();
        let v = f_ell(&rs, &req, &[0.4]).unwrap();
        assert!((v.value - rankone::f_ell_r1(&m, 0.7, lam[0], 0.4).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn rho_is_one_on_both_paths() {
        let rs = RootSystem::build_bc(2).unwrap();
        let m = Mult::new(2.0, 1.0, 1.0);
        for ell in [0.0, 1.0, -1.0] {
            let lam = re(&rho_ell(&rs, &m, ell));
            let req = TauRequest::new(m, ell, lam, Method::Auto).unwrap();
            let mut ev = TauEvaluator::new(&rs, req, EvalOptions::default()).unwrap();
            for x in [[0.1, 0.2], [0.6, 1.4], [-1.5, 0.4]] {
                let v = ev.f_ell(&x).unwrap();
                let want = (-ell * ln_u(&x)).exp();
                assert!((v.value - want).norm() < 1e-8 * want.max(1.0), "ℓ={ell} x={x:?} {v:?}");
            }
        }
    }

    #[test]
    fn ell_symmetry_rank_two() {
        let rs = RootSystem::build_bc(2).unwrap();
        let m = Mult::new(2.0, 1.0, 1.0);
        let lam = vec![C64::new(0.35, 0.4), C64::new(1.2, -0.3)];
        let a = TauRequest::new(m, 0.6, lam.clone(), Method::Auto).unwrap();
        let b = TauRequest::new(m, -0.6, lam, Method::Auto).unwrap();
        for x in [[0.2, 0.3], [0.7, 1.6]] {
            let va = f_ell(&rs, &a, &x).unwrap();
            let vb = f_ell(&rs, &b, &x).unwrap();
            assert!((va.value - vb.value).norm() < 1e-9, "{va:?} {vb:?}");
        }
    }

    #[test]
    fn singular_normalisation_uses_mirror() {
        // c̃(ρ(m(3))) vanishes through the e₁+e₂ factor; ℓ_max = 2 itself is regular
        let rs = RootSystem::build_bc(2).unwrap();
        let m = Mult::new(2.0, 1.0, 1.0);
        let lam = vec![C64::new(0.5, 0.1), C64::new(1.0, 0.0)];
        let x = [0.35, 0.7];
        let req = TauRequest::new(m, 3.0, lam.clone(), Method::HcSeries).unwrap();
        let v = f_ell(&rs, &req, &x).unwrap();
        assert!(v.reflected);
        assert!(v.label().starts_with("hcseries") && v.label().ends_with("-reflected"));
        let req = TauRequest::new(m, 3.0, lam.clone(), Method::Taylor).unwrap();
        let w = f_ell(&rs, &req, &x).unwrap();
        assert!(!w.reflected);
        assert!((v.value - w.value).norm() < 1e-9, "{v:?} {w:?}");
        let req = TauRequest::new(m, 2.0, lam, Method::HcSeries).unwrap();
        assert!(!f_ell(&rs, &req, &x).unwrap().reflected);
    }

    #[test]
    fn g_at_origin_and_averaging() {
        let rs = RootSystem::build_bc(2).unwrap();
        let m = Mult::new(2.0, 1.0, 1.0);
        let lam = vec![C64::new(0.3, 0.2), C64::new(0.9, 0.0)];
        let req = TauRequest::new(m, 0.5, lam, Method::Auto).unwrap();
        let mut ev = TauEvaluator::new(&rs, req, EvalOptions::default()).unwrap();
        assert!((ev.g_ell(&[0.0, 0.0]).unwrap().value - 1.0).norm() < 1e-15);
        let x = [0.2, 0.45];
        let ws = rs.weyl_elements();
        let mean: C64 = ws.iter().map(|w| ev.g_ell(&w.act(&x)).unwrap().value).sum::<C64>() / ws.len() as f64;
        assert!((mean - ev.f_ell(&x).unwrap().value).norm() < 1e-10);
        assert_eq!(ev.f_ell_shared(&x).unwrap().route, Route::Taylor);
    }

    #[test]
    fn shared_requires_prepare() {
        let rs = RootSystem::build_bc(2).unwrap();
        let req = TauRequest::new(Mult::new(2.0, 1.0, 1.0), 0.0, re(&[0.4, 1.3]), Method::Auto).unwrap();
        let mut ev = TauEvaluator::new(&rs, req, EvalOptions::default()).unwrap();
        let pts = vec![vec![0.5, 1.2], vec![0.1, 0.2]];
        assert_eq!(ev.f_ell_shared(&pts[0]), Err(Error::MethodUnavailable));
        ev.prepare(&pts, false);
        assert_eq!(ev.f_ell_shared(&pts[0]).unwrap().route, Route::HcSeries);
        assert_eq!(ev.f_ell_shared(&pts[1]).unwrap().route, Route::Taylor);
    }
}
