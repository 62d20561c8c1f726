use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{contains, hull_facets, hull_membership, max_weyl_pairing, sigma_zero};
use crate::error::{Error, Result};
use crate::multiplicity::{ell_range, in_m2, in_m3, in_mplus, weight_bound_mixed, weight_bound_short, Mult};
use crate::rootsys::{dominant_representative, RootSystem};
use crate::taufun::{rho_ell, Engine, EvalOptions, Method, TauEvaluator, TauRequest};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Suite {
    Positivity,
    Modulus,
    SqrtW,
    Shift,
    Subadditivity,
    Sharp,
    Weights,
    Boundedness,
    Hull,
    Symmetry,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Positivity,
        Suite::Modulus,
        Suite::SqrtW,
        Suite::Shift,
        Suite::Subadditivity,
        Suite::Sharp,
        Suite::Weights,
        Suite::Boundedness,
        Suite::Hull,
        Suite::Symmetry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Positivity => "positivity",
            Suite::Modulus => "modulus",
            Suite::SqrtW => "sqrtw",
            Suite::Shift => "shift",
            Suite::Subadditivity => "subadditivity",
            Suite::Sharp => "sharp",
            Suite::Weights => "weights",
            Suite::Boundedness => "boundedness",
            Suite::Hull => "hull",
            Suite::Symmetry => "symmetry",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SuiteConfig {
    pub ranks: Vec<usize>,
    pub mults: Vec<Mult>,
    /// Number of ℓ values on [ℓ_min, ℓ_max].
    pub ell_count: usize,
    /// Plain multiplicities in M2 ∪ M3 for the √|W| bound without deformation.
    pub plain_mults: Vec<Mult>,
    /// Multiplicities for the sharp-ratio window.
    pub sharp_mults: Vec<Mult>,
    pub bounded_samples: usize,
    pub hull_points: usize,
    pub hull_ranks: Vec<usize>,
    pub threshold: f64,
    pub ray_length: f64,
    pub ray_steps: usize,
    pub ray_epsilon: f64,
    pub sharp_beta: f64,
    pub sharp_steps: usize,
    pub sharp_window: f64,
    pub slack: f64,
    pub positivity_floor: f64,
    pub bounded_tolerance: f64,
    pub symmetry_tolerance: f64,
    pub averaging_tolerance: f64,
    pub seed: u64,
    pub options: EvalOptions,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            ranks: vec![1, 2],
            mults: vec![Mult::new(2.0, 1.0, 1.0), Mult::new(4.0, 4.0, 1.0), Mult::new(0.0, 2.0, 1.0)],
            ell_count: 4,
            plain_mults: vec![
                Mult::new(2.0, 1.0, 1.0),
                Mult::new(4.0, 1.0, -1.0),
                Mult::new(1.0, 2.0, 0.5),
                Mult::new(3.0, 1.0, -1.2),
            ],
            sharp_mults: vec![Mult::new(2.0, 1.0, 1.0), Mult::new(0.0, 2.0, 1.0)],
            bounded_samples: 40,
            hull_points: 500,
            hull_ranks: vec![1, 2, 3],
            threshold: 10.0,
            ray_length: 40.0,
            ray_steps: 41,
            ray_epsilon: 0.1,
            sharp_beta: 8.0,
            sharp_steps: 17,
            sharp_window: 100.0,
            slack: 1e-9,
            positivity_floor: 1e-12,
            bounded_tolerance: 1e-6,
            symmetry_tolerance: 1e-9,
            averaging_tolerance: 1e-8,
            seed: 0,
            options: EvalOptions::default(),
        }
    }
}

/// One independent unit of work; fields are read according to `suite`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Case {
    pub suite: Suite,
    pub index: usize,
    pub rank: usize,
    pub m: Mult,
    pub ell: f64,
    pub lam: Vec<C64>,
    /// μ (shift), x₁ (subadditivity) or the ray direction (sharp).
    pub aux: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    /// Evaluate F_λ(m) directly instead of the τ layer.
    pub plain: bool,
    pub seed: u64,
}

impl Case {
    pub fn label(&self) -> String {
        let lam: Vec<String> = self
            .lam
            .iter()
            .map(|z| if z.im == 0.0 { format!("{:.4}", z.re) } else { format!("{:.4}{:+.4}i", z.re, z.im) })
            .collect();
        let mut s = format!(
            "{} #{} r={} m=({},{},{})",
            self.suite.name(),
            self.index,
            self.rank,
            self.m.m_s,
            self.m.m_m,
            self.m.m_l
        );
        if !matches!(self.suite, Suite::Hull | Suite::Weights) {
            s += &format!(" ell={:.4} lambda=[{}]", self.ell, lam.join(","));
        }
        if self.plain {
            s += " plain";
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CaseResult {
    pub suite: Suite,
    pub index: usize,
    pub label: String,
    pub passed: bool,
    /// Smallest slack over all comparisons; negative on failure.
    pub margin: f64,
    pub checks: usize,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub worst_margin: f64,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn from_results(suite: Suite, mut cases: Vec<CaseResult>) -> Self {
        cases.sort_by_key(|c| c.index);
        let passed = cases.iter().all(|c| c.passed);
        let worst_margin = cases.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min);
        SuiteReport { suite, passed, worst_margin, cases }
    }
}

struct Acc {
    margin: f64,
    checks: usize,
    failure: Option<String>,
}

impl Acc {
    fn new() -> Self {
        Acc { margin: f64::INFINITY, checks: 0, failure: None }
    }

    fn fail(&mut self, msg: String) {
        self.margin = self.margin.min(f64::NEG_INFINITY);
        if self.failure.is_none() {
            self.failure = Some(msg);
        }
    }

    /// lhs ≤ rhs.
    fn le(&mut self, lhs: f64, rhs: f64, what: &str, x: &[f64]) {
        self.checks += 1;
        let d = rhs - lhs;
        if d.is_nan() {
            self.fail(format!("{what} at x={x:?}: not a number"));
            return;
        }
        self.margin = self.margin.min(d);
        if d < 0.0 && self.failure.is_none() {
            self.failure = Some(format!("{what} at x={x:?}: {lhs:e} > {rhs:e}"));
        }
    }

    fn err(&mut self, e: Error, what: &str, x: &[f64]) {
        self.checks += 1;
        self.fail(format!("{what} at x={x:?}: {e}"));
    }

    fn finish(self, case: &Case) -> CaseResult {
        CaseResult {
            suite: case.suite,
            index: case.index,
            label: case.label(),
            passed: self.failure.is_none(),
            margin: match (self.margin.is_finite(), self.failure.is_none()) {
                (true, _) => self.margin,
                (false, true) => f64::MAX,
                (false, false) => -f64::MAX,
            },
            checks: self.checks,
            failure: self.failure,
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng, a: f64, b: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    a + (b - a) * u
}

fn real(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

fn ell_grid(m: &Mult, n: usize) -> Vec<f64> {
    let (lo, hi) = ell_range(m);
    if n <= 1 {
        return vec![0.0];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Sample points: near the origin for the Taylor path, in the chamber, and a few non-dominant ones.
pub fn default_points(rank: usize) -> Vec<Vec<f64>> {
    match rank {
        1 => [0.0, 0.15, 0.4, 0.75, 1.2, 2.0, 3.0, 4.0, -0.5, -1.5].iter().map(|&v| vec![v]).collect(),
        2 => vec![
            vec![0.0, 0.0],
            vec![0.1, 0.3],
            vec![0.25, 0.25],
            vec![0.3, 0.6],
            vec![0.5, 1.2],
            vec![1.0, 2.0],
            vec![0.4, 2.5],
            vec![1.5, 2.0],
            vec![-0.6, 1.5],
            vec![0.35, -0.2],
        ],
        r => {
            let mut out = vec![vec![0.0; r]];
            for t in [0.05, 0.12, 0.5, 1.0] {
                out.push((1..=r).map(|j| t * j as f64).collect());
            }
            let mut alt: Vec<f64> = (1..=r).map(|j| 0.08 * j as f64).collect();
            alt[0] = -alt[0];
            out.push(alt);
            out
        }
    }
}

fn symmetry_points(rank: usize) -> Vec<Vec<f64>> {
    match rank {
        2 => vec![
            vec![0.0, 0.0],
            vec![0.1, 0.3],
            vec![0.25, 0.25],
            vec![0.2, 0.45],
            vec![0.6, 1.3],
            vec![1.0, 2.0],
            vec![1.5, 2.0],
            vec![-0.6, 1.5],
            vec![0.35, -0.2],
        ],
        r => default_points(r),
    }
}

fn real_lams(rank: usize) -> Vec<Vec<f64>> {
    match rank {
        1 => vec![vec![0.0], vec![0.5], vec![1.7], vec![-1.2], vec![3.0]],
        2 => vec![vec![0.0, 0.0], vec![0.5, 1.0], vec![1.0, 1.0], vec![-0.4, 1.3], vec![1.5, 2.5]],
        r => vec![vec![0.0; r], (1..=r).map(|j| 0.4 * j as f64).collect()],
    }
}

fn dominant_lams(rank: usize) -> Vec<Vec<f64>> {
    match rank {
        1 => vec![vec![0.0], vec![0.6], vec![2.0]],
        2 => vec![vec![0.0, 0.0], vec![0.3, 1.1], vec![1.0, 1.0], vec![0.8, 2.4]],
        r => vec![vec![0.0; r], (1..=r).map(|j| 0.3 * j as f64).collect()],
    }
}

fn strict_dominant(rank: usize) -> Vec<f64> {
    (1..=rank).map(|j| 0.2 + 0.3 * (j - 1) as f64).collect()
}

fn base_case(suite: Suite, rank: usize, m: Mult) -> Case {
    Case {
        suite,
        index: 0,
        rank,
        m,
        ell: 0.0,
        lam: Vec::new(),
        aux: Vec::new(),
        points: Vec::new(),
        plain: false,
        seed: 0,
    }
}

fn suite_seed(seed: u64, suite: Suite) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (suite as u64 + 1).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// Boundary point of conv(Wρ) on the ray through p, by bisection on the scale.
fn hull_boundary(rho: &[f64], p: &[f64]) -> Vec<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    while hull_membership(rho, &p.iter().map(|v| v * hi).collect::<Vec<_>>()) {
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if hull_membership(rho, &p.iter().map(|v| v * mid).collect::<Vec<_>>()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    p.iter().map(|v| v * lo).collect()
}

/// Enumerates the cases of a suite from the configuration and seed.
pub fn suite_cases(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let mut rng = ChaCha8Rng::seed_from_u64(suite_seed(cfg.seed, suite));
    let mut out = Vec::new();
    if suite == Suite::Hull {
        for &r in &cfg.hull_ranks {
            for m in &cfg.mults {
                let mut c = base_case(suite, r, *m);
                c.seed = rng.next_u64();
                out.push(c);
            }
        }
    }
    if suite == Suite::SqrtW {
        for &r in &cfg.ranks {
            for m in &cfg.plain_mults {
                for lam in real_lams(r) {
                    let mut c = base_case(suite, r, *m);
                    c.plain = true;
                    let im: Vec<f64> = (0..r).map(|_| uniform(&mut rng, -2.0, 2.0)).collect();
                    c.lam = lam.iter().zip(&im).map(|(&a, &b)| C64::new(a, b)).collect();
                    c.points = default_points(r);
                    out.push(c);
                }
            }
        }
    }
    let mut mults = cfg.mults.clone();
    if suite == Suite::Sharp {
        mults = cfg.sharp_mults.clone();
    }
    for &r in &cfg.ranks {
        let rs = RootSystem::build_bc(r)?;
        for m in &mults {
            let (_, ell_max) = ell_range(m);
            let grid = ell_grid(m, cfg.ell_count);
            let mut sym_grid: Vec<f64> = grid.clone();
            if !sym_grid.iter().any(|&l| (l + ell_max).abs() < 1e-12) {
                sym_grid.insert(0, -ell_max);
            }
            let pts = default_points(r);
            match suite {
                Suite::Positivity => {
                    for &ell in &grid {
                        for lam in real_lams(r) {
                            let mut c = base_case(suite, r, *m);
                            c.ell = ell;
                            c.lam = real(&lam);
                            c.points = pts.clone();
                            out.push(c);
                        }
                    }
                }
                Suite::Modulus => {
                    for &ell in &grid {
                        for lam in real_lams(r) {
                            let mut c = base_case(suite, r, *m);
                            c.ell = ell;
                            c.lam = lam.iter().map(|&a| C64::new(a, uniform(&mut rng, -2.0, 2.0))).collect();
                            c.points = pts.clone();
                            out.push(c);
                        }
                    }
                }
                Suite::SqrtW => {
                    for &ell in &sym_grid {
                        for lam in real_lams(r) {
                            let mut c = base_case(suite, r, *m);
                            c.ell = ell;
                            c.lam = lam.iter().map(|&a| C64::new(a, uniform(&mut rng, -2.0, 2.0))).collect();
                            c.points = pts.clone();
                            out.push(c);
                        }
                    }
                }
                Suite::Shift => {
                    for &ell in &grid {
                        let mut mus = dominant_lams(r);
                        mus.truncate(3);
                        for mu in mus {
                            let mut c = base_case(suite, r, *m);
                            c.ell = ell;
                            c.lam = (0..r).map(|_| C64::new(uniform(&mut rng, -2.0, 2.0), 0.0)).collect();
                            c.aux = mu;
                            c.points = pts.clone();
                            out.push(c);
                        }
                    }
                }
                Suite::Subadditivity => {
                    for &ell in &sym_grid {
                        for lam in dominant_lams(r) {
                            let mut c = base_case(suite, r, *m);
                            c.ell = ell;
                            c.lam = real(&lam);
                            c.aux = strict_dominant(r);
                            c.points = pts.clone();
                            out.push(c);
                        }
                    }
                }
                Suite::Sharp if cfg.sharp_mults.contains(m) => {
                    let rho = rs.rho(m);
                    let mut lam0s = vec![vec![0.0; r], rho.iter().map(|v| v / 2.0).collect()];
                    if r >= 2 {
                        let mut wall = vec![0.0; r];
                        wall[r - 1] = 1.0;
                        lam0s.push(wall);
                        let mut wall2 = vec![1.0; r];
                        wall2[0] = 0.5;
                        lam0s.push(wall2);
                    }
                    let dir: Vec<f64> = (1..=r)
                        .map(|j| if r == 1 { 1.0 } else { 0.4 + 0.6 * (j - 1) as f64 / (r - 1) as f64 })
                        .collect();
                    for ell in [0.0, 0.5 * ell_max, -0.5 * ell_max] {
                        for lam0 in &lam0s {
                            let mut c = base_case(suite, r, *m);
                            c.ell = ell;
                            c.lam = real(lam0);
                            c.aux = dir.clone();
                            let tmax = cfg.sharp_beta / (2.0 * dir[r - 1]);
                            let n = cfg.sharp_steps.max(2);
                            c.points = (0..n)
                                .map(|k| {
                                    let t = tmax * k as f64 / (n - 1) as f64;
                                    dir.iter().map(|d| d * t).collect()
                                })
                                .collect();
                            out.push(c);
                        }
                    }
                }
                Suite::Weights => {
                    for &ell in &grid {
                        let mut c = base_case(suite, r, m.deform(ell));
                        c.ell = ell;
                        c.points = (0..=80).map(|k| vec![-20.0 + 0.5 * k as f64]).collect();
                        out.push(c);
                    }
                }
                Suite::Boundedness => {
                    let mut ells: Vec<Option<f64>> = vec![None; cfg.bounded_samples];
                    if r == 1 {
                        ells.push(Some(ell_max));
                        ells.push(Some(-ell_max));
                        ells.push(Some(ell_max));
                        ells.push(Some(-ell_max));
                    }
                    for (k, fixed) in ells.into_iter().enumerate() {
                        let ell = fixed.unwrap_or_else(|| uniform(&mut rng, -0.95, 0.95) * ell_max);
                        let rho = rs.rho(m);
                        let dir: Vec<f64> = (0..r).map(|_| uniform(&mut rng, -1.0, 1.0)).collect();
                        let b = hull_boundary(&rho, &dir);
                        let scale = if k % 2 == 0 { uniform(&mut rng, 0.3, 0.95) } else { uniform(&mut rng, 1.2, 1.6) };
                        let mut c = base_case(suite, r, *m);
                        c.ell = ell;
                        c.lam = b.iter().map(|v| C64::new(v * scale, uniform(&mut rng, -1.0, 1.0))).collect();
                        out.push(c);
                    }
                }
                Suite::Symmetry => {
                    let pts = symmetry_points(r);
                    for _ in 0..3 {
                        let mut c = base_case(suite, r, *m);
                        c.ell = uniform(&mut rng, -0.9, 0.9) * ell_max;
                        c.lam = (0..r)
                            .map(|_| C64::new(uniform(&mut rng, -2.0, 2.0), uniform(&mut rng, -2.0, 2.0)))
                            .collect();
                        c.points = pts.clone();
                        out.push(c);
                    }
                }
                Suite::Hull | Suite::Sharp => {}
            }
        }
    }
    if suite == Suite::Weights {
        for m in &cfg.plain_mults {
            let mut c = base_case(suite, 1, *m);
            c.plain = true;
            c.points = (0..=80).map(|k| vec![-20.0 + 0.5 * k as f64]).collect();
            out.push(c);
        }
    }
    for (i, c) in out.iter_mut().enumerate() {
        c.index = i;
    }
    Ok(out)
}

fn g_usable(rank: usize, x: &[f64], opts: &EvalOptions) -> bool {
    rank == 1 || x.iter().map(|v| v * v).sum::<f64>().sqrt() <= opts.trust_radius
}

fn evaluator(rs: &RootSystem, case: &Case, lam: Vec<C64>, ell: f64, cfg: &SuiteConfig) -> Result<TauEvaluator> {
    let req = TauRequest::new(case.m, ell, lam, Method::Auto)?;
    TauEvaluator::new(rs, req, cfg.options)
}

/// Runs one case; evaluation errors are recorded as failures.
pub fn run_case(case: &Case, cfg: &SuiteConfig) -> CaseResult {
    let mut acc = Acc::new();
    let rs = match RootSystem::build_bc(case.rank) {
        Ok(rs) => rs,
        Err(e) => {
            acc.err(e, "root system", &[]);
            return acc.finish(case);
        }
    };
    let res = match case.suite {
        Suite::Positivity => positivity(&rs, case, cfg, &mut acc),
        Suite::Modulus => modulus(&rs, case, cfg, &mut acc),
        Suite::SqrtW => sqrtw(&rs, case, cfg, &mut acc),
        Suite::Shift => shift(&rs, case, cfg, &mut acc),
        Suite::Subadditivity => subadditivity(&rs, case, cfg, &mut acc),
        Suite::Sharp => sharp(&rs, case, cfg, &mut acc),
        Suite::Weights => weights(case, cfg, &mut acc),
        Suite::Boundedness => boundedness(&rs, case, cfg, &mut acc),
        Suite::Hull => hull(&rs, case, cfg, &mut acc),
        Suite::Symmetry => symmetry(&rs, case, cfg, &mut acc),
    };
    if let Err(e) = res {
        acc.err(e, "setup", &[]);
    }
    acc.finish(case)
}

/// Runs every case of a suite sequentially.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let cases = suite_cases(suite, cfg)?;
    Ok(SuiteReport::from_results(suite, cases.iter().map(|c| run_case(c, cfg)).collect()))
}

fn positivity(rs: &RootSystem, case: &Case, cfg: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    let mut ev = evaluator(rs, case, case.lam.clone(), case.ell, cfg)?;
    for x in &case.points {
        let check = |v: Result<crate::taufun::Value>, what: &str, acc: &mut Acc| match v {
            Ok(v) => {
                acc.le(cfg.positivity_floor, v.value.re, &format!("{what} > floor"), x);
                acc.le(v.value.im.abs(), cfg.slack + v.error, &format!("{what} real"), x);
            }
            Err(e) => acc.err(e, what, x),
        };
        check(ev.f_ell(x), "F", acc);
        if g_usable(case.rank, x, &cfg.options) {
            check(ev.g_ell(x), "G", acc);
        }
    }
    Ok(())
}

fn modulus(rs: &RootSystem, case: &Case, cfg: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    let re: Vec<C64> = case.lam.iter().map(|z| C64::new(z.re, 0.0)).collect();
    let mut ev = evaluator(rs, case, case.lam.clone(), case.ell, cfg)?;
    let mut ev_re = evaluator(rs, case, re, case.ell, cfg)?;
    for x in &case.points {
        match (ev.f_ell(x), ev_re.f_ell(x)) {
            (Ok(a), Ok(b)) => acc.le(a.value.norm(), b.value.re + cfg.slack + a.error + b.error, "|F_l| <= F_Re l", x),
            (Err(e), _) | (_, Err(e)) => acc.err(e, "F", x),
        }
        if g_usable(case.rank, x, &cfg.options) {
            match (ev.g_ell(x), ev_re.g_ell(x)) {
                (Ok(a), Ok(b)) => {
                    acc.le(a.value.norm(), b.value.re + cfg.slack + a.error + b.error, "|G_l| <= G_Re l", x)
                }
                (Err(e), _) | (_, Err(e)) => acc.err(e, "G", x),
            }
        }
    }
    Ok(())
}

fn sqrtw(rs: &RootSystem, case: &Case, cfg: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    let sw = (rs.weyl_order() as f64).sqrt();
    let bound = |x: &[f64]| sw * max_weyl_pairing(rs, &case.lam, x).exp();
    if case.plain {
        let mut eng = Engine::new(rs, &case.m, &case.lam, cfg.options)?;
        for x in &case.points {
            match eng.f(x) {
                Ok((v, _)) => acc.le(v.value.norm(), bound(x) + cfg.slack + v.error, "|F| <= sqrt|W| bound", x),
                Err(e) => acc.err(e, "F", x),
            }
            if g_usable(case.rank, x, &cfg.options) {
                match eng.g(x) {
                    Ok((v, _)) => acc.le(v.value.norm(), bound(x) + cfg.slack + v.error, "|G| <= sqrt|W| bound", x),
                    Err(e) => acc.err(e, "G", x),
                }
            }
        }
        return Ok(());
    }
    let mut ev = evaluator(rs, case, case.lam.clone(), case.ell, cfg)?;
    for x in &case.points {
        match ev.f_ell(x) {
            Ok(v) => acc.le(v.value.norm(), bound(x) + cfg.slack + v.error, "|F_l| <= sqrt|W| bound", x),
            Err(e) => acc.err(e, "F", x),
        }
        if case.ell >= 0.0 && g_usable(case.rank, x, &cfg.options) {
            match ev.g_ell(x) {
                Ok(v) => acc.le(v.value.norm(), bound(x) + cfg.slack + v.error, "|G_l| <= sqrt|W| bound", x),
                Err(e) => acc.err(e, "G", x),
            }
        }
    }
    Ok(())
}

fn shift(rs: &RootSystem, case: &Case, cfg: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    let mu = real(&case.aux);
    let sum: Vec<C64> = case.lam.iter().zip(&mu).map(|(a, b)| a + b).collect();
    let mut ev = evaluator(rs, case, sum, case.ell, cfg)?;
    let mut ev_mu = evaluator(rs, case, mu, case.ell, cfg)?;
    for x in &case.points {
        let e = max_weyl_pairing(rs, &case.lam, x).exp();
        match (ev.f_ell(x), ev_mu.f_ell(x)) {
            (Ok(a), Ok(b)) => acc.le(a.value.re, b.value.re * e + cfg.slack + a.error + b.error * e, "F shift", x),
            (Err(er), _) | (_, Err(er)) => acc.err(er, "F", x),
        }
        if g_usable(case.rank, x, &cfg.options) {
            match (ev.g_ell(x), ev_mu.g_ell(x)) {
                (Ok(a), Ok(b)) => acc.le(a.value.re, b.value.re * e + cfg.slack + a.error + b.error * e, "G shift", x),
                (Err(er), _) | (_, Err(er)) => acc.err(er, "G", x),
            }
        }
    }
    Ok(())
}

fn subadditivity(rs: &RootSystem, case: &Case, cfg: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    let mut ev = evaluator(rs, case, case.lam.clone(), case.ell, cfg)?;
    let x1 = &case.aux;
    let pair = |rho: &[f64]| -> f64 { case.lam.iter().zip(rho).zip(x1).map(|((l, p), t)| (l.re + p) * t).sum() };
    // u^{−ℓ} moves by at most e^{|ℓ| Σ x₁}, which turns ρ(m(|ℓ|)) into ρ(m)
    let e = pair(&rs.rho(&case.m)).exp();
    let (lo, hi) = ell_range(&case.m);
    let mut plain = if case.ell >= lo && case.ell <= hi {
        let e0 = pair(&rho_ell(rs, &case.m, case.ell)).exp();
        Some((Engine::new(rs, &case.m.deform(case.ell), &case.lam, cfg.options)?, e0))
    } else {
        None
    };
    for x in &case.points {
        let y: Vec<f64> = x.iter().zip(x1).map(|(a, b)| a + b).collect();
        match (ev.f_ell(x), ev.f_ell(&y)) {
            (Ok(a), Ok(b)) => {
                let err = a.error + b.error * e;
                acc.le(b.value.re / e, a.value.re + cfg.slack + err, "lower subadditivity", x);
                acc.le(a.value.re, b.value.re * e + cfg.slack + err, "upper subadditivity", x);
            }
            (Err(er), _) | (_, Err(er)) => acc.err(er, "F", x),
        }
        if let Some((eng, e0)) = plain.as_mut() {
            let e0 = *e0;
            match (eng.f(x), eng.f(&y)) {
                (Ok((a, _)), Ok((b, _))) => {
                    let err = a.error + b.error * e0;
                    acc.le(b.value.re / e0, a.value.re + cfg.slack + err, "lower subadditivity of F(m(l))", x);
                    acc.le(a.value.re, b.value.re * e0 + cfg.slack + err, "upper subadditivity of F(m(l))", x);
                }
                (Err(er), _) | (_, Err(er)) => acc.err(er, "F(m(l))", x),
            }
        }
    }
    Ok(())
}

fn sharp(rs: &RootSystem, case: &Case, cfg: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    let lam0: Vec<f64> = case.lam.iter().map(|z| z.re).collect();
    let sigma = sigma_zero(rs, &lam0);
    let rho = rs.rho(&case.m);
    let mut ev = evaluator(rs, case, case.lam.clone(), case.ell, cfg)?;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for x in &case.points {
        let v = match ev.f_ell(x) {
            Ok(v) => v.value.re,
            Err(e) => {
                acc.err(e, "F", x);
                continue;
            }
        };
        let poly: f64 =
            sigma.iter().map(|a| 1.0 + a.iter().zip(x).map(|(&c, t)| f64::from(c) * t).sum::<f64>()).product();
        let expo: f64 = lam0.iter().zip(&rho).zip(x).map(|((l, p), t)| (l - p) * t).sum();
        let ratio = v / (poly * expo.exp());
        acc.le(0.0, ratio, "ratio positive", x);
        if ratio > 0.0 {
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    if lo.is_finite() {
        acc.le(hi / lo, cfg.sharp_window, "ratio window C/c", &[]);
    }
    Ok(())
}

fn weights(case: &Case, cfg: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    let m = &case.m;
    let first = in_mplus(m) || in_m3(m);
    let second = in_m2(m) || in_m3(m);
    for x in &case.points {
        if first {
            acc.le(-cfg.slack, weight_bound_short(m, x[0]), "first inequality", x);
        }
        if second {
            acc.le(-cfg.slack, weight_bound_mixed(m, x[0]), "second inequality", x);
        }
    }
    Ok(())
}

/// Result of scanning |F_{ℓ,λ}| along the rays t(ω_i + ε(1,…,r)).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RayScan {
    pub sup: f64,
    /// Error estimate of the value attaining `sup`.
    pub sup_error: f64,
    pub bounded: bool,
}

/// Empirical boundedness verdict: sup |F_{ℓ,λ}| on the rays against `cfg.threshold`.
pub fn ray_scan(ev: &mut TauEvaluator, rank: usize, cfg: &SuiteConfig) -> Result<RayScan> {
    let n = cfg.ray_steps.max(2);
    let mut sup = 0.0f64;
    let mut sup_error = 0.0f64;
    'rays: for i in 0..rank {
        let dir: Vec<f64> = (0..rank).map(|j| f64::from(u8::from(j >= i)) + cfg.ray_epsilon * (j + 1) as f64).collect();
        for k in 0..n {
            let t = cfg.ray_length * k as f64 / (n - 1) as f64;
            let x: Vec<f64> = dir.iter().map(|d| d * t).collect();
            let v = ev.f_ell(&x)?;
            if v.value.norm() > sup {
                sup = v.value.norm();
                sup_error = v.error;
            }
            if sup > cfg.threshold {
                break 'rays;
            }
        }
    }
    Ok(RayScan { sup, sup_error, bounded: sup <= cfg.threshold })
}

fn boundedness(rs: &RootSystem, case: &Case, cfg: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    let re: Vec<f64> = case.lam.iter().map(|z| z.re).collect();
    let inside = hull_membership(&rs.rho(&case.m), &re);
    let mut ev = evaluator(rs, case, case.lam.clone(), case.ell, cfg)?;
    let scan = match ray_scan(&mut ev, case.rank, cfg) {
        Ok(s) => s,
        Err(e) => {
            acc.err(e, "F on rays", &[]);
            return Ok(());
        }
    };
    acc.checks += 1;
    if scan.bounded != inside {
        acc.fail(format!(
            "verdict {} but hull membership {inside} (sup {:e})",
            if scan.bounded { "bounded" } else { "unbounded" },
            scan.sup
        ));
    } else {
        acc.margin = acc.margin.min((scan.sup - cfg.threshold).abs());
    }
    if inside {
        acc.le(scan.sup, 1.0 + cfg.bounded_tolerance + scan.sup_error, "sup |F| <= 1", &[]);
    }
    Ok(())
}

/// Fraction of random points on which the dominance test and the facet test agree, with the point count.
pub fn hull_agreement(rs: &RootSystem, rho: &[f64], points: usize, seed: u64) -> Option<(usize, usize)> {
    let facets = hull_facets(rs, rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let big = 1.5 * rho.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1.0);
    let mut agree = 0;
    for _ in 0..points {
        let p: Vec<f64> = (0..rs.rank()).map(|_| uniform(&mut rng, -big, big)).collect();
        if hull_membership(rho, &p) == contains(&facets, rho, &p) {
            agree += 1;
        }
    }
    Some((agree, points))
}

fn hull(rs: &RootSystem, case: &Case, cfg: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    let rho = rs.rho(&case.m);
    match hull_agreement(rs, &rho, cfg.hull_points, case.seed) {
        Some((agree, n)) => acc.le(n as f64, agree as f64, "hull agreement", &[]),
        None => acc.err(Error::RankUnsupported { rank: case.rank }, "hull facets", &[]),
    }
    Ok(())
}

fn symmetry(rs: &RootSystem, case: &Case, cfg: &SuiteConfig, acc: &mut Acc) -> Result<()> {
    let tol = cfg.symmetry_tolerance;
    let mut ev = evaluator(rs, case, case.lam.clone(), case.ell, cfg)?;
    let mut ev_neg = evaluator(rs, case, case.lam.clone(), -case.ell, cfg)?;
    let weyl = rs.weyl_elements();
    let w_lam = weyl.last().expect("nonempty").act_complex(&case.lam);
    let mut ev_w = evaluator(rs, case, w_lam, case.ell, cfg)?;
    for x in &case.points {
        let f = match ev.f_ell(x) {
            Ok(v) => v.value,
            Err(e) => {
                acc.err(e, "F", x);
                continue;
            }
        };
        let scale = tol * f.norm().max(1.0);
        match ev_neg.f_ell(x) {
            Ok(v) => acc.le((v.value - f).norm(), scale, "F_l = F_-l", x),
            Err(e) => acc.err(e, "F_-l", x),
        }
        match ev_w.f_ell(x) {
            Ok(v) => acc.le((v.value - f).norm(), scale, "F_wl = F_l", x),
            Err(e) => acc.err(e, "F_wl", x),
        }
        let (xp, _) = dominant_representative(x);
        for w in &weyl {
            let wx = w.act(&xp);
            match ev.f_ell(&wx) {
                Ok(v) => acc.le((v.value - f).norm(), scale, "F(wx) = F(x)", x),
                Err(e) => acc.err(e, "F(wx)", x),
            }
        }
        if case.rank <= 2 && x.iter().map(|v| v * v).sum::<f64>().sqrt() <= 0.5 {
            let mut mean = C64::new(0.0, 0.0);
            let mut ok = true;
            for w in &weyl {
                match ev.g_ell(&w.act(x)) {
                    Ok(v) => mean += v.value,
                    Err(e) => {
                        acc.err(e, "G", x);
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                mean /= weyl.len() as f64;
                acc.le((mean - f).norm(), cfg.averaging_tolerance * f.norm().max(1.0), "Weyl average of G", x);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(s));
        }
        assert_eq!(Suite::parse("nope"), None);
    }

    #[test]
    fn cases_are_deterministic() {
        let cfg = SuiteConfig { seed: 7, ..SuiteConfig::default() };
        let a = suite_cases(Suite::Boundedness, &cfg).unwrap();
        let b = suite_cases(Suite::Boundedness, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2 * 3 * 40 + 3 * 4);
        let c = suite_cases(Suite::Boundedness, &SuiteConfig { seed: 8, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn boundedness_alternates_inside_outside() {
        let cfg = SuiteConfig::default();
        let rs = RootSystem::build_bc(2).unwrap();
        for c in suite_cases(Suite::Boundedness, &cfg).unwrap().iter().filter(|c| c.rank == 2) {
            let re: Vec<f64> = c.lam.iter().map(|z| z.re).collect();
            let inside = hull_membership(&rs.rho(&c.m), &re);
            assert_eq!(inside, c.index % 2 == 0, "{}", c.label());
        }
    }

    #[test]
    fn unbounded_rank_one_example() {
        let cfg = SuiteConfig::default();
        let m = Mult::new(2.0, 1.0, 1.0);
        let mut c = base_case(Suite::Boundedness, 1, m);
        c.ell = 0.5;
        c.lam = vec![C64::new(2.5, 0.0)];
        let r = run_case(&c, &cfg);
        assert!(r.passed, "{r:?}");
        c.lam = vec![C64::new(1.0, 0.0)];
        let r = run_case(&c, &cfg);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn hull_and_lemma_suites_pass() {
        let cfg = SuiteConfig::default();
        for s in [Suite::Hull, Suite::Weights] {
            let rep = run_suite(s, &cfg).unwrap();
            assert!(rep.passed, "{rep:?}");
        }
    }
}
