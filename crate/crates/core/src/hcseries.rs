//! Harish-Chandra series Φ_λ(m;x) = e^{(λ−ρ)(x)} Σ_{μ∈2Λ} Γ_μ e^{−μ(x)} and
//! F_λ = Σ_w c(m;wλ) Φ_{wλ} on the positive chamber.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::cfunction::c_function;
use crate::error::{Error, Result};
use crate::multiplicity::Mult;
use crate::rootsys::{dominant_representative, lattice_shells, RootSystem, ShellIndex};
use crate::{Estimate, C64};

/// Largest Γ table the engine will allocate.
pub const MAX_TABLE: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HcConfig {
    pub max_height: usize,
    /// Minimal simple-root value α_i(x) accepted by [`HCSeriesState::phi`].
    pub delta: f64,
}

impl Default for HcConfig {
    fn default() -> Self {
        HcConfig { max_height: 40, delta: 0.3 }
    }
}

impl HcConfig {
    /// Height reaching double precision at chamber margin `delta`, capped per rank.
    pub fn for_margin(rank: usize, delta: f64) -> Self {
        let cap = match rank {
            1 => 600,
            2 => 280,
            3 => 64,
            _ => 32,
        };
        let h = (39.0 / (2.0 * delta)).ceil() as usize + 6;
        HcConfig { max_height: h.clamp(8, cap), delta }
    }
}

/// Γ_μ coefficients for one (m, λ), stored in shell order.
#[derive(Debug, Clone)]
pub struct HCSeriesState {
    pub lam: Vec<C64>,
    pub m: Mult,
    pub max_height: usize,
    /// min over computed μ ≠ 0 of |⟨μ, μ−2λ⟩| / (1 + |μ|²).
    pub genericity_margin: f64,
    rank: usize,
    layout: Arc<HcLayout>,
    gamma: Vec<C64>,
}

const NO_PRED: u32 = u32::MAX;

/// Lattice points up to a height with their μ vectors and, per positive root α,
/// the position of μ − 2α. Shared by all Γ tables of one rank and height.
#[derive(Debug)]
pub struct HcLayout {
    rank: usize,
    max_height: usize,
    shells: Vec<Vec<u32>>,
    index: ShellIndex,
    mu: Vec<f64>,
    pred: Vec<Vec<u32>>,
}

impl HcLayout {
    pub fn new(rs: &RootSystem, max_height: usize) -> Result<Self> {
        let r = rs.rank();
        let index = ShellIndex::new(r, max_height);
        if index.len() > MAX_TABLE {
            return Err(Error::TableTooLarge);
        }
        let shells: Vec<Vec<u32>> = lattice_shells(r, max_height).into_iter().map(|l| l.n).collect();
        let mu = shells.iter().flat_map(|n| mu_vector(n)).collect();
        let mut buf = vec![0u32; r];
        let pred =
            rs.positive_roots()
                .iter()
                .map(|a| {
                    shells
                        .iter()
                        .map(|n| {
                            if predecessor(n, &a.simple_coords, 1, &mut buf) {
                                index.index(&buf) as u32
                            } else {
                                NO_PRED
                            }
                        })
                        .collect()
                })
                .collect();
        Ok(HcLayout { rank: r, max_height, shells, index, mu, pred })
    }

    pub fn max_height(&self) -> usize {
        self.max_height
    }

    pub fn len(&self) -> usize {
        self.shells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shells.is_empty()
    }

    fn mu(&self, k: usize) -> &[f64] {
        &self.mu[k * self.rank..(k + 1) * self.rank]
    }
}

struct RootData {
    root: usize,
    m: f64,
    a: Vec<u32>,
    norm2: f64,
    vector: Vec<f64>,
    rho_minus_lam: C64,
}

fn root_data(rs: &RootSystem, m: &Mult, lam: &[C64]) -> Vec<RootData> {
    let rho = rs.rho(m);
    rs.positive_roots()
        .iter()
        .enumerate()
        .filter(|(_, a)| m.of(a.class) != 0.0)
        .map(|(root, a)| {
            let vector: Vec<f64> = a.vector.iter().map(|&c| f64::from(c)).collect();
            let rho_minus_lam =
                vector.iter().zip(rho.iter().zip(lam)).map(|(&v, (&r, &l))| (C64::from(r) - l) * v).sum();
            RootData { root, m: m.of(a.class), a: a.simple_coords.clone(), norm2: a.norm2(), vector, rho_minus_lam }
        })
        .collect()
}

/// Γ_μ recursion: ⟨μ,μ−2λ⟩Γ_μ = 2 Σ_α m_α Σ_{n≥1} Γ_{μ−2nα} ⟨μ+ρ−2nα−λ, α⟩.
pub fn gamma_coeffs(rs: &RootSystem, m: &Mult, lam: &[C64], max_height: usize) -> Result<HCSeriesState> {
    gamma_coeffs_with(rs, Arc::new(HcLayout::new(rs, max_height)?), m, lam)
}

/// [`gamma_coeffs`] on a prebuilt layout.
pub fn gamma_coeffs_with(rs: &RootSystem, layout: Arc<HcLayout>, m: &Mult, lam: &[C64]) -> Result<HCSeriesState> {
    let r = rs.rank();
    if lam.len() != r || layout.rank != r {
        return Err(Error::DimensionMismatch { expected: r, found: lam.len() });
    }
    let len = layout.len();
    let roots = root_data(rs, m, lam);
    let mut gamma = vec![C64::new(0.0, 0.0); len];
    gamma[0] = C64::new(1.0, 0.0);
    let mut margin = f64::INFINITY;
    // running Σ_{k≥1} Γ_{μ−2kα} and Σ_{k≥1} k Γ_{μ−2kα} per root
    let mut sums = vec![(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); roots.len() * len];
    for k in 1..len {
        let mu = layout.mu(k);
        let mu2: f64 = mu.iter().map(|v| v * v).sum();
        let mu_lam: C64 = mu.iter().zip(lam).map(|(&a, &b)| b * a).sum();
        let d = C64::from(mu2) - mu_lam * 2.0;
        let scaled = d.norm() / (1.0 + mu2);
        margin = margin.min(scaled);
        if scaled <= 1e-10 {
            return Err(Error::GenericityViolation { mu: layout.shells[k].clone() });
        }
        let mut total = C64::new(0.0, 0.0);
        for (ri, rd) in roots.iter().enumerate() {
            let p = layout.pred[rd.root][k];
            if p == NO_PRED {
                continue;
            }
            let p = p as usize;
            let (sp, tp) = sums[ri * len + p];
            let s1 = gamma[p] + sp;
            let t1 = s1 + tp;
            sums[ri * len + k] = (s1, t1);
            let mu_a: f64 = mu.iter().zip(&rd.vector).map(|(a, b)| a * b).sum();
            total += ((rd.rho_minus_lam + mu_a) * s1 - t1 * (2.0 * rd.norm2)) * rd.m;
        }
        gamma[k] = total * 2.0 / d;
    }
    let max_height = layout.max_height;
    Ok(HCSeriesState { lam: lam.to_vec(), m: *m, max_height, genericity_margin: margin, rank: r, layout, gamma })
}

fn mu_vector(n: &[u32]) -> Vec<f64> {
    let r = n.len();
    (0..r)
        .map(|j| {
            let next = if j + 1 < r { n[j + 1] } else { 0 };
            2.0 * (f64::from(n[j]) - f64::from(next))
        })
        .collect()
}

fn predecessor(n: &[u32], a: &[u32], k: u32, pred: &mut [u32]) -> bool {
    for ((p, &ni), &ai) in pred.iter_mut().zip(n).zip(a) {
        let need = k * ai;
        if need > ni {
            return false;
        }
        *p = ni - need;
    }
    true
}

/// Right-hand side of the recursion summed term by term.
fn rhs(roots: &[RootData], index: &ShellIndex, gamma: &[C64], n: &[u32], mu: &[f64], pred: &mut [u32]) -> C64 {
    let mut sum = C64::new(0.0, 0.0);
    for rd in roots {
        let mu_a: f64 = mu.iter().zip(&rd.vector).map(|(a, b)| a * b).sum();
        let base = rd.rho_minus_lam + mu_a;
        let mut inner = C64::new(0.0, 0.0);
        let mut k = 1u32;
        while predecessor(n, &rd.a, k, pred) {
            let g = gamma[index.index(pred)];
            inner += g * (base - 2.0 * f64::from(k) * rd.norm2);
            k += 1;
        }
        sum += inner * rd.m;
    }
    sum
}

impl HCSeriesState {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Γ_μ for μ = Σ n_i 2α_i, if within the table.
    pub fn gamma(&self, n: &[u32]) -> Option<C64> {
        let h: u32 = n.iter().sum();
        if n.len() != self.rank || h as usize > self.max_height {
            return None;
        }
        Some(self.gamma[self.layout.index.index(n)])
    }

    /// (n, Γ_μ) in shell order.
    pub fn entries(&self) -> impl Iterator<Item = (&[u32], C64)> {
        self.layout.shells.iter().map(Vec::as_slice).zip(self.gamma.iter().copied())
    }

    /// Largest relative residual of the recursion over all stored coefficients.
    pub fn recheck(&self, rs: &RootSystem) -> f64 {
        let roots = root_data(rs, &self.m, &self.lam);
        let mut pred = vec![0u32; self.rank];
        let mut worst: f64 = 0.0;
        for (k, n) in self.layout.shells.iter().enumerate().skip(1) {
            let mu = mu_vector(n);
            let mu2: f64 = mu.iter().map(|v| v * v).sum();
            let mu_lam: C64 = mu.iter().zip(&self.lam).map(|(&a, &b)| b * a).sum();
            let d = C64::from(mu2) - mu_lam * 2.0;
            let right = rhs(&roots, &self.layout.index, &self.gamma, n, &mu, &mut pred) * 2.0;
            let left = d * self.gamma[k];
            let scale = left.norm().max(right.norm());
            if scale > 0.0 {
                worst = worst.max((left - right).norm() / scale);
            }
        }
        worst
    }

    fn shell_sums(&self, x: &[f64], height: usize) -> (Vec<C64>, f64) {
        let r = self.rank;
        let h = height.min(self.max_height);
        let mut powers = vec![vec![1.0; h + 1]; r];
        for (i, row) in powers.iter_mut().enumerate() {
            let ai = if i == 0 { x[0] } else { x[i] - x[i - 1] };
            let q = (-2.0 * ai).exp();
            for k in 1..=h {
                row[k] = row[k - 1] * q;
            }
        }
        let mut sums = vec![C64::new(0.0, 0.0); h + 1];
        let mut abs_sum = 0.0;
        for (n, g) in self.entries() {
            let hn: u32 = n.iter().sum();
            if hn as usize > h {
                break;
            }
            let mut w = 1.0;
            for (i, &ni) in n.iter().enumerate() {
                w *= powers[i][ni as usize];
            }
            let t = g * w;
            sums[hn as usize] += t;
            abs_sum += t.norm();
        }
        (sums, abs_sum)
    }

    fn prefactor(&self, rs: &RootSystem, x: &[f64]) -> C64 {
        let rho = rs.rho(&self.m);
        let e: C64 = x.iter().zip(self.lam.iter().zip(&rho)).map(|(&xi, (&l, &r))| (l - r) * xi).sum();
        e.exp()
    }

    /// Partial sum of Φ_λ(x) through the given height.
    pub fn phi_to_height(&self, rs: &RootSystem, x: &[f64], height: usize) -> C64 {
        let (sums, _) = self.shell_sums(x, height);
        self.prefactor(rs, x) * sums.iter().sum::<C64>()
    }

    /// Φ_λ(x) for x in the positive chamber with margin ≥ `delta`.
    pub fn phi(&self, rs: &RootSystem, x: &[f64], delta: f64) -> Result<Estimate> {
        if x.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: x.len() });
        }
        let margin = rs.chamber_margin(x);
        if !(margin >= delta) {
            return Err(Error::OutsideChamber);
        }
        let (sums, abs_sum) = self.shell_sums(x, self.max_height);
        let total: C64 = sums.iter().sum();
        let h = self.max_height;
        let tail = truncation_tail(&sums, (-2.0 * margin).exp(), total.norm(), h)?;
        let pre = self.prefactor(rs, x);
        let rounding = 8.0 * f64::EPSILON * abs_sum;
        Ok(Estimate { value: pre * total, error: pre.norm() * (tail + rounding) })
    }
}

fn truncation_tail(sums: &[C64], q: f64, total: f64, h: usize) -> Result<f64> {
    if h < 6 {
        let last = sums[h].norm();
        return Ok(last * q / (1.0 - q));
    }
    let recent: f64 = sums[h - 2..=h].iter().map(|s| s.norm()).sum();
    let earlier: f64 = sums[h - 5..=h - 3].iter().map(|s| s.norm()).sum();
    let last = sums[h].norm().max(sums[h - 1].norm() * q);
    if recent <= 1e-300 || recent <= 1e-17 * total {
        return Ok(last);
    }
    let ratio = if earlier > 0.0 { (recent / earlier).powf(1.0 / 3.0) } else { 1.0 };
    if ratio >= 1.0 {
        return Err(Error::TruncationNotConverged);
    }
    let r = ratio.max(q);
    Ok(last * r / (1.0 - r) + last)
}

/// F_λ(m) = Σ_w c(m;wλ) Φ_{wλ}(m) for generic regular λ.
#[derive(Debug, Clone)]
pub struct HcEvaluator {
    rs: RootSystem,
    pub m: Mult,
    pub lam: Vec<C64>,
    pub config: HcConfig,
    terms: Vec<(C64, HCSeriesState)>,
}

impl HcEvaluator {
    pub fn new(rs: &RootSystem, m: &Mult, lam: &[C64], config: HcConfig) -> Result<Self> {
        Self::with_layout(rs, Arc::new(HcLayout::new(rs, config.max_height)?), m, lam, config)
    }

    /// Builds on a layout of height `config.max_height`.
    pub fn with_layout(
        rs: &RootSystem,
        layout: Arc<HcLayout>,
        m: &Mult,
        lam: &[C64],
        config: HcConfig,
    ) -> Result<Self> {
        let r = rs.rank();
        if lam.len() != r {
            return Err(Error::DimensionMismatch { expected: r, found: lam.len() });
        }
        let mut seen: Vec<Vec<C64>> = Vec::new();
        let mut terms = Vec::new();
        for w in rs.weyl_elements() {
            let wl = w.act_complex(lam);
            if seen.iter().any(|s| s.iter().zip(&wl).all(|(a, b)| (a - b).norm() < 1e-12)) {
                return Err(Error::CFunctionPole);
            }
            let c = c_function(rs, m, &wl)?;
            let state = gamma_coeffs_with(rs, layout.clone(), m, &wl)?;
            seen.push(wl);
            terms.push((c, state));
        }
        Ok(HcEvaluator { rs: rs.clone(), m: *m, lam: lam.to_vec(), config, terms })
    }

    /// Smallest genericity margin over the Weyl images of λ.
    pub fn genericity_margin(&self) -> f64 {
        self.terms.iter().map(|(_, s)| s.genericity_margin).fold(f64::INFINITY, f64::min)
    }

    pub fn terms(&self) -> &[(C64, HCSeriesState)] {
        &self.terms
    }

    /// F_λ(x), extended from the chamber by W-invariance.
    pub fn eval(&self, x: &[f64]) -> Result<Estimate> {
        let (xp, _) = dominant_representative(x);
        let mut value = C64::new(0.0, 0.0);
        let mut error = 0.0;
        let mut magnitude = 0.0;
        for (c, state) in &self.terms {
            if *c == C64::new(0.0, 0.0) {
                continue;
            }
            let p = state.phi(&self.rs, &xp, self.config.delta)?;
            let t = c * p.value;
            value += t;
            error += c.norm() * p.error;
            magnitude += t.norm();
        }
        error += 8.0 * f64::EPSILON * magnitude;
        Ok(Estimate { value, error })
    }
}

/// Settings for the circle-mean evaluation at non-generic λ.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CircleConfig {
    pub radius: f64,
    pub points: usize,
}

impl Default for CircleConfig {
    fn default() -> Self {
        CircleConfig { radius: 0.4, points: 48 }
    }
}

/// Fixed direction with coordinates √1, √2, √3, √5, … normalised to unit length.
pub fn circle_direction(rank: usize) -> Vec<f64> {
    const P: [f64; 8] = [1.0, 2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0];
    let v: Vec<f64> = P.iter().take(rank).map(|p| p.sqrt()).collect();
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / n).collect()
}

/// F_λ₀ as the mean of F over λ₀ + ε e^{iθ_k} v, θ_k = 2π(k+½)/K.
///
/// F_λ is entire in λ, so the mean reproduces F_λ₀ even when λ₀ is singular.
#[derive(Debug, Clone)]
pub struct CircleEvaluator {
    pub lam: Vec<C64>,
    pub config: CircleConfig,
    nodes: Vec<HcEvaluator>,
}

impl CircleEvaluator {
    pub fn new(rs: &RootSystem, m: &Mult, lam: &[C64], hc: HcConfig, circle: CircleConfig) -> Result<Self> {
        let v = circle_direction(rs.rank());
        let k = circle.points;
        let mut nodes = Vec::with_capacity(k);
        let layout = Arc::new(HcLayout::new(rs, hc.max_height)?);
        for j in 0..k {
            let theta = 2.0 * PI * (j as f64 + 0.5) / k as f64;
            let z = C64::from_polar(circle.radius, theta);
            let lj: Vec<C64> = lam.iter().zip(&v).map(|(&l, &vi)| l + z * vi).collect();
            nodes.push(HcEvaluator::with_layout(rs, layout.clone(), m, &lj, hc)?);
        }
        Ok(CircleEvaluator { lam: lam.to_vec(), config: circle, nodes })
    }

    pub fn eval(&self, x: &[f64]) -> Result<Estimate> {
        let k = self.nodes.len() as f64;
        let mut mean = C64::new(0.0, 0.0);
        let mut alternating = C64::new(0.0, 0.0);
        let mut error = 0.0;
        for (j, node) in self.nodes.iter().enumerate() {
            let e = node.eval(x)?;
            mean += e.value;
            alternating += if j % 2 == 0 { e.value } else { -e.value };
            error += e.error;
        }
        mean /= k;
        error /= k;
        // highest resolved Fourier mode bounds the aliasing error
        error += (alternating / k).norm();
        Ok(Estimate { value: mean, error })
    }
}
