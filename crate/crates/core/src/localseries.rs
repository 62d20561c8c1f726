//! Taylor expansion of G_λ(m) at the origin, solved layer by layer from the
//! Cherednik system T_ξ(m) G = λ(ξ) G, and F_λ(m) as its Weyl average.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::multiplicity::Mult;
use crate::rootsys::{lattice_shells, RootSystem, ShellIndex, WeylElem};
use crate::specfun::bern_kernel_coeffs;
use crate::{Estimate, C64};

pub const MAX_DEGREE: usize = 30;
pub const MAX_RANK: usize = 4;
pub const DEFAULT_TRUST_RADIUS: f64 = 0.8;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Truncated power series Σ_k Σ_{|a|=k} c_a x^a.
#[derive(Debug, Clone)]
pub struct TaylorPoly {
    rank: usize,
    degree: usize,
    exps: Vec<Vec<u32>>,
    index: ShellIndex,
    /// `layers[k]` holds the degree-k coefficients in shell order.
    layers: Vec<Vec<C64>>,
}

impl TaylorPoly {
    fn zero(rank: usize, degree: usize) -> Self {
        let index = ShellIndex::new(rank, degree);
        let exps: Vec<Vec<u32>> = lattice_shells(rank, degree).into_iter().map(|l| l.n).collect();
        let layers = (0..=degree).map(|k| vec![ZERO; index.shell_range(k).len()]).collect();
        TaylorPoly { rank, degree, exps, index, layers }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn layer(&self, k: usize) -> &[C64] {
        &self.layers[k]
    }

    /// Exponent vectors of layer k, aligned with [`TaylorPoly::layer`].
    pub fn layer_exponents(&self, k: usize) -> &[Vec<u32>] {
        &self.exps[self.index.shell_range(k)]
    }

    pub fn coeff(&self, exponent: &[u32]) -> C64 {
        let k: u32 = exponent.iter().sum();
        if k as usize > self.degree || exponent.len() != self.rank {
            return ZERO;
        }
        let pos = self.index.index(exponent) - self.index.shell_range(k as usize).start;
        self.layers[k as usize][pos]
    }

    fn pos(&self, k: usize, exponent: &[u32]) -> usize {
        self.index.index(exponent) - self.index.shell_range(k).start
    }

    /// P ∘ w on layer k.
    fn compose_layer(&self, k: usize, src: &[C64], w: &WeylElem) -> Vec<C64> {
        let mut out = vec![ZERO; src.len()];
        let mut b = vec![0u32; self.rank];
        for (a, &c) in self.layer_exponents(k).iter().zip(src) {
            if c == ZERO {
                continue;
            }
            let mut sign = 1.0;
            for i in 0..self.rank {
                b[i] = a[w.perm[i]];
                if w.signs[i] < 0 && b[i] % 2 == 1 {
                    sign = -sign;
                }
            }
            out[self.pos(k, &b)] += c * sign;
        }
        out
    }

    /// Layer values L_k(x).
    pub fn layer_values(&self, x: &[f64]) -> (Vec<C64>, f64) {
        let mut powers = vec![vec![1.0; self.degree + 1]; self.rank];
        for (i, row) in powers.iter_mut().enumerate() {
            for k in 1..=self.degree {
                row[k] = row[k - 1] * x[i];
            }
        }
        let mut abs_sum = 0.0;
        let vals = (0..=self.degree)
            .map(|k| {
                let mut s = ZERO;
                for (a, &c) in self.layer_exponents(k).iter().zip(&self.layers[k]) {
                    let mut m = 1.0;
                    for (i, &ai) in a.iter().enumerate() {
                        m *= powers[i][ai as usize];
                    }
                    s += c * m;
                    abs_sum += c.norm() * m.abs();
                }
                s
            })
            .collect();
        (vals, abs_sum)
    }
}

/// Linear form α(x) = Σ v_j x_j with at most two nonzero coefficients.
#[derive(Debug, Clone)]
struct Form {
    m_half: f64,
    coeffs: Vec<(usize, f64)>,
    reflection: WeylElem,
}

fn mul_form(p: &TaylorPoly, k: usize, src: &[C64], f: &Form) -> Vec<C64> {
    let mut out = vec![ZERO; p.index.shell_range(k + 1).len()];
    let mut b = vec![0u32; p.rank];
    for (a, &c) in p.layer_exponents(k).iter().zip(src) {
        if c == ZERO {
            continue;
        }
        for &(i, v) in &f.coeffs {
            b.copy_from_slice(a);
            b[i] += 1;
            out[p.pos(k + 1, &b)] += c * v;
        }
    }
    out
}

/// (P − P∘r_α)/α(x) on layer k ≥ 1, by synthetic division in the leading variable.
fn divided_difference(p: &TaylorPoly, k: usize, src: &[C64], f: &Form) -> Result<Vec<C64>> {
    let refl = p.compose_layer(k, src, &f.reflection);
    let mut rem: Vec<C64> = src.iter().zip(&refl).map(|(a, b)| a - b).collect();
    let scale = rem.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut out = vec![ZERO; p.index.shell_range(k - 1).len()];
    if scale == 0.0 {
        return Ok(out);
    }
    let &(j, vj) = f.coeffs.last().expect("nonzero form");
    let exps = p.layer_exponents(k);
    let mut b = vec![0u32; p.rank];
    for t in (1..=k as u32).rev() {
        for (idx, a) in exps.iter().enumerate() {
            if a[j] != t || rem[idx] == ZERO {
                continue;
            }
            let q = rem[idx] / vj;
            rem[idx] = ZERO;
            b.copy_from_slice(a);
            b[j] -= 1;
            out[p.pos(k - 1, &b)] += q;
            for &(i, vi) in &f.coeffs[..f.coeffs.len() - 1] {
                let mut e = b.clone();
                e[i] += 1;
                let pos = p.pos(k, &e);
                rem[pos] -= q * vi;
            }
        }
    }
    let left = rem.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if left > 1e-10 * scale {
        return Err(Error::DivisionNotExact { degree: k });
    }
    Ok(out)
}

fn derivative(p: &TaylorPoly, k: usize, src: &[C64], i: usize) -> Vec<C64> {
    let mut out = vec![ZERO; p.index.shell_range(k - 1).len()];
    let mut b = vec![0u32; p.rank];
    for (a, &c) in p.layer_exponents(k).iter().zip(src) {
        if a[i] == 0 || c == ZERO {
            continue;
        }
        b.copy_from_slice(a);
        b[i] -= 1;
        out[p.pos(k - 1, &b)] += c * f64::from(a[i]);
    }
    out
}

fn solve_dense(mut a: Vec<Vec<C64>>, mut b: Vec<C64>) -> Option<Vec<C64>> {
    let n = b.len();
    let scale = a.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() <= 1e-13 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == ZERO {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[row][c] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![ZERO; n];
    for row in (0..n).rev() {
        let s: C64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

fn forms(rs: &RootSystem, m: &Mult) -> Vec<Form> {
    rs.positive_roots()
        .iter()
        .filter(|a| m.of(a.class) != 0.0)
        .map(|a| Form {
            m_half: m.of(a.class) / 2.0,
            coeffs: a.vector.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i, f64::from(v))).collect(),
            reflection: a.reflection.clone(),
        })
        .collect()
}

/// Taylor coefficients of G_λ(m) through the given degree.
pub fn g_taylor(rs: &RootSystem, m: &Mult, lam: &[C64], degree: usize) -> Result<TaylorPoly> {
    let r = rs.rank();
    if r > MAX_RANK {
        return Err(Error::RankUnsupported { rank: r });
    }
    if degree > MAX_DEGREE {
        return Err(Error::DegreeTooLarge { degree });
    }
    if lam.len() != r {
        return Err(Error::DimensionMismatch { expected: r, found: lam.len() });
    }
    let mut p = TaylorPoly::zero(r, degree);
    p.layers[0][0] = C64::new(1.0, 0.0);
    let rho = rs.rho(m);
    let shift: Vec<C64> = lam.iter().zip(&rho).map(|(&l, &q)| l + q).collect();
    let fs = forms(rs, m);
    let bern = bern_kernel_coeffs(degree);
    let blocks: Vec<Vec<Vec<usize>>> = (0..=degree).map(|k| orbit_blocks(&p, k)).collect();
    // cur[α][j−1] = α^{k+1−j} D_α G_j at step k
    let mut cur: Vec<Vec<Vec<C64>>> = vec![Vec::new(); fs.len()];
    let mut d_layers: Vec<Vec<C64>> = vec![Vec::new(); fs.len()];
    for k in 0..degree {
        if k >= 1 {
            for (fi, f) in fs.iter().enumerate() {
                for entry in cur[fi].iter_mut() {
                    *entry = mul_form(&p, k - 1, entry, f);
                }
                let lifted = mul_form(&p, k - 1, &d_layers[fi], f);
                cur[fi].push(lifted);
            }
        }
        let n_out = p.index.shell_range(k).len();
        let mut q: Vec<Vec<C64>> = shift.iter().map(|&s| p.layers[k].iter().map(|&c| c * s).collect()).collect();
        for (fi, f) in fs.iter().enumerate() {
            let mut s = vec![ZERO; n_out];
            for (idx, entry) in cur[fi].iter().enumerate() {
                let n = k - idx;
                let coef = bern[n] * 2f64.powi(n as i32);
                for (acc, &c) in s.iter_mut().zip(entry) {
                    *acc += c * coef;
                }
            }
            for &(i, v) in &f.coeffs {
                let w = f.m_half * v;
                for (acc, &c) in q[i].iter_mut().zip(&s) {
                    *acc -= c * w;
                }
            }
        }
        // Euler identity: (k+1)P + Σ_α (m_α/2)(P − r_α P) = Σ_i x_i Q_i
        let mut rhs = vec![ZERO; p.index.shell_range(k + 1).len()];
        for (i, qi) in q.iter().enumerate() {
            let f = Form { m_half: 0.0, coeffs: vec![(i, 1.0)], reflection: WeylElem::identity(r) };
            for (acc, c) in rhs.iter_mut().zip(mul_form(&p, k, qi, &f)) {
                *acc += c;
            }
        }
        let layer = solve_layer(&p, k + 1, &fs, &blocks[k + 1], &rhs)?;
        let mut residual: f64 = 0.0;
        let q_scale = q.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
        let mut lhs: Vec<Vec<C64>> = (0..r).map(|i| derivative(&p, k + 1, &layer, i)).collect();
        for (fi, f) in fs.iter().enumerate() {
            let dd = divided_difference(&p, k + 1, &layer, f)?;
            for &(i, v) in &f.coeffs {
                for (acc, &c) in lhs[i].iter_mut().zip(&dd) {
                    *acc += c * (f.m_half * v);
                }
            }
            d_layers[fi] = dd;
        }
        for (li, qi) in lhs.iter().zip(&q) {
            for (a, b) in li.iter().zip(qi) {
                residual = residual.max((a - b).norm());
            }
        }
        if residual > 1e-10 * q_scale.max(1.0) {
            return Err(Error::InconsistentSystem { degree: k + 1, residual });
        }
        p.layers[k + 1] = layer;
    }
    Ok(p)
}

/// Monomials of layer k grouped by the multiset of their exponents.
fn orbit_blocks(p: &TaylorPoly, k: usize) -> Vec<Vec<usize>> {
    let exps = p.layer_exponents(k);
    let mut keys: Vec<(Vec<u32>, usize)> = exps
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut s = a.clone();
            s.sort_unstable();
            (s, i)
        })
        .collect();
    keys.sort();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut last: Option<Vec<u32>> = None;
    for (key, i) in keys {
        if last.as_ref() != Some(&key) {
            blocks.push(Vec::new());
            last = Some(key);
        }
        blocks.last_mut().expect("pushed").push(i);
    }
    blocks
}

fn solve_layer(p: &TaylorPoly, k: usize, fs: &[Form], blocks: &[Vec<usize>], rhs: &[C64]) -> Result<Vec<C64>> {
    let exps = p.layer_exponents(k);
    let mut out = vec![ZERO; rhs.len()];
    let mut b = vec![0u32; p.rank];
    for block in blocks {
        let n = block.len();
        let local = |pos: usize| block.iter().position(|&q| q == pos).expect("orbit closed");
        let mut mat = vec![vec![ZERO; n]; n];
        for (col, &pos) in block.iter().enumerate() {
            mat[col][col] += C64::from(k as f64);
            let a = &exps[pos];
            for f in fs {
                mat[col][col] += f.m_half;
                // column of the map P ↦ P∘r_α applied to x^a
                let w = &f.reflection;
                let mut sign = 1.0;
                for i in 0..p.rank {
                    b[i] = a[w.perm[i]];
                    if w.signs[i] < 0 && b[i] % 2 == 1 {
                        sign = -sign;
                    }
                }
                let row = local(p.pos(k, &b));
                mat[row][col] -= f.m_half * sign;
            }
        }
        let rb: Vec<C64> = block.iter().map(|&pos| rhs[pos]).collect();
        let sol = solve_dense(mat, rb).ok_or(Error::SingularLayer { degree: k })?;
        for (&pos, v) in block.iter().zip(sol) {
            out[pos] = v;
        }
    }
    Ok(out)
}

/// Weyl average (1/|W|) Σ_w G ∘ w.
pub fn weyl_average(rs: &RootSystem, g: &TaylorPoly) -> TaylorPoly {
    let mut f = TaylorPoly::zero(g.rank, g.degree);
    let ws = rs.weyl_elements();
    let inv = 1.0 / ws.len() as f64;
    for k in 0..=g.degree {
        for w in &ws {
            for (acc, c) in f.layers[k].iter_mut().zip(g.compose_layer(k, &g.layers[k], w)) {
                *acc += c * inv;
            }
        }
    }
    f
}

/// Taylor coefficients of F_λ(m) through the given degree.
pub fn f_taylor(rs: &RootSystem, m: &Mult, lam: &[C64], degree: usize) -> Result<TaylorPoly> {
    Ok(weyl_average(rs, &g_taylor(rs, m, lam, degree)?))
}

/// Evaluate the series at x with a heuristic remainder bound.
pub fn eval_taylor(p: &TaylorPoly, x: &[f64], trust_radius: f64) -> Result<Estimate> {
    if x.len() != p.rank {
        return Err(Error::DimensionMismatch { expected: p.rank, found: x.len() });
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > trust_radius {
        return Err(Error::OutsideTrustRadius);
    }
    let (vals, abs_sum) = p.layer_values(x);
    let value: C64 = vals.iter().sum();
    let n = p.degree;
    let pair = |k: usize| vals[k].norm() + if k > 0 { vals[k - 1].norm() } else { 0.0 };
    let error = if n >= 3 {
        let last = pair(n);
        let before = pair(n - 2);
        let ratio = if before > 0.0 { last / before } else { 0.0 };
        if ratio < 0.5 {
            last * ratio / (1.0 - ratio) + last
        } else {
            2.0 * last + before
        }
    } else {
        pair(n)
    };
    Ok(Estimate { value, error: error + 8.0 * f64::EPSILON * abs_sum })
}
