//! The BC_r root system in the normalization β_j = 2e_j.
//!
//! Positive roots are e_j (short), e_j ± e_i for i < j (medium) and 2e_j (long).
//! Simple roots are α_1 = e_1, α_i = e_i − e_{i−1}, so the closed positive
//! chamber is 0 ≤ x_1 ≤ … ≤ x_r.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::multiplicity::Mult;
use crate::C64;

/// Largest supported rank.
pub const MAX_RANK: usize = 8;

/// Norm of the long roots.
pub const LONG_NORM: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RootClass {
    Short,
    Medium,
    Long,
}

/// Signed permutation acting by `(w x)[perm[i]] = signs[i] * x[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElem {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl WeylElem {
    pub fn identity(rank: usize) -> Self {
        WeylElem { perm: (0..rank).collect(), signs: vec![1; rank] }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }

    pub fn act(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        for i in 0..x.len() {
            y[self.perm[i]] = f64::from(self.signs[i]) * x[i];
        }
        y
    }

    pub fn act_complex(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); x.len()];
        for i in 0..x.len() {
            y[self.perm[i]] = x[i] * f64::from(self.signs[i]);
        }
        y
    }

    pub fn act_int(&self, x: &[i32]) -> Vec<i32> {
        let mut y = vec![0; x.len()];
        for i in 0..x.len() {
            y[self.perm[i]] = i32::from(self.signs[i]) * x[i];
        }
        y
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElem) -> WeylElem {
        let r = self.rank();
        let mut perm = vec![0; r];
        let mut signs = vec![1; r];
        for i in 0..r {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            signs[i] = self.signs[j] * other.signs[i];
        }
        WeylElem { perm, signs }
    }

    pub fn inverse(&self) -> WeylElem {
        let r = self.rank();
        let mut perm = vec![0; r];
        let mut signs = vec![1; r];
        for i in 0..r {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        WeylElem { perm, signs }
    }

    /// Number of positive short and medium roots sent to negative roots.
    pub fn length(&self) -> usize {
        let r = self.rank();
        let mut count = 0;
        for j in 0..r {
            let mut v = vec![0; r];
            v[j] = 1;
            if !is_positive(&self.act_int(&v)) {
                count += 1;
            }
            for i in 0..j {
                for s in [-1, 1] {
                    let mut v = vec![0; r];
                    v[j] = 1;
                    v[i] = s;
                    if !is_positive(&self.act_int(&v)) {
                        count += 1;
                    }
                }
            }
        }
        count
    }
}

/// A root vector is positive when its last nonzero coordinate is positive.
pub fn is_positive(v: &[i32]) -> bool {
    v.iter().rev().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

#[derive(Debug, Clone)]
pub struct Root {
    pub class: RootClass,
    /// Coordinates in the orthonormal basis.
    pub vector: Vec<i32>,
    /// Coordinates in the simple-root basis (all nonnegative).
    pub simple_coords: Vec<u32>,
    pub reflection: WeylElem,
}

impl Root {
    pub fn norm2(&self) -> f64 {
        self.vector.iter().map(|&c| f64::from(c * c)).sum()
    }

    /// α(x).
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.vector.iter().zip(x).map(|(&a, &b)| f64::from(a) * b).sum()
    }

    /// ⟨λ, α⟩.
    pub fn pair(&self, lam: &[C64]) -> C64 {
        self.vector.iter().zip(lam).map(|(&a, &b)| b * f64::from(a)).sum()
    }

    /// λ_α = ⟨λ, α⟩ / ⟨α, α⟩.
    pub fn coroot_coord(&self, lam: &[C64]) -> C64 {
        self.pair(lam) / self.norm2()
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    rank: usize,
    positive: Vec<Root>,
}

impl RootSystem {
    /// The BC root system of the given rank.
    pub fn build_bc(rank: usize) -> Result<Self> {
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::RankUnsupported { rank });
        }
        let mut positive = Vec::new();
        let mut push = |class, vector: Vec<i32>| {
            let simple_coords =
                simple_coordinates(&vector).into_iter().map(|c| u32::try_from(c).expect("positive root")).collect();
            let reflection = reflection_of(&vector);
            positive.push(Root { class, vector, simple_coords, reflection });
        };
        for j in 0..rank {
            let mut v = vec![0; rank];
            v[j] = 1;
            push(RootClass::Short, v);
        }
        for j in 0..rank {
            for i in 0..j {
                let mut v = vec![0; rank];
                v[j] = 1;
                v[i] = -1;
                push(RootClass::Medium, v.clone());
                v[i] = 1;
                push(RootClass::Medium, v);
            }
        }
        for j in 0..rank {
            let mut v = vec![0; rank];
            v[j] = 2;
            push(RootClass::Long, v);
        }
        Ok(RootSystem { rank, positive })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// Positive short and medium roots.
    pub fn indivisible_roots(&self) -> impl Iterator<Item = (usize, &Root)> {
        self.positive.iter().enumerate().filter(|(_, a)| a.class != RootClass::Long)
    }

    pub fn simple_roots(&self) -> Vec<Vec<i32>> {
        (0..self.rank)
            .map(|i| {
                let mut v = vec![0; self.rank];
                v[i] = 1;
                if i > 0 {
                    v[i - 1] = -1;
                }
                v
            })
            .collect()
    }

    /// 2^r · r!.
    pub fn weyl_order(&self) -> usize {
        (1..=self.rank).product::<usize>() << self.rank
    }

    /// All Weyl group elements in a fixed order: permutations in
    /// lexicographic order, each with sign patterns in binary order.
    pub fn weyl_elements(&self) -> Vec<WeylElem> {
        let r = self.rank;
        let mut out = Vec::with_capacity(self.weyl_order());
        let mut perm: Vec<usize> = (0..r).collect();
        loop {
            for mask in 0..(1u32 << r) {
                let signs = (0..r).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                out.push(WeylElem { perm: perm.clone(), signs });
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        out
    }

    /// ρ(m) = ½ Σ_{α>0} m_α α.
    pub fn rho(&self, m: &Mult) -> Vec<f64> {
        let mut rho = vec![0.0; self.rank];
        for a in &self.positive {
            let ma = m.of(a.class);
            for (r, &c) in rho.iter_mut().zip(&a.vector) {
                *r += 0.5 * ma * f64::from(c);
            }
        }
        rho
    }

    /// Smallest simple-root value α_i(x).
    pub fn chamber_margin(&self, x: &[f64]) -> f64 {
        (0..self.rank).map(|i| if i == 0 { x[0] } else { x[i] - x[i - 1] }).fold(f64::INFINITY, f64::min)
    }

    /// The orbit point in the closed chamber and a Weyl element carrying `x` to it.
    pub fn dominant_representative(&self, x: &[f64]) -> (Vec<f64>, WeylElem) {
        dominant_representative(x)
    }

    pub fn lattice_shells(&self, max_height: usize) -> Vec<LatticeVec> {
        lattice_shells(self.rank, max_height)
    }
}

/// Simple-root coordinates a_i = Σ_{j≥i} v_j.
pub fn simple_coordinates(v: &[i32]) -> Vec<i32> {
    let mut out = vec![0; v.len()];
    let mut acc = 0;
    for i in (0..v.len()).rev() {
        acc += v[i];
        out[i] = acc;
    }
    out
}

/// Real version of [`simple_coordinates`].
pub fn simple_coordinates_f64(v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    let mut acc = 0.0;
    for i in (0..v.len()).rev() {
        acc += v[i];
        out[i] = acc;
    }
    out
}

fn reflection_of(v: &[i32]) -> WeylElem {
    let r = v.len();
    let nz: Vec<usize> = (0..r).filter(|&i| v[i] != 0).collect();
    let mut w = WeylElem::identity(r);
    match nz.as_slice() {
        [j] => w.signs[*j] = -1,
        [i, j] => {
            // x ↦ x − ⟨x,α⟩α with α = e_j + s e_i: x_i ↦ −s x_j, x_j ↦ −s x_i
            let s = (v[*i] * v[*j]).signum() as i8;
            w.perm[*i] = *j;
            w.perm[*j] = *i;
            w.signs[*i] = -s;
            w.signs[*j] = -s;
        }
        _ => unreachable!("BC roots have one or two nonzero coordinates"),
    }
    w
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Sort absolute values ascending (stably) and flip negative entries.
pub fn dominant_representative(x: &[f64]) -> (Vec<f64>, WeylElem) {
    let r = x.len();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()));
    let mut w = WeylElem::identity(r);
    for (target, &src) in order.iter().enumerate() {
        w.perm[src] = target;
        w.signs[src] = if x[src] < 0.0 { -1 } else { 1 };
    }
    (w.act(x), w)
}

/// μ = Σ n_i · 2α_i.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVec {
    pub n: Vec<u32>,
}

impl LatticeVec {
    pub fn height(&self) -> u32 {
        self.n.iter().sum()
    }

    /// Orthonormal coordinates: μ_j = 2(n_j − n_{j+1}), μ_r = 2 n_r.
    pub fn to_vector(&self) -> Vec<f64> {
        let r = self.n.len();
        (0..r)
            .map(|j| {
                let next = if j + 1 < r { self.n[j + 1] } else { 0 };
                2.0 * (f64::from(self.n[j]) - f64::from(next))
            })
            .collect()
    }
}

/// All lattice points of height ≤ `max_height`, by height then descending
/// lexicographic order on `n`.
pub fn lattice_shells(rank: usize, max_height: usize) -> Vec<LatticeVec> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; rank];
    for h in 0..=max_height {
        compositions_desc(h as u32, 0, &mut cur, &mut out);
    }
    out
}

fn compositions_desc(rem: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<LatticeVec>) {
    let r = cur.len();
    if pos + 1 == r {
        cur[pos] = rem;
        out.push(LatticeVec { n: cur.clone() });
        return;
    }
    for v in (0..=rem).rev() {
        cur[pos] = v;
        compositions_desc(rem - v, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// Position of a lattice point in the [`lattice_shells`] order, computed in O(r).
#[derive(Debug, Clone)]
pub struct ShellIndex {
    rank: usize,
    max_height: usize,
    binom: Vec<Vec<u64>>,
}

impl ShellIndex {
    pub fn new(rank: usize, max_height: usize) -> Self {
        let n = max_height + rank + 1;
        let mut binom = vec![vec![0u64; rank + 1]; n + 1];
        for (a, row) in binom.iter_mut().enumerate() {
            row[0] = 1;
            for b in 1..=rank.min(a) {
                row[b] = if b == a { 1 } else { 0 };
            }
        }
        for a in 1..=n {
            for b in 1..=rank.min(a) {
                binom[a][b] = binom[a - 1][b - 1] + binom[a - 1][b];
            }
        }
        ShellIndex { rank, max_height, binom }
    }

    fn c(&self, a: i64, b: usize) -> u64 {
        if a < 0 || (a as usize) < b {
            0
        } else {
            self.binom[a as usize][b]
        }
    }

    /// Number of lattice points of height ≤ `max_height`.
    pub fn len(&self) -> usize {
        self.c((self.max_height + self.rank) as i64, self.rank) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index range of the lattice points of height `h`.
    pub fn shell_range(&self, h: usize) -> core::ops::Range<usize> {
        let start = if h == 0 { 0 } else { self.c((h - 1 + self.rank) as i64, self.rank) as usize };
        start..self.c((h + self.rank) as i64, self.rank) as usize
    }

    pub fn index(&self, n: &[u32]) -> usize {
        let r = self.rank;
        let h: i64 = n.iter().map(|&v| i64::from(v)).sum();
        let mut idx = if h > 0 { self.c(h - 1 + r as i64, r) } else { 0 };
        let mut rem = h;
        for (i, &ni) in n.iter().enumerate().take(r.saturating_sub(1)) {
            let parts = r - i - 1;
            let ni = i64::from(ni);
            idx += self.c(rem - ni - 1 + parts as i64, parts);
            rem -= ni;
        }
        idx as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for r in 1..=MAX_RANK {
            let rs = RootSystem::build_bc(r).unwrap();
            assert_eq!(rs.positive_roots().len(), r * r + r);
        }
        assert!(RootSystem::build_bc(0).is_err());
        assert!(RootSystem::build_bc(9).is_err());
    }

    #[test]
    fn rank_one_roots() {
        let rs = RootSystem::build_bc(1).unwrap();
        let v: Vec<_> = rs.positive_roots().iter().map(|a| a.vector.clone()).collect();
        assert_eq!(v, vec![vec![1], vec![2]]);
    }

    #[test]
    fn weyl_group_closure() {
        for r in 1..=3 {
            let rs = RootSystem::build_bc(r).unwrap();
            let ws = rs.weyl_elements();
            assert_eq!(ws.len(), rs.weyl_order());
            for a in &ws {
                for b in &ws {
                    assert!(ws.contains(&a.compose(b)));
                }
                assert!(a.compose(&a.inverse()).is_identity());
            }
        }
    }

    #[test]
    fn reflections_fix_hyperplane() {
        let rs = RootSystem::build_bc(3).unwrap();
        let x = [0.3, -1.1, 2.5];
        for a in rs.positive_roots() {
            let y = a.reflection.act(&x);
            let ax = a.eval(&x);
            let n2 = a.norm2();
            for j in 0..3 {
                let expect = x[j] - 2.0 * ax / n2 * f64::from(a.vector[j]);
                assert!((y[j] - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn simple_coords_nonnegative() {
        let rs = RootSystem::build_bc(4).unwrap();
        for a in rs.positive_roots() {
            let back: Vec<i32> = (0..4)
                .map(|j| {
                    let next = if j + 1 < 4 { a.simple_coords[j + 1] } else { 0 };
                    a.simple_coords[j] as i32 - next as i32
                })
                .collect();
            assert_eq!(back, a.vector);
        }
    }

    #[test]
    fn dominant_examples() {
        let (x, w) = dominant_representative(&[3.0, -1.0]);
        assert_eq!(x, vec![1.0, 3.0]);
        assert_eq!(w.act(&[3.0, -1.0]), x);
        let (x, w) = dominant_representative(&[0.0, 0.0]);
        assert_eq!(x, vec![0.0, 0.0]);
        assert!(w.is_identity());
        let (x, w) = dominant_representative(&[2.0, 2.0]);
        assert_eq!(x, vec![2.0, 2.0]);
        assert!(w.is_identity());
    }

    #[test]
    fn dominant_tie_break_has_minimal_length() {
        let rs = RootSystem::build_bc(3).unwrap();
        let ws = rs.weyl_elements();
        for x in [[0.0, 1.0, 1.0], [2.0, 0.0, 2.0], [-1.0, 1.0, 0.0], [0.0, 0.0, -3.0]] {
            let (xp, w) = dominant_representative(&x);
            let best = ws.iter().filter(|v| v.act(&x) == xp).map(WeylElem::length).min().unwrap();
            assert_eq!(w.length(), best);
        }
    }

    #[test]
    fn rho_forms_agree() {
        let rs = RootSystem::build_bc(2).unwrap();
        assert_eq!(rs.rho(&Mult::new(2.0, 1.0, 1.0)), vec![2.0, 3.0]);
        let rs = RootSystem::build_bc(1).unwrap();
        assert_eq!(rs.rho(&Mult::new(0.0, 0.0, 1.0)), vec![1.0]);
        for r in 1..=5 {
            let rs = RootSystem::build_bc(r).unwrap();
            let m = Mult::new(3.0, 2.0, 1.0);
            let rho = rs.rho(&m);
            for (j, v) in rho.iter().enumerate() {
                // ½ (m_s/2 + 1 + (j−1) m_m) β_j with β_j = 2 e_j
                let second = m.m_s / 2.0 + 1.0 + j as f64 * m.m_m;
                assert_eq!(*v, second);
            }
            assert!(rs.rho(&Mult::new(0.0, 0.0, 0.0)).iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn shells() {
        assert_eq!(lattice_shells(2, 0), vec![LatticeVec { n: vec![0, 0] }]);
        let s: Vec<_> = lattice_shells(1, 2).into_iter().map(|l| l.n).collect();
        assert_eq!(s, vec![vec![0], vec![1], vec![2]]);
        let s: Vec<_> = lattice_shells(2, 1).into_iter().map(|l| l.n).collect();
        assert_eq!(s, vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn shell_index_matches_order() {
        for r in 1..=4 {
            let h = 9;
            let shells = lattice_shells(r, h);
            let idx = ShellIndex::new(r, h);
            assert_eq!(idx.len(), shells.len());
            for (k, mu) in shells.iter().enumerate() {
                assert_eq!(idx.index(&mu.n), k);
            }
        }
    }
}
