use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::{Estimate, C64};

/// Abscissa of the tanh-sinh rule with both endpoint distances stored exactly.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub u: f64,
    pub one_minus_u: f64,
    pub ln_u: f64,
    pub ln_one_minus_u: f64,
    /// du/dt.
    pub weight: f64,
    pub ln_weight: f64,
    level: u32,
}

/// Double-exponential rule u(t) = 1/(1+e^{−π sinh t}) on (0, 1).
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub max_level: u32,
    pub t_max: f64,
    pub tol: f64,
    nodes: Vec<Node>,
}

fn softplus(y: f64) -> f64 {
    y.max(0.0) + (-y.abs()).exp().ln_1p()
}

impl QuadratureRule {
    pub fn new(max_level: u32, t_max: f64, tol: f64) -> Self {
        let step = 0.5f64.powi(max_level as i32);
        let k_max = (t_max / step).floor() as i64;
        let mut nodes = Vec::with_capacity(2 * k_max as usize + 1);
        for k in -k_max..=k_max {
            let t = k as f64 * step;
            let s = PI * t.sinh();
            let ln_u = -softplus(-s);
            let ln_one_minus_u = -softplus(s);
            let ln_weight = PI.ln() + t.cosh().ln() + ln_u + ln_one_minus_u;
            let level = if k == 0 { 0 } else { max_level.saturating_sub(k.trailing_zeros()) };
            nodes.push(Node {
                u: ln_u.exp(),
                one_minus_u: ln_one_minus_u.exp(),
                ln_u,
                ln_one_minus_u,
                weight: ln_weight.exp(),
                ln_weight,
                level,
            });
        }
        QuadratureRule { max_level, t_max, tol, nodes }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    fn run(&self, mut term: impl FnMut(&Node) -> Option<C64>) -> Result<Estimate> {
        let mut partial = C64::new(0.0, 0.0);
        let mut prev: Option<C64> = None;
        let mut prev_diff = f64::INFINITY;
        for level in 0..=self.max_level {
            for node in self.nodes.iter().filter(|n| n.level == level) {
                if let Some(v) = term(node) {
                    partial += v;
                }
            }
            let value = partial * 0.5f64.powi(level as i32);
            if !(value.re.is_finite() && value.im.is_finite()) {
                return Err(Error::NonIntegrableEndpoint);
            }
            if let Some(p) = prev {
                let diff = (value - p).norm();
                if diff <= self.tol * value.norm().max(f64::MIN_POSITIVE) && level >= 3 {
                    return Ok(Estimate { value, error: diff });
                }
                if level == self.max_level {
                    if diff > 0.5 * prev_diff {
                        return Err(Error::NonIntegrableEndpoint);
                    }
                    return Ok(Estimate { value, error: diff });
                }
                prev_diff = diff;
            }
            prev = Some(value);
        }
        unreachable!("loop returns at max level")
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::new(9, 8.0, 1e-14)
    }
}

/// ∫₀¹ f, with `f` called as f(u, 1−u).
pub fn integrate01(mut f: impl FnMut(f64, f64) -> C64, rule: &QuadratureRule) -> Result<Estimate> {
    rule.run(|n| {
        if n.weight == 0.0 || n.u == 0.0 || n.one_minus_u == 0.0 {
            return None;
        }
        Some(f(n.u, n.one_minus_u) * n.weight)
    })
}

/// ∫₀¹ exp(g), with `g` returning the logarithm of the integrand at a node.
pub fn integrate01_log(mut g: impl FnMut(&Node) -> C64, rule: &QuadratureRule) -> Result<Estimate> {
    rule.run(|n| {
        let e = g(n) + n.ln_weight;
        if e.re < -745.0 {
            None
        } else {
            Some(e.exp())
        }
    })
}
