//! The Harish-Chandra c-function c(m;λ) = c̃(m;λ)/c̃(m;ρ(m)) and the b₀ regularity test.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::multiplicity::Mult;
use crate::rootsys::{RootClass, RootSystem};
use crate::specfun::{log_gamma, pole_distance};
use crate::C64;

/// Distance to a nonpositive integer below which a gamma factor counts as singular.
pub const POLE_TOL: f64 = 1e-9;

/// Per-root contribution to log c̃.
#[derive(Debug, Clone, PartialEq)]
pub struct RootLogPart {
    /// Index into the positive roots of the root system.
    pub root: usize,
    /// −λ_α ln 2 + log Γ(λ_α), or `None` at a pole.
    pub log_numerator: Option<C64>,
    /// log Γ of the two denominator arguments, `None` at a pole.
    pub log_denominator: [Option<C64>; 2],
    /// A numerator pole cancelled against an identical denominator argument.
    pub cancelled: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CValue {
    pub value: C64,
    pub log_parts: Vec<RootLogPart>,
    pub numerator_poles: Vec<usize>,
    pub denominator_poles: Vec<usize>,
}

impl CValue {
    pub fn is_regular(&self) -> bool {
        self.numerator_poles.is_empty() && self.denominator_poles.is_empty()
    }

    /// Σ log_parts, when no factor is singular.
    pub fn log_value(&self) -> Option<C64> {
        if !self.is_regular() {
            return None;
        }
        let mut acc = C64::new(0.0, 0.0);
        for p in &self.log_parts {
            if let Some(n) = p.log_numerator {
                acc += n;
            }
            for d in p.log_denominator.iter().flatten() {
                acc -= d;
            }
        }
        Some(acc)
    }
}

/// One indivisible root: its vector, m_α and the multiplicity m_{2α} of its double.
#[derive(Debug, Clone)]
pub struct CFactor {
    pub root: usize,
    pub vector: Vec<i32>,
    pub m_alpha: f64,
    pub m_double: f64,
}

/// Indivisible positive roots with their multiplicities.
pub fn factors(rs: &RootSystem, m: &Mult) -> Vec<CFactor> {
    rs.indivisible_roots()
        .map(|(i, a)| CFactor {
            root: i,
            vector: a.vector.clone(),
            m_alpha: m.of(a.class),
            m_double: if a.class == RootClass::Short { m.m_l } else { 0.0 },
        })
        .collect()
}

fn coroot(vector: &[i32], lam: &[C64]) -> C64 {
    let n2: i32 = vector.iter().map(|c| c * c).sum();
    let p: C64 = vector.iter().zip(lam).map(|(&a, &b)| b * f64::from(a)).sum();
    p / f64::from(n2)
}

/// c̃ as a product over the given factors.
pub fn c_tilde_factors(fs: &[CFactor], lam: &[C64]) -> CValue {
    let mut parts = Vec::with_capacity(fs.len());
    let mut numerator_poles = Vec::new();
    let mut denominator_poles = Vec::new();
    for f in fs {
        let la = coroot(&f.vector, lam);
        let z0 = la;
        let z1 = la * 0.5 + f.m_alpha / 4.0 + 0.5;
        let z2 = la * 0.5 + f.m_alpha / 4.0 + f.m_double / 2.0;
        let mut num_pole = pole_distance(z0) < POLE_TOL;
        let mut den_pole = [pole_distance(z1) < POLE_TOL, pole_distance(z2) < POLE_TOL];
        let mut cancelled = false;
        if num_pole {
            for k in 0..2 {
                let zk = if k == 0 { z1 } else { z2 };
                if den_pole[k] && (zk - z0).norm() < 1e-12 {
                    num_pole = false;
                    den_pole[k] = false;
                    cancelled = true;
                    break;
                }
            }
        }
        let shift = -la * LN_2;
        let log_numerator = if cancelled {
            Some(shift)
        } else if num_pole {
            None
        } else {
            log_gamma(z0).ok().map(|g| g + shift)
        };
        let mut log_denominator = [None, None];
        for (k, z) in [z1, z2].into_iter().enumerate() {
            if cancelled && !den_pole[k] && pole_distance(z) < POLE_TOL {
                // the cancelled argument contributes nothing
                continue;
            }
            if !den_pole[k] {
                log_denominator[k] = log_gamma(z).ok();
            }
        }
        if num_pole {
            numerator_poles.push(f.root);
        }
        if den_pole.iter().any(|&d| d) {
            denominator_poles.push(f.root);
        }
        parts.push(RootLogPart { root: f.root, log_numerator, log_denominator, cancelled });
    }
    let mut cv = CValue { value: C64::new(0.0, 0.0), log_parts: parts, numerator_poles, denominator_poles };
    cv.value = match (cv.numerator_poles.is_empty(), cv.denominator_poles.is_empty()) {
        (true, true) => cv.log_value().map_or(C64::new(f64::NAN, 0.0), |l| l.exp()),
        (true, false) => C64::new(0.0, 0.0),
        (false, true) => C64::new(f64::INFINITY, 0.0),
        (false, false) => C64::new(f64::NAN, f64::NAN),
    };
    cv
}

/// c̃(m;λ) = Π_α 2^{−λ_α}Γ(λ_α) / [Γ(λ_α/2+m_α/4+1/2) Γ(λ_α/2+m_α/4+m_{2α}/2)].
pub fn c_tilde(rs: &RootSystem, m: &Mult, lam: &[C64]) -> CValue {
    c_tilde_factors(&factors(rs, m), lam)
}

/// c(m;λ) = c̃(m;λ)/c̃(m;ρ(m)).
pub fn c_function(rs: &RootSystem, m: &Mult, lam: &[C64]) -> Result<C64> {
    let fs = factors(rs, m);
    let rho: Vec<C64> = rs.rho(m).into_iter().map(C64::from).collect();
    let norm = c_tilde_factors(&fs, &rho).log_value().ok_or(Error::CFunctionPole)?;
    let cv = c_tilde_factors(&fs, lam);
    if let Some(&root) = cv.numerator_poles.first() {
        return Err(Error::NumeratorPole { root });
    }
    if !cv.denominator_poles.is_empty() {
        return Ok(C64::new(0.0, 0.0));
    }
    let l = cv.log_value().ok_or(Error::CFunctionPole)?;
    Ok((l - norm).exp())
}

/// Whether the gamma product Π_α Γ(λ₀_α/2+m_α/4+1/2) Γ(λ₀_α/2+m_α/4+m_{2α}/2) is nonsingular.
pub fn b0_regular(rs: &RootSystem, m: &Mult, lam0: &[C64]) -> bool {
    factors(rs, m).iter().all(|f| {
        let la = coroot(&f.vector, lam0);
        let z1 = la * 0.5 + f.m_alpha / 4.0 + 0.5;
        let z2 = la * 0.5 + f.m_alpha / 4.0 + f.m_double / 2.0;
        pole_distance(z1) >= POLE_TOL && pole_distance(z2) >= POLE_TOL
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    fn re(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn rank_one_values() {
        let rs = RootSystem::build_bc(1).unwrap();
        let m = Mult::new(0.0, 0.0, 1.0);
        let ct = c_tilde(&rs, &m, &re(&[1.0]));
        assert!((ct.value.re - 0.5).abs() < 1e-15);
        let c = c_function(&rs, &m, &re(&[2.0])).unwrap();
        assert!((c.re - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn normalised_at_rho() {
        for r in 1..=3 {
            let rs = RootSystem::build_bc(r).unwrap();
            for m in [Mult::new(2.0, 1.0, 1.0), Mult::new(4.0, 1.0, -1.0), Mult::new(0.5, 3.0, 0.2)] {
                let rho = re(&rs.rho(&m));
                let c = c_function(&rs, &m, &rho).unwrap();
                assert!((c - 1.0).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn b0_examples() {
        let rs = RootSystem::build_bc(2).unwrap();
        let m = Mult::new(2.0, 1.0, 1.0);
        assert!(b0_regular(&rs, &m, &re(&[0.0, 0.0])));
        assert!(b0_regular(&rs, &m, &re(&[0.0, 1.3])));
        let m = Mult::new(4.0, 1.0, 1.0).deform(3.0);
        assert_eq!(m, Mult::new(10.0, 1.0, -5.0));
        assert!(!b0_regular(&rs, &m, &re(&[0.0, 1.0])));
        let rs = RootSystem::build_bc(1).unwrap();
        assert!(b0_regular(&rs, &Mult::new(2.0, 0.0, 1.0), &re(&[1.0])));
    }

    #[test]
    fn permutation_covariance() {
        // c̃ over the permuted positive system at the permuted λ equals c̃(λ)
        let rs = RootSystem::build_bc(3).unwrap();
        let m = Mult::new(1.5, 0.7, 0.4);
        let lam = vec![C64::new(0.3, 0.2), C64::new(1.1, -0.4), C64::new(2.3, 0.1)];
        let base = c_tilde(&rs, &m, &lam).value;
        for w in rs.weyl_elements() {
            let fs: Vec<CFactor> =
                factors(&rs, &m).into_iter().map(|f| CFactor { vector: w.act_int(&f.vector), ..f }).collect();
            let v = c_tilde_factors(&fs, &w.act_complex(&lam)).value;
            assert!((v - base).norm() < 1e-12 * base.norm());
        }
    }

    #[test]
    fn normalisation_poles_across_boundary() {
        // rank one: 1/c̃(ρ) = 2^ρ Γ((m_s+m_l+1)/2)
        let rs = RootSystem::build_bc(1).unwrap();
        for s in [0.0, 0.5, 1.0, 3.0] {
            let m = Mult::new(s - 1.0, 0.0, 1.0);
            let ct = c_tilde(&rs, &m, &re(&rs.rho(&m)));
            assert!(ct.is_regular() && ct.value.norm() > 0.0, "s={s}");
        }
        for s in [-1.0, -3.0] {
            let m = Mult::new(s - 1.0, 0.0, 1.0);
            let ct = c_tilde(&rs, &m, &re(&rs.rho(&m)));
            assert!(!ct.denominator_poles.is_empty(), "s={s}");
        }
        // rank two along m_s + m_l crossing 0
        let rs = RootSystem::build_bc(2).unwrap();
        let m = Mult::new(1.0, 1.0, 0.0);
        assert!(c_tilde(&rs, &m, &re(&rs.rho(&m))).is_regular());
        let m = Mult::new(-2.0, 1.0, 1.0);
        assert!(!c_tilde(&rs, &m, &re(&rs.rho(&m))).is_regular());
    }

    #[test]
    fn numerator_pole_reported() {
        let rs = RootSystem::build_bc(1).unwrap();
        let m = Mult::new(2.0, 0.0, 1.0);
        assert_eq!(c_function(&rs, &m, &re(&[-2.0])), Err(Error::NumeratorPole { root: 0 }));
    }
}
