//! Multiplicity triples, the ℓ-deformation and the region taxonomy.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::rootsys::RootClass;
use crate::C64;

/// Multiplicities (m_s, m_m, m_l) of the short, medium and long roots.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Mult {
    pub m_s: f64,
    pub m_m: f64,
    pub m_l: f64,
}

/// Complex multiplicities, used for the complex regularity regions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMult {
    pub m_s: C64,
    pub m_m: C64,
    pub m_l: C64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegionFlags {
    pub in_mplus: bool,
    pub in_m0: bool,
    pub in_m1: bool,
    pub in_m2: bool,
    pub in_m3: bool,
    pub ell_min: f64,
    pub ell_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComplexRegionFlags {
    pub in_mc_plus: bool,
    pub in_mc_0: bool,
}

impl Mult {
    pub const fn new(m_s: f64, m_m: f64, m_l: f64) -> Self {
        Mult { m_s, m_m, m_l }
    }

    pub fn of(&self, class: RootClass) -> f64 {
        match class {
            RootClass::Short => self.m_s,
            RootClass::Medium => self.m_m,
            RootClass::Long => self.m_l,
        }
    }

    /// m(ℓ) = (m_s + 2ℓ, m_m, m_l − 2ℓ).
    pub fn deform(&self, ell: f64) -> Mult {
        deform(self, ell)
    }

    pub fn region_flags(&self) -> RegionFlags {
        region_flags(self)
    }
}

impl From<Mult> for ComplexMult {
    fn from(m: Mult) -> Self {
        ComplexMult { m_s: m.m_s.into(), m_m: m.m_m.into(), m_l: m.m_l.into() }
    }
}

pub fn deform(m: &Mult, ell: f64) -> Mult {
    Mult { m_s: m.m_s + 2.0 * ell, m_m: m.m_m, m_l: m.m_l - 2.0 * ell }
}

pub fn in_mplus(m: &Mult) -> bool {
    m.m_s >= 0.0 && m.m_m >= 0.0 && m.m_l >= 0.0
}

pub fn in_m0(m: &Mult) -> bool {
    m.m_m >= 0.0 && m.m_s + m.m_l >= 0.0
}

pub fn in_m1(m: &Mult) -> bool {
    m.m_m > 0.0 && m.m_s > 0.0 && m.m_s + 2.0 * m.m_l > 0.0
}

pub fn in_m2(m: &Mult) -> bool {
    m.m_m >= 0.0 && m.m_l >= 0.0 && m.m_s + m.m_l >= 0.0
}

pub fn in_m3(m: &Mult) -> bool {
    m.m_m >= 0.0 && m.m_l <= 0.0 && m.m_s + 2.0 * m.m_l >= 0.0
}

/// (ℓ_min, ℓ_max) = (−m_s/2, m_s/2 + m_l).
pub fn ell_range(m: &Mult) -> (f64, f64) {
    (-m.m_s / 2.0, m.m_s / 2.0 + m.m_l)
}

pub fn region_flags(m: &Mult) -> RegionFlags {
    let (ell_min, ell_max) = ell_range(m);
    RegionFlags {
        in_mplus: in_mplus(m),
        in_m0: in_m0(m),
        in_m1: in_m1(m),
        in_m2: in_m2(m),
        in_m3: in_m3(m),
        ell_min,
        ell_max,
    }
}

/// Writes m0 ∈ M+ ∪ M3 as m(ℓ) with m = (m0_s + m0_l, m0_m, 0) ∈ M+ and ℓ = −m0_l/2.
pub fn standardize(m0: &Mult) -> Result<(Mult, f64)> {
    if !(in_mplus(m0) || in_m3(m0)) {
        return Err(Error::NotRepresentable);
    }
    let m = Mult { m_s: m0.m_s + m0.m_l, m_m: m0.m_m, m_l: 0.0 };
    Ok((m, -m0.m_l / 2.0))
}

pub fn complex_region_flags(m: &ComplexMult) -> ComplexRegionFlags {
    let in_mc_plus = m.m_s.re >= 0.0 && m.m_m.re >= 0.0 && m.m_l.re >= 0.0;
    // indivisible roots: short with partner m_l, medium with no partner
    let in_mc_0 = (m.m_s + m.m_l).re >= 0.0 && m.m_m.re >= 0.0;
    ComplexRegionFlags { in_mc_plus, in_mc_0 }
}

/// m_s/2 + m_l/(1+e^t), nonnegative for m ∈ M+ ∪ M3.
pub fn weight_bound_short(m: &Mult, t: f64) -> f64 {
    let s = if t > 0.0 { (-t).exp() / (1.0 + (-t).exp()) } else { 1.0 / (1.0 + t.exp()) };
    m.m_s / 2.0 + m.m_l * s
}

/// m_s/2 + m_l(1+e^{2t})/(1+e^t)², nonnegative for m ∈ M2 ∪ M3.
pub fn weight_bound_mixed(m: &Mult, t: f64) -> f64 {
    // (1+e^{2t})/(1+e^t)² is even in t
    let e = (-t.abs()).exp();
    let q = (1.0 + e * e) / ((1.0 + e) * (1.0 + e));
    m.m_s / 2.0 + m.m_l * q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deform_examples() {
        assert_eq!(deform(&Mult::new(2.0, 1.0, 1.0), 1.0), Mult::new(4.0, 1.0, -1.0));
        assert_eq!(deform(&Mult::new(3.0, 2.0, 1.0), 0.0), Mult::new(3.0, 2.0, 1.0));
        assert_eq!(deform(&Mult::new(3.0, 2.0, 1.0), -0.5), Mult::new(2.0, 2.0, 2.0));
    }

    #[test]
    fn region_examples() {
        let f = region_flags(&Mult::new(2.0, 1.0, 1.0));
        assert!(f.in_mplus && f.in_m1);
        assert_eq!((f.ell_min, f.ell_max), (-1.0, 2.0));
        let f = region_flags(&Mult::new(4.0, 1.0, -1.0));
        assert!(f.in_m3 && f.in_m1 && !f.in_mplus);
        let f = region_flags(&Mult::new(0.0, 2.0, 1.0));
        assert!(f.in_mplus && !f.in_m1);
    }

    #[test]
    fn ell_range_examples() {
        assert_eq!(ell_range(&Mult::new(4.0, 0.0, 1.0)), (-2.0, 3.0));
        assert_eq!(ell_range(&Mult::new(0.0, 0.0, 1.0)), (0.0, 1.0));
        assert_eq!(ell_range(&Mult::new(8.0, 0.0, 1.0)), (-4.0, 5.0));
    }

    #[test]
    fn standardize_examples() {
        let (m, ell) = standardize(&Mult::new(4.0, 4.0, 1.0)).unwrap();
        assert_eq!(m, Mult::new(5.0, 4.0, 0.0));
        assert_eq!(ell, -0.5);
        assert_eq!(deform(&m, ell), Mult::new(4.0, 4.0, 1.0));
        assert_eq!(standardize(&Mult::new(0.0, 1.0, 0.0)).unwrap(), (Mult::new(0.0, 1.0, 0.0), -0.0));
        assert_eq!(standardize(&Mult::new(-1.0, 1.0, 0.0)), Err(Error::NotRepresentable));
    }

    #[test]
    fn complex_examples() {
        let f = complex_region_flags(&Mult::new(2.0, 1.0, 1.0).into());
        assert!(f.in_mc_plus && f.in_mc_0);
        let f = complex_region_flags(&Mult::new(4.0, 1.0, -1.0).into());
        assert!(f.in_mc_0 && !f.in_mc_plus);
        let f = complex_region_flags(&Mult::new(-2.0, 0.0, 1.0).into());
        assert!(!f.in_mc_0);
    }
}
