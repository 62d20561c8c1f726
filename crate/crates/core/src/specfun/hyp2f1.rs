use num_traits::Float;

use super::gamma::pole_distance;
use crate::error::{Error, Result};
use crate::{Estimate, C64};

/// Upper bound on the number of series terms.
pub const MAX_TERMS: usize = 100_000;

/// Gauss hypergeometric ₂F₁(a, b; c; z) for real z < 1.
///
/// Negative z is mapped to w = z/(z−1) ∈ [0, 1) by
/// ₂F₁(a,b;c;z) = (1−z)^{−a} ₂F₁(a, c−b; c; w).
pub fn gauss_2f1(a: C64, b: C64, c: C64, z: f64) -> Result<C64> {
    gauss_2f1_estimate(a, b, c, z).map(|e| e.value)
}

/// [`gauss_2f1`] with a rounding and truncation bound.
pub fn gauss_2f1_estimate(a: C64, b: C64, c: C64, z: f64) -> Result<Estimate> {
    if pole_distance(c) < 1e-12 {
        return Err(Error::ParameterPole);
    }
    if !(z < 1.0) || z.is_nan() {
        return Err(Error::NonConvergent);
    }
    if z < 0.0 {
        let w = z / (z - 1.0);
        let pre = (-a * (1.0 - z).ln()).exp();
        let e = series(a, c - b, c, w)?;
        return Ok(Estimate { value: pre * e.value, error: pre.norm() * e.error });
    }
    series(a, b, c, z)
}

fn series(a: C64, b: C64, c: C64, w: f64) -> Result<Estimate> {
    let one = C64::new(1.0, 0.0);
    let mut sum = one;
    let mut term = one;
    let mut abs_sum = 1.0;
    let done = |sum: C64, abs_sum: f64, n: usize, tail: f64| Estimate {
        value: sum,
        error: tail + 4.0 * f64::EPSILON * abs_sum * (1.0 + (n as f64).sqrt()),
    };
    if w == 0.0 {
        return Ok(done(sum, 0.0, 0, 0.0));
    }
    let hump = a.norm().max(b.norm()).max(c.norm());
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term = term * (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * w;
        sum += term;
        abs_sum += term.norm();
        if term.norm() == 0.0 {
            return Ok(done(sum, abs_sum, n, 0.0));
        }
        let k = nf + 1.0;
        if k > hump {
            // geometric tail bound with the current ratio
            let ratio = ((a + k) * (b + k) / ((c + k) * (k + 1.0))).norm() * w;
            let tail = term.norm() * ratio / (1.0 - ratio);
            if ratio < 1.0 && tail < 1e-16 * sum.norm() {
                return Ok(done(sum, abs_sum, n, tail));
            }
        }
    }
    Err(Error::NonConvergent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn examples() {
        assert_eq!(gauss_2f1(r(0.3), r(2.0), r(1.5), 0.0).unwrap(), r(1.0));
        let v = gauss_2f1(r(1.0), r(1.0), r(2.0), 0.5).unwrap();
        assert!((v.re - 2.0 * 2f64.ln()).abs() < 1e-15);
        let v = gauss_2f1(r(2.0), r(0.7), r(0.7), 0.3).unwrap();
        assert!((v.re - 0.7f64.powi(-2)).abs() < 1e-14);
        assert_eq!(gauss_2f1(r(1.0), r(1.0), r(-2.0), 0.5), Err(Error::ParameterPole));
    }

    #[test]
    fn negative_argument() {
        // ₂F₁(1,1;2;z) = −ln(1−z)/z
        for z in [-0.3, -2.0, -15.0] {
            let v = gauss_2f1(r(1.0), r(1.0), r(2.0), z).unwrap();
            assert!((v.re - (-(1.0 - z).ln() / z)).abs() < 1e-14);
        }
    }

    #[test]
    fn reference_values() {
        // mpmath hyp2f1 at 30 digits
        let v = gauss_2f1(C64::new(0.3, 1.2), r(-1.7), C64::new(2.5, -0.5), 0.85).unwrap();
        let want = C64::new(0.882_820_529_625_112_5, -0.630_410_818_756_395_2);
        assert!((v - want).norm() < 1e-13);
        let v = gauss_2f1(r(1.25), r(2.75), r(3.5), -40.0).unwrap();
        let want = r(0.015_070_229_149_400_988);
        assert!((v - want).norm() < 1e-15);
    }

    #[test]
    fn too_close_to_one() {
        assert_eq!(gauss_2f1(r(0.5), r(0.5), r(0.1), 0.999_999_99), Err(Error::NonConvergent));
    }
}
