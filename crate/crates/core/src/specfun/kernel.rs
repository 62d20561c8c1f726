use alloc::vec;
use alloc::vec::Vec;

/// Taylor coefficients b_0..b_order of t/(1−e^{−t}) at t = 0.
///
/// Obtained by inverting (1−e^{−t})/t = Σ (−1)^n t^n/(n+1)!.
pub fn bern_kernel_coeffs(order: usize) -> Vec<f64> {
    let mut d = vec![0.0; order + 1];
    let mut fact = 1.0;
    for (n, dn) in d.iter_mut().enumerate() {
        fact *= (n + 1) as f64;
        *dn = if n % 2 == 0 { 1.0 } else { -1.0 } / fact;
    }
    let mut b = vec![0.0; order + 1];
    b[0] = 1.0;
    for n in 1..=order {
        b[n] = -(1..=n).map(|k| d[k] * b[n - k]).sum::<f64>();
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Float;

    #[test]
    fn examples() {
        assert_eq!(bern_kernel_coeffs(0), vec![1.0]);
        assert_eq!(bern_kernel_coeffs(1), vec![1.0, 0.5]);
        let b = bern_kernel_coeffs(2);
        assert!((b[2] - 1.0 / 12.0).abs() < 1e-16);
    }

    #[test]
    fn bernoulli_numbers() {
        // b_n = B_n / n! with B_1 = +1/2, odd n > 1 vanish
        let b = bern_kernel_coeffs(60);
        assert!((b[4] * 720.0 + 1.0).abs() < 1e-13);
        assert!((b[6] * 30240.0 - 1.0).abs() < 1e-13);
        for n in (3..=59).step_by(2) {
            assert!(b[n].abs() < 1e-14 * b[n - 1].abs(), "b[{n}] = {}", b[n]);
        }
        // |b_{2k}| ≈ 2/(2π)^{2k}
        let k = 30;
        let approx = 2.0 / (2.0 * core::f64::consts::PI).powi(2 * k as i32);
        assert!((b[2 * k].abs() / approx - 1.0).abs() < 1e-10);
    }
}
