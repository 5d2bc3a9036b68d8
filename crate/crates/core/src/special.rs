//! Special functions: the cardinal sine and Bessel functions of the first
//! kind of real order.

use std::f64::consts::PI;

pub use statrs::function::gamma::gamma;

/// Below this distance from an integer, `sinc` switches to a Taylor expansion.
const SINC_TAYLOR_BAND: f64 = 1e-4;

/// Arguments above this use the Hankel asymptotic expansion.
const BESSEL_SERIES_LIMIT: f64 = 12.0;

/// `sin(pi t) / (pi t)`, continuous at zero.
///
/// The argument is reduced to `t = n + e` with `|e| <= 1/2` so that
/// `sin(pi t) = (-1)^n sin(pi e)` is computed without loss near lattice zeros.
pub fn sinc(t: f64) -> f64 {
    let n = t.round();
    let e = t - n;
    let sign = if (n as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    if n == 0.0 {
        if e.abs() < SINC_TAYLOR_BAND {
            let u = (PI * e).powi(2);
            // sin(x)/x = 1 - x^2/6 + x^4/120 - x^6/5040 + x^8/362880 - x^10/39916800
            return 1.0 - u / 6.0 * (1.0 - u / 20.0 * (1.0 - u / 42.0 * (1.0 - u / 72.0 * (1.0 - u / 110.0))));
        }
        return (PI * e).sin() / (PI * e);
    }
    let s = if e.abs() < SINC_TAYLOR_BAND {
        let x = PI * e;
        let u = x * x;
        x * (1.0 - u / 6.0 * (1.0 - u / 20.0 * (1.0 - u / 42.0 * (1.0 - u / 72.0 * (1.0 - u / 110.0)))))
    } else {
        (PI * e).sin()
    };
    sign * s / (PI * t)
}

/// Tensor-product sinc `prod_v sinc(x_v)`.
pub fn sinc_nd(x: &[f64]) -> f64 {
    x.iter().map(|&t| sinc(t)).product()
}

/// Bessel function of the first kind `J_nu(z)` for `nu >= 0`, `z >= 0`.
pub fn bessel_j(nu: f64, z: f64) -> f64 {
    debug_assert!(nu >= 0.0, "order must be non-negative");
    let z = z.abs();
    if z <= BESSEL_SERIES_LIMIT {
        bessel_j_series(nu, z)
    } else {
        bessel_j_asymptotic(nu, z)
    }
}

fn bessel_j_series(nu: f64, z: f64) -> f64 {
    if z == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = z / 2.0;
    let q = half * half;
    let mut term = half.powf(nu) / gamma(nu + 1.0);
    let mut sum = term;
    for m in 1..200 {
        let mf = m as f64;
        term *= -q / (mf * (mf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && mf > half {
            break;
        }
    }
    sum
}

fn bessel_j_asymptotic(nu: f64, z: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let chi = z - (nu / 2.0 + 0.25) * PI;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * z);
        if a.abs() >= prev || a == 0.0 {
            break;
        }
        prev = a.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    (2.0 / (PI * z)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `J_nu(z) / z^nu`, continuous at `z = 0` where it equals `1 / (2^nu Gamma(nu+1))`.
pub fn bessel_j_scaled(nu: f64, z: f64) -> f64 {
    let z = z.abs();
    if z < 1e-8 {
        let lead = 1.0 / (2f64.powf(nu) * gamma(nu + 1.0));
        return lead * (1.0 - z * z / (4.0 * (nu + 1.0)));
    }
    bessel_j(nu, z) / z.powf(nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert_eq!(sinc(3.0), 0.0);
        assert_relative_eq!(sinc(0.5), 2.0 / PI, epsilon = 1e-16);
        assert_relative_eq!(sinc(-2.5), sinc(2.5), epsilon = 1e-16);
    }

    #[test]
    fn sinc_taylor_band_is_continuous() {
        for &n in &[0.0, 1.0, -4.0, 17.0] {
            for &e in &[0.99e-4, 1.01e-4, -0.99e-4, -1.01e-4, 3e-7] {
                let t: f64 = n + e;
                let direct = (PI * t).sin() / (PI * t);
                let tol = if n == 0.0 { 1e-15 } else { 1e-11 * e.abs() };
                assert!((sinc(t) - direct).abs() <= tol.max(1e-16), "t = {t}");
            }
        }
    }

    #[test]
    fn bessel_half_integer_closed_forms() {
        // J_{1/2}(z) = sqrt(2/(pi z)) sin z, J_{3/2}(z) = sqrt(2/(pi z)) (sin z / z - cos z)
        for &z in &[0.3, 1.0, 5.5, 11.9, 12.1, 20.0, 47.3] {
            let c = (2.0 / (PI * z)).sqrt();
            assert_relative_eq!(bessel_j(0.5, z), c * z.sin(), epsilon = 1e-12);
            assert_relative_eq!(bessel_j(1.5, z), c * (z.sin() / z - z.cos()), epsilon = 1e-12);
        }
    }

    #[test]
    fn bessel_integer_reference_values() {
        assert_relative_eq!(bessel_j(0.0, 1.0), 0.765_197_686_557_966_6, epsilon = 1e-15);
        assert_relative_eq!(bessel_j(1.0, 1.0), 0.440_050_585_744_933_5, epsilon = 1e-15);
        assert_relative_eq!(bessel_j(1.0, 10.0), 0.043_472_746_168_861_6, epsilon = 1e-12);
        assert_relative_eq!(bessel_j(2.0, 15.0), 0.041_571_677_975_250_44, epsilon = 1e-11);
        assert_relative_eq!(bessel_j(0.0, 30.0), -0.086_367_983_581_040_21, epsilon = 1e-12);
    }

    #[test]
    fn bessel_matches_across_switch() {
        for &nu in &[0.0, 1.0, 1.5, 2.0, 2.5] {
            let a = bessel_j_series(nu, 12.0);
            let b = bessel_j_asymptotic(nu, 12.0);
            assert!((a - b).abs() < 1e-9, "nu = {nu}: {a} vs {b}");
        }
    }

    #[test]
    fn scaled_limit_at_zero() {
        // J_1(z)/z -> 1/2
        assert_relative_eq!(bessel_j_scaled(1.0, 0.0), 0.5, epsilon = 1e-16);
        assert_relative_eq!(bessel_j_scaled(1.0, 1e-3), bessel_j(1.0, 1e-3) / 1e-3, epsilon = 1e-14);
        assert_relative_eq!(bessel_j_scaled(2.0, 1e-9), 0.125, epsilon = 1e-15);
    }
}
