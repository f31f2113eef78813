use std::f64::consts::{LN_2, PI};

use num_traits::Zero;

use crate::exact_math::{factorial_q, int, inv_factorial, pow2, to_f64, Rational};

/// `E(X_n) = 2^(2n-3) (n-1) (n-1)!^2 / (2n-1)!`, zero for `n = 1`.
pub fn first_moment(n: u32) -> Rational {
    assert!(n >= 1, "first_moment needs n >= 1");
    if n == 1 {
        return Rational::zero();
    }
    let fact = factorial_q(n - 1);
    pow2(2 * n as i64 - 3) * int(n - 1) * &fact * &fact * inv_factorial(2 * n - 1)
}

/// `E(X_n^2) = (n-1)(7n-4) / (30n)`.
pub fn second_moment(n: u32) -> Rational {
    assert!(n >= 1, "second_moment needs n >= 1");
    let n = n as i64;
    int((n - 1) * (7 * n - 4)) / int(30 * n)
}

/// `E(X_n)` in the log domain, usable far past the point where the
/// factorials overflow `f64`.
pub fn first_moment_float(n: u32) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let nf = n as f64;
    let log =
        (2.0 * nf - 3.0) * LN_2 + (nf - 1.0).ln() + 2.0 * libm::lgamma(nf) - libm::lgamma(2.0 * nf);
    log.exp()
}

pub fn second_moment_float(n: u32) -> f64 {
    let nf = n as f64;
    (nf - 1.0) * (7.0 * nf - 4.0) / (30.0 * nf)
}

pub fn variance_float(n: u32) -> f64 {
    let m1 = first_moment_float(n);
    second_moment_float(n) - m1 * m1
}

/// Leading-order growth `E(X_n) ~ sqrt(πn) / 4`.
pub fn asymptotic_first(n: u32) -> f64 {
    (PI * n as f64).sqrt() / 4.0
}

/// Leading-order growth `Var(X_n) ~ (7/30 - π/16) n`.
pub fn asymptotic_variance(n: u32) -> f64 {
    (7.0 / 30.0 - PI / 16.0) * n as f64
}

/// Exact moments of `X_n` and of the unit-normalized `X_n / (n-1)`, with
/// float renderings and the leading-order asymptotics.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub n: u32,
    pub first_moment: Rational,
    pub second_moment: Rational,
    pub variance: Rational,
    pub normalized_first: Rational,
    pub normalized_second: Rational,
    pub normalized_variance: Rational,
    pub float_first: f64,
    pub float_second: f64,
    pub float_variance: f64,
    pub float_normalized_first: f64,
    pub float_normalized_second: f64,
    pub float_normalized_variance: f64,
    pub asymptotic_first: f64,
    pub asymptotic_variance: f64,
}

pub fn moment_report(n: u32) -> MomentReport {
    assert!(n >= 2, "moment_report needs n >= 2");
    let first = first_moment(n);
    let second = second_moment(n);
    let variance = &second - &first * &first;
    let scale = int(n - 1);
    let scale_sq = &scale * &scale;
    let normalized_first = &first / &scale;
    let normalized_second = &second / &scale_sq;
    let normalized_variance = &variance / &scale_sq;
    MomentReport {
        n,
        float_first: to_f64(&first),
        float_second: to_f64(&second),
        float_variance: to_f64(&variance),
        float_normalized_first: to_f64(&normalized_first),
        float_normalized_second: to_f64(&normalized_second),
        float_normalized_variance: to_f64(&normalized_variance),
        asymptotic_first: asymptotic_first(n),
        asymptotic_variance: asymptotic_variance(n),
        first_moment: first,
        second_moment: second,
        variance,
        normalized_first,
        normalized_second,
        normalized_variance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::ratio;

    #[test]
    fn first_moment_examples() {
        assert_eq!(first_moment(1), Rational::zero());
        assert_eq!(first_moment(2), ratio(1, 3));
        assert_eq!(first_moment(3), ratio(8, 15));
    }

    #[test]
    fn second_moment_examples() {
        assert_eq!(second_moment(1), Rational::zero());
        assert_eq!(second_moment(2), ratio(1, 6));
        assert_eq!(second_moment(4), ratio(3, 5));
    }

    #[test]
    fn report_examples() {
        assert_eq!(moment_report(2).variance, ratio(1, 18));
        assert_eq!(moment_report(10).normalized_second, ratio(11, 450));
        assert_eq!(moment_report(3).normalized_first, ratio(4, 15));
        let r = moment_report(7);
        assert_eq!(
            r.variance,
            &r.second_moment - &r.first_moment * &r.first_moment
        );
        assert_eq!(r.normalized_first * int(6), r.first_moment);
    }

    #[test]
    fn log_domain_matches_exact() {
        assert!((first_moment_float(7) - 1.023).abs() < 1e-3);
        assert!((first_moment_float(2) - 1.0 / 3.0).abs() < 1e-15);
        for n in (2..=170).chain([500, 1000]) {
            let exact = to_f64(&first_moment(n));
            let rel = (first_moment_float(n) - exact).abs() / exact;
            let tol = if n <= 170 { 1e-10 } else { 1e-9 };
            assert!(rel <= tol, "n={n} rel={rel}");
        }
    }

    #[test]
    fn asymptotic_ratio_climbs_toward_one() {
        let mut prev = 0.0;
        for n in [100, 200, 500, 1000, 2000, 3000, 5000] {
            let ratio = first_moment_float(n) / asymptotic_first(n);
            assert!(ratio > prev, "n={n}");
            assert!(
                ratio <= 1.0 && ratio >= 1.0 - 1.0 / n as f64,
                "n={n} ratio={ratio}"
            );
            prev = ratio;
        }
    }
}
