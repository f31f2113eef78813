use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bivariate_poly::BivarPoly;
use crate::error::{Error, Result};
use crate::exact_math::{factorial_q, int, Rational};

/// Which moment polynomial a coefficient table came from.
///
/// * `F`: `F_n = Σ_{k=0}^{n}  f(n,k) t^(n+k-1) s^(n-k)`
/// * `G`: `G_n = Σ_{k=-1}^{n} g(n,k) t^(n+k)   s^(n-k)`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffKind {
    F,
    G,
}

impl CoeffKind {
    pub fn name(self) -> &'static str {
        match self {
            CoeffKind::F => "F",
            CoeffKind::G => "G",
        }
    }

    pub fn k_range(self, n: u32) -> std::ops::RangeInclusive<i64> {
        match self {
            CoeffKind::F => 0..=n as i64,
            CoeffKind::G => -1..=n as i64,
        }
    }

    /// `(deg_s, deg_t)` of the monomial carrying coefficient `k`.
    pub fn exponents(self, n: u32, k: i64) -> Option<(u32, u32)> {
        if !self.k_range(n).contains(&k) {
            return None;
        }
        let n = n as i64;
        let t_deg = match self {
            CoeffKind::F => n + k - 1,
            CoeffKind::G => n + k,
        };
        let s_deg = n - k;
        (t_deg >= 0 && s_deg >= 0).then_some((s_deg as u32, t_deg as u32))
    }

    /// Inverse of [`CoeffKind::exponents`].
    fn index_of(self, n: u32, s_deg: u32, t_deg: u32) -> Option<i64> {
        let k = n as i64 - s_deg as i64;
        (self.exponents(n, k) == Some((s_deg, t_deg))).then_some(k)
    }
}

/// Coefficients `f(n,k)` or `g(n,k)` of a single moment polynomial, keyed by
/// `k`. Every `k` in range is present, including zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    pub kind: CoeffKind,
    pub n: u32,
    pub coeffs: BTreeMap<i64, Rational>,
}

impl CoeffTable {
    pub fn get(&self, k: i64) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Reassembles the polynomial from the table.
    pub fn to_poly(&self) -> BivarPoly {
        BivarPoly::from_terms(
            self.coeffs
                .iter()
                .filter_map(|(&k, c)| self.kind.exponents(self.n, k).map(|e| (e, c.clone()))),
        )
    }

    /// Rescaled coefficient: `f(n,k) (n+k-1)! (n-k)!` or `g(n,k) (n+k)! (n-k)!`.
    pub fn rescaled(&self, k: i64) -> Option<Rational> {
        let (s_deg, t_deg) = self.kind.exponents(self.n, k)?;
        Some(self.get(k) * factorial_q(t_deg) * factorial_q(s_deg))
    }

    /// `Σ_k` of the coefficients, i.e. the polynomial at `s = t = 1`.
    pub fn sum(&self) -> Rational {
        self.coeffs.values().fold(Rational::zero(), |a, c| a + c)
    }
}

/// Reads `f(n,k)` or `g(n,k)` off a moment polynomial. Any monomial outside
/// the expected exponent pattern is reported as [`Error::PatternViolation`].
pub fn extract_coeffs(poly: &BivarPoly, kind: CoeffKind, n: u32) -> Result<CoeffTable> {
    let mut coeffs: BTreeMap<i64, Rational> =
        kind.k_range(n).map(|k| (k, Rational::zero())).collect();
    for (&(s_deg, t_deg), c) in poly.terms() {
        let k = kind
            .index_of(n, s_deg, t_deg)
            .ok_or(Error::PatternViolation {
                kind: kind.name(),
                n,
                s_deg,
                t_deg,
            })?;
        coeffs.insert(k, c.clone());
    }
    Ok(CoeffTable { kind, n, coeffs })
}

fn out_of_range(kind: CoeffKind, n: u32, k: i64) -> Error {
    Error::OutOfRange {
        what: "coefficient index",
        detail: format!("{}(n={n}, k={k})", kind.name()),
    }
}

/// Diagonal `f(k,k) = (k-1) k / (2k-1)!`.
pub fn f_diagonal_closed(k: u32) -> Rational {
    assert!(k >= 1);
    int((k as u64 - 1) * k as u64) / factorial_q(2 * k - 1)
}

/// Closed forms of `f(n,k)`:
///
/// * `k = 0`: `n (n-1) / (2 (n-1)! n!)`
/// * `k = 1`: `-f(n,0)`
/// * `2 <= k <= n`: `(k-1) k / ((n+k-1)! (n-k)!)`
pub fn coeff_closed_form_f(n: u32, k: i64) -> Result<Rational> {
    if n < 1 || !(0..=n as i64).contains(&k) {
        return Err(out_of_range(CoeffKind::F, n, k));
    }
    let f0 = || int(n as u64 * (n as u64 - 1)) / (int(2) * factorial_q(n - 1) * factorial_q(n));
    Ok(match k {
        0 => f0(),
        1 => -f0(),
        _ => {
            let k = k as u32;
            int((k as u64 - 1) * k as u64) / (factorial_q(n + k - 1) * factorial_q(n - k))
        }
    })
}

/// Diagonal `g(k,k) = (k-2)(4k-1) / (30 (2k-3)!)` for `k >= 2`.
pub fn g_diagonal_closed(k: u32) -> Rational {
    assert!(k >= 2);
    int((k as i64 - 2) * (4 * k as i64 - 1)) / (int(30) * factorial_q(2 * k - 3))
}

/// Closed forms of `g(n,k)` for `n >= 2`:
///
/// * `k = -1`: `n (3n-2) / (12 (n-2)! n!)`
/// * `k = 0`: `-1 / (2 (n-2)!^2)`
/// * `k = 1`: `[2(n-1)(n-2) + n(n-1)(3n-2)(n+1)/12] / ((n-1)! (n+1)!)`
/// * `2 <= k <= n`: `[k(2k-1)(2k-2)(k-2)(4k-1)/15 + 2k(k-n)(2k^2-k-n+1)] / ((n+k)! (n-k)!)`
pub fn coeff_closed_form_g(n: u32, k: i64) -> Result<Rational> {
    if n < 2 || !(-1..=n as i64).contains(&k) {
        return Err(out_of_range(CoeffKind::G, n, k));
    }
    let ni = n as i64;
    Ok(match k {
        -1 => int(ni * (3 * ni - 2)) / (int(12) * factorial_q(n - 2) * factorial_q(n)),
        0 => {
            let f = factorial_q(n - 2);
            -(int(2) * &f * &f).recip()
        }
        1 => {
            let num = int(2 * (ni - 1) * (ni - 2))
                + int(ni * (ni - 1) * (3 * ni - 2) * (ni + 1)) / int(12);
            num / (factorial_q(n - 1) * factorial_q(n + 1))
        }
        _ => {
            let diag = int(k * (2 * k - 1) * (2 * k - 2) * (k - 2) * (4 * k - 1)) / int(15);
            let drift = int(2 * k * (k - ni) * (2 * k * k - k - ni + 1));
            (diag + drift) / (factorial_q((ni + k) as u32) * factorial_q((ni - k) as u32))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::{inv_factorial, ratio};
    use crate::moment_engine::{build_f, build_g};

    #[test]
    fn extract_f3() {
        let table = extract_coeffs(&build_f(3), CoeffKind::F, 3).unwrap();
        let expected: Vec<Rational> = vec![ratio(1, 4), ratio(-1, 4), ratio(1, 12), ratio(1, 20)];
        assert_eq!(table.coeffs.values().cloned().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn extract_g2_has_zero_diagonal() {
        let table = extract_coeffs(&build_g(2), CoeffKind::G, 2).unwrap();
        assert_eq!(table.get(-1), ratio(1, 3));
        assert_eq!(table.get(0), ratio(-1, 2));
        assert_eq!(table.get(1), ratio(1, 3));
        assert_eq!(table.get(2), Rational::zero());
    }

    #[test]
    fn extract_f1_all_zero() {
        let table = extract_coeffs(&build_f(1), CoeffKind::F, 1).unwrap();
        assert_eq!(table.coeffs.len(), 2);
        assert!(table.coeffs.values().all(Zero::is_zero));
    }

    #[test]
    fn stray_monomial_is_a_pattern_violation() {
        let mut poly = build_f(3);
        poly.add_term(1, 1, ratio(1, 2));
        assert_eq!(
            extract_coeffs(&poly, CoeffKind::F, 3),
            Err(Error::PatternViolation {
                kind: "F",
                n: 3,
                s_deg: 1,
                t_deg: 1
            })
        );
    }

    #[test]
    fn table_reassembles() {
        for n in 1..=12 {
            let f = build_f(n);
            assert_eq!(extract_coeffs(&f, CoeffKind::F, n).unwrap().to_poly(), f);
            let g = build_g(n);
            assert_eq!(extract_coeffs(&g, CoeffKind::G, n).unwrap().to_poly(), g);
        }
    }

    #[test]
    fn closed_form_f_examples() {
        assert_eq!(coeff_closed_form_f(3, 3).unwrap(), ratio(1, 20));
        assert_eq!(coeff_closed_form_f(4, 0).unwrap(), ratio(1, 24));
        assert_eq!(coeff_closed_form_f(2, 1).unwrap(), ratio(-1, 2));
        assert!(coeff_closed_form_f(3, 4).is_err());
        assert!(coeff_closed_form_f(3, -1).is_err());
        // k = 0 is the same as 1 / (2 (n-1)! (n-2)!)
        for n in 2..=10 {
            assert_eq!(
                coeff_closed_form_f(n, 0).unwrap(),
                inv_factorial(n - 1) * inv_factorial(n - 2) / int(2)
            );
        }
    }

    #[test]
    fn closed_form_g_examples() {
        assert_eq!(coeff_closed_form_g(3, 3).unwrap(), ratio(11, 180));
        assert_eq!(coeff_closed_form_g(2, 2).unwrap(), Rational::zero());
        assert_eq!(coeff_closed_form_g(4, -1).unwrap(), ratio(5, 72));
        assert!(coeff_closed_form_g(1, 0).is_err());
        assert!(coeff_closed_form_g(4, -2).is_err());
    }

    #[test]
    fn diagonal_embeds_in_general_form() {
        for k in 2..=20u32 {
            assert_eq!(
                coeff_closed_form_f(k, k as i64).unwrap(),
                f_diagonal_closed(k)
            );
            assert_eq!(
                coeff_closed_form_g(k, k as i64).unwrap(),
                g_diagonal_closed(k)
            );
        }
        assert_eq!(f_diagonal_closed(1), Rational::zero());
    }

    #[test]
    fn closed_forms_match_recursion() {
        for n in 2..=25 {
            let f = extract_coeffs(&build_f(n), CoeffKind::F, n).unwrap();
            for (&k, c) in &f.coeffs {
                assert_eq!(c, &coeff_closed_form_f(n, k).unwrap(), "f({n},{k})");
            }
            assert_eq!(f.get(1), -f.get(0));
            let g = extract_coeffs(&build_g(n), CoeffKind::G, n).unwrap();
            for (&k, c) in &g.coeffs {
                assert_eq!(c, &coeff_closed_form_g(n, k).unwrap(), "g({n},{k})");
            }
            let n_fact = factorial_q(n);
            let expected_sum =
                int(n as u64 * (n as u64 - 1) * (7 * n as u64 - 4)) / (int(30) * &n_fact * &n_fact);
            assert_eq!(g.sum(), expected_sum, "sum g({n},.)");
        }
    }

    #[test]
    fn rescaled_views() {
        // f~(n,0) = n(n-1)/2 and f~(n,k) = f~(k,k) for 2 <= k < n
        for n in 2..=12u32 {
            let f = extract_coeffs(&build_f(n), CoeffKind::F, n).unwrap();
            assert_eq!(f.rescaled(0).unwrap(), int(n * (n - 1)) / int(2));
            for k in 2..n {
                let fk = extract_coeffs(&build_f(k), CoeffKind::F, k).unwrap();
                assert_eq!(f.rescaled(k as i64), fk.rescaled(k as i64));
            }
            // g~(n,-1) = n(n-1)(3n-2)(n+1)/12
            let g = extract_coeffs(&build_g(n), CoeffKind::G, n).unwrap();
            let ni = n as i64;
            assert_eq!(
                g.rescaled(-1).unwrap(),
                int(ni * (ni - 1) * (3 * ni - 2) * (ni + 1)) / int(12)
            );
        }
        assert_eq!(
            extract_coeffs(&build_f(3), CoeffKind::F, 3)
                .unwrap()
                .rescaled(9),
            None
        );
    }
}
