//! Sparse bivariate polynomials in `(s, t)` and the integral operator that
//! advances the moment polynomials by one dimension.
//!
//! The operator consumes a polynomial in its integration variables `(x, y)`
//! and produces one in `(s, t)`. Both are stored in the same [`BivarPoly`]
//! type and identified positionally: the first exponent is the `x`/`s` slot,
//! the second the `y`/`t` slot. For `0 <= t <= s`,
//!
//! ```text
//! (I f)(s, t) = 2 ∫_0^t ∫_y^t f(x, y) dx dy + ∫_0^t ∫_t^s f(x, y) dx dy
//! ```
//!
//! which on monomials is
//!
//! ```text
//! I(x^i y^j) = s^(i+1) t^(j+1) / ((i+1)(j+1))
//!            + (i-j) t^(i+j+2) / ((i+1)(j+1)(i+j+2))
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::exact_math::{int, Rational};
use crate::univariate::UniPoly;

/// Exponent pair `(deg_s, deg_t)`.
pub type Exponents = (u32, u32);

/// Sparse polynomial with no stored zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct BivarPoly {
    terms: BTreeMap<Exponents, Rational>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0, 0)
    }

    pub fn monomial(coeff: Rational, deg_s: u32, deg_t: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(deg_s, deg_t, coeff);
        p
    }

    /// The first variable, `s` (or `x` as operator input).
    pub fn s() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    /// The second variable, `t` (or `y` as operator input).
    pub fn t() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Self {
        let mut p = Self::zero();
        for ((ds, dt), c) in terms {
            p.add_term(ds, dt, c);
        }
        p
    }

    /// Accumulates `coeff · s^deg_s t^deg_t`, dropping the entry if it cancels.
    pub fn add_term(&mut self, deg_s: u32, deg_t: u32, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let key = (deg_s, deg_t);
        let slot = self.terms.entry(key).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, deg_s: u32, deg_t: u32) -> Rational {
        self.terms
            .get(&(deg_s, deg_t))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn eval(&self, s: &Rational, t: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(ds, dt), c)| c * Pow::pow(s, ds) * Pow::pow(t, dt))
            .fold(Rational::zero(), |acc, v| acc + v)
    }

    /// Swaps the two variables.
    pub fn transpose(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((b, a), c.clone()))
                .collect(),
        }
    }

    /// Terms in descending `s`-degree, ties broken by descending `t`-degree.
    pub fn terms_descending_s(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter().rev()
    }
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(ds, dt), c) in &rhs.terms {
            out.add_term(ds, dt, c.clone());
        }
        out
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        self + &(-rhs)
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(a_s, a_t), a) in &self.terms {
            for (&(b_s, b_t), b) in &rhs.terms {
                out.add_term(a_s + b_s, a_t + b_t, a * b);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident::$m:ident),*) => {$(
        impl $tr for BivarPoly {
            type Output = BivarPoly;
            fn $m(self, rhs: BivarPoly) -> BivarPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

pub fn poly_add(a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
    a + b
}

pub fn poly_mul(a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
    a * b
}

pub fn poly_scale(a: &BivarPoly, c: &Rational) -> BivarPoly {
    a.scale(c)
}

pub fn poly_eval(f: &BivarPoly, s: &Rational, t: &Rational) -> Rational {
    f.eval(s, t)
}

/// Applies the integral operator termwise via the monomial formula.
pub fn apply_i(f: &BivarPoly) -> BivarPoly {
    let mut out = BivarPoly::zero();
    for (&(i, j), c) in f.terms() {
        let (ip, jp) = (int(i + 1), int(j + 1));
        out.add_term(i + 1, j + 1, c / (&ip * &jp));
        if i != j {
            let diff = int(i as i64 - j as i64);
            out.add_term(0, i + j + 2, c * diff / (ip * jp * int(i + j + 2)));
        }
    }
    out
}

/// Evaluates `(I f)(s, t)` straight from the two-region double integral,
/// integrating first in `x` then in `y`, without the monomial formula.
pub fn apply_i_oracle(f: &BivarPoly, s: &Rational, t: &Rational) -> Result<Rational> {
    if t < &Rational::zero() || t > s {
        return Err(Error::RegionViolation {
            s: s.to_string(),
            t: t.to_string(),
        });
    }
    // Inner antiderivative in x, then each bound substituted to give a
    // polynomial in y.
    let mut at_t = UniPoly::zero();
    let mut at_s = UniPoly::zero();
    let mut at_diag = UniPoly::zero();
    for (&(i, j), c) in f.terms() {
        let anti = c / int(i + 1);
        let j = j as usize;
        at_t = &at_t + &UniPoly::monomial(&anti * Pow::pow(t, i + 1), j);
        at_s = &at_s + &UniPoly::monomial(&anti * Pow::pow(s, i + 1), j);
        at_diag = &at_diag + &UniPoly::monomial(anti, i as usize + 1 + j);
    }
    let zero = Rational::zero();
    let lower_region = (&at_t - &at_diag).integrate(&zero, t);
    let upper_region = (&at_s - &at_t).integrate(&zero, t);
    Ok(int(2) * lower_region + upper_region)
}

impl fmt::Display for BivarPoly {
    /// Renders e.g. `1/2 s^2 t - 1/2 s t^2 + 1/3 t^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(ds, dt), c) in self.terms_descending_s() {
            let negative = c < &Rational::zero();
            let mag = if negative { -c } else { c.clone() };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let mut parts = Vec::new();
            if !mag.is_one() || (ds == 0 && dt == 0) {
                parts.push(mag.to_string());
            }
            for (name, deg) in [("s", ds), ("t", dt)] {
                match deg {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    _ => parts.push(format!("{name}^{deg}")),
                }
            }
            write!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::ratio;
    use proptest::prelude::*;

    fn x() -> BivarPoly {
        BivarPoly::s()
    }
    fn y() -> BivarPoly {
        BivarPoly::t()
    }

    #[test]
    fn arithmetic_examples() {
        let st = &x() * &y();
        assert!(poly_add(&st, &(-&st)).is_zero());
        let prod = poly_mul(&(&x() - &y()), &(&x() + &y()));
        assert_eq!(prod, &(&x() * &x()) - &(&y() * &y()));
        let scaled = poly_scale(&BivarPoly::monomial(int(1), 2, 1), &ratio(1, 2));
        assert_eq!(scaled, BivarPoly::monomial(ratio(1, 2), 2, 1));
        assert!(poly_scale(&st, &Rational::zero()).is_zero());
    }

    #[test]
    fn operator_examples() {
        assert_eq!(apply_i(&BivarPoly::one()), &x() * &y());
        let expected_x = BivarPoly::from_terms([((2, 1), ratio(1, 2)), ((0, 3), ratio(1, 6))]);
        assert_eq!(apply_i(&x()), expected_x);
        let f2 = BivarPoly::from_terms([
            ((2, 1), ratio(1, 2)),
            ((1, 2), ratio(-1, 2)),
            ((0, 3), ratio(1, 3)),
        ]);
        assert_eq!(apply_i(&(&x() - &y())), f2);
    }

    #[test]
    fn eval_examples() {
        let st = &x() * &y();
        assert_eq!(poly_eval(&st, &int(1), &int(1)), int(1));
        let f2 = apply_i(&(&x() - &y()));
        assert_eq!(poly_eval(&f2, &int(1), &int(1)), ratio(1, 3));
        let g2 = BivarPoly::from_terms([
            ((3, 1), ratio(1, 3)),
            ((2, 2), ratio(-1, 2)),
            ((1, 3), ratio(1, 3)),
        ]);
        assert_eq!(poly_eval(&g2, &int(1), &int(1)), ratio(1, 6));
    }

    #[test]
    fn oracle_examples() {
        let one = BivarPoly::one();
        assert_eq!(apply_i_oracle(&one, &int(2), &int(1)).unwrap(), int(2));
        assert_eq!(apply_i_oracle(&x(), &int(1), &int(1)).unwrap(), ratio(2, 3));
        assert_eq!(
            apply_i_oracle(&(&x() - &y()), &int(3), &int(1)).unwrap(),
            ratio(10, 3)
        );
        assert!(matches!(
            apply_i_oracle(&one, &int(1), &int(2)),
            Err(Error::RegionViolation { .. })
        ));
    }

    #[test]
    fn display_orders_by_s_degree() {
        let f2 = apply_i(&(&x() - &y()));
        assert_eq!(f2.to_string(), "1/2 s^2 t - 1/2 s t^2 + 1/3 t^3");
        assert_eq!(BivarPoly::zero().to_string(), "0");
        assert_eq!((-&BivarPoly::one()).to_string(), "-1");
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-12i64..=12, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
    }

    fn small_poly(max_deg: u32) -> impl Strategy<Value = BivarPoly> {
        proptest::collection::vec(((0..=max_deg), (0..=max_deg), small_rational()), 0..8).prop_map(
            move |terms| {
                BivarPoly::from_terms(
                    terms
                        .into_iter()
                        .filter(|(i, j, _)| i + j <= max_deg)
                        .map(|(i, j, c)| ((i, j), c)),
                )
            },
        )
    }

    fn region_point() -> impl Strategy<Value = (Rational, Rational)> {
        (0i64..=12, 0i64..=12, 1i64..=4).prop_map(|(a, b, d)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            // t = lo/d, s = hi/d, both in [0, 3]
            (ratio(hi, d).min(int(3)), ratio(lo, d).min(int(3)))
        })
    }

    proptest! {
        #[test]
        fn operator_is_linear(f in small_poly(5), g in small_poly(5), a in small_rational(), b in small_rational()) {
            let lhs = apply_i(&(&f.scale(&a) + &g.scale(&b)));
            let rhs = &apply_i(&f).scale(&a) + &apply_i(&g).scale(&b);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn operator_matches_double_integral(f in small_poly(6), (s, t) in region_point()) {
            let via_formula = poly_eval(&apply_i(&f), &s, &t);
            let via_integral = apply_i_oracle(&f, &s, &t).unwrap();
            prop_assert_eq!(via_formula, via_integral);
        }

        #[test]
        fn operator_raises_degree_by_two(f in small_poly(6)) {
            let image = apply_i(&f);
            prop_assert_eq!(image.total_degree(), f.total_degree().map(|d| d + 2));
        }

        #[test]
        fn ring_laws(a in small_poly(3), b in small_poly(3), c in small_poly(3)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }
}
