//! Exact rational scalars, factorials and binomials, and the factorial sums
//!
//! ```text
//! A(n, p) = Σ_{k=1}^{n} k^p / ((n+k-1)! (n-k)!)
//! B(n, p) = Σ_{k=1}^{n} k^p / ((n+k)!   (n-k)!)
//! ```
//!
//! which show up when the moment coefficients are summed over `k`.
//!
//! The sums can be evaluated three ways: term by term, through the coupled
//! recursion in `p` seeded from closed-form `p = 0` values, and (for `p <= 3`)
//! from explicit closed forms. All three are exposed so they can be checked
//! against each other.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number. Always held in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds `num / den`. Panics if `den == 0`; use [`try_ratio`] for fallible input.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn try_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational> {
    let den = den.into();
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(num.into(), den))
}

pub fn int(value: impl Into<BigInt>) -> Rational {
    Rational::from_integer(value.into())
}

/// `a / b`, with division by zero reported as an error.
pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

/// Lossy conversion to `f64`, correctly rounded for huge numerators and
/// denominators.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Renders a rational as `"num/den"`; integers still carry `/1`.
pub fn to_fraction_string(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_fraction(text: &str) -> Result<Rational> {
    let bad = || Error::OutOfRange {
        what: "fraction",
        detail: format!("cannot parse {text:?}"),
    };
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            try_ratio(num, den)
        }
        None => Ok(int(text.trim().parse::<BigInt>().map_err(|_| bad())?)),
    }
}

/// `2^exp` for any integer exponent.
pub fn pow2(exp: i64) -> Rational {
    let magnitude = BigInt::one() << exp.unsigned_abs();
    if exp >= 0 {
        int(magnitude)
    } else {
        Rational::new(BigInt::one(), magnitude)
    }
}

fn factorial_memo() -> &'static RwLock<Vec<BigUint>> {
    static MEMO: OnceLock<RwLock<Vec<BigUint>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(vec![BigUint::one()]))
}

/// `n!`, memoized process-wide.
pub fn factorial(n: u32) -> BigInt {
    let idx = n as usize;
    {
        let memo = factorial_memo().read();
        if let Some(value) = memo.get(idx) {
            return BigInt::from(value.clone());
        }
    }
    let mut memo = factorial_memo().write();
    while memo.len() <= idx {
        let next = memo.last().expect("memo seeded with 0!") * BigUint::from(memo.len());
        memo.push(next);
    }
    BigInt::from(memo[idx].clone())
}

/// `n!` as a rational, for use in denominators.
pub fn factorial_q(n: u32) -> Rational {
    int(factorial(n))
}

/// `1 / n!`.
pub fn inv_factorial(n: u32) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

/// `C(n, k)`, zero unless `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Which of the two factorial sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SumKind {
    A,
    B,
}

impl SumKind {
    /// The offset `c` in the denominator factor `(n + k - 1 + c)!`.
    fn offset(self) -> u32 {
        match self {
            SumKind::A => 0,
            SumKind::B => 1,
        }
    }
}

fn check_index(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "n",
            detail: "factorial sums are defined for n >= 1".into(),
        });
    }
    Ok(())
}

fn sum_direct(kind: SumKind, n: u32, p: u32) -> Rational {
    (1..=n)
        .map(|k| {
            let num = BigInt::from(k).pow(p);
            let den = factorial(n + k - 1 + kind.offset()) * factorial(n - k);
            Rational::new(num, den)
        })
        .fold(Rational::zero(), |acc, term| acc + term)
}

/// `A(n, p)` evaluated term by term.
pub fn sum_a_direct(n: u32, p: u32) -> Result<Rational> {
    check_index(n)?;
    Ok(sum_direct(SumKind::A, n, p))
}

/// `B(n, p)` evaluated term by term.
pub fn sum_b_direct(n: u32, p: u32) -> Result<Rational> {
    check_index(n)?;
    Ok(sum_direct(SumKind::B, n, p))
}

/// Base case `A(n, 0) = 4^(n-1) / (2n-1)!`.
fn a_base(n: u32) -> Rational {
    pow2(2 * n as i64 - 2) * inv_factorial(2 * n - 1)
}

/// Base case `B(n, 0) = 2^(2n-1) / (2n)! - 1 / (2 n!^2)`. Vanishes at `n = 0`,
/// which is the empty-sum value the recursion needs there.
fn b_base(n: u32) -> Rational {
    let fact = factorial_q(n);
    pow2(2 * n as i64 - 1) * inv_factorial(2 * n) - (int(2) * &fact * &fact).recip()
}

/// Runs the recursion
///
/// ```text
/// A(n, p) = n A(n, p-1) - B(n-1, p-1)
/// B(n, p) = A(n, p-1)   - n B(n, p-1)
/// ```
///
/// for all `0 <= n <= n_max` up to level `p`. Index 0 of each returned vector
/// is the (empty) `n = 0` entry.
fn recursive_levels(n_max: u32, p: u32) -> (Vec<Rational>, Vec<Rational>) {
    let mut a: Vec<Rational> = (0..=n_max)
        .map(|n| if n == 0 { Rational::zero() } else { a_base(n) })
        .collect();
    let mut b: Vec<Rational> = (0..=n_max).map(b_base).collect();
    for _ in 0..p {
        let next_a = (0..=n_max as usize)
            .map(|n| {
                if n == 0 {
                    Rational::zero()
                } else {
                    int(n) * &a[n] - &b[n - 1]
                }
            })
            .collect();
        let next_b = (0..=n_max as usize)
            .map(|n| &a[n] - int(n) * &b[n])
            .collect();
        a = next_a;
        b = next_b;
    }
    (a, b)
}

/// `A(n, p)` via the coupled recursion from the closed-form base cases.
pub fn sum_a_recursive(n: u32, p: u32) -> Result<Rational> {
    check_index(n)?;
    let (a, _) = recursive_levels(n, p);
    Ok(a[n as usize].clone())
}

/// `B(n, p)` via the coupled recursion from the closed-form base cases.
pub fn sum_b_recursive(n: u32, p: u32) -> Result<Rational> {
    check_index(n)?;
    let (_, b) = recursive_levels(n, p);
    Ok(b[n as usize].clone())
}

/// Explicit closed forms for `p <= 3`.
///
/// `A(n, 3)` uses `4^(n-2) (3n-1) / (2n-1)! + n / (2 (n-1)!^2)`, which is what
/// the recursion gives from `A(n, 2)` and `B(n-1, 2)`. The commonly quoted
/// variant with second term `1 / (2 n! (n-1)!)` is available as
/// [`printed_sum_closed_form`]; it only agrees at `n = 1`.
pub fn sum_closed_form(kind: SumKind, p: u32, n: u32) -> Result<Rational> {
    if (kind, p) == (SumKind::A, 3) {
        check_index(n)?;
        let f = factorial_q(n - 1);
        return Ok(
            pow2(2 * n as i64 - 4) * int(3 * n as i64 - 1) * inv_factorial(2 * n - 1)
                + int(n) / (int(2) * &f * &f),
        );
    }
    printed_sum_closed_form(kind, p, n)
}

/// The closed forms exactly as usually printed, including the `A(n, 3)`
/// variant that disagrees with the direct sum for `n >= 2`.
pub fn printed_sum_closed_form(kind: SumKind, p: u32, n: u32) -> Result<Rational> {
    check_index(n)?;
    let n_i = n as i64;
    let one_over_2_sq = |m: u32| {
        let f = factorial_q(m);
        (int(2) * &f * &f).recip()
    };
    let value = match (kind, p) {
        (SumKind::A, 0) => a_base(n),
        (SumKind::B, 0) => b_base(n),
        (SumKind::A, 1) => pow2(2 * n_i - 3) * inv_factorial(2 * n - 1) + one_over_2_sq(n - 1),
        (SumKind::A, 2) => {
            int(n) * pow2(2 * n_i - 3) * inv_factorial(2 * n - 1) + one_over_2_sq(n - 1)
        }
        (SumKind::A, 3) => {
            pow2(2 * n_i - 4) * int(3 * n_i - 1) * inv_factorial(2 * n - 1)
                + (int(2) * factorial_q(n) * factorial_q(n - 1)).recip()
        }
        (SumKind::B, 1) => (int(2) * factorial_q(n) * factorial_q(n - 1)).recip(),
        (SumKind::B, 2) => pow2(2 * n_i - 3) * inv_factorial(2 * n - 1),
        (SumKind::B, 3) => one_over_2_sq(n - 1),
        (_, p) => return Err(Error::NoClosedForm { p }),
    };
    Ok(value)
}

/// How a [`SumTable`] was filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMethod {
    Direct,
    Recursive,
    ClosedForm,
}

/// `A(n, p)` or `B(n, p)` for a fixed `p` over a range of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumTable {
    pub kind: SumKind,
    pub p: u32,
    pub values: BTreeMap<u32, Rational>,
}

impl SumTable {
    /// Fills `values[n]` for `1 <= n <= n_max`.
    pub fn build(kind: SumKind, p: u32, n_max: u32, method: SumMethod) -> Result<Self> {
        let values = match method {
            SumMethod::Direct => (1..=n_max).map(|n| (n, sum_direct(kind, n, p))).collect(),
            SumMethod::Recursive => {
                let (a, b) = recursive_levels(n_max, p);
                let src = match kind {
                    SumKind::A => a,
                    SumKind::B => b,
                };
                src.into_iter()
                    .enumerate()
                    .skip(1)
                    .map(|(n, v)| (n as u32, v))
                    .collect()
            }
            SumMethod::ClosedForm => (1..=n_max)
                .map(|n| sum_closed_form(kind, p, n).map(|v| (n, v)))
                .collect::<Result<_>>()?,
        };
        Ok(Self { kind, p, values })
    }

    pub fn get(&self, n: u32) -> Option<&Rational> {
        self.values.get(&n)
    }
}
