//! The combinatorial route to `E(X_n)`: the double sequence
//!
//! ```text
//! M(p,q) = ((p-1) M(p-1,q) + (q-1) M(p,q-1) + |p-q|) / (p+q-1)
//! ```
//!
//! with `M = 0` whenever `p` or `q` is not positive, whose diagonal
//! `M(n,n)` is the first moment. Rescaling by `(p+q-1)! / ((p-1)! (q-1)!)`
//! turns it into the integer sequence
//!
//! ```text
//! L(p,q) = L(p-1,q) + L(p,q-1) + |p-q| C(p+q-2, p-1)
//! ```
//!
//! which has an explicit double-sum solution and, on the diagonal, the
//! closed form `L(p+1,p+1) = 2^(2p-1) p`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact_math::{binomial, factorial, int, inv_factorial, pow2, Rational};

/// `M(p,q)` and `L(p,q)` for `0 <= p <= max_p`, `0 <= q <= max_q`. Row and
/// column 0 are the zero boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceGrid {
    pub max_p: u32,
    pub max_q: u32,
    m: Vec<Vec<Rational>>,
    l: Vec<Vec<BigInt>>,
}

impl RecurrenceGrid {
    pub fn m(&self, p: u32, q: u32) -> &Rational {
        &self.m[p as usize][q as usize]
    }

    pub fn l(&self, p: u32, q: u32) -> &BigInt {
        &self.l[p as usize][q as usize]
    }

    pub fn m_rows(&self) -> &[Vec<Rational>] {
        &self.m
    }

    pub fn l_rows(&self) -> &[Vec<BigInt>] {
        &self.l
    }
}

/// `(p+q-1)! / ((p-1)! (q-1)!) · m`, the rescaling that takes `M(p,q)` to
/// `L(p,q)`. Zero on the boundary.
pub fn l_transform(m: &Rational, p: u32, q: u32) -> Rational {
    if p == 0 || q == 0 {
        return Rational::zero();
    }
    m * int(factorial(p + q - 1)) * inv_factorial(p - 1) * inv_factorial(q - 1)
}

/// Fills `M` row-major by dynamic programming and derives `L` from it.
pub fn build_grid(max_p: u32, max_q: u32) -> RecurrenceGrid {
    assert!(max_p >= 1 && max_q >= 1, "grid needs max_p, max_q >= 1");
    let (rows, cols) = (max_p as usize + 1, max_q as usize + 1);
    let mut m = vec![vec![Rational::zero(); cols]; rows];
    for p in 1..rows {
        for q in 1..cols {
            let drift = int(p.abs_diff(q));
            let num = int(p - 1) * &m[p - 1][q] + int(q - 1) * &m[p][q - 1] + drift;
            m[p][q] = num / int(p + q - 1);
        }
    }
    let l = m
        .iter()
        .enumerate()
        .map(|(p, row)| {
            row.iter()
                .enumerate()
                .map(|(q, value)| {
                    let scaled = l_transform(value, p as u32, q as u32);
                    assert!(
                        scaled.is_integer(),
                        "L({p},{q}) = {scaled} is not an integer"
                    );
                    scaled.to_integer()
                })
                .collect()
        })
        .collect();
    RecurrenceGrid { max_p, max_q, m, l }
}

/// `L` straight from its integer recursion, without passing through `M`.
pub fn build_l_integer(max_p: u32, max_q: u32) -> Vec<Vec<BigInt>> {
    let (rows, cols) = (max_p as usize + 1, max_q as usize + 1);
    let mut l = vec![vec![BigInt::zero(); cols]; rows];
    for p in 1..rows {
        for q in 1..cols {
            let drift = BigInt::from(p.abs_diff(q)) * binomial((p + q - 2) as u64, p as i64 - 1);
            l[p][q] = &l[p - 1][q] + &l[p][q - 1] + drift;
        }
    }
    l
}

/// `L(p+1, q+1) = Σ_{i<=p} Σ_{j<=q} |i-j| C(i+j, i) C(p+q-i-j, p-i)`.
pub fn l_double_sum(p: u32, q: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..=p {
        for j in 0..=q {
            if i == j {
                continue;
            }
            let weight = BigInt::from(i.abs_diff(j));
            acc += weight
                * binomial((i + j) as u64, i as i64)
                * binomial((p + q - i - j) as u64, (p - i) as i64);
        }
    }
    acc
}

/// `L(p+1, p+1) = 2^(2p-1) p`.
pub fn l_diagonal_closed(p: u32) -> BigInt {
    if p == 0 {
        return BigInt::zero();
    }
    (BigInt::one() << (2 * p - 1)) * p
}

/// `M(p+1, p+1) = 2^(2p-1) p p!^2 / (2p+1)!`.
pub fn m_diagonal_closed(p: u32) -> Rational {
    let fact = int(factorial(p));
    pow2(2 * p as i64 - 1) * int(p) * &fact * &fact * inv_factorial(2 * p + 1)
}
