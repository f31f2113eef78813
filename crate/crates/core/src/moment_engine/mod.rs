//! Volume, first-moment and second-moment polynomials `V_n`, `F_n`, `G_n`,
//! built by repeated application of the integral operator, and the moments
//! of the uniform-simplex W1 distance derived from them.
//!
//! All three polynomials describe their integrals only on the region
//! `0 <= t <= s`; by symmetry that is all that is ever needed, but the
//! polynomial objects themselves carry no region. Helpers that evaluate off
//! the diagonal check the region explicitly.

mod coefficients;
mod density;
mod moments;

pub use coefficients::{
    coeff_closed_form_f, coeff_closed_form_g, extract_coeffs, f_diagonal_closed, g_diagonal_closed,
    CoeffKind, CoeffTable,
};
pub use density::{
    density, density_diagnostics, printed_density, DensityDiagnostics, PiecewiseDensity,
};
pub use moments::{
    asymptotic_first, asymptotic_variance, first_moment, first_moment_float, moment_report,
    second_moment, second_moment_float, variance_float, MomentReport,
};

use std::sync::OnceLock;

use num_traits::{One, Zero};
use parking_lot::RwLock;

use crate::bivariate_poly::{apply_i, BivarPoly};
use crate::error::{Error, Result};
use crate::exact_math::{factorial_q, int, Rational};

/// `V_n(s, t) = s^(n-1) t^(n-1) / (n-1)!^2`.
pub fn volume_poly(n: u32) -> BivarPoly {
    assert!(n >= 1, "volume_poly needs n >= 1");
    let fact = factorial_q(n - 1);
    BivarPoly::monomial((&fact * &fact).recip(), n - 1, n - 1)
}

/// `V_n`, `F_n`, `G_n` for `n = 1..=len`.
#[derive(Debug, Clone, Default)]
pub struct MomentPolys {
    volume: Vec<BivarPoly>,
    first: Vec<BivarPoly>,
    second: Vec<BivarPoly>,
}

impl MomentPolys {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn up_to(n: u32) -> Self {
        let mut polys = Self::new();
        polys.extend_to(n);
        polys
    }

    /// Highest `n` built so far (0 if empty).
    pub fn len(&self) -> u32 {
        self.first.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    pub fn extend_to(&mut self, n: u32) {
        // x - y in the operator's input slots
        let diff = &BivarPoly::s() - &BivarPoly::t();
        let diff_sq = &diff * &diff;
        while self.len() < n {
            let next = self.len() + 1;
            let (f, g) = if next == 1 {
                (BivarPoly::zero(), BivarPoly::zero())
            } else {
                let idx = next as usize - 2;
                let (v_prev, f_prev, g_prev) =
                    (&self.volume[idx], &self.first[idx], &self.second[idx]);
                let f = apply_i(&(f_prev + &(&diff * v_prev)));
                let cross = (&diff * f_prev).scale(&int(2));
                let g = apply_i(&(&(g_prev + &cross) + &(&diff_sq * v_prev)));
                (f, g)
            };
            self.volume.push(volume_poly(next));
            self.first.push(f);
            self.second.push(g);
        }
    }

    fn index(&self, n: u32) -> usize {
        assert!(
            n >= 1 && n <= self.len(),
            "n = {n} not built (have 1..={})",
            self.len()
        );
        n as usize - 1
    }

    pub fn volume(&self, n: u32) -> &BivarPoly {
        &self.volume[self.index(n)]
    }

    pub fn first(&self, n: u32) -> &BivarPoly {
        &self.first[self.index(n)]
    }

    pub fn second(&self, n: u32) -> &BivarPoly {
        &self.second[self.index(n)]
    }
}

fn cache() -> &'static RwLock<MomentPolys> {
    static CACHE: OnceLock<RwLock<MomentPolys>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(MomentPolys::new()))
}

fn with_cached<T>(n: u32, read: impl Fn(&MomentPolys) -> T) -> T {
    {
        let guard = cache().read();
        if guard.len() >= n {
            return read(&guard);
        }
    }
    let mut guard = cache().write();
    guard.extend_to(n);
    read(&guard)
}

/// `F_n = I(F_(n-1) + (x - y) V_(n-1))` with `F_1 = 0`. Cached process-wide.
pub fn build_f(n: u32) -> BivarPoly {
    assert!(n >= 1, "build_f needs n >= 1");
    with_cached(n, |p| p.first(n).clone())
}

/// `G_n = I(G_(n-1) + 2(x - y) F_(n-1) + (x - y)^2 V_(n-1))` with `G_1 = 0`.
/// Cached process-wide.
pub fn build_g(n: u32) -> BivarPoly {
    assert!(n >= 1, "build_g needs n >= 1");
    with_cached(n, |p| p.second(n).clone())
}

/// Evaluates one of the moment polynomials at `(s, t)`, checking the region
/// on which it is valid.
pub fn eval_on_region(poly: &BivarPoly, s: &Rational, t: &Rational) -> Result<Rational> {
    if t < &Rational::zero() || t > s {
        return Err(Error::RegionViolation {
            s: s.to_string(),
            t: t.to_string(),
        });
    }
    Ok(poly.eval(s, t))
}

/// `E(X_n) = F_n(1,1) / V_n(1,1)` from the recursion.
pub fn first_moment_via_recursion(n: u32) -> Rational {
    let one = Rational::one();
    let fact = factorial_q(n - 1);
    build_f(n).eval(&one, &one) * &fact * &fact
}

/// `E(X_n^2) = G_n(1,1) / V_n(1,1)` from the recursion.
pub fn second_moment_via_recursion(n: u32) -> Rational {
    let one = Rational::one();
    let fact = factorial_q(n - 1);
    build_g(n).eval(&one, &one) * &fact * &fact
}
