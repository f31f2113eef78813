//! Cross-checks between the independent routes, runnable as one report.
//!
//! Everything the suites look at is first collected into [`Evidence`]; the
//! suites then only compare. This keeps the checks honest about what they
//! test and lets a deliberately corrupted [`Evidence`] demonstrate that a
//! suite actually fails.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bivariate_poly::{apply_i, apply_i_oracle, BivarPoly};
use crate::bourn_recurrence::{
    build_grid, build_l_integer, l_diagonal_closed, l_double_sum, RecurrenceGrid,
};
use crate::exact_math::{
    factorial_q, int, inv_factorial, pow2, ratio, Rational, SumKind, SumMethod, SumTable,
};
use crate::moment_engine::{
    coeff_closed_form_f, coeff_closed_form_g, extract_coeffs, first_moment, second_moment,
    CoeffKind, CoeffTable, MomentPolys,
};
use crate::reference::{published_poly, PUBLISHED_F, PUBLISHED_G, PUBLISHED_L_MATRIX};
use crate::simplex_mc::{transport_oracle, w1, CdfVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fast,
    Full,
}

impl Level {
    /// Largest `n` for the polynomial routes.
    pub fn n_max(self) -> u32 {
        match self {
            Level::Fast => 12,
            Level::Full => 40,
        }
    }

    /// Largest recurrence grid index.
    pub fn grid(self) -> u32 {
        match self {
            Level::Fast => 8,
            Level::Full => 15,
        }
    }

    fn random_cases(self) -> usize {
        match self {
            Level::Fast => 100,
            Level::Full => 500,
        }
    }
}

/// Deliberate corruptions used to check that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Negates every extracted `f(n,1)`.
    FlipF1Sign,
}

/// Everything the suites compare, computed up front.
#[derive(Debug, Clone)]
pub struct Evidence {
    pub level: Level,
    pub polys: MomentPolys,
    pub f_tables: Vec<CoeffTable>,
    pub g_tables: Vec<CoeffTable>,
    pub grid: RecurrenceGrid,
}

impl Evidence {
    pub fn collect(level: Level) -> Self {
        let n_max = level.n_max();
        let polys = MomentPolys::up_to(n_max);
        let table = |kind, n| {
            let poly = match kind {
                CoeffKind::F => polys.first(n),
                CoeffKind::G => polys.second(n),
            };
            extract_coeffs(poly, kind, n)
        };
        // Pattern violations surface in the reassembly suite as missing tables.
        let f_tables = (1..=n_max)
            .filter_map(|n| table(CoeffKind::F, n).ok())
            .collect();
        let g_tables = (2..=n_max)
            .filter_map(|n| table(CoeffKind::G, n).ok())
            .collect();
        let grid = build_grid(level.grid() + 1, level.grid() + 1);
        Self {
            level,
            polys,
            f_tables,
            g_tables,
            grid,
        }
    }

    pub fn inject(&mut self, fault: Fault) {
        match fault {
            Fault::FlipF1Sign => {
                for t in &mut self.f_tables {
                    if let Some(c) = t.coeffs.get_mut(&1) {
                        *c = -c.clone();
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub level: Level,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn first_failure(&self) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| !s.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            let tag = if s.passed { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "[{tag}] {} ({} checks){}",
                s.name,
                s.checks,
                if s.passed {
                    String::new()
                } else {
                    format!(": {}", s.detail)
                }
            )?;
        }
        Ok(())
    }
}

type SuiteOutcome = Result<usize, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn binomial_sums(ev: &Evidence) -> SuiteOutcome {
    let n_max = ev.level.n_max().min(30);
    let mut checks = 0;
    for kind in [SumKind::A, SumKind::B] {
        for p in 0..=6 {
            let direct =
                SumTable::build(kind, p, n_max, SumMethod::Direct).map_err(|e| e.to_string())?;
            let rec =
                SumTable::build(kind, p, n_max, SumMethod::Recursive).map_err(|e| e.to_string())?;
            ensure(direct == rec, || {
                format!("{kind:?}(n, {p}) recursion disagrees")
            })?;
            checks += direct.values.len();
            if p <= 3 {
                let closed = SumTable::build(kind, p, n_max, SumMethod::ClosedForm)
                    .map_err(|e| e.to_string())?;
                ensure(direct == closed, || {
                    format!("{kind:?}(n, {p}) closed form disagrees")
                })?;
                checks += direct.values.len();
            }
        }
    }
    Ok(checks)
}

fn binomial_sum_identities(ev: &Evidence) -> SuiteOutcome {
    let n_max = ev.level.n_max().min(30);
    let level =
        |p| SumTable::build(SumKind::A, p, n_max, SumMethod::Direct).map_err(|e| e.to_string());
    let (a1, a2, a3) = (level(1)?, level(2)?, level(3)?);
    for n in 2..=n_max {
        let (x1, x2, x3) = (&a1.values[&n], &a2.values[&n], &a3.values[&n]);
        let lhs = int(2) * x3 - int(3) * x2 + x1;
        let rhs = inv_factorial(n - 1) * inv_factorial(n - 2);
        ensure(lhs == rhs, || format!("2A3 - 3A2 + A1 at n={n}"))?;
        let lhs = x2 - x1;
        let rhs = pow2(2 * n as i64 - 3) * int(n - 1) * inv_factorial(2 * n - 1);
        ensure(lhs == rhs, || format!("A2 - A1 at n={n}"))?;
    }
    Ok(2 * (n_max as usize - 1))
}

fn operator_oracle(ev: &Evidence) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let cases = ev.level.random_cases();
    for case in 0..cases {
        let mut f = BivarPoly::zero();
        for _ in 0..rng.random_range(1..6) {
            let i = rng.random_range(0..=6u32);
            let j = rng.random_range(0..=6 - i);
            f.add_term(
                i,
                j,
                ratio(rng.random_range(-9..=9), rng.random_range(1..=5)),
            );
        }
        let a = ratio(rng.random_range(0..=12), 4);
        let b = ratio(rng.random_range(0..=12), 4);
        let (s, t) = if a >= b { (a, b) } else { (b, a) };
        let lhs = apply_i(&f).eval(&s, &t);
        let rhs = apply_i_oracle(&f, &s, &t).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("case {case}: I({f}) at ({s}, {t})"))?;
    }
    Ok(cases)
}

fn published_tables(ev: &Evidence, kind: CoeffKind) -> SuiteOutcome {
    let tables = match kind {
        CoeffKind::F => &PUBLISHED_F,
        CoeffKind::G => &PUBLISHED_G,
    };
    for (offset, terms) in tables.iter().enumerate() {
        let n = offset as u32 + 2;
        let built = match kind {
            CoeffKind::F => ev.polys.first(n),
            CoeffKind::G => ev.polys.second(n),
        };
        ensure(*built == published_poly(terms), || {
            format!("{}_{n} = {built}", kind.name())
        })?;
    }
    Ok(tables.len())
}

fn f2_antisymmetry(ev: &Evidence) -> SuiteOutcome {
    let mut checks = 0;
    for t in ev.f_tables.iter().filter(|t| t.n >= 2) {
        ensure(t.get(1) == -t.get(0), || {
            format!("f({n},1) != -f({n},0)", n = t.n)
        })?;
        checks += 1;
    }
    Ok(checks)
}

fn coefficient_closed_forms(tables: &[CoeffTable]) -> SuiteOutcome {
    let mut checks = 0;
    for t in tables.iter().filter(|t| t.n >= 2) {
        for (&k, c) in &t.coeffs {
            let expected = match t.kind {
                CoeffKind::F => coeff_closed_form_f(t.n, k),
                CoeffKind::G => coeff_closed_form_g(t.n, k),
            }
            .map_err(|e| e.to_string())?;
            ensure(*c == expected, || {
                format!(
                    "{}({}, {k}) = {c}, closed form {expected}",
                    t.kind.name(),
                    t.n
                )
            })?;
            checks += 1;
        }
    }
    Ok(checks)
}

fn g_sum_identity(ev: &Evidence) -> SuiteOutcome {
    for t in &ev.g_tables {
        let n = t.n as u64;
        let nf = factorial_q(t.n);
        let expected = int(n * (n - 1) * (7 * n - 4)) / (int(30) * &nf * &nf);
        ensure(t.sum() == expected, || format!("sum_k g({n}, k)"))?;
    }
    Ok(ev.g_tables.len())
}

fn table_reassembly(ev: &Evidence) -> SuiteOutcome {
    let n_max = ev.level.n_max();
    ensure(ev.f_tables.len() == n_max as usize, || {
        "missing F coefficient tables".into()
    })?;
    ensure(ev.g_tables.len() == n_max as usize - 1, || {
        "missing G coefficient tables".into()
    })?;
    for t in &ev.f_tables {
        ensure(t.to_poly() == *ev.polys.first(t.n), || {
            format!("F_{} reassembly", t.n)
        })?;
    }
    for t in &ev.g_tables {
        ensure(t.to_poly() == *ev.polys.second(t.n), || {
            format!("G_{} reassembly", t.n)
        })?;
    }
    Ok(ev.f_tables.len() + ev.g_tables.len())
}

fn first_moment_routes(ev: &Evidence) -> SuiteOutcome {
    let one = Rational::one();
    for n in 1..=ev.level.n_max() {
        let fact = factorial_q(n - 1);
        let via_poly = ev.polys.first(n).eval(&one, &one) * &fact * &fact;
        let closed = first_moment(n);
        ensure(via_poly == closed, || {
            format!("F_{n}(1,1) (n-1)!^2 != closed form")
        })?;
        if n <= ev.grid.max_p {
            ensure(*ev.grid.m(n, n) == closed, || {
                format!("M({n},{n}) != closed form")
            })?;
        }
    }
    Ok(ev.level.n_max() as usize)
}

fn second_moment_routes(ev: &Evidence) -> SuiteOutcome {
    let one = Rational::one();
    for n in 1..=ev.level.n_max() {
        let fact = factorial_q(n - 1);
        let via_poly = ev.polys.second(n).eval(&one, &one) * &fact * &fact;
        ensure(via_poly == second_moment(n), || {
            format!("G_{n}(1,1) (n-1)!^2 != closed form")
        })?;
    }
    Ok(ev.level.n_max() as usize)
}

fn recurrence_matrix(ev: &Evidence) -> SuiteOutcome {
    for (p, row) in PUBLISHED_L_MATRIX.iter().enumerate() {
        for (q, &v) in row.iter().enumerate() {
            ensure(*ev.grid.l(p as u32, q as u32) == BigInt::from(v), || {
                format!("L({p},{q}) = {}", ev.grid.l(p as u32, q as u32))
            })?;
        }
    }
    Ok(49)
}

fn recurrence_diagonal(ev: &Evidence) -> SuiteOutcome {
    for p in 0..=ev.level.grid() {
        let dp = ev.grid.l(p + 1, p + 1);
        ensure(*dp == l_double_sum(p, p), || {
            format!("L({0},{0}) vs double sum", p + 1)
        })?;
        ensure(*dp == l_diagonal_closed(p), || {
            format!("L({0},{0}) vs 2^(2p-1) p", p + 1)
        })?;
    }
    Ok(ev.level.grid() as usize + 1)
}

fn recurrence_grid(ev: &Evidence) -> SuiteOutcome {
    let g = ev.level.grid();
    let integer = build_l_integer(g, g);
    for p in 1..=g {
        for q in 1..=g {
            let l = ev.grid.l(p, q);
            ensure(*l == l_double_sum(p - 1, q - 1), || {
                format!("L({p},{q}) vs double sum")
            })?;
            ensure(*l == integer[p as usize][q as usize], || {
                format!("L({p},{q}) vs integer recursion")
            })?;
            ensure(ev.grid.m(p, q) == ev.grid.m(q, p), || {
                format!("M({p},{q}) symmetry")
            })?;
            ensure(*l >= BigInt::zero(), || format!("L({p},{q}) negative"))?;
        }
    }
    Ok((g * g) as usize)
}

fn random_pmf(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let weights: Vec<i64> = (0..n).map(|_| rng.random_range(0..6)).collect();
    let total: i64 = weights.iter().sum();
    if total == 0 {
        return (0..n)
            .map(|i| if i == 0 { int(1) } else { int(0) })
            .collect();
    }
    weights.into_iter().map(|w| ratio(w, total)).collect()
}

fn metric_axioms(ev: &Evidence) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11);
    let cases = ev.level.random_cases();
    for case in 0..cases {
        let n = rng.random_range(1..=6);
        let pmfs: Vec<_> = (0..3).map(|_| random_pmf(&mut rng, n)).collect();
        let c: Vec<CdfVector<Rational>> = pmfs
            .iter()
            .map(|p| CdfVector::from_pmf(p).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        let d = |a: usize, b: usize| w1(&c[a], &c[b]).map_err(|e| e.to_string());
        let ab = d(0, 1)?;
        ensure(ab >= Rational::zero(), || format!("case {case}: negative"))?;
        ensure(ab.is_zero() == (pmfs[0] == pmfs[1]), || {
            format!("case {case}: identity")
        })?;
        ensure(ab == d(1, 0)?, || format!("case {case}: symmetry"))?;
        ensure(d(0, 2)? <= &ab + d(1, 2)?, || {
            format!("case {case}: triangle")
        })?;
        ensure(ab <= int(n as i64 - 1), || {
            format!("case {case}: exceeds diameter")
        })?;
    }
    Ok(cases)
}

fn oracle_equivalence(ev: &Evidence) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x07);
    let cases = ev.level.random_cases();
    for case in 0..cases {
        let n = rng.random_range(1..=8);
        let a = random_pmf(&mut rng, n);
        let b = random_pmf(&mut rng, n);
        let via_cdf = CdfVector::from_pmf(&a)
            .and_then(|x| w1(&x, &CdfVector::from_pmf(&b)?))
            .map_err(|e| e.to_string())?;
        let via_plan = transport_oracle(&a, &b).map_err(|e| e.to_string())?;
        ensure(via_cdf == via_plan, || {
            format!("case {case}: {via_cdf} vs {via_plan}")
        })?;
    }
    Ok(cases)
}

/// Suite names, in run order.
pub const SUITE_NAMES: [&str; 17] = [
    "binomial sums",
    "binomial sum identities",
    "operator oracle",
    "published F polynomials",
    "published G polynomials",
    "f2 antisymmetry",
    "f closed forms",
    "g closed forms",
    "G sum identity",
    "coefficient table reassembly",
    "first moment three-way",
    "second moment two-way",
    "recurrence matrix",
    "recurrence diagonal",
    "recurrence full grid",
    "metric axioms",
    "oracle equivalence",
];

pub fn run_suites(ev: &Evidence) -> VerifyReport {
    let outcomes: [SuiteOutcome; 17] = [
        binomial_sums(ev),
        binomial_sum_identities(ev),
        operator_oracle(ev),
        published_tables(ev, CoeffKind::F),
        published_tables(ev, CoeffKind::G),
        f2_antisymmetry(ev),
        coefficient_closed_forms(&ev.f_tables),
        coefficient_closed_forms(&ev.g_tables),
        g_sum_identity(ev),
        table_reassembly(ev),
        first_moment_routes(ev),
        second_moment_routes(ev),
        recurrence_matrix(ev),
        recurrence_diagonal(ev),
        recurrence_grid(ev),
        metric_axioms(ev),
        oracle_equivalence(ev),
    ];
    let suites = SUITE_NAMES
        .iter()
        .zip(outcomes)
        .map(|(name, outcome)| match outcome {
            Ok(checks) => SuiteResult {
                name: name.to_string(),
                passed: true,
                checks,
                detail: String::new(),
            },
            Err(detail) => SuiteResult {
                name: name.to_string(),
                passed: false,
                checks: 0,
                detail,
            },
        })
        .collect();
    VerifyReport {
        level: ev.level,
        suites,
    }
}

/// Collects evidence at `level`, optionally corrupts it, and runs every suite.
pub fn verify(level: Level, fault: Option<Fault>) -> VerifyReport {
    let mut ev = Evidence::collect(level);
    if let Some(fault) = fault {
        ev.inject(fault);
    }
    run_suites(&ev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_level_passes() {
        let report = verify(Level::Fast, None);
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.suites.len(), SUITE_NAMES.len());
    }

    #[test]
    fn flipped_sign_is_caught() {
        let report = verify(Level::Fast, Some(Fault::FlipF1Sign));
        assert!(!report.all_passed());
        assert_eq!(report.first_failure().unwrap().name, "f2 antisymmetry");
    }
}
