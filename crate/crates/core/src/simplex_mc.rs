//! W1 between distributions on `{1, …, n}`, a transport-plan oracle for it,
//! and Monte Carlo estimates of its moments under the uniform measure on
//! pairs of simplex points.
//!
//! Random points are drawn directly in CDF space: the ascending order
//! statistics of `n - 1` independent uniforms, followed by a pinned `1`, are
//! uniformly distributed on `{0 <= x_1 <= … <= x_n = 1}`. Partial summation
//! maps the probability simplex onto that set without changing volume, so
//! this is the same law as drawing a flat-Dirichlet pmf and summing it.
//!
//! ## Reproducibility
//!
//! Samples are split into fixed chunks of [`CHUNK_SIZE`]. Chunk `c` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` with stream `c`, and chunk results are
//! merged in chunk order, so an estimate depends only on `(n, samples, seed)`
//! and not on how many threads ran it.

use num_traits::{FromPrimitive, One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples per independently seeded chunk.
pub const CHUNK_SIZE: u64 = 16_384;

/// Scalars the distance routines run on: `f64` or exact rationals.
pub trait Scalar: Clone + PartialOrd + Zero + One + Signed + FromPrimitive {}
impl<T: Clone + PartialOrd + Zero + One + Signed + FromPrimitive> Scalar for T {}

/// A point of the CDF simplex: nondecreasing, in `[0, 1]`, last entry `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfVector<T> {
    values: Vec<T>,
}

impl<T: Scalar> CdfVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        let Some(last) = values.last() else {
            return Err(Error::InvalidCdf("empty".into()));
        };
        if !last.is_one() {
            return Err(Error::InvalidCdf("last entry must be 1".into()));
        }
        if values[0] < T::zero() {
            return Err(Error::InvalidCdf("entries must be >= 0".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidCdf("entries must be nondecreasing".into()));
        }
        Ok(Self { values })
    }

    /// Partial sums of a pmf. The pmf must be nonnegative and sum to exactly 1.
    pub fn from_pmf(pmf: &[T]) -> Result<Self> {
        validate_pmf(pmf)?;
        let mut acc = T::zero();
        let values = pmf
            .iter()
            .map(|p| {
                acc = acc.clone() + p.clone();
                acc.clone()
            })
            .collect();
        Self::new(values).map_err(|e| Error::InvalidPmf(e.to_string()))
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// First differences, i.e. the pmf this CDF came from.
    pub fn pmf(&self) -> Vec<T> {
        let mut prev = T::zero();
        self.values
            .iter()
            .map(|v| {
                let p = v.clone() - prev.clone();
                prev = v.clone();
                p
            })
            .collect()
    }

    /// Point mass at index `at` (0-based) of `{1, …, n}`.
    pub fn point_mass(n: usize, at: usize) -> Self {
        assert!(at < n);
        let values = (0..n)
            .map(|i| if i >= at { T::one() } else { T::zero() })
            .collect();
        Self { values }
    }
}

fn validate_pmf<T: Scalar>(pmf: &[T]) -> Result<()> {
    if pmf.is_empty() {
        return Err(Error::InvalidPmf("empty".into()));
    }
    if pmf.iter().any(|p| p < &T::zero()) {
        return Err(Error::InvalidPmf("negative mass".into()));
    }
    let total = pmf.iter().fold(T::zero(), |a, p| a + p.clone());
    if !total.is_one() {
        return Err(Error::InvalidPmf("mass does not sum to 1".into()));
    }
    Ok(())
}

/// `Σ_i |F_μ(i) - F_ν(i)|`.
pub fn w1<T: Scalar>(mu: &CdfVector<T>, nu: &CdfVector<T>) -> Result<T> {
    if mu.n() != nu.n() {
        return Err(Error::DimensionMismatch {
            left: mu.n(),
            right: nu.n(),
        });
    }
    Ok(mu
        .values
        .iter()
        .zip(&nu.values)
        .fold(T::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs()))
}

/// `w1 / (n - 1)`, which has diameter 1.
pub fn w1_normalized<T: Scalar>(mu: &CdfVector<T>, nu: &CdfVector<T>) -> Result<T> {
    let d = w1(mu, nu)?;
    if mu.n() < 2 {
        return Err(Error::OutOfRange {
            what: "n",
            detail: "normalized distance needs n >= 2".into(),
        });
    }
    Ok(d / T::from_usize(mu.n() - 1).expect("index fits the scalar"))
}

/// Optimal transport cost on the line by the monotone coupling: the lowest
/// remaining mass of `mu` is always shipped to the lowest remaining slot of
/// `nu`. Independent of the CDF formula.
pub fn transport_oracle<T: Scalar>(mu_pmf: &[T], nu_pmf: &[T]) -> Result<T> {
    if mu_pmf.len() != nu_pmf.len() {
        return Err(Error::DimensionMismatch {
            left: mu_pmf.len(),
            right: nu_pmf.len(),
        });
    }
    validate_pmf(mu_pmf)?;
    validate_pmf(nu_pmf)?;
    let n = mu_pmf.len();
    let (mut i, mut j) = (0, 0);
    let mut supply = mu_pmf[0].clone();
    let mut demand = nu_pmf[0].clone();
    let mut cost = T::zero();
    while i < n && j < n {
        if supply.is_zero() {
            i += 1;
            if i < n {
                supply = mu_pmf[i].clone();
            }
            continue;
        }
        if demand.is_zero() {
            j += 1;
            if j < n {
                demand = nu_pmf[j].clone();
            }
            continue;
        }
        let moved = if supply < demand {
            supply.clone()
        } else {
            demand.clone()
        };
        let distance = T::from_usize(i.abs_diff(j)).expect("index fits the scalar");
        cost = cost + moved.clone() * distance;
        supply = supply - moved.clone();
        demand = demand - moved;
    }
    Ok(cost)
}

/// Writes `n - 1` sorted uniforms followed by `1.0` into `out`.
fn fill_sorted_cdf<R: Rng + ?Sized>(out: &mut [f64], rng: &mut R) {
    let (last, head) = out.split_last_mut().expect("n >= 1");
    for v in head.iter_mut() {
        *v = rng.random::<f64>();
    }
    head.sort_unstable_by(f64::total_cmp);
    *last = 1.0;
}

/// A uniform random point of the CDF simplex of dimension `n`.
pub fn sample_cdf<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CdfVector<f64> {
    assert!(n >= 1, "sample_cdf needs n >= 1");
    let mut values = vec![0.0; n];
    fill_sorted_cdf(&mut values, rng);
    CdfVector { values }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub bins: usize,
    /// Worker threads; `None` uses the global rayon pool. Does not affect
    /// the result.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub mean_w1: f64,
    pub mean_w1_sq: f64,
    /// Zero when `samples == 1`.
    pub std_error_mean: f64,
    /// Zero when `samples == 1`.
    pub std_error_sq: f64,
    /// Equal-width bins over `[0, n-1]`, left-closed, final bin closed.
    pub histogram: Vec<HistogramBin>,
}

impl McEstimate {
    /// `∫ |h(t) - p(t)| dt` between the histogram density `h` and a reference
    /// density `p`, by midpoint quadrature inside each bin.
    pub fn density_l1_distance(&self, density: impl Fn(f64) -> f64) -> f64 {
        const SUBDIVISIONS: usize = 256;
        let total = self.samples as f64;
        self.histogram
            .iter()
            .map(|bin| {
                let width = bin.right - bin.left;
                let level = bin.count as f64 / (total * width);
                let h = width / SUBDIVISIONS as f64;
                (0..SUBDIVISIONS)
                    .map(|k| (level - density(bin.left + (k as f64 + 0.5) * h)).abs() * h)
                    .sum::<f64>()
            })
            .sum()
    }
}

#[derive(Debug, Clone)]
struct ChunkTally {
    count: u64,
    sum: CompensatedSum,
    sum_sq: CompensatedSum,
    sum_quad: CompensatedSum,
    bins: Vec<u64>,
}

fn bin_index(w: f64, width: f64, bins: usize) -> usize {
    ((w / width) as usize).min(bins - 1)
}

fn run_chunk(cfg: &McConfig, chunk: u64, width: f64) -> ChunkTally {
    let start = chunk * CHUNK_SIZE;
    let count = CHUNK_SIZE.min(cfg.samples - start);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chunk);
    let mut mu = vec![0.0; cfg.n];
    let mut nu = vec![0.0; cfg.n];
    let mut tally = ChunkTally {
        count,
        sum: CompensatedSum::default(),
        sum_sq: CompensatedSum::default(),
        sum_quad: CompensatedSum::default(),
        bins: vec![0; cfg.bins],
    };
    for _ in 0..count {
        fill_sorted_cdf(&mut mu, &mut rng);
        fill_sorted_cdf(&mut nu, &mut rng);
        let w: f64 = mu.iter().zip(&nu).map(|(a, b)| (a - b).abs()).sum();
        let sq = w * w;
        tally.sum.add(w);
        tally.sum_sq.add(sq);
        tally.sum_quad.add(sq * sq);
        tally.bins[bin_index(w, width, cfg.bins)] += 1;
    }
    tally
}

/// Monte Carlo estimate of `E(W1)` and `E(W1^2)` over uniform pairs.
pub fn estimate_moments(cfg: &McConfig) -> Result<McEstimate> {
    if cfg.n < 2 {
        return Err(Error::OutOfRange {
            what: "n",
            detail: "Monte Carlo needs n >= 2".into(),
        });
    }
    if cfg.samples == 0 || cfg.bins == 0 {
        return Err(Error::OutOfRange {
            what: "samples/bins",
            detail: "need at least one sample and one bin".into(),
        });
    }
    let diameter = (cfg.n - 1) as f64;
    let width = diameter / cfg.bins as f64;
    let chunks = cfg.samples.div_ceil(CHUNK_SIZE);
    let run = || -> Vec<ChunkTally> {
        (0..chunks)
            .into_par_iter()
            .map(|c| run_chunk(cfg, c, width))
            .collect()
    };
    let tallies = match cfg.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::OutOfRange {
                what: "threads",
                detail: e.to_string(),
            })?
            .install(run),
        None => run(),
    };

    let mut sum = CompensatedSum::default();
    let mut sum_sq = CompensatedSum::default();
    let mut sum_quad = CompensatedSum::default();
    let mut counts = vec![0u64; cfg.bins];
    let mut total = 0u64;
    for t in &tallies {
        total += t.count;
        sum.merge(&t.sum);
        sum_sq.merge(&t.sum_sq);
        sum_quad.merge(&t.sum_quad);
        for (acc, c) in counts.iter_mut().zip(&t.bins) {
            *acc += c;
        }
    }
    debug_assert_eq!(total, cfg.samples);

    let n = total as f64;
    let mean = sum.value() / n;
    let mean_sq = sum_sq.value() / n;
    let mean_quad = sum_quad.value() / n;
    let std_error = |second: f64, first: f64| {
        if total < 2 {
            0.0
        } else {
            let var = ((second - first * first) * n / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        }
    };
    let histogram = counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            left: i as f64 * width,
            right: if i + 1 == cfg.bins {
                diameter
            } else {
                (i + 1) as f64 * width
            },
            count,
        })
        .collect();
    Ok(McEstimate {
        n: cfg.n,
        samples: cfg.samples,
        seed: cfg.seed,
        mean_w1: mean,
        mean_w1_sq: mean_sq,
        std_error_mean: std_error(mean_sq, mean),
        std_error_sq: std_error(mean_quad, mean_sq),
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::{int, ratio, Rational};
    use proptest::prelude::*;

    fn cdf(pmf: &[(i64, i64)]) -> CdfVector<Rational> {
        let pmf: Vec<Rational> = pmf.iter().map(|&(a, b)| ratio(a, b)).collect();
        CdfVector::from_pmf(&pmf).unwrap()
    }

    #[test]
    fn w1_examples() {
        let mu = cdf(&[(1, 2), (1, 2), (0, 1)]);
        let nu = cdf(&[(0, 1), (1, 2), (1, 2)]);
        assert_eq!(w1(&mu, &mu).unwrap(), int(0));
        assert_eq!(w1(&mu, &nu).unwrap(), int(1));
        assert_eq!(w1_normalized(&mu, &nu).unwrap(), ratio(1, 2));
        for n in 1..8 {
            let a = CdfVector::<Rational>::point_mass(n, 0);
            let b = CdfVector::<Rational>::point_mass(n, n - 1);
            assert_eq!(w1(&a, &b).unwrap(), int(n as i64 - 1));
            if n >= 2 {
                assert_eq!(w1_normalized(&a, &b).unwrap(), int(1));
            }
        }
    }

    #[test]
    fn w1_errors() {
        let a = CdfVector::<Rational>::point_mass(3, 0);
        let b = CdfVector::<Rational>::point_mass(2, 0);
        assert_eq!(
            w1(&a, &b),
            Err(Error::DimensionMismatch { left: 3, right: 2 })
        );
        let one = CdfVector::<Rational>::point_mass(1, 0);
        assert!(w1_normalized(&one, &one).is_err());
    }

    #[test]
    fn cdf_validation() {
        assert!(CdfVector::new(vec![0.5, 0.4, 1.0]).is_err());
        assert!(CdfVector::new(vec![0.5, 0.9]).is_err());
        assert!(CdfVector::new(vec![-0.1, 1.0]).is_err());
        assert!(CdfVector::<f64>::new(vec![]).is_err());
        assert!(CdfVector::new(vec![0.0, 0.3, 1.0]).is_ok());
        assert!(CdfVector::from_pmf(&[ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(CdfVector::from_pmf(&[ratio(3, 2), ratio(-1, 2)]).is_err());
        let c = cdf(&[(1, 4), (0, 1), (3, 4)]);
        assert_eq!(c.pmf(), vec![ratio(1, 4), int(0), ratio(3, 4)]);
    }

    #[test]
    fn oracle_examples() {
        let a = [ratio(1, 2), ratio(1, 2), int(0)];
        let b = [int(0), ratio(1, 2), ratio(1, 2)];
        assert_eq!(transport_oracle(&a, &a).unwrap(), int(0));
        assert_eq!(transport_oracle(&a, &b).unwrap(), int(1));
        assert_eq!(
            transport_oracle(&[int(1), int(0)], &[int(0), int(1)]).unwrap(),
            int(1)
        );
        assert!(matches!(
            transport_oracle(&[int(1)], &[int(1), int(0)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(transport_oracle(&[ratio(1, 2), int(0)], &[int(0), int(1)]).is_err());
    }

    #[test]
    fn sampler_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample_cdf(1, &mut rng).values(), &[1.0]);
        let c = sample_cdf(2, &mut rng);
        assert!(c.values()[0] >= 0.0 && c.values()[0] < 1.0 && c.values()[1] == 1.0);
        for _ in 0..100 {
            let c = sample_cdf(7, &mut rng);
            assert!(CdfVector::new(c.values().to_vec()).is_ok());
        }
    }

    #[test]
    fn sampler_first_coordinate_mean() {
        // min of two uniforms has mean 1/3 and variance 1/18
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let draws = 1_000_000;
        let mean = (0..draws)
            .map(|_| sample_cdf(3, &mut rng).values()[0])
            .sum::<f64>()
            / draws as f64;
        let sigma = (1.0f64 / 18.0 / draws as f64).sqrt();
        assert!((mean - 1.0 / 3.0).abs() < 3.0 * sigma, "mean={mean}");
    }

    #[test]
    fn compensated_sum_keeps_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn single_sample_histogram() {
        let cfg = McConfig {
            n: 2,
            samples: 1,
            seed: 7,
            bins: 10,
            threads: Some(1),
        };
        let est = estimate_moments(&cfg).unwrap();
        assert_eq!(est.histogram.iter().map(|b| b.count).sum::<u64>(), 1);
        assert_eq!(est.std_error_mean, 0.0);
        assert_eq!(est.histogram.last().unwrap().right, 1.0);
    }

    #[test]
    fn diameter_lands_in_last_bin() {
        assert_eq!(bin_index(2.0, 0.5, 4), 3);
        assert_eq!(bin_index(0.0, 0.5, 4), 0);
        assert_eq!(bin_index(0.5, 0.5, 4), 1);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let base = McConfig {
            n: 4,
            samples: 50_000,
            seed: 3,
            bins: 12,
            threads: Some(1),
        };
        let a = estimate_moments(&base).unwrap();
        let b = estimate_moments(&McConfig {
            threads: Some(4),
            ..base
        })
        .unwrap();
        let c = estimate_moments(&McConfig {
            threads: None,
            ..base
        })
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(a.mean_w1 >= 0.0 && a.mean_w1 <= 3.0);
        assert!(a.mean_w1_sq >= 0.0 && a.mean_w1_sq <= 9.0);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = McConfig {
            n: 1,
            samples: 10,
            seed: 0,
            bins: 4,
            threads: None,
        };
        assert!(estimate_moments(&cfg).is_err());
        let cfg = McConfig {
            n: 3,
            samples: 0,
            seed: 0,
            bins: 4,
            threads: None,
        };
        assert!(estimate_moments(&cfg).is_err());
    }

    fn rational_pmf(n: usize) -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec(0u32..6, n).prop_map(|weights| {
            let total: u32 = weights.iter().sum();
            if total == 0 {
                let mut v = vec![int(0); weights.len()];
                v[0] = int(1);
                return v;
            }
            weights
                .iter()
                .map(|&w| ratio(w as i64, total as i64))
                .collect()
        })
    }

    fn pmf_triple() -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>, Vec<Rational>)> {
        (1usize..=6).prop_flat_map(|n| (rational_pmf(n), rational_pmf(n), rational_pmf(n)))
    }

    fn pmf_pair() -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>)> {
        (1usize..=8).prop_flat_map(|n| (rational_pmf(n), rational_pmf(n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn metric_axioms((a, b, c) in pmf_triple()) {
            let (ma, mb, mc) = (
                CdfVector::from_pmf(&a).unwrap(),
                CdfVector::from_pmf(&b).unwrap(),
                CdfVector::from_pmf(&c).unwrap(),
            );
            let ab = w1(&ma, &mb).unwrap();
            prop_assert!(ab >= int(0));
            prop_assert_eq!(ab.is_zero(), a == b);
            prop_assert_eq!(&ab, &w1(&mb, &ma).unwrap());
            prop_assert!(w1(&ma, &mc).unwrap() <= ab + w1(&mb, &mc).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn cdf_formula_matches_transport((a, b) in pmf_pair()) {
            let d = w1(&CdfVector::from_pmf(&a).unwrap(), &CdfVector::from_pmf(&b).unwrap()).unwrap();
            prop_assert_eq!(&d, &transport_oracle(&a, &b).unwrap());
            prop_assert!(d <= int(a.len() as i64 - 1));
        }
    }
}
