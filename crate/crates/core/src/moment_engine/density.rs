//! The closed-form densities of `X_2` and `X_3` exactly as published, plus an
//! audit of their mass, mean and continuity.
//!
//! The published `X_3` density does not integrate to one and its two pieces
//! disagree at `t = 1`, so it is reported rather than trusted; see
//! [`density_diagnostics`].

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_math::{int, ratio, to_f64, Rational};
use crate::univariate::UniPoly;

/// A density given by polynomial pieces on consecutive intervals. Each piece
/// covers `(lo, hi]`, except the first which also includes its left end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseDensity {
    pub pieces: Vec<(Rational, Rational, UniPoly)>,
}

impl PiecewiseDensity {
    pub fn support(&self) -> (Rational, Rational) {
        let lo = self
            .pieces
            .first()
            .map(|p| p.0.clone())
            .unwrap_or_else(Rational::zero);
        let hi = self
            .pieces
            .last()
            .map(|p| p.1.clone())
            .unwrap_or_else(Rational::zero);
        (lo, hi)
    }

    pub fn piece_at(&self, t: &Rational) -> Option<&UniPoly> {
        let (first_lo, _) = self.support();
        self.pieces
            .iter()
            .find(|(lo, hi, _)| (t > lo || (t == lo && *lo == first_lo)) && t <= hi)
            .map(|(_, _, p)| p)
    }

    /// Float evaluation, zero outside the support. Meant for quadrature
    /// against histograms, not for exact work.
    pub fn eval_f64(&self, t: f64) -> f64 {
        let first_lo = self.pieces.first().map(|p| to_f64(&p.0));
        for (lo, hi, poly) in &self.pieces {
            let (lo, hi) = (to_f64(lo), to_f64(hi));
            if (t > lo || (t == lo && Some(lo) == first_lo)) && t <= hi {
                return poly
                    .coeffs()
                    .iter()
                    .rev()
                    .fold(0.0, |acc, c| acc * t + to_f64(c));
            }
        }
        0.0
    }

    /// `∫ t^power p(t) dt` over the whole support.
    pub fn moment(&self, power: usize) -> Rational {
        self.pieces
            .iter()
            .map(|(lo, hi, p)| {
                let mut weighted = p.clone();
                for _ in 0..power {
                    weighted = weighted.shift_up();
                }
                weighted.integrate(lo, hi)
            })
            .fold(Rational::zero(), |a, b| a + b)
    }
}

/// The published density for `n = 2` or `n = 3`.
pub fn printed_density(n: u32) -> Result<PiecewiseDensity> {
    let q = |v: &[(i64, i64)]| UniPoly::new(v.iter().map(|&(a, b)| ratio(a, b)).collect());
    let pieces = match n {
        2 => vec![(int(0), int(1), q(&[(2, 1), (-2, 1)]))],
        3 => vec![
            (
                int(0),
                int(1),
                q(&[(0, 1), (0, 1), (4, 1), (-14, 3), (19, 2)]),
            ),
            (
                int(1),
                int(2),
                q(&[(-1, 3), (8, 3), (-2, 1), (2, 3), (-1, 12)]),
            ),
        ],
        _ => return Err(Error::DensityUnavailable { n }),
    };
    Ok(PiecewiseDensity { pieces })
}

/// Evaluates the published density of `X_n` at `t`.
pub fn density(n: u32, t: &Rational) -> Result<Rational> {
    let d = printed_density(n)?;
    let piece = d.piece_at(t).ok_or_else(|| Error::OutsideSupport {
        t: t.to_string(),
        upper: n - 1,
    })?;
    Ok(piece.eval(t))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityDiagnostics {
    pub n: u32,
    /// `∫ p`; 1 for a genuine density.
    pub mass: Rational,
    /// `∫ t p`; should match `E(X_n)`.
    pub mean: Rational,
    /// `∫ t^2 p`; should match `E(X_n^2)`.
    pub second_moment: Rational,
    /// Left piece minus right piece at `t = 1`, when there are two pieces.
    pub continuity_gap_at_1: Option<Rational>,
}

pub fn density_diagnostics(n: u32) -> Result<DensityDiagnostics> {
    let d = printed_density(n)?;
    let continuity_gap_at_1 = match d.pieces.as_slice() {
        [(_, _, left), (_, _, right)] => {
            let one = int(1);
            Some(left.eval(&one) - right.eval(&one))
        }
        _ => None,
    };
    Ok(DensityDiagnostics {
        n,
        mass: d.moment(0),
        mean: d.moment(1),
        second_moment: d.moment(2),
        continuity_gap_at_1,
    })
}
