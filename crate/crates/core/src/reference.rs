//! Published reference values that the computed results are checked against.

use crate::bivariate_poly::BivarPoly;
use crate::exact_math::ratio;

/// `(deg_s, deg_t, numerator, denominator)`.
pub type Term = (u32, u32, i64, i64);

/// `F_2 .. F_5`, indexed from `n = 2`.
pub const PUBLISHED_F: [&[Term]; 4] = [
    &[(2, 1, 1, 2), (1, 2, -1, 2), (0, 3, 1, 3)],
    &[(3, 2, 1, 4), (2, 3, -1, 4), (1, 4, 1, 12), (0, 5, 1, 20)],
    &[
        (4, 3, 1, 24),
        (3, 4, -1, 24),
        (2, 5, 1, 120),
        (1, 6, 1, 120),
        (0, 7, 1, 420),
    ],
    &[
        (5, 4, 1, 288),
        (4, 5, -1, 288),
        (3, 6, 1, 2160),
        (2, 7, 1, 1680),
        (1, 8, 1, 3360),
        (0, 9, 1, 18144),
    ],
];

/// `G_2 .. G_5`, indexed from `n = 2`.
pub const PUBLISHED_G: [&[Term]; 4] = [
    &[(3, 1, 1, 3), (2, 2, -1, 2), (1, 3, 1, 3)],
    &[
        (4, 2, 7, 24),
        (3, 3, -1, 2),
        (2, 4, 3, 8),
        (1, 5, -2, 15),
        (0, 6, 11, 180),
    ],
    &[
        (5, 3, 5, 72),
        (4, 4, -1, 8),
        (3, 5, 31, 360),
        (2, 6, -1, 60),
        (1, 7, -1, 180),
        (0, 8, 1, 120),
    ],
    &[
        (6, 4, 13, 1728),
        (5, 5, -1, 72),
        (4, 6, 77, 8640),
        (3, 7, -1, 1260),
        (2, 8, -11, 10080),
        (1, 9, 1, 2520),
        (0, 10, 19, 50400),
    ],
];

pub fn published_poly(terms: &[Term]) -> BivarPoly {
    BivarPoly::from_terms(terms.iter().map(|&(s, t, a, b)| ((s, t), ratio(a, b))))
}

/// `L(p,q)` for `p, q = 0..=6`.
pub const PUBLISHED_L_MATRIX: [[i64; 7]; 7] = [
    [0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 3, 6, 10, 15],
    [0, 1, 2, 8, 22, 47, 86],
    [0, 3, 8, 16, 48, 125, 274],
    [0, 6, 22, 48, 96, 256, 642],
    [0, 10, 47, 125, 256, 512, 1280],
    [0, 15, 86, 274, 642, 1280, 2560],
];

/// One row of the published moment table, as printed (4 significant digits).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub n: u32,
    pub first: &'static str,
    pub second: &'static str,
    pub variance: &'static str,
    pub normalized_first: &'static str,
    pub normalized_second: &'static str,
    pub normalized_variance: &'static str,
}

const fn row(
    n: u32,
    first: &'static str,
    second: &'static str,
    variance: &'static str,
    normalized_first: &'static str,
    normalized_second: &'static str,
    normalized_variance: &'static str,
) -> TableRow {
    TableRow {
        n,
        first,
        second,
        variance,
        normalized_first,
        normalized_second,
        normalized_variance,
    }
}

pub const PUBLISHED_TABLE: [TableRow; 9] = [
    row(
        2, "0.3333", "0.1667", "0.05556", "0.3333", "0.1667", "0.05556",
    ),
    row(
        3, "0.5333", "0.3778", "0.09333", "0.2667", "0.09444", "0.02333",
    ),
    row(
        4, "0.6857", "0.6000", "0.1298", "0.2286", "0.06667", "0.01442",
    ),
    row(
        5, "0.8127", "0.8267", "0.1662", "0.2032", "0.05167", "0.01039",
    ),
    row(
        6, "0.9235", "1.056", "0.2027", "0.1847", "0.04222", "0.008107",
    ),
    row(
        7, "1.023", "1.286", "0.2392", "0.1705", "0.03571", "0.006645",
    ),
    row(
        8, "1.114", "1.517", "0.2759", "0.1591", "0.03095", "0.005630",
    ),
    row(
        9, "1.198", "1.748", "0.3126", "0.1498", "0.02731", "0.004884",
    ),
    row(
        10, "1.277", "1.980", "0.3493", "0.1419", "0.02444", "0.004313",
    ),
];
