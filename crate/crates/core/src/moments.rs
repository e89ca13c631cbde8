//! Exact moments of the bivariate distribution.
//!
//! With `M = α11 + α10 + α01 + α00`:
//!
//! ```text
//! μ10 = α1+ / M                     μ01 = α+1 / M
//! μ20 = α1+ α0+ / (M² (M+1))        μ02 = α+1 α+0 / (M² (M+1))
//! μ11 = (α11 α00 - α10 α01) / (M² (M+1))
//! ρ   = (α11 α00 - α10 α01) / sqrt(α1+ α+1 α0+ α+0)
//! ```
//!
//! The covariance denominator is `M²(M+1)`; `M(M+1)` contradicts the
//! variances and the correlation above.

use serde::{Deserialize, Serialize};

use crate::construction::AlphaBivariate;
use crate::error::{domain, Result};
use crate::special::ln_gamma;

/// Means and second central moments `(μ10, μ01, μ20, μ02, μ11)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    pub m10: f64,
    pub m01: f64,
    pub m20: f64,
    pub m02: f64,
    pub m11: f64,
}

impl MomentVector {
    /// Checks means in (0,1), positive variances and the Cauchy-Schwarz
    /// bound on the covariance. Marginal feasibility (`m20 < m10(1-m10)`)
    /// is left to [`crate::fitting::alpha_sum_bound`].
    pub fn new(m10: f64, m01: f64, m20: f64, m02: f64, m11: f64) -> Result<Self> {
        let m = Self {
            m10,
            m01,
            m20,
            m02,
            m11,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let arr = self.to_array();
        if arr.iter().any(|v| !v.is_finite()) {
            return domain("moments must be finite");
        }
        if !(self.m10 > 0.0 && self.m10 < 1.0 && self.m01 > 0.0 && self.m01 < 1.0) {
            return domain(format!(
                "means ({}, {}) must lie in (0, 1)",
                self.m10, self.m01
            ));
        }
        if !(self.m20 > 0.0 && self.m02 > 0.0) {
            return domain("variances must be positive");
        }
        if self.m11.abs() > (self.m20 * self.m02).sqrt() * (1.0 + 1e-12) {
            return domain("covariance exceeds the Cauchy-Schwarz bound");
        }
        Ok(())
    }

    pub fn from_array(a: [f64; 5]) -> Result<Self> {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.m10, self.m01, self.m20, self.m02, self.m11]
    }

    pub fn correlation(&self) -> f64 {
        self.m11 / (self.m20 * self.m02).sqrt()
    }
}

pub fn moment_vector(alpha: &AlphaBivariate) -> MomentVector {
    let m = alpha.total();
    let denom = m * m * (m + 1.0);
    MomentVector {
        m10: alpha.row1() / m,
        m01: alpha.col1() / m,
        m20: alpha.row1() * alpha.row0() / denom,
        m02: alpha.col1() * alpha.col0() / denom,
        m11: (alpha.a11() * alpha.a00() - alpha.a10() * alpha.a01()) / denom,
    }
}

pub fn correlation(alpha: &AlphaBivariate) -> f64 {
    (alpha.a11() * alpha.a00() - alpha.a10() * alpha.a01())
        / (alpha.row1() * alpha.col1() * alpha.row0() * alpha.col0()).sqrt()
}

/// Rising factorial `(a)_n`.
fn rising(a: f64, n: u32, exact: bool) -> f64 {
    if exact {
        (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
    } else {
        (ln_gamma(a + n as f64).unwrap() - ln_gamma(a).unwrap()).exp()
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `E[X^r Y^s]` by expanding `(U11+U10)^r (U11+U01)^s` into Dirichlet
/// monomials `E[U11^i U10^j U01^k] = (α11)_i (α10)_j (α01)_k / (M)_(i+j+k)`.
pub fn mixed_moment(alpha: &AlphaBivariate, r: u32, s: u32) -> f64 {
    let exact = r + s <= 8;
    let [a11, a10, a01, _] = alpha.to_array();
    let total = rising(alpha.total(), r + s, exact);
    let mut acc = 0.0;
    for i in 0..=r {
        for j in 0..=s {
            acc += binomial(r, i)
                * binomial(s, j)
                * rising(a11, i + j, exact)
                * rising(a10, r - i, exact)
                * rising(a01, s - j, exact);
        }
    }
    acc / total
}

/// `E[(X - EX)^r (Y - EY)^s]`.
pub fn central_moment(alpha: &AlphaBivariate, r: u32, s: u32) -> f64 {
    if r + s == 1 {
        return 0.0;
    }
    let mx = alpha.row1() / alpha.total();
    let my = alpha.col1() / alpha.total();
    let mut acc = 0.0;
    for i in 0..=r {
        for j in 0..=s {
            acc += binomial(r, i)
                * binomial(s, j)
                * (-mx).powi((r - i) as i32)
                * (-my).powi((s - j) as i32)
                * mixed_moment(alpha, i, j);
        }
    }
    acc
}

/// Values of `α00` across the columns of the correlation table.
pub const TABLE_COLUMNS: [f64; 6] = [10.0, 5.0, 2.0, 1.0, 0.5, 0.1];

/// `(α11, α10, α01)` for each row of the correlation table.
pub const TABLE_ROWS: [[f64; 3]; 28] = [
    [10.0, 0.1, 0.1],
    [10.0, 10.0, 0.1],
    [10.0, 10.0, 0.5],
    [10.0, 10.0, 1.0],
    [10.0, 10.0, 2.0],
    [10.0, 10.0, 5.0],
    [5.0, 1.0, 1.0],
    [5.0, 10.0, 1.0],
    [5.0, 10.0, 2.0],
    [5.0, 10.0, 5.0],
    [2.0, 1.0, 1.0],
    [2.0, 10.0, 1.0],
    [2.0, 10.0, 2.0],
    [2.0, 10.0, 5.0],
    [1.0, 1.0, 1.0],
    [1.0, 10.0, 1.0],
    [1.0, 10.0, 2.0],
    [1.0, 10.0, 5.0],
    [0.5, 10.0, 0.1],
    [0.5, 10.0, 0.5],
    [0.5, 10.0, 1.0],
    [0.5, 10.0, 2.0],
    [0.5, 10.0, 5.0],
    [0.1, 10.0, 0.1],
    [0.1, 10.0, 0.5],
    [0.1, 10.0, 1.0],
    [0.1, 10.0, 2.0],
    [0.1, 10.0, 5.0],
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub a11: f64,
    pub a10: f64,
    pub a01: f64,
    /// Correlation for each entry of [`TABLE_COLUMNS`].
    pub values: [f64; 6],
}

/// Correlations over the grid of [`TABLE_ROWS`] x [`TABLE_COLUMNS`].
pub fn correlation_table() -> Vec<TableRow> {
    TABLE_ROWS
        .iter()
        .map(|&[a11, a10, a01]| {
            let values = TABLE_COLUMNS.map(|a00| {
                correlation(&AlphaBivariate::new(a11, a10, a01, a00).expect("positive table entry"))
            });
            TableRow {
                a11,
                a10,
                a01,
                values,
            }
        })
        .collect()
}
