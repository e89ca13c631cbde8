//! Parameter vectors, a seedable random stream, and the additive Dirichlet
//! constructions for the bivariate and trivariate distributions.

use std::fmt;
use std::str::FromStr;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} = {v} must be positive and finite"))
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| Error::Domain(format!("cannot parse {p:?} as a number: {e}")))
        })
        .collect()
}

/// Parameters `(α11, α10, α01, α00)` of the four-share Dirichlet vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlphaFields", into = "AlphaFields")]
pub struct AlphaBivariate {
    a11: f64,
    a10: f64,
    a01: f64,
    a00: f64,
}

#[derive(Serialize, Deserialize)]
struct AlphaFields {
    a11: f64,
    a10: f64,
    a01: f64,
    a00: f64,
}

impl TryFrom<AlphaFields> for AlphaBivariate {
    type Error = Error;
    fn try_from(f: AlphaFields) -> Result<Self> {
        Self::new(f.a11, f.a10, f.a01, f.a00)
    }
}

impl From<AlphaBivariate> for AlphaFields {
    fn from(a: AlphaBivariate) -> Self {
        Self {
            a11: a.a11,
            a10: a.a10,
            a01: a.a01,
            a00: a.a00,
        }
    }
}

impl AlphaBivariate {
    pub fn new(a11: f64, a10: f64, a01: f64, a00: f64) -> Result<Self> {
        check_positive("a11", a11)?;
        check_positive("a10", a10)?;
        check_positive("a01", a01)?;
        check_positive("a00", a00)?;
        Ok(Self { a11, a10, a01, a00 })
    }

    pub fn from_array(a: [f64; 4]) -> Result<Self> {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn a11(&self) -> f64 {
        self.a11
    }
    pub fn a10(&self) -> f64 {
        self.a10
    }
    pub fn a01(&self) -> f64 {
        self.a01
    }
    pub fn a00(&self) -> f64 {
        self.a00
    }

    /// `[a11, a10, a01, a00]`
    pub fn to_array(&self) -> [f64; 4] {
        [self.a11, self.a10, self.a01, self.a00]
    }

    /// `M`, the sum of all four parameters.
    pub fn total(&self) -> f64 {
        self.a11 + self.a10 + self.a01 + self.a00
    }

    /// `α1+`, first shape of the X marginal.
    pub fn row1(&self) -> f64 {
        self.a11 + self.a10
    }
    /// `α+1`, first shape of the Y marginal.
    pub fn col1(&self) -> f64 {
        self.a11 + self.a01
    }
    /// `α0+`, second shape of the X marginal.
    pub fn row0(&self) -> f64 {
        self.a00 + self.a01
    }
    /// `α+0`, second shape of the Y marginal.
    pub fn col0(&self) -> f64 {
        self.a00 + self.a10
    }

    /// Exchanges `a10` and `a01`, i.e. the roles of X and Y.
    pub fn swap(&self) -> Self {
        Self {
            a10: self.a01,
            a01: self.a10,
            ..*self
        }
    }
}

impl FromStr for AlphaBivariate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v = parse_list(s)?;
        match v.as_slice() {
            [a, b, c, d] => Self::new(*a, *b, *c, *d),
            _ => domain(format!(
                "expected 4 comma-separated values, got {}",
                v.len()
            )),
        }
    }
}

impl fmt::Display for AlphaBivariate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a11, self.a10, self.a01, self.a00)
    }
}

/// Parameters of the eight-share trivariate construction, in the order
/// `(α111, α110, α101, α011, α100, α010, α001, α000)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaTrivariate {
    shares: [f64; 8],
}

impl AlphaTrivariate {
    pub const LABELS: [&'static str; 8] = [
        "a111", "a110", "a101", "a011", "a100", "a010", "a001", "a000",
    ];

    pub fn new(shares: [f64; 8]) -> Result<Self> {
        for (label, &v) in Self::LABELS.iter().zip(&shares) {
            check_positive(label, v)?;
        }
        Ok(Self { shares })
    }

    pub fn shares(&self) -> &[f64; 8] {
        &self.shares
    }

    /// Aggregated parameters of the (X, Y) pair.
    pub fn pair_xy(&self) -> AlphaBivariate {
        let [s111, s110, s101, s011, s100, s010, s001, s000] = self.shares;
        AlphaBivariate::new(s111 + s110, s101 + s100, s011 + s010, s001 + s000)
            .expect("sums of positive shares are positive")
    }

    /// Aggregated parameters of the (X, Z) pair.
    pub fn pair_xz(&self) -> AlphaBivariate {
        let [s111, s110, s101, s011, s100, s010, s001, s000] = self.shares;
        AlphaBivariate::new(s111 + s101, s110 + s100, s011 + s001, s010 + s000)
            .expect("sums of positive shares are positive")
    }

    /// Aggregated parameters of the (Y, Z) pair.
    pub fn pair_yz(&self) -> AlphaBivariate {
        let [s111, s110, s101, s011, s100, s010, s001, s000] = self.shares;
        AlphaBivariate::new(s111 + s011, s110 + s010, s101 + s001, s100 + s000)
            .expect("sums of positive shares are positive")
    }
}

impl FromStr for AlphaTrivariate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v = parse_list(s)?;
        let shares: [f64; 8] = v.as_slice().try_into().map_err(|_| {
            Error::Domain(format!(
                "expected 8 comma-separated values, got {}",
                v.len()
            ))
        })?;
        Self::new(shares)
    }
}

/// Seeded source of uniform and normal variates.
///
/// Backed by ChaCha20 (`rand_chacha`), seeded with `seed_from_u64`. The
/// same seed reproduces the same stream bit for bit. Not `Sync`; give each
/// thread its own stream.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha20Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform on the open interval (0, 1).
    pub fn uniform_open(&mut self) -> f64 {
        self.rng.sample(Open01)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

/// Logarithm of a Gamma(shape, 1) draw.
///
/// Marsaglia-Tsang squeeze for `shape >= 1`; below 1 the boost
/// `G(a) = G(a+1) U^(1/a)` is applied in log space so that tiny draws do
/// not underflow.
pub fn sample_ln_gamma(shape: f64, stream: &mut RandomStream) -> Result<f64> {
    check_positive("gamma shape", shape)?;
    if shape < 1.0 {
        let boosted = marsaglia_tsang(shape + 1.0, stream);
        return Ok(boosted.ln() + stream.uniform_open().ln() / shape);
    }
    Ok(marsaglia_tsang(shape, stream).ln())
}

/// A Gamma(shape, 1) draw.
pub fn sample_gamma(shape: f64, stream: &mut RandomStream) -> Result<f64> {
    check_positive("gamma shape", shape)?;
    if shape < 1.0 {
        return Ok(sample_ln_gamma(shape, stream)?.exp());
    }
    Ok(marsaglia_tsang(shape, stream))
}

fn marsaglia_tsang(shape: f64, stream: &mut RandomStream) -> f64 {
    debug_assert!(shape >= 1.0);
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = stream.standard_normal();
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = stream.uniform_open();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Normalized log-gamma draws written into `out`.
fn dirichlet_into(alphas: &[f64], stream: &mut RandomStream, out: &mut [f64]) -> Result<()> {
    let mut max = f64::NEG_INFINITY;
    for (o, &a) in out.iter_mut().zip(alphas) {
        *o = sample_ln_gamma(a, stream)?;
        max = max.max(*o);
    }
    let mut total = 0.0;
    for o in out.iter_mut() {
        *o = (*o - max).exp();
        total += *o;
    }
    for o in out.iter_mut() {
        *o /= total;
    }
    Ok(())
}

/// One Dirichlet draw: independent gammas normalized by their total. All
/// `k` shares are returned, including the one that is implicit in the
/// simplex parameterization.
pub fn sample_dirichlet(alphas: &[f64], stream: &mut RandomStream) -> Result<Vec<f64>> {
    if alphas.is_empty() {
        return domain("dirichlet needs at least one parameter");
    }
    let mut out = vec![0.0; alphas.len()];
    dirichlet_into(alphas, stream, &mut out)?;
    Ok(out)
}

/// Clamp into the open unit interval. Sums of shares can round to exactly
/// 0 or 1 when the remaining shares are below the float resolution.
fn open_unit(v: f64) -> f64 {
    const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;
    v.clamp(f64::MIN_POSITIVE, BELOW_ONE)
}

/// A point of the open unit square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BivariateSample {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrivariateSample {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// `n` draws of `(X, Y) = (U11 + U10, U11 + U01)`.
pub fn sample_bivariate(
    alpha: &AlphaBivariate,
    n: usize,
    stream: &mut RandomStream,
) -> Vec<BivariateSample> {
    let shapes = alpha.to_array();
    let mut u = [0.0; 4];
    (0..n)
        .map(|_| {
            dirichlet_into(&shapes, stream, &mut u).expect("validated shapes");
            BivariateSample {
                x: open_unit(u[0] + u[1]),
                y: open_unit(u[0] + u[2]),
            }
        })
        .collect()
}

/// `n` draws of the trivariate row sums over an eight-share Dirichlet:
///
/// ```text
/// X = U111 + U110 + U101        + U100
/// Y = U111 + U110        + U011        + U010
/// Z = U111        + U101 + U011               + U001
/// ```
pub fn sample_trivariate(
    alpha: &AlphaTrivariate,
    n: usize,
    stream: &mut RandomStream,
) -> Vec<TrivariateSample> {
    let mut u = [0.0; 8];
    (0..n)
        .map(|_| {
            dirichlet_into(alpha.shares(), stream, &mut u).expect("validated shapes");
            let [u111, u110, u101, u011, u100, u010, u001, _] = u;
            TrivariateSample {
                x: open_unit(u111 + u110 + u101 + u100),
                y: open_unit(u111 + u110 + u011 + u010),
                z: open_unit(u111 + u101 + u011 + u001),
            }
        })
        .collect()
}
