//! Earlier bivariate beta constructions kept for comparison.
//!
//! * Libby-Novick: `X = G1/(G1+G0)`, `Y = G2/(G2+G0)` with gamma shapes
//!   `a_i` and rates `b_i`; density in terms of `λi = bi/b0`.
//! * The three-parameter family, Libby-Novick with `λ1 = λ2 = 1`.
//! * Arnold-Ng: five unit-scale gammas,
//!   `X = (G1+G3)/(G1+G3+G4+G5)`, `Y = (G2+G4)/(G2+G3+G4+G5)`. Its joint
//!   density has no closed form and is only sampled here.

use serde::Serialize;

use crate::construction::{sample_ln_gamma, BivariateSample, RandomStream};
use crate::error::{domain, Result};
use crate::special::ln_beta_multi;

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} = {v} must be positive and finite"))
    }
}

fn check_point(x: f64, y: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0 {
        Ok(())
    } else {
        domain(format!("({x}, {y}) is outside the open unit square"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LibbyNovickParams {
    /// Shapes `(a0, a1, a2)`.
    pub shapes: [f64; 3],
    /// Rates `(b0, b1, b2)`.
    pub rates: [f64; 3],
}

impl LibbyNovickParams {
    pub fn new(shapes: [f64; 3], rates: [f64; 3]) -> Result<Self> {
        for (i, &a) in shapes.iter().enumerate() {
            positive(&format!("shape a{i}"), a)?;
        }
        for (i, &b) in rates.iter().enumerate() {
            positive(&format!("rate b{i}"), b)?;
        }
        Ok(Self { shapes, rates })
    }

    /// `λ1 = b1 / b0`
    pub fn lambda1(&self) -> f64 {
        self.rates[1] / self.rates[0]
    }

    /// `λ2 = b2 / b0`
    pub fn lambda2(&self) -> f64 {
        self.rates[2] / self.rates[0]
    }
}

/// `1 / (1 + e^(lb - la))`, i.e. `A / (A + B)` from log values.
fn ratio(ln_a: f64, ln_b: f64) -> f64 {
    let v = 1.0 / (1.0 + (ln_b - ln_a).exp());
    v.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
}

fn ln_sum(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

pub fn sample_libby_novick(
    p: &LibbyNovickParams,
    n: usize,
    stream: &mut RandomStream,
) -> Vec<BivariateSample> {
    (0..n)
        .map(|_| {
            let g = [0, 1, 2].map(|i| {
                sample_ln_gamma(p.shapes[i], stream).expect("validated shape") - p.rates[i].ln()
            });
            BivariateSample {
                x: ratio(g[1], g[0]),
                y: ratio(g[2], g[0]),
            }
        })
        .collect()
}

/// Libby-Novick density:
///
/// ```text
/// f = λ1^a1 x^(a1-1) (1-x)^-(a1+1) λ2^a2 y^(a2-1) (1-y)^-(a2+1)
///     / (B(a0,a1,a2) [1 + λ1 x/(1-x) + λ2 y/(1-y)]^(a0+a1+a2))
/// ```
pub fn pdf_libby_novick(p: &LibbyNovickParams, x: f64, y: f64) -> Result<f64> {
    check_point(x, y)?;
    let [a0, a1, a2] = p.shapes;
    let (l1, l2) = (p.lambda1(), p.lambda2());
    let ln_num = a1 * l1.ln() + (a1 - 1.0) * x.ln() - (a1 + 1.0) * (1.0 - x).ln()
        + a2 * l2.ln()
        + (a2 - 1.0) * y.ln()
        - (a2 + 1.0) * (1.0 - y).ln();
    let base = 1.0 + l1 * x / (1.0 - x) + l2 * y / (1.0 - y);
    Ok((ln_num - (a0 + a1 + a2) * base.ln() - ln_beta_multi(&p.shapes)?).exp())
}

/// Three-parameter density
/// `x^(a1-1) (1-x)^(a0+a2-1) y^(a2-1) (1-y)^(a0+a1-1) / (B(a0,a1,a2) (1-xy)^(a0+a1+a2))`.
pub fn pdf_three_param(a0: f64, a1: f64, a2: f64, x: f64, y: f64) -> Result<f64> {
    positive("a0", a0)?;
    positive("a1", a1)?;
    positive("a2", a2)?;
    check_point(x, y)?;
    let ln = (a1 - 1.0) * x.ln()
        + (a0 + a2 - 1.0) * (1.0 - x).ln()
        + (a2 - 1.0) * y.ln()
        + (a0 + a1 - 1.0) * (1.0 - y).ln()
        - (a0 + a1 + a2) * (-x * y).ln_1p()
        - ln_beta_multi(&[a0, a1, a2])?;
    Ok(ln.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArnoldParams {
    /// Shapes `(a1, ..., a5)`.
    pub shapes: [f64; 5],
}

impl ArnoldParams {
    pub fn new(shapes: [f64; 5]) -> Result<Self> {
        for (i, &a) in shapes.iter().enumerate() {
            positive(&format!("shape a{}", i + 1), a)?;
        }
        Ok(Self { shapes })
    }
}

pub fn sample_arnold(
    p: &ArnoldParams,
    n: usize,
    stream: &mut RandomStream,
) -> Vec<BivariateSample> {
    (0..n)
        .map(|_| {
            let [g1, g2, g3, g4, g5] = p
                .shapes
                .map(|a| sample_ln_gamma(a, stream).expect("validated shape"));
            let x_num = ln_sum(&[g1, g3]);
            let y_num = ln_sum(&[g2, g4]);
            BivariateSample {
                x: ratio(x_num, ln_sum(&[g4, g5])),
                y: ratio(y_num, ln_sum(&[g3, g5])),
            }
        })
        .collect()
}
