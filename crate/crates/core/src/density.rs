//! Joint density of `(X, Y)` on the open unit square.
//!
//! ```text
//! f(x, y) = B(α)^-1 ∫_Ω u^(α11-1) (x-u)^(α10-1) (y-u)^(α01-1) (1-x-y+u)^(α00-1) du
//! Ω = (max(0, x+y-1), min(x, y))
//! ```
//!
//! Two independent evaluation routes are provided: direct quadrature of the
//! integral above, and closed forms in terms of Appell F1 (inside the four
//! triangles cut out by the diagonals) and Gauss 2F1 (on the diagonals).
//! Every closed form carries the overall `1/B(α)` factor.
//!
//! The square is labelled with `A = (0,0)`, `B = (0,1)`, `C = (1,1)`,
//! `D = (1,0)` and the centre `P = (1/2, 1/2)`.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::construction::AlphaBivariate;
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_unit, IntegrandSpec};
use crate::special::{appell_f1_integral, hyp2f1_integral, ln_beta, ln_beta_multi, HypArg};

/// Default relative tolerance of density evaluations.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default grid resolution.
pub const DEFAULT_RESOLUTION: usize = 100;

/// Piece of the unit square, split by the lines `x = y` and `x + y = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    /// `x + y < 1`, `x < y`
    Abp,
    /// `x + y < 1`, `x > y`
    Apd,
    /// `x + y > 1`, `x < y`
    Bcp,
    /// `x + y > 1`, `x > y`
    Cdp,
    /// `x = y < 1/2`
    LineAp,
    /// `1/2 < x = y < 1`
    LinePc,
    /// `x = 1 - y < 1/2`
    LineBp,
    /// `1/2 < x = 1 - y < 1`
    LinePd,
    /// `x = y = 1/2`
    CenterP,
    OutOfDomain,
}

impl Region {
    pub fn tag(&self) -> &'static str {
        match self {
            Region::Abp => "ABP",
            Region::Apd => "APD",
            Region::Bcp => "BCP",
            Region::Cdp => "CDP",
            Region::LineAp => "LINE_AP",
            Region::LinePc => "LINE_PC",
            Region::LineBp => "LINE_BP",
            Region::LinePd => "LINE_PD",
            Region::CenterP => "CENTER_P",
            Region::OutOfDomain => "OUT_OF_DOMAIN",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A point of the square together with its offsets from the edges and
/// the two dividing lines.
///
/// [`SquarePoint::new`] derives the offsets from `x` and `y`; the sign of
/// `1 - x - y` is exact for the given floats. [`SquarePoint::from_parts`]
/// lets a caller that knows a tiny offset (e.g. a distance of `1e-30`
/// from the diagonal) pass it without rounding it away.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquarePoint {
    x: f64,
    y: f64,
    one_minus_x: f64,
    one_minus_y: f64,
    x_minus_y: f64,
    one_minus_sum: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

impl SquarePoint {
    pub fn new(x: f64, y: f64) -> Self {
        let (s, e) = two_sum(x, y);
        Self {
            x,
            y,
            one_minus_x: 1.0 - x,
            one_minus_y: 1.0 - y,
            x_minus_y: x - y,
            one_minus_sum: (1.0 - s) - e,
        }
    }

    /// Builds a point from explicitly supplied offsets. Each offset must
    /// agree with the one derived from `x` and `y` to within a few units
    /// of rounding.
    pub fn from_parts(
        x: f64,
        y: f64,
        one_minus_x: f64,
        one_minus_y: f64,
        x_minus_y: f64,
        one_minus_sum: f64,
    ) -> Result<Self> {
        let derived = Self::new(x, y);
        let close = |given: f64, derived: f64| (given - derived).abs() <= 8.0 * f64::EPSILON;
        if !(close(one_minus_x, derived.one_minus_x)
            && close(one_minus_y, derived.one_minus_y)
            && close(x_minus_y, derived.x_minus_y)
            && close(one_minus_sum, derived.one_minus_sum))
        {
            return domain(format!("offsets inconsistent with point ({x}, {y})"));
        }
        Ok(Self {
            x,
            y,
            one_minus_x,
            one_minus_y,
            x_minus_y,
            one_minus_sum,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn x_minus_y(&self) -> f64 {
        self.x_minus_y
    }
    pub fn one_minus_sum(&self) -> f64 {
        self.one_minus_sum
    }

    pub fn region(&self) -> Region {
        let inside = |v: f64| v > 0.0 && v < 1.0;
        if !(inside(self.x) && inside(self.y)) {
            return Region::OutOfDomain;
        }
        let d = self.x_minus_y;
        let delta = self.one_minus_sum;
        match (d == 0.0, delta == 0.0) {
            (true, true) => Region::CenterP,
            (true, false) if delta > 0.0 => Region::LineAp,
            (true, false) => Region::LinePc,
            (false, true) if d < 0.0 => Region::LineBp,
            (false, true) => Region::LinePd,
            (false, false) => match (delta > 0.0, d < 0.0) {
                (true, true) => Region::Abp,
                (true, false) => Region::Apd,
                (false, true) => Region::Bcp,
                (false, false) => Region::Cdp,
            },
        }
    }
}

/// Classifies `(x, y)` with exact comparisons; no snapping onto the lines.
pub fn classify_region(x: f64, y: f64) -> Region {
    SquarePoint::new(x, y).region()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
        })
    }
}

/// A density value. `value` is `+inf` where the density diverges (on a
/// diagonal line whose beta-function argument is not positive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityValue {
    pub value: f64,
    pub method: Method,
    /// Absolute error estimate; zero for closed forms with no quadrature
    /// and for infinity markers.
    pub error_estimate: f64,
}

impl DensityValue {
    pub fn infinite(method: Method) -> Self {
        Self {
            value: f64::INFINITY,
            method,
            error_estimate: 0.0,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value == f64::INFINITY
    }
}

impl Serialize for DensityValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DensityValue", 3)?;
        if self.is_infinite() {
            s.serialize_field("value", "inf")?;
        } else {
            s.serialize_field("value", &self.value)?;
        }
        s.serialize_field("method", &self.method)?;
        s.serialize_field("error_estimate", &self.error_estimate)?;
        s.end()
    }
}

fn ln_pow(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        0.0
    } else {
        exponent * base.ln()
    }
}

fn ln_norm(alpha: &AlphaBivariate) -> f64 {
    ln_beta_multi(&alpha.to_array()).expect("validated alpha")
}

fn require_inside(pt: &SquarePoint) -> Result<Region> {
    match pt.region() {
        Region::OutOfDomain => domain(format!(
            "({}, {}) is outside the open unit square",
            pt.x, pt.y
        )),
        r => Ok(r),
    }
}

/// Density by quadrature of the defining integral, `Ω` mapped onto (0, 1).
pub fn pdf_quadrature(alpha: &AlphaBivariate, x: f64, y: f64, tol: f64) -> Result<DensityValue> {
    pdf_quadrature_at(alpha, &SquarePoint::new(x, y), tol)
}

pub fn pdf_quadrature_at(
    alpha: &AlphaBivariate,
    pt: &SquarePoint,
    tol: f64,
) -> Result<DensityValue> {
    require_inside(pt)?;
    let [a11, a10, a01, a00] = alpha.to_array();
    let d = pt.x_minus_y;
    let delta = pt.one_minus_sum;

    // Which factors vanish at the ends of Ω.
    let u_at_lower = delta >= 0.0;
    let v_at_lower = delta <= 0.0;
    let xu_at_upper = d <= 0.0;
    let yu_at_upper = d >= 0.0;
    let width = if delta >= 0.0 {
        pt.x.min(pt.y)
    } else {
        pt.one_minus_x.min(pt.one_minus_y)
    };
    let ln_width = width.ln();

    let mut left = 0.0;
    let mut right = 0.0;
    let mut ln_scale = ln_width;
    for (active, exponent, at_left) in [
        (u_at_lower, a11 - 1.0, true),
        (v_at_lower, a00 - 1.0, true),
        (xu_at_upper, a10 - 1.0, false),
        (yu_at_upper, a01 - 1.0, false),
    ] {
        if active {
            if at_left {
                left += exponent;
            } else {
                right += exponent;
            }
            ln_scale += ln_pow(width, exponent);
        }
    }
    if left <= -1.0 || right <= -1.0 {
        return Ok(DensityValue::infinite(Method::Quadrature));
    }

    let smooth = |t: f64, tc: f64| {
        let mut g = 1.0;
        if !u_at_lower {
            g *= (-delta + width * t).powf(a11 - 1.0);
        }
        if !v_at_lower {
            g *= (delta + width * t).powf(a00 - 1.0);
        }
        if !xu_at_upper {
            g *= (d + width * tc).powf(a10 - 1.0);
        }
        if !yu_at_upper {
            g *= (-d + width * tc).powf(a01 - 1.0);
        }
        g
    };
    let spec = IntegrandSpec::new(left, right, smooth)?;
    let r = integrate_unit(&spec, tol)?;
    let scale = (ln_scale - ln_norm(alpha)).exp();
    Ok(DensityValue {
        value: scale * r.value,
        method: Method::Quadrature,
        error_estimate: scale * r.abs_error_estimate,
    })
}

/// Density by the region-matched Appell F1 / Gauss 2F1 closed form.
///
/// On `x = y` the density diverges when `α10 + α01 <= 1`, on `x + y = 1`
/// when `α11 + α00 <= 1`; both return the infinity marker. The centre
/// takes the limiting value along the diagonal,
/// `2^(3-M) B(α11+α00-1, α10+α01-1) / B(α)`.
pub fn pdf_closed_form(alpha: &AlphaBivariate, x: f64, y: f64) -> Result<DensityValue> {
    pdf_closed_form_at(alpha, &SquarePoint::new(x, y), DEFAULT_TOL)
}

pub fn pdf_closed_form_at(
    alpha: &AlphaBivariate,
    pt: &SquarePoint,
    tol: f64,
) -> Result<DensityValue> {
    let region = require_inside(pt)?;
    let [a11, a10, a01, a00] = alpha.to_array();
    let SquarePoint {
        x,
        y,
        one_minus_x: cx,
        one_minus_y: cy,
        x_minus_y: d,
        one_minus_sum: delta,
    } = *pt;
    let ln_b = ln_norm(alpha);
    let f1 = |ln_pre: f64, a, b1, b2, c, z1, z2| {
        appell_f1_integral(a, b1, b2, c, z1, z2, ln_pre - ln_b, tol)
    };
    let f21 = |ln_pre: f64, a, b, c, z| hyp2f1_integral(a, b, c, z, ln_pre - ln_b, tol);
    let diag_ok = a10 + a01 > 1.0;
    let anti_ok = a11 + a00 > 1.0;

    let value = match region {
        Region::Abp => f1(
            ln_pow(x, a11 + a10 - 1.0) + ln_pow(y, a01 - 1.0) + ln_pow(delta, a00 - 1.0),
            a11,
            1.0 - a01,
            1.0 - a00,
            a11 + a10,
            HypArg::with_complement(x / y, -d / y),
            HypArg::new(-x / delta),
        )?,
        Region::Apd => f1(
            ln_pow(x, a10 - 1.0) + ln_pow(y, a11 + a01 - 1.0) + ln_pow(delta, a00 - 1.0),
            a11,
            1.0 - a10,
            1.0 - a00,
            a11 + a01,
            HypArg::with_complement(y / x, d / x),
            HypArg::new(-y / delta),
        )?,
        Region::Bcp => f1(
            ln_pow(cx, a01 - 1.0) + ln_pow(cy, a10 + a00 - 1.0) + ln_pow(-delta, a11 - 1.0),
            a00,
            1.0 - a11,
            1.0 - a01,
            a10 + a00,
            HypArg::new(cy / delta),
            HypArg::with_complement(cy / cx, -d / cx),
        )?,
        Region::Cdp => f1(
            ln_pow(cx, a01 + a00 - 1.0) + ln_pow(cy, a10 - 1.0) + ln_pow(-delta, a11 - 1.0),
            a00,
            1.0 - a11,
            1.0 - a10,
            a01 + a00,
            HypArg::new(cx / delta),
            HypArg::with_complement(cx / cy, d / cy),
        )?,
        Region::LineAp if diag_ok => f21(
            ln_pow(x, a11 + a10 + a01 - 2.0) + ln_pow(delta, a00 - 1.0),
            1.0 - a00,
            a11,
            a11 + a10 + a01 - 1.0,
            HypArg::new(-x / delta),
        )?,
        Region::LinePc if diag_ok => f21(
            ln_pow(cx, a10 + a01 + a00 - 2.0) + ln_pow(-delta, a11 - 1.0),
            1.0 - a11,
            a00,
            a10 + a01 + a00 - 1.0,
            HypArg::new(cx / delta),
        )?,
        Region::LineBp if anti_ok => f21(
            ln_pow(x, a11 + a10 + a00 - 2.0) + ln_pow(y, a01 - 1.0),
            1.0 - a01,
            a11 + a00 - 1.0,
            a11 + a10 + a00 - 1.0,
            HypArg::with_complement(x / y, -d / y),
        )?,
        Region::LinePd if anti_ok => f21(
            ln_pow(x, a10 - 1.0) + ln_pow(y, a11 + a01 + a00 - 2.0),
            1.0 - a10,
            a11 + a00 - 1.0,
            a11 + a01 + a00 - 1.0,
            HypArg::with_complement(y / x, d / x),
        )?,
        Region::CenterP if diag_ok && anti_ok => ((alpha.total() - 3.0) * 0.5f64.ln()
            + ln_beta(a11 + a00 - 1.0, a10 + a01 - 1.0)?
            - ln_b)
            .exp(),
        Region::OutOfDomain => unreachable!("rejected above"),
        _ => return Ok(DensityValue::infinite(Method::ClosedForm)),
    };
    Ok(DensityValue {
        value,
        method: Method::ClosedForm,
        error_estimate: 0.0,
    })
}

/// Closed form where it evaluates, quadrature when its integral does not
/// converge.
pub fn pdf(alpha: &AlphaBivariate, x: f64, y: f64, tol: f64) -> Result<DensityValue> {
    pdf_at(alpha, &SquarePoint::new(x, y), tol)
}

pub fn pdf_at(alpha: &AlphaBivariate, pt: &SquarePoint, tol: f64) -> Result<DensityValue> {
    match pdf_closed_form_at(alpha, pt, tol) {
        Err(Error::Convergence { .. }) => pdf_quadrature_at(alpha, pt, tol),
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    pub density: DensityValue,
}

/// Density on the cell centres `((i+1/2)/R, (j+1/2)/R)`, `x` varying
/// slowest.
pub fn pdf_grid(alpha: &AlphaBivariate, resolution: usize) -> Result<Vec<GridPoint>> {
    pdf_grid_with_tol(alpha, resolution, DEFAULT_TOL)
}

pub fn pdf_grid_with_tol(
    alpha: &AlphaBivariate,
    resolution: usize,
    tol: f64,
) -> Result<Vec<GridPoint>> {
    if resolution < 2 {
        return domain(format!("grid resolution {resolution} must be at least 2"));
    }
    let r = resolution as f64;
    let mut out = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        let x = (i as f64 + 0.5) / r;
        for j in 0..resolution {
            let y = (j as f64 + 0.5) / r;
            out.push(GridPoint {
                x,
                y,
                density: pdf(alpha, x, y, tol)?,
            });
        }
    }
    Ok(out)
}
