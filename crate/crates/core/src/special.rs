//! Log-gamma, multivariate log-beta, and the Gauss 2F1 / Appell F1
//! hypergeometric functions through their Euler integral representations.
//!
//! Both hypergeometric functions are evaluated only by quadrature:
//!
//! ```text
//! 2F1(a, b; c; z)          = B(b, c-b)^-1 ∫ t^(b-1) (1-t)^(c-b-1) (1-zt)^(-a) dt
//! F1(a; b1, b2; c; z1, z2) = B(a, c-a)^-1 ∫ t^(a-1) (1-t)^(c-a-1) (1-z1 t)^(-b1) (1-z2 t)^(-b2) dt
//! ```
//!
//! which is valid for every real `z < 1`, including large negative
//! arguments. Note the `(1-t)^(c-b-1)` exponent; a printed `(1-t)^(b-c-1)`
//! does not normalize against the `B(b, c-b)` prefactor.

use crate::error::{domain, Result};
use crate::quadrature::{integrate_unit, IntegrandSpec};

/// Relative tolerance for [`hyp2f1`].
pub const HYP2F1_TOL: f64 = 1e-10;
/// Relative tolerance for [`appell_f1`].
pub const APPELL_F1_TOL: f64 = 1e-9;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!(
            "ln_gamma requires a positive finite argument, got {x}"
        ));
    }
    Ok(libm::lgamma(x))
}

/// `ln B(a1, ..., ak) = Σ ln Γ(ai) - ln Γ(Σ ai)`.
pub fn ln_beta_multi(alphas: &[f64]) -> Result<f64> {
    if alphas.len() < 2 {
        return domain("ln_beta_multi needs at least two arguments");
    }
    let mut acc = 0.0;
    let mut total = 0.0;
    for &a in alphas {
        if !(a > 0.0) || !a.is_finite() {
            return domain(format!("beta function argument {a} must be positive"));
        }
        acc += libm::lgamma(a);
        total += a;
    }
    Ok(acc - ln_gamma(total)?)
}

pub(crate) fn ln_beta(a: f64, b: f64) -> Result<f64> {
    ln_beta_multi(&[a, b])
}

/// Argument of a hypergeometric function together with `1 - z`.
///
/// Callers that know `1 - z` more accurately than by subtraction (a point
/// close to a line of the unit square, say) pass it in here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypArg {
    pub z: f64,
    pub one_minus_z: f64,
}

impl HypArg {
    pub fn new(z: f64) -> Self {
        Self {
            z,
            one_minus_z: 1.0 - z,
        }
    }

    pub fn with_complement(z: f64, one_minus_z: f64) -> Self {
        Self { z, one_minus_z }
    }

    /// The complement decides: `z` itself may have rounded to 1.
    fn check(&self, name: &str) -> Result<()> {
        if !self.z.is_finite() || !(self.z <= 1.0) || !(self.one_minus_z > 0.0) {
            return domain(format!("{name} = {} must be finite and below 1", self.z));
        }
        Ok(())
    }

    /// `1 - z t`, accurate near `t = 1` when `z` is close to 1.
    #[inline]
    fn linear(&self, t: f64, tc: f64) -> f64 {
        if self.z > 0.0 {
            self.one_minus_z + self.z * tc
        } else {
            1.0 - self.z * t
        }
    }
}

#[inline]
fn pow_factor(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        1.0
    } else {
        base.powf(exponent)
    }
}

/// Gauss hypergeometric function for `c > b > 0` and `z < 1`.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    hyp2f1_arg(a, b, c, HypArg::new(z), HYP2F1_TOL)
}

pub fn hyp2f1_arg(a: f64, b: f64, c: f64, z: HypArg, tol: f64) -> Result<f64> {
    if !a.is_finite() || !(b > 0.0) || !(c > b) || !c.is_finite() {
        return domain(format!("hyp2f1 requires c > b > 0, got b = {b}, c = {c}"));
    }
    z.check("z")?;
    if z.z == 0.0 || a == 0.0 {
        return Ok(1.0);
    }
    let spec = IntegrandSpec::new(b - 1.0, c - b - 1.0, |t, tc| {
        pow_factor(z.linear(t, tc), -a)
    })?;
    let integral = integrate_unit(&spec, tol)?;
    Ok(integral.value * (-ln_beta(b, c - b)?).exp())
}

/// Appell F1 for `c > a > 0` and `z1, z2 < 1`.
pub fn appell_f1(a: f64, b1: f64, b2: f64, c: f64, z1: f64, z2: f64) -> Result<f64> {
    appell_f1_arg(
        a,
        b1,
        b2,
        c,
        HypArg::new(z1),
        HypArg::new(z2),
        APPELL_F1_TOL,
    )
}

pub fn appell_f1_arg(
    a: f64,
    b1: f64,
    b2: f64,
    c: f64,
    z1: HypArg,
    z2: HypArg,
    tol: f64,
) -> Result<f64> {
    appell_f1_integral(a, b1, b2, c, z1, z2, -ln_beta(a, c - a)?, tol)
}

/// The bare Euler integral `B(a, c-a) F1(...)`, without the beta prefactor.
/// `exp(ln_scale) B(a, c-a) F1(a; b1, b2; c; z1, z2)`, the bare integral
/// times a scale folded into the integrand. Folding keeps huge `|z|`
/// paired with a tiny prefactor from overflowing.
#[allow(clippy::too_many_arguments)]
pub(crate) fn appell_f1_integral(
    a: f64,
    b1: f64,
    b2: f64,
    c: f64,
    z1: HypArg,
    z2: HypArg,
    ln_scale: f64,
    tol: f64,
) -> Result<f64> {
    if !(a > 0.0) || !(c > a) || !c.is_finite() {
        return domain(format!(
            "appell_f1 requires c > a > 0, got a = {a}, c = {c}"
        ));
    }
    if !b1.is_finite() || !b2.is_finite() {
        return domain("appell_f1 exponents must be finite");
    }
    z1.check("z1")?;
    z2.check("z2")?;
    let b1 = if z1.z == 0.0 { 0.0 } else { b1 };
    let b2 = if z2.z == 0.0 { 0.0 } else { b2 };
    if b1 == 0.0 && b2 == 0.0 {
        return Ok((ln_scale + ln_beta(a, c - a)?).exp());
    }
    let spec = IntegrandSpec::new(a - 1.0, c - a - 1.0, |t, tc| {
        let mut ln_g = ln_scale;
        if b1 != 0.0 {
            ln_g -= b1 * z1.linear(t, tc).ln();
        }
        if b2 != 0.0 {
            ln_g -= b2 * z2.linear(t, tc).ln();
        }
        ln_g.exp()
    })?;
    Ok(integrate_unit(&spec, tol)?.value)
}

/// `exp(ln_scale) B(b, c-b) 2F1(a, b; c; z)`.
pub(crate) fn hyp2f1_integral(
    a: f64,
    b: f64,
    c: f64,
    z: HypArg,
    ln_scale: f64,
    tol: f64,
) -> Result<f64> {
    appell_f1_integral(b, a, 0.0, c, z, HypArg::new(0.0), ln_scale, tol)
}
