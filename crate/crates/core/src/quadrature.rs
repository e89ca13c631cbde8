//! Double-exponential (tanh-sinh) integration over the unit interval for
//! integrands of the form `t^p (1-t)^q g(t)` with `p, q > -1`.
//!
//! The endpoint powers are handled analytically: with
//! `t = 1 / (1 + exp(-pi sinh s))` both `ln t` and `ln(1-t)` are available
//! without cancellation, so the weighted power `t^(p+1) (1-t)^(q+1)` is
//! formed in log space and never overflows, even for exponents close to -1.
//! The smooth factor receives `(t, 1-t)` with the complement computed
//! directly, which keeps factors such as `1 - z t` accurate for `z` near 1.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

/// Finest step is `2^-MAX_LEVEL`.
pub const MAX_LEVEL: usize = 10;
/// Maximum number of integrand evaluations at any one refinement level.
pub const NODE_BUDGET_PER_LEVEL: usize = 1 << 14;
/// Largest abscissa `s` in the transformed variable.
const S_CAP: f64 = 13.0;
/// Tails are dropped once the endpoint power has decayed below
/// `exp(-TAIL_DECAY)`, i.e. where the weight underflows. Nearly singular
/// smooth factors (`1/(eps + 1 - t)`) make shorter tails unsafe.
const TAIL_DECAY: f64 = 740.0;
/// Refinement levels always computed before convergence is tested.
const MIN_LEVEL: usize = 3;

/// Integral estimate returned by [`integrate_unit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Difference between the last two refinement levels.
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Integrand `t^left (1-t)^right * smooth(t, 1-t)` on `(0, 1)`.
///
/// `smooth` is called with the abscissa and its complement; it must be
/// finite on the open interval.
pub struct IntegrandSpec<F> {
    left_exponent: f64,
    right_exponent: f64,
    smooth: F,
}

impl<F: Fn(f64, f64) -> f64> IntegrandSpec<F> {
    pub fn new(left_exponent: f64, right_exponent: f64, smooth: F) -> Result<Self> {
        if !(left_exponent > -1.0 && left_exponent.is_finite()) {
            return domain(format!(
                "left endpoint exponent {left_exponent} must exceed -1"
            ));
        }
        if !(right_exponent > -1.0 && right_exponent.is_finite()) {
            return domain(format!(
                "right endpoint exponent {right_exponent} must exceed -1"
            ));
        }
        Ok(Self {
            left_exponent,
            right_exponent,
            smooth,
        })
    }

    pub fn left_exponent(&self) -> f64 {
        self.left_exponent
    }

    pub fn right_exponent(&self) -> f64 {
        self.right_exponent
    }
}

struct Node {
    /// `ln(1-t)` at `+s`, equivalently `ln t` at `-s`.
    ln_small: f64,
    small: f64,
    ln_big: f64,
    big: f64,
    /// `pi cosh s`
    jacobian: f64,
}

fn node_table() -> &'static [Node] {
    static TABLE: OnceLock<Vec<Node>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let h = (-(MAX_LEVEL as f64)).exp2();
        let count = (S_CAP / h) as usize;
        (0..=count)
            .map(|j| {
                let s = j as f64 * h;
                let u = PI * s.sinh();
                // ln(1 / (1 + e^u)) = -softplus(u)
                let ln_small = -(u + (-u).exp().ln_1p());
                let small = ln_small.exp();
                let ln_big = (-small).ln_1p();
                Node {
                    ln_small,
                    small,
                    ln_big,
                    big: 1.0 - small,
                    jacobian: PI * s.cosh(),
                }
            })
            .collect()
    })
}

fn side_limit(exponent: f64) -> f64 {
    let target = TAIL_DECAY / (PI * (exponent + 1.0));
    target.asinh().min(S_CAP)
}

/// Integrates `spec` over `(0, 1)` by successive halving of the
/// tanh-sinh step until two levels agree to `tol` relative.
///
/// The returned `abs_error_estimate` is at most `tol * |value|`. When the
/// budget of [`MAX_LEVEL`] halvings (or [`NODE_BUDGET_PER_LEVEL`] nodes)
/// runs out, [`Error::Convergence`] carries the best estimate.
pub fn integrate_unit<F: Fn(f64, f64) -> f64>(
    spec: &IntegrandSpec<F>,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return domain(format!("tolerance {tol} must be positive"));
    }
    let table = node_table();
    let p1 = spec.left_exponent + 1.0;
    let q1 = spec.right_exponent + 1.0;
    let step = |level: usize| 1usize << (MAX_LEVEL - level);
    let h_min = (-(MAX_LEVEL as f64)).exp2();
    let left_max = ((side_limit(spec.left_exponent) / h_min) as usize).min(table.len() - 1);
    let right_max = ((side_limit(spec.right_exponent) / h_min) as usize).min(table.len() - 1);

    let mut evaluations = 0usize;
    let mut bad_value: Option<(f64, f64)> = None;
    let mut term = |t: f64, tc: f64, ln_weight: f64, jacobian: f64| -> f64 {
        let w = ln_weight.exp() * jacobian;
        if w == 0.0 {
            return 0.0;
        }
        evaluations += 1;
        let g = (spec.smooth)(t, tc);
        if !g.is_finite() && bad_value.is_none() {
            bad_value = Some((t, g));
        }
        w * g
    };

    let far = left_max.max(right_max);
    let mut estimate = 0.0;
    let mut error = f64::INFINITY;
    let mut converged = false;
    for level in 0..=MAX_LEVEL {
        let h = (-(level as f64)).exp2();
        let st = step(level);
        // level 0 visits every multiple of its step, later levels only the new odd ones
        let (start, stride) = if level == 0 { (0, st) } else { (st, 2 * st) };
        let mut sum = 0.0;
        let mut nodes = 0usize;
        let mut j = start;
        while j <= far {
            let n = &table[j];
            if j == 0 {
                let ln_half = 0.5f64.ln();
                sum += term(0.5, 0.5, (p1 + q1) * ln_half, n.jacobian);
                nodes += 1;
            } else {
                if j <= right_max {
                    sum += term(n.big, n.small, p1 * n.ln_big + q1 * n.ln_small, n.jacobian);
                    nodes += 1;
                }
                if j <= left_max {
                    sum += term(n.small, n.big, p1 * n.ln_small + q1 * n.ln_big, n.jacobian);
                    nodes += 1;
                }
            }
            j += stride;
        }
        if nodes > NODE_BUDGET_PER_LEVEL {
            break;
        }
        let next = if level == 0 {
            h * sum
        } else {
            0.5 * estimate + h * sum
        };
        if level > 0 {
            error = (next - estimate).abs();
        }
        estimate = next;
        if level >= MIN_LEVEL && (error <= tol * estimate.abs() || error == 0.0) {
            converged = true;
            break;
        }
    }
    if let Some((t, g)) = bad_value {
        return domain(format!("integrand evaluated to {g} at t = {t}"));
    }
    if converged {
        return Ok(QuadratureResult {
            value: estimate,
            abs_error_estimate: error,
            evaluations,
        });
    }
    Err(Error::Convergence {
        estimate,
        error_estimate: error,
        evaluations,
    })
}
