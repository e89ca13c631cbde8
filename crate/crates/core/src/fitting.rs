//! Method-of-moments estimation of `α` from data or from target moments.
//!
//! Minimizes `L(α) = |m - μ(α)|²` subject to `α > 0` and
//! `Σα < max(m10(1-m10)/m20 - 1, m01(1-m01)/m02 - 1)`.
//!
//! The search runs Nelder-Mead on `ln α`. Points whose sum exceeds the
//! bound are scaled back onto it before `L` is evaluated, and a smooth
//! quadratic penalty in the log of the excess keeps the simplex from
//! drifting along the flat outward direction. Every returned estimate is
//! therefore feasible.

use serde::Serialize;

use crate::construction::{AlphaBivariate, BivariateSample, RandomStream};
use crate::error::{domain, Error, Result};
use crate::moments::{central_moment, moment_vector, MomentVector};
use crate::simplex::{self, Settings};

/// Smallest component produced by [`initial_guess`].
pub const MIN_INITIAL_COMPONENT: f64 = 1e-6;
/// Relative margin keeping `Σα` strictly below the sum bound.
const SUM_MARGIN: f64 = 1e-10;
const PENALTY_WEIGHT: f64 = 1.0;
const POLISH_PASSES: usize = 6;

/// How residuals are combined into the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// Plain sum of squared residuals.
    #[default]
    Unweighted,
    /// Second-order residuals divided by `sqrt(m20 m02)`, third-order ones
    /// by `(m20 m02)^(3/4)`; means unscaled.
    Standardized,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub restarts: usize,
    /// Objective evaluations allowed per local search.
    pub max_iterations: usize,
    pub objective_tolerance: f64,
    pub seed: u64,
    pub weighting: Weighting,
    /// Also match `μ30, μ03, μ21, μ12`.
    pub third_order: bool,
    /// Restarts after the first start at `exp(±jitter)` times the initial guess.
    pub jitter: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iterations: 20_000,
            objective_tolerance: 1e-18,
            seed: 0,
            weighting: Weighting::Unweighted,
            third_order: false,
            jitter: 0.3,
        }
    }
}

impl FitOptions {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 {
            return domain("restarts and max_iterations must be positive");
        }
        if !(self.objective_tolerance > 0.0) || !(self.jitter >= 0.0) {
            return domain("objective_tolerance must be positive and jitter non-negative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    #[serde(flatten)]
    pub alpha_star: AlphaBivariate,
    /// Objective at `alpha_star`, without the constraint penalty.
    pub objective_value: f64,
    pub converged: bool,
    pub restarts_used: usize,
    pub evaluations: usize,
}

/// Sample third central moments `(m30, m03, m21, m12)`.
pub type ThirdMoments = [f64; 4];

/// Moment targets for a fit: the five basic moments, optionally with the
/// third-order ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentTargets {
    pub base: MomentVector,
    pub third: Option<ThirdMoments>,
}

fn check_data(data: &[BivariateSample]) -> Result<()> {
    if data.len() < 3 {
        return Err(Error::DegenerateData(format!(
            "need at least 3 points, got {}",
            data.len()
        )));
    }
    if let Some(p) = data
        .iter()
        .find(|p| !(p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0))
    {
        return domain(format!(
            "data point ({}, {}) outside the unit square",
            p.x, p.y
        ));
    }
    Ok(())
}

fn means(data: &[BivariateSample]) -> (f64, f64) {
    let n = data.len() as f64;
    let (sx, sy) = data.iter().fold((0.0, 0.0), |(a, b), p| (a + p.x, b + p.y));
    (sx / n, sy / n)
}

/// Sample means and central moments with divisor `N`.
pub fn sample_central_moments(data: &[BivariateSample]) -> Result<MomentVector> {
    check_data(data)?;
    let n = data.len() as f64;
    let (mx, my) = means(data);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in data {
        let dx = p.x - mx;
        let dy = p.y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateData(
            "a coordinate has zero variance".into(),
        ));
    }
    Ok(MomentVector {
        m10: mx,
        m01: my,
        m20: sxx / n,
        m02: syy / n,
        m11: sxy / n,
    })
}

/// Sample `(m30, m03, m21, m12)`, divisor `N`.
pub fn sample_third_moments(data: &[BivariateSample]) -> Result<ThirdMoments> {
    check_data(data)?;
    let n = data.len() as f64;
    let (mx, my) = means(data);
    let mut acc = [0.0; 4];
    for p in data {
        let dx = p.x - mx;
        let dy = p.y - my;
        acc[0] += dx * dx * dx;
        acc[1] += dy * dy * dy;
        acc[2] += dx * dx * dy;
        acc[3] += dx * dy * dy;
    }
    Ok(acc.map(|v| v / n))
}

fn marginal_sum(mean: f64, var: f64) -> f64 {
    mean * (1.0 - mean) / var - 1.0
}

/// Upper bound on `Σα` implied by the two beta marginals, taken as the
/// larger of the two marginal estimates.
pub fn alpha_sum_bound(m: &MomentVector) -> Result<f64> {
    m.validate()?;
    if m.m20 >= m.m10 * (1.0 - m.m10) || m.m02 >= m.m01 * (1.0 - m.m01) {
        return Err(Error::InfeasibleMoments(format!(
            "variance ({}, {}) too large for means ({}, {})",
            m.m20, m.m02, m.m10, m.m01
        )));
    }
    Ok(marginal_sum(m.m10, m.m20).max(marginal_sum(m.m01, m.m02)))
}

/// Unweighted squared distance between `m` and the moments of `alpha`.
pub fn objective(alpha: &AlphaBivariate, m: &MomentVector) -> f64 {
    let mu = moment_vector(alpha).to_array();
    m.to_array()
        .iter()
        .zip(mu)
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}

/// Closed-form start: average the two marginal estimates of `M`, then
/// solve the mean and covariance equations for the components.
pub fn initial_guess(m: &MomentVector) -> Result<AlphaBivariate> {
    alpha_sum_bound(m)?;
    let total = 0.5 * (marginal_sum(m.m10, m.m20) + marginal_sum(m.m01, m.m02));
    let a11 = total * m.m10 * m.m01 + m.m11 * total * (total + 1.0);
    let a10 = total * m.m10 - a11;
    let a01 = total * m.m01 - a11;
    let a00 = total - a11 - a10 - a01;
    let clip = |v: f64| v.max(MIN_INITIAL_COMPONENT);
    AlphaBivariate::new(clip(a11), clip(a10), clip(a01), clip(a00))
}

struct Problem {
    targets: Vec<f64>,
    weights: Vec<f64>,
    third_order: bool,
    cap: f64,
}

impl Problem {
    fn new(t: &MomentTargets, weighting: Weighting, third_order: bool) -> Result<Self> {
        let bound = alpha_sum_bound(&t.base)?;
        let mut targets = t.base.to_array().to_vec();
        let scale2 = (t.base.m20 * t.base.m02).sqrt();
        let mut weights = match weighting {
            Weighting::Unweighted => vec![1.0; 5],
            Weighting::Standardized => vec![1.0, 1.0, 1.0 / scale2, 1.0 / scale2, 1.0 / scale2],
        };
        if third_order {
            let third = t
                .third
                .ok_or_else(|| Error::Domain("third-order fit needs third moments".into()))?;
            if third.iter().any(|v| !v.is_finite()) {
                return domain("third moments must be finite");
            }
            targets.extend_from_slice(&third);
            let w3 = match weighting {
                Weighting::Unweighted => 1.0,
                Weighting::Standardized => scale2.powf(-1.5),
            };
            weights.extend_from_slice(&[w3; 4]);
        }
        Ok(Self {
            targets,
            weights,
            third_order,
            cap: bound * (1.0 - SUM_MARGIN),
        })
    }

    fn loss(&self, alpha: &AlphaBivariate) -> f64 {
        let mut model = moment_vector(alpha).to_array().to_vec();
        if self.third_order {
            model
                .extend([(3, 0), (0, 3), (2, 1), (1, 2)].map(|(r, s)| central_moment(alpha, r, s)));
        }
        self.targets
            .iter()
            .zip(&model)
            .zip(&self.weights)
            .map(|((t, m), w)| {
                let r = (t - m) * w;
                r * r
            })
            .sum()
    }

    /// Feasible point for log-parameters, and the penalty for any excess.
    fn project(&self, theta: &[f64]) -> (AlphaBivariate, f64) {
        let raw: Vec<f64> = theta.iter().map(|v| v.exp()).collect();
        let sum: f64 = raw.iter().sum();
        let (scale, penalty) = if sum > self.cap {
            let excess = (sum / self.cap).ln();
            (self.cap / sum, PENALTY_WEIGHT * excess * excess)
        } else {
            (1.0, 0.0)
        };
        // exp can under/overflow for wild simplex moves; clamp to a valid alpha.
        let comp = |v: f64| (v * scale).clamp(f64::MIN_POSITIVE, f64::MAX / 8.0);
        let alpha = AlphaBivariate::new(comp(raw[0]), comp(raw[1]), comp(raw[2]), comp(raw[3]))
            .expect("clamped components are positive");
        (alpha, penalty)
    }

    fn project_alpha(&self, alpha: &AlphaBivariate) -> AlphaBivariate {
        let theta: Vec<f64> = alpha.to_array().iter().map(|v| v.ln()).collect();
        self.project(&theta).0
    }
}

struct LocalRun {
    alpha: AlphaBivariate,
    loss: f64,
    converged: bool,
    evaluations: usize,
}

fn local_search(problem: &Problem, start: &AlphaBivariate, opts: &FitOptions) -> LocalRun {
    let penalized = |theta: &[f64]| {
        let (alpha, penalty) = problem.project(theta);
        problem.loss(&alpha) + penalty
    };
    let mut theta: Vec<f64> = start.to_array().iter().map(|v| v.ln()).collect();
    let mut best = penalized(&theta);
    let mut evaluations = 1;
    let mut converged = false;
    let mut step = 0.2;
    for _ in 0..POLISH_PASSES {
        let settings = Settings {
            initial_step: step,
            max_evaluations: opts.max_iterations,
            value_tol: opts.objective_tolerance,
            point_tol: 1e-10,
        };
        let out = simplex::minimize(penalized, &theta, &settings);
        evaluations += out.evaluations;
        let improvement = best - out.value;
        if out.value < best {
            best = out.value;
            theta = out.x;
        }
        converged = out.converged && improvement <= opts.objective_tolerance;
        if converged {
            break;
        }
        step = (step * 0.5).max(1e-3);
    }
    let (alpha, _) = problem.project(&theta);
    LocalRun {
        loss: problem.loss(&alpha),
        alpha,
        converged,
        evaluations,
    }
}

fn fit_problem(problem: &Problem, start: AlphaBivariate, opts: &FitOptions) -> Result<FitResult> {
    let start = problem.project_alpha(&start);
    let mut stream = RandomStream::new(opts.seed);
    let mut best = LocalRun {
        loss: problem.loss(&start),
        alpha: start,
        converged: false,
        evaluations: 1,
    };
    let mut evaluations = 1;
    for restart in 0..opts.restarts {
        let from = if restart == 0 {
            start
        } else {
            let arr = start.to_array().map(|v| {
                let u = 2.0 * stream.uniform_open() - 1.0;
                v * (opts.jitter * u).exp()
            });
            AlphaBivariate::from_array(arr)?
        };
        let run = local_search(problem, &from, opts);
        evaluations += run.evaluations;
        if run.loss < best.loss || (run.loss == best.loss && run.converged) {
            best = run;
        }
    }
    Ok(FitResult {
        alpha_star: best.alpha,
        objective_value: best.loss,
        converged: best.converged,
        restarts_used: opts.restarts,
        evaluations,
    })
}

/// Fits `α` to the five moments in `m`.
pub fn fit_moments(m: &MomentVector, opts: &FitOptions) -> Result<FitResult> {
    fit_targets(
        &MomentTargets {
            base: *m,
            third: None,
        },
        opts,
    )
}

/// Fits `α` to `targets`; third-order targets are used when
/// `opts.third_order` is set.
pub fn fit_targets(targets: &MomentTargets, opts: &FitOptions) -> Result<FitResult> {
    opts.validate()?;
    let problem = Problem::new(targets, opts.weighting, opts.third_order)?;
    let start = initial_guess(&targets.base)?;
    fit_problem(&problem, start, opts)
}

/// Sample moments of `data` followed by [`fit_targets`].
pub fn fit_data(data: &[BivariateSample], opts: &FitOptions) -> Result<FitResult> {
    let base = sample_central_moments(data)?;
    let third = if opts.third_order {
        Some(sample_third_moments(data)?)
    } else {
        None
    };
    fit_targets(&MomentTargets { base, third }, opts)
}
