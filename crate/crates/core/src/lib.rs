//! The bivariate beta distribution built from a four-component Dirichlet
//! vector `(U11, U10, U01, U00)` through `X = U11 + U10`, `Y = U11 + U01`.
//!
//! The crate covers sampling (including the trivariate extension), density
//! evaluation by quadrature and by Appell F1 / Gauss 2F1 closed forms,
//! exact moments and correlation, moment-matching parameter fits, and a
//! handful of older constructions used as baselines.

// `!(v > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod cli;
pub mod construction;
pub mod density;
pub mod error;
pub mod fitting;
pub mod moments;
pub mod quadrature;
mod simplex;
pub mod special;

pub use construction::{
    sample_bivariate, sample_dirichlet, sample_gamma, sample_trivariate, AlphaBivariate,
    AlphaTrivariate, BivariateSample, RandomStream, TrivariateSample,
};
pub use density::{
    classify_region, pdf, pdf_at, pdf_closed_form, pdf_closed_form_at, pdf_grid, pdf_grid_with_tol,
    pdf_quadrature, pdf_quadrature_at, DensityValue, GridPoint, Method, Region, SquarePoint,
};
pub use error::{Error, Result};
pub use fitting::{
    alpha_sum_bound, fit_data, fit_moments, initial_guess, objective, sample_central_moments,
    FitOptions, FitResult, Weighting,
};
pub use moments::{
    central_moment, correlation, correlation_table, mixed_moment, moment_vector, MomentVector,
};
pub use quadrature::{integrate_unit, IntegrandSpec, QuadratureResult};
pub use special::{appell_f1, hyp2f1, ln_beta_multi, ln_gamma};
