//! Command-line frontend. `bivbeta <subcommand>`; see `--help`.
//!
//! Exit codes: 0 success, 2 usage, 3 domain error (including degenerate
//! data), 4 infeasible moments, 5 non-convergence. A fit that does not
//! converge still writes its result before exiting with 5.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::baselines::{
    pdf_libby_novick, pdf_three_param, sample_arnold, sample_libby_novick, ArnoldParams,
    LibbyNovickParams,
};
use crate::construction::{
    sample_bivariate, sample_trivariate, AlphaBivariate, AlphaTrivariate, BivariateSample,
    RandomStream,
};
use crate::density::{
    pdf_at, pdf_closed_form_at, pdf_grid_with_tol, pdf_quadrature_at, DensityValue, SquarePoint,
    DEFAULT_RESOLUTION, DEFAULT_TOL,
};
use crate::error::Error;
use crate::fitting::{fit_data, fit_moments, FitOptions, Weighting};
use crate::moments::{correlation, correlation_table, moment_vector, MomentVector, TABLE_COLUMNS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;
pub const EXIT_NON_CONVERGENCE: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "bivbeta",
    version,
    about = "Dirichlet-constructed bivariate beta distribution"
)]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PdfMethod {
    Auto,
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    LibbyNovick,
    ThreeParam,
    Arnold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightingArg {
    Unweighted,
    Standardized,
}

/// Raw parameter values. Only the arity is checked while parsing, so that
/// out-of-domain values surface as domain errors rather than usage errors.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaArg {
    Bivariate([f64; 4]),
    Trivariate([f64; 8]),
}

fn parse_alpha(s: &str) -> Result<AlphaArg, String> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| format!("bad number in '{s}': {e}"))?;
    if let Ok(a) = <[f64; 4]>::try_from(v.as_slice()) {
        Ok(AlphaArg::Bivariate(a))
    } else if let Ok(a) = <[f64; 8]>::try_from(v.as_slice()) {
        Ok(AlphaArg::Trivariate(a))
    } else {
        Err(format!(
            "expected 4 or 8 comma-separated values, got {}",
            v.len()
        ))
    }
}

/// Comma-separated reals taken as a single argument.
#[derive(Debug, Clone, PartialEq)]
pub struct RealList(pub Vec<f64>);

fn parse_list(s: &str) -> Result<RealList, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(RealList)
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    match parse_list(s)?.0.as_slice() {
        [x, y] => Ok((*x, *y)),
        v => Err(format!("expected x,y, got {} values", v.len())),
    }
}

#[derive(Debug, Args)]
pub struct AlphaOpt {
    /// Parameters a11,a10,a01,a00 (or the 8 trivariate shares
    /// a111,a110,a101,a011,a100,a010,a001,a000).
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true)]
    pub alpha: AlphaArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw samples as CSV.
    Sample {
        #[command(flatten)]
        alpha: AlphaOpt,
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Density at one point.
    Pdf {
        #[command(flatten)]
        alpha: AlphaOpt,
        /// x,y
        #[arg(long, value_parser = parse_pair)]
        point: (f64, f64),
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value = "auto")]
        method: PdfMethod,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Density on the cell centres of an R x R grid, as CSV.
    Grid {
        #[command(flatten)]
        alpha: AlphaOpt,
        #[arg(long, short, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Means, variances and covariance.
    Moments {
        #[command(flatten)]
        alpha: AlphaOpt,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Correlation of X and Y (pairwise for trivariate parameters).
    Corr {
        #[command(flatten)]
        alpha: AlphaOpt,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Correlation table over the standard parameter grid.
    Table {
        /// Round values to this many decimals.
        #[arg(long)]
        decimals: Option<usize>,
    },
    /// Fit parameters by matching moments.
    Fit {
        /// CSV with columns x,y ("-" reads stdin).
        #[arg(long, conflicts_with = "moments", required_unless_present = "moments")]
        input: Option<PathBuf>,
        /// Target moments m10,m01,m20,m02,m11 instead of data.
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        moments: Option<RealList>,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 20_000)]
        max_iterations: usize,
        #[arg(long, default_value_t = 1e-18)]
        objective_tolerance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "unweighted")]
        weighting: WeightingArg,
        /// Also match third-order central moments (data input only).
        #[arg(long)]
        third_order: bool,
    },
    /// Samples or densities of the comparison constructions.
    Baseline {
        #[arg(long, value_enum)]
        family: Family,
        /// libby-novick / three-param: a0,a1,a2; arnold: a1,...,a5.
        #[arg(long, value_parser = parse_list)]
        shapes: RealList,
        /// libby-novick rates b0,b1,b2 (default 1,1,1).
        #[arg(long, value_parser = parse_list)]
        rates: Option<RealList>,
        /// Evaluate the density at x,y instead of sampling.
        #[arg(long, value_parser = parse_pair, conflicts_with = "n")]
        point: Option<(f64, f64)>,
        #[arg(short, long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(io::Error),
    Lib(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Lib(Error::Domain(_) | Error::DegenerateData(_)) => EXIT_DOMAIN,
            CliError::Lib(Error::InfeasibleMoments(_)) => EXIT_INFEASIBLE,
            CliError::Lib(Error::Convergence { .. }) => EXIT_NON_CONVERGENCE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// Decimal rendering with 17 significant digits; `inf` for infinities.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let exponent = v.abs().log10().floor() as i32;
    if (-5..17).contains(&exponent) {
        format!("{:.*}", (16 - exponent) as usize, v)
    } else {
        format!("{v:.16e}")
    }
}

fn density_json(d: &DensityValue, x: f64, y: f64) -> serde_json::Value {
    let mut v = serde_json::to_value(d).expect("density serializes");
    v["x"] = json!(x);
    v["y"] = json!(y);
    v
}

fn bivariate(alpha: &AlphaArg) -> Result<AlphaBivariate, CliError> {
    match alpha {
        AlphaArg::Bivariate(a) => Ok(AlphaBivariate::from_array(*a)?),
        AlphaArg::Trivariate(_) => usage("this subcommand needs 4 parameters a11,a10,a01,a00"),
    }
}

fn write_samples(out: &mut String, samples: &[BivariateSample], format: Format) {
    match format {
        Format::Csv => {
            out.push_str("x,y\n");
            for s in samples {
                let _ = writeln!(out, "{},{}", format_real(s.x), format_real(s.y));
            }
        }
        Format::Json => {
            out.push_str(&serde_json::to_string(samples).expect("samples serialize"));
            out.push('\n');
        }
    }
}

#[derive(Deserialize)]
struct Row {
    x: f64,
    y: f64,
}

fn read_points(path: &PathBuf) -> Result<Vec<BivariateSample>, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)?;
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    reader
        .deserialize::<Row>()
        .map(|r| {
            r.map(|r| BivariateSample { x: r.x, y: r.y })
                .map_err(|e| CliError::Usage(format!("bad input row: {e}")))
        })
        .collect()
}

/// Runs one command, writing the artifact to `out`. Returns the exit code
/// for successful runs (0, or 5 for a fit that did not converge).
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut buf = String::new();
    let mut code = EXIT_OK;
    match &cli.command {
        Command::Sample {
            alpha,
            n,
            seed,
            format,
        } => {
            let mut stream = RandomStream::new(*seed);
            match &alpha.alpha {
                AlphaArg::Bivariate(a) => {
                    let a = AlphaBivariate::from_array(*a)?;
                    write_samples(&mut buf, &sample_bivariate(&a, *n, &mut stream), *format);
                }
                AlphaArg::Trivariate(a) => {
                    let draws = sample_trivariate(&AlphaTrivariate::new(*a)?, *n, &mut stream);
                    match format {
                        Format::Csv => {
                            buf.push_str("x,y,z\n");
                            for s in &draws {
                                let _ = writeln!(
                                    buf,
                                    "{},{},{}",
                                    format_real(s.x),
                                    format_real(s.y),
                                    format_real(s.z)
                                );
                            }
                        }
                        Format::Json => {
                            buf.push_str(&serde_json::to_string(&draws).expect("serialize"));
                            buf.push('\n');
                        }
                    }
                }
            }
        }
        Command::Pdf {
            alpha,
            point: (x, y),
            tol,
            method,
            format,
        } => {
            let a = &bivariate(&alpha.alpha)?;
            let pt = SquarePoint::new(*x, *y);
            let d = match method {
                PdfMethod::Auto => pdf_at(a, &pt, *tol)?,
                PdfMethod::ClosedForm => pdf_closed_form_at(a, &pt, *tol)?,
                PdfMethod::Quadrature => pdf_quadrature_at(a, &pt, *tol)?,
            };
            match format {
                Format::Csv => {
                    let _ = writeln!(buf, "{}", format_real(d.value));
                }
                Format::Json => {
                    let _ = writeln!(buf, "{}", density_json(&d, *x, *y));
                }
            }
        }
        Command::Grid {
            alpha,
            resolution,
            tol,
        } => {
            let a = &bivariate(&alpha.alpha)?;
            buf.push_str("x,y,density\n");
            for p in pdf_grid_with_tol(a, *resolution, *tol)? {
                let _ = writeln!(
                    buf,
                    "{},{},{}",
                    format_real(p.x),
                    format_real(p.y),
                    format_real(p.density.value)
                );
            }
        }
        Command::Moments { alpha, format } => {
            let m = moment_vector(&bivariate(&alpha.alpha)?);
            match format {
                Format::Json => {
                    let _ = writeln!(buf, "{}", serde_json::to_string(&m).expect("serialize"));
                }
                Format::Csv => {
                    buf.push_str("m10,m01,m20,m02,m11\n");
                    let cells: Vec<String> = m.to_array().iter().map(|&v| format_real(v)).collect();
                    let _ = writeln!(buf, "{}", cells.join(","));
                }
            }
        }
        Command::Corr { alpha, format } => match &alpha.alpha {
            AlphaArg::Bivariate(a) => {
                let rho = correlation(&AlphaBivariate::from_array(*a)?);
                match format {
                    Format::Csv => {
                        let _ = writeln!(buf, "{}", format_real(rho));
                    }
                    Format::Json => {
                        let _ = writeln!(buf, "{}", json!({ "correlation": rho }));
                    }
                }
            }
            AlphaArg::Trivariate(t) => {
                let t = AlphaTrivariate::new(*t)?;
                let pairs = [
                    ("xy", correlation(&t.pair_xy())),
                    ("xz", correlation(&t.pair_xz())),
                    ("yz", correlation(&t.pair_yz())),
                ];
                match format {
                    Format::Csv => {
                        buf.push_str("xy,xz,yz\n");
                        let cells: Vec<String> = pairs.iter().map(|p| format_real(p.1)).collect();
                        let _ = writeln!(buf, "{}", cells.join(","));
                    }
                    Format::Json => {
                        let obj: serde_json::Map<String, serde_json::Value> = pairs
                            .iter()
                            .map(|(k, v)| (k.to_string(), json!(v)))
                            .collect();
                        let _ = writeln!(buf, "{}", serde_json::Value::Object(obj));
                    }
                }
            }
        },
        Command::Table { decimals } => {
            let render = |v: f64| match decimals {
                Some(d) => format!("{v:.d$}", d = *d),
                None => format_real(v),
            };
            let header: Vec<String> = TABLE_COLUMNS.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(buf, "a11,a10,a01,{}", header.join(","));
            for row in correlation_table() {
                let cells: Vec<String> = row.values.iter().map(|&v| render(v)).collect();
                let _ = writeln!(
                    buf,
                    "{},{},{},{}",
                    row.a11,
                    row.a10,
                    row.a01,
                    cells.join(",")
                );
            }
        }
        Command::Fit {
            input,
            moments,
            restarts,
            max_iterations,
            objective_tolerance,
            seed,
            weighting,
            third_order,
        } => {
            let opts = FitOptions {
                restarts: *restarts,
                max_iterations: *max_iterations,
                objective_tolerance: *objective_tolerance,
                seed: *seed,
                weighting: match weighting {
                    WeightingArg::Unweighted => Weighting::Unweighted,
                    WeightingArg::Standardized => Weighting::Standardized,
                },
                third_order: *third_order,
                ..FitOptions::default()
            };
            let result = match (input, moments) {
                (Some(path), None) => fit_data(&read_points(path)?, &opts)?,
                (None, Some(m)) => {
                    if *third_order {
                        return usage("--third-order needs --input data");
                    }
                    let arr: [f64; 5] =
                        m.0.as_slice()
                            .try_into()
                            .map_err(|_| CliError::Usage("--moments needs 5 values".into()))?;
                    fit_moments(&MomentVector::from_array(arr)?, &opts)?
                }
                _ => return usage("give exactly one of --input or --moments"),
            };
            let _ = writeln!(
                buf,
                "{}",
                serde_json::to_string(&result).expect("serialize")
            );
            if !result.converged {
                code = EXIT_NON_CONVERGENCE;
            }
        }
        Command::Baseline {
            family,
            shapes,
            rates,
            point,
            n,
            seed,
        } => {
            let mut stream = RandomStream::new(*seed);
            let three = |v: &[f64], what: &str| -> Result<[f64; 3], CliError> {
                v.try_into()
                    .map_err(|_| CliError::Usage(format!("{what} needs 3 values")))
            };
            let samples = match family {
                Family::LibbyNovick | Family::ThreeParam => {
                    let s = three(&shapes.0, "--shapes")?;
                    let r = match (family, rates) {
                        (Family::ThreeParam, Some(_)) => {
                            return usage("three-param takes no --rates");
                        }
                        (_, Some(r)) => three(&r.0, "--rates")?,
                        (_, None) => [1.0; 3],
                    };
                    let p = LibbyNovickParams::new(s, r)?;
                    if let Some((x, y)) = point {
                        let v = match family {
                            Family::ThreeParam => pdf_three_param(s[0], s[1], s[2], *x, *y)?,
                            _ => pdf_libby_novick(&p, *x, *y)?,
                        };
                        let _ = writeln!(buf, "{}", format_real(v));
                        None
                    } else {
                        let n = n.ok_or_else(|| CliError::Usage("give -n or --point".into()))?;
                        Some(sample_libby_novick(&p, n, &mut stream))
                    }
                }
                Family::Arnold => {
                    if point.is_some() {
                        return usage("the arnold family has no closed-form density; use -n");
                    }
                    if rates.is_some() {
                        return usage("arnold takes no --rates");
                    }
                    let s: [f64; 5] = shapes
                        .0
                        .as_slice()
                        .try_into()
                        .map_err(|_| CliError::Usage("--shapes needs 5 values".into()))?;
                    let n = n.ok_or_else(|| CliError::Usage("give -n".into()))?;
                    Some(sample_arnold(&ArnoldParams::new(s)?, n, &mut stream))
                }
            };
            if let Some(samples) = samples {
                write_samples(&mut buf, &samples, Format::Csv);
            }
        }
    }
    out.write_all(buf.as_bytes())?;
    out.flush()?;
    Ok(code)
}
