//! Reference computations shared by the integration tests. Nothing here
//! calls into the library's numerical paths; each oracle is built from
//! elementary operations.
#![allow(dead_code)]

use std::f64::consts::PI;

use bivbeta::{AlphaBivariate, SquarePoint};

/// Lanczos (g = 7, n = 9) log-gamma for x > 0.
pub fn ln_gamma_lanczos(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma_lanczos(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

pub fn beta_pdf(a: f64, b: f64, x: f64) -> f64 {
    let ln_b = ln_gamma_lanczos(a) + ln_gamma_lanczos(b) - ln_gamma_lanczos(a + b);
    ((a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln() - ln_b).exp()
}

/// Gauss series for `|z| < 1`, summed until terms fall below `1e-17`
/// relative.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64) -> f64 {
    assert!(z.abs() < 1.0);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..100_000 {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            return sum;
        }
    }
    panic!("series did not converge");
}

/// Series after the Pfaff map `z -> z/(z-1)`, valid for `z < 1/2`.
pub fn hyp2f1_pfaff(a: f64, b: f64, c: f64, z: f64) -> f64 {
    (1.0 - z).powf(-b) * hyp2f1_series(c - a, b, c, z / (z - 1.0))
}

/// Double series of Appell F1 for `|z1|, |z2| < 1`.
pub fn appell_f1_series(a: f64, b1: f64, b2: f64, c: f64, z1: f64, z2: f64) -> f64 {
    assert!(z1.abs() < 1.0 && z2.abs() < 1.0);
    let mut sum = 0.0;
    // outer over m, inner over n; row_m = (a)_m (b1)_m / ((c)_m m!) z1^m
    let mut row = 1.0;
    for m in 0..5_000 {
        let mf = m as f64;
        let mut term = row;
        let mut inner = 0.0;
        for n in 0..5_000 {
            let nf = n as f64;
            inner += term;
            term *= (a + mf + nf) * (b2 + nf) / ((c + mf + nf) * (nf + 1.0)) * z2;
            if term.abs() < 1e-18 * inner.abs().max(1e-300) && n > 2 {
                break;
            }
        }
        sum += inner;
        if inner.abs() < 1e-18 * sum.abs() && m > 2 {
            return sum;
        }
        row *= (a + mf) * (b1 + mf) / ((c + mf) * (mf + 1.0)) * z1;
    }
    panic!("double series did not converge");
}

/// 20-point Gauss-Legendre nodes on [-1, 1], by Newton iteration on P_20.
fn legendre_nodes() -> (Vec<f64>, Vec<f64>) {
    const N: usize = 20;
    let mut xs = Vec::with_capacity(N);
    let mut ws = Vec::with_capacity(N);
    for i in 1..=N {
        let mut x = (PI * (i as f64 - 0.25) / (N as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=N {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs.push(x);
        ws.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (xs, ws)
}

fn gl_panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64, xs: &[f64], ws: &[f64]) -> f64 {
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    xs.iter()
        .zip(ws)
        .map(|(x, w)| w * f(m + r * x))
        .sum::<f64>()
        * r
}

/// Adaptive Gauss-Legendre by interval halving to absolute `tol`.
pub fn gauss_legendre(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (xs, ws) = legendre_nodes();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
        xs: &[f64],
        ws: &[f64],
    ) -> f64 {
        let m = 0.5 * (a + b);
        let l = gl_panel(f, a, m, xs, ws);
        let r = gl_panel(f, m, b, xs, ws);
        if (l + r - whole).abs() <= tol || depth > 40 {
            l + r
        } else {
            rec(f, a, m, l, 0.5 * tol, depth + 1, xs, ws)
                + rec(f, m, b, r, 0.5 * tol, depth + 1, xs, ws)
        }
    }
    let whole = gl_panel(f, a, b, &xs, &ws);
    rec(f, a, b, whole, tol, 0, &xs, &ws)
}

/// Defining integral of the joint density, by adaptive Gauss-Legendre,
/// for parameters all at least 1 (bounded integrand).
pub fn density_by_gauss_legendre(alpha: [f64; 4], x: f64, y: f64) -> f64 {
    let [a11, a10, a01, a00] = alpha;
    assert!(alpha.iter().all(|&a| a >= 1.0));
    let lo = (x + y - 1.0).max(0.0);
    let hi = x.min(y);
    // factors can round below zero next to the limits
    let g = |u: f64| {
        u.max(0.0).powf(a11 - 1.0)
            * (x - u).max(0.0).powf(a10 - 1.0)
            * (y - u).max(0.0).powf(a01 - 1.0)
            * (1.0 - x - y + u).max(0.0).powf(a00 - 1.0)
    };
    let ln_b = alpha.iter().map(|&a| ln_gamma_lanczos(a)).sum::<f64>()
        - ln_gamma_lanczos(alpha.iter().sum());
    let rough = gauss_legendre(&g, lo, hi, 1e-3 * (hi - lo));
    gauss_legendre(&g, lo, hi, 1e-15 * rough.abs()) / ln_b.exp()
}

/// Tanh-sinh nodes on (0, 1) at step `h`: `(u, 1-u, weight)`, with the
/// complement formed directly. Nodes stop at about `1e-100` from either
/// end; for integrable powers `u^p`, `p > -0.9`, the neglected mass is
/// below `1e-9`.
pub fn tanh_sinh_nodes(h: f64) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    let k_max = (4.98 / h).floor() as i64;
    for k in -k_max..=k_max {
        let s = k as f64 * h;
        let v = PI * s.sinh();
        let u = 1.0 / (1.0 + (-v).exp());
        let uc = 1.0 / (1.0 + v.exp());
        let w = h * PI * s.cosh() * u * uc;
        if w > 0.0 && u > 0.0 && uc > 0.0 {
            out.push((u, uc, w));
        }
    }
    out
}

/// Point in one of the four triangles cut by the diagonals, given the
/// distance `d = |x - y|`, `e = |1 - x - y|` and `g = 1 - d - e`.
pub fn triangle_point(triangle: usize, d: f64, e: f64, g: f64) -> SquarePoint {
    let h = 0.5 * g;
    // (x, y, 1-x, 1-y, x-y, 1-x-y)
    let parts = match triangle {
        0 => (h, h + d, h + d + e, h + e, -d, e),
        1 => (h + d, h, h + e, h + d + e, d, e),
        2 => (h + e, h + e + d, h + d, h, -d, -e),
        _ => (h + e + d, h + e, h, h + d, d, -e),
    };
    SquarePoint::from_parts(parts.0, parts.1, parts.2, parts.3, parts.4, parts.5)
        .expect("consistent offsets")
}

/// Integral of `f` over the open unit square, split along both diagonals.
/// Each triangle is mapped to the unit square by `d = u`, `e = (1-u) v`,
/// so singular behaviour on the diagonals and the edges lands on the
/// endpoints of the tanh-sinh rule.
pub fn integrate_square(f: &dyn Fn(&SquarePoint) -> f64, h: f64) -> f64 {
    let nodes = tanh_sinh_nodes(h);
    let mut total = 0.0;
    for tri in 0..4 {
        for &(u, uc, wu) in &nodes {
            for &(v, vc, wv) in &nodes {
                let d = u;
                let e = uc * v;
                let g = uc * vc;
                let pt = triangle_point(tri, d, e, g);
                if !(pt.x() > 0.0 && pt.x() < 1.0 && pt.y() > 0.0 && pt.y() < 1.0) {
                    continue;
                }
                // dx dy = (1/2) dd de = (1/2) (1-u) du dv
                total += wu * wv * 0.5 * uc * f(&pt);
            }
        }
    }
    total
}

/// Integral of `f(y)` over (0, 1) by tanh-sinh, with `1 - y` supplied.
pub fn integrate_unit(f: &dyn Fn(f64, f64) -> f64, h: f64) -> f64 {
    tanh_sinh_nodes(h)
        .iter()
        .map(|&(u, uc, w)| w * f(u, uc))
        .sum()
}

pub fn alpha(a: [f64; 4]) -> AlphaBivariate {
    AlphaBivariate::from_array(a).unwrap()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Sample mean and standard error of the mean.
pub fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

pub fn sample_correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}
