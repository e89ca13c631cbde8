//! Nelder-Mead downhill simplex with the standard coefficients.

pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

pub(crate) struct Settings {
    pub initial_step: f64,
    pub max_evaluations: usize,
    /// Stop when the spread of values across the simplex falls below this.
    pub value_tol: f64,
    /// ... and all vertices are within this distance of the best one.
    pub point_tol: f64,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

pub(crate) fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    settings: &Settings,
) -> Outcome {
    let n = start.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    vertices.push(start.to_vec());
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += settings.initial_step;
        vertices.push(v);
    }
    let mut values: Vec<f64> = vertices.iter().map(|v| eval(v, &mut evaluations)).collect();

    let mut converged = false;
    while evaluations < settings.max_evaluations {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        vertices = order.iter().map(|&i| vertices[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let size = vertices[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&vertices[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= settings.value_tol && size <= settings.point_tol {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| vertices[..n].iter().map(|v| v[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&vertices[n])
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let reflected = along(REFLECT);
        let fr = eval(&reflected, &mut evaluations);
        if fr < values[0] {
            let expanded = along(EXPAND);
            let fe = eval(&expanded, &mut evaluations);
            if fe < fr {
                vertices[n] = expanded;
                values[n] = fe;
            } else {
                vertices[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            vertices[n] = reflected;
            values[n] = fr;
            continue;
        }
        let (trial, ft) = if fr < values[n] {
            let outside = along(CONTRACT * REFLECT);
            let fo = eval(&outside, &mut evaluations);
            (outside, fo)
        } else {
            let inside = along(-CONTRACT);
            let fi = eval(&inside, &mut evaluations);
            (inside, fi)
        };
        if ft < values[n].min(fr) {
            vertices[n] = trial;
            values[n] = ft;
            continue;
        }
        for i in 1..=n {
            let shrunk: Vec<f64> = vertices[0]
                .iter()
                .zip(&vertices[i])
                .map(|(b, v)| b + SHRINK * (v - b))
                .collect();
            values[i] = eval(&shrunk, &mut evaluations);
            vertices[i] = shrunk;
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);
    Outcome {
        x: vertices[best].clone(),
        value: values[best],
        evaluations,
        converged,
    }
}
