//! Derivative-free simplex minimization.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Stop when `f(worst) - f(best) <= f_tol * max(|f(best)|, 1)` ...
    pub f_tol: f64,
    /// ... and every vertex is within `x_tol` of the best one in each coordinate.
    pub x_tol: f64,
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            f_tol: 1e-10,
            x_tol: 1e-7,
            initial_step: 0.25,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `start`. Non-finite values are treated as `+inf`, so
/// infeasible regions simply repel the simplex.
pub fn minimize<F>(mut f: F, start: &[f64], options: &SimplexOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = start.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), eval(start)));
    for i in 0..dim {
        let mut x = start.to_vec();
        x[i] += options.initial_step;
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < options.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        if best.is_finite() && worst - best <= options.f_tol * best.abs().max(1.0) {
            let spread = simplex[1..]
                .iter()
                .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if spread <= options.x_tol {
                converged = true;
                break;
            }
        }
        iterations += 1;

        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let along = |t: f64, from: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(from)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(REFLECT, &simplex[dim].0);
        let f_reflected = eval(&reflected);
        let second_worst = simplex[dim - 1].1;

        if f_reflected < best {
            let expanded = along(REFLECT * EXPAND, &simplex[dim].0);
            let f_expanded = eval(&expanded);
            simplex[dim] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
        } else if f_reflected < second_worst {
            simplex[dim] = (reflected, f_reflected);
        } else {
            let outside = f_reflected < worst;
            let contracted = if outside {
                along(REFLECT * CONTRACT, &simplex[dim].0)
            } else {
                along(-CONTRACT, &simplex[dim].0)
            };
            let f_contracted = eval(&contracted);
            let accept = if outside {
                f_contracted <= f_reflected
            } else {
                f_contracted < worst
            };
            if accept {
                simplex[dim] = (contracted, f_contracted);
            } else {
                let anchor = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    for (xi, ai) in vertex.0.iter_mut().zip(&anchor) {
                        *xi = ai + SHRINK * (*xi - ai);
                    }
                    vertex.1 = eval(&vertex.0);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        iterations,
        evaluations,
        converged,
    }
}
