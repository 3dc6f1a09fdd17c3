/// Central-difference Hessian of `f` at `x` with per-coordinate steps.
///
/// Diagonal entries use the three-point formula, off-diagonal entries the
/// four-point cross difference. The result is symmetric by construction.
pub fn central_hessian<F>(f: F, x: &[f64], steps: &[f64]) -> Vec<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x.len();
    let f0 = f(x);
    let at = |moves: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(i, d) in moves {
            y[i] += d;
        }
        f(&y)
    };
    let mut h = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        let hi = steps[i];
        h[i][i] = (at(&[(i, hi)]) - 2.0 * f0 + at(&[(i, -hi)])) / (hi * hi);
        for j in 0..i {
            let hj = steps[j];
            let v = (at(&[(i, hi), (j, hj)]) - at(&[(i, hi), (j, -hj)]) - at(&[(i, -hi), (j, hj)])
                + at(&[(i, -hi), (j, -hj)]))
                / (4.0 * hi * hj);
            h[i][j] = v;
            h[j][i] = v;
        }
    }
    h
}
