use crate::linalg;

/// `d_Z` of every `x` column of a row-major `(Z, x)` array.
pub(crate) fn d_dz(values: &[f64], nx: usize, nodes: &[f64]) -> Vec<f64> {
    let nz = nodes.len();
    let mut out = vec![0.0; values.len()];
    let mut col = vec![0.0; nz];
    for ix in 0..nx {
        for j in 0..nz {
            col[j] = values[j * nx + ix];
        }
        let d = linalg::derivative(nodes, &col);
        for j in 0..nz {
            out[j * nx + ix] = d[j];
        }
    }
    out
}

// Second-order time derivative: centred inside, three-point one-sided at the ends.
pub(crate) fn d_dt(frames: &[Vec<f64>], times: &[f64]) -> Vec<Vec<f64>> {
    let n = frames.len();
    (0..n)
        .map(|k| {
            let (idx, w) = if n < 3 {
                let h = times[1] - times[0];
                ([0, 1, 1], [-1.0 / h, 1.0 / h, 0.0])
            } else if k == 0 {
                let h = times[1] - times[0];
                ([0, 1, 2], [-1.5 / h, 2.0 / h, -0.5 / h])
            } else if k == n - 1 {
                let h = times[n - 1] - times[n - 2];
                ([n - 1, n - 2, n - 3], [1.5 / h, -2.0 / h, 0.5 / h])
            } else {
                let h = times[k + 1] - times[k - 1];
                ([k - 1, k + 1, k + 1], [-1.0 / h, 1.0 / h, 0.0])
            };
            (0..frames[0].len())
                .map(|j| w[0] * frames[idx[0]][j] + w[1] * frames[idx[1]][j] + w[2] * frames[idx[2]][j])
                .collect()
        })
        .collect()
}
