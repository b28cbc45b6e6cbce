use serde::{Deserialize, Serialize};

use super::{with_exact_ends, Grid2D};
use crate::error::{Error, Result};

/// Symmetric tanh-stretched nodes on `[0, 1]`. `gamma -> 0` is uniform.
pub fn tanh_nodes(nz: usize, gamma: f64) -> Vec<f64> {
    let n = nz - 1;
    let mut z = vec![0.0; nz];
    if gamma < 1e-8 {
        for (i, zi) in z.iter_mut().enumerate() {
            *zi = i as f64 / n as f64;
        }
    } else {
        let th = gamma.tanh();
        for i in 0..=n / 2 {
            let s = i as f64 / n as f64;
            z[i] = 0.5 * (1.0 + (gamma * (2.0 * s - 1.0)).tanh() / th);
        }
        // mirror so the mesh is exactly symmetric
        for i in n / 2 + 1..=n {
            z[i] = 1.0 - z[n - i];
        }
        if n % 2 == 0 {
            z[n / 2] = 0.5;
        }
    }
    with_exact_ends(z)
}

/// Nodes within distance `w` of the lower wall (the wall node included).
pub fn nodes_within(z: &[f64], w: f64) -> usize {
    z.iter().take_while(|&&v| v <= w).count()
}

/// How the channel grid is built for a given viscosity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridPolicy {
    /// Periodic points in `x`.
    pub nx: usize,
    /// Bulk resolution: the mesh spacing at the channel centre is at most `1/nz`.
    pub nz: usize,
    /// Tanh grading towards both walls.
    pub graded: bool,
    /// Target node count inside `[0, sqrt(eps)]` (and its mirror).
    pub layer_nodes: usize,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self { nx: 8, nz: 128, graded: true, layer_nodes: 96 }
    }
}

/// Nodes inside a layer below which the solution is considered unresolved.
pub const MIN_LAYER_NODES: usize = 24;

impl GridPolicy {
    /// Doubled resolution, used by the self-convergence audit.
    pub fn refined(&self) -> Self {
        Self { nz: 2 * self.nz, layer_nodes: 2 * self.layer_nodes, ..self.clone() }
    }

    pub fn build(&self, eps: f64, length: f64) -> Result<Grid2D> {
        if !(eps > 0.0) {
            return Err(Error::domain(format!("viscosity {eps} must be positive")));
        }
        if !self.graded {
            return Grid2D::uniform(self.nx, self.nz.max(8) + 1, length);
        }
        let w = eps.sqrt();
        let m = self.layer_nodes.max(1);
        // Smallest nz (in steps of 8) admitting a stretch with m layer nodes
        // and centre spacing <= 1/nz_bulk.
        let mut nz = self.nz.max(8) + 1;
        loop {
            let n = (nz - 1) as f64;
            let mut lo = 1e-6;
            let mut hi = 30.0;
            if nodes_within(&tanh_nodes(nz, hi), w) >= m {
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if nodes_within(&tanh_nodes(nz, mid), w) >= m {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let centre = hi / (hi.tanh() * n);
                if centre <= 1.0 / self.nz as f64 {
                    return Grid2D::new(self.nx, length, tanh_nodes(nz, hi));
                }
            }
            nz += 8;
            if nz > 1 << 16 {
                return Err(Error::domain("layer resolution needs an unreasonable mesh"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tanh_symmetric_and_exact_ends() {
        let z = tanh_nodes(101, 3.0);
        assert_eq!(z[0], 0.0);
        assert_eq!(z[100], 1.0);
        for i in 0..101 {
            assert!((z[i] - (1.0 - z[100 - i])).abs() < 1e-15);
        }
        assert!(z.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn policy_resolves_layer() {
        let p = GridPolicy::default();
        for k in [6, 10, 14] {
            let eps = 2f64.powi(-k);
            let g = p.build(eps, 1.0).unwrap();
            assert!(nodes_within(g.z(), eps.sqrt()) >= p.layer_nodes);
            let mid = g.nz() / 2;
            assert!(g.z()[mid + 1] - g.z()[mid] <= 1.0 / p.nz as f64 + 1e-12);
        }
    }
}
