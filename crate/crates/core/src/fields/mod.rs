//! Grids, sampled fields and the discrete norms used by every report.
//!
//! Fields are value types carrying an `Arc` to their grid. Layouts are
//! row-major with `z` (or the boundary-layer variable `Z`) as the outer index
//! and the periodic `x` index innermost.

mod dump;
pub mod mesh;
mod norms;

use std::sync::Arc;

use crate::error::{Error, Result};

pub use dump::{read_field_dump, write_field_dump};
pub use mesh::{nodes_within, tanh_nodes, GridPolicy};
pub use norms::{
    anisotropic_sobolev_check, anisotropic_sobolev_series, interior_restrict, FieldNorms,
    SobolevCheck,
};

/// Channel grid: `nx` periodic points on `[0, L)` times graded `z` nodes on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid2D {
    nx: usize,
    length: f64,
    z: Vec<f64>,
}

impl Grid2D {
    pub fn new(nx: usize, length: f64, z_nodes: Vec<f64>) -> Result<Self> {
        if nx < 4 {
            return Err(Error::domain(format!("nx = {nx} < 4")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::domain(format!("period L = {length} must be positive")));
        }
        Self::with_z_nodes(nx, length, z_nodes, 8)
    }

    pub fn uniform(nx: usize, nz: usize, length: f64) -> Result<Self> {
        let z = (0..nz).map(|i| i as f64 / (nz - 1) as f64).collect::<Vec<_>>();
        Self::new(nx, length, with_exact_ends(z))
    }

    // Sub-grids produced by `interior_restrict` are allowed fewer nodes and do
    // not span [0, 1].
    pub(crate) fn with_z_nodes(nx: usize, length: f64, z: Vec<f64>, min_nz: usize) -> Result<Self> {
        if z.len() < min_nz {
            return Err(Error::domain(format!("nz = {} < {min_nz}", z.len())));
        }
        if z.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("z nodes must be strictly increasing"));
        }
        if min_nz >= 8 && (z[0] != 0.0 || *z.last().unwrap() != 1.0) {
            return Err(Error::domain("z nodes must start at 0 and end at 1 exactly"));
        }
        Ok(Self { nx, length, z })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nz(&self) -> usize {
        self.z.len()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.nx as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn x_nodes(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    /// Trapezoidal weights in `z`.
    pub fn z_weights(&self) -> Vec<f64> {
        trapezoid_weights(&self.z)
    }

    pub fn min_dz(&self) -> f64 {
        self.z.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn with_exact_ends(mut z: Vec<f64>) -> Vec<f64> {
    if let Some(first) = z.first_mut() {
        *first = 0.0;
    }
    if let Some(last) = z.last_mut() {
        *last = 1.0;
    }
    z
}

pub(crate) fn trapezoid_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut w = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let h = nodes[i + 1] - nodes[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    w
}

/// Uniform grid of the boundary-layer variable `Z` on `[0, Z_max]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfLineGrid {
    nodes: Vec<f64>,
    dz: f64,
}

impl HalfLineGrid {
    /// Uniform grid with spacing as close to `dz` as divides `z_max` evenly.
    pub fn new(z_max: f64, dz: f64) -> Result<Self> {
        if !(z_max >= 10.0) {
            return Err(Error::domain(format!("Z_max = {z_max} < 10")));
        }
        if !(dz > 0.0 && dz < z_max) {
            return Err(Error::domain(format!("bad half-line spacing {dz}")));
        }
        let cells = (z_max / dz).round().max(1.0) as usize;
        let h = z_max / cells as f64;
        let mut nodes: Vec<f64> = (0..=cells).map(|j| j as f64 * h).collect();
        *nodes.last_mut().unwrap() = z_max;
        Ok(Self { nodes, dz: h })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn z_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn dz(&self) -> f64 {
        self.dz
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> Vec<f64> {
        trapezoid_weights(&self.nodes)
    }

    /// Four-point Lagrange stencil for evaluating a grid function at `zeta`.
    /// Returns `None` beyond `Z_max`, where correctors are extended by zero.
    pub fn cubic_stencil(&self, zeta: f64) -> Option<(usize, [f64; 4])> {
        let n = self.len();
        if zeta < 0.0 || zeta > self.z_max() {
            return None;
        }
        let s = zeta / self.dz;
        let cell = (s.floor() as usize).min(n - 2);
        let frac = s - cell as f64;
        if frac == 0.0 {
            // Exact node hit: reproduce the nodal value bit-for-bit.
            let start = cell.saturating_sub(1).min(n - 4);
            let mut w = [0.0; 4];
            w[cell - start] = 1.0;
            return Some((start, w));
        }
        let start = cell.saturating_sub(1).min(n - 4);
        let p = s - start as f64;
        // Lagrange basis on nodes 0,1,2,3 in local units
        let w = [
            -(p - 1.0) * (p - 2.0) * (p - 3.0) / 6.0,
            p * (p - 2.0) * (p - 3.0) / 2.0,
            -p * (p - 1.0) * (p - 3.0) / 2.0,
            p * (p - 1.0) * (p - 2.0) / 6.0,
        ];
        Some((start, w))
    }
}

/// `<Z> = sqrt(1 + Z^2)`
pub fn japanese_bracket(z: f64) -> f64 {
    (1.0 + z * z).sqrt()
}

/// Profile in `z` on the channel grid (x-independent quantities such as `u1`).
#[derive(Clone, Debug)]
pub struct Field1D {
    pub grid: Arc<Grid2D>,
    pub values: Vec<f64>,
    pub t: f64,
}

impl Field1D {
    pub fn new(grid: Arc<Grid2D>, values: Vec<f64>, t: f64) -> Result<Self> {
        check_len(values.len(), grid.nz(), "Field1D")?;
        Ok(Self { grid, values, t })
    }

    pub fn zeros(grid: Arc<Grid2D>, t: f64) -> Self {
        let n = grid.nz();
        Self { grid, values: vec![0.0; n], t }
    }

    pub fn from_fn(grid: Arc<Grid2D>, t: f64, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.z().iter().map(|&z| f(z)).collect();
        Self { grid, values, t }
    }

    /// Same profile seen as a field on the channel (constant in `x`).
    pub fn lift(&self) -> Field2D {
        let nx = self.grid.nx();
        let values = self
            .values
            .iter()
            .flat_map(|&v| std::iter::repeat(v).take(nx))
            .collect();
        Field2D { grid: self.grid.clone(), values, t: self.t }
    }
}

/// Field on the `(x, z)` channel grid.
#[derive(Clone, Debug)]
pub struct Field2D {
    pub grid: Arc<Grid2D>,
    pub values: Vec<f64>,
    pub t: f64,
}

impl Field2D {
    pub fn new(grid: Arc<Grid2D>, values: Vec<f64>, t: f64) -> Result<Self> {
        check_len(values.len(), grid.nz() * grid.nx(), "Field2D")?;
        Ok(Self { grid, values, t })
    }

    pub fn zeros(grid: Arc<Grid2D>, t: f64) -> Self {
        let n = grid.nz() * grid.nx();
        Self { grid, values: vec![0.0; n], t }
    }

    pub fn from_fn(grid: Arc<Grid2D>, t: f64, f: impl Fn(f64, f64) -> f64) -> Self {
        let nx = grid.nx();
        let dx = grid.dx();
        let mut values = Vec::with_capacity(nx * grid.nz());
        for &z in grid.z() {
            for i in 0..nx {
                values.push(f(i as f64 * dx, z));
            }
        }
        Self { grid, values, t }
    }

    pub fn get(&self, iz: usize, ix: usize) -> f64 {
        self.values[iz * self.grid.nx() + ix]
    }

    pub fn row(&self, iz: usize) -> &[f64] {
        let nx = self.grid.nx();
        &self.values[iz * nx..(iz + 1) * nx]
    }

    /// Nodewise `self - other`; both fields must share the grid.
    pub fn sub(&self, other: &Field2D) -> Result<Field2D> {
        if self.grid != other.grid || self.values.len() != other.values.len() {
            return Err(Error::domain("field difference on mismatched grids"));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Field2D { grid: self.grid.clone(), values, t: self.t })
    }

    pub fn scaled(&self, c: f64) -> Field2D {
        Field2D {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            t: self.t,
        }
    }
}

impl Field1D {
    pub fn sub(&self, other: &Field1D) -> Result<Field1D> {
        if self.grid != other.grid || self.values.len() != other.values.len() {
            return Err(Error::domain("field difference on mismatched grids"));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Field1D { grid: self.grid.clone(), values, t: self.t })
    }

    pub fn scaled(&self, c: f64) -> Field1D {
        Field1D {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            t: self.t,
        }
    }
}

/// Profile in the boundary-layer variable `Z`.
#[derive(Clone, Debug)]
pub struct HalfLineField {
    pub grid: Arc<HalfLineGrid>,
    pub values: Vec<f64>,
    pub t: f64,
}

impl HalfLineField {
    pub fn new(grid: Arc<HalfLineGrid>, values: Vec<f64>, t: f64) -> Result<Self> {
        check_len(values.len(), grid.len(), "HalfLineField")?;
        Ok(Self { grid, values, t })
    }

    pub fn from_fn(grid: Arc<HalfLineGrid>, t: f64, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&z| f(z)).collect();
        Self { grid, values, t }
    }

    /// Cubic interpolation, zero beyond `Z_max`.
    pub fn sample(&self, zeta: f64) -> f64 {
        match self.grid.cubic_stencil(zeta) {
            Some((start, w)) => (0..4).map(|k| w[k] * self.values[start + k]).sum(),
            None => 0.0,
        }
    }
}

/// Field on `[0, L) x [0, Z_max]`, layout `values[iZ * nx + ix]`.
#[derive(Clone, Debug)]
pub struct HalfLineField2D {
    pub grid: Arc<HalfLineGrid>,
    pub nx: usize,
    pub length: f64,
    pub values: Vec<f64>,
    pub t: f64,
}

impl HalfLineField2D {
    pub fn new(
        grid: Arc<HalfLineGrid>,
        nx: usize,
        length: f64,
        values: Vec<f64>,
        t: f64,
    ) -> Result<Self> {
        check_len(values.len(), grid.len() * nx, "HalfLineField2D")?;
        Ok(Self { grid, nx, length, values, t })
    }

    pub fn get(&self, iz: usize, ix: usize) -> f64 {
        self.values[iz * self.nx + ix]
    }

    pub fn row(&self, iz: usize) -> &[f64] {
        &self.values[iz * self.nx..(iz + 1) * self.nx]
    }

    /// Cubic interpolation in `Z` at every `x` node, zero beyond `Z_max`.
    pub fn sample_row(&self, zeta: f64, out: &mut [f64]) {
        match self.grid.cubic_stencil(zeta) {
            Some((start, w)) => {
                for (ix, o) in out.iter_mut().enumerate() {
                    *o = (0..4).map(|k| w[k] * self.values[(start + k) * self.nx + ix]).sum();
                }
            }
            None => out.iter_mut().for_each(|o| *o = 0.0),
        }
    }
}

fn check_len(got: usize, want: usize, what: &str) -> Result<()> {
    if got != want {
        return Err(Error::domain(format!("{what}: {got} values for {want} nodes")));
    }
    Ok(())
}

/// Ordered stamps `t_0 = 0 < ... < t_N = T` with one frame per stamp.
#[derive(Clone, Debug)]
pub struct TimeSeries<F> {
    pub times: Vec<f64>,
    pub frames: Vec<F>,
}

impl<F> TimeSeries<F> {
    pub fn new(times: Vec<f64>, frames: Vec<F>) -> Result<Self> {
        if times.len() != frames.len() || times.is_empty() {
            return Err(Error::domain("time series needs one frame per stamp"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("time stamps must be strictly increasing"));
        }
        Ok(Self { times, frames })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn last(&self) -> &F {
        self.frames.last().expect("non-empty series")
    }

    pub fn same_stamps<G>(&self, other: &TimeSeries<G>) -> bool {
        self.times == other.times
    }

    pub fn map<G>(&self, f: impl FnMut(&F) -> G) -> TimeSeries<G> {
        TimeSeries { times: self.times.clone(), frames: self.frames.iter().map(f).collect() }
    }
}

/// `nt + 1` uniform stamps on `[0, T]`.
pub fn uniform_stamps(horizon: f64, nt: usize) -> Vec<f64> {
    let dt = horizon / nt as f64;
    let mut t: Vec<f64> = (0..=nt).map(|n| n as f64 * dt).collect();
    *t.last_mut().unwrap() = horizon;
    t
}
