use std::sync::Arc;

use super::{japanese_bracket, Field1D, Field2D, Grid2D, HalfLineField, HalfLineField2D, TimeSeries};
use crate::error::{Error, Result};
use crate::linalg;
use crate::spectral::XTransform;

/// Discrete norms shared by all sampled fields.
pub trait FieldNorms {
    /// Trapezoidal in `z`/`Z`, rectangle rule in periodic `x`.
    fn l2_norm(&self) -> f64;
    fn linf_norm(&self) -> f64;
}

fn linf(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

impl FieldNorms for Field1D {
    fn l2_norm(&self) -> f64 {
        let w = self.grid.z_weights();
        w.iter().zip(&self.values).map(|(w, v)| w * v * v).sum::<f64>().sqrt()
    }
    fn linf_norm(&self) -> f64 {
        linf(&self.values)
    }
}

impl FieldNorms for Field2D {
    fn l2_norm(&self) -> f64 {
        let w = self.grid.z_weights();
        let dx = self.grid.dx();
        let nx = self.grid.nx();
        let s: f64 = w
            .iter()
            .enumerate()
            .map(|(iz, wz)| wz * self.values[iz * nx..(iz + 1) * nx].iter().map(|v| v * v).sum::<f64>())
            .sum();
        (dx * s).sqrt()
    }
    fn linf_norm(&self) -> f64 {
        linf(&self.values)
    }
}

impl FieldNorms for HalfLineField {
    fn l2_norm(&self) -> f64 {
        self.weighted_l2(0)
    }
    fn linf_norm(&self) -> f64 {
        linf(&self.values)
    }
}

impl FieldNorms for HalfLineField2D {
    fn l2_norm(&self) -> f64 {
        self.weighted_l2(0)
    }
    fn linf_norm(&self) -> f64 {
        linf(&self.values)
    }
}

impl HalfLineField {
    /// `|| <Z>^l f ||_{L^2(0, Z_max)}`
    pub fn weighted_l2(&self, l: u32) -> f64 {
        let w = self.grid.weights();
        let z = self.grid.nodes();
        let mut s = 0.0;
        for j in 0..z.len() {
            let b = japanese_bracket(z[j]).powi(2 * l as i32);
            s += w[j] * b * self.values[j] * self.values[j];
        }
        s.sqrt()
    }
}

impl HalfLineField2D {
    /// `|| <Z>^l f ||_{L^2([0, L] x [0, Z_max])}`
    pub fn weighted_l2(&self, l: u32) -> f64 {
        let w = self.grid.weights();
        let z = self.grid.nodes();
        let dx = self.length / self.nx as f64;
        let mut s = 0.0;
        for j in 0..z.len() {
            let b = japanese_bracket(z[j]).powi(2 * l as i32);
            let row: f64 = self.row(j).iter().map(|v| v * v).sum();
            s += w[j] * b * row;
        }
        (dx * s).sqrt()
    }
}

impl Field1D {
    /// Nodal `d/dz`, second order on the graded mesh.
    pub fn dz(&self) -> Field1D {
        Field1D {
            grid: self.grid.clone(),
            values: linalg::derivative(self.grid.z(), &self.values),
            t: self.t,
        }
    }

    /// `sqrt(||f||^2 + ||f_z||^2)` over `[0, 1]`.
    pub fn h1_norm(&self) -> f64 {
        let a = self.l2_norm();
        let b = self.dz().l2_norm();
        (a * a + b * b).sqrt()
    }
}

impl Field2D {
    /// Spectral `x`-derivative of the given order.
    pub fn dx(&self, order: usize) -> Field2D {
        let tr = XTransform::new(self.grid.nx(), self.grid.length());
        Field2D {
            grid: self.grid.clone(),
            values: tr.derivative_rows(&self.values, order),
            t: self.t,
        }
    }

    /// Nodal `d/dz` at every `x` column.
    pub fn dz(&self) -> Field2D {
        self.map_columns(linalg::derivative)
    }

    /// Nodal `d^2/dz^2` at every `x` column.
    pub fn dzz(&self) -> Field2D {
        self.map_columns(linalg::second_derivative)
    }

    fn map_columns(&self, op: fn(&[f64], &[f64]) -> Vec<f64>) -> Field2D {
        let nx = self.grid.nx();
        let nz = self.grid.nz();
        let mut out = vec![0.0; nx * nz];
        let mut col = vec![0.0; nz];
        for ix in 0..nx {
            for iz in 0..nz {
                col[iz] = self.values[iz * nx + ix];
            }
            let d = op(self.grid.z(), &col);
            for iz in 0..nz {
                out[iz * nx + ix] = d[iz];
            }
        }
        Field2D { grid: self.grid.clone(), values: out, t: self.t }
    }

    /// `sqrt(||f||^2 + ||f_x||^2 + ||f_z||^2)`
    pub fn h1_norm(&self) -> f64 {
        let a = self.l2_norm();
        let b = self.dx(1).l2_norm();
        let c = self.dz().l2_norm();
        (a * a + b * b + c * c).sqrt()
    }
}

/// Restriction of a field to the interior band `z in [delta, 1 - delta]`.
pub fn interior_restrict(field: &Field2D, delta: f64) -> Result<Field2D> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::domain(format!("delta = {delta} outside (0, 1/2)")));
    }
    let g = &field.grid;
    let nx = g.nx();
    let keep: Vec<usize> = (0..g.nz())
        .filter(|&i| g.z()[i] >= delta && g.z()[i] <= 1.0 - delta)
        .collect();
    if keep.is_empty() {
        return Err(Error::domain(format!("no z nodes in [{delta}, {}]", 1.0 - delta)));
    }
    let z: Vec<f64> = keep.iter().map(|&i| g.z()[i]).collect();
    let mut values = Vec::with_capacity(keep.len() * nx);
    for &i in &keep {
        values.extend_from_slice(field.row(i));
    }
    let sub = Grid2D::with_z_nodes(nx, g.length(), z, 1)?;
    Ok(Field2D { grid: Arc::new(sub), values, t: field.t })
}

/// Both sides of the anisotropic interpolation bound and their ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SobolevCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl SobolevCheck {
    fn from_norms(lhs: f64, u: f64, uz: f64, ux: f64, uxz: f64) -> Self {
        let rhs = (u * uz).sqrt() + (uz * ux).sqrt() + (u * uxz).sqrt();
        let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
        Self { lhs, rhs, ratio }
    }
}

struct AnisoNorms {
    linf: f64,
    u: f64,
    uz: f64,
    ux: f64,
    uxz: f64,
}

fn aniso_norms(field: &Field2D) -> Result<AnisoNorms> {
    let linf = field.linf_norm();
    let nz = field.grid.nz();
    let trace = linf_slice(field.row(0)).max(linf_slice(field.row(nz - 1)));
    if trace > 1e-9 * linf.max(1.0) {
        return Err(Error::Precondition(format!("boundary trace {trace:e} does not vanish")));
    }
    let uz = field.dz();
    Ok(AnisoNorms {
        linf,
        u: field.l2_norm(),
        uz: uz.l2_norm(),
        ux: field.dx(1).l2_norm(),
        uxz: uz.dx(1).l2_norm(),
    })
}

fn linf_slice(v: &[f64]) -> f64 {
    linf(v)
}

/// `||u||_inf` against `||u||^(1/2) ||u_z||^(1/2) + ||u_z||^(1/2) ||u_x||^(1/2)
/// + ||u||^(1/2) ||u_xz||^(1/2)` for one field vanishing at `z = 0, 1`.
pub fn anisotropic_sobolev_check(field: &Field2D) -> Result<SobolevCheck> {
    let n = aniso_norms(field)?;
    Ok(SobolevCheck::from_norms(n.linf, n.u, n.uz, n.ux, n.uxz))
}

/// Same check with every norm taken as a maximum over the stamps.
pub fn anisotropic_sobolev_series(series: &TimeSeries<Field2D>) -> Result<SobolevCheck> {
    let mut m = [0.0f64; 5];
    for f in &series.frames {
        let n = aniso_norms(f)?;
        for (slot, v) in m.iter_mut().zip([n.linf, n.u, n.uz, n.ux, n.uxz]) {
            *slot = slot.max(v);
        }
    }
    Ok(SobolevCheck::from_norms(m[0], m[1], m[2], m[3], m[4]))
}
