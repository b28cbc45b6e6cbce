use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::sync::Arc;

use super::{Field2D, Grid2D};
use crate::error::{Error, Result};

/// Writes `# t=<stamp> nx=<nx> nz=<nz>` followed by one line per `z` node.
pub fn write_field_dump(field: &Field2D, out: &mut impl Write) -> Result<()> {
    let g = &field.grid;
    let mut s = format!("# t={:.17e} nx={} nz={}\n", field.t, g.nx(), g.nz());
    for iz in 0..g.nz() {
        let row: Vec<String> = field.row(iz).iter().map(|v| format!("{v:.17e}")).collect();
        writeln!(s, "{}", row.join(" ")).expect("writing to a String");
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

/// Reads a dump back onto the given grid.
pub fn read_field_dump(input: impl BufRead, grid: Arc<Grid2D>) -> Result<Field2D> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::domain("empty field dump"))??;
    let mut t = None;
    let mut dims = (None, None);
    for tok in header.trim_start_matches('#').split_whitespace() {
        match tok.split_once('=') {
            Some(("t", v)) => t = v.parse::<f64>().ok(),
            Some(("nx", v)) => dims.0 = v.parse::<usize>().ok(),
            Some(("nz", v)) => dims.1 = v.parse::<usize>().ok(),
            _ => {}
        }
    }
    let (Some(t), Some(nx), Some(nz)) = (t, dims.0, dims.1) else {
        return Err(Error::domain(format!("bad dump header `{header}`")));
    };
    if nx != grid.nx() || nz != grid.nz() {
        return Err(Error::domain("dump dimensions do not match the grid"));
    }
    let mut values = Vec::with_capacity(nx * nz);
    for line in lines {
        for tok in line?.split_whitespace() {
            values.push(tok.parse::<f64>().map_err(|e| Error::domain(format!("dump value: {e}")))?);
        }
    }
    Field2D::new(grid, values, t)
}
