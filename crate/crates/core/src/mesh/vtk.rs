//! Legacy ASCII VTK export (unstructured grid of quads).

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use super::quad::QuadMesh;
use crate::error::{invalid, Result};

const VTK_QUAD: u8 = 9;

/// Renders the mesh plus optional named nodal fields.
pub fn to_vtk_string(mesh: &QuadMesh, point_data: &[(&str, &[f64])]) -> Result<String> {
    for (name, values) in point_data {
        if values.len() != mesh.num_nodes() {
            return invalid(format!(
                "point field {name} has {} values for {} nodes",
                values.len(),
                mesh.num_nodes()
            ));
        }
        if name.is_empty() || name.contains(char::is_whitespace) {
            return invalid(format!("invalid VTK field name {name:?}"));
        }
    }
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\nquad mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", mesh.num_nodes());
    for p in &mesh.nodes {
        let _ = writeln!(s, "{:.17e} {:.17e} 0", p[0], p[1]);
    }
    let _ = writeln!(s, "CELLS {} {}", mesh.num_cells(), 5 * mesh.num_cells());
    for c in &mesh.cells {
        let _ = writeln!(s, "4 {} {} {} {}", c[0], c[1], c[2], c[3]);
    }
    let _ = writeln!(s, "CELL_TYPES {}", mesh.num_cells());
    for _ in &mesh.cells {
        let _ = writeln!(s, "{VTK_QUAD}");
    }
    if !point_data.is_empty() {
        let _ = writeln!(s, "POINT_DATA {}", mesh.num_nodes());
        for (name, values) in point_data {
            let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
            for v in *values {
                let _ = writeln!(s, "{v:.17e}");
            }
        }
    }
    Ok(s)
}

pub fn write_vtk(path: &Path, mesh: &QuadMesh, point_data: &[(&str, &[f64])]) -> Result<()> {
    let s = to_vtk_string(mesh, point_data)?;
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(s.as_bytes())?;
    f.flush()?;
    Ok(())
}
