//! Plain-text exports: OBJ-style meshes and CSV samples.

use crate::error::Result;
use crate::scene::{format_number, SceneDocument};
use crate::surface::Mesh;

/// Samples a surface scene on a `count_u × count_v` grid and writes it with
/// [`mesh_to_obj`]. Both counts must be at least 2.
pub fn export_mesh(doc: &SceneDocument, count_u: usize, count_v: usize) -> Result<String> {
    Ok(mesh_to_obj(&doc.surface_mesh(count_u, count_v)?))
}

/// OBJ text for a mesh: one `v x y z` line per vertex in mesh order
/// (row-major, `v` fastest) and one quad `f a b c d` per face with
/// 1-based indices.
pub fn mesh_to_obj(mesh: &Mesh) -> String {
    let mut out = format!(
        "# {} x {} vertices, {} faces\n",
        mesh.count_u,
        mesh.count_v,
        mesh.faces.len()
    );
    for v in &mesh.vertices {
        out.push_str(&format!("v {}\n", join(v.coords(), " ")));
    }
    for f in &mesh.faces {
        out.push_str(&format!(
            "f {} {} {} {}\n",
            f[0] + 1,
            f[1] + 1,
            f[2] + 1,
            f[3] + 1
        ));
    }
    out
}

/// CSV with the given header and one line per row.
pub fn export_csv(columns: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = columns.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&join(&row, ","));
        out.push('\n');
    }
    out
}

/// Curve samples as `t,x,y` (or `t,x,y,z`); surface samples as `u,v,x,y,z`
/// in mesh vertex order. `count_v` is ignored for curves.
pub fn export_scene_csv(doc: &SceneDocument, count_u: usize, count_v: usize) -> Result<String> {
    if doc.kind() == "surface" {
        let mesh = doc.surface_mesh(count_u, count_v)?;
        let step = |i: usize, count: usize| i as f64 / (count - 1) as f64;
        let rows = mesh.vertices.iter().enumerate().map(|(idx, p)| {
            let (iu, iv) = (idx / count_v, idx % count_v);
            let mut row = vec![step(iu, count_u), step(iv, count_v)];
            row.extend_from_slice(p.coords());
            row
        });
        return Ok(export_csv(&["u", "v", "x", "y", "z"], rows));
    }
    let samples = doc.curve_samples(count_u)?;
    let columns: &[&str] = if samples[0].1.len() == 2 {
        &["t", "x", "y"]
    } else {
        &["t", "x", "y", "z"]
    };
    Ok(export_csv(
        columns,
        samples
            .into_iter()
            .map(|(t, p)| std::iter::once(t).chain(p).collect()),
    ))
}

fn join(values: &[f64], sep: &str) -> String {
    values
        .iter()
        .map(|&x| format_number(x))
        .collect::<Vec<_>>()
        .join(sep)
}
