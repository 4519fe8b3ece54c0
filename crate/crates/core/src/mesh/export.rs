use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use super::GraphMesh;
use crate::error::Result;

/// OBJ text: vertices with nine decimals, one `# cone <vertex> up|down`
/// comment per cone vertex (1-based, as in `f` lines), then the faces.
pub fn obj_string(mesh: &GraphMesh) -> String {
    let mut s = String::with_capacity(48 * mesh.vertices.len() + 32 * mesh.triangles.len());
    let _ = writeln!(s, "# maxgraph mesh");
    let _ = writeln!(
        s,
        "# vertices {} triangles {} copies {}",
        mesh.vertices.len(),
        mesh.triangles.len(),
        mesh.copies
    );
    for tag in &mesh.cone_vertices {
        let _ = writeln!(s, "# cone {} {}", tag.vertex + 1, tag.direction.as_str());
    }
    for v in &mesh.vertices {
        let _ = writeln!(s, "v {:.9} {:.9} {:.9}", v[0], v[1], v[2]);
    }
    for t in &mesh.triangles {
        let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    s
}

/// Binary little-endian PLY with double-precision vertices.
pub fn ply_bytes(mesh: &GraphMesh) -> Vec<u8> {
    let header = format!(
        "ply\nformat binary_little_endian 1.0\ncomment maxgraph mesh\n\
         element vertex {}\nproperty double x\nproperty double y\nproperty double z\n\
         element face {}\nproperty list uchar int vertex_indices\nend_header\n",
        mesh.vertices.len(),
        mesh.triangles.len()
    );
    let mut out = header.into_bytes();
    for v in &mesh.vertices {
        for c in v {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
    for t in &mesh.triangles {
        out.push(3);
        for &i in t {
            out.extend_from_slice(&(i as i32).to_le_bytes());
        }
    }
    out
}

/// Writes to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "mesh".into());
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

pub fn export_obj(mesh: &GraphMesh, path: &Path) -> Result<()> {
    write_atomic(path, obj_string(mesh).as_bytes())
}

pub fn export_ply(mesh: &GraphMesh, path: &Path) -> Result<()> {
    write_atomic(path, &ply_bytes(mesh))
}
