//! Wavefront OBJ reader/writer (v/f records only, polygons fan-triangulated).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::mesh::TriMesh;

pub fn load_obj(path: impl AsRef<Path>) -> Result<TriMesh> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    let reader = BufReader::new(file);

    let mut vertices: Vec<Vec3> = Vec::new();
    let mut faces: Vec<[u32; 3]> = Vec::new();
    let err_at = |line: usize, message: String| Error::Parse {
        path: path.display().to_string(),
        line,
        message,
    };

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim();
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let mut coords = [0.0f64; 3];
                for c in &mut coords {
                    let tok = tokens
                        .next()
                        .ok_or_else(|| err_at(lineno, "vertex needs 3 coordinates".into()))?;
                    *c = tok
                        .parse()
                        .map_err(|_| err_at(lineno, format!("bad coordinate '{tok}'")))?;
                }
                vertices.push(coords);
            }
            Some("f") => {
                let mut idxs: Vec<u32> = Vec::new();
                for tok in tokens {
                    // accept v, v/vt, v//vn, v/vt/vn; only the vertex index is used
                    let first = tok.split('/').next().unwrap_or("");
                    let raw: i64 = first
                        .parse()
                        .map_err(|_| err_at(lineno, format!("bad face index '{tok}'")))?;
                    if raw < 1 {
                        return Err(err_at(
                            lineno,
                            format!("face indices must be positive 1-based, got {raw}"),
                        ));
                    }
                    let zero_based = (raw - 1) as u64;
                    if zero_based >= vertices.len() as u64 {
                        return Err(err_at(
                            lineno,
                            format!("face index {raw} exceeds {} vertices", vertices.len()),
                        ));
                    }
                    idxs.push(zero_based as u32);
                }
                if idxs.len() < 3 {
                    return Err(err_at(lineno, "face needs at least 3 indices".into()));
                }
                for i in 1..idxs.len() - 1 {
                    faces.push([idxs[0], idxs[i], idxs[i + 1]]);
                }
            }
            // comments and unsupported record types are skipped
            _ => {}
        }
    }
    TriMesh::new(vertices, faces)
}

/// Writes `v` and `f` records. Floats use Rust's shortest round-trip
/// formatting, so save/load restores coordinates exactly.
pub fn save_obj(mesh: &TriMesh, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path.as_ref())?;
    let mut w = BufWriter::new(file);
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", v[0], v[1], v[2])?;
    }
    for f in &mesh.faces {
        writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::make_torus;
    use std::io::Write as _;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn minimal_triangle() {
        let f = write_temp("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
        let m = load_obj(f.path()).unwrap();
        assert_eq!(m.n_vertices(), 3);
        assert_eq!(m.faces, vec![[0, 1, 2]]);
    }

    #[test]
    fn quad_faces_are_fan_triangulated() {
        let f = write_temp("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
        let m = load_obj(f.path()).unwrap();
        assert_eq!(m.faces, vec![[0, 1, 2], [0, 2, 3]]);
    }

    #[test]
    fn index_styles_and_ignored_records() {
        let f = write_temp(
            "# comment\no thing\nvn 0 0 1\nv 0 0 0\nv 1 0 0\nv 0 1 0\nf 1/1 2//1 3/1/1\n",
        );
        let m = load_obj(f.path()).unwrap();
        assert_eq!(m.n_faces(), 1);
    }

    #[test]
    fn malformed_records_report_line_numbers() {
        let f = write_temp("v 0 0 0\nv 1 0\nv 0 1 0\nf 1 2 3\n");
        match load_obj(f.path()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        let f = write_temp("v 0 0 0\nf 1 2 9\n");
        match load_obj(f.path()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn torus_round_trip_is_exact() {
        let m = make_torus(2.0, 0.5, 16, 16).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("torus.obj");
        save_obj(&m, &path).unwrap();
        let back = load_obj(&path).unwrap();
        assert_eq!(back.faces, m.faces);
        for (a, b) in m.vertices.iter().zip(back.vertices.iter()) {
            for k in 0..3 {
                assert_eq!(a[k], b[k]);
            }
        }
    }
}
