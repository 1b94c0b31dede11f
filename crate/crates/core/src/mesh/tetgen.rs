//! TetGen `.node` / `.ele` reader and writer.
//!
//! The index base (0 or 1) is taken from the id of the first record, the same
//! convention TetGen itself uses; indices are normalized to 0-based on load.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::mesh::TetComplex;

struct Records {
    path: String,
    // (line number, whitespace-split tokens)
    lines: Vec<(usize, Vec<String>)>,
}

impl Records {
    fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
        let mut lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let tokens: Vec<String> = stripped.split_whitespace().map(String::from).collect();
            if !tokens.is_empty() {
                lines.push((idx + 1, tokens));
            }
        }
        Ok(Self {
            path: path.display().to_string(),
            lines,
        })
    }

    fn err(&self, line: usize, message: String) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            message,
        }
    }

    fn parse<T: std::str::FromStr>(&self, line: usize, tok: &str, what: &str) -> Result<T> {
        tok.parse()
            .map_err(|_| self.err(line, format!("bad {what} '{tok}'")))
    }
}

pub fn load_tetgen(node_path: impl AsRef<Path>, ele_path: impl AsRef<Path>) -> Result<TetComplex> {
    let nodes = Records::read(node_path.as_ref())?;
    if nodes.lines.is_empty() {
        return Err(nodes.err(0, "empty .node file".into()));
    }
    let (hline, header) = &nodes.lines[0];
    let n_points: usize = nodes.parse(*hline, &header[0], "point count")?;
    if nodes.lines.len() != n_points + 1 {
        return Err(nodes.err(
            *hline,
            format!(
                "header declares {n_points} points but file has {} records",
                nodes.lines.len() - 1
            ),
        ));
    }

    let mut base: Option<i64> = None;
    let mut points: Vec<Vec3> = Vec::with_capacity(n_points);
    for (i, (line, toks)) in nodes.lines[1..].iter().enumerate() {
        if toks.len() < 4 {
            return Err(nodes.err(*line, format!("point record {} is truncated", i)));
        }
        let id: i64 = nodes.parse(*line, &toks[0], "point id")?;
        let base = *base.get_or_insert(id);
        if id != base + i as i64 {
            return Err(nodes.err(*line, format!("point id {id} out of sequence")));
        }
        let mut p = [0.0f64; 3];
        for k in 0..3 {
            p[k] = nodes.parse(*line, &toks[k + 1], "coordinate")?;
        }
        points.push(p);
    }
    let base = base.unwrap_or(0);

    let eles = Records::read(ele_path.as_ref())?;
    if eles.lines.is_empty() {
        return Err(eles.err(0, "empty .ele file".into()));
    }
    let (hline, header) = &eles.lines[0];
    let n_tets: usize = eles.parse(*hline, &header[0], "tet count")?;
    if header.len() >= 2 {
        let per: usize = eles.parse(*hline, &header[1], "nodes per tet")?;
        if per != 4 {
            return Err(eles.err(*hline, format!("expected 4 nodes per tet, got {per}")));
        }
    }
    if eles.lines.len() != n_tets + 1 {
        return Err(eles.err(
            *hline,
            format!(
                "header declares {n_tets} tets but file has {} records",
                eles.lines.len() - 1
            ),
        ));
    }
    let mut tets: Vec<[u32; 4]> = Vec::with_capacity(n_tets);
    for (i, (line, toks)) in eles.lines[1..].iter().enumerate() {
        if toks.len() < 5 {
            return Err(eles.err(*line, format!("tet record {} is truncated", i)));
        }
        let mut t = [0u32; 4];
        for k in 0..4 {
            let raw: i64 = eles.parse(*line, &toks[k + 1], "tet index")?;
            let shifted = raw - base;
            if shifted < 0 || shifted as usize >= points.len() {
                return Err(eles.err(
                    *line,
                    format!("tet index {raw} out of range for {} points", points.len()),
                ));
            }
            t[k] = shifted as u32;
        }
        tets.push(t);
    }
    TetComplex::new(points, tets)
}

/// Writes 1-based `.node` / `.ele` files.
pub fn save_tetgen(
    complex: &TetComplex,
    node_path: impl AsRef<Path>,
    ele_path: impl AsRef<Path>,
) -> Result<()> {
    let mut node = std::io::BufWriter::new(fs::File::create(node_path.as_ref())?);
    writeln!(node, "{} 3 0 0", complex.vertices.len())?;
    for (i, p) in complex.vertices.iter().enumerate() {
        writeln!(node, "{} {} {} {}", i + 1, p[0], p[1], p[2])?;
    }
    node.flush()?;
    let mut ele = std::io::BufWriter::new(fs::File::create(ele_path.as_ref())?);
    writeln!(ele, "{} 4 0", complex.tets.len())?;
    for (i, t) in complex.tets.iter().enumerate() {
        writeln!(
            ele,
            "{} {} {} {} {}",
            i + 1,
            t[0] + 1,
            t[1] + 1,
            t[2] + 1,
            t[3] + 1
        )?;
    }
    ele.flush()?;
    Ok(())
}
