//! Triangle meshes, tetrahedral complexes, fixture generators, and mesh I/O.

mod fixtures;
mod obj;
mod tetgen;

pub use fixtures::{make_torus, make_voxel_genus_solid, torus_interior_tets, VoxelFixture};
pub use obj::{load_obj, save_obj};
pub use tetgen::{load_tetgen, save_tetgen};

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::geom::{self, Vec3};

/// A triangle mesh with positions in world units.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[u32; 3]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[u32; 3]>) -> Result<Self> {
        let n = vertices.len() as u32;
        for (i, f) in faces.iter().enumerate() {
            if f.iter().any(|&v| v >= n) {
                return Err(Error::invalid_argument(format!(
                    "face {i} references vertex out of range (have {n} vertices)"
                )));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::invalid_argument(format!(
                    "face {i} has repeated vertices: {f:?}"
                )));
            }
        }
        Ok(Self { vertices, faces })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    /// Undirected edges as sorted vertex pairs, each mapped to the faces
    /// containing it. BTreeMap so iteration order is deterministic.
    pub fn edge_faces(&self) -> BTreeMap<[u32; 2], Vec<usize>> {
        let mut map: BTreeMap<[u32; 2], Vec<usize>> = BTreeMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                map.entry([a.min(b), a.max(b)]).or_default().push(fi);
            }
        }
        map
    }

    pub fn n_edges(&self) -> usize {
        self.edge_faces().len()
    }

    pub fn face_positions(&self, fi: usize) -> [Vec3; 3] {
        let f = self.faces[fi];
        [
            self.vertices[f[0] as usize],
            self.vertices[f[1] as usize],
            self.vertices[f[2] as usize],
        ]
    }

    pub fn face_area(&self, fi: usize) -> f64 {
        let [a, b, c] = self.face_positions(fi);
        geom::triangle_area(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.faces.len()).map(|fi| self.face_area(fi)).sum()
    }

    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        geom::bounding_box(&self.vertices)
    }

    /// Checks that the mesh is closed (every edge in exactly two faces),
    /// edge-manifold, connected, and consistently oriented.
    pub fn check_closed_manifold(&self) -> Result<()> {
        if self.faces.is_empty() {
            return Err(Error::topology("mesh has no faces"));
        }
        for (edge, faces) in self.edge_faces() {
            if faces.len() != 2 {
                return Err(Error::topology(format!(
                    "edge {edge:?} belongs to {} faces (want 2)",
                    faces.len()
                )));
            }
        }
        // consistent orientation: each directed edge appears exactly once
        let mut directed = std::collections::HashSet::new();
        for f in &self.faces {
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                if !directed.insert((a, b)) {
                    return Err(Error::topology(format!(
                        "directed edge ({a},{b}) repeated; orientation inconsistent"
                    )));
                }
            }
        }
        if !self.is_connected() {
            return Err(Error::topology("mesh is not connected"));
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); self.vertices.len()];
        for f in &self.faces {
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                adj[a as usize].push(b);
                adj[b as usize].push(a);
            }
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn transformed(&self, f: impl Fn(Vec3) -> Vec3) -> TriMesh {
        TriMesh {
            vertices: self.vertices.iter().map(|&p| f(p)).collect(),
            faces: self.faces.clone(),
        }
    }
}

/// Genus of a closed, edge-manifold, connected triangle mesh from its Euler
/// characteristic: g = (2 - V + E - F) / 2.
pub fn genus(mesh: &TriMesh) -> Result<usize> {
    mesh.check_closed_manifold()?;
    let v = mesh.n_vertices() as i64;
    let e = mesh.n_edges() as i64;
    let f = mesh.n_faces() as i64;
    let num = 2 - v + e - f;
    if num < 0 || num % 2 != 0 {
        return Err(Error::topology(format!(
            "Euler characteristic {} inconsistent with a closed orientable surface",
            v - e + f
        )));
    }
    Ok((num / 2) as usize)
}

/// A tetrahedral complex. `vertices` may extend a surface mesh's vertex list
/// (the surface vertices form a prefix when the complex conforms to one).
/// Induced triangles and edges are derived at construction.
#[derive(Debug, Clone)]
pub struct TetComplex {
    pub vertices: Vec<Vec3>,
    pub tets: Vec<[u32; 4]>,
    triangles: Vec<[u32; 3]>,
    edges: Vec<[u32; 2]>,
}

impl TetComplex {
    pub fn new(vertices: Vec<Vec3>, tets: Vec<[u32; 4]>) -> Result<Self> {
        let n = vertices.len() as u32;
        let mut tri_set = std::collections::BTreeSet::new();
        let mut edge_set = std::collections::BTreeSet::new();
        for (i, t) in tets.iter().enumerate() {
            if t.iter().any(|&v| v >= n) {
                return Err(Error::invalid_argument(format!(
                    "tet {i} references vertex out of range (have {n} vertices)"
                )));
            }
            let mut s = *t;
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid_argument(format!(
                    "tet {i} has repeated vertices: {t:?}"
                )));
            }
            for skip in 0..4 {
                let mut tri = [0u32; 3];
                let mut k = 0;
                for (m, &v) in s.iter().enumerate() {
                    if m != skip {
                        tri[k] = v;
                        k += 1;
                    }
                }
                tri_set.insert(tri);
            }
            for a in 0..4 {
                for b in (a + 1)..4 {
                    edge_set.insert([s[a], s[b]]);
                }
            }
        }
        Ok(Self {
            vertices,
            tets,
            triangles: tri_set.into_iter().collect(),
            edges: edge_set.into_iter().collect(),
        })
    }

    pub fn n_tets(&self) -> usize {
        self.tets.len()
    }

    /// Induced triangles as sorted vertex triples, ascending.
    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    /// Induced edges as sorted vertex pairs, ascending.
    pub fn edges(&self) -> &[[u32; 2]] {
        &self.edges
    }

    pub fn has_triangle(&self, tri: [u32; 3]) -> bool {
        let mut t = tri;
        t.sort_unstable();
        self.triangles.binary_search(&t).is_ok()
    }

    pub fn has_edge(&self, edge: [u32; 2]) -> bool {
        let e = [edge[0].min(edge[1]), edge[0].max(edge[1])];
        self.edges.binary_search(&e).is_ok()
    }

    /// Verify that `surface` is a subcomplex: shared vertex prefix plus every
    /// surface edge and triangle present among the induced simplices.
    pub fn check_conforms_to(&self, surface: &TriMesh) -> Result<()> {
        if self.vertices.len() < surface.n_vertices() {
            return Err(Error::Conformance(
                "volumetric complex has fewer vertices than the surface".into(),
            ));
        }
        for (i, (&a, &b)) in surface
            .vertices
            .iter()
            .zip(self.vertices.iter())
            .enumerate()
        {
            if geom::distance(a, b) > 1e-12 {
                return Err(Error::Conformance(format!(
                    "vertex {i} differs between surface and volumetric complex"
                )));
            }
        }
        for f in &surface.faces {
            if !self.has_triangle(*f) {
                return Err(Error::Conformance(format!(
                    "surface triangle {f:?} not induced by the volumetric complex"
                )));
            }
        }
        for (edge, _) in surface.edge_faces() {
            if !self.has_edge(edge) {
                return Err(Error::Conformance(format!(
                    "surface edge {edge:?} not induced by the volumetric complex"
                )));
            }
        }
        Ok(())
    }
}

/// Occupancy grid used to generate the voxel fixtures.
#[derive(Debug, Clone)]
pub struct VoxelSolid {
    pub occupancy: Vec<bool>,
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub cell_size: f64,
    pub origin: Vec3,
}

impl VoxelSolid {
    pub fn occupied(&self, i: i64, j: i64, k: i64) -> bool {
        if i < 0 || j < 0 || k < 0 {
            return false;
        }
        let (i, j, k) = (i as usize, j as usize, k as usize);
        if i >= self.nx || j >= self.ny || k >= self.nz {
            return false;
        }
        self.occupancy[(k * self.ny + j) * self.nx + i]
    }

    pub fn n_occupied(&self) -> usize {
        self.occupancy.iter().filter(|&&b| b).count()
    }
}

/// Uniform scale + translation mapping a mesh into the unit box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitBoxTransform {
    pub scale: f64,
    /// Center of the original bounding box (maps to (0.5, 0.5, 0.5)).
    pub center: Vec3,
}

impl UnitBoxTransform {
    pub fn apply(&self, p: Vec3) -> Vec3 {
        [
            (p[0] - self.center[0]) * self.scale + 0.5,
            (p[1] - self.center[1]) * self.scale + 0.5,
            (p[2] - self.center[2]) * self.scale + 0.5,
        ]
    }

    pub fn invert(&self, p: Vec3) -> Vec3 {
        [
            (p[0] - 0.5) / self.scale + self.center[0],
            (p[1] - 0.5) / self.scale + self.center[1],
            (p[2] - 0.5) / self.scale + self.center[2],
        ]
    }
}

/// Uniformly scale and translate the mesh so its bounding box fits inside
/// `[0,1]^3`, centered. Returns the applied transform.
pub fn normalize_unit_box(mesh: &TriMesh) -> Result<(TriMesh, UnitBoxTransform)> {
    if mesh.vertices.is_empty() {
        return Err(Error::Degenerate("cannot normalize an empty mesh".into()));
    }
    let (lo, hi) = mesh.bounding_box();
    let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(hi[2] - lo[2]);
    if !(extent > 0.0) || !extent.is_finite() {
        return Err(Error::Degenerate(format!(
            "mesh bounding box has zero or invalid extent ({extent})"
        )));
    }
    let t = UnitBoxTransform {
        scale: 1.0 / extent,
        center: [
            0.5 * (lo[0] + hi[0]),
            0.5 * (lo[1] + hi[1]),
            0.5 * (lo[2] + hi[2]),
        ],
    };
    Ok((mesh.transformed(|p| t.apply(p)), t))
}

/// Area-weighted surface samples, deterministic per seed.
pub fn sample_surface(mesh: &TriMesh, n: usize, seed: u64) -> Result<Vec<Vec3>> {
    if mesh.faces.is_empty() {
        return Err(Error::invalid_argument("cannot sample an empty mesh"));
    }
    let mut cumulative = Vec::with_capacity(mesh.n_faces());
    let mut acc = 0.0;
    for fi in 0..mesh.n_faces() {
        acc += mesh.face_area(fi);
        cumulative.push(acc);
    }
    if !(acc > 0.0) {
        return Err(Error::Degenerate("mesh has zero total area".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let target = rng.gen_range(0.0..acc);
        let fi = cumulative.partition_point(|&c| c <= target);
        let fi = fi.min(mesh.n_faces() - 1);
        let [a, b, c] = mesh.face_positions(fi);
        let (mut u, mut v): (f64, f64) = (rng.gen(), rng.gen());
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        let p = geom::add(
            a,
            geom::add(
                geom::scale(geom::sub(b, a), u),
                geom::scale(geom::sub(c, a), v),
            ),
        );
        out.push(p);
    }
    Ok(out)
}

/// Uniform-weight Laplacian smoothing: each round blends every vertex toward
/// the average of its edge neighbors by `lambda`.
pub fn laplacian_smooth(mesh: &TriMesh, rounds: usize, lambda: f64) -> TriMesh {
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); mesh.n_vertices()];
    for (edge, _) in mesh.edge_faces() {
        adj[edge[0] as usize].push(edge[1]);
        adj[edge[1] as usize].push(edge[0]);
    }
    let mut verts = mesh.vertices.clone();
    for _ in 0..rounds {
        let mut next = verts.clone();
        for (vi, neighbors) in adj.iter().enumerate() {
            if neighbors.is_empty() {
                continue;
            }
            let mut mean = [0.0; 3];
            for &w in neighbors {
                mean = geom::add(mean, verts[w as usize]);
            }
            mean = geom::scale(mean, 1.0 / neighbors.len() as f64);
            next[vi] = geom::add(
                verts[vi],
                geom::scale(geom::sub(mean, verts[vi]), lambda),
            );
        }
        verts = next;
    }
    TriMesh {
        vertices: verts,
        faces: mesh.faces.clone(),
    }
}
