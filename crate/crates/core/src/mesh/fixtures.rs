//! Synthetic fixtures with known topology: a parametric torus (plus a
//! conforming solid tetrahedralization) and voxel plates with a chosen number
//! of through-holes, each with conforming interior and exterior tet complexes.
//!
//! Conformance is constructive: cubes use the Kuhn 6-tet split around the
//! min-to-max corner diagonal, which induces the min-to-max diagonal on every
//! cube face, so adjacent cubes and the triangulated boundary quads always
//! agree. Quad faces elsewhere (torus surface and prism interfaces) take the
//! diagonal through the quad's smallest global vertex id, which likewise
//! matches between neighbors.

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::mesh::{TetComplex, TriMesh, VoxelSolid};

/// Standard torus parametrization: `nu` segments around the main ring,
/// `nv` around the tube. Closed, genus 1, `2 * nu * nv` triangles.
/// Constant-u rings represent tunnel-loop homology, constant-v rings
/// handle-loop homology.
pub fn make_torus(big_r: f64, small_r: f64, nu: usize, nv: usize) -> Result<TriMesh> {
    if !(big_r > small_r && small_r > 0.0) {
        return Err(Error::invalid_argument(format!(
            "torus radii must satisfy R > r > 0, got R={big_r}, r={small_r}"
        )));
    }
    if nu < 3 || nv < 3 {
        return Err(Error::invalid_argument(format!(
            "torus resolution must be at least 3x3, got {nu}x{nv}"
        )));
    }
    let mut vertices = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = 2.0 * std::f64::consts::PI * i as f64 / nu as f64;
        for j in 0..nv {
            let v = 2.0 * std::f64::consts::PI * j as f64 / nv as f64;
            let ring = big_r + small_r * v.cos();
            vertices.push([ring * u.cos(), ring * u.sin(), small_r * v.sin()]);
        }
    }
    let idx = |i: usize, j: usize| ((i % nu) * nv + (j % nv)) as u32;
    let mut faces = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            // quad corners in CCW order seen from outside
            let quad = [idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)];
            let [t0, t1] = split_quad_min_id(quad);
            faces.push(t0);
            faces.push(t1);
        }
    }
    TriMesh::new(vertices, faces)
}

/// Split a quad (cyclic vertex order) along the diagonal through its
/// smallest vertex id, preserving the winding.
fn split_quad_min_id(q: [u32; 4]) -> [[u32; 3]; 2] {
    let min_pos = (0..4).min_by_key(|&p| q[p]).unwrap();
    if min_pos % 2 == 0 {
        // diagonal q[0]-q[2]
        [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]
    } else {
        // diagonal q[1]-q[3]
        [[q[1], q[2], q[3]], [q[1], q[3], q[0]]]
    }
}

/// Conforming solid tetrahedralization of the torus produced by
/// [`make_torus`] with the same parameters: one ring of core vertices on the
/// center circle, and three tets per surface quad (prism between the quad and
/// the corresponding core edge).
///
/// Vertices 0..nu*nv coincide with the surface mesh; core vertices follow.
pub fn torus_interior_tets(
    big_r: f64,
    small_r: f64,
    nu: usize,
    nv: usize,
) -> Result<TetComplex> {
    let surface = make_torus(big_r, small_r, nu, nv)?;
    let mut vertices = surface.vertices.clone();
    let core_base = vertices.len() as u32;
    for i in 0..nu {
        let u = 2.0 * std::f64::consts::PI * i as f64 / nu as f64;
        vertices.push([big_r * u.cos(), big_r * u.sin(), 0.0]);
    }
    let sidx = |i: usize, j: usize| ((i % nu) * nv + (j % nv)) as u32;
    let cidx = |i: usize| core_base + (i % nu) as u32;
    let mut tets = Vec::with_capacity(3 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            // prism: bottom (A, C, P) at u=i, top (B, D, Q) at u=i+1
            let bottom = [sidx(i, j), sidx(i, j + 1), cidx(i)];
            let top = [sidx(i + 1, j), sidx(i + 1, j + 1), cidx(i + 1)];
            tets.extend(split_prism(bottom, top)?);
        }
    }
    TetComplex::new(vertices, tets)
}

/// Split a triangular prism into three tets, with each quad face cut along
/// the diagonal through its smallest vertex id. The smallest id among the six
/// prism vertices lies on two quads, so those two diagonals share a vertex
/// and a consistent split always exists.
fn split_prism(bottom: [u32; 3], top: [u32; 3]) -> Result<[[u32; 4]; 3]> {
    // quad k joins bottom edge (b_k, b_{k+1}) to top edge (t_k, t_{k+1});
    // diag[k] = true means the diagonal is (b_k, t_{k+1}), else (b_{k+1}, t_k)
    let diag = |k: usize| -> bool {
        let quad = [
            bottom[k],
            bottom[(k + 1) % 3],
            top[(k + 1) % 3],
            top[k],
        ];
        let m = *quad.iter().min().unwrap();
        m == bottom[k] || m == top[(k + 1) % 3]
    };
    let d = [diag(0), diag(1), diag(2)];
    if d == [true, true, true] || d == [false, false, false] {
        return Err(Error::Degenerate(
            "cyclic prism diagonals admit no 3-tet split".into(),
        ));
    }
    // find k with d[k] && !d[k+1]: both diagonals meet at top[(k+1)%3]
    let k = (0..3)
        .find(|&k| d[k] && !d[(k + 1) % 3])
        .expect("non-cyclic diagonal pattern");
    let (b0, b1, b2) = (bottom[k], bottom[(k + 1) % 3], bottom[(k + 2) % 3]);
    let (t0, t1, t2) = (top[k], top[(k + 1) % 3], top[(k + 2) % 3]);
    let apex = t1;
    let first = [b0, b1, b2, apex];
    // remainder is the pyramid over quad (b2, b0, t0, t2) with apex t1,
    // split along that quad's own diagonal (quad index k+2)
    let rest = if d[(k + 2) % 3] {
        // diagonal (b2, t0)
        [[b2, b0, t0, apex], [b2, t0, t2, apex]]
    } else {
        // diagonal (b0, t2)
        [[b0, t2, t0, apex], [b0, b2, t2, apex]]
    };
    Ok([first, rest[0], rest[1]])
}

/// Surface + interior + exterior complexes of one voxel fixture.
#[derive(Debug, Clone)]
pub struct VoxelFixture {
    pub solid: VoxelSolid,
    pub surface: TriMesh,
    pub interior: TetComplex,
    pub exterior: TetComplex,
}

const PAD: i64 = 2; // exterior bounding-box padding, in cells

/// An extruded plate with `hole_count` rectangular through-holes:
/// `resolution x 6 x 2` cells, each hole 2x2 cells wide through the full
/// thickness. The surface is the triangulated voxel boundary; interior and
/// exterior complexes are Kuhn-split cube tets conforming to it, the exterior
/// closed by a box with two cells of padding.
pub fn make_voxel_genus_solid(hole_count: usize, resolution: usize) -> Result<VoxelFixture> {
    if resolution < 4 * hole_count + 4 {
        return Err(Error::invalid_argument(format!(
            "resolution {resolution} too small to separate {hole_count} holes (need >= {})",
            4 * hole_count + 4
        )));
    }
    let (nx, ny, nz) = (resolution, 6usize, 2usize);
    let mut occupancy = vec![true; nx * ny * nz];
    for h in 0..hole_count {
        let x0 = ((h + 1) * (nx - 2 * hole_count)) / (hole_count + 1) + 2 * h;
        for k in 0..nz {
            for j in 2..4 {
                for i in x0..x0 + 2 {
                    occupancy[(k * ny + j) * nx + i] = false;
                }
            }
        }
    }
    let solid = VoxelSolid {
        occupancy,
        nx,
        ny,
        nz,
        cell_size: 1.0 / nx as f64,
        origin: [0.0, 0.0, 0.0],
    };
    build_fixture(solid)
}

fn build_fixture(solid: VoxelSolid) -> Result<VoxelFixture> {
    let lattice = Lattice::new(&solid);

    // Boundary quads of occupied cells, triangulated with the min-to-max
    // diagonal (matching what the Kuhn tets induce on cube faces).
    let mut surface_tris: Vec<[i64; 9]> = Vec::new(); // three lattice points each
    for k in 0..solid.nz as i64 {
        for j in 0..solid.ny as i64 {
            for i in 0..solid.nx as i64 {
                if !solid.occupied(i, j, k) {
                    continue;
                }
                for (axis, dir) in [(0, -1i64), (0, 1), (1, -1), (1, 1), (2, -1), (2, 1)] {
                    let mut n = [i, j, k];
                    n[axis] += dir;
                    if solid.occupied(n[0], n[1], n[2]) {
                        continue;
                    }
                    let quad = face_quad([i, j, k], axis, dir);
                    for tri in split_face_quad(quad) {
                        surface_tris.push([
                            tri[0][0], tri[0][1], tri[0][2], tri[1][0], tri[1][1], tri[1][2],
                            tri[2][0], tri[2][1], tri[2][2],
                        ]);
                    }
                }
            }
        }
    }

    // Compact surface vertex ids, deterministic lattice ordering.
    let mut surf_points: Vec<[i64; 3]> = surface_tris
        .iter()
        .flat_map(|t| {
            [
                [t[0], t[1], t[2]],
                [t[3], t[4], t[5]],
                [t[6], t[7], t[8]],
            ]
        })
        .collect();
    surf_points.sort_unstable();
    surf_points.dedup();
    let surf_id = |p: [i64; 3]| surf_points.binary_search(&p).unwrap() as u32;

    let surface_vertices: Vec<Vec3> = surf_points.iter().map(|&p| lattice.world(p)).collect();
    let surface_faces: Vec<[u32; 3]> = surface_tris
        .iter()
        .map(|t| {
            [
                surf_id([t[0], t[1], t[2]]),
                surf_id([t[3], t[4], t[5]]),
                surf_id([t[6], t[7], t[8]]),
            ]
        })
        .collect();
    let surface = TriMesh::new(surface_vertices, surface_faces)?;

    // Interior: Kuhn tets of occupied cells. Exterior: Kuhn tets of the
    // padded-box complement. Vertex lists start with the surface vertices.
    let interior = tets_for_cells(&solid, &lattice, &surf_points, true)?;
    let exterior = tets_for_cells(&solid, &lattice, &surf_points, false)?;

    Ok(VoxelFixture {
        solid,
        surface,
        interior,
        exterior,
    })
}

struct Lattice {
    cell: f64,
    origin: Vec3,
}

impl Lattice {
    fn new(solid: &VoxelSolid) -> Self {
        Self {
            cell: solid.cell_size,
            origin: solid.origin,
        }
    }

    fn world(&self, p: [i64; 3]) -> Vec3 {
        [
            self.origin[0] + self.cell * p[0] as f64,
            self.origin[1] + self.cell * p[1] as f64,
            self.origin[2] + self.cell * p[2] as f64,
        ]
    }
}

/// Lattice corners of the face of cell `c` on side (`axis`, `dir`), in CCW
/// order when viewed from outside the cell.
fn face_quad(c: [i64; 3], axis: usize, dir: i64) -> [[i64; 3]; 4] {
    let (u, v) = match axis {
        0 => (1, 2),
        1 => (2, 0),
        _ => (0, 1),
    };
    let mut base = c;
    if dir > 0 {
        base[axis] += 1;
    }
    let mk = |du: i64, dv: i64| {
        let mut p = base;
        p[u] += du;
        p[v] += dv;
        p
    };
    if dir > 0 {
        [mk(0, 0), mk(1, 0), mk(1, 1), mk(0, 1)]
    } else {
        [mk(0, 0), mk(0, 1), mk(1, 1), mk(1, 0)]
    }
}

/// Triangulate a lattice quad along its min-to-max corner diagonal (those two
/// corners are always diagonally opposite), preserving winding.
fn split_face_quad(q: [[i64; 3]; 4]) -> [[[i64; 3]; 3]; 2] {
    let min_pos = (0..4).min_by_key(|&p| q[p]).unwrap();
    if min_pos % 2 == 0 {
        [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]
    } else {
        [[q[1], q[2], q[3]], [q[1], q[3], q[0]]]
    }
}

/// Kuhn split of the unit cube: six tets along vertex paths from the min
/// corner to the max corner, one per axis permutation.
const KUHN_PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn cube_tets(c: [i64; 3]) -> [[[i64; 3]; 4]; 6] {
    let mut out = [[[0i64; 3]; 4]; 6];
    for (t, perm) in KUHN_PERMS.iter().enumerate() {
        let mut p = c;
        out[t][0] = p;
        for (step, &axis) in perm.iter().enumerate() {
            p[axis] += 1;
            out[t][step + 1] = p;
        }
    }
    out
}

fn tets_for_cells(
    solid: &VoxelSolid,
    lattice: &Lattice,
    surf_points: &[[i64; 3]],
    occupied_side: bool,
) -> crate::error::Result<TetComplex> {
    let (lo, hi) = if occupied_side {
        ([0i64, 0, 0], [solid.nx as i64, solid.ny as i64, solid.nz as i64])
    } else {
        (
            [-PAD, -PAD, -PAD],
            [
                solid.nx as i64 + PAD,
                solid.ny as i64 + PAD,
                solid.nz as i64 + PAD,
            ],
        )
    };

    // ids: surface vertices first, then remaining lattice points in order
    let mut extra_points: Vec<[i64; 3]> = Vec::new();
    let mut cells = Vec::new();
    for k in lo[2]..hi[2] {
        for j in lo[1]..hi[1] {
            for i in lo[0]..hi[0] {
                if solid.occupied(i, j, k) == occupied_side {
                    cells.push([i, j, k]);
                }
            }
        }
    }
    for &c in &cells {
        for dz in 0..=1 {
            for dy in 0..=1 {
                for dx in 0..=1 {
                    let p = [c[0] + dx, c[1] + dy, c[2] + dz];
                    if surf_points.binary_search(&p).is_err() {
                        extra_points.push(p);
                    }
                }
            }
        }
    }
    extra_points.sort_unstable();
    extra_points.dedup();

    let id_of = |p: [i64; 3]| -> u32 {
        match surf_points.binary_search(&p) {
            Ok(i) => i as u32,
            Err(_) => {
                (surf_points.len() + extra_points.binary_search(&p).unwrap()) as u32
            }
        }
    };

    let mut vertices: Vec<Vec3> = surf_points.iter().map(|&p| lattice.world(p)).collect();
    vertices.extend(extra_points.iter().map(|&p| lattice.world(p)));

    let mut tets = Vec::with_capacity(cells.len() * 6);
    for &c in &cells {
        for tet in cube_tets(c) {
            tets.push([
                id_of(tet[0]),
                id_of(tet[1]),
                id_of(tet[2]),
                id_of(tet[3]),
            ]);
        }
    }
    TetComplex::new(vertices, tets)
}
