//! Handle and tunnel loop extraction on closed surfaces.
//!
//! The two-phase strategy: persistence over the surface alone leaves 2g
//! unpaired edges for a genus-g surface; appending interior simplices pairs g
//! of them (their traced cycles bound inside the solid: handle loops), and
//! appending exterior simplices pairs the other g (tunnel loops). When no
//! exterior complex is available, tunnel loops are recovered from candidate
//! surface cycles filtered by null-homology rank tests instead.
//!
//! Every reported loop is certified by construction: handles are
//! null-homologous in surface+interior and non-null on the surface, tunnels
//! non-null in surface+interior (and null in surface+exterior when that
//! complex is supplied).

use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};
use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{Chain, Filtration, Simplex, SimplexId, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::geom::{self, Vec3};
use crate::gf2::ColumnSpace;
use crate::mesh::{genus, TetComplex, TriMesh};
use crate::persistence::{mark_loop, pair};

/// A closed cycle of surface edges classified as a handle or tunnel loop.
#[derive(Debug, Clone)]
pub struct LoopCycle {
    /// The cycle as a chain in the surface complex of the producing report.
    pub edges: Chain,
    pub kind: LoopKind,
    /// Closed vertex walk (first vertex not repeated at the end).
    pub vertex_sequence: Vec<VertexId>,
    /// Total Euclidean length in world units.
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopKind {
    Handle,
    Tunnel,
}

impl std::fmt::Display for LoopKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoopKind::Handle => write!(f, "handle"),
            LoopKind::Tunnel => write!(f, "tunnel"),
        }
    }
}

/// Output of [`detect_loops`].
#[derive(Debug, Clone)]
pub struct LoopReport {
    pub handles: Vec<LoopCycle>,
    pub tunnels: Vec<LoopCycle>,
    pub genus: usize,
    /// The simplicial complex of the surface; loop chains index into it.
    pub surface_complex: Arc<SimplicialComplex>,
    /// Unpaired positive surface edges after the surface-only phase (2g for
    /// a closed genus-g surface).
    pub surface_unpaired_edges: usize,
    /// How many of those were paired by interior 2-simplices (g).
    pub interior_killed_edges: usize,
}

/// True iff the 1-cycle `c` bounds: it lies in the span of the boundaries of
/// the complex's 2-simplices, decided by Z/2 elimination.
pub fn null_homologous(c: &Chain, complex: &SimplicialComplex) -> Result<bool> {
    if c.is_empty() {
        return Ok(true);
    }
    if c.dim() != Some(1) {
        return Err(Error::invalid_argument(format!(
            "null_homologous expects a 1-chain, got dimension {:?}",
            c.dim()
        )));
    }
    if !c.boundary(complex)?.is_empty() {
        return Err(Error::invalid_argument(
            "null_homologous expects a cycle (empty boundary)",
        ));
    }
    Ok(HomologyTester::new(complex).is_null(c))
}

/// Precomputed reduction of a complex's 2-boundary columns, reused across
/// many cycle queries.
pub struct HomologyTester {
    space: ColumnSpace,
}

impl HomologyTester {
    pub fn new(complex: &SimplicialComplex) -> Self {
        let mut space = ColumnSpace::new();
        for id in complex.ids_of_dim(2) {
            let b = complex.boundary(id).expect("face-closed complex");
            space.insert(b.members().to_vec());
        }
        Self { space }
    }

    pub fn is_null(&self, c: &Chain) -> bool {
        self.space.contains(c.members())
    }

    /// Residual of the cycle against the boundary space; equal residuals mean
    /// homologous cycles.
    pub fn residual(&self, c: &Chain) -> Vec<usize> {
        self.space.reduce(c.members().to_vec())
    }
}

/// A vertex/edge graph whose edges carry simplex ids of some complex.
#[derive(Debug, Clone, Default)]
pub struct EdgeGraph {
    /// (u, v, edge simplex id) with u < v.
    pub edges: Vec<(VertexId, VertexId, SimplexId)>,
}

impl EdgeGraph {
    /// The 1-skeleton of a complex.
    pub fn from_complex(complex: &SimplicialComplex) -> Self {
        let mut edges = Vec::new();
        for id in complex.ids_of_dim(1) {
            let s = complex.simplex(id).unwrap();
            edges.push((s.vertices()[0], s.vertices()[1], id));
        }
        Self { edges }
    }

    fn vertices(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self.edges.iter().flat_map(|&(u, v, _)| [u, v]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}

/// Fundamental cycles of the graph: a BFS spanning tree is grown from the
/// lowest-id vertex of each component, and every co-tree edge contributes the
/// cycle formed with the tree path between its endpoints. Returns
/// `|E| - |V| + #components` cycles as 1-chains.
pub fn fundamental_cycles(graph: &EdgeGraph) -> Vec<Chain> {
    let vertices = graph.vertices();
    let mut adj: BTreeMap<VertexId, Vec<(VertexId, SimplexId)>> = BTreeMap::new();
    for &(u, v, sid) in &graph.edges {
        adj.entry(u).or_default().push((v, sid));
        adj.entry(v).or_default().push((u, sid));
    }
    for nbrs in adj.values_mut() {
        nbrs.sort_unstable();
    }

    // BFS forest with parent edges
    let mut parent: HashMap<VertexId, (VertexId, SimplexId)> = HashMap::new();
    let mut visited: BTreeSet<VertexId> = BTreeSet::new();
    let mut tree_edges: HashSet<SimplexId> = HashSet::new();
    for &root in &vertices {
        if visited.contains(&root) {
            continue;
        }
        visited.insert(root);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if let Some(nbrs) = adj.get(&u) {
                for &(v, sid) in nbrs {
                    if visited.insert(v) {
                        parent.insert(v, (u, sid));
                        tree_edges.insert(sid);
                        queue.push_back(v);
                    }
                }
            }
        }
    }

    let path_to_root = |mut v: VertexId| -> Vec<SimplexId> {
        let mut path = Vec::new();
        while let Some(&(p, sid)) = parent.get(&v) {
            path.push(sid);
            v = p;
        }
        path
    };

    let mut cycles = Vec::new();
    for &(u, v, sid) in &graph.edges {
        if tree_edges.contains(&sid) {
            continue;
        }
        // tree paths to the root; the shared suffix cancels over Z/2
        let mut ids: BTreeSet<SimplexId> = BTreeSet::new();
        for e in path_to_root(u).into_iter().chain(path_to_root(v)) {
            if !ids.insert(e) {
                ids.remove(&e);
            }
        }
        ids.insert(sid);
        cycles.push(Chain::from_sorted_unchecked(1, ids.into_iter().collect()));
    }
    cycles
}

/// Build the simplicial complex of a triangle mesh (vertices, edges, faces).
pub fn surface_complex(mesh: &TriMesh) -> Result<SimplicialComplex> {
    SimplicialComplex::from_simplices(
        mesh.faces
            .iter()
            .map(|f| Simplex::triangle(f[0], f[1], f[2]))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Complex of the surface plus a conforming tet complex.
fn volume_complex(mesh: &TriMesh, tets: &TetComplex) -> Result<SimplicialComplex> {
    let mut complex = surface_complex(mesh)?;
    for t in &tets.tets {
        complex.insert(Simplex::from_unsorted(t.to_vec())?);
    }
    Ok(complex)
}

/// Two-phase filtration: the surface subcomplex first under an edge-length
/// key, then the remaining (volume) simplices ordered by the distance of
/// their barycenter to the surface, values shifted past the surface range.
/// `positions[v]` must cover every vertex id of the complex.
fn two_phase_filtration(
    complex: Arc<SimplicialComplex>,
    mesh: &TriMesh,
    positions: &[Vec3],
) -> Result<Filtration> {
    let surf = surface_complex(mesh)?;
    let is_surface: Vec<bool> = complex
        .iter()
        .map(|(_, s)| surf.id_of(s).is_some())
        .collect();

    let pos = |v: VertexId| positions[v as usize];
    let mut key = vec![0.0f64; complex.len()];
    for (id, s) in complex.iter() {
        let vs = s.vertices();
        if is_surface[id] {
            let mut m = 0.0f64;
            for a in 0..vs.len() {
                for b in (a + 1)..vs.len() {
                    m = m.max(geom::distance(pos(vs[a]), pos(vs[b])));
                }
            }
            key[id] = m; // 0 for vertices, length for edges, max edge for faces
        } else {
            let mut bary = [0.0; 3];
            for &v in vs {
                bary = geom::add(bary, pos(v));
            }
            bary = geom::scale(bary, 1.0 / vs.len() as f64);
            key[id] = distance_to_surface(bary, mesh);
        }
    }

    // lower-star repair within each phase (surface faces always precede
    // volume cofaces after the shift, so cross-phase pairs need none)
    let mut ids: Vec<SimplexId> = (0..complex.len()).collect();
    ids.sort_by_key(|&id| complex.simplex(id).unwrap().dim());
    for &id in &ids {
        for f in complex.simplex(id)?.faces() {
            let fid = complex.id_of(&f).unwrap();
            if is_surface[fid] == is_surface[id] && key[fid] > key[id] {
                key[id] = key[fid];
            }
        }
    }

    let mut phase1: Vec<SimplexId> = (0..complex.len()).filter(|&i| is_surface[i]).collect();
    let mut phase2: Vec<SimplexId> = (0..complex.len()).filter(|&i| !is_surface[i]).collect();
    let cmp = |a: &SimplexId, b: &SimplexId| {
        let sa = complex.simplex(*a).unwrap();
        let sb = complex.simplex(*b).unwrap();
        key[*a]
            .partial_cmp(&key[*b])
            .unwrap()
            .then(sa.dim().cmp(&sb.dim()))
            .then(sa.vertices().cmp(sb.vertices()))
    };
    phase1.sort_by(cmp);
    phase2.sort_by(cmp);

    let shift = phase1.last().map(|&id| key[id]).unwrap_or(0.0);
    let split = phase1.len();
    let mut values: Vec<f64> = phase1.iter().map(|&id| key[id]).collect();
    values.extend(phase2.iter().map(|&id| shift + key[id]));
    let mut order = phase1;
    order.extend(phase2);

    Ok(Filtration::from_order(complex, order, values)?.with_phase_split(split))
}

/// Distance from a point to the closest surface triangle.
fn distance_to_surface(p: Vec3, mesh: &TriMesh) -> f64 {
    let mut best = f64::INFINITY;
    for fi in 0..mesh.n_faces() {
        let [a, b, c] = mesh.face_positions(fi);
        best = best.min(point_triangle_distance(p, a, b, c));
        if best == 0.0 {
            break;
        }
    }
    best
}

/// Euclidean distance from `p` to triangle `abc` (Ericson's region method).
pub fn point_triangle_distance(p: Vec3, a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let ab = geom::sub(b, a);
    let ac = geom::sub(c, a);
    let ap = geom::sub(p, a);
    let d1 = geom::dot(ab, ap);
    let d2 = geom::dot(ac, ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return geom::norm(ap);
    }
    let bp = geom::sub(p, b);
    let d3 = geom::dot(ab, bp);
    let d4 = geom::dot(ac, bp);
    if d3 >= 0.0 && d4 <= d3 {
        return geom::norm(bp);
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let t = d1 / (d1 - d3);
        return geom::distance(p, geom::add(a, geom::scale(ab, t)));
    }
    let cp = geom::sub(p, c);
    let d5 = geom::dot(ab, cp);
    let d6 = geom::dot(ac, cp);
    if d6 >= 0.0 && d5 <= d6 {
        return geom::norm(cp);
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let t = d2 / (d2 - d6);
        return geom::distance(p, geom::add(a, geom::scale(ac, t)));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return geom::distance(p, geom::add(b, geom::scale(geom::sub(c, b), t)));
    }
    let n = geom::cross(ab, ac);
    let nn = geom::norm(n);
    if nn <= 1e-300 {
        return geom::norm(ap).min(geom::norm(bp)).min(geom::norm(cp));
    }
    (geom::dot(ap, n) / nn).abs()
}

/// Detect handle and tunnel loops of a closed surface with a conforming
/// interior complex (and optionally a conforming exterior complex).
pub fn detect_loops(
    surface: &TriMesh,
    interior: &TetComplex,
    exterior: Option<&TetComplex>,
) -> Result<LoopReport> {
    let g = genus(surface)?;
    interior.check_conforms_to(surface)?;
    if let Some(ext) = exterior {
        ext.check_conforms_to(surface)?;
    }

    let surf_cx = Arc::new(surface_complex(surface)?);
    let si_cx = Arc::new(volume_complex(surface, interior)?);
    let si_filt = two_phase_filtration(si_cx.clone(), surface, &interior.vertices)?;
    let si_pairing = pair(&si_filt);
    let split = si_filt.phase_split().unwrap();

    // surface-phase survivors and how many the interior phase kills
    let mut survivors: Vec<SimplexId> = Vec::new();
    let mut interior_killed = 0usize;
    let mut killer_triangles: Vec<SimplexId> = Vec::new();
    for p in 0..split {
        let id = si_filt.id_at(p);
        if si_cx.simplex(id)?.dim() != 1 || !si_pairing.is_positive(&si_filt, id) {
            continue;
        }
        match si_pairing.partner_of(&si_filt, id) {
            None => survivors.push(id),
            Some(partner) => {
                if si_filt.position_of(partner) >= split {
                    survivors.push(id);
                    interior_killed += 1;
                    killer_triangles.push(partner);
                }
            }
        }
    }
    let surface_unpaired = survivors.len();

    let surf_tester = HomologyTester::new(&surf_cx);
    let si_tester = HomologyTester::new(&si_cx);

    // optional exterior complex for tunnel tracing and certification
    let se_data = match exterior {
        Some(ext) => {
            let se_cx = Arc::new(volume_complex(surface, ext)?);
            let se_filt = two_phase_filtration(se_cx.clone(), surface, &ext.vertices)?;
            let se_pairing = pair(&se_filt);
            let se_tester = HomologyTester::new(&se_cx);
            Some((se_cx, se_filt, se_pairing, se_tester))
        }
        None => None,
    };

    if g == 0 {
        return Ok(LoopReport {
            handles: Vec::new(),
            tunnels: Vec::new(),
            genus: 0,
            surface_complex: surf_cx,
            surface_unpaired_edges: surface_unpaired,
            interior_killed_edges: interior_killed,
        });
    }

    // ---- candidate surface cycles ----
    let mut pool: Vec<Chain> = Vec::new();

    for &d in &killer_triangles {
        let c = mark_loop(&si_pairing, d, &si_filt)?;
        if let Some(t) = translate_chain(&c, &si_cx, &surf_cx) {
            pool.push(t);
        }
    }
    if let Some((se_cx, se_filt, se_pairing, _)) = &se_data {
        let se_split = se_filt.phase_split().unwrap();
        for p in se_split..se_filt.len() {
            let id = se_filt.id_at(p);
            if se_cx.simplex(id)?.dim() != 2 || se_pairing.is_positive(se_filt, id) {
                continue;
            }
            let Some(partner) = se_pairing.partner_of(se_filt, id) else {
                continue;
            };
            if se_filt.position_of(partner) < se_split && se_cx.simplex(partner)?.dim() == 1 {
                let c = mark_loop(se_pairing, id, se_filt)?;
                if let Some(t) = translate_chain(&c, se_cx, &surf_cx) {
                    pool.push(t);
                }
            }
        }
    }
    // birth cycles of the 2g survivors: survivor edge closed through the
    // forest of negative surface edges
    {
        let mut forest = EdgeGraph::default();
        for p in 0..split {
            let id = si_filt.id_at(p);
            let s = si_cx.simplex(id)?;
            if s.dim() == 1 && !si_pairing.is_positive(&si_filt, id) {
                forest.edges.push((s.vertices()[0], s.vertices()[1], id));
            }
        }
        for &survivor in &survivors {
            let mut graph = forest.clone();
            let s = si_cx.simplex(survivor)?;
            graph
                .edges
                .push((s.vertices()[0], s.vertices()[1], survivor));
            for cycle in fundamental_cycles(&graph) {
                if cycle.contains(survivor) {
                    if let Some(t) = translate_chain(&cycle, &si_cx, &surf_cx) {
                        pool.push(t);
                    }
                }
            }
        }
    }
    pool.extend(fundamental_cycles(&EdgeGraph::from_complex(&surf_cx)));

    // decompose into deduplicated simple cycles, shortest first
    let mut seen: BTreeSet<Vec<SimplexId>> = BTreeSet::new();
    let mut simple: Vec<SimpleCycle> = Vec::new();
    for chain in &pool {
        for cyc in decompose_simple_cycles(chain, &surf_cx) {
            if seen.insert(cyc.edges.members().to_vec()) {
                simple.push(cyc);
            }
        }
    }
    let sort_cycles = |cycles: &mut Vec<SimpleCycle>| {
        cycles.sort_by(|a, b| {
            cycle_length(a, surface)
                .partial_cmp(&cycle_length(b, surface))
                .unwrap()
                .then_with(|| a.edges.members().cmp(b.edges.members()))
        });
    };
    sort_cycles(&mut simple);

    // ---- classify and greedily select independent representatives ----
    let mut handles: Vec<LoopCycle> = Vec::new();
    let mut tunnels: Vec<LoopCycle> = Vec::new();
    let mut handle_span = ColumnSpace::new(); // surface-class residuals
    let mut tunnel_span = ColumnSpace::new(); // surface+interior residuals

    let mut classify = |cycles: &[SimpleCycle],
                        handles: &mut Vec<LoopCycle>,
                        tunnels: &mut Vec<LoopCycle>,
                        handle_span: &mut ColumnSpace,
                        tunnel_span: &mut ColumnSpace| {
        for cyc in cycles {
            if handles.len() >= g && tunnels.len() >= g {
                break;
            }
            if surf_tester.is_null(&cyc.edges) {
                continue;
            }
            let si_chain = translate_chain(&cyc.edges, &surf_cx, &si_cx)
                .expect("surface cycles embed in the volume complex");
            if si_tester.is_null(&si_chain) {
                if handles.len() < g && handle_span.insert(surf_tester.residual(&cyc.edges)) {
                    handles.push(make_loop(cyc, LoopKind::Handle, surface));
                }
            } else {
                if let Some((se_cx, _, _, se_tester)) = &se_data {
                    let se_chain = translate_chain(&cyc.edges, &surf_cx, se_cx)
                        .expect("surface cycles embed in the exterior complex");
                    if !se_tester.is_null(&se_chain) {
                        continue; // mixed class; not a pure tunnel
                    }
                }
                if tunnels.len() < g && tunnel_span.insert(si_tester.residual(&si_chain)) {
                    tunnels.push(make_loop(cyc, LoopKind::Tunnel, surface));
                }
            }
        }
    };
    classify(
        &simple,
        &mut handles,
        &mut tunnels,
        &mut handle_span,
        &mut tunnel_span,
    );

    // fallback: pairwise sums occasionally expose pure classes the pool lacks
    if handles.len() < g || tunnels.len() < g {
        let mut extra: Vec<SimpleCycle> = Vec::new();
        'outer: for i in 0..simple.len().min(64) {
            for j in (i + 1)..simple.len().min(64) {
                let sum = simple[i].edges.add(&simple[j].edges)?;
                for cyc in decompose_simple_cycles(&sum, &surf_cx) {
                    if seen.insert(cyc.edges.members().to_vec()) {
                        extra.push(cyc);
                        if extra.len() >= 512 {
                            break 'outer;
                        }
                    }
                }
            }
        }
        sort_cycles(&mut extra);
        classify(
            &extra,
            &mut handles,
            &mut tunnels,
            &mut handle_span,
            &mut tunnel_span,
        );
    }

    if handles.len() != g || tunnels.len() != g {
        return Err(Error::topology(format!(
            "expected {g} handle and {g} tunnel loops, found {} and {}",
            handles.len(),
            tunnels.len()
        )));
    }

    // refine geometrically; class preservation is re-checked per move
    let refine = |loops: Vec<LoopCycle>| -> Result<Vec<LoopCycle>> {
        loops
            .into_iter()
            .map(|l| shorten_loop(&l, surface, 50))
            .collect()
    };
    let handles = refine(handles)?;
    let tunnels = refine(tunnels)?;

    Ok(LoopReport {
        handles,
        tunnels,
        genus: g,
        surface_complex: surf_cx,
        surface_unpaired_edges: surface_unpaired,
        interior_killed_edges: interior_killed,
    })
}

/// Map a chain to another complex through shared vertex ids. `None` if some
/// simplex does not exist there.
pub fn translate_chain(
    chain: &Chain,
    from: &SimplicialComplex,
    to: &SimplicialComplex,
) -> Option<Chain> {
    let Some(dim) = chain.dim() else {
        return Some(Chain::empty());
    };
    let mut ids = Vec::with_capacity(chain.len());
    for &id in chain.members() {
        let s = from.simplex(id).ok()?;
        ids.push(to.id_of(s)?);
    }
    ids.sort_unstable();
    Some(Chain::from_sorted_unchecked(dim, ids))
}

/// A simple closed cycle: edge chain plus its vertex walk.
#[derive(Debug, Clone)]
struct SimpleCycle {
    edges: Chain,
    walk: Vec<VertexId>,
}

fn cycle_length(cyc: &SimpleCycle, mesh: &TriMesh) -> f64 {
    let n = cyc.walk.len();
    (0..n)
        .map(|i| {
            geom::distance(
                mesh.vertices[cyc.walk[i] as usize],
                mesh.vertices[cyc.walk[(i + 1) % n] as usize],
            )
        })
        .sum()
}

fn make_loop(cyc: &SimpleCycle, kind: LoopKind, mesh: &TriMesh) -> LoopCycle {
    LoopCycle {
        edges: cyc.edges.clone(),
        kind,
        vertex_sequence: cyc.walk.clone(),
        length: cycle_length(cyc, mesh),
    }
}

/// Split an even-degree edge chain into vertex-simple cycles. Walks greedily
/// and peels off the inner loop whenever a vertex repeats.
fn decompose_simple_cycles(chain: &Chain, complex: &SimplicialComplex) -> Vec<SimpleCycle> {
    let ends = |id: SimplexId| -> (VertexId, VertexId) {
        let v = complex.simplex(id).unwrap().vertices();
        (v[0], v[1])
    };
    let mut unused: BTreeSet<SimplexId> = chain.members().iter().copied().collect();
    let mut incident: BTreeMap<VertexId, BTreeSet<SimplexId>> = BTreeMap::new();
    for &id in chain.members() {
        let (u, v) = ends(id);
        incident.entry(u).or_default().insert(id);
        incident.entry(v).or_default().insert(id);
    }

    let mut out = Vec::new();
    while let Some(&start_edge) = unused.iter().next() {
        let consume = |id: SimplexId,
                       unused: &mut BTreeSet<SimplexId>,
                       incident: &mut BTreeMap<VertexId, BTreeSet<SimplexId>>| {
            unused.remove(&id);
            let (u, v) = ends(id);
            incident.get_mut(&u).unwrap().remove(&id);
            incident.get_mut(&v).unwrap().remove(&id);
        };
        let (a, b) = ends(start_edge);
        let mut walk: Vec<VertexId> = vec![a, b];
        let mut walk_edges: Vec<SimplexId> = vec![start_edge];
        consume(start_edge, &mut unused, &mut incident);

        loop {
            let cur = *walk.last().unwrap();
            if let Some(p) = walk[..walk.len() - 1].iter().position(|&v| v == cur) {
                // peel the loop between the two occurrences
                let cycle_walk: Vec<VertexId> = walk[p..walk.len() - 1].to_vec();
                let mut cycle_edges: Vec<SimplexId> = walk_edges[p..].to_vec();
                cycle_edges.sort_unstable();
                out.push(SimpleCycle {
                    edges: Chain::from_sorted_unchecked(1, cycle_edges),
                    walk: canonical_walk(cycle_walk),
                });
                walk.truncate(p + 1);
                walk_edges.truncate(p);
                if walk.len() <= 1 {
                    break;
                }
                continue;
            }
            let Some(&next_edge) = incident.get(&cur).and_then(|s| s.iter().next()) else {
                break; // stray path edges are dropped
            };
            let (u, v) = ends(next_edge);
            let nxt = if u == cur { v } else { u };
            consume(next_edge, &mut unused, &mut incident);
            walk.push(nxt);
            walk_edges.push(next_edge);
        }
    }
    out
}

/// Rotate/reflect the walk to start at its smallest vertex, heading toward
/// the smaller of its two neighbors.
fn canonical_walk(walk: Vec<VertexId>) -> Vec<VertexId> {
    if walk.is_empty() {
        return walk;
    }
    let n = walk.len();
    let start = (0..n).min_by_key(|&i| walk[i]).unwrap();
    let fwd = walk[(start + 1) % n];
    let bwd = walk[(start + n - 1) % n];
    let mut out = Vec::with_capacity(n);
    if fwd <= bwd {
        for i in 0..n {
            out.push(walk[(start + i) % n]);
        }
    } else {
        for i in 0..n {
            out.push(walk[(start + n - i) % n]);
        }
    }
    out
}

/// Birkhoff-style local shortening: replace the middle of each 3-vertex
/// sub-arc with the shortest edge path through the triangles incident to the
/// arc, keeping the walk vertex-simple and the homology class unchanged.
/// Stops after a full round without improvement or after `max_rounds`.
pub fn shorten_loop(loop_: &LoopCycle, surface: &TriMesh, max_rounds: usize) -> Result<LoopCycle> {
    let complex = surface_complex(surface)?;
    let tester = HomologyTester::new(&complex);
    let edge_faces = surface.edge_faces();

    let edge_id = |u: VertexId, v: VertexId| -> Option<SimplexId> {
        complex.id_of(&Simplex::edge(u, v).ok()?)
    };
    let mut walk = loop_.vertex_sequence.clone();
    for i in 0..walk.len() {
        let (u, v) = (walk[i], walk[(i + 1) % walk.len()]);
        if !edge_faces.contains_key(&[u.min(v), u.max(v)]) {
            return Err(Error::invalid_argument(format!(
                "loop edge ({u},{v}) is not a surface edge"
            )));
        }
    }

    let mut vertex_faces: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for (fi, f) in surface.faces.iter().enumerate() {
        for &v in f {
            vertex_faces.entry(v).or_default().push(fi);
        }
    }

    let chain_of = |walk: &[VertexId]| -> Chain {
        let mut ids: Vec<SimplexId> = (0..walk.len())
            .map(|i| edge_id(walk[i], walk[(i + 1) % walk.len()]).unwrap())
            .collect();
        ids.sort_unstable();
        Chain::from_sorted_unchecked(1, ids)
    };
    let arc_len = |a: VertexId, b: VertexId| {
        geom::distance(surface.vertices[a as usize], surface.vertices[b as usize])
    };

    for _round in 0..max_rounds {
        let mut improved = false;
        let mut i = 0;
        while i < walk.len() && walk.len() > 3 {
            let n = walk.len();
            let (a, x, b) = (walk[i], walk[(i + 1) % n], walk[(i + 2) % n]);
            let current = arc_len(a, x) + arc_len(x, b);

            let mut allowed: BTreeSet<[VertexId; 2]> = BTreeSet::new();
            for &v in &[a, x, b] {
                if let Some(faces) = vertex_faces.get(&v) {
                    for &fi in faces {
                        let f = surface.faces[fi];
                        for (p, q) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                            allowed.insert([p.min(q), p.max(q)]);
                        }
                    }
                }
            }
            let Some(path) = shortest_path(a, b, &allowed, surface) else {
                i += 1;
                continue;
            };
            let path_len: f64 = path.windows(2).map(|w| arc_len(w[0], w[1])).sum();
            if path_len >= current - 1e-12 {
                i += 1;
                continue;
            }

            // splice the path in place of (a, x, b)
            let mut next_walk: Vec<VertexId> = Vec::with_capacity(n + path.len());
            let mut k = (i + 2) % n; // walk from b around to a, then the path
            while walk[k] != a {
                next_walk.push(walk[k]);
                k = (k + 1) % n;
            }
            next_walk.push(a);
            next_walk.extend_from_slice(&path[1..path.len() - 1]);
            // (b is already the first entry)

            let mut uniq: BTreeSet<VertexId> = BTreeSet::new();
            if next_walk.len() < 3 || !next_walk.iter().all(|&v| uniq.insert(v)) {
                i += 1;
                continue;
            }
            let diff = chain_of(&walk).add(&chain_of(&next_walk))?;
            if !tester.is_null(&diff) {
                i += 1;
                continue;
            }
            walk = next_walk;
            improved = true;
            i = 0;
        }
        if !improved {
            break;
        }
    }

    let walk = canonical_walk(walk);
    let edges = chain_of(&walk);
    let length: f64 = (0..walk.len())
        .map(|i| arc_len(walk[i], walk[(i + 1) % walk.len()]))
        .sum();
    Ok(LoopCycle {
        edges,
        kind: loop_.kind,
        vertex_sequence: walk,
        length,
    })
}

/// Dijkstra over an explicit set of allowed edges.
fn shortest_path(
    from: VertexId,
    to: VertexId,
    allowed: &BTreeSet<[VertexId; 2]>,
    mesh: &TriMesh,
) -> Option<Vec<VertexId>> {
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for e in allowed {
        adj.entry(e[0]).or_default().push(e[1]);
        adj.entry(e[1]).or_default().push(e[0]);
    }
    let mut dist: HashMap<VertexId, f64> = HashMap::new();
    let mut prev: HashMap<VertexId, VertexId> = HashMap::new();
    let mut heap: BinaryHeap<std::cmp::Reverse<(u64, VertexId)>> = BinaryHeap::new();
    dist.insert(from, 0.0);
    heap.push(std::cmp::Reverse((0, from)));
    while let Some(std::cmp::Reverse((dbits, u))) = heap.pop() {
        let du = f64::from_bits(dbits);
        if du > *dist.get(&u).unwrap_or(&f64::INFINITY) {
            continue;
        }
        if u == to {
            break;
        }
        if let Some(nbrs) = adj.get(&u) {
            for &v in nbrs {
                let w = geom::distance(mesh.vertices[u as usize], mesh.vertices[v as usize]);
                let nd = du + w;
                if nd < *dist.get(&v).unwrap_or(&f64::INFINITY) - 1e-15 {
                    dist.insert(v, nd);
                    prev.insert(v, u);
                    heap.push(std::cmp::Reverse((nd.to_bits(), v)));
                }
            }
        }
    }
    if !dist.contains_key(&to) {
        return None;
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = *prev.get(&cur)?;
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

/// Line-set record per loop: `kind vertex_count v0 v1 ... v0`.
pub fn write_loop_lineset<W: Write>(report: &LoopReport, mut w: W) -> std::io::Result<()> {
    for l in report.handles.iter().chain(report.tunnels.iter()) {
        write!(w, "{} {}", l.kind, l.vertex_sequence.len())?;
        for v in &l.vertex_sequence {
            write!(w, " {v}")?;
        }
        writeln!(w, " {}", l.vertex_sequence[0])?;
    }
    Ok(())
}

/// JSON sidecar schema for loop exports.
#[derive(Debug, Serialize, Deserialize)]
pub struct LoopSidecar {
    pub genus: usize,
    pub handles: Vec<LoopInfo>,
    pub tunnels: Vec<LoopInfo>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LoopInfo {
    pub length: f64,
    pub vertex_count: usize,
}

impl LoopSidecar {
    pub fn from_report(report: &LoopReport) -> Self {
        let info = |l: &LoopCycle| LoopInfo {
            length: l.length,
            vertex_count: l.vertex_sequence.len(),
        };
        Self {
            genus: report.genus,
            handles: report.handles.iter().map(info).collect(),
            tunnels: report.tunnels.iter().map(info).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{make_torus, make_voxel_genus_solid, torus_interior_tets};

    fn chain_from_edges(
        complex: &SimplicialComplex,
        edges: &[(VertexId, VertexId)],
    ) -> Chain {
        let mut ids: Vec<SimplexId> = edges
            .iter()
            .map(|&(u, v)| complex.id_of(&Simplex::edge(u, v).unwrap()).unwrap())
            .collect();
        ids.sort_unstable();
        Chain::from_sorted_unchecked(1, ids)
    }

    #[test]
    fn fundamental_cycles_of_square_tree_and_k4() {
        // 4-cycle
        let square = EdgeGraph {
            edges: vec![(0, 1, 10), (1, 2, 11), (2, 3, 12), (0, 3, 13)],
        };
        let cycles = fundamental_cycles(&square);
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 4);
        // tree
        let tree = EdgeGraph {
            edges: vec![(0, 1, 0), (1, 2, 1), (1, 3, 2)],
        };
        assert!(fundamental_cycles(&tree).is_empty());
        // K4
        let mut edges = Vec::new();
        let mut sid = 0;
        for u in 0..4u32 {
            for v in (u + 1)..4 {
                edges.push((u, v, sid));
                sid += 1;
            }
        }
        assert_eq!(fundamental_cycles(&EdgeGraph { edges }).len(), 3);
    }

    #[test]
    fn fundamental_cycles_handles_disconnected_graphs() {
        let two_triangles = EdgeGraph {
            edges: vec![
                (0, 1, 0),
                (1, 2, 1),
                (0, 2, 2),
                (10, 11, 3),
                (11, 12, 4),
                (10, 12, 5),
            ],
        };
        assert_eq!(fundamental_cycles(&two_triangles).len(), 2);
    }

    #[test]
    fn null_homologous_triangle_boundary() {
        let mesh = make_torus(2.0, 0.5, 8, 8).unwrap();
        let cx = surface_complex(&mesh).unwrap();
        let f = mesh.faces[0];
        let boundary = chain_from_edges(&cx, &[(f[0], f[1]), (f[1], f[2]), (f[0], f[2])]);
        assert!(null_homologous(&boundary, &cx).unwrap());
    }

    #[test]
    fn null_homologous_rejects_non_cycles() {
        let mesh = make_torus(2.0, 0.5, 8, 8).unwrap();
        let cx = surface_complex(&mesh).unwrap();
        let f = mesh.faces[0];
        let path = chain_from_edges(&cx, &[(f[0], f[1])]);
        assert!(null_homologous(&path, &cx).is_err());
    }

    #[test]
    fn torus_meridian_bounds_in_solid_but_not_on_surface() {
        let (nu, nv) = (12, 10);
        let mesh = make_torus(2.0, 0.5, nu, nv).unwrap();
        let interior = torus_interior_tets(2.0, 0.5, nu, nv).unwrap();
        let surf_cx = surface_complex(&mesh).unwrap();
        let si_cx = volume_complex(&mesh, &interior).unwrap();
        // meridian at u=0: vertices j = 0..nv around the tube
        let edges: Vec<(VertexId, VertexId)> = (0..nv)
            .map(|j| (j as u32, ((j + 1) % nv) as u32))
            .collect();
        let meridian_surf = chain_from_edges(&surf_cx, &edges);
        let meridian_si = chain_from_edges(&si_cx, &edges);
        assert!(!null_homologous(&meridian_surf, &surf_cx).unwrap());
        assert!(null_homologous(&meridian_si, &si_cx).unwrap());
    }

    #[test]
    fn detect_loops_on_parametric_torus() {
        let (nu, nv) = (12, 10);
        let mesh = make_torus(2.0, 0.5, nu, nv).unwrap();
        let interior = torus_interior_tets(2.0, 0.5, nu, nv).unwrap();
        let report = detect_loops(&mesh, &interior, None).unwrap();
        assert_eq!(report.genus, 1);
        assert_eq!(report.surface_unpaired_edges, 2);
        assert_eq!(report.interior_killed_edges, 1);
        assert_eq!(report.handles.len(), 1);
        assert_eq!(report.tunnels.len(), 1);

        // certification
        let surf = &report.surface_complex;
        let si_cx = volume_complex(&mesh, &interior).unwrap();
        for h in &report.handles {
            assert!(!null_homologous(&h.edges, surf).unwrap());
            let si = translate_chain(&h.edges, surf, &si_cx).unwrap();
            assert!(null_homologous(&si, &si_cx).unwrap());
        }
        for t in &report.tunnels {
            assert!(!null_homologous(&t.edges, surf).unwrap());
            let si = translate_chain(&t.edges, surf, &si_cx).unwrap();
            assert!(!null_homologous(&si, &si_cx).unwrap());
        }
    }

    #[test]
    fn detect_loops_on_genus0_voxel_fixture() {
        let fx = make_voxel_genus_solid(0, 4).unwrap();
        let report = detect_loops(&fx.surface, &fx.interior, Some(&fx.exterior)).unwrap();
        assert_eq!(report.genus, 0);
        assert!(report.handles.is_empty());
        assert!(report.tunnels.is_empty());
        assert_eq!(report.surface_unpaired_edges, 0);
    }

    #[test]
    fn detect_loops_on_genus1_voxel_fixture() {
        let fx = make_voxel_genus_solid(1, 8).unwrap();
        let report = detect_loops(&fx.surface, &fx.interior, Some(&fx.exterior)).unwrap();
        assert_eq!(report.genus, 1);
        assert_eq!(report.surface_unpaired_edges, 2);
        assert_eq!(report.interior_killed_edges, 1);
        assert_eq!(report.handles.len(), 1);
        assert_eq!(report.tunnels.len(), 1);

        let surf = &report.surface_complex;
        let se_cx = volume_complex(&fx.surface, &fx.exterior).unwrap();
        for t in &report.tunnels {
            let se = translate_chain(&t.edges, surf, &se_cx).unwrap();
            assert!(null_homologous(&se, &se_cx).unwrap());
        }
    }

    #[test]
    fn detect_loops_rejects_open_surface() {
        let fx = make_voxel_genus_solid(0, 4).unwrap();
        let mut open = fx.surface.clone();
        open.faces.pop();
        assert!(matches!(
            detect_loops(&open, &fx.interior, None),
            Err(Error::Topology(_))
        ));
    }

    #[test]
    fn shorten_removes_detours_and_preserves_class() {
        let (nu, nv) = (16, 12);
        let mesh = make_torus(2.0, 0.5, nu, nv).unwrap();
        let interior = torus_interior_tets(2.0, 0.5, nu, nv).unwrap();
        let report = detect_loops(&mesh, &interior, None).unwrap();
        let cx = surface_complex(&mesh).unwrap();
        for l in report.handles.iter().chain(report.tunnels.iter()) {
            let again = shorten_loop(l, &mesh, 50).unwrap();
            assert!(again.length <= l.length + 1e-12);
            let diff = translate_chain(&again.edges, &report.surface_complex, &cx)
                .unwrap()
                .add(&translate_chain(&l.edges, &report.surface_complex, &cx).unwrap())
                .unwrap();
            assert!(null_homologous(&diff, &cx).unwrap());
        }
    }

    #[test]
    fn loop_lineset_format() {
        let report = LoopReport {
            handles: vec![LoopCycle {
                edges: Chain::empty(),
                kind: LoopKind::Handle,
                vertex_sequence: vec![3, 5, 9],
                length: 1.5,
            }],
            tunnels: vec![],
            genus: 1,
            surface_complex: Arc::new(SimplicialComplex::new()),
            surface_unpaired_edges: 2,
            interior_killed_edges: 1,
        };
        let mut buf = Vec::new();
        write_loop_lineset(&report, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "handle 3 3 5 9 3\n");
    }
}
