//! Persistence pairing over Z/2 and point-cloud filtration builders.
//!
//! [`pair`] runs the sequential column reduction: each simplex either creates
//! a homology class (positive) or destroys one (negative), in which case it
//! pairs with the youngest positive simplex left in its reduced boundary.
//! The reduced chain of every negative simplex is kept so that
//! representative-cycle tracing ([`mark_loop`]) can replay reductions instead
//! of starting from raw boundaries.

use std::collections::HashMap;
use std::io::Write;
use std::sync::Arc;

use crate::complex::{Chain, Filtration, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geom::{self, Vec3};
use crate::gf2::sym_diff;

/// Result of the pairing reduction over a filtration.
///
/// All bookkeeping is by filtration position; accessors translate to simplex
/// ids. Immutable once computed, and deterministic given the filtration.
#[derive(Debug, Clone)]
pub struct Pairing {
    order: Vec<usize>,  // position -> simplex id
    dims: Vec<u8>,      // position -> simplex dimension
    positive: Vec<bool>,
    partner: Vec<Option<usize>>, // position -> partner position
    reduced: HashMap<usize, Vec<usize>>, // negative position -> reduced chain (positions)
}

impl Pairing {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    fn position_of(&self, f: &Filtration, id: usize) -> usize {
        f.position_of(id)
    }

    pub fn is_positive(&self, f: &Filtration, id: usize) -> bool {
        self.positive[self.position_of(f, id)]
    }

    /// Partner simplex id, if `id` is paired.
    pub fn partner_of(&self, f: &Filtration, id: usize) -> Option<usize> {
        self.partner[self.position_of(f, id)].map(|p| self.order[p])
    }

    /// Pairs as (positive id, negative id), in filtration order of the
    /// negative member.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order.len()).filter_map(move |pos| {
            if self.positive[pos] {
                return None;
            }
            self.partner[pos].map(|tau| (self.order[tau], self.order[pos]))
        })
    }

    /// Ids of positive simplices never paired, in filtration order.
    pub fn positive_unpaired(&self) -> Vec<usize> {
        (0..self.order.len())
            .filter(|&pos| self.positive[pos] && self.partner[pos].is_none())
            .map(|pos| self.order[pos])
            .collect()
    }

    /// Ids of positive unpaired simplices of dimension `p`.
    pub fn positive_unpaired_of_dim(&self, p: usize) -> Vec<usize> {
        (0..self.order.len())
            .filter(|&pos| {
                self.positive[pos] && self.partner[pos].is_none() && self.dims[pos] as usize == p
            })
            .map(|pos| self.order[pos])
            .collect()
    }

    /// The reduced boundary chain stored when `id` was paired as negative.
    pub fn reduced_chain(&self, f: &Filtration, id: usize) -> Option<Chain> {
        let pos = self.position_of(f, id);
        self.reduced.get(&pos).map(|positions| {
            let mut ids: Vec<usize> = positions.iter().map(|&p| self.order[p]).collect();
            ids.sort_unstable();
            Chain::from_sorted_unchecked(self.dims[pos] as usize - 1, ids)
        })
    }

    pub fn n_pairs(&self) -> usize {
        self.reduced.len()
    }

    pub fn n_positive(&self) -> usize {
        self.positive.iter().filter(|&&b| b).count()
    }

    /// Betti number of the prefix complex formed by the first `prefix` simplices:
    /// positives of dimension `p` seen so far minus negatives of dimension
    /// `p + 1` (each negative's partner lies in the same prefix).
    pub fn prefix_betti(&self, prefix: usize, p: usize) -> usize {
        let mut born = 0usize;
        let mut died = 0usize;
        for pos in 0..prefix.min(self.order.len()) {
            let d = self.dims[pos] as usize;
            if self.positive[pos] && d == p {
                born += 1;
            } else if !self.positive[pos] && d == p + 1 {
                died += 1;
            }
        }
        born - died
    }
}

/// Sequential pairing reduction over the filtration.
///
/// For each simplex, its boundary chain is repeatedly folded with the stored
/// reduced chains of already-paired youngest positive entries until the chain
/// dies (positive simplex) or exposes an unpaired positive pivot (negative
/// simplex, which pairs with that pivot).
pub fn pair(f: &Filtration) -> Pairing {
    let n = f.len();
    let complex = f.complex();
    let mut order = Vec::with_capacity(n);
    let mut dims = Vec::with_capacity(n);
    let mut positive = vec![false; n];
    let mut partner: Vec<Option<usize>> = vec![None; n];
    let mut reduced: HashMap<usize, Vec<usize>> = HashMap::new();

    for pos in 0..n {
        let id = f.id_at(pos);
        order.push(id);
        let simplex = complex.simplex(id).expect("filtration covers complex");
        dims.push(simplex.dim() as u8);

        let bchain = complex.boundary(id).expect("face-closed complex");
        let mut c: Vec<usize> = bchain
            .members()
            .iter()
            .map(|&fid| f.position_of(fid))
            .collect();
        c.sort_unstable();

        loop {
            let Some(tau) = youngest_positive(&c, &positive) else {
                debug_assert!(c.is_empty(), "nonzero chain without positive pivot");
                positive[pos] = true;
                break;
            };
            match partner[tau] {
                None => {
                    partner[tau] = Some(pos);
                    partner[pos] = Some(tau);
                    reduced.insert(pos, c);
                    break;
                }
                Some(killer) => {
                    c = sym_diff(&c, &reduced[&killer]);
                }
            }
        }
    }

    Pairing {
        order,
        dims,
        positive,
        partner,
        reduced,
    }
}

fn youngest_positive(c: &[usize], positive: &[bool]) -> Option<usize> {
    c.iter().rev().copied().find(|&p| positive[p])
}

/// Trace the representative 1-cycle of the class destroyed by the negative
/// 2-simplex `d` by replaying its reduction.
///
/// The replay stops when the youngest positive edge is `d`'s own partner or
/// lies on the filtration's designated boundary subcomplex. When the
/// filtration is two-phase, any second-phase edges left in the chain are then
/// cleared by adding triangle boundaries, so the result lies entirely on the
/// first-phase (surface) subcomplex whenever the class admits such a
/// representative.
pub fn mark_loop(pairing: &Pairing, d: usize, f: &Filtration) -> Result<Chain> {
    let complex = f.complex();
    let simplex = complex.simplex(d)?;
    if simplex.dim() != 2 {
        return Err(Error::invalid_argument(format!(
            "mark_loop expects a 2-simplex, got dimension {}",
            simplex.dim()
        )));
    }
    let d_pos = f.position_of(d);
    if pairing.positive[d_pos] {
        return Err(Error::invalid_argument(
            "mark_loop expects a negative simplex",
        ));
    }

    let bchain = complex.boundary(d)?;
    let mut c: Vec<usize> = bchain
        .members()
        .iter()
        .map(|&fid| f.position_of(fid))
        .collect();
    c.sort_unstable();

    while let Some(tau) = youngest_positive(&c, &pairing.positive) {
        if f.on_boundary_subcomplex(f.id_at(tau)) {
            break;
        }
        match pairing.partner[tau] {
            Some(killer) if killer != d_pos => {
                c = sym_diff(&c, &pairing.reduced[&killer]);
            }
            _ => break, // d's own partner, or an unpaired generator
        }
    }

    if let Some(split) = f.phase_split() {
        if c.iter().any(|&p| p >= split) {
            c = clear_second_phase(c, f, split);
        }
    }

    let mut ids: Vec<usize> = c.iter().map(|&p| f.id_at(p)).collect();
    ids.sort_unstable();
    let out = Chain::from_sorted_unchecked(1, ids);
    debug_assert!(out.boundary(complex)?.is_empty(), "mark_loop must return a cycle");
    Ok(out)
}

/// Eliminate second-phase entries of the 1-chain `c` (given as filtration
/// positions) by adding boundaries of 2-simplices. Leaves the homology class
/// unchanged. Returns `c` untouched if no combination clears the entries.
fn clear_second_phase(c: Vec<usize>, f: &Filtration, split: usize) -> Vec<usize> {
    let complex = f.complex();
    // Reduced basis of triangle boundary columns restricted to
    // second-phase rows, each carrying its full column.
    let mut pivots: HashMap<usize, (Vec<usize>, Vec<usize>)> = HashMap::new();
    for pos in 0..f.len() {
        let id = f.id_at(pos);
        if complex.simplex(id).unwrap().dim() != 2 {
            continue;
        }
        let mut full: Vec<usize> = complex
            .boundary(id)
            .unwrap()
            .members()
            .iter()
            .map(|&fid| f.position_of(fid))
            .collect();
        full.sort_unstable();
        let mut restricted: Vec<usize> = full.iter().copied().filter(|&p| p >= split).collect();
        while let Some(&pivot) = restricted.last() {
            match pivots.get(&pivot) {
                Some((r, g)) => {
                    restricted = sym_diff(&restricted, r);
                    full = sym_diff(&full, g);
                }
                None => break,
            }
        }
        if let Some(&pivot) = restricted.last() {
            pivots.insert(pivot, (restricted, full));
        }
    }

    let mut full = c.clone();
    let mut restricted: Vec<usize> = full.iter().copied().filter(|&p| p >= split).collect();
    while let Some(&pivot) = restricted.last() {
        match pivots.get(&pivot) {
            Some((r, g)) => {
                restricted = sym_diff(&restricted, r);
                full = sym_diff(&full, g);
            }
            None => return c, // cannot be cleared; return the raw cycle
        }
    }
    full
}

/// A point of a persistence diagram. `death` is `f64::INFINITY` for classes
/// that never die.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramPoint {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

/// Multiset of (dimension, birth, death) triples.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PersistenceDiagram {
    pub points: Vec<DiagramPoint>,
}

impl PersistenceDiagram {
    pub fn points_of_dim(&self, dim: usize) -> impl Iterator<Item = &DiagramPoint> {
        self.points.iter().filter(move |p| p.dim == dim)
    }

    pub fn finite_points_of_dim(&self, dim: usize) -> impl Iterator<Item = &DiagramPoint> {
        self.points_of_dim(dim).filter(|p| p.death.is_finite())
    }

    /// CSV with header `dim,birth,death`; infinite deaths print as `inf`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "dim,birth,death")?;
        for p in &self.points {
            if p.death.is_finite() {
                writeln!(w, "{},{},{}", p.dim, p.birth, p.death)?;
            } else {
                writeln!(w, "{},{},inf", p.dim, p.birth)?;
            }
        }
        Ok(())
    }
}

/// Read the diagram off a pairing: one finite point per pair, one infinite
/// point per surviving positive simplex. Zero-persistence pairs are kept;
/// consumers filter as needed.
pub fn diagram(pairing: &Pairing, f: &Filtration) -> PersistenceDiagram {
    let mut points = Vec::new();
    for pos in 0..pairing.len() {
        if !pairing.positive[pos] {
            continue;
        }
        let birth = f.value_at(pos);
        let dim = pairing.dims[pos] as usize;
        match pairing.partner[pos] {
            Some(killer) => points.push(DiagramPoint {
                dim,
                birth,
                death: f.value_at(killer),
            }),
            None => points.push(DiagramPoint {
                dim,
                birth,
                death: f64::INFINITY,
            }),
        }
    }
    PersistenceDiagram { points }
}

/// Vietoris-Rips filtration of a 3D point cloud: a simplex enters at the
/// largest pairwise distance among its vertices, if that is at most `max_eps`.
pub fn rips_filtration(points: &[Vec3], max_eps: f64, max_dim: usize) -> Result<Filtration> {
    if max_eps <= 0.0 {
        return Err(Error::invalid_argument("max_eps must be positive"));
    }
    build_cloud_filtration(points, max_eps, max_dim, |pts| {
        let ab = geom::distance(pts[0], pts[1]);
        let ac = geom::distance(pts[0], pts[2]);
        let bc = geom::distance(pts[1], pts[2]);
        ab.max(ac).max(bc)
    })
}

/// Cech filtration of a point cloud up to dimension 2: vertices at 0, edges
/// at their length, triangles at the diameter of the smallest enclosing ball
/// of their three vertices (closed form).
pub fn cech_filtration(points: &[Vec3], max_eps: f64, max_dim: usize) -> Result<Filtration> {
    if max_eps <= 0.0 {
        return Err(Error::invalid_argument("max_eps must be positive"));
    }
    build_cloud_filtration(points, max_eps, max_dim, |pts| {
        min_enclosing_ball_diameter(pts[0], pts[1], pts[2])
    })
}

/// Diameter of the smallest ball containing three points: the longest side if
/// the triangle is right or obtuse, the circumdiameter otherwise.
pub fn min_enclosing_ball_diameter(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let mut sides = [
        geom::distance(a, b),
        geom::distance(a, c),
        geom::distance(b, c),
    ];
    sides.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (s_min, s_mid, s_max) = (sides[0], sides[1], sides[2]);
    if s_max * s_max >= s_min * s_min + s_mid * s_mid {
        return s_max;
    }
    let area = geom::triangle_area(a, b, c);
    // circumradius = abc / (4 * area); guarded above against degeneracy
    (s_min * s_mid * s_max) / (2.0 * area)
}

fn build_cloud_filtration(
    points: &[Vec3],
    max_eps: f64,
    max_dim: usize,
    triangle_value: impl Fn([Vec3; 3]) -> f64,
) -> Result<Filtration> {
    let n = points.len();
    let mut complex = SimplicialComplex::new();
    let mut values: Vec<(Simplex, f64)> = Vec::new();
    for i in 0..n as u32 {
        values.push((Simplex::vertex(i), 0.0));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = geom::distance(points[i], points[j]);
            if d <= max_eps {
                values.push((Simplex::edge(i as u32, j as u32)?, d));
            }
        }
    }
    if max_dim >= 2 {
        for i in 0..n {
            for j in (i + 1)..n {
                if geom::distance(points[i], points[j]) > max_eps {
                    continue;
                }
                for k in (j + 1)..n {
                    if geom::distance(points[i], points[k]) > max_eps
                        || geom::distance(points[j], points[k]) > max_eps
                    {
                        continue;
                    }
                    let v = triangle_value([points[i], points[j], points[k]]);
                    if v <= max_eps {
                        values.push((Simplex::triangle(i as u32, j as u32, k as u32)?, v));
                    }
                }
            }
        }
    }
    for (s, _) in &values {
        complex.insert(s.clone());
    }
    let complex = Arc::new(complex);
    let mut key = vec![0.0; complex.len()];
    for (s, v) in &values {
        key[complex.id_of(s).unwrap()] = *v;
    }
    Filtration::build(complex, &key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::betti_oracle;
    use std::f64::consts::PI;

    fn filled_triangle_filtration() -> Filtration {
        let complex = Arc::new(
            SimplicialComplex::from_simplices([Simplex::new(vec![0, 1, 2]).unwrap()]).unwrap(),
        );
        let key = vec![0.0; complex.len()];
        Filtration::build(complex, &key).unwrap()
    }

    #[test]
    fn filled_triangle_pairing_structure() {
        let f = filled_triangle_filtration();
        let pairing = pair(&f);
        // 1 unpaired vertex, 2 vertex-edge pairs, 1 edge-face pair
        assert_eq!(pairing.positive_unpaired_of_dim(0).len(), 1);
        assert_eq!(pairing.positive_unpaired_of_dim(1).len(), 0);
        assert_eq!(pairing.n_pairs(), 3);
        // pairing-derived Betti matches the oracle at every prefix
        for prefix in 0..=f.len() {
            let k = f.prefix_complex(prefix);
            for p in 0..=2 {
                assert_eq!(
                    pairing.prefix_betti(prefix, p),
                    betti_oracle(&k, p),
                    "prefix {prefix} dim {p}"
                );
            }
        }
    }

    #[test]
    fn pair_count_conservation() {
        let f = filled_triangle_filtration();
        let pairing = pair(&f);
        let unpaired = pairing.positive_unpaired().len();
        assert_eq!(pairing.n_positive(), pairing.n_pairs() + unpaired);
        assert_eq!(f.len() - pairing.n_positive(), pairing.n_pairs());
    }

    #[test]
    fn empty_filtration_pairs_to_nothing() {
        let complex = Arc::new(SimplicialComplex::new());
        let f = Filtration::build(complex, &[]).unwrap();
        let pairing = pair(&f);
        assert!(pairing.is_empty());
        assert!(diagram(&pairing, &f).points.is_empty());
    }

    /// 3x3 grid torus triangulation (the smallest grid that stays simplicial).
    fn small_torus_complex() -> SimplicialComplex {
        let n = 3u32;
        let mut tris = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = |a: u32, b: u32| (a % n) * n + (b % n);
                let (p00, p10, p01, p11) = (v(i, j), v(i + 1, j), v(i, j + 1), v(i + 1, j + 1));
                tris.push(Simplex::triangle(p00, p10, p11).unwrap());
                tris.push(Simplex::triangle(p00, p11, p01).unwrap());
            }
        }
        SimplicialComplex::from_simplices(tris).unwrap()
    }

    #[test]
    fn torus_surface_leaves_two_unpaired_edges() {
        let complex = Arc::new(small_torus_complex());
        assert_eq!(betti_oracle(&complex, 1), 2);
        let key = vec![0.0; complex.len()];
        let f = Filtration::build(complex, &key).unwrap();
        let pairing = pair(&f);
        assert_eq!(pairing.positive_unpaired_of_dim(1).len(), 2);
        assert_eq!(pairing.positive_unpaired_of_dim(0).len(), 1);
        assert_eq!(pairing.positive_unpaired_of_dim(2).len(), 1);
    }

    #[test]
    fn pairing_is_deterministic() {
        let complex = Arc::new(small_torus_complex());
        let key: Vec<f64> = (0..complex.len()).map(|i| (i % 5) as f64 * 0.25).collect();
        let f = Filtration::build(complex, &key).unwrap();
        let a = pair(&f);
        let b = pair(&f);
        assert_eq!(a.positive, b.positive);
        assert_eq!(a.partner, b.partner);
        assert_eq!(a.reduced, b.reduced);
    }

    #[test]
    fn mark_loop_on_filled_triangle_returns_boundary_cycle() {
        let f = filled_triangle_filtration();
        let pairing = pair(&f);
        let complex = f.complex();
        let face = complex
            .id_of(&Simplex::new(vec![0, 1, 2]).unwrap())
            .unwrap();
        let cycle = mark_loop(&pairing, face, &f).unwrap();
        assert_eq!(cycle.len(), 3);
        assert!(cycle.boundary(complex).unwrap().is_empty());
    }

    #[test]
    fn mark_loop_rejects_positive_or_wrong_dimension() {
        let f = filled_triangle_filtration();
        let pairing = pair(&f);
        let complex = f.complex();
        let vertex = complex.id_of(&Simplex::vertex(0)).unwrap();
        assert!(mark_loop(&pairing, vertex, &f).is_err());
    }

    #[test]
    fn two_points_one_edge_diagram() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]];
        let f = rips_filtration(&pts, 2.0, 1).unwrap();
        let pairing = pair(&f);
        let d = diagram(&pairing, &f);
        let h0: Vec<_> = d.points_of_dim(0).collect();
        assert_eq!(h0.len(), 2);
        assert!(h0.iter().any(|p| p.death.is_infinite() && p.birth == 0.0));
        assert!(h0.iter().any(|p| (p.death - 1.0).abs() < 1e-12));
    }

    #[test]
    fn rips_edge_appears_at_pairwise_distance() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]];
        let f = rips_filtration(&pts, 2.0, 2).unwrap();
        let e = f
            .complex()
            .id_of(&Simplex::edge(0, 1).unwrap())
            .expect("edge included");
        assert_eq!(f.value_of(e), 1.0);

        let far = [[0.0, 0.0, 0.0], [3.0, 0.0, 0.0]];
        let f = rips_filtration(&far, 2.0, 2).unwrap();
        assert!(f.complex().id_of(&Simplex::edge(0, 1).unwrap()).is_none());
    }

    #[test]
    fn rips_triangle_value_is_max_side() {
        let s = 0.75;
        let pts = [
            [0.0, 0.0, 0.0],
            [s, 0.0, 0.0],
            [s / 2.0, s * 3f64.sqrt() / 2.0, 0.0],
        ];
        let f = rips_filtration(&pts, 2.0, 2).unwrap();
        let t = f
            .complex()
            .id_of(&Simplex::triangle(0, 1, 2).unwrap())
            .unwrap();
        assert!((f.value_of(t) - s).abs() < 1e-12);
    }

    #[test]
    fn cech_right_triangle_value_is_hypotenuse() {
        let pts = [[0.0, 0.0, 0.0], [3.0, 0.0, 0.0], [0.0, 4.0, 0.0]];
        let f = cech_filtration(&pts, 10.0, 2).unwrap();
        let t = f
            .complex()
            .id_of(&Simplex::triangle(0, 1, 2).unwrap())
            .unwrap();
        assert!((f.value_of(t) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn cech_exceeds_rips_on_equilateral_triangle() {
        let pts = [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.5, 3f64.sqrt() / 2.0, 0.0],
        ];
        let rips = rips_filtration(&pts, 3.0, 2).unwrap();
        let cech = cech_filtration(&pts, 3.0, 2).unwrap();
        let t = Simplex::triangle(0, 1, 2).unwrap();
        let rips_v = rips.value_of(rips.complex().id_of(&t).unwrap());
        let cech_v = cech.value_of(cech.complex().id_of(&t).unwrap());
        assert!((rips_v - 1.0).abs() < 1e-12);
        assert!((cech_v - 2.0 / 3f64.sqrt()).abs() < 1e-9);
        assert!(cech_v > rips_v);
    }

    #[test]
    fn eight_point_circle_has_one_finite_h1_class() {
        let pts: Vec<Vec3> = (0..8)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / 8.0;
                [a.cos(), a.sin(), 0.0]
            })
            .collect();
        let f = rips_filtration(&pts, 2.5, 2).unwrap();
        let pairing = pair(&f);
        let d = diagram(&pairing, &f);
        let finite: Vec<_> = d
            .finite_points_of_dim(1)
            .filter(|p| p.death > p.birth)
            .collect();
        assert_eq!(finite.len(), 1);
        let birth = finite[0].birth;
        assert!((birth - 2.0 * (PI / 8.0).sin()).abs() < 1e-9);

        // oracle cross-check over complete sublevel sets: the circle class is
        // alive exactly on [birth, death)
        let death = finite[0].death;
        let mut seen_loop = false;
        for prefix in 0..=f.len() {
            // group float-equal values so sublevel sets are complete
            let complete = prefix == 0
                || prefix == f.len()
                || f.value_at(prefix) > f.value_at(prefix - 1) + 1e-9;
            if !complete {
                continue;
            }
            let b1 = betti_oracle(&f.prefix_complex(prefix), 1);
            let v = if prefix == 0 {
                f64::NEG_INFINITY
            } else {
                f.value_at(prefix - 1)
            };
            let alive = v >= birth - 1e-9 && v < death - 1e-9;
            assert_eq!(b1, usize::from(alive), "sublevel at value {v}");
            seen_loop |= alive;
        }
        assert!(seen_loop);
    }

    #[test]
    fn diagram_csv_format() {
        let d = PersistenceDiagram {
            points: vec![
                DiagramPoint {
                    dim: 0,
                    birth: 0.0,
                    death: f64::INFINITY,
                },
                DiagramPoint {
                    dim: 1,
                    birth: 0.5,
                    death: 1.25,
                },
            ],
        };
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "dim,birth,death\n0,0,inf\n1,0.5,1.25\n"
        );
    }

    #[test]
    fn oracle_equivalence_on_randomized_small_filtrations() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for case in 0..5 {
            let complex = Arc::new(small_torus_complex());
            let key: Vec<f64> = (0..complex.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
            let f = Filtration::build(complex, &key).unwrap();
            let pairing = pair(&f);
            for prefix in (0..=f.len()).step_by(7) {
                let k = f.prefix_complex(prefix);
                for p in 0..=2 {
                    assert_eq!(
                        pairing.prefix_betti(prefix, p),
                        betti_oracle(&k, p),
                        "case {case} prefix {prefix} dim {p}"
                    );
                }
            }
        }
    }
}
