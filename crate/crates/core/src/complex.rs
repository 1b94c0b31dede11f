//! Simplicial complexes over Z/2: simplices, chains, filtrations, and a
//! brute-force Betti-number oracle.
//!
//! Complexes are immutable once built and safe to share across threads.
//! Simplex ids are dense indices assigned at construction and stable for the
//! complex's lifetime; boundary matrices and chains index by these ids.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf2::{self, ColumnSpace};

pub type SimplexId = usize;
pub type VertexId = u32;

/// A simplex of dimension 0..=3, stored as strictly increasing vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    verts: Vec<VertexId>,
}

impl Simplex {
    pub fn new(verts: Vec<VertexId>) -> Result<Self> {
        if verts.is_empty() || verts.len() > 4 {
            return Err(Error::invalid_argument(format!(
                "simplex must have 1..=4 vertices, got {}",
                verts.len()
            )));
        }
        if !verts.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid_argument(format!(
                "simplex vertices must be strictly increasing: {verts:?}"
            )));
        }
        Ok(Self { verts })
    }

    /// Build from an unsorted list of distinct vertex ids.
    pub fn from_unsorted(mut verts: Vec<VertexId>) -> Result<Self> {
        verts.sort_unstable();
        Self::new(verts)
    }

    pub fn vertex(v: VertexId) -> Self {
        Self { verts: vec![v] }
    }

    pub fn edge(u: VertexId, v: VertexId) -> Result<Self> {
        Self::from_unsorted(vec![u, v])
    }

    pub fn triangle(a: VertexId, b: VertexId, c: VertexId) -> Result<Self> {
        Self::from_unsorted(vec![a, b, c])
    }

    pub fn dim(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.verts
    }

    /// Codimension-1 faces (empty for vertices).
    pub fn faces(&self) -> Vec<Simplex> {
        if self.verts.len() == 1 {
            return Vec::new();
        }
        (0..self.verts.len())
            .map(|skip| {
                let verts = self
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                Simplex { verts }
            })
            .collect()
    }
}

/// A finite set of simplices closed under taking faces, with dense ids.
#[derive(Debug, Clone, Default)]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, SimplexId>,
    dim: usize,
}

impl SimplicialComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build a complex containing the given simplices and all their faces.
    /// Ids follow insertion order, faces before cofaces.
    pub fn from_simplices<I>(simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        let mut complex = Self::new();
        for s in simplices {
            complex.insert(s);
        }
        Ok(complex)
    }

    /// Insert a simplex (and, recursively, any missing faces). Returns its id.
    pub fn insert(&mut self, s: Simplex) -> SimplexId {
        if let Some(&id) = self.index.get(&s) {
            return id;
        }
        let mut faces = s.faces();
        faces.sort();
        for f in faces {
            self.insert(f);
        }
        let id = self.simplices.len();
        self.dim = self.dim.max(s.dim());
        self.index.insert(s.clone(), id);
        self.simplices.push(s);
        id
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Largest simplex dimension present (zero for the empty complex).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn simplex(&self, id: SimplexId) -> Result<&Simplex> {
        self.simplices.get(id).ok_or(Error::UnknownSimplex(id))
    }

    pub fn id_of(&self, s: &Simplex) -> Option<SimplexId> {
        self.index.get(s).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SimplexId, &Simplex)> {
        self.simplices.iter().enumerate()
    }

    pub fn ids_of_dim(&self, p: usize) -> impl Iterator<Item = SimplexId> + '_ {
        self.simplices
            .iter()
            .enumerate()
            .filter(move |(_, s)| s.dim() == p)
            .map(|(id, _)| id)
    }

    pub fn count_of_dim(&self, p: usize) -> usize {
        self.ids_of_dim(p).count()
    }

    /// Boundary of simplex `id` as a chain of its codimension-1 faces.
    pub fn boundary(&self, id: SimplexId) -> Result<Chain> {
        let s = self.simplex(id)?;
        if s.dim() == 0 {
            return Ok(Chain::empty());
        }
        let mut members: Vec<SimplexId> = s
            .faces()
            .into_iter()
            .map(|f| {
                self.id_of(&f).ok_or_else(|| {
                    Error::topology(format!("face {:?} missing from complex", f.vertices()))
                })
            })
            .collect::<Result<_>>()?;
        members.sort_unstable();
        Ok(Chain {
            dim: Some(s.dim() - 1),
            members,
        })
    }

    /// Rank of the p-th Z/2 homology group via Gaussian elimination on the
    /// full boundary matrices: rank H_p = dim ker del_p - rank del_{p+1}.
    ///
    /// Independent of the persistence pairing path; used as its oracle.
    pub fn betti(&self, p: usize) -> usize {
        let n_p = self.count_of_dim(p);
        if n_p == 0 {
            return 0;
        }
        let rank_dp = if p == 0 { 0 } else { self.boundary_rank(p) };
        let rank_dp1 = self.boundary_rank(p + 1);
        n_p - rank_dp - rank_dp1
    }

    /// Rank over Z/2 of the boundary matrix del_p (columns are p-simplices).
    fn boundary_rank(&self, p: usize) -> usize {
        if p == 0 {
            return 0;
        }
        let mut space = ColumnSpace::new();
        for id in self.ids_of_dim(p) {
            let chain = self.boundary(id).expect("complex is face-closed");
            space.insert(chain.members);
        }
        space.rank()
    }
}

/// Convenience wrapper matching the oracle's spec-level name.
pub fn betti_oracle(complex: &SimplicialComplex, p: usize) -> usize {
    complex.betti(p)
}

/// A Z/2 chain: a set of simplex ids of a single dimension.
///
/// `dim` is `None` only for the empty chain.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    dim: Option<usize>,
    members: Vec<SimplexId>, // strictly increasing
}

impl Chain {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Build a chain from ids, validating that all share one dimension.
    pub fn from_ids(complex: &SimplicialComplex, ids: &[SimplexId]) -> Result<Self> {
        let mut members = ids.to_vec();
        members.sort_unstable();
        members.dedup();
        let mut dim = None;
        for &id in &members {
            let d = complex.simplex(id)?.dim();
            match dim {
                None => dim = Some(d),
                Some(d0) if d0 != d => return Err(Error::DimensionMismatch(d0, d)),
                _ => {}
            }
        }
        Ok(Self { dim, members })
    }

    pub(crate) fn from_sorted_unchecked(dim: usize, members: Vec<SimplexId>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        if members.is_empty() {
            Chain::empty()
        } else {
            Chain {
                dim: Some(dim),
                members,
            }
        }
    }

    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn members(&self) -> &[SimplexId] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, id: SimplexId) -> bool {
        self.members.binary_search(&id).is_ok()
    }

    /// Z/2 sum (symmetric difference). Errors on mixed dimensions.
    pub fn add(&self, other: &Chain) -> Result<Chain> {
        let dim = match (self.dim, other.dim) {
            (Some(a), Some(b)) if a != b => return Err(Error::DimensionMismatch(a, b)),
            (Some(a), _) => Some(a),
            (None, b) => b,
        };
        let members = gf2::sym_diff(&self.members, &other.members);
        Ok(Chain {
            dim: if members.is_empty() { None } else { dim },
            members,
        })
    }

    /// Boundary of the whole chain under Z/2 cancellation.
    pub fn boundary(&self, complex: &SimplicialComplex) -> Result<Chain> {
        let mut acc = Chain::empty();
        for &id in &self.members {
            acc = acc.add(&complex.boundary(id)?)?;
        }
        Ok(acc)
    }
}

/// Z/2 chain addition as a free function (spec-level name).
pub fn add_chains(c1: &Chain, c2: &Chain) -> Result<Chain> {
    c1.add(c2)
}

/// A total order on the simplices of a complex in which every face precedes
/// its cofaces, together with a nondecreasing scale value per position.
#[derive(Debug, Clone)]
pub struct Filtration {
    complex: Arc<SimplicialComplex>,
    order: Vec<SimplexId>,   // position -> simplex id
    pos_of: Vec<usize>,      // simplex id -> position
    values: Vec<f64>,        // position -> scale value
    phase_split: Option<usize>, // positions < split form the designated boundary subcomplex
}

impl Filtration {
    /// Sort all simplices by `(key value, dimension, vertex order)` after
    /// lower-star repair: any simplex whose raw key is smaller than a face's
    /// repaired value is raised to the max over its faces, which makes the
    /// construction total.
    pub fn build(complex: Arc<SimplicialComplex>, key: &[f64]) -> Result<Self> {
        if key.len() != complex.len() {
            return Err(Error::invalid_argument(format!(
                "key defined on {} simplices, complex has {}",
                key.len(),
                complex.len()
            )));
        }
        let mut repaired = key.to_vec();
        // Process by dimension so face values are final before cofaces.
        let mut ids: Vec<SimplexId> = (0..complex.len()).collect();
        ids.sort_by_key(|&id| complex.simplex(id).unwrap().dim());
        for &id in &ids {
            let s = complex.simplex(id)?;
            for f in s.faces() {
                let fid = complex
                    .id_of(&f)
                    .ok_or_else(|| Error::topology("complex not face-closed"))?;
                if repaired[fid] > repaired[id] {
                    repaired[id] = repaired[fid];
                }
            }
        }
        let mut order: Vec<SimplexId> = (0..complex.len()).collect();
        order.sort_by(|&a, &b| {
            let sa = complex.simplex(a).unwrap();
            let sb = complex.simplex(b).unwrap();
            repaired[a]
                .partial_cmp(&repaired[b])
                .unwrap()
                .then(sa.dim().cmp(&sb.dim()))
                .then(sa.vertices().cmp(sb.vertices()))
        });
        let values = order.iter().map(|&id| repaired[id]).collect();
        Self::from_order(complex, order, values)
    }

    /// Build from an explicit order and values; validates face precedence and
    /// value monotonicity.
    pub fn from_order(
        complex: Arc<SimplicialComplex>,
        order: Vec<SimplexId>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if order.len() != complex.len() || values.len() != complex.len() {
            return Err(Error::invalid_argument(
                "filtration order must cover the complex exactly",
            ));
        }
        let mut pos_of = vec![usize::MAX; complex.len()];
        for (pos, &id) in order.iter().enumerate() {
            if id >= complex.len() || pos_of[id] != usize::MAX {
                return Err(Error::invalid_argument(
                    "filtration order must be a permutation of simplex ids",
                ));
            }
            pos_of[id] = pos;
        }
        for (pos, &id) in order.iter().enumerate() {
            let s = complex.simplex(id)?;
            for f in s.faces() {
                let fid = complex
                    .id_of(&f)
                    .ok_or_else(|| Error::topology("complex not face-closed"))?;
                if pos_of[fid] >= pos {
                    return Err(Error::invalid_argument(format!(
                        "face {:?} does not precede coface {:?} in filtration order",
                        f.vertices(),
                        s.vertices()
                    )));
                }
            }
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid_argument(
                "filtration values must be nondecreasing along the order",
            ));
        }
        Ok(Self {
            complex,
            order,
            pos_of,
            values,
            phase_split: None,
        })
    }

    /// Mark the first `split` positions as the designated boundary
    /// subcomplex (used by two-phase surface+volume filtrations).
    pub fn with_phase_split(mut self, split: usize) -> Self {
        self.phase_split = Some(split.min(self.order.len()));
        self
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn id_at(&self, pos: usize) -> SimplexId {
        self.order[pos]
    }

    pub fn position_of(&self, id: SimplexId) -> usize {
        self.pos_of[id]
    }

    pub fn value_at(&self, pos: usize) -> f64 {
        self.values[pos]
    }

    pub fn value_of(&self, id: SimplexId) -> f64 {
        self.values[self.pos_of[id]]
    }

    pub fn phase_split(&self) -> Option<usize> {
        self.phase_split
    }

    /// True if `id` belongs to the designated boundary subcomplex.
    pub fn on_boundary_subcomplex(&self, id: SimplexId) -> bool {
        match self.phase_split {
            Some(split) => self.pos_of[id] < split,
            None => false,
        }
    }

    /// Materialize the subcomplex formed by the first `count` simplices.
    /// Every prefix of a valid filtration is face-closed by construction.
    pub fn prefix_complex(&self, count: usize) -> SimplicialComplex {
        let mut prefix = SimplicialComplex::new();
        for &id in self.order.iter().take(count) {
            prefix.insert(self.complex.simplex(id).unwrap().clone());
        }
        prefix
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex_of(simplices: &[&[VertexId]]) -> SimplicialComplex {
        SimplicialComplex::from_simplices(
            simplices
                .iter()
                .map(|v| Simplex::new(v.to_vec()).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn simplex_rejects_bad_vertex_lists() {
        assert!(Simplex::new(vec![]).is_err());
        assert!(Simplex::new(vec![3, 3]).is_err());
        assert!(Simplex::new(vec![2, 1]).is_err());
        assert!(Simplex::new(vec![0, 1, 2, 3, 4]).is_err());
        assert_eq!(Simplex::new(vec![0, 5, 9]).unwrap().dim(), 2);
    }

    #[test]
    fn boundary_of_edge_is_both_vertices() {
        let c = complex_of(&[&[0, 1]]);
        let e = c.id_of(&Simplex::new(vec![0, 1]).unwrap()).unwrap();
        let b = c.boundary(e).unwrap();
        assert_eq!(b.dim(), Some(0));
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn boundary_of_vertex_is_empty() {
        let c = complex_of(&[&[7]]);
        let v = c.id_of(&Simplex::vertex(7)).unwrap();
        assert!(c.boundary(v).unwrap().is_empty());
    }

    #[test]
    fn boundary_of_triangle_is_three_edges() {
        let c = complex_of(&[&[0, 1, 2]]);
        let t = c.id_of(&Simplex::new(vec![0, 1, 2]).unwrap()).unwrap();
        let b = c.boundary(t).unwrap();
        assert_eq!(b.dim(), Some(1));
        assert_eq!(b.len(), 3);
    }

    #[test]
    fn boundary_of_unknown_id_errors() {
        let c = complex_of(&[&[0]]);
        assert!(matches!(c.boundary(99), Err(Error::UnknownSimplex(99))));
    }

    #[test]
    fn chain_addition_is_symmetric_difference() {
        let c = complex_of(&[&[0, 1], &[1, 2], &[2, 3]]);
        let e01 = c.id_of(&Simplex::new(vec![0, 1]).unwrap()).unwrap();
        let e12 = c.id_of(&Simplex::new(vec![1, 2]).unwrap()).unwrap();
        let e23 = c.id_of(&Simplex::new(vec![2, 3]).unwrap()).unwrap();
        let a = Chain::from_ids(&c, &[e01, e12]).unwrap();
        let b = Chain::from_ids(&c, &[e12, e23]).unwrap();
        let sum = add_chains(&a, &b).unwrap();
        assert_eq!(sum.members(), &[e01.min(e23), e01.max(e23)]);
        // self-cancellation and identity
        assert!(a.add(&a).unwrap().is_empty());
        assert_eq!(a.add(&Chain::empty()).unwrap(), a);
    }

    #[test]
    fn chain_addition_rejects_mixed_dimensions() {
        let c = complex_of(&[&[0, 1]]);
        let v = Chain::from_ids(&c, &[c.id_of(&Simplex::vertex(0)).unwrap()]).unwrap();
        let e = Chain::from_ids(&c, &[c.id_of(&Simplex::new(vec![0, 1]).unwrap()).unwrap()])
            .unwrap();
        assert!(matches!(v.add(&e), Err(Error::DimensionMismatch(0, 1))));
    }

    #[test]
    fn boundary_of_boundary_is_zero() {
        let c = complex_of(&[&[0, 1, 2, 3], &[2, 3, 4]]);
        for (id, s) in c.iter() {
            if s.dim() >= 1 {
                let b = c.boundary(id).unwrap();
                assert!(b.boundary(&c).unwrap().is_empty(), "dd != 0 for {id}");
            }
        }
    }

    #[test]
    fn betti_of_reference_spaces() {
        // point
        let point = complex_of(&[&[0]]);
        assert_eq!((point.betti(0), point.betti(1), point.betti(2)), (1, 0, 0));
        // circle graph (hollow triangle)
        let circle = complex_of(&[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!((circle.betti(0), circle.betti(1), circle.betti(2)), (1, 1, 0));
        // 2-sphere as the boundary of a tetrahedron
        let sphere = complex_of(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        assert_eq!((sphere.betti(0), sphere.betti(1), sphere.betti(2)), (1, 0, 1));
    }

    #[test]
    fn filtration_orders_by_value_then_dimension() {
        let c = Arc::new(complex_of(&[&[0, 1, 2]]));
        let key = vec![0.0; c.len()];
        let f = Filtration::build(c.clone(), &key).unwrap();
        let dims: Vec<usize> = (0..f.len())
            .map(|p| c.simplex(f.id_at(p)).unwrap().dim())
            .collect();
        assert_eq!(dims, vec![0, 0, 0, 1, 1, 1, 2]);
    }

    #[test]
    fn filtration_lower_star_repair_raises_inconsistent_keys() {
        let c = complex_of(&[&[0, 1]]);
        let eid = c.id_of(&Simplex::new(vec![0, 1]).unwrap()).unwrap();
        let mut key = vec![0.0; c.len()];
        for v in 0..2u32 {
            key[c.id_of(&Simplex::vertex(v)).unwrap()] = 2.0 + v as f64;
        }
        key[eid] = 0.5; // edge key below its endpoints
        let f = Filtration::build(Arc::new(c), &key).unwrap();
        assert_eq!(f.value_of(eid), 3.0);
    }

    #[test]
    fn filtration_prefixes_are_complexes() {
        let c = Arc::new(complex_of(&[&[0, 1, 2], &[1, 2, 3]]));
        let key: Vec<f64> = (0..c.len()).map(|i| (i % 3) as f64).collect();
        let f = Filtration::build(c, &key).unwrap();
        for i in 0..=f.len() {
            // prefix_complex would fail on a face-closure violation
            let prefix = f.prefix_complex(i);
            assert_eq!(prefix.len(), i);
        }
    }
}
