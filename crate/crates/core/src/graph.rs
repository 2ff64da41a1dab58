//! Closed surface graphs, their duals and incidence matrices.
//!
//! A [`SurfaceGraph`] carries vertices, edges as unordered vertex pairs, and
//! faces as lists of edge indices along each boundary walk. Primal and dual
//! graphs share one edge index space: dual edge `i` crosses primal edge `i`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bitmatrix::BitMatrix;
use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceGraph {
    schlafli: Option<(usize, usize)>,
    num_vertices: usize,
    edges: Vec<[usize; 2]>,
    faces: Vec<Vec<usize>>,
}

/// One failed structural check, with its location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
    },
    SelfLoop {
        edge: usize,
    },
    RepeatedEdge {
        edge: usize,
        first: usize,
    },
    EdgeOutOfRange {
        face: usize,
        edge: usize,
    },
    EmptyFace {
        face: usize,
    },
    /// Every edge must lie on exactly two faces of a closed surface.
    EdgeFaceCount {
        edge: usize,
        count: usize,
    },
    FaceNotClosedWalk {
        face: usize,
    },
    NotConnected {
        components: usize,
    },
    IsolatedVertex {
        vertex: usize,
    },
    DegreeMismatch {
        vertex: usize,
        degree: usize,
        expected: usize,
    },
    FaceLengthMismatch {
        face: usize,
        length: usize,
        expected: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::VertexOutOfRange { edge, vertex } => {
                write!(f, "edge {edge}: vertex {vertex} out of range")
            }
            Violation::SelfLoop { edge } => write!(f, "edge {edge}: loop"),
            Violation::RepeatedEdge { edge, first } => {
                write!(f, "edge {edge}: repeats edge {first}")
            }
            Violation::EdgeOutOfRange { face, edge } => {
                write!(f, "face {face}: edge {edge} out of range")
            }
            Violation::EmptyFace { face } => write!(f, "face {face}: empty"),
            Violation::EdgeFaceCount { edge, count } => {
                if count == 1 {
                    write!(f, "edge {edge}: edge in one face")
                } else {
                    write!(f, "edge {edge}: edge in {count} faces (need 2)")
                }
            }
            Violation::FaceNotClosedWalk { face } => {
                write!(f, "face {face}: boundary is not a closed walk")
            }
            Violation::NotConnected { components } => {
                write!(f, "not connected ({components} components)")
            }
            Violation::IsolatedVertex { vertex } => write!(f, "vertex {vertex}: isolated"),
            Violation::DegreeMismatch {
                vertex,
                degree,
                expected,
            } => {
                write!(f, "vertex {vertex}: degree {degree}, expected {expected}")
            }
            Violation::FaceLengthMismatch {
                face,
                length,
                expected,
            } => {
                write!(f, "face {face}: length {length}, expected {expected}")
            }
        }
    }
}

impl SurfaceGraph {
    /// Assembles a graph without checking it; see [`SurfaceGraph::validate`].
    ///
    /// Edge endpoints are stored in increasing order.
    pub fn from_parts(
        schlafli: Option<(usize, usize)>,
        num_vertices: usize,
        edges: Vec<[usize; 2]>,
        faces: Vec<Vec<usize>>,
    ) -> Self {
        let edges = edges
            .into_iter()
            .map(|[u, v]| if u <= v { [u, v] } else { [v, u] })
            .collect();
        SurfaceGraph {
            schlafli,
            num_vertices,
            edges,
            faces,
        }
    }

    /// Like [`SurfaceGraph::from_parts`] but rejects graphs with violations.
    pub fn new(
        schlafli: Option<(usize, usize)>,
        num_vertices: usize,
        edges: Vec<[usize; 2]>,
        faces: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let g = Self::from_parts(schlafli, num_vertices, edges, faces);
        let violations = g.validate();
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidGraph(violations))
        }
    }

    /// Schläfli symbol `(f, d)`: `d` faces with `f` sides meet at each vertex.
    pub fn schlafli(&self) -> Option<(usize, usize)> {
        self.schlafli
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices];
        for &[u, v] in &self.edges {
            if u < self.num_vertices {
                deg[u] += 1;
            }
            if v < self.num_vertices {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Euler characteristic `|V| - n + |F|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    /// Checks every structural invariant and lists each failure.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let nv = self.num_vertices;
        let n = self.edges.len();

        let mut seen: BTreeMap<[usize; 2], usize> = BTreeMap::new();
        for (e, &[u, v]) in self.edges.iter().enumerate() {
            let mut in_range = true;
            for w in [u, v] {
                if w >= nv {
                    out.push(Violation::VertexOutOfRange { edge: e, vertex: w });
                    in_range = false;
                }
            }
            if u == v {
                out.push(Violation::SelfLoop { edge: e });
            } else if in_range {
                if let Some(&first) = seen.get(&[u, v]) {
                    out.push(Violation::RepeatedEdge { edge: e, first });
                } else {
                    seen.insert([u, v], e);
                }
            }
        }

        let mut face_count = vec![0usize; n];
        for (fi, face) in self.faces.iter().enumerate() {
            if face.is_empty() {
                out.push(Violation::EmptyFace { face: fi });
                continue;
            }
            let mut ok = true;
            for &e in face {
                if e >= n {
                    out.push(Violation::EdgeOutOfRange { face: fi, edge: e });
                    ok = false;
                } else {
                    face_count[e] += 1;
                }
            }
            if ok && !self.is_closed_walk(face) {
                out.push(Violation::FaceNotClosedWalk { face: fi });
            }
        }
        for (e, &c) in face_count.iter().enumerate() {
            if c != 2 {
                out.push(Violation::EdgeFaceCount { edge: e, count: c });
            }
        }

        let degrees = self.degrees();
        for (v, &d) in degrees.iter().enumerate() {
            if d == 0 {
                out.push(Violation::IsolatedVertex { vertex: v });
            }
        }
        if nv > 0 {
            let mut uf = UnionFind::new(nv);
            for &[u, v] in &self.edges {
                if u < nv && v < nv {
                    uf.union(u, v);
                }
            }
            if uf.components() > 1 {
                out.push(Violation::NotConnected {
                    components: uf.components(),
                });
            }
        }

        if let Some((f, d)) = self.schlafli {
            for (v, &deg) in degrees.iter().enumerate() {
                if deg != d {
                    out.push(Violation::DegreeMismatch {
                        vertex: v,
                        degree: deg,
                        expected: d,
                    });
                }
            }
            for (fi, face) in self.faces.iter().enumerate() {
                if face.len() != f {
                    out.push(Violation::FaceLengthMismatch {
                        face: fi,
                        length: face.len(),
                        expected: f,
                    });
                }
            }
        }
        out
    }

    /// Whether consecutive edges of `face` (cyclically) chain into a closed walk.
    fn is_closed_walk(&self, face: &[usize]) -> bool {
        let first = self.edges[face[0]];
        if face.len() == 1 {
            return first[0] == first[1];
        }
        // Try both orientations of the first edge.
        'start: for (start, mut cur) in [(first[0], first[1]), (first[1], first[0])] {
            for &e in &face[1..] {
                let [u, v] = self.edges[e];
                cur = if u == cur {
                    v
                } else if v == cur {
                    u
                } else {
                    continue 'start;
                };
            }
            if cur == start {
                return true;
            }
        }
        false
    }
}

/// A graph together with its dual; both share the edge index space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPair {
    primal: SurfaceGraph,
    dual: SurfaceGraph,
}

impl DualPair {
    pub fn primal(&self) -> &SurfaceGraph {
        &self.primal
    }

    pub fn dual(&self) -> &SurfaceGraph {
        &self.dual
    }

    /// The same pair with the roles of primal and dual exchanged.
    pub fn swapped(&self) -> DualPair {
        DualPair {
            primal: self.dual.clone(),
            dual: self.primal.clone(),
        }
    }

    pub fn into_parts(self) -> (SurfaceGraph, SurfaceGraph) {
        (self.primal, self.dual)
    }
}

/// Vertex-edge and face-edge incidence matrices `J` and `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidencePair {
    pub j: BitMatrix,
    pub k: BitMatrix,
}

impl IncidencePair {
    pub fn num_edges(&self) -> usize {
        self.j.cols()
    }

    /// Incidence pair of the dual graph: the roles of `J` and `K` swap.
    pub fn dual(&self) -> IncidencePair {
        IncidencePair {
            j: self.k.clone(),
            k: self.j.clone(),
        }
    }
}

/// Square-lattice torus with `lx * ly` vertices and periodic boundaries.
///
/// Vertex `(x, y)` has index `x + lx * y`; edge `2 * v` runs in the x
/// direction from `v` and edge `2 * v + 1` in the y direction.
pub fn build_torus(lx: usize, ly: usize) -> Result<DualPair> {
    if lx < 3 || ly < 3 {
        return Err(Error::TorusTooSmall { lx, ly });
    }
    let vid = |x: usize, y: usize| (x % lx) + lx * (y % ly);
    let mut edges = Vec::with_capacity(2 * lx * ly);
    for y in 0..ly {
        for x in 0..lx {
            edges.push([vid(x, y), vid(x + 1, y)]);
            edges.push([vid(x, y), vid(x, y + 1)]);
        }
    }
    let mut faces = Vec::with_capacity(lx * ly);
    for y in 0..ly {
        for x in 0..lx {
            faces.push(vec![
                2 * vid(x, y),
                2 * vid(x + 1, y) + 1,
                2 * vid(x, y + 1),
                2 * vid(x, y) + 1,
            ]);
        }
    }
    let primal = SurfaceGraph::new(Some((4, 4)), lx * ly, edges, faces)?;
    build_dual(&primal)
}

/// Dual graph: a vertex per face, dual edge `i` joining the two faces on
/// primal edge `i`, and a dual face around every primal vertex.
pub fn build_dual(g: &SurfaceGraph) -> Result<DualPair> {
    let violations = g.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidGraph(violations));
    }
    let n = g.num_edges();
    let mut sides: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (fi, face) in g.faces.iter().enumerate() {
        for &e in face {
            sides[e].push(fi);
        }
    }
    let mut dual_edges = Vec::with_capacity(n);
    let mut seen: BTreeMap<[usize; 2], usize> = BTreeMap::new();
    for (e, s) in sides.iter().enumerate() {
        if s[0] == s[1] {
            return Err(Error::DualNotSimple {
                edge: e,
                reason: "loop",
            });
        }
        let key = if s[0] < s[1] {
            [s[0], s[1]]
        } else {
            [s[1], s[0]]
        };
        if seen.insert(key, e).is_some() {
            return Err(Error::DualNotSimple {
                edge: e,
                reason: "multi-edge",
            });
        }
        dual_edges.push(key);
    }

    let mut around: Vec<Vec<usize>> = vec![Vec::new(); g.num_vertices];
    for (e, &[u, v]) in g.edges.iter().enumerate() {
        around[u].push(e);
        if v != u {
            around[v].push(e);
        }
    }
    let dual_faces: Vec<Vec<usize>> = around
        .into_iter()
        .map(|star| closed_walk_order(&star, &dual_edges).unwrap_or(star))
        .collect();

    let schlafli = g.schlafli.map(|(f, d)| (d, f));
    let dual = SurfaceGraph::new(schlafli, g.num_faces(), dual_edges, dual_faces)?;
    Ok(DualPair {
        primal: g.clone(),
        dual,
    })
}

/// Orders `edge_set` into a closed walk (an Euler circuit of the edges)
/// where consecutive edges share an endpoint. Returns `None` when the
/// edges do not form a single closed walk.
pub(crate) fn closed_walk_order(
    edge_set: &[usize],
    endpoints: &[[usize; 2]],
) -> Option<Vec<usize>> {
    if edge_set.is_empty() {
        return Some(Vec::new());
    }
    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (slot, &e) in edge_set.iter().enumerate() {
        let [u, v] = endpoints[e];
        incident.entry(u).or_default().push(slot);
        incident.entry(v).or_default().push(slot);
    }
    if incident.values().any(|s| s.len() % 2 == 1) {
        return None;
    }
    // Hierholzer's algorithm over edge slots.
    let mut used = vec![false; edge_set.len()];
    let mut cursor: BTreeMap<usize, usize> = BTreeMap::new();
    let start = endpoints[edge_set[0]][0];
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut circuit = Vec::with_capacity(edge_set.len());
    while let Some(&(v, via)) = stack.last() {
        let list = &incident[&v];
        let pos = cursor.entry(v).or_insert(0);
        while *pos < list.len() && used[list[*pos]] {
            *pos += 1;
        }
        if *pos < list.len() {
            let slot = list[*pos];
            used[slot] = true;
            let [a, b] = endpoints[edge_set[slot]];
            let w = if a == v { b } else { a };
            stack.push((w, Some(slot)));
        } else {
            stack.pop();
            if let Some(slot) = via {
                circuit.push(edge_set[slot]);
            }
        }
    }
    if circuit.len() != edge_set.len() {
        return None;
    }
    circuit.reverse();
    Some(circuit)
}

/// `J[v][e] = 1` iff `v` is an endpoint of `e`; `K[f][e] = 1` iff `e` lies
/// on face `f` (an odd number of times).
pub fn incidence_matrices(g: &SurfaceGraph) -> IncidencePair {
    let n = g.num_edges();
    let mut j = BitMatrix::zeros(g.num_vertices(), n);
    for (e, &[u, v]) in g.edges().iter().enumerate() {
        j.toggle(u, e);
        j.toggle(v, e);
    }
    let k = BitMatrix::from_row_supports(
        g.num_faces(),
        n,
        g.faces().iter().map(|f| f.iter().copied()),
    );
    IncidencePair { j, k }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn torus_3x3_counts() {
        let pair = build_torus(3, 3).unwrap();
        let g = pair.primal();
        assert_eq!((g.num_vertices(), g.num_edges(), g.num_faces()), (9, 18, 9));
        assert!(g.validate().is_empty());
        assert_eq!(g.euler_characteristic(), 0);
    }

    #[test]
    fn torus_4x8_counts() {
        let pair = build_torus(4, 8).unwrap();
        let g = pair.primal();
        assert_eq!(
            (g.num_vertices(), g.num_edges(), g.num_faces()),
            (32, 64, 32)
        );
        assert!(g.validate().is_empty());
        assert!(pair.dual().validate().is_empty());
    }

    #[test]
    fn torus_rejects_small_sides() {
        assert_eq!(
            build_torus(2, 5),
            Err(Error::TorusTooSmall { lx: 2, ly: 5 })
        );
        assert!(build_torus(3, 1).is_err());
    }

    #[test]
    fn torus_dual_is_square_torus() {
        let pair = build_torus(3, 3).unwrap();
        let d = pair.dual();
        assert_eq!(d.schlafli(), Some((4, 4)));
        assert_eq!((d.num_vertices(), d.num_edges(), d.num_faces()), (9, 18, 9));
        assert!(d.degrees().iter().all(|&x| x == 4));
        // dual edge i joins the two faces on primal edge i
        let g = pair.primal();
        for e in 0..g.num_edges() {
            let faces: Vec<usize> = (0..g.num_faces())
                .filter(|&f| g.faces()[f].contains(&e))
                .collect();
            assert_eq!(d.edge(e).to_vec(), faces);
        }
    }

    #[test]
    fn one_face_deleted_is_reported() {
        let g = build_torus(5, 5).unwrap().primal().clone();
        let mut faces = g.faces().to_vec();
        faces.pop();
        let broken = SurfaceGraph::from_parts(None, g.num_vertices(), g.edges().to_vec(), faces);
        let v = broken.validate();
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::EdgeFaceCount { count: 1, .. })));
        assert!(v.iter().any(|x| x.to_string().contains("edge in one face")));
        assert!(build_dual(&broken).is_err());
    }

    #[test]
    fn disjoint_union_not_connected() {
        let g = build_torus(3, 3).unwrap().primal().clone();
        let nv = g.num_vertices();
        let ne = g.num_edges();
        let mut edges = g.edges().to_vec();
        edges.extend(g.edges().iter().map(|&[u, v]| [u + nv, v + nv]));
        let mut faces = g.faces().to_vec();
        faces.extend(g.faces().iter().map(|f| f.iter().map(|e| e + ne).collect()));
        let union = SurfaceGraph::from_parts(None, 2 * nv, edges, faces);
        assert_eq!(
            union.validate(),
            vec![Violation::NotConnected { components: 2 }]
        );
    }

    #[test]
    fn detects_loops_and_repeats() {
        let g = SurfaceGraph::from_parts(None, 3, vec![[0, 0], [0, 1], [1, 0]], vec![]);
        let v = g.validate();
        assert!(v.contains(&Violation::SelfLoop { edge: 0 }));
        assert!(v.contains(&Violation::RepeatedEdge { edge: 2, first: 1 }));
    }

    #[test]
    fn incidence_row_weights_and_orthogonality() {
        let pair = build_torus(3, 3).unwrap();
        let inc = incidence_matrices(pair.primal());
        assert!((0..9).all(|v| inc.j.row_weight(v) == 4));
        assert!((0..9).all(|f| inc.k.row_weight(f) == 4));
        assert!(inc.j.mul_transpose(&inc.k).unwrap().is_zero());
    }

    #[test]
    fn closed_walk_order_finds_cycle() {
        let ends = [[0, 1], [2, 3], [1, 2], [3, 0]];
        let walk = closed_walk_order(&[0, 1, 2, 3], &ends).unwrap();
        assert_eq!(walk.len(), 4);
        let g = SurfaceGraph::from_parts(None, 4, ends.to_vec(), vec![]);
        assert!(g.is_closed_walk(&walk));
        assert!(!g.is_closed_walk(&[0, 1, 2, 3]));
        assert!(closed_walk_order(&[0, 1, 2], &ends).is_none());
    }
}
