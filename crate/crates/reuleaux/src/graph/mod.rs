//! Embedded planar graph kernel: rotation systems, face tracing, duals,
//! involutions, diagonal graphs, exact coloring and connectivity certificates.

mod involution;
mod simple;

pub use involution::{diagonal_graph, dual_edge, find_involution, verify_involution, Involution};
pub use simple::{
    ColoringCertificate, ConnectivityReport, SimpleGraph,
};

use crate::error::{Error, Result};

/// A directed edge side: `edge` traversed starting from `tail`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dart {
    pub edge: usize,
    pub tail: usize,
}

/// A face of the embedding: the darts of its boundary walk in order, and the
/// tail vertex of each dart.
#[derive(Debug, Clone)]
pub struct Face {
    pub darts: Vec<Dart>,
    pub vertices: Vec<usize>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    /// Sorted vertex list (a face of a 3-connected graph is a simple cycle,
    /// so this is a set).
    pub fn vertex_set(&self) -> Vec<usize> {
        let mut s = self.vertices.clone();
        s.sort_unstable();
        s.dedup();
        s
    }
}

/// A graph cellularly embedded in the sphere, given by a rotation system:
/// the cyclic order of incident edge ids around every vertex. Parallel edges
/// are allowed (distinct ids); loops are not.
#[derive(Debug, Clone)]
pub struct EmbeddedGraph {
    edges: Vec<(usize, usize)>,
    rotation: Vec<Vec<usize>>,
    faces: Vec<Face>,
}

impl EmbeddedGraph {
    /// Build from explicit edge endpoints and per-vertex cyclic edge-id lists.
    pub fn new(edges: Vec<(usize, usize)>, rotation: Vec<Vec<usize>>) -> Result<Self> {
        let n = rotation.len();
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge {id} endpoint out of range")));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("edge {id} is a loop")));
            }
        }
        let mut seen = vec![0usize; edges.len()];
        for (v, rot) in rotation.iter().enumerate() {
            for &e in rot {
                let Some(&(a, b)) = edges.get(e) else {
                    return Err(Error::InvalidArgument(format!("unknown edge id {e}")));
                };
                if a != v && b != v {
                    return Err(Error::InvalidArgument(format!(
                        "edge {e} in rotation of non-endpoint {v}"
                    )));
                }
                seen[e] += 1;
            }
        }
        if seen.iter().any(|&c| c != 2) {
            return Err(Error::InvalidArgument(
                "every edge must appear exactly once at each endpoint".into(),
            ));
        }
        let faces = trace_faces(&edges, &rotation);
        Ok(EmbeddedGraph { edges, rotation, faces })
    }

    /// Build a simple embedded graph from neighbor lists in cyclic order.
    pub fn from_rotation_neighbors(neighbors: Vec<Vec<usize>>) -> Result<Self> {
        let n = neighbors.len();
        let mut edge_ids = std::collections::HashMap::new();
        let mut edges = Vec::new();
        for (u, rot) in neighbors.iter().enumerate() {
            let mut local = rot.clone();
            local.sort_unstable();
            local.dedup();
            if local.len() != rot.len() {
                return Err(Error::InvalidArgument(format!(
                    "vertex {u}: repeated neighbor in rotation (parallel edges need explicit ids)"
                )));
            }
            for &v in rot {
                if v >= n {
                    return Err(Error::InvalidArgument(format!("vertex {u}: neighbor {v} out of range")));
                }
                if v == u {
                    return Err(Error::InvalidArgument(format!("vertex {u}: loop")));
                }
                let key = (u.min(v), u.max(v));
                edge_ids.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edges.len() - 1
                });
            }
        }
        let rotation = neighbors
            .iter()
            .enumerate()
            .map(|(u, rot)| rot.iter().map(|&v| edge_ids[&(u.min(v), u.max(v))]).collect())
            .collect();
        let g = Self::new(edges, rotation)?;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rotation[v].iter().map(move |&e| self.other_end(e, v))
    }

    /// Neighbor lists in rotation order (only meaningful when simple).
    pub fn rotation_neighbors(&self) -> Vec<Vec<usize>> {
        (0..self.n()).map(|v| self.neighbors(v).collect()).collect()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.rotation[u]
            .iter()
            .copied()
            .find(|&e| self.other_end(e, u) == v)
    }

    pub fn is_simple(&self) -> bool {
        let mut pairs: Vec<(usize, usize)> =
            self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        pairs.windows(2).all(|w| w[0] != w[1])
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n()
    }

    /// Euler's formula for the traced faces: certifies a genus-0 embedding.
    pub fn is_planar_embedding(&self) -> bool {
        self.is_connected()
            && self.n() as i64 - self.edge_count() as i64 + self.faces.len() as i64 == 2
    }

    /// The two faces flanking each edge, by face index.
    pub fn edge_faces(&self) -> Vec<(usize, usize)> {
        let mut sides = vec![(usize::MAX, usize::MAX); self.edge_count()];
        for (fi, face) in self.faces.iter().enumerate() {
            for d in &face.darts {
                if sides[d.edge].0 == usize::MAX {
                    sides[d.edge].0 = fi;
                } else {
                    sides[d.edge].1 = fi;
                }
            }
        }
        sides
    }

    /// Geometric dual: one vertex per face, edge ids preserved.
    pub fn dual(&self) -> Result<EmbeddedGraph> {
        if !self.is_connected() {
            return Err(Error::InvalidArgument("dual of a disconnected graph".into()));
        }
        let sides = self.edge_faces();
        if sides.iter().any(|&(a, b)| a == b) {
            return Err(Error::InvalidArgument(
                "dual would contain a loop (graph has a bridge)".into(),
            ));
        }
        let edges: Vec<(usize, usize)> = sides;
        let rotation: Vec<Vec<usize>> = self
            .faces
            .iter()
            .map(|f| f.darts.iter().map(|d| d.edge).collect())
            .collect();
        EmbeddedGraph::new(edges, rotation)
    }

    /// The underlying abstract simple graph (errors on parallel edges).
    pub fn to_simple_graph(&self) -> Result<SimpleGraph> {
        if !self.is_simple() {
            return Err(Error::InvalidArgument("graph has parallel edges".into()));
        }
        SimpleGraph::from_edges(self.n(), &self.edges)
    }

    /// Canonical code of the embedding, minimized over all root darts and
    /// both reflections. Equal codes = isomorphic maps (up to reflection).
    pub fn canonical_code(&self) -> Vec<u32> {
        assert!(self.is_connected(), "canonical code requires a connected graph");
        let mut best: Option<Vec<u32>> = None;
        for e in 0..self.edge_count() {
            let (a, b) = self.edges[e];
            for &root in &[Dart { edge: e, tail: a }, Dart { edge: e, tail: b }] {
                for reflect in [false, true] {
                    let code = self.encode_from(root, reflect);
                    if best.as_ref().is_none_or(|b| code < *b) {
                        best = Some(code);
                    }
                }
            }
        }
        best.unwrap_or_default()
    }

    fn encode_from(&self, root: Dart, reflect: bool) -> Vec<u32> {
        let n = self.n();
        let mut label = vec![u32::MAX; n];
        let mut entry = vec![usize::MAX; n]; // edge that discovered the vertex
        let mut order = Vec::with_capacity(n);
        label[root.tail] = 0;
        entry[root.tail] = root.edge;
        order.push(root.tail);
        let mut code = Vec::with_capacity(n + 2 * self.edge_count());
        let mut next_label = 1u32;
        let mut idx = 0;
        while idx < order.len() {
            let u = order[idx];
            idx += 1;
            let rot = &self.rotation[u];
            let k = rot.len();
            let start = rot.iter().position(|&e| e == entry[u]).expect("entry edge in rotation");
            code.push(k as u32);
            for step in 0..k {
                let pos = if reflect {
                    (start + k - step % k) % k
                } else {
                    (start + step) % k
                };
                let e = rot[pos];
                let w = self.other_end(e, u);
                if label[w] == u32::MAX {
                    label[w] = next_label;
                    next_label += 1;
                    entry[w] = e;
                    order.push(w);
                }
                code.push(label[w]);
            }
        }
        code
    }
}

/// Map isomorphism up to reflection, by canonical code.
pub fn are_isomorphic(a: &EmbeddedGraph, b: &EmbeddedGraph) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && a.canonical_code() == b.canonical_code()
}

fn trace_faces(edges: &[(usize, usize)], rotation: &[Vec<usize>]) -> Vec<Face> {
    // Dart (e, tail=u): successor is the dart leaving head v along the edge
    // after e in v's rotation.
    let mut pos = vec![std::collections::HashMap::new(); rotation.len()];
    for (v, rot) in rotation.iter().enumerate() {
        for (i, &e) in rot.iter().enumerate() {
            pos[v].insert(e, i);
        }
    }
    let other = |e: usize, v: usize| {
        let (a, b) = edges[e];
        if a == v {
            b
        } else {
            a
        }
    };
    let mut visited = std::collections::HashSet::new();
    let mut faces = Vec::new();
    for e0 in 0..edges.len() {
        for &tail in &[edges[e0].0, edges[e0].1] {
            let start = Dart { edge: e0, tail };
            if visited.contains(&start) {
                continue;
            }
            let mut darts = Vec::new();
            let mut vertices = Vec::new();
            let mut d = start;
            loop {
                visited.insert(d);
                darts.push(d);
                vertices.push(d.tail);
                let head = other(d.edge, d.tail);
                let rot = &rotation[head];
                let i = pos[head][&d.edge];
                let e2 = rot[(i + 1) % rot.len()];
                d = Dart { edge: e2, tail: head };
                if d == start {
                    break;
                }
            }
            faces.push(Face { darts, vertices });
        }
    }
    faces
}

#[cfg(test)]
pub(crate) mod testgraphs {
    use super::EmbeddedGraph;

    /// K4 embedded: hub 0 inside triangle 1,2,3.
    pub fn k4() -> EmbeddedGraph {
        EmbeddedGraph::from_rotation_neighbors(vec![
            vec![1, 2, 3],
            vec![2, 0, 3],
            vec![3, 0, 1],
            vec![1, 0, 2],
        ])
        .unwrap()
    }

    /// Cube graph (vertices 0..4 bottom, 4..8 top), rotations CCW as seen
    /// from outside.
    pub fn cube() -> EmbeddedGraph {
        EmbeddedGraph::from_rotation_neighbors(vec![
            vec![1, 4, 3],
            vec![0, 2, 5],
            vec![1, 3, 6],
            vec![2, 0, 7],
            vec![5, 7, 0],
            vec![4, 1, 6],
            vec![5, 2, 7],
            vec![6, 3, 4],
        ])
        .unwrap()
    }
}
