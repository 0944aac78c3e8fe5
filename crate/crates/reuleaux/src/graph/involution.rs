//! Involutions of self-dual embedded graphs and their diagonal graphs.

use super::{EmbeddedGraph, SimpleGraph};
use crate::error::{Error, Result};

/// A vertex -> face assignment on a fixed embedded graph. `map[v]` indexes
/// into `g.faces()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Involution {
    pub map: Vec<usize>,
}

impl Involution {
    pub fn face_vertices<'g>(&self, g: &'g EmbeddedGraph, v: usize) -> &'g [usize] {
        &g.faces()[self.map[v]].vertices
    }
}

/// Both involution axioms plus bijectivity:
/// 1) v is not on its own dual face, 2) u in tau(v) iff v in tau(u),
/// and tau is a bijection between vertices and faces.
pub fn verify_involution(g: &EmbeddedGraph, tau: &Involution) -> bool {
    let n = g.n();
    let f = g.faces().len();
    if tau.map.len() != n || n != f {
        return false;
    }
    let mut used = vec![false; f];
    for &fi in &tau.map {
        if fi >= f || used[fi] {
            return false;
        }
        used[fi] = true;
    }
    let on_face: Vec<Vec<bool>> = (0..n)
        .map(|v| {
            let mut row = vec![false; n];
            for &u in &g.faces()[tau.map[v]].vertices {
                row[u] = true;
            }
            row
        })
        .collect();
    for v in 0..n {
        if on_face[v][v] {
            return false; // axiom 1
        }
        for u in 0..n {
            if on_face[v][u] != on_face[u][v] {
                return false; // axiom 2
            }
        }
    }
    true
}

/// Search for an involution among the duality isomorphisms of `g`.
///
/// Candidates are graph isomorphisms g -> g* (vertices to faces preserving
/// adjacency both ways); the first assignment satisfying both axioms, in
/// vertex/face index order, is returned.
pub fn find_involution(g: &EmbeddedGraph) -> Result<Option<Involution>> {
    if !g.is_simple() {
        return Err(Error::InvalidArgument("involution search requires a simple graph".into()));
    }
    if !g.is_planar_embedding() {
        return Err(Error::InvalidArgument(
            "involution search requires a connected genus-0 embedding".into(),
        ));
    }
    let sg = g.to_simple_graph()?;
    if !sg.is_k_connected(3) {
        return Err(Error::InvalidArgument("involution search requires 3-connectivity".into()));
    }
    let n = g.n();
    let f = g.faces().len();
    if n != f {
        return Ok(None); // |V| != |F|: not self-dual
    }
    // face adjacency (dual graph) and face membership
    let sides = g.edge_faces();
    let mut fadj = vec![vec![false; f]; f];
    for &(a, b) in &sides {
        fadj[a][b] = true;
        fadj[b][a] = true;
    }
    let member: Vec<Vec<bool>> = (0..f)
        .map(|fi| {
            let mut row = vec![false; n];
            for &u in &g.faces()[fi].vertices {
                row[u] = true;
            }
            row
        })
        .collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; f];
    // Enumerate isomorphisms in index order until one passes axiom 2
    // (axiom 1 is pruned inline via the membership test).
    let mut found: Option<Involution> = None;
    fn search_all(
        g: &EmbeddedGraph,
        sg: &SimpleGraph,
        fadj: &[Vec<bool>],
        member: &[Vec<bool>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        v: usize,
        found: &mut Option<Involution>,
    ) {
        if found.is_some() {
            return;
        }
        let n = g.n();
        if v == n {
            let tau = Involution { map: map.clone() };
            if verify_involution(g, &tau) {
                *found = Some(tau);
            }
            return;
        }
        for fi in 0..g.faces().len() {
            if used[fi] || g.faces()[fi].len() != g.degree(v) || member[fi][v] {
                continue;
            }
            let ok = (0..v).all(|u| sg.adjacent(u, v) == fadj[map[u]][fi]);
            if !ok {
                continue;
            }
            map[v] = fi;
            used[fi] = true;
            search_all(g, sg, fadj, member, map, used, v + 1, found);
            used[fi] = false;
            map[v] = usize::MAX;
            if found.is_some() {
                return;
            }
        }
    }
    search_all(g, &sg, &fadj, &member, &mut map, &mut used, 0, &mut found);
    Ok(found)
}

/// Diagonal graph: an edge [a,x] for every x on tau(a).
pub fn diagonal_graph(g: &EmbeddedGraph, tau: &Involution) -> Result<SimpleGraph> {
    if !verify_involution(g, tau) {
        return Err(Error::InvalidArgument("involution fails verification".into()));
    }
    let mut edges = Vec::new();
    for v in 0..g.n() {
        for &u in tau.face_vertices(g, v) {
            if v < u {
                edges.push((v, u));
            }
        }
    }
    SimpleGraph::from_edges(g.n(), &edges)
}

/// The dual edge of (u,v): the unique edge shared by the faces tau(u), tau(v).
pub fn dual_edge(g: &EmbeddedGraph, tau: &Involution, e: usize) -> Result<usize> {
    let (u, v) = g.edges()[e];
    let (fu, fv) = (tau.map[u], tau.map[v]);
    let sides = g.edge_faces();
    let mut hit = None;
    for (id, &(a, b)) in sides.iter().enumerate() {
        if (a, b) == (fu, fv) || (a, b) == (fv, fu) {
            if hit.is_some() {
                return Err(Error::InternalConsistency(format!(
                    "faces of edge {e} share more than one edge"
                )));
            }
            hit = Some(id);
        }
    }
    hit.ok_or_else(|| {
        Error::InternalConsistency(format!("dual faces of edge {e} share no edge"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::testgraphs::{cube, k4};

    fn w5() -> EmbeddedGraph {
        crate::generator::odd_wheel(5).unwrap().graph
    }

    #[test]
    fn k4_involution_is_opposite_face() {
        let g = k4();
        let tau = find_involution(&g).unwrap().expect("K4 is involutive");
        assert!(verify_involution(&g, &tau));
        for v in 0..4 {
            let fv = tau.face_vertices(&g, v);
            assert_eq!(fv.len(), 3);
            assert!(!fv.contains(&v));
        }
    }

    #[test]
    fn cube_has_no_involution() {
        assert!(find_involution(&cube()).unwrap().is_none());
    }

    #[test]
    fn wheels_are_self_dual() {
        for r in [3, 5, 7] {
            let g = crate::generator::odd_wheel(r).unwrap().graph;
            let d = g.dual().unwrap();
            assert!(crate::graph::are_isomorphic(&g, &d), "W{r} must equal its dual");
        }
    }

    #[test]
    fn incident_face_map_fails_axiom_1() {
        let g = k4();
        // map each vertex to some face containing it
        let mut map = Vec::new();
        for v in 0..4 {
            let fi = g.faces().iter().position(|f| f.contains_vertex(v)).unwrap();
            map.push(fi);
        }
        assert!(!verify_involution(&g, &Involution { map }));
    }

    #[test]
    fn w5_offset_one_fails_axiom_2() {
        let g = w5();
        // rim i -> triangle (hub, i+1, i+2); hub -> outer face
        let hub = 5;
        let mut map = vec![usize::MAX; 6];
        for i in 0..5 {
            let want = {
                let mut s = vec![hub, (i + 1) % 5, (i + 2) % 5];
                s.sort_unstable();
                s
            };
            map[i] = g
                .faces()
                .iter()
                .position(|f| f.vertex_set() == want)
                .expect("triangle face exists");
        }
        map[hub] = g.faces().iter().position(|f| f.len() == 5).unwrap();
        let tau = Involution { map };
        assert!(!verify_involution(&g, &tau));
    }

    #[test]
    fn diagonal_of_k4_is_k4() {
        let g = k4();
        let tau = find_involution(&g).unwrap().unwrap();
        let d = diagonal_graph(&g, &tau).unwrap();
        assert_eq!(d.edge_count(), 6);
        assert_eq!(d.chromatic_number(), 4);
    }

    #[test]
    fn diagonal_of_w5_is_hub_plus_pentagram() {
        let g = w5();
        let tau = find_involution(&g).unwrap().unwrap();
        let d = diagonal_graph(&g, &tau).unwrap();
        assert_eq!(d.edge_count(), 10); // 2n-2
        let hub = 5;
        for i in 0..5 {
            assert!(d.adjacent(hub, i));
        }
        // rim diagonals form the pentagram 5-cycle
        for i in 0..5 {
            assert!(d.adjacent(i, (i + 2) % 5));
            assert!(!d.adjacent(i, (i + 1) % 5));
        }
        assert_eq!(d.chromatic_number(), 4);
    }

    #[test]
    fn dual_edge_pairing_is_involutive() {
        let g = w5();
        let tau = find_involution(&g).unwrap().unwrap();
        for e in 0..g.edge_count() {
            let de = dual_edge(&g, &tau, e).unwrap();
            assert_eq!(dual_edge(&g, &tau, de).unwrap(), e);
            assert_ne!(de, e);
        }
    }
}
