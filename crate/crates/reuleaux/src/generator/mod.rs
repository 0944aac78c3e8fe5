//! Enumeration of involutive polyhedral graphs: odd-wheel seeds, the
//! add-expansion operation and its inverse delete-contraction, and an
//! isomorph-free breadth-first enumeration.

use crate::error::{Error, Result};
use crate::graph::{dual_edge, verify_involution, EmbeddedGraph, Involution};
use std::collections::BTreeMap;

/// Hard cap for enumeration and realization.
pub const MAX_N: usize = 14;

/// A verified involutive polyhedral graph together with how it was built.
#[derive(Debug, Clone)]
pub struct InvolutiveGraph {
    pub graph: EmbeddedGraph,
    pub tau: Involution,
    /// Expansion steps from the seed wheel, oldest first.
    pub provenance: Vec<String>,
}

impl InvolutiveGraph {
    /// Runs the full verification suite: simple, genus-0 embedding,
    /// 3-connected, self-dual count |V| = |F|, degree/face-size match and
    /// both involution axioms.
    pub fn new(graph: EmbeddedGraph, tau: Involution, provenance: Vec<String>) -> Result<Self> {
        let ig = InvolutiveGraph { graph, tau, provenance };
        ig.verify()?;
        Ok(ig)
    }

    pub fn verify(&self) -> Result<()> {
        let g = &self.graph;
        if !g.is_simple() {
            return Err(Error::InternalConsistency("graph is not simple".into()));
        }
        if !g.is_planar_embedding() {
            return Err(Error::InternalConsistency("embedding is not genus 0".into()));
        }
        if g.n() != g.faces().len() {
            return Err(Error::InternalConsistency(format!(
                "not self-dual: {} vertices vs {} faces",
                g.n(),
                g.faces().len()
            )));
        }
        if !g.to_simple_graph()?.is_k_connected(3) {
            return Err(Error::InternalConsistency("graph is not 3-connected".into()));
        }
        for v in 0..g.n() {
            if g.degree(v) != g.faces()[self.tau.map[v]].len() {
                return Err(Error::InternalConsistency(format!(
                    "degree of {v} differs from its dual face size"
                )));
            }
        }
        if !verify_involution(g, &self.tau) {
            return Err(Error::InternalConsistency("involution axioms fail".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn diagonal(&self) -> Result<crate::graph::SimpleGraph> {
        crate::graph::diagonal_graph(&self.graph, &self.tau)
    }

    pub fn canonical_code(&self) -> Vec<u32> {
        self.graph.canonical_code()
    }

    /// True for wheels: one hub adjacent to all others, the rest a cycle.
    pub fn is_wheel(&self) -> bool {
        let g = &self.graph;
        let n = g.n();
        if n < 4 {
            return false;
        }
        let Some(hub) = (0..n).find(|&v| g.degree(v) == n - 1) else {
            return false;
        };
        (0..n).all(|v| v == hub || g.degree(v) == 3)
    }
}

/// A vertex split of an expansion: the dual face of `vertex` is divided into
/// the two paths x..y and y..x along the face cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionStep {
    pub vertex: usize,
    pub x: usize,
    pub y: usize,
}

fn face_id_by_vertex_set(g: &EmbeddedGraph, want: &[usize]) -> Result<usize> {
    let mut want = want.to_vec();
    want.sort_unstable();
    want.dedup();
    let mut found = None;
    for (fi, f) in g.faces().iter().enumerate() {
        if f.vertex_set() == want {
            if found.is_some() {
                return Err(Error::InternalConsistency(format!(
                    "two faces share the vertex set {want:?}"
                )));
            }
            found = Some(fi);
        }
    }
    found.ok_or_else(|| Error::InternalConsistency(format!("no face with vertex set {want:?}")))
}

/// Wheel with an odd rim of length `r`: rim 0..r-1, hub r. The involution
/// sends the hub to the outer face and rim vertex i to the triangle offset
/// by (r-1)/2.
pub fn odd_wheel(r: usize) -> Result<InvolutiveGraph> {
    if r < 3 || r % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "wheel rim must be an odd integer >= 3, got {r}"
        )));
    }
    if r + 1 > MAX_N {
        return Err(Error::ResourceLimit(format!("wheel W{r} exceeds the {MAX_N}-vertex cap")));
    }
    let hub = r;
    let mut rot: Vec<Vec<usize>> = Vec::new();
    for i in 0..r {
        rot.push(vec![(i + 1) % r, hub, (i + r - 1) % r]);
    }
    rot.push((0..r).collect());
    let g = EmbeddedGraph::from_rotation_neighbors(rot)?;
    let s = (r - 1) / 2;
    let mut map = vec![usize::MAX; r + 1];
    for i in 0..r {
        map[i] = face_id_by_vertex_set(&g, &[hub, (i + s) % r, (i + s + 1) % r])?;
    }
    map[hub] = face_id_by_vertex_set(&g, &(0..r).collect::<Vec<_>>())?;
    InvolutiveGraph::new(g, Involution { map }, vec![format!("W{r}")])
}

/// Expand `step.vertex` (degree >= 4) into an edge v1-v2, splitting its dual
/// face into the two paths x..y / y..x and adding the chord xy.
pub fn add_expansion(ig: &InvolutiveGraph, step: ExpansionStep) -> Result<InvolutiveGraph> {
    let g = &ig.graph;
    let v = step.vertex;
    if v >= g.n() {
        return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
    }
    let k = g.degree(v);
    if k < 4 {
        return Err(Error::InvalidArgument(format!(
            "expansion requires degree >= 4, vertex {v} has degree {k}"
        )));
    }
    if g.n() + 1 > MAX_N {
        return Err(Error::ResourceLimit(format!("expansion exceeds the {MAX_N}-vertex cap")));
    }
    let face = &g.faces()[ig.tau.map[v]];
    let cyc = &face.vertices;
    let i = cyc
        .iter()
        .position(|&u| u == step.x)
        .ok_or_else(|| Error::InvalidArgument(format!("{} is not on the dual face", step.x)))?;
    let j = cyc
        .iter()
        .position(|&u| u == step.y)
        .ok_or_else(|| Error::InvalidArgument(format!("{} is not on the dual face", step.y)))?;
    if i == j {
        return Err(Error::InvalidArgument("split endpoints must differ".into()));
    }
    let len1 = (j + k - i) % k + 1;
    let len2 = (i + k - j) % k + 1;
    if len1 < 3 || len2 < 3 {
        return Err(Error::InvalidArgument(
            "both split paths need at least 3 vertices".into(),
        ));
    }
    if g.edge_between(step.x, step.y).is_some() {
        return Err(Error::InvalidArgument("split endpoints are already adjacent".into()));
    }
    // Path membership of the face-cycle edges: positions i..j-1 belong to P1.
    let in_p1 = |pos: usize| -> bool {
        // position of the face dart cyc[pos] -> cyc[pos+1]
        (pos + k - i) % k < (j + k - i) % k
    };
    let p1_verts: Vec<usize> = (0..len1).map(|t| cyc[(i + t) % k]).collect();
    let p2_verts: Vec<usize> = (0..len2).map(|t| cyc[(j + t) % k]).collect();

    // Side of each edge at v: which path holds its dual edge.
    let rot_v = g.rotation(v).to_vec();
    let face_edge_pos: std::collections::HashMap<usize, usize> =
        face.darts.iter().enumerate().map(|(pos, d)| (d.edge, pos)).collect();
    let mut side = Vec::with_capacity(k);
    for &e in &rot_v {
        let de = dual_edge(g, &ig.tau, e)?;
        let pos = *face_edge_pos.get(&de).ok_or_else(|| {
            Error::InternalConsistency(format!("dual edge of {e} is not on the dual face"))
        })?;
        side.push(if in_p1(pos) { 1u8 } else { 2u8 });
    }
    // The side-1 edges must be cyclically contiguous around v.
    let changes = (0..k).filter(|&t| side[t] != side[(t + 1) % k]).count();
    if changes != 2 {
        return Err(Error::InternalConsistency(
            "path sides are not contiguous around the split vertex".into(),
        ));
    }
    let start1 = (0..k)
        .find(|&t| side[t] == 1 && side[(t + k - 1) % k] == 2)
        .expect("side-1 block exists");
    let count1 = side.iter().filter(|&&s| s == 1).count();
    let block1: Vec<usize> = (0..count1).map(|t| rot_v[(start1 + t) % k]).collect();
    let block2: Vec<usize> = (count1..k).map(|t| rot_v[(start1 + t) % k]).collect();
    debug_assert_eq!(block1.len() + block2.len(), k);

    // --- build the expanded graph ------------------------------------------
    let n = g.n();
    let v2 = n;
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    for &e in &block2 {
        let (a, b) = edges[e];
        edges[e] = if a == v { (v2, b) } else { (a, v2) };
    }
    let e12 = edges.len();
    edges.push((v, v2));
    let exy = edges.len();
    edges.push((step.x, step.y));

    let mut rotation: Vec<Vec<usize>> = (0..n).map(|u| g.rotation(u).to_vec()).collect();
    let mut rot_v1 = block1.clone();
    rot_v1.push(e12);
    rotation[v] = rot_v1;
    let mut rot_v2 = block2.clone();
    rot_v2.push(e12);
    rotation.push(rot_v2);
    // chord insertion at x and y, in the face corner of the split face
    for (vert, pos) in [(step.x, i), (step.y, j)] {
        let e_in = face.darts[(pos + k - 1) % k].edge;
        let rot = &mut rotation[vert];
        let at = rot.iter().position(|&e| e == e_in).expect("incoming face edge at vertex");
        rot.insert(at + 1, exy);
    }
    let new_graph = EmbeddedGraph::new(edges, rotation)?;

    // --- patched involution ----------------------------------------------
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(n + 1);
    for u in 0..n {
        let mut set = g.faces()[ig.tau.map[u]].vertex_set();
        if u == v {
            set = p1_verts.clone();
        } else if u == step.x || u == step.y {
            set.push(v2); // v (= v1) stays in the set under its old id
        } else if p2_verts.contains(&u) && u != step.x && u != step.y {
            // interior of P2: v is replaced by v2
            set.retain(|&w| w != v);
            set.push(v2);
        }
        sets.push(set);
    }
    sets.push(p2_verts.clone());
    let mut map = Vec::with_capacity(n + 1);
    for set in &sets {
        map.push(face_id_by_vertex_set(&new_graph, set)?);
    }
    let mut provenance = ig.provenance.clone();
    provenance.push(format!("expand(v={v}, x={}, y={})", step.x, step.y));
    InvolutiveGraph::new(new_graph, Involution { map }, provenance)
}

/// Contract edge e and delete its dual edge, patching the involution.
/// Rejects edges whose result would not be a simple 3-connected involutive
/// graph; the cited classification guarantees some edge works unless the
/// graph is a wheel.
pub fn delete_contraction(ig: &InvolutiveGraph, e: usize) -> Result<InvolutiveGraph> {
    let g = &ig.graph;
    if e >= g.edge_count() {
        return Err(Error::InvalidArgument(format!("edge {e} out of range")));
    }
    let (p, q) = g.edges()[e];
    let de = dual_edge(g, &ig.tau, e)?;
    if de == e {
        return Err(Error::Rejected("edge equals its own dual".into()));
    }
    let (x, y) = g.edges()[de];
    if x == p || x == q || y == p || y == q {
        return Err(Error::Rejected("dual edge touches the contracted edge".into()));
    }
    // contraction must keep the graph simple
    let np: std::collections::HashSet<usize> = g.neighbors(p).collect();
    if g.neighbors(q).any(|u| u != p && np.contains(&u)) {
        return Err(Error::Rejected("contraction would create parallel edges".into()));
    }
    // merged vertex may not lie on its own dual face
    let fp = g.faces()[ig.tau.map[p]].vertex_set();
    let fq = g.faces()[ig.tau.map[q]].vertex_set();
    if fp.contains(&q) || fq.contains(&p) {
        return Err(Error::Rejected("merged vertex would lie on its own dual face".into()));
    }

    // --- contracted rotation system (neighbor lists; the graph is simple) --
    let n = g.n();
    let rots = g.rotation_neighbors();
    let rotate_to = |list: &[usize], first: usize| -> Vec<usize> {
        let at = list.iter().position(|&u| u == first).expect("neighbor present");
        (0..list.len()).map(|t| list[(at + t) % list.len()]).collect()
    };
    let rp = rotate_to(&rots[p], q);
    let rq = rotate_to(&rots[q], p);
    let merged: Vec<usize> = rp[1..].iter().chain(rq[1..].iter()).copied().collect();

    // relabel: drop q, shift ids above it down
    let relabel = |u: usize| -> usize {
        if u > q {
            u - 1
        } else {
            u
        }
    };
    let mut rotation: Vec<Vec<usize>> = Vec::with_capacity(n - 1);
    for u in 0..n {
        if u == q {
            continue;
        }
        let src = if u == p { &merged } else { &rots[u] };
        let mut list: Vec<usize> = src
            .iter()
            .map(|&w| if w == q { p } else { w })
            .map(relabel)
            .collect();
        if u == x {
            list.retain(|&w| w != relabel(y));
        }
        if u == y {
            list.retain(|&w| w != relabel(x));
        }
        rotation.push(list);
    }
    let new_graph = EmbeddedGraph::from_rotation_neighbors(rotation)
        .map_err(|err| Error::Rejected(format!("contracted rotation invalid: {err}")))?;

    // --- patched involution -------------------------------------------------
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(n - 1);
    for u in 0..n {
        if u == q {
            continue;
        }
        let base = if u == p {
            let mut s = fp.clone();
            s.extend(fq.iter().copied());
            s
        } else {
            g.faces()[ig.tau.map[u]].vertex_set()
        };
        let mut set: Vec<usize> = base.iter().map(|&w| if w == q { p } else { w }).map(relabel).collect();
        set.sort_unstable();
        set.dedup();
        sets.push(set);
    }
    let mut map = Vec::with_capacity(n - 1);
    for set in &sets {
        map.push(
            face_id_by_vertex_set(&new_graph, set)
                .map_err(|err| Error::Rejected(format!("involution patch failed: {err}")))?,
        );
    }
    let mut provenance = ig.provenance.clone();
    provenance.push(format!("contract(e=({p},{q}), dual=({x},{y}))"));
    InvolutiveGraph::new(new_graph, Involution { map }, provenance)
        .map_err(|err| Error::Rejected(format!("contracted graph fails verification: {err}")))
}

/// First edge (in id order) whose delete-contraction succeeds; None on
/// wheels, where no edge is reducible.
pub fn find_reducible_edge(ig: &InvolutiveGraph) -> Option<usize> {
    (0..ig.graph.edge_count()).find(|&e| delete_contraction(ig, e).is_ok())
}

/// All involutive polyhedral graphs with at most `n_max` vertices, obtained
/// from the odd wheels by add-expansions, isomorph-free and sorted by
/// (order, canonical code).
pub fn enumerate(n_max: usize) -> Result<Vec<InvolutiveGraph>> {
    if n_max > MAX_N {
        return Err(Error::ResourceLimit(format!(
            "enumeration capped at {MAX_N} vertices, requested {n_max}"
        )));
    }
    let mut seen: BTreeMap<Vec<u32>, InvolutiveGraph> = BTreeMap::new();
    let mut queue: Vec<InvolutiveGraph> = Vec::new();
    let mut r = 3;
    while r + 1 <= n_max {
        let w = odd_wheel(r)?;
        if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(w.canonical_code()) {
            e.insert(w.clone());
            queue.push(w);
        }
        r += 2;
    }
    while let Some(ig) = queue.pop() {
        if ig.n() + 1 > n_max {
            continue;
        }
        for v in 0..ig.n() {
            if ig.graph.degree(v) < 4 {
                continue;
            }
            let cyc = ig.graph.faces()[ig.tau.map[v]].vertices.clone();
            let k = cyc.len();
            for i in 0..k {
                for j in 0..k {
                    let len1 = (j + k - i) % k + 1;
                    let len2 = (i + k - j) % k + 1;
                    if i == j || len1 < 3 || len2 < 3 {
                        continue;
                    }
                    let step = ExpansionStep { vertex: v, x: cyc[i], y: cyc[j] };
                    let child = add_expansion(&ig, step)?;
                    if let std::collections::btree_map::Entry::Vacant(e) =
                        seen.entry(child.canonical_code())
                    {
                        e.insert(child.clone());
                        queue.push(child);
                    }
                }
            }
        }
    }
    let mut out: Vec<InvolutiveGraph> = seen.into_values().collect();
    out.sort_by_key(|ig| (ig.n(), ig.canonical_code()));
    // Postcondition from the generation contract: diagonal graphs of
    // involutive polyhedral graphs are vertex- and edge-4-critical.
    for ig in &out {
        let diag = ig.diagonal()?;
        let (vc, _) = diag.is_vertex_4_critical();
        if !vc || !diag.is_edge_4_critical() {
            return Err(Error::InternalConsistency(format!(
                "enumerated graph on {} vertices has a non-4-critical diagonal graph",
                ig.n()
            )));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::are_isomorphic;

    #[test]
    fn odd_wheel_validates() {
        let k4 = odd_wheel(3).unwrap();
        assert_eq!(k4.n(), 4);
        assert!(k4.is_wheel());
        let w5 = odd_wheel(5).unwrap();
        assert_eq!(w5.n(), 6);
        assert!(odd_wheel(4).is_err());
        assert!(odd_wheel(1).is_err());
    }

    #[test]
    fn k4_has_no_expansion() {
        let k4 = odd_wheel(3).unwrap();
        for v in 0..4 {
            let cyc = k4.graph.faces()[k4.tau.map[v]].vertices.clone();
            let step = ExpansionStep { vertex: v, x: cyc[0], y: cyc[1] };
            assert!(add_expansion(&k4, step).is_err());
        }
    }

    #[test]
    fn w5_hub_expansion_gives_seven_vertices() {
        let w5 = odd_wheel(5).unwrap();
        let hub = 5;
        assert_eq!(w5.graph.degree(hub), 5);
        let cyc = w5.graph.faces()[w5.tau.map[hub]].vertices.clone();
        let step = ExpansionStep { vertex: hub, x: cyc[0], y: cyc[2] };
        let g7 = add_expansion(&w5, step).unwrap();
        assert_eq!(g7.n(), 7);
        g7.verify().unwrap();
    }

    #[test]
    fn expansion_round_trips_through_contraction() {
        let w5 = odd_wheel(5).unwrap();
        let hub = 5;
        let cyc = w5.graph.faces()[w5.tau.map[hub]].vertices.clone();
        let step = ExpansionStep { vertex: hub, x: cyc[0], y: cyc[2] };
        let g7 = add_expansion(&w5, step).unwrap();
        let e = find_reducible_edge(&g7).expect("a reducible edge exists");
        let back = delete_contraction(&g7, e).unwrap();
        assert!(are_isomorphic(&back.graph, &w5.graph));
    }

    #[test]
    fn wheels_have_no_reducible_edge() {
        for r in [3, 5, 7] {
            let w = odd_wheel(r).unwrap();
            assert!(find_reducible_edge(&w).is_none(), "W{r} should be irreducible");
        }
    }

    #[test]
    fn enumerate_small() {
        let upto4 = enumerate(4).unwrap();
        assert_eq!(upto4.len(), 1);
        assert!(are_isomorphic(&upto4[0].graph, &odd_wheel(3).unwrap().graph));

        let upto6 = enumerate(6).unwrap();
        assert!(upto6
            .iter()
            .any(|g| are_isomorphic(&g.graph, &odd_wheel(5).unwrap().graph)));
        assert!(upto6.iter().all(|g| g.n() != 5), "no involutive graph has 5 vertices");

        assert!(enumerate(20).is_err());
    }

    #[test]
    fn enumerate_outputs_reduce_back_to_wheels() {
        for ig in enumerate(8).unwrap() {
            let mut cur = ig.clone();
            let mut steps = 0;
            while let Some(e) = find_reducible_edge(&cur) {
                cur = delete_contraction(&cur, e).unwrap();
                steps += 1;
                assert!(steps <= cur.n(), "reduction does not terminate");
            }
            assert!(cur.is_wheel(), "reduction must end at a wheel");
            assert!(steps <= ig.n().saturating_sub(4));
        }
    }
}
