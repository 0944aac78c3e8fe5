//! Independent brute-force route to the involutive polyhedral graphs of a
//! given order: enumerate every graph with n vertices, 2n-2 edges and
//! minimum degree 3 up to isomorphism (vertex-augmentation with
//! canonical-form dedup), keep the 3-connected ones, embed the planar ones
//! through their nonseparating induced cycles, and filter by involution
//! search. Shares no machinery with the add-expansion generator under test.

use reuleaux::graph::{find_involution, EmbeddedGraph};
use std::collections::HashSet;

/// Adjacency of a small labeled graph as per-vertex bitmasks.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Small {
    n: usize,
    adj: Vec<u16>,
}

impl Small {
    fn empty(n: usize) -> Self {
        Small { n, adj: vec![0; n] }
    }

    fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    fn add_vertex(&self, neighbors: u16) -> Small {
        let mut g = self.clone();
        let k = g.n;
        g.adj.push(neighbors);
        g.n += 1;
        for v in 0..k {
            if neighbors & (1 << v) != 0 {
                g.adj[v] |= 1 << k;
            }
        }
        g
    }

    fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = 1u16;
        loop {
            let mut next = seen;
            let mut m = seen;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                next |= self.adj[v];
            }
            if next == seen {
                break;
            }
            seen = next;
        }
        seen.count_ones() as usize == self.n
    }

    fn connected_without(&self, removed: u16) -> bool {
        let full = ((1u32 << self.n) - 1) as u16 & !removed;
        if full == 0 {
            return true;
        }
        let start = full.trailing_zeros() as usize;
        let mut seen = 1u16 << start;
        loop {
            let mut next = seen;
            let mut m = seen;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                next |= self.adj[v] & full;
            }
            if next == seen {
                break;
            }
            seen = next;
        }
        seen == full
    }

    fn is_three_connected(&self) -> bool {
        if self.n < 4 || !self.is_connected() {
            return false;
        }
        for a in 0..self.n {
            if !self.connected_without(1 << a) {
                return false;
            }
        }
        for a in 0..self.n {
            for b in a + 1..self.n {
                if !self.connected_without((1 << a) | (1 << b)) {
                    return false;
                }
            }
        }
        true
    }

    /// Canonical key: the lexicographically largest prefix encoding over all
    /// vertex orderings. Entry t is the adjacency of the t-th vertex to the
    /// previously placed ones, bit i for position i.
    fn canonical_key(&self) -> Vec<u16> {
        let mut best: Vec<u16> = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        self.key_dfs(&mut chosen, &mut best);
        best
    }

    fn code_of(&self, v: usize, chosen: &[usize]) -> u16 {
        let mut code = 0u16;
        for (i, &u) in chosen.iter().enumerate() {
            if self.adjacent(v, u) {
                code |= 1 << i;
            }
        }
        code
    }

    /// Explores orderings whose prefix codes stay >= the best found so far.
    /// Every active branch ties the running maximum; a strictly larger code
    /// truncates and replaces it.
    fn key_dfs(&self, chosen: &mut Vec<usize>, best: &mut Vec<u16>) {
        let pos = chosen.len();
        if pos == self.n {
            return;
        }
        let mut cands: Vec<(u16, usize)> = (0..self.n)
            .filter(|v| !chosen.contains(v))
            .map(|v| (self.code_of(v, chosen), v))
            .collect();
        cands.sort_unstable_by(|a, b| b.cmp(a));
        for &(code, v) in &cands {
            if pos < best.len() {
                if code < best[pos] {
                    break; // sorted descending: nothing better follows
                }
                if code > best[pos] {
                    best.truncate(pos);
                    best.push(code);
                }
            } else {
                best.push(code);
            }
            chosen.push(v);
            self.key_dfs(chosen, best);
            chosen.pop();
        }
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// All graphs with `n` vertices, `m` edges and minimum degree >= 3, one per
/// isomorphism class.
fn graphs_with_edge_count(n: usize, m: usize) -> Vec<Small> {
    assert!(n <= 16);
    let mut level: Vec<Small> = vec![Small::empty(1)];
    for k in 1..n {
        // adding vertex k; afterwards k+1 vertices exist, n-k-1 still to come
        let remaining = n - (k + 1);
        // future edges always touch a later vertex: vertex j adds at most j
        let max_future: usize = (k + 1..n).sum();
        let mut next: HashSet<Vec<u16>> = HashSet::new();
        let mut reps: Vec<Small> = Vec::new();
        for g in &level {
            let budget = m.saturating_sub(g.edge_count());
            for subset in 0u32..(1u32 << k) {
                let subset = subset as u16;
                if subset.count_ones() as usize > budget {
                    continue;
                }
                let child = g.add_vertex(subset);
                let future = m - child.edge_count();
                if future > max_future {
                    continue;
                }
                // every current vertex can gain at most one edge per future
                // vertex, and each future edge repairs at most one unit of
                // current deficiency
                let defs: Vec<usize> =
                    (0..child.n).map(|v| 3usize.saturating_sub(child.degree(v))).collect();
                if defs.iter().any(|&d| d > remaining) {
                    continue;
                }
                let def_total: usize = defs.iter().sum();
                let need = def_total.max((def_total + 3 * remaining).div_ceil(2));
                if future < need {
                    continue;
                }
                let key = child.canonical_key();
                if next.insert(key) {
                    reps.push(child);
                }
            }
        }
        level = reps;
    }
    level
        .into_iter()
        .filter(|g| g.edge_count() == m && (0..g.n).all(|v| g.degree(v) >= 3))
        .collect()
}

/// Chordless cycles whose removal leaves the graph connected. An induced
/// cycle is determined by its vertex set, so deduplication is by set.
fn nonseparating_induced_cycles(g: &Small) -> Vec<Vec<usize>> {
    fn extend(g: &Small, s: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        for w in 0..g.n {
            if w <= s || path.contains(&w) || !g.adjacent(last, w) {
                continue;
            }
            // neighbors of w among the path, other than `last`
            let touches_start = g.adjacent(w, s);
            let interior = path.get(1..path.len().saturating_sub(1)).unwrap_or(&[]);
            let touches_interior = interior.iter().any(|&u| g.adjacent(w, u));
            if touches_interior {
                continue; // any cycle through w here would carry a chord
            }
            if touches_start && path.len() >= 2 {
                let mut cyc = path.clone();
                cyc.push(w);
                out.push(cyc);
                continue; // extending past w would leave the chord w-s
            }
            path.push(w);
            extend(g, s, path, out);
            path.pop();
        }
    }
    let mut raw = Vec::new();
    for s in 0..g.n {
        let mut path = vec![s];
        extend(g, s, &mut path, &mut raw);
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for cyc in raw {
        if cyc.len() < 3 {
            continue;
        }
        let k = cyc.len();
        let induced = (0..k).all(|i| {
            (i + 1..k).all(|j| {
                let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                g.adjacent(cyc[i], cyc[j]) == consecutive
            })
        });
        if !induced {
            continue;
        }
        let removed: u16 = cyc.iter().fold(0, |m, &v| m | (1 << v));
        if !g.connected_without(removed) {
            continue;
        }
        let mut key = cyc.clone();
        key.sort_unstable();
        if seen.insert(key) {
            out.push(cyc);
        }
    }
    out
}

/// Embed a 3-connected graph through its nonseparating induced cycles
/// (its faces, by Tutte/Kelmans); None when the graph is not planar.
fn embed_by_peripheral_cycles(g: &Small) -> Option<EmbeddedGraph> {
    let n = g.n;
    let m = g.edge_count();
    let faces_needed = 2 + m - n;
    let cycles = nonseparating_induced_cycles(g);
    if cycles.len() != faces_needed {
        return None;
    }
    // each edge must lie in exactly two of them
    let mut edge_faces: std::collections::HashMap<(usize, usize), Vec<usize>> = Default::default();
    for (ci, cyc) in cycles.iter().enumerate() {
        let k = cyc.len();
        for i in 0..k {
            let (a, b) = (cyc[i], cyc[(i + 1) % k]);
            edge_faces.entry((a.min(b), a.max(b))).or_default().push(ci);
        }
    }
    for (u, v) in g.edges() {
        if edge_faces.get(&(u, v)).map(|f| f.len()) != Some(2) {
            return None;
        }
    }
    // orient the faces so every edge is traversed once per direction
    let mut oriented: Vec<Option<Vec<usize>>> = vec![None; cycles.len()];
    oriented[0] = Some(cycles[0].clone());
    let mut queue = vec![0usize];
    while let Some(ci) = queue.pop() {
        let cyc = oriented[ci].clone().unwrap();
        let k = cyc.len();
        for i in 0..k {
            let (a, b) = (cyc[i], cyc[(i + 1) % k]);
            let key = (a.min(b), a.max(b));
            for &cj in &edge_faces[&key] {
                if cj == ci {
                    continue;
                }
                // cj must traverse b -> a
                let other = &cycles[cj];
                let kk = other.len();
                let pos = other.iter().position(|&v| v == b).unwrap();
                let fwd = other[(pos + 1) % kk] == a;
                let want: Vec<usize> = if fwd {
                    other.clone()
                } else {
                    let mut r = other.clone();
                    r.reverse();
                    r
                };
                match &oriented[cj] {
                    None => {
                        oriented[cj] = Some(want);
                        queue.push(cj);
                    }
                    Some(existing) => {
                        // must agree as a cyclic sequence
                        let ok = {
                            let p = existing.iter().position(|&v| v == want[0]).unwrap();
                            (0..kk).all(|t| existing[(p + t) % kk] == want[t])
                        };
                        if !ok {
                            return None;
                        }
                    }
                }
            }
        }
    }
    if oriented.iter().any(|o| o.is_none()) {
        return None;
    }
    // successor constraints: face (a -> v -> b) forces "edge (v,b) follows
    // edge (v,a) in the rotation at v"
    let mut succ: Vec<std::collections::HashMap<usize, usize>> = vec![Default::default(); n];
    for cyc in oriented.iter().flatten() {
        let k = cyc.len();
        for i in 0..k {
            let a = cyc[i];
            let v = cyc[(i + 1) % k];
            let b = cyc[(i + 2) % k];
            if succ[v].insert(a, b).is_some_and(|old| old != b) {
                return None;
            }
        }
    }
    let mut rotation: Vec<Vec<usize>> = Vec::with_capacity(n);
    for v in 0..n {
        let deg = g.degree(v);
        let start = (0..n).find(|&u| g.adjacent(v, u))?;
        let mut rot = vec![start];
        while rot.len() < deg {
            let next = *succ[v].get(rot.last().unwrap())?;
            if rot.contains(&next) {
                return None; // rotation closed early: not a single cycle
            }
            rot.push(next);
        }
        if *succ[v].get(rot.last().unwrap())? != start {
            return None;
        }
        rotation.push(rot);
    }
    let eg = EmbeddedGraph::from_rotation_neighbors(rotation).ok()?;
    if !eg.is_planar_embedding() || eg.faces().len() != faces_needed {
        return None;
    }
    Some(eg)
}

/// The involutive polyhedral graphs with exactly `n` vertices, by brute
/// force. Returned as embedded graphs (unique embedding up to reflection).
pub fn involutive_graphs_brute_force(n: usize) -> Vec<EmbeddedGraph> {
    assert!((4..=9).contains(&n), "oracle sized for desk-scale orders");
    let m = 2 * n - 2;
    let mut out: Vec<EmbeddedGraph> = Vec::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for g in graphs_with_edge_count(n, m) {
        if !g.is_three_connected() {
            continue;
        }
        let Some(eg) = embed_by_peripheral_cycles(&g) else {
            continue;
        };
        match find_involution(&eg) {
            Ok(Some(_)) => {
                let code = eg.canonical_code();
                if seen.insert(code) {
                    out.push(eg);
                }
            }
            Ok(None) => {}
            Err(err) => panic!("involution search failed on an oracle graph: {err}"),
        }
    }
    out
}
