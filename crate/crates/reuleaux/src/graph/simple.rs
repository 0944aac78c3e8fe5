//! Abstract simple graphs on up to 64 vertices: exact chromatic number,
//! criticality certificates and low-order connectivity with witnesses.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

impl SimpleGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > 64 {
            return Err(Error::ResourceLimit(format!("graph order {n} exceeds the 64-vertex cap")));
        }
        let mut adj = vec![0u64; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("loop at {u}")));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(SimpleGraph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
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

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn delete_vertex(&self, v: usize) -> SimpleGraph {
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    pub fn delete_edge(&self, u: usize, v: usize) -> SimpleGraph {
        let mut g = self.clone();
        g.adj[u] &= !(1 << v);
        g.adj[v] &= !(1 << u);
        g
    }

    /// Induced subgraph on `keep`, relabeled 0..keep.len() in the given order.
    pub fn induced(&self, keep: &[usize]) -> SimpleGraph {
        let mut edges = Vec::new();
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    edges.push((i, j));
                }
            }
        }
        SimpleGraph::from_edges(keep.len(), &edges).expect("induced subgraph is valid")
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v] & !seen;
            }
            seen |= next;
            frontier = next;
        }
        seen.count_ones() as usize == self.n
    }

    fn is_connected_masked(&self, mask: u64) -> bool {
        if mask == 0 {
            return true;
        }
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v] & mask & !seen;
            }
            seen |= next;
            frontier = next;
        }
        seen == mask
    }

    /// Greedy clique from each seed vertex; a lower bound for chi.
    fn clique_lower_bound(&self) -> u32 {
        let mut best = if self.n == 0 { 0 } else { 1 };
        for s in 0..self.n {
            let mut clique = 1u32;
            let mut cand = self.adj[s];
            let mut inside = 1u64 << s;
            while cand != 0 {
                // pick the candidate with most candidate-neighbors
                let mut pick = usize::MAX;
                let mut pick_deg = 0u32;
                let mut c = cand;
                while c != 0 {
                    let v = c.trailing_zeros() as usize;
                    c &= c - 1;
                    let d = (self.adj[v] & cand).count_ones();
                    if pick == usize::MAX || d > pick_deg {
                        pick = v;
                        pick_deg = d;
                    }
                }
                inside |= 1 << pick;
                clique += 1;
                cand &= self.adj[pick];
            }
            let _ = inside;
            best = best.max(clique);
        }
        best
    }

    fn greedy_coloring(&self) -> u32 {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(self.degree(v)));
        let mut colors = vec![u32::MAX; self.n];
        let mut used = 0;
        for &v in &order {
            let mut taken = 0u64;
            let mut m = self.adj[v];
            while m != 0 {
                let u = m.trailing_zeros() as usize;
                m &= m - 1;
                if colors[u] != u32::MAX {
                    taken |= 1 << colors[u];
                }
            }
            let c = (!taken).trailing_zeros();
            colors[v] = c;
            used = used.max(c + 1);
        }
        used
    }

    /// Exact proper k-coloring, or None. DSATUR-ordered branch and bound;
    /// the first branch always takes color 0, breaking color symmetry.
    pub fn k_colorable(&self, k: u32) -> Option<Vec<u8>> {
        if self.n == 0 {
            return Some(Vec::new());
        }
        if k == 0 {
            return None;
        }
        let mut colors = vec![u8::MAX; self.n];
        let mut used_on: Vec<u64> = vec![0; self.n]; // bitmask of neighbor colors
        if self.search(k, &mut colors, &mut used_on, 0) {
            Some(colors)
        } else {
            None
        }
    }

    fn search(&self, k: u32, colors: &mut Vec<u8>, used_on: &mut Vec<u64>, max_used: u32) -> bool {
        // DSATUR: most saturated uncolored vertex; ties by degree then id.
        let mut pick = usize::MAX;
        let mut key = (0u32, 0usize);
        for v in 0..self.n {
            if colors[v] != u8::MAX {
                continue;
            }
            let sat = used_on[v].count_ones();
            let cand = (sat, self.degree(v));
            if pick == usize::MAX || cand > key {
                pick = v;
                key = cand;
            }
        }
        if pick == usize::MAX {
            return true;
        }
        let limit = k.min(max_used + 1);
        for c in 0..limit {
            if used_on[pick] & (1 << c) != 0 {
                continue;
            }
            colors[pick] = c as u8;
            let mut touched = Vec::new();
            let mut m = self.adj[pick];
            while m != 0 {
                let u = m.trailing_zeros() as usize;
                m &= m - 1;
                if colors[u] == u8::MAX && used_on[u] & (1 << c) == 0 {
                    used_on[u] |= 1 << c;
                    touched.push(u);
                }
            }
            if self.search(k, colors, used_on, max_used.max(c + 1)) {
                return true;
            }
            for u in touched {
                used_on[u] &= !(1 << c);
            }
            colors[pick] = u8::MAX;
        }
        false
    }

    /// Exact chromatic number.
    pub fn chromatic_number(&self) -> u32 {
        if self.n == 0 {
            return 0;
        }
        if self.edge_count() == 0 {
            return 1;
        }
        let lb = self.clique_lower_bound();
        let ub = self.greedy_coloring();
        for k in lb..ub {
            if self.k_colorable(k).is_some() {
                return k;
            }
        }
        ub
    }

    /// Exact vertex connectivity capped at 3 ("3 or more"), with a minimum
    /// cut witness when kappa <= 2 and a separating cut exists.
    pub fn connectivity(&self) -> ConnectivityReport {
        if self.n == 0 || !self.is_connected() {
            return ConnectivityReport { kappa: 0, witness: Some(Vec::new()) };
        }
        let full = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        for v in 0..self.n {
            let mask = full & !(1 << v);
            if mask != 0 && !self.is_connected_masked(mask) {
                return ConnectivityReport { kappa: 1, witness: Some(vec![v]) };
            }
        }
        if self.n <= 2 {
            return ConnectivityReport { kappa: (self.n - 1) as u8, witness: None };
        }
        for a in 0..self.n {
            for b in a + 1..self.n {
                let mask = full & !(1 << a) & !(1 << b);
                if mask != 0 && !self.is_connected_masked(mask) {
                    return ConnectivityReport { kappa: 2, witness: Some(vec![a, b]) };
                }
            }
        }
        if self.n == 3 {
            return ConnectivityReport { kappa: 2, witness: None };
        }
        ConnectivityReport { kappa: 3, witness: None }
    }

    pub fn is_k_connected(&self, k: u8) -> bool {
        self.connectivity().kappa >= k
    }

    /// chi = 4 and deleting any vertex drops it to 3. Returns one coloring
    /// certificate per vertex: graph - v properly 3-colored, v alone on the
    /// fourth color.
    pub fn is_vertex_4_critical(&self) -> (bool, Vec<ColoringCertificate>) {
        if self.chromatic_number() != 4 {
            return (false, Vec::new());
        }
        let mut certs = Vec::new();
        for v in 0..self.n {
            let sub = self.delete_vertex(v);
            let Some(sub_colors) = sub.k_colorable(3) else {
                return (false, Vec::new());
            };
            let mut assignment = vec![0u8; self.n];
            let mut j = 0;
            for u in 0..self.n {
                if u == v {
                    assignment[u] = 3;
                } else {
                    assignment[u] = sub_colors[j];
                    j += 1;
                }
            }
            certs.push(ColoringCertificate { assignment, special_vertex: Some(v) });
        }
        (true, certs)
    }

    /// chi = 4 and deleting any edge drops it to 3.
    pub fn is_edge_4_critical(&self) -> bool {
        if self.chromatic_number() != 4 {
            return false;
        }
        self.edges()
            .iter()
            .all(|&(u, v)| self.delete_edge(u, v).k_colorable(3).is_some())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityReport {
    /// 0, 1, 2, or 3 meaning "3 or more".
    pub kappa: u8,
    pub witness: Option<Vec<usize>>,
}

impl ConnectivityReport {
    pub fn witness_set(&self) -> Option<&[usize]> {
        self.witness.as_deref()
    }
}

/// A proper coloring with an optional distinguished vertex that must be the
/// unique holder of its color.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColoringCertificate {
    pub assignment: Vec<u8>,
    pub special_vertex: Option<usize>,
}

impl ColoringCertificate {
    pub fn is_valid_for(&self, g: &SimpleGraph) -> bool {
        if self.assignment.len() != g.n() {
            return false;
        }
        for (u, v) in g.edges() {
            if self.assignment[u] == self.assignment[v] {
                return false;
            }
        }
        if let Some(s) = self.special_vertex {
            if s >= g.n() {
                return false;
            }
            let c = self.assignment[s];
            if self.assignment.iter().enumerate().any(|(u, &cu)| u != s && cu == c) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> SimpleGraph {
        SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn c5() -> SimpleGraph {
        SimpleGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn chromatic_basics() {
        assert_eq!(k4().chromatic_number(), 4);
        assert_eq!(c5().chromatic_number(), 3);
        // hub + pentagram C5 (the diagonal graph of W5)
        let g = SimpleGraph::from_edges(
            6,
            &[(5, 0), (5, 1), (5, 2), (5, 3), (5, 4), (0, 2), (2, 4), (4, 1), (1, 3), (3, 0)],
        )
        .unwrap();
        assert_eq!(g.chromatic_number(), 4);
    }

    #[test]
    fn chromatic_matches_exhaustive_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let n = rng.gen_range(1..=8usize);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = SimpleGraph::from_edges(n, &edges).unwrap();
            let chi = g.chromatic_number();
            // exhaustive check: chi is the least k admitting a proper coloring
            let mut brute = n as u32;
            'outer: for k in 1..=n as u32 {
                let mut assign = vec![0u32; n];
                loop {
                    let proper = edges.iter().all(|&(u, v)| assign[u] != assign[v]);
                    if proper {
                        brute = k;
                        break 'outer;
                    }
                    // increment base-k counter
                    let mut i = 0;
                    loop {
                        if i == n {
                            break;
                        }
                        assign[i] += 1;
                        if assign[i] < k {
                            break;
                        }
                        assign[i] = 0;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                }
            }
            assert_eq!(chi, brute, "n={n} edges={edges:?}");
        }
    }

    #[test]
    fn criticality() {
        let (crit, certs) = k4().is_vertex_4_critical();
        assert!(crit);
        assert_eq!(certs.len(), 4);
        for (v, c) in certs.iter().enumerate() {
            assert_eq!(c.special_vertex, Some(v));
            assert!(c.is_valid_for(&k4()));
            assert_eq!(c.assignment[v], 3);
        }
        assert!(k4().is_edge_4_critical());

        // K4 plus a pendant vertex: not vertex-4-critical
        let g = SimpleGraph::from_edges(
            5,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)],
        )
        .unwrap();
        assert!(!g.is_vertex_4_critical().0);

        // K4 + isolated vertex: edge-4-critical, not vertex-4-critical
        let g = SimpleGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        assert!(g.is_edge_4_critical());
        assert!(!g.is_vertex_4_critical().0);
    }

    #[test]
    fn connectivity_cases() {
        assert_eq!(k4().connectivity().kappa, 3);
        let path = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let rep = path.connectivity();
        assert_eq!(rep.kappa, 1);
        assert_eq!(rep.witness, Some(vec![1]));
        let two = SimpleGraph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(two.connectivity().kappa, 1);
        let disc = SimpleGraph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(disc.connectivity().kappa, 0);
    }

    #[test]
    fn size_cap() {
        assert!(SimpleGraph::from_edges(65, &[]).is_err());
    }
}
