//! Facial structure of ball polyhedra: facets, circular-arc edges, principal
//! and dangling vertices, the induced 1-skeleton embedding and the canonical
//! vertex <-> facet involution of extremal configurations.

use super::{diameter_graph, sphere_triple_points, PointSet};
use crate::error::{Error, Result};
use crate::graph::EmbeddedGraph;
use nalgebra::{Point3, Vector3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Principal,
    Dangling,
}

#[derive(Debug, Clone)]
pub struct ComplexVertex {
    pub position: Point3<f64>,
    /// Point indices at unit distance, sorted.
    pub support: Vec<usize>,
    pub kind: VertexKind,
    /// Set when the vertex coincides with an input point.
    pub point_index: Option<usize>,
}

/// A maximal boundary arc on the circle S(p) cap S(q).
#[derive(Debug, Clone)]
pub struct ComplexEdge {
    /// Centers (p, q) with p < q.
    pub centers: (usize, usize),
    /// Endpoint vertex ids (at theta0 and theta1); `None` for a full-circle
    /// edge without vertices.
    pub endpoints: Option<(usize, usize)>,
    /// Circle frame: points at circle_center + r (cos t * u + sin t * v).
    pub circle_center: Point3<f64>,
    pub axis_u: Vector3<f64>,
    pub axis_v: Vector3<f64>,
    pub radius: f64,
    /// Arc angular range, theta0 < theta1.
    pub theta0: f64,
    pub theta1: f64,
    pub midpoint: Point3<f64>,
}

impl ComplexEdge {
    pub fn point_at(&self, theta: f64) -> Point3<f64> {
        self.circle_center + (self.axis_u * theta.cos() + self.axis_v * theta.sin()) * self.radius
    }

    pub fn arc_angle(&self) -> f64 {
        self.theta1 - self.theta0
    }

    /// Unit tangent in the direction of increasing theta.
    pub fn tangent_at(&self, theta: f64) -> Vector3<f64> {
        -self.axis_u * theta.sin() + self.axis_v * theta.cos()
    }

    /// Sample positions along the arc at roughly `step` radians.
    pub fn sample(&self, step: f64) -> Vec<Point3<f64>> {
        let span = self.arc_angle();
        let k = ((span / step).ceil() as usize).max(2);
        (0..=k)
            .map(|i| self.point_at(self.theta0 + span * i as f64 / k as f64))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Facet {
    /// Index of the generating point p of F_p.
    pub center: usize,
    /// Boundary edge ids, cyclic, oriented with the facet interior on the
    /// left as seen from outside the body.
    pub boundary_edges: Vec<usize>,
    /// boundary_vertices[i] is the vertex the walk leaves along boundary_edges[i].
    pub boundary_vertices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct BallComplex {
    /// Generating centers (normalized, unit-diameter coordinates).
    pub centers: Vec<Point3<f64>>,
    pub vertices: Vec<ComplexVertex>,
    pub edges: Vec<ComplexEdge>,
    pub facets: Vec<Facet>,
    /// Boundary oddities recorded instead of guessed (e.g. a point of V on a
    /// single facet interior).
    pub notes: Vec<String>,
    pub tol: f64,
}

impl BallComplex {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Every vertex is an input point and every input point is a vertex.
    pub fn vertices_are_exactly_the_points(&self, n_points: usize) -> bool {
        self.vertices.len() == n_points && self.vertices.iter().all(|v| v.point_index.is_some())
    }

    pub fn facet_of_center(&self, p: usize) -> Option<&Facet> {
        self.facets.iter().find(|f| f.center == p)
    }

    /// Membership in the body B(V) with the complex tolerance.
    pub fn contains(&self, x: &Point3<f64>) -> bool {
        in_ball(&self.centers, x, self.tol)
    }
}

fn in_ball(centers: &[Point3<f64>], x: &Point3<f64>, tol: f64) -> bool {
    centers.iter().all(|c| (x - c).norm() <= 1.0 + tol)
}

/// Facial structure of the ball polyhedron of a tight point set.
pub fn ball_complex(ps: &PointSet) -> Result<BallComplex> {
    if !super::is_tight(ps) {
        return Err(Error::Precondition(
            "ball_complex requires a tight point set (every point essential, circumradius < 1)"
                .into(),
        ));
    }
    ball_complex_of_centers(ps.points(), ps.tol())
}

/// Same construction on raw unit-ball centers (no tightness check, no
/// renormalization).
pub fn ball_complex_of_centers(centers: &[Point3<f64>], tol: f64) -> Result<BallComplex> {
    let n = centers.len();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least 2 centers".into()));
    }
    let mut notes = Vec::new();

    // --- vertices ---------------------------------------------------------
    let mut raw: Vec<Point3<f64>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for x in sphere_triple_points(&centers[i], &centers[j], &centers[k]) {
                    if in_ball(centers, &x, tol) {
                        raw.push(x);
                    }
                }
            }
        }
    }
    // Merge candidates closer than tol; four or more concurrent spheres
    // otherwise produce spurious near-duplicate vertices.
    let mut positions: Vec<Point3<f64>> = Vec::new();
    for x in raw {
        if !positions.iter().any(|p| (p - x).norm() < tol) {
            positions.push(x);
        }
    }
    let support_of = |x: &Point3<f64>| -> Vec<usize> {
        (0..n).filter(|&p| ((x - centers[p]).norm() - 1.0).abs() <= tol).collect()
    };
    let mut vertices: Vec<ComplexVertex> = Vec::new();
    for x in positions {
        let support = support_of(&x);
        if support.len() < 3 {
            notes.push(format!(
                "triple intersection near ({:.4},{:.4},{:.4}) supports only {} spheres; dropped",
                x.x,
                x.y,
                x.z,
                support.len()
            ));
            continue;
        }
        let point_index = (0..n).find(|&p| (centers[p] - x).norm() < tol);
        vertices.push(ComplexVertex {
            position: x,
            support,
            kind: VertexKind::Principal,
            point_index,
        });
    }
    // Dangling vertices: points of V on exactly two facets.
    for z in 0..n {
        if !in_ball(centers, &centers[z], tol) {
            continue;
        }
        let supp: Vec<usize> = (0..n)
            .filter(|&p| p != z && ((centers[z] - centers[p]).norm() - 1.0).abs() <= tol)
            .collect();
        match supp.len() {
            0 => {}
            1 => notes.push(format!(
                "point {z} lies at unit distance from exactly one center ({}) on a facet interior; treated as a non-vertex",
                supp[0]
            )),
            2 => {
                if vertices.iter().all(|v| (v.position - centers[z]).norm() >= tol) {
                    vertices.push(ComplexVertex {
                        position: centers[z],
                        support: supp,
                        kind: VertexKind::Dangling,
                        point_index: Some(z),
                    });
                }
            }
            _ => {
                // At >= 3 unit distances the point is itself a sphere-triple
                // intersection and is normally found above; cover filtered
                // near-degenerate triples.
                if vertices.iter().all(|v| (v.position - centers[z]).norm() >= tol) {
                    vertices.push(ComplexVertex {
                        position: centers[z],
                        support: supp,
                        kind: VertexKind::Principal,
                        point_index: Some(z),
                    });
                }
            }
        }
    }

    // --- edges ------------------------------------------------------------
    let mut edges: Vec<ComplexEdge> = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            let axis = centers[q] - centers[p];
            let d = axis.norm();
            if d < tol || d >= 2.0 - 1e-12 {
                continue;
            }
            let ez = axis / d;
            let rho2 = 1.0 - d * d / 4.0;
            if rho2 <= tol * tol {
                continue;
            }
            let rho = rho2.sqrt();
            let ccenter = Point3::from((centers[p].coords + centers[q].coords) / 2.0);
            let eu = super::orthonormal_to(&ez);
            let ev = ez.cross(&eu);
            let on_circle: Vec<usize> = (0..vertices.len())
                .filter(|&vi| {
                    let s = &vertices[vi].support;
                    s.contains(&p) && s.contains(&q)
                })
                .collect();
            let angle_of = |x: &Point3<f64>| -> f64 {
                let w = x - ccenter;
                w.dot(&ev).atan2(w.dot(&eu))
            };
            if on_circle.is_empty() {
                // candidate full-circle edge (e.g. a 2-point lens)
                let probe0 = ccenter + eu * rho;
                let probe1 = ccenter - eu * rho;
                if in_ball(centers, &probe0, tol) && in_ball(centers, &probe1, tol) {
                    edges.push(ComplexEdge {
                        centers: (p, q),
                        endpoints: None,
                        circle_center: ccenter,
                        axis_u: eu,
                        axis_v: ev,
                        radius: rho,
                        theta0: 0.0,
                        theta1: 2.0 * std::f64::consts::PI,
                        midpoint: probe1,
                    });
                }
                continue;
            }
            let mut angs: Vec<(f64, usize)> =
                on_circle.iter().map(|&vi| (angle_of(&vertices[vi].position), vi)).collect();
            angs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let k = angs.len();
            for t in 0..k {
                let (a0, v0) = angs[t];
                let (mut a1, v1) = angs[(t + 1) % k];
                if t + 1 == k {
                    a1 += 2.0 * std::f64::consts::PI;
                }
                let span = a1 - a0;
                if span <= 1e-9 {
                    continue;
                }
                let mid_theta = (a0 + a1) / 2.0;
                let mid = ccenter + (eu * mid_theta.cos() + ev * mid_theta.sin()) * rho;
                if in_ball(centers, &mid, tol) {
                    edges.push(ComplexEdge {
                        centers: (p, q),
                        endpoints: Some((v0, v1)),
                        circle_center: ccenter,
                        axis_u: eu,
                        axis_v: ev,
                        radius: rho,
                        theta0: a0,
                        theta1: a1,
                        midpoint: mid,
                    });
                }
            }
        }
    }
    // Duplicate arcs mean two center pairs share a circle (collinear,
    // equally spaced centers); refuse rather than build a broken complex.
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if (edges[i].midpoint - edges[j].midpoint).norm() < tol
                && edges[i].endpoints == edges[j].endpoints
            {
                return Err(Error::Degenerate(
                    "two sphere pairs generate the same boundary arc".into(),
                ));
            }
        }
    }

    // --- facets -----------------------------------------------------------
    let mut facets = Vec::new();
    for p in 0..n {
        let eids: Vec<usize> = (0..edges.len())
            .filter(|&e| edges[e].centers.0 == p || edges[e].centers.1 == p)
            .collect();
        if eids.is_empty() {
            return Err(Error::Degenerate(format!("facet {p} has no boundary arcs")));
        }
        facets.push(assemble_facet(p, &eids, &edges, centers)?);
    }

    Ok(BallComplex { centers: centers.to_vec(), vertices, edges, facets, notes, tol })
}

/// Order the boundary arcs of facet F_p into one oriented closed walk.
fn assemble_facet(
    p: usize,
    eids: &[usize],
    edges: &[ComplexEdge],
    centers: &[Point3<f64>],
) -> Result<Facet> {
    if eids.len() == 1 && edges[eids[0]].endpoints.is_none() {
        return Ok(Facet { center: p, boundary_edges: vec![eids[0]], boundary_vertices: vec![] });
    }
    if eids.iter().any(|&e| edges[e].endpoints.is_none()) {
        return Err(Error::Degenerate(format!("facet {p} mixes closed-circle and bounded arcs")));
    }
    let mut at_vertex: std::collections::HashMap<usize, Vec<usize>> = Default::default();
    for &e in eids {
        let (a, b) = edges[e].endpoints.unwrap();
        at_vertex.entry(a).or_default().push(e);
        at_vertex.entry(b).or_default().push(e);
    }
    for (v, es) in &at_vertex {
        if es.len() != 2 {
            return Err(Error::Degenerate(format!(
                "facet {p}: vertex {v} meets {} facet arcs (expected 2)",
                es.len()
            )));
        }
    }
    let start = eids[0];
    let mut walk_edges = vec![start];
    let (sa, sb) = edges[start].endpoints.unwrap();
    let mut walk_verts = vec![sa, sb];
    while walk_edges.len() < eids.len() {
        let cur_v = *walk_verts.last().unwrap();
        let prev_e = *walk_edges.last().unwrap();
        let es = &at_vertex[&cur_v];
        let next_e = if es[0] == prev_e { es[1] } else { es[0] };
        let (a, b) = edges[next_e].endpoints.unwrap();
        let next_v = if a == cur_v { b } else { a };
        walk_edges.push(next_e);
        walk_verts.push(next_v);
    }
    if walk_verts.last() != walk_verts.first() {
        return Err(Error::Degenerate(format!(
            "facet {p}: boundary arcs do not close into one cycle"
        )));
    }
    walk_verts.pop();
    // Orient so the facet interior lies left of the walk, seen from outside.
    let e0 = walk_edges[0];
    let edge = &edges[e0];
    let mid_theta = (edge.theta0 + edge.theta1) / 2.0;
    let m = edge.point_at(mid_theta);
    let (a, _b) = edge.endpoints.unwrap();
    let mut t = edge.tangent_at(mid_theta);
    if walk_verts[0] != a {
        t = -t;
    }
    let q = edge.centers.0 + edge.centers.1 - p;
    let n_out = (m - centers[p]).normalize();
    let w = centers[q] - m;
    let into_facet = w - n_out * w.dot(&n_out);
    if n_out.cross(&t).dot(&into_facet) < 0.0 {
        walk_edges.reverse();
        walk_verts.reverse();
        walk_verts.rotate_right(1);
    }
    Ok(Facet { center: p, boundary_edges: walk_edges, boundary_vertices: walk_verts })
}

/// 1-skeleton of the complex with the rotation system induced by the facet
/// structure: incident arcs ordered by tangent angle around the outward
/// vertex axis.
#[derive(Debug, Clone)]
pub struct Skeleton {
    /// Endpoint vertex ids per complex edge; closed-circle edges have none.
    pub edge_endpoints: Vec<Option<(usize, usize)>>,
    pub simple: bool,
    /// The embedded multigraph; `None` when closed-circle or loop arcs make
    /// the skeleton unusable as a graph.
    pub graph: Option<EmbeddedGraph>,
}

pub fn one_skeleton(bc: &BallComplex) -> Result<Skeleton> {
    let edge_endpoints: Vec<Option<(usize, usize)>> =
        bc.edges.iter().map(|e| e.endpoints).collect();
    let has_closed = edge_endpoints.iter().any(|e| e.is_none());
    let has_loop = edge_endpoints.iter().any(|e| matches!(e, Some((a, b)) if a == b));
    let mut pairs: Vec<(usize, usize)> = edge_endpoints
        .iter()
        .flatten()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    pairs.sort_unstable();
    let parallel = pairs.windows(2).any(|w| w[0] == w[1]);
    let simple = !has_closed && !has_loop && !parallel;
    if has_closed || has_loop {
        return Ok(Skeleton { edge_endpoints, simple: false, graph: None });
    }
    let nv = bc.vertices.len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (eid, e) in bc.edges.iter().enumerate() {
        let (a, b) = e.endpoints.unwrap();
        incident[a].push(eid);
        incident[b].push(eid);
    }
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for v in 0..nv {
        let x = bc.vertices[v].position;
        let mut axis = Vector3::zeros();
        for &p in &bc.vertices[v].support {
            axis += x - bc.centers[p];
        }
        if axis.norm() < 1e-12 {
            return Err(Error::Degenerate(format!("vertex {v}: outward axis vanishes")));
        }
        let axis = axis.normalize();
        let u1 = super::orthonormal_to(&axis);
        let u2 = axis.cross(&u1);
        let mut keyed: Vec<(f64, usize)> = incident[v]
            .iter()
            .map(|&eid| {
                let e = &bc.edges[eid];
                let (a, _b) = e.endpoints.unwrap();
                let (theta, sign) = if a == v { (e.theta0, 1.0) } else { (e.theta1, -1.0) };
                let t = e.tangent_at(theta) * sign;
                let proj = t - axis * t.dot(&axis);
                (proj.dot(&u2).atan2(proj.dot(&u1)), eid)
            })
            .collect();
        keyed.sort_by(|l, r| l.0.partial_cmp(&r.0).unwrap());
        rotation[v] = keyed.into_iter().map(|(_, e)| e).collect();
    }
    let edges: Vec<(usize, usize)> = edge_endpoints.iter().map(|e| e.unwrap()).collect();
    let graph = EmbeddedGraph::new(edges, rotation)?;
    if graph.faces().len() != bc.facets.len() {
        return Err(Error::Degenerate(format!(
            "skeleton embedding traces {} faces but the complex has {} facets",
            graph.faces().len(),
            bc.facets.len()
        )));
    }
    Ok(Skeleton { edge_endpoints, simple, graph: Some(graph) })
}

/// The canonical involution of an extremal configuration: point v maps to
/// the facet F_v it generates, with the induced dual-edge pairing.
#[derive(Debug, Clone)]
pub struct CanonicalInvolution {
    /// vertex id -> facet index.
    pub vertex_to_facet: Vec<usize>,
    /// edge id -> dual edge id.
    pub edge_map: Vec<usize>,
}

pub fn canonical_involution(ps: &PointSet, bc: &BallComplex) -> Result<CanonicalInvolution> {
    let n = ps.len();
    let dg = diameter_graph(ps);
    if dg.e_count() != 2 * n - 2 {
        return Err(Error::Precondition(format!(
            "canonical involution requires an extremal configuration (e = 2n-2 = {}, got {})",
            2 * n - 2,
            dg.e_count()
        )));
    }
    if !bc.vertices_are_exactly_the_points(n) {
        return Err(Error::Precondition("canonical involution requires V = vert B(V)".into()));
    }
    let mut vertex_to_facet = vec![usize::MAX; bc.vertices.len()];
    for (vid, v) in bc.vertices.iter().enumerate() {
        let p = v.point_index.expect("checked above");
        let fi = bc
            .facets
            .iter()
            .position(|f| f.center == p)
            .ok_or_else(|| Error::InternalConsistency(format!("no facet centered at {p}")))?;
        vertex_to_facet[vid] = fi;
    }
    for vid in 0..bc.vertices.len() {
        if bc.facets[vertex_to_facet[vid]].boundary_vertices.contains(&vid) {
            return Err(Error::InternalConsistency(format!(
                "axiom 1 fails: vertex {vid} lies on its own facet"
            )));
        }
    }
    for a in 0..bc.vertices.len() {
        for b in 0..bc.vertices.len() {
            let a_in_fb = bc.facets[vertex_to_facet[b]].boundary_vertices.contains(&a);
            let b_in_fa = bc.facets[vertex_to_facet[a]].boundary_vertices.contains(&b);
            if a_in_fb != b_in_fa {
                return Err(Error::InternalConsistency(format!(
                    "axiom 2 fails between vertices {a} and {b}"
                )));
            }
        }
    }
    // Dual pairing: the arc with endpoints {a,b} on circle S(p) cap S(q)
    // pairs with the arc with endpoints {p,q} on circle S(a) cap S(b).
    let point_of = |vid: usize| bc.vertices[vid].point_index.unwrap();
    let mut edge_map = vec![usize::MAX; bc.edges.len()];
    for (eid, e) in bc.edges.iter().enumerate() {
        let Some((va, vb)) = e.endpoints else {
            return Err(Error::InternalConsistency("extremal complex with a closed edge".into()));
        };
        let (pa, pb) = (point_of(va), point_of(vb));
        let want_centers = (pa.min(pb), pa.max(pb));
        let want_pts = {
            let mut w = [e.centers.0, e.centers.1];
            w.sort_unstable();
            w
        };
        let dual = bc.edges.iter().position(|f| {
            f.centers == want_centers
                && f.endpoints.is_some_and(|(x, y)| {
                    let mut got = [point_of(x), point_of(y)];
                    got.sort_unstable();
                    got == want_pts
                })
        });
        edge_map[eid] =
            dual.ok_or_else(|| Error::InternalConsistency(format!("edge {eid} has no dual arc")))?;
    }
    for (eid, &d) in edge_map.iter().enumerate() {
        if edge_map[d] != eid {
            return Err(Error::InternalConsistency(format!(
                "edge pairing is not an involution at edge {eid}"
            )));
        }
    }
    Ok(CanonicalInvolution { vertex_to_facet, edge_map })
}
