//! Borsuk numbers of finite sets, strongly critical subset extraction, and
//! the critical partition of a Reuleaux polyhedron as a point classifier.

use crate::error::{Error, Result};
use crate::geometry::{
    ball_complex, canonical_involution, classify, diameter_graph, min_enclosing_ball, BallComplex,
    CanonicalInvolution, PointSet,
};
use crate::graph::ColoringCertificate;
use nalgebra::{Point3, Vector3};
use rayon::prelude::*;
use serde::Serialize;

/// Borsuk number of a finite set with a realizing partition.
#[derive(Debug, Clone, Serialize)]
pub struct BorsukReport {
    /// a(V) = chi(Diam_V).
    pub a: u32,
    /// Color classes (labels); every class has diameter < 1 after
    /// normalization.
    pub partition: Vec<Vec<String>>,
    /// Normalized diameter of each class.
    pub class_diameters: Vec<f64>,
    /// Point labels of the strongly critical subset when a = 4.
    pub critical_subset: Option<Vec<String>>,
}

pub fn borsuk_number(ps: &PointSet) -> Result<BorsukReport> {
    let sg = diameter_graph(ps).to_simple_graph()?;
    let a = sg.chromatic_number();
    let colors = sg
        .k_colorable(a)
        .ok_or_else(|| Error::InternalConsistency("chromatic number not realizable".into()))?;
    let mut partition: Vec<Vec<String>> = vec![Vec::new(); a as usize];
    let mut class_members: Vec<Vec<usize>> = vec![Vec::new(); a as usize];
    for (i, &c) in colors.iter().enumerate() {
        partition[c as usize].push(ps.label(i).to_string());
        class_members[c as usize].push(i);
    }
    let mut class_diameters = Vec::with_capacity(a as usize);
    for members in &class_members {
        let mut d: f64 = 0.0;
        for (i, &u) in members.iter().enumerate() {
            for &w in members.iter().skip(i + 1) {
                d = d.max((ps.point(u) - ps.point(w)).norm());
            }
        }
        if d >= 1.0 - ps.tol() {
            return Err(Error::InternalConsistency(format!(
                "coloring class has diameter {d}, not strictly below the set diameter"
            )));
        }
        class_diameters.push(d);
    }
    let critical_subset = if a == 4 {
        strongly_critical_subset(ps)?
            .map(|idx| idx.iter().map(|&i| ps.label(i).to_string()).collect())
    } else {
        None
    };
    Ok(BorsukReport { a, partition, class_diameters, critical_subset })
}

/// The strongly critical subset: delete vertices while the diameter graph
/// stays 4-chromatic; the survivors induce a vertex-4-critical subgraph whose
/// ball polyhedron must be a Reuleaux polyhedron. None when chi < 4.
pub fn strongly_critical_subset(ps: &PointSet) -> Result<Option<Vec<usize>>> {
    let order: Vec<usize> = (0..ps.len()).collect();
    strongly_critical_subset_with_order(ps, &order)
}

/// Same extraction with an explicit deletion order (the result is
/// order-independent on extremal inputs).
pub fn strongly_critical_subset_with_order(
    ps: &PointSet,
    order: &[usize],
) -> Result<Option<Vec<usize>>> {
    let sg = diameter_graph(ps).to_simple_graph()?;
    if sg.chromatic_number() != 4 {
        return Ok(None);
    }
    let mut keep: Vec<usize> = (0..ps.len()).collect();
    for &v in order {
        if keep.len() <= 4 {
            break;
        }
        let candidate: Vec<usize> = keep.iter().copied().filter(|&u| u != v).collect();
        if sg.induced(&candidate).chromatic_number() == 4 {
            keep = candidate;
        }
    }
    // survivors induce a vertex-4-critical diameter graph
    let core = sg.induced(&keep);
    let (crit, _) = core.is_vertex_4_critical();
    if !crit {
        return Err(Error::InternalConsistency(
            "greedy deletion did not reach a vertex-4-critical subgraph".into(),
        ));
    }
    let sub = ps.restrict(&keep)?;
    let report = classify(&sub)?;
    if !report.reuleaux {
        return Err(Error::InternalConsistency(
            "4-critical subset whose ball polyhedron is not Reuleaux; this contradicts the \
             finite characterization and indicates a tolerance failure"
                .into(),
        ));
    }
    Ok(Some(keep))
}

/// Proper 4-coloring of the diameter graph with `v` the unique vertex of
/// color 3. Requires a Reuleaux vertex set.
pub fn critical_coloring(ps: &PointSet, v: usize) -> Result<ColoringCertificate> {
    if v >= ps.len() {
        return Err(Error::InvalidArgument(format!("vertex index {v} out of range")));
    }
    let report = classify(ps)?;
    if !report.reuleaux {
        return Err(Error::Precondition(
            "critical coloring requires the vertex set of a Reuleaux polyhedron".into(),
        ));
    }
    let sg = diameter_graph(ps).to_simple_graph()?;
    let keep: Vec<usize> = (0..ps.len()).filter(|&u| u != v).collect();
    let sub = sg.induced(&keep);
    let sub_colors = sub.k_colorable(3).ok_or_else(|| {
        Error::InternalConsistency("diameter graph minus a vertex is not 3-colorable".into())
    })?;
    let mut assignment = vec![0u8; ps.len()];
    for (j, &u) in keep.iter().enumerate() {
        assignment[u] = sub_colors[j];
    }
    assignment[v] = 3;
    let cert = ColoringCertificate { assignment, special_vertex: Some(v) };
    if !cert.is_valid_for(&sg) {
        return Err(Error::InternalConsistency("critical coloring is not proper".into()));
    }
    Ok(cert)
}

/// A wedge along a complex edge e: the region of the body between the two
/// planes spanned by e's endpoints and each endpoint of the dual edge.
#[derive(Debug, Clone)]
pub struct Wedge {
    pub edge: usize,
    /// Vertex ids of the generating edge.
    pub endpoints: (usize, usize),
    pub dual_edge: usize,
    /// Inward-oriented planes: x inside iff n . x >= o - tol.
    planes: [(Vector3<f64>, f64); 2],
}

/// Wedges of every edge of a Reuleaux body's complex.
pub fn wedges(bc: &BallComplex, inv: &CanonicalInvolution) -> Result<Vec<Wedge>> {
    let mut out = Vec::with_capacity(bc.edges.len());
    for (eid, e) in bc.edges.iter().enumerate() {
        let (va, vb) = e
            .endpoints
            .ok_or_else(|| Error::InvalidArgument("wedge of a closed-circle edge".into()))?;
        let de = inv.edge_map[eid];
        let (vc, vd) = bc.edges[de].endpoints.unwrap();
        let a = bc.vertices[va].position;
        let b = bc.vertices[vb].position;
        let c = bc.vertices[vc].position;
        let d = bc.vertices[vd].position;
        let mid = e.midpoint;
        let mut planes = [(Vector3::zeros(), 0.0); 2];
        for (slot, third) in [(0usize, c), (1usize, d)] {
            let n = (b - a).cross(&(third - a));
            let nn = n.norm();
            if nn < 1e-12 {
                return Err(Error::Degenerate(format!(
                    "wedge plane of edge {eid} is degenerate"
                )));
            }
            let mut n = n / nn;
            let mut o = n.dot(&a.coords);
            if n.dot(&mid.coords) < o {
                n = -n;
                o = -o;
            }
            planes[slot] = (n, o);
        }
        out.push(Wedge { edge: eid, endpoints: (va, vb), dual_edge: de, planes });
    }
    Ok(out)
}

/// Half-space sign tests plus body membership.
pub fn wedge_membership(bc: &BallComplex, w: &Wedge, x: &Point3<f64>) -> bool {
    let tol = bc.tol;
    w.planes.iter().all(|&(n, o)| n.dot(&x.coords) >= o - tol) && bc.contains(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionRule {
    #[serde(rename = "ball-P1")]
    BallP1,
    Vertex,
    Wedge,
    Facet,
    Closure,
    Interior,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssignedPoint {
    pub part: u8,
    pub rule: PartitionRule,
    /// Set when a wedge tie was broken by label order.
    pub tied: bool,
}

/// The critical partition P_{eps,v} of a Reuleaux body evaluated on query
/// points.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionAssignment {
    pub vertex: String,
    pub eps: f64,
    pub eps1: f64,
    pub assignments: Vec<AssignedPoint>,
}

/// Precomputed machinery for classifying points of a Reuleaux body into the
/// four parts of the critical partition around a distinguished vertex.
pub struct PartitionBody {
    bc: BallComplex,
    wedges: Vec<Wedge>,
    /// part (1..=4) per complex vertex, part 1 only for the base vertex
    vertex_part: Vec<u8>,
    labels: Vec<String>,
    base: usize,
    base_pos: Point3<f64>,
    eps1: f64,
    circumcenter: Point3<f64>,
    /// (position, part, edge id) along every arc, step 0.5 degrees
    arc_samples: Vec<(Point3<f64>, u8, usize)>,
    /// boundary cloud for nearest-boundary fallbacks; part-1 cap excluded
    boundary_cloud: Vec<(Point3<f64>, u8)>,
}

const ARC_STEP_RAD: f64 = 0.5 * std::f64::consts::PI / 180.0;

impl PartitionBody {
    pub fn new(ps: &PointSet, v_label: &str, eps: f64) -> Result<Self> {
        if eps <= 0.0 {
            return Err(Error::InvalidArgument("eps must be positive".into()));
        }
        let report = classify(ps)?;
        if !report.reuleaux {
            return Err(Error::Precondition(
                "critical partition requires a Reuleaux polyhedron".into(),
            ));
        }
        let v = ps
            .index_of(v_label)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown label {v_label}")))?;
        let bc = ball_complex(ps)?;
        let inv = canonical_involution(ps, &bc)?;
        let wedges = wedges(&bc, &inv)?;
        let cert = critical_coloring(ps, v)?;
        // colors {0,1,2} -> parts {2,3,4}; the unique color 3 -> part 1
        let point_part =
            |p: usize| -> u8 { if cert.assignment[p] == 3 { 1 } else { cert.assignment[p] + 2 } };
        let vertex_part: Vec<u8> = bc
            .vertices
            .iter()
            .map(|cv| point_part(cv.point_index.expect("Reuleaux: every vertex is a point")))
            .collect();
        let base = bc
            .vertices
            .iter()
            .position(|cv| cv.point_index == Some(v))
            .expect("base vertex present");
        let base_pos = bc.vertices[base].position;
        let r = bc
            .vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != base)
            .map(|(_, cv)| (cv.position - base_pos).norm())
            .fold(f64::INFINITY, f64::min);
        let eps1 = (r / 2.0).min(eps / 2.0);
        let circumcenter = min_enclosing_ball(&bc.centers.iter().copied().collect::<Vec<_>>()).center;

        // arc samples with their wedge-rule parts
        let mut arc_samples = Vec::new();
        let labels: Vec<String> = ps.labels().to_vec();
        for (eid, e) in bc.edges.iter().enumerate() {
            let (a, b) = e.endpoints.unwrap();
            for pos in e.sample(ARC_STEP_RAD) {
                let part = wedge_endpoint_rule(
                    base,
                    (a, b),
                    &pos,
                    &bc,
                    &vertex_part,
                    &labels,
                )
                .0;
                arc_samples.push((pos, part, eid));
            }
        }
        let mut body = PartitionBody {
            bc,
            wedges,
            vertex_part,
            labels,
            base,
            base_pos,
            eps1,
            circumcenter,
            arc_samples,
            boundary_cloud: Vec::new(),
        };
        body.boundary_cloud = body.build_boundary_cloud();
        Ok(body)
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn complex(&self) -> &BallComplex {
        &self.bc
    }

    pub fn circumcenter(&self) -> Point3<f64> {
        self.circumcenter
    }

    /// Boundary points with parts, used by the nearest-boundary fallback.
    /// The part-1 cap around the base vertex is excluded so the fallback
    /// always lands in parts 2-4.
    fn build_boundary_cloud(&self) -> Vec<(Point3<f64>, u8)> {
        let mut cloud: Vec<(Point3<f64>, u8)> = self
            .arc_samples
            .iter()
            .map(|&(p, part, _)| (p, part))
            .collect();
        // spherical Fibonacci samples per facet
        let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
        let m = 400;
        for f in &self.bc.facets {
            let c = self.bc.centers[f.center];
            for i in 0..m {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / m as f64;
                let rr = (1.0 - z * z).sqrt();
                let th = golden * i as f64;
                let dir = Vector3::new(rr * th.cos(), rr * th.sin(), z);
                let x = c + dir;
                if self.bc.contains(&x) {
                    if let Some((part, _)) = self.boundary_part(&x) {
                        cloud.push((x, part));
                    }
                }
            }
        }
        cloud
            .into_iter()
            .filter(|&(p, part)| part != 1 && (p - self.base_pos).norm() > self.eps1)
            .collect()
    }

    /// Part of a boundary point via vertex snap, wedge rule, then nearest
    /// arc sample. None for the base vertex itself.
    fn boundary_part(&self, x: &Point3<f64>) -> Option<(u8, PartitionRule)> {
        for (vid, cv) in self.bc.vertices.iter().enumerate() {
            if (cv.position - x).norm() <= self.bc.tol {
                if vid == self.base {
                    return None;
                }
                return Some((self.vertex_part[vid], PartitionRule::Vertex));
            }
        }
        for w in &self.wedges {
            if wedge_membership(&self.bc, w, x) {
                let (part, _) = wedge_endpoint_rule(
                    self.base,
                    w.endpoints,
                    x,
                    &self.bc,
                    &self.vertex_part,
                    &self.labels,
                );
                return Some((part, PartitionRule::Wedge));
            }
        }
        self.nearest_arc_part(x).map(|p| (p, PartitionRule::Facet))
    }

    fn nearest_arc_part(&self, x: &Point3<f64>) -> Option<u8> {
        self.arc_samples
            .iter()
            .min_by(|a, b| {
                (a.0 - x).norm().partial_cmp(&(b.0 - x).norm()).unwrap()
            })
            .map(|&(_, part, _)| part)
    }

    fn nearest_boundary_part(&self, x: &Point3<f64>) -> u8 {
        self.boundary_cloud
            .iter()
            .min_by(|a, b| (a.0 - x).norm().partial_cmp(&(b.0 - x).norm()).unwrap())
            .map(|&(_, part)| part)
            .expect("boundary cloud is nonempty")
    }

    /// Classify one query point; errors when the point is outside the body.
    pub fn assign(&self, x: &Point3<f64>) -> Result<AssignedPoint> {
        if !self.bc.contains(x) {
            return Err(Error::InvalidArgument(format!(
                "query point ({}, {}, {}) lies outside the body",
                x.x, x.y, x.z
            )));
        }
        let tol = self.bc.tol;
        // (0) the open ball around the distinguished vertex
        if (x - self.base_pos).norm() < self.eps1 {
            return Ok(AssignedPoint { part: 1, rule: PartitionRule::BallP1, tied: false });
        }
        // vertices carry their own colors
        for (vid, cv) in self.bc.vertices.iter().enumerate() {
            if (cv.position - x).norm() <= tol {
                return Ok(AssignedPoint {
                    part: self.vertex_part[vid],
                    rule: PartitionRule::Vertex,
                    tied: false,
                });
            }
        }
        // (1) wedges, in edge order
        for w in &self.wedges {
            if wedge_membership(&self.bc, w, x) {
                let (part, tied) = wedge_endpoint_rule(
                    self.base,
                    w.endpoints,
                    x,
                    &self.bc,
                    &self.vertex_part,
                    &self.labels,
                );
                return Ok(AssignedPoint { part, rule: PartitionRule::Wedge, tied });
            }
        }
        // (2) on the boundary, not in any wedge: nearest sampled wedge point
        let boundary_band = (10.0 * tol).max(1e-7);
        let on_boundary = self
            .bc
            .centers
            .iter()
            .any(|c| ((x - c).norm() - 1.0).abs() <= boundary_band);
        if on_boundary {
            let part = self
                .nearest_arc_part(x)
                .ok_or_else(|| Error::InternalConsistency("no arc samples".into()))?;
            return Ok(AssignedPoint { part, rule: PartitionRule::Facet, tied: false });
        }
        // (3) the shell of the part-1 ball, interior of the body
        if (x - self.base_pos).norm() <= self.eps1 + boundary_band {
            let part = self.nearest_boundary_part(x);
            return Ok(AssignedPoint { part, rule: PartitionRule::Closure, tied: false });
        }
        // (4) interior: ray from the circumcenter through x
        let dir = x - self.circumcenter;
        if dir.norm() < 1e-12 {
            // the ray rule is undefined at its apex; fall back to the
            // nearest boundary point and record it
            let part = self.nearest_boundary_part(x);
            return Ok(AssignedPoint { part, rule: PartitionRule::Closure, tied: false });
        }
        let dir = dir.normalize();
        let mut tmax = f64::INFINITY;
        for c in &self.bc.centers {
            let w = self.circumcenter - c;
            let b = w.dot(&dir);
            let disc = b * b - (w.norm_squared() - 1.0);
            if disc >= 0.0 {
                tmax = tmax.min(-b + disc.sqrt());
            }
        }
        if !tmax.is_finite() {
            return Err(Error::InternalConsistency("boundary ray never exits the body".into()));
        }
        let hit = self.circumcenter + dir * tmax;
        if (hit - self.base_pos).norm() <= self.eps1 {
            // the ray exits through the part-1 cap; use the nearest
            // non-part-1 boundary point instead
            let part = self.nearest_boundary_part(x);
            return Ok(AssignedPoint { part, rule: PartitionRule::Closure, tied: false });
        }
        let part = self
            .boundary_part(&hit)
            .map(|(p, _)| p)
            .unwrap_or_else(|| self.nearest_boundary_part(&hit));
        Ok(AssignedPoint { part, rule: PartitionRule::Interior, tied: false })
    }
}

/// Step-1 endpoint rule of the partition: edges at the distinguished vertex
/// send the whole wedge to the other endpoint's part; other wedges split by
/// proximity, ties broken by label order.
fn wedge_endpoint_rule(
    base: usize,
    (a, b): (usize, usize),
    x: &Point3<f64>,
    bc: &BallComplex,
    vertex_part: &[u8],
    labels: &[String],
) -> (u8, bool) {
    if a == base {
        return (vertex_part[b], false);
    }
    if b == base {
        return (vertex_part[a], false);
    }
    let da = (bc.vertices[a].position - x).norm();
    let db = (bc.vertices[b].position - x).norm();
    if (da - db).abs() <= 1e-12 {
        let la = bc.vertices[a].point_index.map(|i| labels[i].as_str()).unwrap_or("");
        let lb = bc.vertices[b].point_index.map(|i| labels[i].as_str()).unwrap_or("");
        let pick = if la <= lb { a } else { b };
        (vertex_part[pick], true)
    } else if da < db {
        (vertex_part[a], false)
    } else {
        (vertex_part[b], false)
    }
}

/// Classify a batch of query points of the Reuleaux body of `ps` into the
/// critical partition around `v_label`.
pub fn critical_partition(
    ps: &PointSet,
    v_label: &str,
    eps: f64,
    queries: &[Point3<f64>],
) -> Result<PartitionAssignment> {
    let body = PartitionBody::new(ps, v_label, eps)?;
    let assignments: Result<Vec<AssignedPoint>> =
        queries.par_iter().map(|x| body.assign(x)).collect();
    Ok(PartitionAssignment {
        vertex: v_label.to_string(),
        eps,
        eps1: body.eps1,
        assignments: assignments?,
    })
}

/// Deterministic body points: boundary hits of Fibonacci-sphere rays from
/// the circumcenter plus scaled interior copies.
pub fn sample_body_points(bc: &BallComplex, count: usize, interior_fraction: f64) -> Vec<Point3<f64>> {
    let c = min_enclosing_ball(&bc.centers).center;
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    let mut out = Vec::with_capacity(count);
    let mut i = 0usize;
    while out.len() < count {
        let k = i as f64;
        i += 1;
        let z = 1.0 - 2.0 * ((k + 0.5) / count.max(1) as f64).fract();
        let rr = (1.0 - z * z).max(0.0).sqrt();
        let th = golden * k;
        let dir = Vector3::new(rr * th.cos(), rr * th.sin(), z).normalize();
        let mut tmax = f64::INFINITY;
        for p in &bc.centers {
            let w = c - p;
            let b = w.dot(&dir);
            let disc = b * b - (w.norm_squared() - 1.0);
            if disc >= 0.0 {
                tmax = tmax.min(-b + disc.sqrt());
            }
        }
        if !tmax.is_finite() || tmax <= 0.0 {
            continue;
        }
        let interior = (i % 100) as f64 / 100.0 < interior_fraction;
        let t = if interior {
            // deterministic pseudo-radius biased toward the boundary
            tmax * (0.15 + 0.8 * ((k * 0.6180339887).fract()))
        } else {
            tmax * (1.0 - 1e-9)
        };
        let x = c + dir * t;
        if bc.contains(&x) {
            out.push(x);
        }
    }
    out
}
