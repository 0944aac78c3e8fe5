//! File formats: point-set and graph JSON schemas, complex export, OFF
//! meshes, and float serialization with full round-trip precision.

use crate::error::{Error, Result};
use crate::generator::InvolutiveGraph;
use crate::geometry::{BallComplex, PointSet};
use crate::graph::{EmbeddedGraph, Involution};
use crate::realize::RealizationResult;
use serde::{Deserialize, Serialize};

/// Point-set schema: `{ "labels": [...], "points": [[x,y,z],...], "tol": t }`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PointSetJson {
    pub labels: Vec<String>,
    pub points: Vec<[f64; 3]>,
    pub tol: f64,
}

impl PointSetJson {
    pub fn from_point_set(ps: &PointSet) -> Self {
        let scale = ps.original_diameter();
        PointSetJson {
            labels: ps.labels().to_vec(),
            points: ps
                .points()
                .iter()
                .map(|p| [p.x * scale, p.y * scale, p.z * scale])
                .collect(),
            tol: ps.tol(),
        }
    }

    pub fn into_point_set(self) -> Result<PointSet> {
        PointSet::new(self.labels, self.points, self.tol)
    }

    pub fn into_point_set_with_tol(self, tol: Option<f64>) -> Result<PointSet> {
        PointSet::new(self.labels, self.points, tol.unwrap_or(self.tol))
    }
}

/// Graph schema: `{ "n": n, "rotation": [[neighbors...]], "tau": faces|null }`.
/// `tau[v]` lists the vertices of the dual face of v.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphJson {
    pub n: usize,
    pub rotation: Vec<Vec<usize>>,
    pub tau: Option<Vec<Vec<usize>>>,
}

impl GraphJson {
    pub fn from_embedded(g: &EmbeddedGraph) -> Self {
        GraphJson { n: g.n(), rotation: g.rotation_neighbors(), tau: None }
    }

    pub fn from_involutive(ig: &InvolutiveGraph) -> Self {
        let tau = (0..ig.n())
            .map(|v| ig.graph.faces()[ig.tau.map[v]].vertex_set())
            .collect();
        GraphJson { n: ig.n(), rotation: ig.graph.rotation_neighbors(), tau: Some(tau) }
    }

    pub fn into_embedded(self) -> Result<EmbeddedGraph> {
        if self.rotation.len() != self.n {
            return Err(Error::Schema(format!(
                "rotation lists {} vertices but n = {}",
                self.rotation.len(),
                self.n
            )));
        }
        EmbeddedGraph::from_rotation_neighbors(self.rotation)
    }

    pub fn into_involutive(self) -> Result<InvolutiveGraph> {
        let tau_sets = self
            .tau
            .clone()
            .ok_or_else(|| Error::Schema("graph file has no involution (tau is null)".into()))?;
        let g = self.into_embedded()?;
        if tau_sets.len() != g.n() {
            return Err(Error::Schema("tau length differs from the vertex count".into()));
        }
        let mut map = Vec::with_capacity(g.n());
        for (v, set) in tau_sets.iter().enumerate() {
            let mut want = set.clone();
            want.sort_unstable();
            want.dedup();
            let fi = g
                .faces()
                .iter()
                .position(|f| f.vertex_set() == want)
                .ok_or_else(|| {
                    Error::Schema(format!("tau[{v}] = {set:?} is not a face of the embedding"))
                })?;
            map.push(fi);
        }
        InvolutiveGraph::new(g, Involution { map }, vec!["loaded".into()])
    }
}

/// Realization result schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealizationJson {
    pub coordinates: Vec<[f64; 3]>,
    pub max_diagonal_residual: f64,
    pub max_nondiagonal_violation: f64,
    pub converged: bool,
    pub winning_restart: Option<usize>,
    pub objective: f64,
}

impl RealizationJson {
    pub fn from_result(r: &RealizationResult) -> Self {
        RealizationJson {
            coordinates: r.coordinates.iter().map(|p| [p.x, p.y, p.z]).collect(),
            max_diagonal_residual: r.max_diagonal_residual,
            max_nondiagonal_violation: r.max_nondiagonal_violation,
            converged: r.converged,
            winning_restart: r.winning_restart,
            objective: r.objective,
        }
    }
}

/// Ball-complex schema: facets, arc edges, vertices and their incidences.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexJson {
    pub labels: Vec<String>,
    pub vertices: Vec<ComplexVertexJson>,
    pub edges: Vec<ComplexEdgeJson>,
    pub facets: Vec<ComplexFacetJson>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexVertexJson {
    pub position: [f64; 3],
    pub support: Vec<String>,
    pub kind: String,
    pub point: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexEdgeJson {
    pub facets: [String; 2],
    pub endpoints: Option<[usize; 2]>,
    pub midpoint: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexFacetJson {
    pub center: String,
    pub boundary_edges: Vec<usize>,
    pub boundary_vertices: Vec<usize>,
}

impl ComplexJson {
    pub fn from_complex(bc: &BallComplex, labels: &[String]) -> Self {
        let l = |i: usize| labels[i].clone();
        ComplexJson {
            labels: labels.to_vec(),
            vertices: bc
                .vertices
                .iter()
                .map(|v| ComplexVertexJson {
                    position: [v.position.x, v.position.y, v.position.z],
                    support: v.support.iter().map(|&p| l(p)).collect(),
                    kind: match v.kind {
                        crate::geometry::VertexKind::Principal => "principal".into(),
                        crate::geometry::VertexKind::Dangling => "dangling".into(),
                    },
                    point: v.point_index.map(l),
                })
                .collect(),
            edges: bc
                .edges
                .iter()
                .map(|e| ComplexEdgeJson {
                    facets: [l(e.centers.0), l(e.centers.1)],
                    endpoints: e.endpoints.map(|(a, b)| [a, b]),
                    midpoint: [e.midpoint.x, e.midpoint.y, e.midpoint.z],
                })
                .collect(),
            facets: bc
                .facets
                .iter()
                .map(|f| ComplexFacetJson {
                    center: l(f.center),
                    boundary_edges: f.boundary_edges.clone(),
                    boundary_vertices: f.boundary_vertices.clone(),
                })
                .collect(),
            notes: bc.notes.clone(),
        }
    }
}

/// OFF mesh of the body: every facet is fan-triangulated from its spherical
/// centroid against the boundary arcs sampled at `step_deg` degrees.
pub fn complex_to_off(bc: &BallComplex, step_deg: f64) -> Result<String> {
    if step_deg <= 0.0 {
        return Err(Error::InvalidArgument("angular step must be positive".into()));
    }
    let step = step_deg.to_radians();
    let mut verts: Vec<[f64; 3]> = Vec::new();
    let mut tris: Vec<[usize; 3]> = Vec::new();
    for f in &bc.facets {
        let p = bc.centers[f.center];
        // boundary polyline in walk order
        let mut poly: Vec<nalgebra::Point3<f64>> = Vec::new();
        for (i, &e) in f.boundary_edges.iter().enumerate() {
            let edge = &bc.edges[e];
            let mut pts = edge.sample(step);
            // orient the arc along the walk
            if let Some((a, _)) = edge.endpoints {
                let start = f.boundary_vertices.get(i).copied();
                if start.is_some() && start != Some(a) {
                    pts.reverse();
                }
            }
            pts.pop();
            poly.extend(pts);
        }
        if poly.len() < 3 {
            continue;
        }
        let centroid = poly.iter().fold(nalgebra::Vector3::zeros(), |s, q| s + q.coords)
            / poly.len() as f64;
        let apex = p + (centroid - p.coords).normalize();
        let base = verts.len();
        verts.push([apex.x, apex.y, apex.z]);
        for q in &poly {
            verts.push([q.x, q.y, q.z]);
        }
        let m = poly.len();
        for i in 0..m {
            tris.push([base, base + 1 + i, base + 1 + (i + 1) % m]);
        }
    }
    let mut out = String::new();
    out.push_str("OFF\n");
    out.push_str(&format!("{} {} 0\n", verts.len(), tris.len()));
    for v in &verts {
        out.push_str(&format!("{:.9} {:.9} {:.9}\n", v[0], v[1], v[2]));
    }
    for t in &tris {
        out.push_str(&format!("3 {} {} {}\n", t[0], t[1], t[2]));
    }
    Ok(out)
}

struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        // 17 significant digits round-trip every finite f64
        write!(writer, "{:.16e}", value)
    }
}

/// Serialize with floats at 17 significant digits (exact f64 round-trip).
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("valid utf8"))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::odd_wheel;
    use crate::geometry::unit_tetrahedron;

    #[test]
    fn point_set_round_trips() {
        let ps = unit_tetrahedron();
        let json = PointSetJson::from_point_set(&ps);
        let text = to_json_string(&json).unwrap();
        let back: PointSetJson = serde_json::from_str(&text).unwrap();
        assert_eq!(json, back);
        let text2 = to_json_string(&back).unwrap();
        assert_eq!(text, text2);
    }

    #[test]
    fn graph_round_trips_with_involution() {
        let w5 = odd_wheel(5).unwrap();
        let json = GraphJson::from_involutive(&w5);
        let text = to_json_string(&json).unwrap();
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        let ig = back.into_involutive().unwrap();
        assert!(crate::graph::are_isomorphic(&ig.graph, &w5.graph));
    }

    #[test]
    fn corrupted_involution_is_rejected() {
        let w5 = odd_wheel(5).unwrap();
        let mut json = GraphJson::from_involutive(&w5);
        // swap two tau entries: bijection survives, the axioms do not
        let t = json.tau.as_mut().unwrap();
        t.swap(0, 1);
        assert!(json.into_involutive().is_err());
    }

    #[test]
    fn full_precision_floats() {
        #[derive(Serialize)]
        struct S {
            x: f64,
        }
        let v = std::f64::consts::PI / 17.0;
        let text = to_json_string(&S { x: v }).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["x"].as_f64().unwrap(), v);
    }

    #[test]
    fn off_export_tetrahedron() {
        let ps = unit_tetrahedron();
        let bc = crate::geometry::ball_complex(&ps).unwrap();
        let off = complex_to_off(&bc, 2.0).unwrap();
        assert!(off.starts_with("OFF\n"));
        let counts: Vec<usize> = off
            .lines()
            .nth(1)
            .unwrap()
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect();
        assert!(counts[0] > 100 && counts[1] > 100);
    }
}
