//! Classification of a point set with respect to the Vazsonyi hierarchy:
//! extremal, critical, standard, Reuleaux, strongly critical.

use super::{ball, diameter_graph, essential_points, PointSet};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub e_count: usize,
    /// e(V) = 2n - 2.
    pub extremal: bool,
    /// Extremal and every point meets at least 3 diameters.
    pub critical: bool,
    /// 1-skeleton of B(V) is simple, 3-connected and planar.
    pub standard: bool,
    /// Standard and V = vert B(V).
    pub reuleaux: bool,
    /// Equivalent to `reuleaux` for extremal sets.
    pub strongly_critical: bool,
    /// Circumradius < 1 and every point essential.
    pub tight: bool,
    /// Vertex connectivity of the 1-skeleton, capped at 3; None when the
    /// skeleton is not a graph (closed-circle edges).
    pub skeleton_connectivity: Option<u8>,
    pub notes: Vec<String>,
}

/// Iteratively drop non-essential points (first non-essential by index each
/// round) until the remainder is tight. Returns indices into `ps`.
fn tight_core(ps: &PointSet) -> Result<Vec<usize>> {
    let mut keep: Vec<usize> = (0..ps.len()).collect();
    loop {
        if keep.len() < 2 {
            return Ok(keep);
        }
        let centers: Vec<nalgebra::Point3<f64>> = keep.iter().map(|&i| ps.point(i)).collect();
        let sub = SubSet { centers: &centers, tol: ps.tol() };
        match sub.first_non_essential() {
            None => return Ok(keep),
            Some(local) => {
                keep.remove(local);
            }
        }
    }
}

struct SubSet<'a> {
    centers: &'a [nalgebra::Point3<f64>],
    tol: f64,
}

impl SubSet<'_> {
    fn first_non_essential(&self) -> Option<usize> {
        // Mirrors essential_points but on raw centers at the parent scale.
        for v in 0..self.centers.len() {
            let rest: Vec<nalgebra::Point3<f64>> = (0..self.centers.len())
                .filter(|&i| i != v)
                .map(|i| self.centers[i])
                .collect();
            if rest.is_empty() {
                return None;
            }
            let vp = self.centers[v];
            let essential = super::farthest_point_candidates(&rest, &vp)
                .into_iter()
                .any(|x| {
                    rest.iter().all(|c| (x - c).norm() <= 1.0 + self.tol)
                        && (x - vp).norm() > 1.0 + self.tol
                });
            if !essential {
                return Some(v);
            }
        }
        None
    }
}

pub fn classify(ps: &PointSet) -> Result<ClassificationReport> {
    if ps.len() < 4 {
        return Err(Error::Precondition(format!(
            "classification needs at least 4 points, got {}",
            ps.len()
        )));
    }
    let n = ps.len();
    let dg = diameter_graph(ps);
    let e = dg.e_count();
    let extremal = e == 2 * n - 2;
    let critical = extremal && (0..n).all(|v| dg.degree(v) >= 3);
    let tight = essential_points(ps)?.len() == n;
    let mut notes = Vec::new();

    let core = tight_core(ps)?;
    let mut standard = false;
    let mut reuleaux = false;
    let mut skeleton_connectivity = None;
    if core.len() >= 2 {
        let centers: Vec<nalgebra::Point3<f64>> = core.iter().map(|&i| ps.point(i)).collect();
        match ball::ball_complex_of_centers(&centers, ps.tol()) {
            Ok(bc) => {
                notes.extend(bc.notes.iter().cloned());
                match ball::one_skeleton(&bc) {
                    Ok(sk) => {
                        if let Some(g) = &sk.graph {
                            let planar = g.is_planar_embedding();
                            let simple = sk.simple;
                            let three = if simple {
                                let rep = g.to_simple_graph()?.connectivity();
                                skeleton_connectivity = Some(rep.kappa);
                                rep.kappa >= 3
                            } else {
                                false
                            };
                            standard = simple && three && planar;
                            if standard && tight {
                                // V = vert B(V): every point a vertex, every
                                // vertex a point (of the full set).
                                reuleaux = bc.vertices.len() == n
                                    && bc.vertices.iter().all(|v| v.point_index.is_some());
                            }
                        } else {
                            notes.push("1-skeleton has closed-circle edges".into());
                        }
                    }
                    Err(err) => notes.push(format!("skeleton construction failed: {err}")),
                }
            }
            Err(err) => notes.push(format!("ball complex construction failed: {err}")),
        }
    }
    if core.len() != n {
        notes.push(format!("tight core keeps {}/{} points", core.len(), n));
    }
    Ok(ClassificationReport {
        n,
        e_count: e,
        extremal,
        critical,
        standard,
        reuleaux,
        strongly_critical: reuleaux,
        tight,
        skeleton_connectivity,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{unit_tetrahedron, unit_tetrahedron_points, PointSet, DEFAULT_TOL};
    use super::*;

    #[test]
    fn tetrahedron_all_flags() {
        let r = classify(&unit_tetrahedron()).unwrap();
        assert!(r.extremal && r.critical && r.standard && r.reuleaux && r.strongly_critical);
        assert!(r.tight);
        assert_eq!(r.skeleton_connectivity, Some(3));
    }

    #[test]
    fn generic_five_points_all_false() {
        // one long pair plus three points buried near the midpoint:
        // exactly 1 diameter, nothing tight or polytopal
        let ps = PointSet::from_coords(
            vec![
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.5, 0.0, 0.0],
                [0.5001, 0.0001, 0.0],
                [0.4999, 0.0, 0.0001],
            ],
            DEFAULT_TOL,
        )
        .unwrap();
        let r = classify(&ps).unwrap();
        assert_eq!(r.e_count, 1);
        assert!(!r.extremal && !r.critical && !r.standard && !r.reuleaux && !r.strongly_critical);
        assert!(!r.tight);
    }

    #[test]
    fn tetrahedron_plus_centroid() {
        let mut raw: Vec<[f64; 3]> =
            unit_tetrahedron_points().iter().map(|p| [p.x, p.y, p.z]).collect();
        let c = unit_tetrahedron_points()
            .iter()
            .fold(nalgebra::Vector3::zeros(), |a, p| a + p.coords)
            / 4.0;
        raw.push([c.x, c.y, c.z]);
        let ps = PointSet::from_coords(raw, DEFAULT_TOL).unwrap();
        let r = classify(&ps).unwrap();
        assert!(!r.tight);
        assert!(!r.reuleaux);
        // the tight core is the tetrahedron, whose skeleton is 3-connected
        assert_eq!(r.skeleton_connectivity, Some(3));
        assert!(r.notes.iter().any(|n| n.contains("tight core keeps 4/5")));
    }
}
