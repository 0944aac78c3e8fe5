//! Metric computations on finite point sets in R^3 and the facial structure
//! of their ball polyhedra.
//!
//! All predicates run on a normalized copy of the input whose diameter is
//! exactly 1; scalar results are reported in the caller's original units.

mod ball;
mod classify;
mod welzl;

pub use ball::{
    ball_complex, ball_complex_of_centers, canonical_involution, one_skeleton, Skeleton,
    BallComplex, CanonicalInvolution, ComplexEdge, ComplexVertex, Facet, VertexKind,
};
pub use classify::{classify, ClassificationReport};
pub use welzl::{min_enclosing_ball, Ball};

use crate::error::{Error, Result};
use nalgebra::Point3;

/// Default relative tolerance for exactly-constructed inputs.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A labeled finite point set, rescaled internally so its diameter is 1.
#[derive(Debug, Clone)]
pub struct PointSet {
    labels: Vec<String>,
    points: Vec<Point3<f64>>,
    tol: f64,
    original_diameter: f64,
}

impl PointSet {
    pub fn new(labels: Vec<String>, raw: Vec<[f64; 3]>, tol: f64) -> Result<Self> {
        if labels.len() != raw.len() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} points",
                labels.len(),
                raw.len()
            )));
        }
        if raw.len() < 2 {
            return Err(Error::InvalidArgument("need at least 2 points".into()));
        }
        if !(0.0..1.0).contains(&tol) {
            return Err(Error::InvalidArgument(format!("tolerance {tol} out of range")));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(Error::InvalidArgument("labels must be distinct".into()));
        }
        if raw.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        let pts: Vec<Point3<f64>> = raw.iter().map(|c| Point3::new(c[0], c[1], c[2])).collect();
        let mut diam: f64 = 0.0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                diam = diam.max((pts[i] - pts[j]).norm());
            }
        }
        if diam <= 0.0 {
            return Err(Error::Degenerate("all points coincide; diameter is zero".into()));
        }
        let points = pts.iter().map(|p| Point3::from(p.coords / diam)).collect();
        Ok(PointSet { labels, points, tol, original_diameter: diam })
    }

    /// Points labeled `p0`, `p1`, ... in input order.
    pub fn from_coords(raw: Vec<[f64; 3]>, tol: f64) -> Result<Self> {
        let labels = (0..raw.len()).map(|i| format!("p{i}")).collect();
        Self::new(labels, raw, tol)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Diameter of the input in its original units (the normalization scale).
    pub fn original_diameter(&self) -> f64 {
        self.original_diameter
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Normalized (unit-diameter) coordinates.
    pub fn point(&self, i: usize) -> Point3<f64> {
        self.points[i]
    }

    pub fn points(&self) -> &[Point3<f64>] {
        &self.points
    }

    /// Restriction to a subset of indices, renormalized.
    pub fn restrict(&self, keep: &[usize]) -> Result<PointSet> {
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let raw = keep
            .iter()
            .map(|&i| {
                let p = self.points[i].coords * self.original_diameter;
                [p.x, p.y, p.z]
            })
            .collect();
        PointSet::new(labels, raw, self.tol)
    }

    pub(crate) fn dist(&self, i: usize, j: usize) -> f64 {
        (self.points[i] - self.points[j]).norm()
    }
}

/// Diameter graph of a point set: an edge per pair realizing the diameter
/// (within the set's relative tolerance).
#[derive(Debug, Clone)]
pub struct DiameterGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl DiameterGraph {
    pub fn e_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn to_simple_graph(&self) -> Result<crate::graph::SimpleGraph> {
        crate::graph::SimpleGraph::from_edges(self.n, &self.edges)
    }
}

/// Maximum pairwise distance (in original units) together with every pair
/// realizing it within tolerance.
pub fn diameter(ps: &PointSet) -> (f64, Vec<(usize, usize)>) {
    let mut pairs = Vec::new();
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            // Normalized diameter is 1 by construction.
            if (ps.dist(i, j) - 1.0).abs() <= ps.tol {
                pairs.push((i, j));
            }
        }
    }
    (ps.original_diameter, pairs)
}

pub fn diameter_graph(ps: &PointSet) -> DiameterGraph {
    let (_, edges) = diameter(ps);
    DiameterGraph { n: ps.len(), edges }
}

/// Circumball in original units.
#[derive(Debug, Clone, Copy)]
pub struct Circumball {
    pub center: Point3<f64>,
    pub radius: f64,
}

pub fn circumball(ps: &PointSet) -> Circumball {
    let b = min_enclosing_ball(ps.points());
    Circumball {
        center: Point3::from(b.center.coords * ps.original_diameter),
        radius: b.radius * ps.original_diameter,
    }
}

/// Circumradius in normalized (unit-diameter) units.
pub fn circumradius_normalized(ps: &PointSet) -> f64 {
    min_enclosing_ball(ps.points()).radius
}

/// Membership in the ball set B(W) of the given centers: within 1 of all.
fn in_ball_of(centers: &[Point3<f64>], x: &Point3<f64>, tol: f64) -> bool {
    centers.iter().all(|c| (x - c).norm() <= 1.0 + tol)
}

/// Intersection points of three unit spheres centered at `a`, `b`, `c`.
pub(crate) fn sphere_triple_points(
    a: &Point3<f64>,
    b: &Point3<f64>,
    c: &Point3<f64>,
) -> Vec<Point3<f64>> {
    let ex = b - a;
    let d = ex.norm();
    if d < 1e-12 || d >= 2.0 {
        return Vec::new();
    }
    let ex = ex / d;
    let i = ex.dot(&(c - a));
    let tmp = (c - a) - ex * i;
    let j = tmp.norm();
    if j < 1e-12 {
        return Vec::new(); // collinear centers: no isolated triple points
    }
    let ey = tmp / j;
    let ez = ex.cross(&ey);
    let x = d / 2.0;
    let y = (i * i + j * j - 2.0 * i * x) / (2.0 * j);
    let z2 = 1.0 - x * x - y * y;
    if z2 < -1e-12 {
        return Vec::new();
    }
    let base = a + ex * x + ey * y;
    if z2 <= 1e-18 {
        vec![base]
    } else {
        let z = z2.sqrt();
        vec![base + ez * z, base - ez * z]
    }
}

/// Candidate farthest points of the ball polyhedron of `centers` from `v`:
/// per-facet antipodes, per-edge-circle extrema and sphere-triple vertices.
/// The farthest point of B(W) from v is attained at one of these.
pub(crate) fn farthest_point_candidates(
    centers: &[Point3<f64>],
    v: &Point3<f64>,
) -> Vec<Point3<f64>> {
    let mut cands = Vec::new();
    // Facet antipodes: on sphere S(p), distance from v is maximized at
    // p + (p - v)/|p - v|.
    for p in centers {
        let d = p - v;
        let n = d.norm();
        if n > 1e-12 {
            cands.push(p + d / n);
        }
    }
    // Circle extrema: on the circle S(p) cap S(q), the distance from v is
    // extremal where the radial direction aligns with v's in-plane offset.
    for (i, p) in centers.iter().enumerate() {
        for q in centers.iter().skip(i + 1) {
            let axis = q - p;
            let d = axis.norm();
            if d < 1e-12 || d >= 2.0 {
                continue;
            }
            let axis = axis / d;
            let center = Point3::from((p.coords + q.coords) / 2.0);
            let rho2 = 1.0 - d * d / 4.0;
            if rho2 <= 0.0 {
                continue;
            }
            let rho = rho2.sqrt();
            let off = (center - v) - axis * (center - v).dot(&axis);
            let n = off.norm();
            if n > 1e-12 {
                let u = off / n;
                cands.push(center + u * rho);
                cands.push(center - u * rho);
            } else {
                // v on the circle axis: every circle point is equidistant.
                let u = orthonormal_to(&axis);
                cands.push(center + u * rho);
            }
        }
    }
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            for k in j + 1..centers.len() {
                cands.extend(sphere_triple_points(&centers[i], &centers[j], &centers[k]));
            }
        }
    }
    cands
}

/// Exposed for the boundary-sampling oracle in the integration tests.
pub fn sphere_triple_points_for_tests(
    a: &Point3<f64>,
    b: &Point3<f64>,
    c: &Point3<f64>,
) -> Vec<Point3<f64>> {
    sphere_triple_points(a, b, c)
}

pub(crate) fn orthonormal_to(v: &nalgebra::Vector3<f64>) -> nalgebra::Vector3<f64> {
    let probe = if v.x.abs() < 0.9 {
        nalgebra::Vector3::x()
    } else {
        nalgebra::Vector3::y()
    };
    v.cross(&probe).normalize()
}

/// Labels whose removal strictly enlarges the ball polyhedron, decided by a
/// witness point of B(V \ {v}) at distance > 1 from v.
pub fn essential_points(ps: &PointSet) -> Result<Vec<usize>> {
    let cir = circumradius_normalized(ps);
    if cir >= 1.0 {
        return Err(Error::Precondition(format!(
            "circumradius {cir} >= 1: B(V) is not a ball polyhedron"
        )));
    }
    let tol = ps.tol;
    let mut essential = Vec::new();
    for v in 0..ps.len() {
        let rest: Vec<Point3<f64>> =
            (0..ps.len()).filter(|&i| i != v).map(|i| ps.point(i)).collect();
        let vp = ps.point(v);
        let witness = farthest_point_candidates(&rest, &vp)
            .into_iter()
            .any(|x| in_ball_of(&rest, &x, tol) && (x - vp).norm() > 1.0 + tol);
        if witness {
            essential.push(v);
        }
    }
    Ok(essential)
}

/// True iff the circumradius is below 1 and every point is essential.
pub fn is_tight(ps: &PointSet) -> bool {
    if circumradius_normalized(ps) >= 1.0 {
        return false;
    }
    match essential_points(ps) {
        Ok(ess) => ess.len() == ps.len(),
        Err(_) => false,
    }
}

/// Unit regular tetrahedron (edge length 1).
pub fn unit_tetrahedron_points() -> Vec<Point3<f64>> {
    let s3 = 3.0f64.sqrt();
    vec![
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(0.5, s3 / 2.0, 0.0),
        Point3::new(0.5, s3 / 6.0, (2.0f64 / 3.0).sqrt()),
    ]
}

/// The tetrahedron as a labeled point set.
pub fn unit_tetrahedron() -> PointSet {
    let raw = unit_tetrahedron_points().iter().map(|p| [p.x, p.y, p.z]).collect();
    PointSet::new(
        ["t0", "t1", "t2", "t3"].iter().map(|s| s.to_string()).collect(),
        raw,
        DEFAULT_TOL,
    )
    .expect("tetrahedron is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn vazsonyi8() -> PointSet {
        let tau = 2.0 * std::f64::consts::PI / 3.0;
        let raw = vec![
            [0.0, 0.0, 2.0f64.sqrt()],
            [1.0, 0.0, 0.0],
            [tau.cos(), tau.sin(), 0.0],
            [(2.0 * tau).cos(), (2.0 * tau).sin(), 0.0],
            [-0.72849, 0.0, -0.11106],
            [-0.68087, 0.0, -0.1784],
            [0.7095, -0.03157, 0.85524],
            [0.7095, 0.03157, 0.85524],
        ];
        let labels = ["x", "y", "w", "z", "a", "b", "c", "d"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        PointSet::new(labels, raw, 5e-3).unwrap()
    }

    fn pairs_by_label(ps: &PointSet, pairs: &[(usize, usize)]) -> Vec<String> {
        let mut v: Vec<String> = pairs
            .iter()
            .map(|&(i, j)| {
                let mut l = [ps.label(i), ps.label(j)];
                l.sort();
                format!("{}{}", l[0], l[1])
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn tetrahedron_diameter() {
        let ps = unit_tetrahedron();
        let (d, pairs) = diameter(&ps);
        assert!((d - 1.0).abs() < 1e-12);
        assert_eq!(pairs.len(), 6);
    }

    #[test]
    fn two_points() {
        let ps = PointSet::from_coords(vec![[0.0, 0.0, 0.0], [0.0, 0.0, 2.0]], DEFAULT_TOL).unwrap();
        let (d, pairs) = diameter(&ps);
        assert!((d - 2.0).abs() < 1e-12);
        assert_eq!(pairs, vec![(0, 1)]);
    }

    #[test]
    fn too_few_points_is_an_error() {
        assert!(PointSet::from_coords(vec![[0.0, 0.0, 0.0]], DEFAULT_TOL).is_err());
        assert!(PointSet::from_coords(vec![], DEFAULT_TOL).is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let r = PointSet::new(
            vec!["a".into(), "a".into()],
            vec![[0.0; 3], [1.0, 0.0, 0.0]],
            DEFAULT_TOL,
        );
        assert!(r.is_err());
    }

    #[test]
    fn vazsonyi8_has_14_diameters() {
        let ps = vazsonyi8();
        let (d, pairs) = diameter(&ps);
        assert!((d - 3.0f64.sqrt()).abs() / 3.0f64.sqrt() < 5e-3);
        let got = pairs_by_label(&ps, &pairs);
        let mut expected: Vec<String> = [
            "wx", "wy", "wz", "xy", "xz", "yz", // tetrahedron on w,x,y,z
            "ac", "bc", "bd", "ad", // 4-cycle a-c-b-d
            "cw", "dz", "ay", "bx",
        ]
        .iter()
        .map(|s| {
            let mut c: Vec<char> = s.chars().collect();
            c.sort();
            c.into_iter().collect()
        })
        .collect();
        expected.sort();
        assert_eq!(got, expected);
        assert_eq!(diameter_graph(&ps).e_count(), 14);
    }

    #[test]
    fn collinear_three_points() {
        let ps = PointSet::from_coords(
            vec![[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [1.0, 0.0, 0.0]],
            DEFAULT_TOL,
        )
        .unwrap();
        let g = diameter_graph(&ps);
        assert_eq!(g.edges, vec![(0, 2)]);
    }

    #[test]
    fn circumball_tetrahedron_and_segment() {
        let ps = unit_tetrahedron();
        let b = circumball(&ps);
        assert!((b.radius - (3.0f64 / 8.0).sqrt()).abs() < 1e-10);

        let seg =
            PointSet::from_coords(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]], DEFAULT_TOL).unwrap();
        let b = circumball(&seg);
        assert!((b.radius - 0.5).abs() < 1e-12);
        assert!((b.center - Point3::new(0.5, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn jung_bound_on_random_sets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(2..9);
            let raw: Vec<[f64; 3]> =
                (0..n).map(|_| [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()]).collect();
            let Ok(ps) = PointSet::from_coords(raw, DEFAULT_TOL) else { continue };
            let b = circumball(&ps);
            assert!(b.radius <= ps.original_diameter() * (3.0f64 / 8.0).sqrt() + 1e-9);
            for i in 0..ps.len() {
                let orig = Point3::from(ps.point(i).coords * ps.original_diameter());
                assert!((orig - b.center).norm() <= b.radius + 1e-9);
            }
        }
    }

    #[test]
    fn tetrahedron_is_tight_all_essential() {
        let ps = unit_tetrahedron();
        assert_eq!(essential_points(&ps).unwrap(), vec![0, 1, 2, 3]);
        assert!(is_tight(&ps));
    }

    #[test]
    fn centroid_is_not_essential() {
        let mut raw: Vec<[f64; 3]> =
            unit_tetrahedron_points().iter().map(|p| [p.x, p.y, p.z]).collect();
        let c = unit_tetrahedron_points().iter().fold(Point3::origin(), |acc, p| acc + p.coords)
            / 4.0;
        raw.push([c.x, c.y, c.z]);
        let ps = PointSet::from_coords(raw, DEFAULT_TOL).unwrap();
        assert_eq!(essential_points(&ps).unwrap(), vec![0, 1, 2, 3]);
        assert!(!is_tight(&ps));
    }

    #[test]
    fn vazsonyi8_is_tight() {
        let ps = vazsonyi8();
        assert_eq!(essential_points(&ps).unwrap().len(), 8);
        assert!(is_tight(&ps));
    }

    /// Monte-Carlo membership oracle for essentiality: v is essential iff a
    /// sampled direction finds a point of B(V\{v}) farther than 1 from v.
    #[test]
    fn essential_agrees_with_sampling_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut tested = 0;
        while tested < 8 {
            let n = rng.gen_range(3..6);
            let raw: Vec<[f64; 3]> = (0..n)
                .map(|_| [rng.gen::<f64>() * 0.8, rng.gen::<f64>() * 0.8, rng.gen::<f64>() * 0.8])
                .collect();
            let Ok(ps) = PointSet::from_coords(raw, 1e-7) else { continue };
            if circumradius_normalized(&ps) >= 1.0 {
                continue;
            }
            tested += 1;
            let ess = essential_points(&ps).unwrap();
            for v in 0..ps.len() {
                let rest: Vec<Point3<f64>> =
                    (0..ps.len()).filter(|&i| i != v).map(|i| ps.point(i)).collect();
                let vp = ps.point(v);
                let mut found = false;
                for _ in 0..20000 {
                    let dir = nalgebra::Vector3::new(
                        rng.gen::<f64>() - 0.5,
                        rng.gen::<f64>() - 0.5,
                        rng.gen::<f64>() - 0.5,
                    )
                    .normalize();
                    // walk as far as B(rest) allows along dir from its center
                    let c = min_enclosing_ball(&rest).center;
                    let mut tmax = f64::INFINITY;
                    for p in &rest {
                        // |c + t dir - p| = 1
                        let w = c - p;
                        let b = w.dot(&dir);
                        let disc = b * b - (w.norm_squared() - 1.0);
                        if disc >= 0.0 {
                            tmax = tmax.min(-b + disc.sqrt());
                        }
                    }
                    if tmax.is_finite() && tmax > 0.0 {
                        let x = c + dir * tmax;
                        if in_ball_of(&rest, &x, 1e-9) && (x - vp).norm() > 1.0 + 1e-7 {
                            found = true;
                            break;
                        }
                    }
                }
                assert_eq!(
                    ess.contains(&v),
                    found,
                    "essentiality mismatch for vertex {v} of {:?}",
                    ps.points()
                );
            }
        }
    }
}
