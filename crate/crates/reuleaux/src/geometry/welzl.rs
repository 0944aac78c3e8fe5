//! Minimal enclosing ball of a finite point set (move-to-front Welzl).

use nalgebra::{Matrix3, Point3, Vector3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Point3<f64>,
    pub radius: f64,
}

impl Ball {
    fn empty() -> Self {
        Ball { center: Point3::origin(), radius: -1.0 }
    }

    fn contains(&self, p: &Point3<f64>, slack: f64) -> bool {
        self.radius >= 0.0 && (p - self.center).norm() <= self.radius + slack
    }
}

fn ball_1(a: &Point3<f64>) -> Ball {
    Ball { center: *a, radius: 0.0 }
}

fn ball_2(a: &Point3<f64>, b: &Point3<f64>) -> Ball {
    let center = Point3::from((a.coords + b.coords) / 2.0);
    Ball { center, radius: (a - center).norm() }
}

/// Circumscribed ball of a triangle: center in the triangle plane.
fn ball_3(a: &Point3<f64>, b: &Point3<f64>, c: &Point3<f64>) -> Option<Ball> {
    let ab = b - a;
    let ac = c - a;
    let n = ab.cross(&ac);
    let nn = n.norm_squared();
    if nn < 1e-20 {
        return None;
    }
    // center = a + (|ab|^2 (ac x n) + |ac|^2 (n x ab)) / (2 |n|^2)
    let d = (ac.cross(&n) * ab.norm_squared() + n.cross(&ab) * ac.norm_squared()) / (2.0 * nn);
    let center = a + d;
    Some(Ball { center, radius: (a - center).norm() })
}

/// Circumscribed ball of a tetrahedron.
fn ball_4(a: &Point3<f64>, b: &Point3<f64>, c: &Point3<f64>, d: &Point3<f64>) -> Option<Ball> {
    let m = Matrix3::from_rows(&[(b - a).transpose(), (c - a).transpose(), (d - a).transpose()]);
    let rhs = Vector3::new(
        (b - a).norm_squared() / 2.0,
        (c - a).norm_squared() / 2.0,
        (d - a).norm_squared() / 2.0,
    );
    let inv = m.try_inverse()?;
    let x = inv * rhs;
    let center = a + x;
    Some(Ball { center, radius: (a - center).norm() })
}

fn ball_from_support(support: &[Point3<f64>]) -> Ball {
    match support {
        [] => Ball::empty(),
        [a] => ball_1(a),
        [a, b] => ball_2(a, b),
        [a, b, c] => {
            // Degenerate triangles fall back to the widest pair.
            ball_3(a, b, c).unwrap_or_else(|| widest_pair_ball(&[*a, *b, *c]))
        }
        [a, b, c, d] => ball_4(a, b, c, d)
            .or_else(|| ball_3(a, b, c))
            .unwrap_or_else(|| widest_pair_ball(&[*a, *b, *c, *d])),
        _ => unreachable!("support set larger than 4"),
    }
}

fn widest_pair_ball(pts: &[Point3<f64>]) -> Ball {
    let mut best = ball_1(&pts[0]);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let b = ball_2(&pts[i], &pts[j]);
            if b.radius > best.radius {
                best = b;
            }
        }
    }
    best
}

const WELZL_SLACK: f64 = 1e-12;

fn welzl_mtf(pts: &mut [Point3<f64>], support: &mut Vec<Point3<f64>>) -> Ball {
    let mut ball = ball_from_support(support);
    if support.len() == 4 {
        return ball;
    }
    for i in 0..pts.len() {
        let p = pts[i];
        if !ball.contains(&p, WELZL_SLACK * (1.0 + ball.radius)) {
            support.push(p);
            ball = welzl_mtf(&mut pts[..i], support);
            support.pop();
            // Move-to-front keeps expected depth small and the result
            // deterministic for a fixed input order.
            pts[..=i].rotate_right(1);
        }
    }
    ball
}

/// Minimal enclosing ball. Deterministic for a fixed input order.
pub fn min_enclosing_ball(points: &[Point3<f64>]) -> Ball {
    if points.is_empty() {
        return Ball::empty();
    }
    let mut pts = points.to_vec();
    welzl_mtf(&mut pts, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_encloses(pts: &[Point3<f64>], b: &Ball) {
        for p in pts {
            assert!((p - b.center).norm() <= b.radius + 1e-9, "point outside ball");
        }
    }

    #[test]
    fn single_point() {
        let pts = [Point3::new(1.0, 2.0, 3.0)];
        let b = min_enclosing_ball(&pts);
        assert!(b.radius.abs() < 1e-12);
        assert_eq!(b.center, pts[0]);
    }

    #[test]
    fn segment() {
        let pts = [Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0)];
        let b = min_enclosing_ball(&pts);
        assert!((b.radius - 0.5).abs() < 1e-12);
        assert!((b.center - Point3::new(0.5, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn regular_tetrahedron() {
        let pts = crate::geometry::unit_tetrahedron_points();
        let b = min_enclosing_ball(&pts);
        assert!((b.radius - (3.0f64 / 8.0).sqrt()).abs() < 1e-10, "radius {}", b.radius);
        assert_encloses(&pts, &b);
    }

    #[test]
    fn interior_points_do_not_matter() {
        let mut pts = vec![
            Point3::new(-1.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 0.9, 0.0),
        ];
        for k in 0..20 {
            let t = k as f64 / 40.0;
            pts.push(Point3::new(t, t / 2.0, 0.1 * t));
        }
        let b = min_enclosing_ball(&pts);
        assert!((b.radius - 1.0).abs() < 1e-9);
        assert_encloses(&pts, &b);
    }
}
