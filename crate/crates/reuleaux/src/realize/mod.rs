//! Best-effort numerical realization of an involutive graph as the vertex
//! set of a Reuleaux polyhedron: diagonal pairs are driven to unit distance,
//! all other pairs strictly below it.

use crate::error::{Error, Result};
use crate::generator::{InvolutiveGraph, MAX_N};
use crate::geometry::{ball_complex, classify, one_skeleton, PointSet};
use crate::graph::are_isomorphic;
use nalgebra::{DMatrix, Point3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RealizationProblem {
    pub n: usize,
    /// Pairs required at distance exactly 1.
    pub diagonal_pairs: Vec<(usize, usize)>,
    /// All remaining pairs, required below 1 - delta.
    pub other_pairs: Vec<(usize, usize)>,
    pub delta: f64,
}

impl RealizationProblem {
    pub fn from_graph(ig: &InvolutiveGraph, delta: f64) -> Result<Self> {
        let n = ig.n();
        if n > MAX_N {
            return Err(Error::ResourceLimit(format!("realization capped at {MAX_N} vertices")));
        }
        let diag = ig.diagonal()?;
        let mut diagonal_pairs = Vec::new();
        let mut other_pairs = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if diag.adjacent(a, b) {
                    diagonal_pairs.push((a, b));
                } else {
                    other_pairs.push((a, b));
                }
            }
        }
        Ok(RealizationProblem { n, diagonal_pairs, other_pairs, delta })
    }

    /// Penalty objective: squared unit-distance residuals on diagonals plus
    /// squared hinge overshoot of 1 - delta on the rest.
    pub fn objective(&self, x: &[Vector3<f64>]) -> f64 {
        let mut f = 0.0;
        for &(a, b) in &self.diagonal_pairs {
            let d = (x[a] - x[b]).norm();
            f += (d - 1.0) * (d - 1.0);
        }
        let cap = 1.0 - self.delta;
        for &(a, b) in &self.other_pairs {
            let d = (x[a] - x[b]).norm();
            let v = (d - cap).max(0.0);
            f += v * v;
        }
        f
    }

    pub fn gradient(&self, x: &[Vector3<f64>]) -> Vec<Vector3<f64>> {
        let mut g = vec![Vector3::zeros(); self.n];
        for &(a, b) in &self.diagonal_pairs {
            let w = x[a] - x[b];
            let d = w.norm();
            if d < 1e-12 {
                continue;
            }
            let c = 2.0 * (d - 1.0) / d;
            g[a] += w * c;
            g[b] -= w * c;
        }
        let cap = 1.0 - self.delta;
        for &(a, b) in &self.other_pairs {
            let w = x[a] - x[b];
            let d = w.norm();
            if d <= cap || d < 1e-12 {
                continue;
            }
            let c = 2.0 * (d - cap) / d;
            g[a] += w * c;
            g[b] -= w * c;
        }
        g
    }

    pub fn max_diagonal_residual(&self, x: &[Vector3<f64>]) -> f64 {
        self.diagonal_pairs
            .iter()
            .map(|&(a, b)| ((x[a] - x[b]).norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_nondiagonal_violation(&self, x: &[Vector3<f64>]) -> f64 {
        let cap = 1.0 - self.delta;
        self.other_pairs
            .iter()
            .map(|&(a, b)| ((x[a] - x[b]).norm() - cap).max(0.0))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct RealizeOptions {
    pub restarts: usize,
    pub max_iters: usize,
    /// Convergence threshold on the max diagonal residual.
    pub tol: f64,
    /// Non-diagonal slack below the unit distance.
    pub delta: f64,
    pub seed: u64,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions { restarts: 32, max_iters: 60_000, tol: 1e-10, delta: 1e-3, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct RealizationResult {
    pub coordinates: Vec<Point3<f64>>,
    pub max_diagonal_residual: f64,
    pub max_nondiagonal_violation: f64,
    pub converged: bool,
    /// Restart index that produced the result.
    pub winning_restart: Option<usize>,
    pub objective: f64,
}

/// Pin vertex 0 at the origin, vertex 1 on the +x axis, vertex 2 in the
/// xy-plane; removes the rigid-motion null space.
fn to_gauge(x: &mut [Vector3<f64>]) {
    let o = x[0];
    for v in x.iter_mut() {
        *v -= o;
    }
    if x.len() < 2 {
        return;
    }
    // rotate x1 onto +x
    let a = x[1];
    let an = a.norm();
    if an > 1e-12 {
        let target = Vector3::x() * an;
        if let Some(rot) = nalgebra::Rotation3::rotation_between(&a, &target) {
            for v in x.iter_mut() {
                *v = rot * *v;
            }
        }
    }
    if x.len() < 3 {
        return;
    }
    // rotate about x to put x2 in the xy-plane with positive y
    let b = x[2];
    let r = (b.y * b.y + b.z * b.z).sqrt();
    if r > 1e-12 {
        let (c, s) = (b.y / r, b.z / r);
        for v in x.iter_mut() {
            let (y, z) = (v.y, v.z);
            v.y = c * y + s * z;
            v.z = -s * y + c * z;
        }
    }
}

fn project_gauge_gradient(g: &mut [Vector3<f64>]) {
    if !g.is_empty() {
        g[0] = Vector3::zeros();
    }
    if g.len() > 1 {
        g[1].y = 0.0;
        g[1].z = 0.0;
    }
    if g.len() > 2 {
        g[2].z = 0.0;
    }
}

/// Classical multidimensional scaling seed: embed the target metric
/// (1 on diagonal pairs, a sub-unit default elsewhere) through the top three
/// eigenvectors of its double-centered Gram matrix.
fn mds_seed(problem: &RealizationProblem) -> Vec<Vector3<f64>> {
    let n = problem.n;
    let mut d2 = DMatrix::<f64>::from_element(n, n, 0.49);
    for i in 0..n {
        d2[(i, i)] = 0.0;
    }
    for &(a, b) in &problem.diagonal_pairs {
        d2[(a, b)] = 1.0;
        d2[(b, a)] = 1.0;
    }
    let j = DMatrix::<f64>::identity(n, n) - DMatrix::<f64>::from_element(n, n, 1.0 / n as f64);
    let b = -0.5 * (&j * d2 * &j);
    let eig = b.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &k| eig.eigenvalues[k].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let mut x = vec![Vector3::zeros(); n];
    for (k, &col) in idx.iter().take(3).enumerate() {
        let lam = eig.eigenvalues[col].max(0.0).sqrt();
        for v in 0..n {
            x[v][k] = eig.eigenvectors[(v, col)] * lam;
        }
    }
    x
}

/// Spectral seed from the diagonal-graph Laplacian: the three Fiedler-like
/// eigenvectors as coordinates.
fn spectral_seed(problem: &RealizationProblem) -> Vec<Vector3<f64>> {
    let n = problem.n;
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for &(a, b) in &problem.diagonal_pairs {
        lap[(a, b)] -= 1.0;
        lap[(b, a)] -= 1.0;
        lap[(a, a)] += 1.0;
        lap[(b, b)] += 1.0;
    }
    let eig = lap.symmetric_eigen();
    // indices sorted by eigenvalue, skipping the constant mode
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let pick: Vec<usize> = idx.into_iter().skip(1).take(3).collect();
    let mut x = vec![Vector3::zeros(); n];
    for (k, &col) in pick.iter().enumerate() {
        for v in 0..n {
            x[v][k] = eig.eigenvectors[(v, col)];
        }
    }
    // scale to a plausible size
    let scale = x.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-9);
    for v in &mut x {
        *v *= 0.6 / scale;
    }
    x
}

fn random_seed(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vector3<f64>> {
    // random points in a ball of radius 0.7
    (0..n)
        .map(|_| loop {
            let v = Vector3::new(
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
            ) * 0.7;
            if v.norm() <= 0.7 {
                break v;
            }
        })
        .collect()
}

/// Levenberg-Marquardt polish of a near-solution: Gauss-Newton on the
/// diagonal residuals and the active non-diagonal hinges.
fn polish(problem: &RealizationProblem, x: &mut Vec<Vector3<f64>>, tol: f64) {
    let n = problem.n;
    let dim = 3 * n;
    let cap = 1.0 - problem.delta;
    let mut lambda = 1e-8;
    for _ in 0..80 {
        let mut rows: Vec<(usize, usize, f64)> = Vec::new();
        for &(a, b) in &problem.diagonal_pairs {
            let d = (x[a] - x[b]).norm();
            rows.push((a, b, d - 1.0));
        }
        for &(a, b) in &problem.other_pairs {
            let d = (x[a] - x[b]).norm();
            if d > cap {
                rows.push((a, b, d - cap));
            }
        }
        let worst = rows.iter().map(|r| r.2.abs()).fold(0.0, f64::max);
        if worst <= tol * 0.1 {
            return;
        }
        let m = rows.len();
        let mut jac = DMatrix::<f64>::zeros(m, dim);
        let mut res = nalgebra::DVector::<f64>::zeros(m);
        for (i, &(a, b, r)) in rows.iter().enumerate() {
            let w = x[a] - x[b];
            let d = w.norm().max(1e-12);
            let u = w / d;
            for k in 0..3 {
                jac[(i, 3 * a + k)] = u[k];
                jac[(i, 3 * b + k)] = -u[k];
            }
            res[i] = r;
        }
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &res;
        let f0: f64 = res.iter().map(|r| r * r).sum();
        let mut improved = false;
        for _ in 0..12 {
            let damped = &jtj + DMatrix::<f64>::identity(dim, dim) * lambda;
            let Some(chol) = damped.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let delta = chol.solve(&(-&jtr));
            let cand: Vec<Vector3<f64>> = (0..n)
                .map(|v| x[v] + Vector3::new(delta[3 * v], delta[3 * v + 1], delta[3 * v + 2]))
                .collect();
            let f1 = problem.objective(&cand);
            if f1 < f0 {
                *x = cand;
                lambda = (lambda / 3.0).max(1e-14);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            return;
        }
    }
}

/// Projected gradient descent with Barzilai-Borwein steps and an Armijo
/// fallback.
fn minimize(problem: &RealizationProblem, x0: Vec<Vector3<f64>>, opts: &RealizeOptions) -> (Vec<Vector3<f64>>, f64) {
    let mut x = x0;
    to_gauge(&mut x);
    let mut f = problem.objective(&x);
    let mut g = problem.gradient(&x);
    project_gauge_gradient(&mut g);
    let mut prev_x: Option<Vec<Vector3<f64>>> = None;
    let mut prev_g: Option<Vec<Vector3<f64>>> = None;
    let mut step = 1e-2;
    for _ in 0..opts.max_iters {
        let gnorm2: f64 = g.iter().map(|v| v.norm_squared()).sum();
        if gnorm2 < 1e-26 || f < opts.tol * opts.tol * 1e-2 {
            break;
        }
        if let (Some(px), Some(pg)) = (&prev_x, &prev_g) {
            let mut sy = 0.0;
            let mut ss = 0.0;
            for i in 0..x.len() {
                let s = x[i] - px[i];
                let yv = g[i] - pg[i];
                sy += s.dot(&yv);
                ss += s.norm_squared();
            }
            if sy > 1e-18 {
                step = (ss / sy).clamp(1e-9, 1e3);
            }
        }
        // Armijo backtracking from the BB step; near the floor of f64
        // granularity a plain decrease is accepted instead.
        let mut t = step;
        let mut accepted = false;
        let mut fallback: Option<(Vec<Vector3<f64>>, f64)> = None;
        for _ in 0..40 {
            let cand: Vec<Vector3<f64>> =
                x.iter().zip(&g).map(|(xi, gi)| xi - gi * t).collect();
            let fc = problem.objective(&cand);
            if fc <= f - 1e-4 * t * gnorm2 {
                prev_x = Some(std::mem::take(&mut x));
                prev_g = Some(std::mem::replace(&mut g, problem.gradient(&cand)));
                project_gauge_gradient(&mut g);
                x = cand;
                f = fc;
                accepted = true;
                break;
            }
            if fc < f && fallback.as_ref().is_none_or(|(_, bf)| fc < *bf) {
                fallback = Some((cand, fc));
            }
            t *= 0.5;
        }
        if !accepted {
            match fallback {
                Some((cand, fc)) => {
                    prev_x = Some(std::mem::take(&mut x));
                    prev_g = Some(std::mem::replace(&mut g, problem.gradient(&cand)));
                    project_gauge_gradient(&mut g);
                    x = cand;
                    f = fc;
                }
                None => break,
            }
        }
    }
    (x, f)
}

/// Minimize the penalty objective from a spectral seed plus random restarts.
/// The first converged restart (by index) wins; otherwise the best residual
/// is reported with `converged = false`. A failure is a solver outcome, not
/// evidence about realizability.
pub fn realize(ig: &InvolutiveGraph, opts: &RealizeOptions) -> Result<RealizationResult> {
    let problem = RealizationProblem::from_graph(ig, opts.delta)?;
    let n = problem.n;
    let is_converged = |x: &[Vector3<f64>]| {
        problem.max_diagonal_residual(x) <= opts.tol
            && problem.max_nondiagonal_violation(x) <= opts.tol
    };
    // Restarts are independent; running them in index order with an early
    // exit picks the same winner a parallel sweep would (lowest index).
    let mut best: Option<(usize, Vec<Vector3<f64>>, f64)> = None;
    let mut winner: Option<(usize, Vec<Vector3<f64>>, f64)> = None;
    for r in 0..opts.restarts.max(1) {
        let x0 = match r {
            0 => mds_seed(&problem),
            1 => spectral_seed(&problem),
            _ if r % 2 == 0 => {
                // jittered MDS: keeps the global shape, escapes bad basins
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(r as u64));
                let scale = 0.02 * (1.0 + r as f64 / 8.0);
                mds_seed(&problem)
                    .into_iter()
                    .map(|v| {
                        v + Vector3::new(
                            rng.gen::<f64>() - 0.5,
                            rng.gen::<f64>() - 0.5,
                            rng.gen::<f64>() - 0.5,
                        ) * scale
                    })
                    .collect()
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(r as u64));
                random_seed(n, &mut rng)
            }
        };
        let (x, mut f) = minimize(&problem, x0, opts);
        let mut x = x;
        if problem.max_diagonal_residual(&x) <= 1e-2 && !is_converged(&x) {
            polish(&problem, &mut x, opts.tol);
            f = problem.objective(&x);
        }
        if is_converged(&x) {
            winner = Some((r, x, f));
            break;
        }
        if best.as_ref().is_none_or(|(_, _, bf)| f < *bf) {
            best = Some((r, x, f));
        }
    }
    let (idx, x, f) = match winner {
        Some((r, x, f)) => (Some(r), x, f),
        None => {
            let (_, x, f) = best.expect("at least one restart ran");
            (None, x, f)
        }
    };
    Ok(RealizationResult {
        coordinates: x.iter().map(|v| Point3::from(*v)).collect(),
        max_diagonal_residual: problem.max_diagonal_residual(&x),
        max_nondiagonal_violation: problem.max_nondiagonal_violation(&x),
        converged: idx.is_some(),
        winning_restart: idx,
        objective: f,
    })
}

/// All distinct converged solutions across the restart budget, clustered by
/// the sorted multiset of pairwise distances (rounded to 6 digits). No
/// completeness claim is attached; uniqueness up to congruence is open.
pub fn realize_all(ig: &InvolutiveGraph, opts: &RealizeOptions) -> Result<Vec<RealizationResult>> {
    let problem = RealizationProblem::from_graph(ig, opts.delta)?;
    let n = problem.n;
    let mut clusters: Vec<(Vec<i64>, RealizationResult)> = Vec::new();
    for r in 0..opts.restarts.max(1) {
        let x0 = match r {
            0 => mds_seed(&problem),
            1 => spectral_seed(&problem),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(r as u64));
                random_seed(n, &mut rng)
            }
        };
        let (mut x, _) = minimize(&problem, x0, opts);
        if problem.max_diagonal_residual(&x) <= 1e-2 {
            polish(&problem, &mut x, opts.tol);
        }
        if problem.max_diagonal_residual(&x) > opts.tol
            || problem.max_nondiagonal_violation(&x) > opts.tol
        {
            continue;
        }
        let mut key: Vec<i64> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .map(|(a, b)| ((x[a] - x[b]).norm() * 1e6).round() as i64)
            .collect();
        key.sort_unstable();
        if clusters.iter().any(|(k, _)| *k == key) {
            continue;
        }
        let f = problem.objective(&x);
        clusters.push((
            key,
            RealizationResult {
                coordinates: x.iter().map(|v| Point3::from(*v)).collect(),
                max_diagonal_residual: problem.max_diagonal_residual(&x),
                max_nondiagonal_violation: problem.max_nondiagonal_violation(&x),
                converged: true,
                winning_restart: Some(r),
                objective: f,
            },
        ));
    }
    Ok(clusters.into_iter().map(|(_, r)| r).collect())
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct RealizationReport {
    pub diagonals_at_unit_distance: bool,
    pub others_strictly_below_unit: bool,
    pub reuleaux: bool,
    pub skeleton_matches: bool,
    pub max_diagonal_residual: f64,
    pub max_other_distance: f64,
}

impl RealizationReport {
    pub fn all_passed(&self) -> bool {
        self.diagonals_at_unit_distance
            && self.others_strictly_below_unit
            && self.reuleaux
            && self.skeleton_matches
    }
}

/// Check a candidate realization: diagonal distances, strict slack on the
/// rest, Reuleaux classification and skeleton isomorphism with the graph.
pub fn verify_realization(
    points: &[Point3<f64>],
    ig: &InvolutiveGraph,
    tol: f64,
) -> Result<RealizationReport> {
    let n = ig.n();
    if points.len() != n {
        return Err(Error::InvalidArgument(format!(
            "expected {n} coordinates, got {}",
            points.len()
        )));
    }
    let problem = RealizationProblem::from_graph(ig, 0.0)?;
    let coords: Vec<Vector3<f64>> = points.iter().map(|p| p.coords).collect();
    let max_res = problem.max_diagonal_residual(&coords);
    let diag_ok = max_res <= tol;
    let max_other = problem
        .other_pairs
        .iter()
        .map(|&(a, b)| (coords[a] - coords[b]).norm())
        .fold(0.0, f64::max);
    let other_ok = max_other < 1.0 - 1e-6;
    let raw: Vec<[f64; 3]> = points.iter().map(|p| [p.x, p.y, p.z]).collect();
    let ps = PointSet::from_coords(raw, tol.max(1e-9))?;
    let report = classify(&ps)?;
    let mut skeleton_matches = false;
    if report.tight {
        if let Ok(bc) = ball_complex(&ps) {
            if let Ok(sk) = one_skeleton(&bc) {
                if let Some(g) = sk.graph {
                    skeleton_matches = are_isomorphic(&g, &ig.graph);
                }
            }
        }
    }
    Ok(RealizationReport {
        diagonals_at_unit_distance: diag_ok,
        others_strictly_below_unit: other_ok,
        reuleaux: report.reuleaux,
        skeleton_matches,
        max_diagonal_residual: max_res,
        max_other_distance: max_other,
    })
}
