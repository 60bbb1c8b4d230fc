//! Minimum-norm points, projections and distances over generalized
//! polyhedra.
//!
//! The euclidean problems reduce to a convex quadratic program over the
//! multipliers `z = (lambda, mu)` of the generators,
//!
//! ```text
//!     minimize 1/2 z'Gz + h'z   s.t.  sum(lambda) = 1,  z >= 0,
//! ```
//!
//! solved by an active-set loop in the style of Wolfe's minimum-norm-point
//! algorithm, with a projected-gradient fallback if the loop stalls. The
//! `l1`/`linf` problems are linear programs.

use super::genpoly::GeneralizedPolyhedron;
use super::linprog::{LpBuilder, LpStatus, Rel};
use super::{Norm, Polyhedron, Vector};
use crate::error::{Error, Result};
use crate::tol::ACTIVE_SET_MAX_ITERS;
use nalgebra::{DMatrix, DVector};

/// Outcome of the multiplier quadratic program.
#[derive(Debug, Clone)]
pub(crate) enum QpOutcome {
    Optimal { z: DVector<f64>, value: f64 },
    Unbounded,
}

/// Minimize `1/2 z'Gz + h'z` subject to the first `n_points` coordinates
/// summing to one and all coordinates nonnegative. `G` must be symmetric
/// positive semidefinite.
pub(crate) fn solve_multiplier_qp(
    g: &DMatrix<f64>,
    h: &DVector<f64>,
    n_points: usize,
) -> Result<QpOutcome> {
    let total = g.nrows();
    assert!(n_points >= 1 && n_points <= total);
    let scale = 1.0
        + g.iter().fold(0.0f64, |m, v| m.max(v.abs()))
        + h.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    // Pure LP shortcut: no curvature anywhere.
    if g.iter().all(|v| v.abs() <= 1e-14 * scale) {
        for j in n_points..total {
            if h[j] < -1e-12 * scale {
                return Ok(QpOutcome::Unbounded);
            }
        }
        let (best, _) = (0..n_points)
            .map(|i| (i, h[i]))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("n_points >= 1");
        let mut z = DVector::zeros(total);
        z[best] = 1.0;
        return Ok(QpOutcome::Optimal { z: z.clone(), value: h[best] });
    }

    let objective = |z: &DVector<f64>| 0.5 * (g * z).dot(z) + h.dot(z);

    // Start from the best single generator point.
    let start = (0..n_points)
        .map(|i| (i, 0.5 * g[(i, i)] + h[i]))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .expect("n_points >= 1");
    let mut z = DVector::zeros(total);
    z[start] = 1.0;
    let mut support = vec![false; total];
    support[start] = true;

    for _ in 0..ACTIVE_SET_MAX_ITERS {
        let free: Vec<usize> = (0..total).filter(|&i| support[i]).collect();
        let Some(y_free) = restricted_solve(g, h, n_points, &free) else {
            // Inconsistent KKT system: give the fallback a chance.
            return projected_gradient_fallback(g, h, n_points, z, scale);
        };

        if y_free.iter().all(|&v| v >= -1e-12) {
            let mut y = DVector::zeros(total);
            for (slot, &i) in free.iter().enumerate() {
                y[i] = y_free[slot].max(0.0);
            }
            z = y;
            // Optimality over the inactive generators: with the KKT sign
            // convention Gz + h + nu * a = s >= 0.
            let grad = g * &z + h;
            let nu = free
                .iter()
                .find(|&&i| i < n_points)
                .map(|&i| -grad[i])
                .expect("support always contains a point");
            let mut worst: Option<(usize, f64)> = None;
            for i in 0..total {
                if support[i] {
                    continue;
                }
                let s = if i < n_points { grad[i] + nu } else { grad[i] };
                if s < -1e-10 * scale {
                    match worst {
                        None => worst = Some((i, s)),
                        Some((_, w)) if s < w => worst = Some((i, s)),
                        _ => {}
                    }
                }
            }
            match worst {
                None => {
                    return Ok(QpOutcome::Optimal { value: objective(&z), z });
                }
                Some((i, _)) => support[i] = true,
            }
        } else {
            // Step toward y until the first coordinate hits zero.
            let mut t = 1.0f64;
            for (slot, &i) in free.iter().enumerate() {
                let yi = y_free[slot];
                if yi < z[i] && yi < 0.0 {
                    let step = z[i] / (z[i] - yi);
                    t = t.min(step);
                }
            }
            let mut new_z = z.clone();
            for (slot, &i) in free.iter().enumerate() {
                new_z[i] = z[i] + t * (y_free[slot] - z[i]);
            }
            for &i in &free {
                if new_z[i] <= 1e-12 {
                    new_z[i] = 0.0;
                    support[i] = false;
                }
            }
            // Keep at least one simplex coordinate in the support.
            if !(0..n_points).any(|i| support[i]) {
                let best = (0..n_points)
                    .map(|i| (i, new_z[i]))
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(i, _)| i)
                    .expect("n_points >= 1");
                support[best] = true;
                if new_z[best] <= 0.0 {
                    new_z[best] = 0.0;
                }
            }
            z = new_z;
        }
    }
    projected_gradient_fallback(g, h, n_points, z, scale)
}

/// Equality-constrained solve on the support: minimize over the free
/// coordinates with the simplex constraint, signs unrestricted.
fn restricted_solve(
    g: &DMatrix<f64>,
    h: &DVector<f64>,
    n_points: usize,
    free: &[usize],
) -> Option<DVector<f64>> {
    let k = free.len();
    let mut kkt = DMatrix::zeros(k + 1, k + 1);
    let mut rhs = DVector::zeros(k + 1);
    for (r, &i) in free.iter().enumerate() {
        for (c, &j) in free.iter().enumerate() {
            kkt[(r, c)] = g[(i, j)];
        }
        kkt[(r, k)] = if i < n_points { 1.0 } else { 0.0 };
        kkt[(k, r)] = kkt[(r, k)];
        rhs[r] = -h[i];
    }
    rhs[k] = 1.0;

    let solution = kkt
        .clone()
        .lu()
        .solve(&rhs)
        .or_else(|| kkt.clone().svd(true, true).solve(&rhs, 1e-12).ok())?;
    let residual = (&kkt * &solution - &rhs).norm();
    let scale = 1.0 + rhs.norm() + solution.norm() * kkt.norm();
    if residual > 1e-7 * scale {
        return None;
    }
    Some(DVector::from_iterator(k, (0..k).map(|r| solution[r])))
}

fn projected_gradient_fallback(
    g: &DMatrix<f64>,
    h: &DVector<f64>,
    n_points: usize,
    mut z: DVector<f64>,
    scale: f64,
) -> Result<QpOutcome> {
    let total = g.nrows();
    // Gershgorin bound on the Lipschitz constant of the gradient.
    let lip = (0..total)
        .map(|i| (0..total).map(|j| g[(i, j)].abs()).sum::<f64>())
        .fold(1e-12f64, f64::max);
    let step = 1.0 / lip;
    let mut best = z.clone();
    let objective = |z: &DVector<f64>| 0.5 * (g * z).dot(z) + h.dot(z);
    let mut best_val = objective(&z);
    for _ in 0..200_000 {
        let grad = g * &z + h;
        let mut trial = &z - step * grad;
        project_simplex_orthant(&mut trial, n_points);
        let moved = (&trial - &z).norm();
        z = trial;
        let val = objective(&z);
        if val < best_val {
            best_val = val;
            best = z.clone();
        }
        if moved <= 1e-14 * (1.0 + z.norm()) {
            break;
        }
    }
    if best_val < -1e6 * scale {
        return Ok(QpOutcome::Unbounded);
    }
    Ok(QpOutcome::Optimal { z: best, value: best_val })
}

/// Euclidean projection of the first `n_points` coordinates onto the unit
/// simplex and clamping of the rest to the nonnegative orthant.
fn project_simplex_orthant(z: &mut DVector<f64>, n_points: usize) {
    let mut lambda: Vec<f64> = (0..n_points).map(|i| z[i]).collect();
    let mut sorted = lambda.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        acc += v;
        let candidate = (acc - 1.0) / (i + 1) as f64;
        if v - candidate > 0.0 {
            theta = candidate;
        }
    }
    for v in lambda.iter_mut() {
        *v = (*v - theta).max(0.0);
    }
    for (i, &v) in lambda.iter().enumerate() {
        z[i] = v;
    }
    for i in n_points..z.len() {
        if z[i] < 0.0 {
            z[i] = 0.0;
        }
    }
}

/// Assemble the generator matrix with point columns first.
fn generator_matrix(g: &GeneralizedPolyhedron) -> DMatrix<f64> {
    let n = g.dim();
    let total = g.points().len() + g.rays().len();
    let mut m = DMatrix::zeros(n, total);
    for (j, p) in g.points().iter().enumerate() {
        m.set_column(j, p);
    }
    for (j, r) in g.rays().iter().enumerate() {
        m.set_column(g.points().len() + j, r);
    }
    m
}

/// Minimizer of the norm over `conv(points) + cone(rays)` and its value.
pub fn min_norm_point(set: &GeneralizedPolyhedron, norm: Norm) -> Result<(Vector, f64)> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    match norm {
        Norm::Euclidean => {
            let m = generator_matrix(set);
            let gram = m.transpose() * &m;
            let h = DVector::zeros(gram.nrows());
            match solve_multiplier_qp(&gram, &h, set.points().len())? {
                QpOutcome::Optimal { z, .. } => {
                    let x = &m * z;
                    let value = x.norm();
                    Ok((x, value))
                }
                QpOutcome::Unbounded => {
                    Err(Error::Solver("norm minimization cannot be unbounded".into()))
                }
            }
        }
        Norm::L1 | Norm::Linf => min_norm_lp(set, norm),
    }
}

/// LP formulation for the polyhedral norms.
fn min_norm_lp(set: &GeneralizedPolyhedron, norm: Norm) -> Result<(Vector, f64)> {
    let n = set.dim();
    let k = set.points().len();
    let m = set.rays().len();
    let n_t = if norm == Norm::L1 { n } else { 1 };
    let total = k + m + n_t;
    let mut lp = LpBuilder::new(total);
    lp.all_nonneg();
    let mut obj = vec![0.0; total];
    for t in 0..n_t {
        obj[k + m + t] = 1.0;
    }
    lp.minimize(&obj);
    // +/- (M z)_c <= t_c (or the shared t for linf).
    for c in 0..n {
        for sign in [1.0, -1.0] {
            let mut row = vec![0.0; total];
            for (j, p) in set.points().iter().enumerate() {
                row[j] = sign * p[c];
            }
            for (j, r) in set.rays().iter().enumerate() {
                row[k + j] = sign * r[c];
            }
            let t_idx = if norm == Norm::L1 { k + m + c } else { k + m };
            row[t_idx] = -1.0;
            lp.row(&row, Rel::Le, 0.0);
        }
    }
    let mut sum_row = vec![0.0; total];
    sum_row[..k].iter_mut().for_each(|v| *v = 1.0);
    lp.row(&sum_row, Rel::Eq, 1.0);
    match lp.solve() {
        LpStatus::Optimal { x: z, value } => {
            let mut point = Vector::zeros(n);
            for (j, p) in set.points().iter().enumerate() {
                point += p * z[j];
            }
            for (j, r) in set.rays().iter().enumerate() {
                point += r * z[k + j];
            }
            Ok((point, value))
        }
        LpStatus::Infeasible => Err(Error::Solver("norm LP infeasible".into())),
        LpStatus::Unbounded => Err(Error::Solver("norm LP unbounded".into())),
    }
}

/// Euclidean projection onto a polyhedron given in half-space form.
pub fn project(x: &Vector, p: &Polyhedron) -> Result<Vector> {
    let gens = GeneralizedPolyhedron::from_polyhedron(p)?;
    let shifted = gens.translate(&(-x));
    let (w, _) = min_norm_point(&shifted, Norm::Euclidean)?;
    Ok(x + w)
}

/// `min_{g in set} ||x - g||` under the given norm.
pub fn distance_to_set(x: &Vector, set: &GeneralizedPolyhedron, norm: Norm) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let shifted = set.translate(&(-x));
    Ok(min_norm_point(&shifted, norm)?.1)
}

/// `inf {||g1 - g2|| : g1 in a, g2 in b}` under the given norm, via the
/// minimum-norm point of the Minkowski difference.
pub fn set_distance(
    a: &GeneralizedPolyhedron,
    b: &GeneralizedPolyhedron,
    norm: Norm,
) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let diff = a.minkowski_diff(b);
    Ok(min_norm_point(&diff, norm)?.1)
}

/// Minimize `1/2 x'Qx + c'x` over a generalized polyhedron. Returns the
/// minimizer and the objective value; errors when the objective is unbounded
/// below over the set.
pub(crate) fn min_quadratic_over_genpoly(
    q: &DMatrix<f64>,
    c: &Vector,
    set: &GeneralizedPolyhedron,
) -> Result<(Vector, f64)> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let m = generator_matrix(set);
    let g = m.transpose() * q * &m;
    let g = (&g + g.transpose()) * 0.5;
    let h = m.transpose() * c;
    match solve_multiplier_qp(&g, &h, set.points().len())? {
        QpOutcome::Optimal { z, value } => Ok((&m * z, value)),
        QpOutcome::Unbounded => Err(Error::Solver(
            "quadratic objective unbounded below over the set".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{vector, Halfspace};

    #[test]
    fn single_point_value() {
        let g = GeneralizedPolyhedron::singleton(vector(&[3.0, 4.0]));
        let (p, v) = min_norm_point(&g, Norm::Euclidean).unwrap();
        assert!((v - 5.0).abs() < 1e-9);
        assert!((p - vector(&[3.0, 4.0])).norm() < 1e-9);
    }

    #[test]
    fn hull_containing_origin() {
        // conv{-1, 1}: subdifferential of |x| at 0.
        let g = GeneralizedPolyhedron::new(1, vec![vector(&[-1.0]), vector(&[1.0])], vec![]);
        let (_, v) = min_norm_point(&g, Norm::Euclidean).unwrap();
        assert!(v.abs() < 1e-9);
    }

    #[test]
    fn hull_plus_ray() {
        // conv{(1,1),(1,-1)} + cone{(1,0)} -> closest point (1,0), value 1.
        let g = GeneralizedPolyhedron::new(
            2,
            vec![vector(&[1.0, 1.0]), vector(&[1.0, -1.0])],
            vec![vector(&[1.0, 0.0])],
        );
        let (p, v) = min_norm_point(&g, Norm::Euclidean).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        assert!((p - vector(&[1.0, 0.0])).norm() < 1e-8);
    }

    #[test]
    fn ray_reduces_norm() {
        // conv{(2,1)} + cone{(-1,0)}: sliding along the ray reaches (0,1).
        let g = GeneralizedPolyhedron::new(
            2,
            vec![vector(&[2.0, 1.0])],
            vec![vector(&[-1.0, 0.0])],
        );
        let (p, v) = min_norm_point(&g, Norm::Euclidean).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        assert!((p - vector(&[0.0, 1.0])).norm() < 1e-8);
    }

    #[test]
    fn empty_set_rejected() {
        let g = GeneralizedPolyhedron::empty(2);
        assert_eq!(min_norm_point(&g, Norm::Euclidean).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn l1_and_linf_min_norm() {
        // Segment from (2,0) to (0,2): l1 norm constant 2, linf minimized at (1,1).
        let g = GeneralizedPolyhedron::new(2, vec![vector(&[2.0, 0.0]), vector(&[0.0, 2.0])], vec![]);
        let (_, v1) = min_norm_point(&g, Norm::L1).unwrap();
        assert!((v1 - 2.0).abs() < 1e-8);
        let (p, vinf) = min_norm_point(&g, Norm::Linf).unwrap();
        assert!((vinf - 1.0).abs() < 1e-8);
        assert!((p - vector(&[1.0, 1.0])).norm() < 1e-7);
    }

    #[test]
    fn projection_clamps() {
        let p = Polyhedron::interval(0.0, 1.0);
        let proj = project(&vector(&[2.0]), &p).unwrap();
        assert!((proj[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn projection_onto_box_is_componentwise() {
        let p = Polyhedron::from_box(&vector(&[0.0, 0.0]), &vector(&[1.0, 1.0]));
        let proj = project(&vector(&[2.0, 2.0]), &p).unwrap();
        assert!((proj - vector(&[1.0, 1.0])).norm() < 1e-8);
    }

    #[test]
    fn projection_onto_simplex_face() {
        let p = Polyhedron::new(vec![
            Halfspace::new(vector(&[1.0, 1.0]), 1.0),
            Halfspace::new(vector(&[-1.0, 0.0]), 0.0),
            Halfspace::new(vector(&[0.0, -1.0]), 0.0),
        ]);
        let proj = project(&vector(&[1.0, -1.0]), &p).unwrap();
        assert!((&proj - vector(&[1.0, 0.0])).norm() < 1e-8, "got {proj:?}");
    }

    #[test]
    fn distance_examples() {
        let g = GeneralizedPolyhedron::singleton(vector(&[3.0, 4.0]));
        let d = distance_to_set(&vector(&[0.0, 0.0]), &g, Norm::Euclidean).unwrap();
        assert!((d - 5.0).abs() < 1e-9);

        let ray = GeneralizedPolyhedron::cone(2, vec![vector(&[0.0, 1.0])]);
        let d = distance_to_set(&vector(&[1.0, 0.0]), &ray, Norm::Euclidean).unwrap();
        assert!((d - 1.0).abs() < 1e-9);

        let neg = GeneralizedPolyhedron::cone(1, vec![vector(&[-1.0])]);
        let d = distance_to_set(&vector(&[2.0]), &neg, Norm::Euclidean).unwrap();
        assert!((d - 2.0).abs() < 1e-9);
    }

    #[test]
    fn set_distance_examples() {
        let g1 = GeneralizedPolyhedron::singleton(vector(&[1.0]));
        let same = set_distance(&g1, &g1, Norm::Euclidean).unwrap();
        assert!(same.abs() < 1e-9);

        let neg = GeneralizedPolyhedron::cone(1, vec![vector(&[-1.0])]);
        let d = set_distance(&g1, &neg, Norm::Euclidean).unwrap();
        assert!((d - 1.0).abs() < 1e-9);

        let g2 = GeneralizedPolyhedron::singleton(vector(&[0.0, 2.0]));
        let cone = GeneralizedPolyhedron::cone(2, vec![vector(&[1.0, 0.0])]);
        let d = set_distance(&g2, &cone, Norm::Euclidean).unwrap();
        assert!((d - 2.0).abs() < 1e-9);
    }

    #[test]
    fn quadratic_over_interval() {
        // min 1/2 x^2 - x over [0, 10] -> x = 1, value -1/2.
        let set = GeneralizedPolyhedron::new(1, vec![vector(&[0.0]), vector(&[10.0])], vec![]);
        let q = DMatrix::from_element(1, 1, 1.0);
        let c = vector(&[-1.0]);
        let (x, v) = min_quadratic_over_genpoly(&q, &c, &set).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-8);
        assert!((v + 0.5).abs() < 1e-9);
    }

    #[test]
    fn linear_over_unbounded_cell_detected() {
        // min -x over [0, inf): unbounded below.
        let set = GeneralizedPolyhedron::new(1, vec![vector(&[0.0])], vec![vector(&[1.0])]);
        let q = DMatrix::zeros(1, 1);
        let c = vector(&[-1.0]);
        assert!(min_quadratic_over_genpoly(&q, &c, &set).is_err());
    }
}
