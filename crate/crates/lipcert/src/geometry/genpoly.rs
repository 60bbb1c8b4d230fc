//! Generalized polyhedra `conv(points) + cone(rays)`: the representation for
//! every set-valued object in the crate (subdifferentials, normal cones,
//! epsilon-normal sets).

use super::linprog::{LpBuilder, LpStatus, Rel};
use super::{Polyhedron, Vector};
use crate::error::{Error, Result};
use crate::tol::TOL_DEDUP;

/// `conv(points) + cone(rays)`. Empty if and only if `points` is empty; a
/// pure cone carries the origin as its single point.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedPolyhedron {
    dim: usize,
    points: Vec<Vector>,
    rays: Vec<Vector>,
}

impl GeneralizedPolyhedron {
    pub fn new(dim: usize, points: Vec<Vector>, rays: Vec<Vector>) -> Self {
        debug_assert!(points.iter().all(|p| p.len() == dim));
        debug_assert!(rays.iter().all(|r| r.len() == dim));
        GeneralizedPolyhedron { dim, points, rays }
    }

    pub fn empty(dim: usize) -> Self {
        GeneralizedPolyhedron { dim, points: Vec::new(), rays: Vec::new() }
    }

    pub fn singleton(p: Vector) -> Self {
        let dim = p.len();
        GeneralizedPolyhedron { dim, points: vec![p], rays: Vec::new() }
    }

    /// Cone based at the origin.
    pub fn cone(dim: usize, rays: Vec<Vector>) -> Self {
        GeneralizedPolyhedron { dim, points: vec![Vector::zeros(dim)], rays }
    }

    /// Generator form of a half-space polyhedron.
    pub fn from_polyhedron(p: &Polyhedron) -> Result<Self> {
        let (vertices, rays) = p.generators()?;
        Ok(GeneralizedPolyhedron::new(p.dim(), vertices.clone(), rays.clone()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn translate(&self, shift: &Vector) -> Self {
        GeneralizedPolyhedron {
            dim: self.dim,
            points: self.points.iter().map(|p| p + shift).collect(),
            rays: self.rays.clone(),
        }
    }

    /// Minkowski sum: pairwise point sums, union of rays.
    pub fn minkowski_sum(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut points = Vec::with_capacity(self.points.len() * other.points.len());
        for p in &self.points {
            for q in &other.points {
                points.push(p + q);
            }
        }
        let mut rays = self.rays.clone();
        rays.extend(other.rays.iter().cloned());
        GeneralizedPolyhedron { dim: self.dim, points, rays }
    }

    /// Generators of `{g1 - g2 : g1 in self, g2 in other}`.
    pub fn minkowski_diff(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut points = Vec::with_capacity(self.points.len() * other.points.len());
        for p in &self.points {
            for q in &other.points {
                points.push(p - q);
            }
        }
        let mut rays = self.rays.clone();
        rays.extend(other.rays.iter().map(|r| -r));
        GeneralizedPolyhedron { dim: self.dim, points, rays }
    }

    /// Exact membership via an LP over the multipliers.
    pub fn contains(&self, x: &Vector) -> bool {
        if self.points.is_empty() {
            return false;
        }
        let k = self.points.len();
        let m = self.rays.len();
        let n = self.dim;
        let mut lp = LpBuilder::new(k + m);
        lp.all_nonneg();
        for c in 0..n {
            let mut row = Vec::with_capacity(k + m);
            for p in &self.points {
                row.push(p[c]);
            }
            for r in &self.rays {
                row.push(r[c]);
            }
            lp.row(&row, Rel::Eq, x[c]);
        }
        let mut sum_row = vec![0.0; k + m];
        sum_row[..k].iter_mut().for_each(|v| *v = 1.0);
        lp.row(&sum_row, Rel::Eq, 1.0);
        matches!(lp.solve(), LpStatus::Optimal { .. })
    }

    /// Support value `sup <d, x>` over the set; `+inf` when a ray points
    /// into the half-space of `d`. Also returns the maximizing point index
    /// when the supremum is finite.
    pub fn support(&self, d: &Vector) -> (f64, Option<usize>) {
        if self.points.is_empty() {
            return (f64::NEG_INFINITY, None);
        }
        if self.rays.iter().any(|r| r.dot(d) > 1e-12 * (1.0 + d.norm())) {
            return (f64::INFINITY, None);
        }
        let mut best = (f64::NEG_INFINITY, None);
        for (i, p) in self.points.iter().enumerate() {
            let v = p.dot(d);
            if v > best.0 {
                best = (v, Some(i));
            }
        }
        best
    }

    /// Minimal representation: duplicate generators dropped (pairwise
    /// tolerance 1e-12, rays after normalization), then any point inside the
    /// hull of the others and any ray inside the cone of the others removed.
    pub fn canonicalize(&self) -> Self {
        if self.points.is_empty() {
            return self.clone();
        }
        // Dedupe.
        let mut points: Vec<Vector> = Vec::new();
        for p in &self.points {
            let tol = TOL_DEDUP * (1.0 + p.norm());
            if !points.iter().any(|q| (q - p).norm() <= tol) {
                points.push(p.clone());
            }
        }
        let mut rays: Vec<Vector> = Vec::new();
        for r in &self.rays {
            let norm = r.norm();
            if norm <= TOL_DEDUP {
                continue;
            }
            let unit = r / norm;
            if !rays.iter().any(|q| (q - &unit).norm() <= 1e-12) {
                rays.push(unit);
            }
        }
        // Drop rays generated by the remaining rays.
        let mut i = 0;
        while i < rays.len() {
            let candidate = rays[i].clone();
            let others: Vec<Vector> = rays
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, r)| r.clone())
                .collect();
            if in_cone(&candidate, &others) {
                rays.remove(i);
            } else {
                i += 1;
            }
        }
        // Drop points expressible through the others plus the cone.
        let mut i = 0;
        while i < points.len() && points.len() > 1 {
            let candidate = points[i].clone();
            let others: Vec<Vector> = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| p.clone())
                .collect();
            let hull = GeneralizedPolyhedron::new(self.dim, others, rays.clone());
            if hull.contains(&candidate) {
                points.remove(i);
            } else {
                i += 1;
            }
        }
        GeneralizedPolyhedron { dim: self.dim, points, rays }
    }
}

fn in_cone(r: &Vector, rays: &[Vector]) -> bool {
    if rays.is_empty() {
        return r.norm() <= TOL_DEDUP;
    }
    let n = r.len();
    let mut lp = LpBuilder::new(rays.len());
    lp.all_nonneg();
    for c in 0..n {
        let row: Vec<f64> = rays.iter().map(|q| q[c]).collect();
        lp.row(&row, Rel::Eq, r[c]);
    }
    matches!(lp.solve(), LpStatus::Optimal { .. })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    #[test]
    fn contains_hull_point() {
        let g = GeneralizedPolyhedron::new(
            2,
            vec![vector(&[0.0, 0.0]), vector(&[1.0, 0.0]), vector(&[0.0, 1.0])],
            vec![],
        );
        assert!(g.contains(&vector(&[0.25, 0.25])));
        assert!(!g.contains(&vector(&[0.6, 0.6])));
    }

    #[test]
    fn contains_uses_rays() {
        let g = GeneralizedPolyhedron::cone(2, vec![vector(&[1.0, 0.0])]);
        assert!(g.contains(&vector(&[5.0, 0.0])));
        assert!(!g.contains(&vector(&[-1e-6, 0.0])));
    }

    #[test]
    fn canonicalize_removes_interior_point() {
        let g = GeneralizedPolyhedron::new(
            1,
            vec![vector(&[-1.0]), vector(&[0.5]), vector(&[1.0])],
            vec![],
        );
        let c = g.canonicalize();
        assert_eq!(c.points().len(), 2);
        assert!(c.rays().is_empty());
    }

    #[test]
    fn canonicalize_removes_dominated_ray_and_duplicates() {
        let g = GeneralizedPolyhedron::new(
            2,
            vec![vector(&[0.0, 0.0]), vector(&[0.0, 0.0])],
            vec![
                vector(&[1.0, 0.0]),
                vector(&[2.0, 0.0]),
                vector(&[0.0, 1.0]),
                vector(&[1.0, 1.0]), // inside cone(e1, e2)
            ],
        );
        let c = g.canonicalize();
        assert_eq!(c.points().len(), 1);
        assert_eq!(c.rays().len(), 2);
    }

    #[test]
    fn canonicalize_absorbs_point_into_cone_shadow() {
        // conv{0, (1,0)} + cone{(1,0)}: the point (1,0) is 0 + ray.
        let g = GeneralizedPolyhedron::new(
            2,
            vec![vector(&[0.0, 0.0]), vector(&[1.0, 0.0])],
            vec![vector(&[1.0, 0.0])],
        );
        let c = g.canonicalize();
        assert_eq!(c.points().len(), 1);
        assert_eq!(c.rays().len(), 1);
    }

    #[test]
    fn support_with_ray_is_infinite() {
        let g = GeneralizedPolyhedron::cone(1, vec![vector(&[-1.0])]);
        let (up, _) = g.support(&vector(&[-1.0]));
        assert!(up.is_infinite());
        let (down, idx) = g.support(&vector(&[1.0]));
        assert_eq!(down, 0.0);
        assert_eq!(idx, Some(0));
    }

    #[test]
    fn minkowski_diff_generators() {
        let g1 = GeneralizedPolyhedron::singleton(vector(&[0.0, 2.0]));
        let g2 = GeneralizedPolyhedron::cone(2, vec![vector(&[1.0, 0.0])]);
        let d = g1.minkowski_diff(&g2);
        assert_eq!(d.points().len(), 1);
        assert_eq!(d.points()[0], vector(&[0.0, 2.0]));
        assert_eq!(d.rays().len(), 1);
        assert_eq!(d.rays()[0], vector(&[-1.0, 0.0]));
    }
}
