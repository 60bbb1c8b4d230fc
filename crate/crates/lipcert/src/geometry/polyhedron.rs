//! Half-space polyhedra and exact generator enumeration for n <= 4.
//!
//! Enumeration is exhaustive over constraint subsets (no double-description
//! machinery): vertices come from n-subsets of constraints, extreme rays of
//! the recession cone from (n-1)-subsets, and a non-pointed polyhedron is
//! first split as `P = (P ∩ L⊥) + L` along its lineality space `L` so the
//! reduced part always has vertices.

use super::linprog::{LpBuilder, LpStatus, Rel};
use super::Vector;
use crate::error::{Error, Result};
use crate::tol::{DIM_CAP, TOL_FEAS};
use nalgebra::{DMatrix, DVector};
use std::sync::OnceLock;

/// Closed half-space `<normal, x> <= offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: f64) -> Self {
        Halfspace { normal, offset }
    }

    /// Signed slack `offset - <normal, x>`; nonnegative means feasible.
    pub fn slack(&self, x: &Vector) -> f64 {
        self.offset - self.normal.dot(x)
    }

    fn scale(&self, x: &Vector) -> f64 {
        1.0 + self.offset.abs() + self.normal.norm() * x.norm()
    }
}

/// Convex polyhedron `{x : <c_j, x> <= d_j for all j}` with lazily cached
/// generators.
#[derive(Debug)]
pub struct Polyhedron {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    generators: OnceLock<Result<(Vec<Vector>, Vec<Vector>)>>,
}

impl Clone for Polyhedron {
    fn clone(&self) -> Self {
        let generators = OnceLock::new();
        if let Some(cached) = self.generators.get() {
            let _ = generators.set(cached.clone());
        }
        Polyhedron {
            dim: self.dim,
            halfspaces: self.halfspaces.clone(),
            generators,
        }
    }
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.halfspaces == other.halfspaces
    }
}

impl Polyhedron {
    /// Polyhedron from a nonempty list of half-spaces.
    pub fn new(halfspaces: Vec<Halfspace>) -> Self {
        assert!(
            !halfspaces.is_empty(),
            "use Polyhedron::full_space for an unconstrained set"
        );
        let dim = halfspaces[0].normal.len();
        debug_assert!(halfspaces.iter().all(|h| h.normal.len() == dim));
        Polyhedron {
            dim,
            halfspaces,
            generators: OnceLock::new(),
        }
    }

    /// All of R^n.
    pub fn full_space(dim: usize) -> Self {
        Polyhedron {
            dim,
            halfspaces: Vec::new(),
            generators: OnceLock::new(),
        }
    }

    /// Axis-aligned box `{lower <= x <= upper}`.
    pub fn from_box(lower: &Vector, upper: &Vector) -> Self {
        let n = lower.len();
        let mut hs = Vec::with_capacity(2 * n);
        for k in 0..n {
            let mut e = Vector::zeros(n);
            e[k] = 1.0;
            hs.push(Halfspace::new(e.clone(), upper[k]));
            hs.push(Halfspace::new(-e, -lower[k]));
        }
        Polyhedron::new(hs)
    }

    /// 1-D closed interval.
    pub fn interval(lo: f64, hi: f64) -> Self {
        Polyhedron::from_box(&Vector::from_element(1, lo), &Vector::from_element(1, hi))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn is_full_space(&self) -> bool {
        self.halfspaces.is_empty()
    }

    /// Membership with scaled tolerance.
    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.halfspaces
            .iter()
            .all(|h| h.slack(x) >= -tol * h.scale(x))
    }

    /// Emptiness via an LP feasibility check (phase-1 simplex).
    pub fn is_empty(&self) -> bool {
        if self.halfspaces.is_empty() {
            return false;
        }
        let mut lp = LpBuilder::new(self.dim);
        for h in &self.halfspaces {
            lp.row(h.normal.as_slice(), Rel::Le, h.offset);
        }
        matches!(lp.solve(), LpStatus::Infeasible)
    }

    /// Intersection: concatenation of half-space lists.
    pub fn intersection(&self, other: &Polyhedron) -> Polyhedron {
        assert_eq!(self.dim, other.dim);
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        if hs.is_empty() {
            Polyhedron::full_space(self.dim)
        } else {
            Polyhedron::new(hs)
        }
    }

    /// Exact vertex and ray generators; `conv(vertices) + cone(rays)` equals
    /// the polyhedron. Cached after the first call.
    pub fn generators(&self) -> Result<&(Vec<Vector>, Vec<Vector>)> {
        self.generators
            .get_or_init(|| enumerate_generators(self))
            .as_ref()
            .map_err(|e| e.clone())
    }

    pub fn vertices(&self) -> Result<&[Vector]> {
        Ok(&self.generators()?.0)
    }

    pub fn is_bounded(&self) -> Result<bool> {
        Ok(self.generators()?.1.is_empty())
    }

    /// Bounding box of the vertex set. `None` when unbounded.
    pub fn bounding_box(&self) -> Result<Option<(Vector, Vector)>> {
        let (vertices, rays) = self.generators()?;
        if !rays.is_empty() {
            return Ok(None);
        }
        let mut lo = vertices[0].clone();
        let mut hi = vertices[0].clone();
        for v in vertices.iter().skip(1) {
            for k in 0..self.dim {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        Ok(Some((lo, hi)))
    }

    /// A point with positive slack on every half-space, when one exists
    /// (i.e. the polyhedron has nonempty interior).
    pub fn interior_point(&self) -> Option<Vector> {
        if self.halfspaces.is_empty() {
            return Some(Vector::zeros(self.dim));
        }
        let big = 10.0
            + self
                .halfspaces
                .iter()
                .map(|h| h.offset.abs() / h.normal.norm().max(1e-12))
                .fold(0.0f64, f64::max);
        // Variables (x, s): maximize s subject to <c,x> + s*||c|| <= d.
        let n = self.dim;
        let mut lp = LpBuilder::new(n + 1);
        let mut obj = vec![0.0; n + 1];
        obj[n] = 1.0;
        lp.maximize(&obj);
        for h in &self.halfspaces {
            let mut row = h.normal.as_slice().to_vec();
            row.push(h.normal.norm());
            lp.row(&row, Rel::Le, h.offset);
        }
        for k in 0..n {
            let mut row = vec![0.0; n + 1];
            row[k] = 1.0;
            lp.row(&row, Rel::Le, 2.0 * big);
            row[k] = -1.0;
            lp.row(&row, Rel::Le, 2.0 * big);
        }
        let mut cap = vec![0.0; n + 1];
        cap[n] = 1.0;
        lp.row(&cap, Rel::Le, big);
        match lp.solve() {
            LpStatus::Optimal { x, .. } if x[n] > 1e-9 => {
                Some(Vector::from_column_slice(&x[..n]))
            }
            _ => None,
        }
    }
}

/// All k-subsets of 0..m, visited in lexicographic order.
pub(crate) fn for_each_subset(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Orthonormal basis of the null space of `rows` (as a matrix), via the
/// symmetric eigendecomposition of the n x n Gram matrix.
fn null_space_basis(rows: &[&Vector], dim: usize) -> Vec<Vector> {
    if rows.is_empty() {
        return (0..dim)
            .map(|k| {
                let mut e = Vector::zeros(dim);
                e[k] = 1.0;
                e
            })
            .collect();
    }
    let mut gram = DMatrix::<f64>::zeros(dim, dim);
    for r in rows {
        gram += *r * r.transpose();
    }
    let scale = gram.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let eig = nalgebra::SymmetricEigen::new(gram);
    let mut basis = Vec::new();
    for (i, &val) in eig.eigenvalues.iter().enumerate() {
        if val.abs() <= 1e-10 * scale {
            basis.push(DVector::from(eig.eigenvectors.column(i).into_owned()));
        }
    }
    basis
}

fn enumerate_generators(p: &Polyhedron) -> Result<(Vec<Vector>, Vec<Vector>)> {
    let n = p.dim;
    if n > DIM_CAP {
        return Err(Error::DimensionTooLarge { dim: n, cap: DIM_CAP });
    }
    if n == 0 {
        return Err(Error::DimensionTooLarge { dim: 0, cap: DIM_CAP });
    }
    if p.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }

    // Split off the lineality space: directions orthogonal to every normal.
    let normals: Vec<&Vector> = p.halfspaces.iter().map(|h| &h.normal).collect();
    let lineality = null_space_basis(&normals, n);
    let mut rows: Vec<Halfspace> = p.halfspaces.clone();
    let mut rays: Vec<Vector> = Vec::new();
    for b in &lineality {
        rows.push(Halfspace::new(b.clone(), 0.0));
        rows.push(Halfspace::new(-b.clone(), 0.0));
        rays.push(b.clone());
        rays.push(-b.clone());
    }

    // Vertices of the pointed part: solutions of n active constraints.
    let mut vertices: Vec<Vector> = Vec::new();
    let m = rows.len();
    for_each_subset(m, n, |subset| {
        let mat = DMatrix::from_fn(n, n, |i, j| rows[subset[i]].normal[j]);
        let rhs = DVector::from_fn(n, |i, _| rows[subset[i]].offset);
        let lu = mat.clone().lu();
        if let Some(x) = lu.solve(&rhs) {
            let residual = (&mat * &x - &rhs).norm();
            if residual <= 1e-7 * (1.0 + x.norm()) && feasible(&rows, &x) {
                push_dedup_point(&mut vertices, x);
            }
        }
    });

    // Extreme rays of the recession cone `{r : <c_j, r> <= 0}` of the
    // pointed part: 1-dimensional null spaces of (n-1)-subsets.
    for_each_subset(m, n - 1, |subset| {
        let active: Vec<&Vector> = subset.iter().map(|&i| &rows[i].normal).collect();
        let basis = null_space_basis(&active, n);
        if basis.len() != 1 {
            return;
        }
        for dir in [basis[0].clone(), -basis[0].clone()] {
            if rows.iter().all(|h| h.normal.dot(&dir) <= 1e-9) {
                push_dedup_ray(&mut rays, dir);
            }
        }
    });

    if vertices.is_empty() {
        // Structurally impossible for a nonempty pointed polyhedron; guard
        // against numerics by falling back to an LP feasible point.
        let mut lp = LpBuilder::new(n);
        for h in &rows {
            lp.row(h.normal.as_slice(), Rel::Le, h.offset);
        }
        if let LpStatus::Optimal { x, .. } = lp.solve() {
            vertices.push(Vector::from_column_slice(&x));
        } else {
            return Err(Error::Solver("no vertex found for nonempty polyhedron".into()));
        }
    }

    Ok((vertices, rays))
}

fn feasible(rows: &[Halfspace], x: &Vector) -> bool {
    rows.iter().all(|h| h.slack(x) >= -TOL_FEAS * h.scale(x))
}

fn push_dedup_point(points: &mut Vec<Vector>, x: Vector) {
    let tol = 1e-9 * (1.0 + x.norm());
    if !points.iter().any(|p| (p - &x).norm() <= tol) {
        points.push(x);
    }
}

fn push_dedup_ray(rays: &mut Vec<Vector>, dir: Vector) {
    let norm = dir.norm();
    if norm <= 1e-12 {
        return;
    }
    let unit = dir / norm;
    if !rays.iter().any(|r| (r - &unit).norm() <= 1e-9) {
        rays.push(unit);
    }
}
