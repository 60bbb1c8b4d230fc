//! The convex function model: `f(x) = 1/2 <Qx,x> + max_i(<a_i,x> + b_i)` on a
//! polyhedral domain, `+inf` elsewhere. Proper, l.s.c. and convex by
//! construction. Subdifferentials and normal cones come out as generalized
//! polyhedra and are exact for this class.

mod cells;

pub use cells::{build_cell_complex, Cell, CellComplex};

use crate::error::{Error, Result};
use crate::geometry::{
    check_finite, distance_to_set, GeneralizedPolyhedron, Norm, Polyhedron, Vector,
};
use crate::tol::{TOL_ACTIVE, TOL_FEAS, TOL_OPT};
use nalgebra::DMatrix;

/// One affine piece `<slope, x> + intercept` of the max term.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePiece {
    pub slope: Vector,
    pub intercept: f64,
}

impl AffinePiece {
    pub fn new(slope: Vector, intercept: f64) -> Self {
        AffinePiece { slope, intercept }
    }

    pub fn value(&self, x: &Vector) -> f64 {
        self.slope.dot(x) + self.intercept
    }
}

/// Proper l.s.c. convex function with quadratic + max-affine + indicator
/// structure. The norm kind is part of the problem instance.
#[derive(Debug, Clone)]
pub struct ConvexFunction {
    quadratic: Option<DMatrix<f64>>,
    affine_pieces: Vec<AffinePiece>,
    domain: Polyhedron,
    norm: Norm,
}

impl ConvexFunction {
    /// Validates symmetry and positive semidefiniteness of `Q` (eigenvalues
    /// >= -1e-10), nonemptiness of the domain and dimension consistency.
    pub fn new(
        quadratic: Option<DMatrix<f64>>,
        affine_pieces: Vec<AffinePiece>,
        domain: Polyhedron,
        norm: Norm,
    ) -> Result<Self> {
        let n = domain.dim();
        if affine_pieces.is_empty() {
            return Err(Error::InvalidFunction("needs at least one affine piece".into()));
        }
        for piece in &affine_pieces {
            if piece.slope.len() != n {
                return Err(Error::InvalidFunction("piece dimension mismatch".into()));
            }
            check_finite(&piece.slope)?;
            if !piece.intercept.is_finite() {
                return Err(Error::InvalidFunction("non-finite intercept".into()));
            }
        }
        if let Some(q) = &quadratic {
            if q.nrows() != n || q.ncols() != n {
                return Err(Error::InvalidFunction("quadratic dimension mismatch".into()));
            }
            if (q - q.transpose()).norm() > 1e-10 * (1.0 + q.norm()) {
                return Err(Error::InvalidFunction("quadratic matrix not symmetric".into()));
            }
            let eig = nalgebra::SymmetricEigen::new(q.clone());
            if eig.eigenvalues.iter().any(|&v| v < -1e-10) {
                return Err(Error::InvalidFunction(
                    "quadratic matrix not positive semidefinite".into(),
                ));
            }
        }
        if domain.is_empty() {
            return Err(Error::InvalidFunction("empty domain".into()));
        }
        let quadratic = quadratic.filter(|q| q.norm() > 0.0);
        Ok(ConvexFunction { quadratic, affine_pieces, domain, norm })
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &Polyhedron {
        &self.domain
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.affine_pieces
    }

    pub fn quadratic(&self) -> Option<&DMatrix<f64>> {
        self.quadratic.as_ref()
    }

    pub fn has_quadratic(&self) -> bool {
        self.quadratic.is_some()
    }

    /// Extended-real evaluation: finite on the domain, `+inf` outside.
    pub fn evaluate(&self, x: &Vector) -> f64 {
        if !self.domain.contains(x, TOL_FEAS) {
            return f64::INFINITY;
        }
        self.finite_value(x)
    }

    /// The quadratic + max-affine value, ignoring the domain indicator.
    pub(crate) fn finite_value(&self, x: &Vector) -> f64 {
        let quad = match &self.quadratic {
            Some(q) => 0.5 * (q * x).dot(x),
            None => 0.0,
        };
        let affine = self
            .affine_pieces
            .iter()
            .map(|p| p.value(x))
            .fold(f64::NEG_INFINITY, f64::max);
        quad + affine
    }

    /// Indices of the affine pieces attaining the max at `x`, with a tie
    /// tolerance relative to the value spread. Ties enlarge the set.
    pub fn active_pieces(&self, x: &Vector) -> Vec<usize> {
        let values: Vec<f64> = self.affine_pieces.iter().map(|p| p.value(x)).collect();
        let vmax = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let vmin = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let tol = TOL_ACTIVE * (1.0 + vmax.abs() + (vmax - vmin));
        values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v >= vmax - tol)
            .map(|(i, _)| i)
            .collect()
    }

    /// Exact subdifferential at `x`:
    /// `conv{Qx + a_i : i active} + N(x; domain)`, canonicalized.
    pub fn subdifferential(&self, x: &Vector) -> Result<GeneralizedPolyhedron> {
        if !self.domain.contains(x, TOL_FEAS) {
            return Err(Error::OutsideDomain);
        }
        let active = self.active_pieces(x);
        let cone = normal_cone(&self.domain, x)?;
        Ok(self.subdifferential_from_sets(x, &active, cone.rays()))
    }

    /// Subdifferential formula for a prescribed active set; used by the
    /// criteria to evaluate the cell formula away from the representative.
    pub(crate) fn subdifferential_from_sets(
        &self,
        x: &Vector,
        active_pieces: &[usize],
        normal_rays: &[Vector],
    ) -> GeneralizedPolyhedron {
        let n = self.dim();
        let qx = match &self.quadratic {
            Some(q) => q * x,
            None => Vector::zeros(n),
        };
        let points: Vec<Vector> = active_pieces
            .iter()
            .map(|&i| &qx + &self.affine_pieces[i].slope)
            .collect();
        GeneralizedPolyhedron::new(n, points, normal_rays.to_vec()).canonicalize()
    }
}

/// Normal cone `N(x; omega)`: the cone generated by the outward normals of
/// the constraints active at `x`. Pure cone (single point at the origin).
pub fn normal_cone(omega: &Polyhedron, x: &Vector) -> Result<GeneralizedPolyhedron> {
    if !omega.contains(x, TOL_FEAS) {
        return Err(Error::OutsideDomain);
    }
    let n = omega.dim();
    let mut rays = Vec::new();
    for h in omega.halfspaces() {
        let scale = 1.0 + h.offset.abs() + h.normal.norm() * x.norm();
        if h.slack(x).abs() <= TOL_FEAS * scale {
            rays.push(h.normal.clone());
        }
    }
    Ok(GeneralizedPolyhedron::cone(n, rays).canonicalize())
}

/// Membership test `v in N_eps(x; omega) = N(x; omega) + eps * B*`, i.e.
/// the distance from `v` to the normal cone measured in the dual norm is at
/// most `eps` (up to the optimality tolerance).
pub fn eps_normal_membership(
    omega: &Polyhedron,
    x: &Vector,
    eps: f64,
    v: &Vector,
    norm: Norm,
) -> Result<bool> {
    if eps < 0.0 {
        return Err(Error::InvalidFunction("eps must be nonnegative".into()));
    }
    let cone = normal_cone(omega, x)?;
    let dist = distance_to_set(v, &cone, norm.dual())?;
    Ok(dist <= eps + TOL_OPT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    /// f = delta_[0,1] + x.
    fn indicator_plus_identity() -> ConvexFunction {
        ConvexFunction::new(
            None,
            vec![AffinePiece::new(vector(&[1.0]), 0.0)],
            Polyhedron::interval(0.0, 1.0),
            Norm::Euclidean,
        )
        .unwrap()
    }

    /// f = delta_[0,1].
    fn indicator_01() -> ConvexFunction {
        ConvexFunction::new(
            None,
            vec![AffinePiece::new(vector(&[0.0]), 0.0)],
            Polyhedron::interval(0.0, 1.0),
            Norm::Euclidean,
        )
        .unwrap()
    }

    /// f = |x| as max(x, -x) on all of R.
    fn abs_fn() -> ConvexFunction {
        ConvexFunction::new(
            None,
            vec![
                AffinePiece::new(vector(&[1.0]), 0.0),
                AffinePiece::new(vector(&[-1.0]), 0.0),
            ],
            Polyhedron::full_space(1),
            Norm::Euclidean,
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(indicator_plus_identity().evaluate(&vector(&[0.5])), 0.5);
        assert_eq!(indicator_01().evaluate(&vector(&[2.0])), f64::INFINITY);
        assert_eq!(abs_fn().evaluate(&vector(&[-3.0])), 3.0);
    }

    #[test]
    fn subdifferential_of_indicator_is_normal_cone() {
        let f = indicator_01();
        // At 0: (-inf, 0] = cone{-1}.
        let sub = f.subdifferential(&vector(&[0.0])).unwrap();
        assert_eq!(sub.points().len(), 1);
        assert!(sub.points()[0].norm() < 1e-12);
        assert_eq!(sub.rays().len(), 1);
        assert!((sub.rays()[0][0] + 1.0).abs() < 1e-12);
        // At 1: [0, +inf) = cone{+1}.
        let sub = f.subdifferential(&vector(&[1.0])).unwrap();
        assert_eq!(sub.rays().len(), 1);
        assert!((sub.rays()[0][0] - 1.0).abs() < 1e-12);
        // Interior: {0} exactly.
        let sub = f.subdifferential(&vector(&[0.5])).unwrap();
        assert_eq!(sub.points().len(), 1);
        assert!(sub.points()[0].norm() < 1e-12);
        assert!(sub.rays().is_empty());
    }

    #[test]
    fn subdifferential_of_abs_at_kink() {
        let sub = abs_fn().subdifferential(&vector(&[0.0])).unwrap();
        assert_eq!(sub.points().len(), 2);
        assert!(sub.rays().is_empty());
        let mut slopes: Vec<f64> = sub.points().iter().map(|p| p[0]).collect();
        slopes.sort_by(f64::total_cmp);
        assert_eq!(slopes, vec![-1.0, 1.0]);
    }

    #[test]
    fn subdifferential_sum_structure_at_boundary() {
        // delta_[0,1] + x at 0: {1} + cone{-1} = (-inf, 1].
        let sub = indicator_plus_identity().subdifferential(&vector(&[0.0])).unwrap();
        assert_eq!(sub.points().len(), 1);
        assert!((sub.points()[0][0] - 1.0).abs() < 1e-12);
        assert_eq!(sub.rays().len(), 1);
        assert!((sub.rays()[0][0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn outside_domain_is_rejected() {
        assert_eq!(
            indicator_01().subdifferential(&vector(&[2.0])).unwrap_err(),
            Error::OutsideDomain
        );
    }

    #[test]
    fn normal_cone_examples() {
        let omega = Polyhedron::interval(0.0, 1.0);
        let at0 = normal_cone(&omega, &vector(&[0.0])).unwrap();
        assert_eq!(at0.rays().len(), 1);
        assert!((at0.rays()[0][0] + 1.0).abs() < 1e-12);

        let interior = normal_cone(&omega, &vector(&[0.5])).unwrap();
        assert!(interior.rays().is_empty());

        let boxy = Polyhedron::from_box(&vector(&[0.0, 0.0]), &vector(&[1.0, 1.0]));
        let corner = normal_cone(&boxy, &vector(&[1.0, 1.0])).unwrap();
        assert_eq!(corner.rays().len(), 2);
        assert!(corner.rays().iter().any(|r| (r - vector(&[1.0, 0.0])).norm() < 1e-9));
        assert!(corner.rays().iter().any(|r| (r - vector(&[0.0, 1.0])).norm() < 1e-9));
    }

    #[test]
    fn eps_normal_membership_examples() {
        let omega = Polyhedron::interval(0.0, 1.0);
        // N_1(0; [0,1]) = (-inf, 1] contains 1.
        assert!(eps_normal_membership(&omega, &vector(&[0.0]), 1.0, &vector(&[1.0]), Norm::Euclidean)
            .unwrap());
        // Interior: N = {0}, so 0.1 is not a 0-normal.
        assert!(!eps_normal_membership(&omega, &vector(&[0.5]), 0.0, &vector(&[0.1]), Norm::Euclidean)
            .unwrap());
        // 0.6 is farther than 0.5 from (-inf, 0].
        assert!(!eps_normal_membership(&omega, &vector(&[0.0]), 0.5, &vector(&[0.6]), Norm::Euclidean)
            .unwrap());
    }

    #[test]
    fn psd_validation() {
        let bad = ConvexFunction::new(
            Some(DMatrix::from_element(1, 1, -1.0)),
            vec![AffinePiece::new(vector(&[0.0]), 0.0)],
            Polyhedron::full_space(1),
            Norm::Euclidean,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn quadratic_evaluation() {
        // f(x) = x^2 via Q = [2].
        let f = ConvexFunction::new(
            Some(DMatrix::from_element(1, 1, 2.0)),
            vec![AffinePiece::new(vector(&[0.0]), 0.0)],
            Polyhedron::full_space(1),
            Norm::Euclidean,
        )
        .unwrap();
        assert!((f.evaluate(&vector(&[3.0])) - 9.0).abs() < 1e-12);
        let sub = f.subdifferential(&vector(&[3.0])).unwrap();
        assert_eq!(sub.points().len(), 1);
        assert!((sub.points()[0][0] - 6.0).abs() < 1e-12);
    }
}
