//! Exact small-dimension polyhedral geometry.
//!
//! Points live in R^n with n <= 4 (see [`crate::tol::DIM_CAP`]). Sets come in
//! two flavours: [`Polyhedron`] in half-space form and
//! [`GeneralizedPolyhedron`] in generator form `conv(points) + cone(rays)`.
//! Everything here is an immutable value and every operation is pure.

mod genpoly;
pub(crate) mod linprog;
mod minnorm;
mod polyhedron;

pub use genpoly::GeneralizedPolyhedron;
pub use minnorm::{distance_to_set, min_norm_point, project, set_distance};
pub use polyhedron::{Halfspace, Polyhedron};

use crate::error::{Error, Result};
use nalgebra::DVector;

/// Ambient point/direction in R^n. Coordinates are dimensionless.
pub type Vector = DVector<f64>;

/// Convenience constructor from a slice.
pub fn vector(coords: &[f64]) -> Vector {
    Vector::from_column_slice(coords)
}

/// Rejects NaN/Inf coordinates.
pub fn check_finite(v: &Vector) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidFunction("non-finite coordinate".into()))
    }
}

/// Norm kind, fixed once per problem instance.
///
/// The dual pairing is `l1 <-> linf`; `euclidean` is self-dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    Euclidean,
    L1,
    Linf,
}

impl Norm {
    pub fn value(&self, v: &Vector) -> f64 {
        match self {
            Norm::Euclidean => v.norm(),
            Norm::L1 => v.iter().map(|c| c.abs()).sum(),
            Norm::Linf => v.iter().fold(0.0, |m, c| m.max(c.abs())),
        }
    }

    pub fn dual(&self) -> Norm {
        match self {
            Norm::Euclidean => Norm::Euclidean,
            Norm::L1 => Norm::Linf,
            Norm::Linf => Norm::L1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Norm::Euclidean => "euclidean",
            Norm::L1 => "l1",
            Norm::Linf => "linf",
        }
    }

    /// Whether [`Norm::ball`] is an exact description of the closed ball in
    /// dimension `n`. Only the euclidean ball in n >= 2 is approximate.
    pub fn ball_is_exact(&self, n: usize) -> bool {
        !matches!(self, Norm::Euclidean) || n <= 1
    }

    /// Closed ball `{x : ||x - center|| <= r}` in half-space form.
    ///
    /// For `l1` and `linf` (and euclidean in 1-D) the description is exact.
    /// The euclidean ball in n >= 2 is not polyhedral; we return the
    /// circumscribed polytope cut by the tangent half-spaces at every
    /// direction in {-1,0,1}^n \ {0}, so the result always contains the true
    /// ball. Callers that refute on the approximation must validate their
    /// witnesses against the true ball.
    pub fn ball(&self, center: &Vector, r: f64) -> Polyhedron {
        let n = center.len();
        let mut halfspaces = Vec::new();
        match self {
            Norm::Linf => {
                for k in 0..n {
                    let mut e = Vector::zeros(n);
                    e[k] = 1.0;
                    halfspaces.push(Halfspace::new(e.clone(), center[k] + r));
                    halfspaces.push(Halfspace::new(-e, -(center[k] - r)));
                }
            }
            Norm::L1 => {
                for bits in 0..(1u32 << n) {
                    let mut s = Vector::zeros(n);
                    for k in 0..n {
                        s[k] = if bits >> k & 1 == 1 { 1.0 } else { -1.0 };
                    }
                    let offset = s.dot(center) + r;
                    halfspaces.push(Halfspace::new(s, offset));
                }
            }
            Norm::Euclidean => {
                for pattern in sign_patterns(n) {
                    let u = Vector::from_column_slice(&pattern);
                    let norm = u.norm();
                    if norm == 0.0 {
                        continue;
                    }
                    let u = u / norm;
                    let offset = u.dot(center) + r;
                    halfspaces.push(Halfspace::new(u, offset));
                }
            }
        }
        Polyhedron::new(halfspaces)
    }
}

/// All vectors in {-1,0,1}^n.
fn sign_patterns(n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut pattern = vec![0.0; n];
    fn rec(k: usize, n: usize, pattern: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if k == n {
            out.push(pattern.clone());
            return;
        }
        for s in [-1.0, 0.0, 1.0] {
            pattern[k] = s;
            rec(k + 1, n, pattern, out);
        }
    }
    rec(0, n, &mut pattern, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_values() {
        let v = vector(&[3.0, -4.0]);
        assert_eq!(Norm::Euclidean.value(&v), 5.0);
        assert_eq!(Norm::L1.value(&v), 7.0);
        assert_eq!(Norm::Linf.value(&v), 4.0);
    }

    #[test]
    fn dual_pairing() {
        assert_eq!(Norm::L1.dual(), Norm::Linf);
        assert_eq!(Norm::Linf.dual(), Norm::L1);
        assert_eq!(Norm::Euclidean.dual(), Norm::Euclidean);
    }

    #[test]
    fn linf_ball_is_box() {
        let ball = Norm::Linf.ball(&vector(&[0.0, 0.0]), 1.0);
        assert!(ball.contains(&vector(&[1.0, 1.0]), 1e-9));
        assert!(!ball.contains(&vector(&[1.0, 1.1]), 1e-9));
    }

    #[test]
    fn l1_ball_is_cross_polytope() {
        let ball = Norm::L1.ball(&vector(&[0.0, 0.0]), 1.0);
        assert!(ball.contains(&vector(&[0.5, 0.5]), 1e-9));
        assert!(!ball.contains(&vector(&[0.6, 0.5]), 1e-9));
    }

    #[test]
    fn euclidean_ball_1d_exact() {
        let ball = Norm::Euclidean.ball(&vector(&[0.5]), 0.5);
        assert!(ball.contains(&vector(&[1.0]), 1e-9));
        assert!(!ball.contains(&vector(&[1.0 + 1e-6]), 1e-9));
    }

    #[test]
    fn euclidean_ball_2d_circumscribes() {
        let ball = Norm::Euclidean.ball(&vector(&[0.0, 0.0]), 1.0);
        for angle in 0..16 {
            let t = angle as f64 * std::f64::consts::TAU / 16.0;
            assert!(ball.contains(&vector(&[t.cos(), t.sin()]), 1e-9));
        }
    }
}
