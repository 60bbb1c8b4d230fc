//! Dense two-phase simplex for the tiny linear programs that back
//! feasibility tests, relative-interior points and polyhedral-norm
//! minimizations. Bland's rule throughout, so the iteration cannot cycle.

use nalgebra::{DMatrix, DVector};

const PIVOT_TOL: f64 = 1e-10;
const COST_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Rel {
    Le,
    Ge,
    Eq,
}

/// Linear program `minimize c'x` over declared variables.
///
/// Variables are free by default; call `nonneg` to constrain one to be
/// >= 0. Free variables are split internally.
#[derive(Debug, Clone)]
pub(crate) struct LpBuilder {
    n: usize,
    nonneg: Vec<bool>,
    objective: Vec<f64>,
    rows: Vec<(Vec<f64>, Rel, f64)>,
}

#[derive(Debug, Clone)]
pub(crate) enum LpStatus {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpBuilder {
    pub fn new(n_vars: usize) -> Self {
        LpBuilder {
            n: n_vars,
            nonneg: vec![false; n_vars],
            objective: vec![0.0; n_vars],
            rows: Vec::new(),
        }
    }

    pub fn nonneg(&mut self, var: usize) -> &mut Self {
        self.nonneg[var] = true;
        self
    }

    pub fn all_nonneg(&mut self) -> &mut Self {
        self.nonneg.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn minimize(&mut self, coeffs: &[f64]) -> &mut Self {
        self.objective = coeffs.to_vec();
        self
    }

    pub fn maximize(&mut self, coeffs: &[f64]) -> &mut Self {
        self.objective = coeffs.iter().map(|c| -c).collect();
        self
    }

    pub fn row(&mut self, coeffs: &[f64], rel: Rel, rhs: f64) -> &mut Self {
        debug_assert_eq!(coeffs.len(), self.n);
        self.rows.push((coeffs.to_vec(), rel, rhs));
        self
    }

    /// Solve the program. The reported `value` is for the `minimize`
    /// objective; callers of `maximize` must negate it.
    pub fn solve(&self) -> LpStatus {
        // Standard form: split free vars, add one slack per inequality.
        let mut col_of_var = Vec::with_capacity(self.n); // (plus column, optional minus column)
        let mut n_std = 0usize;
        for &nn in &self.nonneg {
            if nn {
                col_of_var.push((n_std, None));
                n_std += 1;
            } else {
                col_of_var.push((n_std, Some(n_std + 1)));
                n_std += 2;
            }
        }
        let n_slack = self.rows.iter().filter(|(_, rel, _)| *rel != Rel::Eq).count();
        let m = self.rows.len();
        let total = n_std + n_slack;

        let mut a = DMatrix::zeros(m, total);
        let mut b = DVector::zeros(m);
        let mut cost = DVector::zeros(total);
        for (var, &(plus, minus)) in col_of_var.iter().enumerate() {
            cost[plus] = self.objective[var];
            if let Some(minus) = minus {
                cost[minus] = -self.objective[var];
            }
        }
        let mut slack_idx = n_std;
        for (i, (coeffs, rel, rhs)) in self.rows.iter().enumerate() {
            for (var, &c) in coeffs.iter().enumerate() {
                let (plus, minus) = col_of_var[var];
                a[(i, plus)] = c;
                if let Some(minus) = minus {
                    a[(i, minus)] = -c;
                }
            }
            b[i] = *rhs;
            match rel {
                Rel::Le => {
                    a[(i, slack_idx)] = 1.0;
                    slack_idx += 1;
                }
                Rel::Ge => {
                    a[(i, slack_idx)] = -1.0;
                    slack_idx += 1;
                }
                Rel::Eq => {}
            }
        }
        // Simplex needs b >= 0.
        for i in 0..m {
            if b[i] < 0.0 {
                for j in 0..total {
                    a[(i, j)] = -a[(i, j)];
                }
                b[i] = -b[i];
            }
        }

        match simplex_two_phase(a, b, cost) {
            SimplexOutcome::Optimal { x, value } => {
                let mut user = vec![0.0; self.n];
                for (var, &(plus, minus)) in col_of_var.iter().enumerate() {
                    user[var] = x[plus] - minus.map_or(0.0, |mi| x[mi]);
                }
                LpStatus::Optimal { x: user, value }
            }
            SimplexOutcome::Infeasible => LpStatus::Infeasible,
            SimplexOutcome::Unbounded => LpStatus::Unbounded,
        }
    }
}

enum SimplexOutcome {
    Optimal { x: DVector<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

/// Two-phase simplex on `min c'x, Ax = b, x >= 0` with `b >= 0`.
fn simplex_two_phase(a: DMatrix<f64>, b: DVector<f64>, cost: DVector<f64>) -> SimplexOutcome {
    let m = a.nrows();
    let n = a.ncols();

    // Phase 1 tableau with artificial identity basis.
    let mut t = DMatrix::zeros(m, n + m);
    t.view_mut((0, 0), (m, n)).copy_from(&a);
    for i in 0..m {
        t[(i, n + i)] = 1.0;
    }
    let mut rhs = b;
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut phase1_cost = DVector::zeros(n + m);
    for j in n..n + m {
        phase1_cost[j] = 1.0;
    }
    if iterate(&mut t, &mut rhs, &mut basis, &phase1_cost).is_err() {
        // Phase 1 objective is bounded below by zero.
        return SimplexOutcome::Infeasible;
    }
    let phase1_value: f64 = basis
        .iter()
        .enumerate()
        .map(|(i, &j)| phase1_cost[j] * rhs[i])
        .sum();
    if phase1_value > 1e-7 {
        return SimplexOutcome::Infeasible;
    }

    // Drive remaining artificial variables out of the basis.
    let mut drop_rows = Vec::new();
    for i in 0..m {
        if basis[i] >= n {
            let col = (0..n).find(|&j| t[(i, j)].abs() > PIVOT_TOL);
            match col {
                Some(j) => pivot(&mut t, &mut rhs, &mut basis, i, j),
                None => drop_rows.push(i), // redundant constraint
            }
        }
    }
    let keep: Vec<usize> = (0..m).filter(|i| !drop_rows.contains(i)).collect();
    let mut t2 = DMatrix::zeros(keep.len(), n);
    let mut rhs2 = DVector::zeros(keep.len());
    let mut basis2 = Vec::with_capacity(keep.len());
    for (new_i, &old_i) in keep.iter().enumerate() {
        for j in 0..n {
            t2[(new_i, j)] = t[(old_i, j)];
        }
        rhs2[new_i] = rhs[old_i];
        basis2.push(basis[old_i]);
    }

    // Phase 2.
    if iterate(&mut t2, &mut rhs2, &mut basis2, &cost).is_err() {
        return SimplexOutcome::Unbounded;
    }
    let mut x = DVector::zeros(n);
    for (i, &j) in basis2.iter().enumerate() {
        x[j] = rhs2[i].max(0.0);
    }
    let value = cost.dot(&x);
    SimplexOutcome::Optimal { x, value }
}

/// Simplex iterations with Bland's rule. Errors on unboundedness.
fn iterate(
    t: &mut DMatrix<f64>,
    rhs: &mut DVector<f64>,
    basis: &mut Vec<usize>,
    cost: &DVector<f64>,
) -> Result<(), ()> {
    let m = t.nrows();
    let n = t.ncols();
    loop {
        // Reduced costs r_j = c_j - c_B' T_j (tableau is kept in canonical
        // form, so T_j is already B^{-1} A_j).
        let mut entering = None;
        for j in 0..n {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = cost[j];
            for i in 0..m {
                rc -= cost[basis[i]] * t[(i, j)];
            }
            if rc < -COST_TOL {
                entering = Some(j);
                break; // Bland: smallest index
            }
        }
        let Some(j) = entering else { return Ok(()) };

        let mut leaving: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[(i, j)] > PIVOT_TOL {
                let ratio = rhs[i] / t[(i, j)];
                match leaving {
                    None => leaving = Some((i, ratio)),
                    Some((best_i, best)) => {
                        if ratio < best - 1e-12
                            || (ratio < best + 1e-12 && basis[i] < basis[best_i])
                        {
                            leaving = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((i, _)) = leaving else { return Err(()) };
        pivot(t, rhs, basis, i, j);
    }
}

fn pivot(t: &mut DMatrix<f64>, rhs: &mut DVector<f64>, basis: &mut [usize], row: usize, col: usize) {
    let m = t.nrows();
    let n = t.ncols();
    let p = t[(row, col)];
    for j in 0..n {
        t[(row, j)] /= p;
    }
    rhs[row] /= p;
    for i in 0..m {
        if i != row {
            let factor = t[(i, col)];
            if factor != 0.0 {
                for j in 0..n {
                    t[(i, j)] -= factor * t[(row, j)];
                }
                rhs[i] -= factor * rhs[row];
                rhs[i] = if rhs[i] < 0.0 && rhs[i] > -1e-11 { 0.0 } else { rhs[i] };
            }
        }
    }
    basis[row] = col;
}
