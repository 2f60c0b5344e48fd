//! A small dense two-phase simplex for the capacity membership test.
//!
//! Solves `min c·x  s.t.  A x = b, x ≥ 0` with Bland's rule, so the pivot
//! sequence (and hence the output) is deterministic. Problem sizes here are
//! tens of rows by a few hundred columns; no sparsity or scaling tricks are
//! needed.

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value `c·x` (meaningful only when optimal).
    pub objective: f64,
    pub x: Vec<f64>,
}

/// Minimise `c·x` subject to `A x = b`, `x ≥ 0`.
pub fn solve_equality_form(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> LpSolution {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    // Tableau over the original variables plus one artificial per row:
    // columns [0, n) original, [n, n+m) artificial, last column RHS.
    let cols = n + m + 1;
    let mut t = vec![vec![0.0f64; cols]; m];
    let mut basis = vec![0usize; m];
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = flip * a[i][j];
        }
        t[i][n + i] = 1.0;
        t[i][cols - 1] = flip * b[i];
        basis[i] = n + i;
    }

    // Phase 1: minimise the sum of artificials.
    let mut cost1 = vec![0.0f64; cols];
    for j in n..n + m {
        cost1[j] = 1.0;
    }
    let mut z1 = reduced_cost_row(&t, &basis, &cost1);
    if !pivot_to_optimal(&mut t, &mut basis, &mut z1, n + m) {
        // Phase 1 is always bounded below by 0.
        unreachable!("phase 1 cannot be unbounded");
    }
    if z1[cols - 1] < -EPS {
        return LpSolution { status: LpStatus::Infeasible, objective: f64::NAN, x: vec![0.0; n] };
    }
    // Drive remaining artificials out of the basis where possible.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[i][j].abs() > EPS) {
                pivot(&mut t, &mut basis, &mut z1, i, j);
            }
            // A row whose coefficients are all ~0 is redundant; its
            // artificial stays basic at value 0, which is harmless.
        }
    }

    // Phase 2: original objective, artificial columns frozen.
    let mut cost2 = vec![0.0f64; cols];
    cost2[..n].copy_from_slice(c);
    let mut z2 = reduced_cost_row(&t, &basis, &cost2);
    if !pivot_to_optimal(&mut t, &mut basis, &mut z2, n) {
        return LpSolution { status: LpStatus::Unbounded, objective: f64::NEG_INFINITY, x: vec![0.0; n] };
    }

    let cols_rhs = cols - 1;
    let mut x = vec![0.0f64; n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][cols_rhs];
        }
    }
    LpSolution { status: LpStatus::Optimal, objective: -z2[cols_rhs], x }
}

/// Reduced costs `c_j − c_B·B⁻¹A_j` with the negated objective in the RHS
/// cell.
fn reduced_cost_row(t: &[Vec<f64>], basis: &[usize], cost: &[f64]) -> Vec<f64> {
    let cols = cost.len();
    let mut z = cost.to_vec();
    for (i, &bi) in basis.iter().enumerate() {
        let cb = cost[bi];
        if cb != 0.0 {
            for j in 0..cols {
                z[j] -= cb * t[i][j];
            }
        }
    }
    // cost[] has a trailing 0 for the RHS column, so z[cols-1] now holds
    // −(objective value).
    z
}

/// Bland-rule pivoting until optimal. Columns `>= col_limit` are ineligible
/// to enter. Returns false when unbounded.
fn pivot_to_optimal(t: &mut [Vec<f64>], basis: &mut [usize], z: &mut [f64], col_limit: usize) -> bool {
    let m = t.len();
    let rhs = z.len() - 1;
    loop {
        let Some(enter) = (0..col_limit).find(|&j| z[j] < -EPS) else {
            return true;
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][enter] > EPS {
                let ratio = t[i][rhs] / t[i][enter];
                let better = match leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - EPS || (ratio < lr + EPS && basis[i] < basis[li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return false;
        };
        pivot(t, basis, z, row, enter);
    }
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], z: &mut [f64], row: usize, col: usize) {
    let cols = z.len();
    let inv = 1.0 / t[row][col];
    for j in 0..cols {
        t[row][j] *= inv;
    }
    t[row][col] = 1.0;
    for i in 0..t.len() {
        if i != row && t[i][col].abs() > 0.0 {
            let factor = t[i][col];
            for j in 0..cols {
                t[i][j] -= factor * t[row][j];
            }
            t[i][col] = 0.0;
        }
    }
    let factor = z[col];
    if factor.abs() > 0.0 {
        for j in 0..cols {
            z[j] -= factor * t[row][j];
        }
        z[col] = 0.0;
    }
    basis[row] = col;
}
