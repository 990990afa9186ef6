//! Dense two-phase primal simplex for the small linear programs behind
//! window acceptance: gauge minimization and convex-hull membership.
//! Problems stay below a few dozen rows, so a plain tableau with Bland's
//! anti-cycling rule is both simple and fast enough.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;

pub(crate) struct LpSolution {
    pub objective: f64,
    /// Structural variable values at the optimum; read by the unit tests.
    #[cfg_attr(not(test), allow(dead_code))]
    pub x: Vec<f64>,
}

/// Run phase 1 on `A x = b`, `x >= 0` with `n` structural columns, returning
/// the tableau, basis, and the phase-1 optimum (the L1 infeasibility defect).
fn phase1(a: &[Vec<f64>], b: &[f64], n: usize) -> Result<(Vec<Vec<f64>>, Vec<usize>, f64)> {
    let m = a.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("lp dimensions disagree".into()));
    }

    // Tableau columns: n structural, m artificial, then the rhs.
    let cols = n + m + 1;
    let rhs = n + m;
    let mut t = vec![vec![0.0; cols]; m];
    let mut basis = vec![0usize; m];
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = flip * a[i][j];
        }
        t[i][rhs] = flip * b[i];
        t[i][n + i] = 1.0;
        basis[i] = n + i;
    }

    let mut phase1_cost = vec![0.0; n + m];
    for j in n..n + m {
        phase1_cost[j] = 1.0;
    }
    let mut obj = reduced_costs(&t, &basis, &phase1_cost, cols);
    pivot_to_optimum(&mut t, &mut basis, &mut obj, n + m, n + m)?;
    let defect = -obj[rhs];
    Ok((t, basis, defect))
}

/// Smallest total artificial slack for `A x = b`, `x >= 0`: zero (within
/// solver tolerance) exactly when the system is feasible, and otherwise a
/// measure of how far `b` is from the feasible cone. Used for convex-hull
/// membership where "infeasible" is an answer, not an error.
pub(crate) fn feasibility_defect(a: &[Vec<f64>], b: &[f64], n: usize) -> Result<f64> {
    let (_, _, defect) = phase1(a, b, n)?;
    Ok(defect)
}

/// Minimize `c . x` subject to `A x = b`, `x >= 0`.
///
/// Rows of `a` must all have length `c.len()`. Returns an error when the
/// program is infeasible or unbounded, or when the pivot cap is hit (which
/// a well-posed gauge problem never does).
pub(crate) fn solve_min(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let m = a.len();
    let n = c.len();
    let (mut t, mut basis, defect) = phase1(a, b, n)?;
    let cols = n + m + 1;
    let rhs = n + m;
    if defect > FEAS_TOL {
        return Err(Error::InvalidInput("lp infeasible".into()));
    }

    // Drive leftover artificials out of the basis where a structural pivot
    // exists; rows with none are redundant and stay inert in phase 2
    // because artificial columns are barred from entering. The scratch
    // objective row is all zeros, which pivot() leaves untouched.
    let mut obj = vec![0.0; cols];
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[i][j].abs() > PIVOT_TOL) {
                pivot(&mut t, &mut basis, &mut obj, i, j);
            }
        }
    }

    // Phase 2: the real objective, artificials barred.
    let mut phase2_cost = vec![0.0; n + m];
    phase2_cost[..n].copy_from_slice(c);
    obj = reduced_costs(&t, &basis, &phase2_cost, cols);
    pivot_to_optimum(&mut t, &mut basis, &mut obj, n, n + m)?;

    let mut x = vec![0.0; n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][rhs];
        }
    }
    Ok(LpSolution {
        objective: -obj[rhs],
        x,
    })
}

/// Build the reduced-cost row `r_j = c_j - c_B B^-1 A_j`, with the negated
/// objective value in the rhs slot.
fn reduced_costs(t: &[Vec<f64>], basis: &[usize], cost: &[f64], cols: usize) -> Vec<f64> {
    let mut obj = vec![0.0; cols];
    obj[..cost.len()].copy_from_slice(cost);
    for (i, &bi) in basis.iter().enumerate() {
        let cb = cost[bi];
        if cb != 0.0 {
            for j in 0..cols {
                obj[j] -= cb * t[i][j];
            }
        }
    }
    obj
}

/// Bland's rule: enter the lowest-index improving column among the first
/// `enterable` ones, leave by minimum ratio with lowest basis index on ties.
fn pivot_to_optimum(
    t: &mut [Vec<f64>],
    basis: &mut [usize],
    obj: &mut Vec<f64>,
    enterable: usize,
    rhs: usize,
) -> Result<()> {
    let m = t.len();
    let cap = 2000 * (m + enterable + 1);
    for _ in 0..cap {
        let Some(enter) = (0..enterable).find(|&j| obj[j] < -COST_TOL) else {
            return Ok(());
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][enter] > PIVOT_TOL {
                let ratio = t[i][rhs] / t[i][enter];
                let better = match leave {
                    None => true,
                    Some(cur) => {
                        ratio < best - PIVOT_TOL
                            || ((ratio - best).abs() <= PIVOT_TOL && basis[i] < basis[cur])
                    }
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            return Err(Error::InvalidInput("lp unbounded".into()));
        };
        pivot(t, basis, obj, leave, enter);
    }
    Err(Error::InvalidInput("lp pivot cap exceeded".into()))
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], obj: &mut [f64], row: usize, col: usize) {
    let cols = t[row].len();
    let p = t[row][col];
    for j in 0..cols {
        t[row][j] /= p;
    }
    t[row][col] = 1.0;
    for i in 0..t.len() {
        if i != row {
            let f = t[i][col];
            if f != 0.0 {
                for j in 0..cols {
                    t[i][j] -= f * t[row][j];
                }
                t[i][col] = 0.0;
            }
        }
    }
    let f = obj[col];
    if f != 0.0 {
        for j in 0..cols {
            obj[j] -= f * t[row][j];
        }
        obj[col] = 0.0;
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_variable() {
        // min x subject to x = 3.
        let sol = solve_min(&[vec![1.0]], &[3.0], &[1.0]).unwrap();
        assert!((sol.objective - 3.0).abs() < 1e-12);
        assert!((sol.x[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn small_two_variable_program() {
        // min x + 2y subject to x + y = 4, x - y = 0 gives x = y = 2.
        let a = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        let sol = solve_min(&a, &[4.0, 0.0], &[1.0, 2.0]).unwrap();
        assert!((sol.objective - 6.0).abs() < 1e-10);
        assert!((sol.x[0] - 2.0).abs() < 1e-10 && (sol.x[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn infeasible_is_reported() {
        // x = 1 and x = 2 cannot both hold with one variable.
        let a = vec![vec![1.0], vec![1.0]];
        assert!(solve_min(&a, &[1.0, 2.0], &[0.0]).is_err());
    }

    #[test]
    fn unbounded_is_reported() {
        // min -x subject to x - y = 0: both can grow without bound.
        let a = vec![vec![1.0, -1.0]];
        assert!(solve_min(&a, &[0.0], &[-1.0, 0.0]).is_err());
    }

    #[test]
    fn degenerate_rows_terminate() {
        // Several zero right-hand sides force degenerate pivots; Bland's
        // rule must still reach the optimum.
        let a = vec![
            vec![1.0, 1.0, 0.0, 0.0],
            vec![1.0, -1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 1.0],
        ];
        let sol = solve_min(&a, &[0.0, 0.0, 1.0], &[1.0, 1.0, 0.5, 1.0]).unwrap();
        assert!((sol.objective - 0.5).abs() < 1e-10);
    }

    #[test]
    fn feasibility_defect_distinguishes() {
        // x1 + x2 = 1, x1 - x2 = 0 is feasible.
        let a = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        assert!(feasibility_defect(&a, &[1.0, 0.0], 2).unwrap() < 1e-9);
        // x = -1 with x >= 0 misses by exactly 1.
        let d = feasibility_defect(&[vec![1.0]], &[-1.0], 1).unwrap();
        assert!((d - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gauge_of_a_square_via_lp() {
        // The zonotope on generators 2e_1, 2e_2 (parameters in [-1/2, 1/2])
        // is the square [-1,1]^2, whose gauge is max(|x|, |y|). Encoded as
        // d = G v - (lambda/2) G 1 with v in [0, lambda]^2 via slacks w.
        // Variables: v1, v2, w1, w2, lambda.
        let gens = [[2.0, 0.0], [0.0, 2.0]];
        let a = vec![
            vec![gens[0][0], gens[1][0], 0.0, 0.0, -(gens[0][0] + gens[1][0]) / 2.0],
            vec![gens[0][1], gens[1][1], 0.0, 0.0, -(gens[0][1] + gens[1][1]) / 2.0],
            vec![1.0, 0.0, 1.0, 0.0, -1.0],
            vec![0.0, 1.0, 0.0, 1.0, -1.0],
        ];
        let c = vec![0.0, 0.0, 0.0, 0.0, 1.0];
        for (d, expect) in [([1.0, 0.5], 1.0), ([0.25, -0.75], 0.75), ([0.0, 0.0], 0.0)] {
            let sol = solve_min(&a, &[d[0], d[1], 0.0, 0.0], &c).unwrap();
            assert!(
                (sol.objective - expect).abs() < 1e-10,
                "gauge({d:?}) = {}, want {expect}",
                sol.objective
            );
        }
    }
}
