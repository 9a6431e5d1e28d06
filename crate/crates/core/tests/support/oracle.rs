//! Exhaustive-support oracle for `{A z = b, z >= 0}`.
//!
//! If the system is feasible it has a solution supported on linearly
//! independent columns (Carathéodory), so it suffices to try every column
//! subset of size <= rank, solve the restricted square-or-tall system by
//! Gaussian elimination, and check the solution for non-negativity.

#![allow(dead_code, clippy::needless_range_loop, clippy::explicit_counter_loop)]

const PIVOT_EPS: f64 = 1e-10;
const FEAS_EPS: f64 = 1e-9;

/// `a[i][j]`, row-major.
pub fn brute_force_feasible(a: &[Vec<f64>], b: &[f64]) -> bool {
    let d = b.len();
    let n = a.first().map_or(0, Vec::len);
    if b.iter().all(|&v| v.abs() <= FEAS_EPS) {
        return true;
    }
    let max_k = d.min(n);
    let mut subset = Vec::new();
    for k in 1..=max_k {
        if search(a, b, n, k, 0, &mut subset) {
            return true;
        }
    }
    false
}

fn search(a: &[Vec<f64>], b: &[f64], n: usize, k: usize, start: usize, subset: &mut Vec<usize>) -> bool {
    if subset.len() == k {
        return match solve_restricted(a, b, subset) {
            Some(w) => w.iter().all(|&x| x >= -FEAS_EPS),
            None => false,
        };
    }
    for j in start..n {
        subset.push(j);
        if search(a, b, n, k, j + 1, subset) {
            return true;
        }
        subset.pop();
    }
    false
}

/// Unique solution of `A[:, cols] w = b` when the columns are independent and
/// the system is consistent.
pub fn solve_restricted(a: &[Vec<f64>], b: &[f64], cols: &[usize]) -> Option<Vec<f64>> {
    let d = b.len();
    let k = cols.len();
    let mut m: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut row: Vec<f64> = cols.iter().map(|&j| a[i][j]).collect();
            row.push(b[i]);
            row
        })
        .collect();
    let mut row = 0;
    for col in 0..k {
        let pivot = (row..d).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[pivot][col].abs() <= PIVOT_EPS {
            return None; // dependent columns
        }
        m.swap(row, pivot);
        for r in 0..d {
            if r != row {
                let f = m[r][col] / m[row][col];
                if f != 0.0 {
                    for c in col..=k {
                        m[r][c] -= f * m[row][c];
                    }
                }
            }
        }
        row += 1;
    }
    for r in k..d {
        if m[r][k].abs() > FEAS_EPS {
            return None; // inconsistent
        }
    }
    Some((0..k).map(|i| m[i][k] / m[i][i]).collect())
}

/// Numerical rank via singular values above `tol`.
pub fn rank(a: &[Vec<f64>], cols: &[usize], tol: f64) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let d = a.len();
    let mat = nalgebra::DMatrix::from_fn(d, cols.len(), |i, k| a[i][cols[k]]);
    mat.singular_values().iter().filter(|&&s| s > tol).count()
}
