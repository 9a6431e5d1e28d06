//! Basic feasible solutions of `{ A z = b, z >= 0 }`.
//!
//! Phase-one simplex on a dense tableau: one artificial variable per row
//! (rows with negative right-hand side are negated first, so the all-artificial
//! basis is feasible), minimizing the sum of artificials. The instance is
//! feasible iff that minimum is within tolerance of zero. Artificials left in
//! the basis at zero level are pivoted out where possible; rows where no
//! pivot exists are linearly redundant and are dropped.
//!
//! Entering columns are chosen by Dantzig's rule until a run of degenerate
//! pivots is seen, after which Bland's rule takes over for the rest of the
//! solve.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Dantzig pricing, switching to Bland after a degenerate streak.
    DantzigThenBland,
    /// Bland's rule from the first pivot.
    Bland,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOptions {
    /// Relative feasibility tolerance; the absolute bound is `tol * max(1, |b|_inf)`.
    pub feasibility_tol: f64,
    /// Pivot elements below this (relative to `max |A|`) are never used.
    pub pivot_floor: f64,
    /// Weights below this are dropped from the support.
    pub prune_threshold: f64,
    pub pivot_rule: PivotRule,
    /// Consecutive degenerate pivots before switching to Bland; `None` means `10 d`.
    pub bland_after: Option<usize>,
    /// Iteration cap is `iteration_cap_factor * (n + d)`.
    pub iteration_cap_factor: usize,
    pub time_limit: Option<Duration>,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            feasibility_tol: 1e-9,
            pivot_floor: 1e-11,
            prune_threshold: 1e-12,
            pivot_rule: PivotRule::DantzigThenBland,
            bland_after: None,
            iteration_cap_factor: 50,
            time_limit: None,
        }
    }
}

impl LpOptions {
    pub fn with_tolerance(feasibility_tol: f64) -> Self {
        LpOptions {
            feasibility_tol,
            ..LpOptions::default()
        }
    }
}

/// `d x n` system with column-major storage; column `j` is `phi(x_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpInstance {
    rows: usize,
    cols: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl LpInstance {
    pub fn new(rows: usize, cols: usize, a_col_major: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(
                "linear program needs at least one row and one column".into(),
            ));
        }
        if a_col_major.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "constraint matrix entries",
                expected: rows * cols,
                found: a_col_major.len(),
            });
        }
        if b.len() != rows {
            return Err(Error::DimensionMismatch {
                context: "right-hand side length",
                expected: rows,
                found: b.len(),
            });
        }
        if a_col_major.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("linear program data"));
        }
        Ok(LpInstance {
            rows,
            cols,
            a: a_col_major,
            b,
        })
    }

    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C], b: Vec<f64>) -> Result<Self> {
        let rows = b.len();
        let mut a = Vec::with_capacity(rows * columns.len());
        for col in columns {
            let col = col.as_ref();
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    context: "constraint column length",
                    expected: rows,
                    found: col.len(),
                });
            }
            a.extend_from_slice(col);
        }
        LpInstance::new(rows, columns.len(), a, b)
    }

    /// Builds an instance from row-major nested rows (`A[i][j]`).
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], b: Vec<f64>) -> Result<Self> {
        let d = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != n) {
            return Err(Error::InvalidInput("ragged constraint rows".into()));
        }
        let mut a = vec![0.0; d * n];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.as_ref().iter().enumerate() {
                a[j * d + i] = v;
            }
        }
        LpInstance::new(d, n, a, b)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.a[j * self.rows..(j + 1) * self.rows]
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.a[j * self.rows + i]
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn b_max_abs(&self) -> f64 {
        self.b.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Absolute feasibility bound `tol * max(1, |b|_inf)`.
    pub fn feasibility_bound(&self, tol: f64) -> f64 {
        tol * self.b_max_abs().max(1.0)
    }

    /// `max_i |sum_k A[i, support_k] w_k - b_i|`.
    pub fn residual(&self, support: &[usize], weights: &[f64]) -> f64 {
        let mut r = self.b.clone();
        for (&j, &w) in support.iter().zip(weights) {
            for (ri, &a) in r.iter_mut().zip(self.column(j)) {
                *ri -= a * w;
            }
        }
        r.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfsStatus {
    Feasible,
    Infeasible,
    NumericallyUnstable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BfsResult {
    pub status: BfsStatus,
    /// Column indices with strictly positive weight, ascending.
    pub support: Vec<usize>,
    pub weights: Vec<f64>,
    /// Max-norm of `A z - b` for the returned (or, if not feasible, current basic) solution.
    pub residual: f64,
    pub iterations: usize,
    pub phase_one_objective: f64,
    /// Rows found linearly dependent on the others.
    pub redundant_rows: Vec<usize>,
    pub switched_to_bland: bool,
    pub unstable_reason: Option<String>,
}

impl BfsResult {
    pub fn is_feasible(&self) -> bool {
        self.status == BfsStatus::Feasible
    }
}

pub fn find_bfs(instance: &LpInstance, options: &LpOptions) -> Result<BfsResult> {
    validate_options(options)?;
    Ok(Tableau::new(instance, options).solve(false))
}

/// Convex-cone membership of `b`; stops as soon as the phase-one objective is within tolerance.
pub fn membership_test(instance: &LpInstance, options: &LpOptions) -> Result<bool> {
    Ok(membership_status(instance, options)? == BfsStatus::Feasible)
}

pub fn membership_status(instance: &LpInstance, options: &LpOptions) -> Result<BfsStatus> {
    validate_options(options)?;
    Ok(Tableau::new(instance, options).solve(true).status)
}

fn validate_options(options: &LpOptions) -> Result<()> {
    let ok = |v: f64| v.is_finite() && v >= 0.0;
    if !(ok(options.feasibility_tol) && ok(options.pivot_floor) && ok(options.prune_threshold)) {
        return Err(Error::InvalidInput("LP tolerances must be finite and non-negative".into()));
    }
    if options.iteration_cap_factor == 0 {
        return Err(Error::InvalidInput("iteration cap factor must be positive".into()));
    }
    Ok(())
}

const ARTIFICIAL: usize = usize::MAX;

struct Tableau<'a> {
    inst: &'a LpInstance,
    opts: &'a LpOptions,
    d: usize,
    n: usize,
    width: usize,
    /// Row-major `d x (n + 1)`; last column is the right-hand side.
    t: Vec<f64>,
    /// Reduced costs for the `n` structural columns, then minus the objective.
    cost: Vec<f64>,
    /// Basic structural column per row, or `ARTIFICIAL`.
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    active: Vec<bool>,
    pivot_floor: f64,
    feas_bound: f64,
    iterations: usize,
    bland: bool,
    switched: bool,
}

enum Outcome {
    Optimal,
    EarlyFeasible,
    Unstable(String),
}

impl<'a> Tableau<'a> {
    fn new(inst: &'a LpInstance, opts: &'a LpOptions) -> Self {
        let d = inst.rows;
        let n = inst.cols;
        let width = n + 1;
        let mut t = vec![0.0; d * width];
        for i in 0..d {
            let sign = if inst.b[i] < 0.0 { -1.0 } else { 1.0 };
            let row = &mut t[i * width..(i + 1) * width];
            for (j, slot) in row[..n].iter_mut().enumerate() {
                *slot = sign * inst.a[j * d + i];
            }
            row[n] = sign * inst.b[i];
        }
        let mut cost = vec![0.0; width];
        for row in t.chunks_exact(width) {
            for (c, &v) in cost.iter_mut().zip(row) {
                *c -= v;
            }
        }
        let a_scale = inst.a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        Tableau {
            inst,
            opts,
            d,
            n,
            width,
            t,
            cost,
            basis: vec![ARTIFICIAL; d],
            is_basic: vec![false; n],
            active: vec![true; d],
            pivot_floor: opts.pivot_floor * a_scale,
            feas_bound: inst.feasibility_bound(opts.feasibility_tol),
            iterations: 0,
            bland: opts.pivot_rule == PivotRule::Bland,
            switched: false,
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.width + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.t[i * self.width + self.n]
    }

    fn objective(&self) -> f64 {
        (0..self.d)
            .filter(|&i| self.active[i] && self.basis[i] == ARTIFICIAL)
            .map(|i| self.rhs(i).max(0.0))
            .sum()
    }

    fn solve(mut self, membership_only: bool) -> BfsResult {
        let outcome = self.phase_one(membership_only);
        let objective = self.objective();
        let mut result = BfsResult {
            status: BfsStatus::NumericallyUnstable,
            support: Vec::new(),
            weights: Vec::new(),
            residual: f64::NAN,
            iterations: self.iterations,
            phase_one_objective: objective,
            redundant_rows: Vec::new(),
            switched_to_bland: self.switched,
            unstable_reason: None,
        };
        match outcome {
            Outcome::Unstable(reason) => {
                result.residual = self.current_residual();
                result.unstable_reason = Some(reason);
                return result;
            }
            Outcome::EarlyFeasible => {
                result.status = BfsStatus::Feasible;
                result.residual = self.current_residual();
                return result;
            }
            Outcome::Optimal => {}
        }
        if objective > self.feas_bound {
            result.status = BfsStatus::Infeasible;
            result.residual = self.current_residual();
            return result;
        }
        if membership_only {
            result.status = BfsStatus::Feasible;
            result.residual = self.current_residual();
            return result;
        }

        self.drive_out_artificials();
        result.redundant_rows = (0..self.d).filter(|&i| !self.active[i]).collect();
        result.iterations = self.iterations;

        let (support, weights) = self.extract();
        let residual = self.inst.residual(&support, &weights);
        let (support, weights, residual) = refine(self.inst, support, weights, residual);
        result.residual = residual;
        if support.len() > self.d {
            result.unstable_reason = Some("support larger than the number of rows".into());
        } else if residual.is_nan() || residual > self.feas_bound {
            result.unstable_reason = Some(format!(
                "extracted vertex has residual {residual:.3e} above {:.3e}",
                self.feas_bound
            ));
        } else {
            result.status = BfsStatus::Feasible;
        }
        result.support = support;
        result.weights = weights;
        result
    }

    fn phase_one(&mut self, membership_only: bool) -> Outcome {
        let cap = self.opts.iteration_cap_factor.saturating_mul(self.n + self.d);
        let bland_after = self.opts.bland_after.unwrap_or(10 * self.d).max(1);
        let started = Instant::now();
        // Once the objective is this small, further pivots only chase rounding noise.
        let stop_bound = if membership_only {
            self.feas_bound
        } else {
            self.feas_bound * 1e-4
        };
        let cost_tol = self.pivot_floor;
        let mut degenerate_run = 0usize;

        loop {
            if self.objective() <= stop_bound {
                return if membership_only {
                    Outcome::EarlyFeasible
                } else {
                    Outcome::Optimal
                };
            }
            if self.iterations >= cap {
                return Outcome::Unstable(format!("iteration cap {cap} reached"));
            }
            if let Some(limit) = self.opts.time_limit {
                if started.elapsed() > limit {
                    return Outcome::Unstable(format!("time limit {limit:?} reached"));
                }
            }

            let Some(q) = self.entering(cost_tol) else {
                return Outcome::Optimal;
            };
            let Some(p) = self.leaving(q) else {
                return Outcome::Unstable(format!(
                    "no admissible pivot in column {q} above the degeneracy floor"
                ));
            };
            let step = self.rhs(p) / self.at(p, q);
            self.pivot(p, q);
            self.iterations += 1;
            if !self.cost[self.n].is_finite() {
                return Outcome::Unstable("non-finite tableau entries".into());
            }

            if step <= 1e-14 * self.feas_bound.max(1.0) {
                degenerate_run += 1;
                if !self.bland && degenerate_run >= bland_after {
                    log::debug!("switching to Bland's rule after {degenerate_run} degenerate pivots");
                    self.bland = true;
                    self.switched = true;
                }
            } else {
                degenerate_run = 0;
            }
        }
    }

    fn entering(&self, cost_tol: f64) -> Option<usize> {
        let candidates = self.cost[..self.n]
            .iter()
            .enumerate()
            .filter(|&(j, &c)| c < -cost_tol && !self.is_basic[j]);
        if self.bland {
            candidates.map(|(j, _)| j).next()
        } else {
            candidates
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(j, _)| j)
        }
    }

    fn leaving(&self, q: usize) -> Option<usize> {
        let mut best_ratio = f64::INFINITY;
        for i in 0..self.d {
            let a = self.at(i, q);
            if self.active[i] && a > self.pivot_floor {
                best_ratio = best_ratio.min(self.rhs(i).max(0.0) / a);
            }
        }
        if !best_ratio.is_finite() {
            return None;
        }
        let slack = 1e-12 * best_ratio.max(1e-3);
        let mut chosen: Option<usize> = None;
        for i in 0..self.d {
            let a = self.at(i, q);
            if !(self.active[i] && a > self.pivot_floor) {
                continue;
            }
            if self.rhs(i).max(0.0) / a > best_ratio + slack {
                continue;
            }
            chosen = match chosen {
                None => Some(i),
                Some(c) if self.prefer_leaving(i, c, q) => Some(i),
                keep => keep,
            };
        }
        chosen
    }

    /// Tie-break between two rows of (near-)equal ratio.
    fn prefer_leaving(&self, i: usize, current: usize, q: usize) -> bool {
        let var_index = |r: usize| match self.basis[r] {
            ARTIFICIAL => self.n + r,
            j => j,
        };
        if self.bland {
            return var_index(i) < var_index(current);
        }
        let art_i = self.basis[i] == ARTIFICIAL;
        let art_c = self.basis[current] == ARTIFICIAL;
        if art_i != art_c {
            return art_i;
        }
        self.at(i, q) > self.at(current, q)
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let w = self.width;
        let inv = 1.0 / self.at(p, q);
        let (before, rest) = self.t.split_at_mut(p * w);
        let (prow, after) = rest.split_at_mut(w);
        for v in prow.iter_mut() {
            *v *= inv;
        }
        prow[q] = 1.0;
        let eliminate = |row: &mut [f64]| {
            let f = row[q];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * pv;
                }
                row[q] = 0.0;
            }
        };
        for (i, row) in before.chunks_exact_mut(w).enumerate() {
            if self.active[i] {
                eliminate(row);
                clamp_rhs(&mut row[self.n]);
            }
        }
        for (k, row) in after.chunks_exact_mut(w).enumerate() {
            if self.active[p + 1 + k] {
                eliminate(row);
                clamp_rhs(&mut row[self.n]);
            }
        }
        eliminate(&mut self.cost);
        clamp_rhs(&mut prow[self.n]);

        let old = self.basis[p];
        if old != ARTIFICIAL {
            self.is_basic[old] = false;
        }
        self.basis[p] = q;
        self.is_basic[q] = true;
    }

    fn drive_out_artificials(&mut self) {
        for p in 0..self.d {
            if !self.active[p] || self.basis[p] != ARTIFICIAL {
                continue;
            }
            self.t[p * self.width + self.n] = 0.0;
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.n {
                if self.is_basic[j] {
                    continue;
                }
                let a = self.at(p, j).abs();
                if a > self.pivot_floor && best.is_none_or(|(_, m)| a > m) {
                    best = Some((j, a));
                }
            }
            match best {
                Some((q, _)) => {
                    self.pivot(p, q);
                    self.iterations += 1;
                }
                None => self.active[p] = false,
            }
        }
    }

    fn extract(&self) -> (Vec<usize>, Vec<f64>) {
        let mut pairs: Vec<(usize, f64)> = (0..self.d)
            .filter(|&i| self.active[i] && self.basis[i] != ARTIFICIAL)
            .map(|i| (self.basis[i], self.rhs(i)))
            .filter(|&(_, w)| w > self.opts.prune_threshold)
            .collect();
        pairs.sort_by_key(|&(j, _)| j);
        pairs.into_iter().unzip()
    }

    fn current_residual(&self) -> f64 {
        let (support, weights): (Vec<usize>, Vec<f64>) = (0..self.d)
            .filter(|&i| self.active[i] && self.basis[i] != ARTIFICIAL)
            .map(|i| (self.basis[i], self.rhs(i).max(0.0)))
            .unzip();
        self.inst.residual(&support, &weights)
    }
}

fn clamp_rhs(v: &mut f64) {
    // rounding can push a zero-level basic variable slightly negative
    if *v < 0.0 && *v > -1e-12 {
        *v = 0.0;
    }
}

/// Re-solves `A_S w = b` in the least-squares sense on the support and keeps
/// the result when it stays positive and does not increase the residual.
fn refine(
    inst: &LpInstance,
    support: Vec<usize>,
    weights: Vec<f64>,
    residual: f64,
) -> (Vec<usize>, Vec<f64>, f64) {
    if support.is_empty() {
        return (support, weights, residual);
    }
    let d = inst.rows();
    let a_s = DMatrix::from_fn(d, support.len(), |i, k| inst.entry(i, support[k]));
    let b = DVector::from_column_slice(inst.b());
    let Ok(solution) = a_s.svd(true, true).solve(&b, 1e-14) else {
        return (support, weights, residual);
    };
    let refined: Vec<f64> = solution.iter().copied().collect();
    if refined.iter().any(|&w| w.is_nan() || w <= 0.0) {
        return (support, weights, residual);
    }
    let refined_residual = inst.residual(&support, &refined);
    if refined_residual <= residual {
        (support, refined, refined_residual)
    } else {
        (support, weights, residual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> LpOptions {
        LpOptions::default()
    }

    #[test]
    fn midpoint_of_two_columns() {
        let inst = LpInstance::from_rows(&[[1.0, 1.0], [0.0, 1.0]], vec![1.0, 0.5]).unwrap();
        let r = find_bfs(&inst, &opts()).unwrap();
        assert_eq!(r.status, BfsStatus::Feasible);
        assert_eq!(r.support, vec![0, 1]);
        assert!((r.weights[0] - 0.5).abs() < 1e-15 && (r.weights[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn outside_the_hull() {
        let inst = LpInstance::from_rows(&[[1.0, 1.0], [0.0, 1.0]], vec![1.0, 2.0]).unwrap();
        let r = find_bfs(&inst, &opts()).unwrap();
        assert_eq!(r.status, BfsStatus::Infeasible);
        assert!(r.phase_one_objective > 1e-9);
        assert!(!membership_test(&inst, &opts()).unwrap());
    }

    #[test]
    fn simpson_weights() {
        let cols: Vec<Vec<f64>> = [0.0f64, 0.5, 1.0]
            .iter()
            .map(|&x| vec![1.0, x, x * x, x * x * x])
            .collect();
        let inst = LpInstance::from_columns(&cols, vec![1.0, 0.5, 1.0 / 3.0, 0.25]).unwrap();
        let r = find_bfs(&inst, &opts()).unwrap();
        assert_eq!(r.status, BfsStatus::Feasible);
        assert_eq!(r.support, vec![0, 1, 2]);
        let expected = [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0];
        for (w, e) in r.weights.iter().zip(expected) {
            assert!((w - e).abs() < 1e-12, "{w} vs {e}");
        }
        // four rows, three independent columns: one row is redundant
        assert_eq!(r.redundant_rows.len(), 1);
        assert!(membership_test(&inst, &opts()).unwrap());
    }

    #[test]
    fn single_column_membership() {
        let inst = LpInstance::from_columns(&[[1.0, 0.3, 0.09]], vec![1.0, 0.3, 0.09]).unwrap();
        assert!(membership_test(&inst, &opts()).unwrap());
        let r = find_bfs(&inst, &opts()).unwrap();
        assert_eq!(r.support, vec![0]);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);

        let unreachable = LpInstance::from_rows(&[[1.0], [0.0]], vec![1.0, 1.0]).unwrap();
        assert!(!membership_test(&unreachable, &opts()).unwrap());
    }

    #[test]
    fn negative_rhs_rows_are_handled() {
        // z1 - z2 = -1, z1 + z2 = 3  ->  z = (1, 2)
        let inst = LpInstance::from_rows(&[[1.0, -1.0], [1.0, 1.0]], vec![-1.0, 3.0]).unwrap();
        let r = find_bfs(&inst, &opts()).unwrap();
        assert_eq!(r.status, BfsStatus::Feasible);
        assert!((r.weights[0] - 1.0).abs() < 1e-14 && (r.weights[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_rhs_gives_empty_support() {
        let inst = LpInstance::from_rows(&[[1.0, -1.0]], vec![0.0]).unwrap();
        let r = find_bfs(&inst, &opts()).unwrap();
        assert_eq!(r.status, BfsStatus::Feasible);
        assert!(r.support.is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            LpInstance::new(2, 2, vec![1.0; 3], vec![1.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            LpInstance::new(1, 1, vec![f64::NAN], vec![1.0]),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            LpInstance::new(2, 1, vec![1.0, 0.0], vec![1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn iteration_cap_reports_instability() {
        let cols: Vec<Vec<f64>> = (0..20)
            .map(|k| {
                let x = k as f64 / 19.0;
                vec![1.0, x, x * x]
            })
            .collect();
        let inst = LpInstance::from_columns(&cols, vec![1.0, 0.5, 1.0 / 3.0]).unwrap();
        let tight = LpOptions {
            iteration_cap_factor: 1,
            ..LpOptions::default()
        };
        // cap = n + d is plenty here; a zero-iteration budget is not allowed
        assert_eq!(find_bfs(&inst, &tight).unwrap().status, BfsStatus::Feasible);
        let bad = LpOptions {
            iteration_cap_factor: 0,
            ..LpOptions::default()
        };
        assert!(find_bfs(&inst, &bad).is_err());
    }

    #[test]
    fn bland_rule_matches_dantzig_status() {
        let cols: Vec<Vec<f64>> = (0..30)
            .map(|k| {
                let x = ((k * 7) % 30) as f64 / 29.0;
                vec![1.0, x, x * x, x * x * x]
            })
            .collect();
        let inst = LpInstance::from_columns(&cols, vec![1.0, 0.5, 1.0 / 3.0, 0.25]).unwrap();
        let bland = LpOptions {
            pivot_rule: PivotRule::Bland,
            ..LpOptions::default()
        };
        let a = find_bfs(&inst, &opts()).unwrap();
        let b = find_bfs(&inst, &bland).unwrap();
        assert!(a.is_feasible() && b.is_feasible());
        assert!(a.support.len() <= 4 && b.support.len() <= 4);
    }
}
