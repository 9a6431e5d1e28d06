//! Cubature construction, compression, product rules and verification.
//!
//! Every node produced by [`construct_exact`], [`subsample`] and
//! [`compress_empirical`] is one of the input or drawn points, copied
//! bitwise; weights come from a basic feasible solution so there are at most
//! `d` of them, all strictly positive.

use std::fmt;

use crate::basis::{basis_dim, BasisKind, TestFunctionBasis};
use crate::error::{Error, Result};
use crate::lp::{find_bfs, membership_status, BfsResult, BfsStatus, LpInstance, LpOptions, PivotRule};
use crate::moments::{empirical_moments, MomentProvenance, MomentVector};
use crate::points::PointSet;
use crate::sampler::{Distribution, SampleBatch, SampleStream};

/// Default cap on the node count of a product rule.
pub const DEFAULT_PRODUCT_CAP: usize = 1_000_000;

/// Tolerance on `|sum w - 1|`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CubatureProvenance {
    ExactConstruction {
        pool_size: usize,
        seed: u64,
        stream_id: u64,
    },
    Subsampled,
    Product { k: u32 },
}

impl CubatureProvenance {
    /// Whether the `n <= d` bound is part of this provenance's contract.
    pub fn bounded_by_basis_size(&self) -> bool {
        !matches!(self, CubatureProvenance::Product { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cubature {
    pub nodes: PointSet,
    pub weights: Vec<f64>,
    /// Descriptor of the basis the weights were fitted against, if any.
    pub basis: Option<String>,
    pub target: Option<Vec<f64>>,
    /// Max-norm moment error against `target`.
    pub residual: Option<f64>,
    pub provenance: CubatureProvenance,
}

impl Cubature {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.nodes.dim()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `sum_j w_j phi(x_j)`.
    pub fn moments(&self, basis: &TestFunctionBasis) -> Result<Vec<f64>> {
        let mut acc = vec![0.0; basis.len()];
        let mut lifted = vec![0.0; basis.len()];
        for (node, &w) in self.nodes.rows().zip(&self.weights) {
            basis.evaluate_into(node, &mut lifted)?;
            for (a, v) in acc.iter_mut().zip(&lifted) {
                *a += w * v;
            }
        }
        Ok(acc)
    }

    /// Checks the structural invariants for this provenance.
    pub fn validate(&self) -> Result<()> {
        if self.nodes.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                context: "cubature nodes vs weights",
                expected: self.nodes.len(),
                found: self.weights.len(),
            });
        }
        if self.weights.is_empty() {
            return Err(Error::InvalidInput("cubature has no nodes".into()));
        }
        if let Some(j) = self.weights.iter().position(|&w| !w.is_finite() || w <= 0.0) {
            return Err(Error::InvalidInput(format!(
                "weight {j} is not strictly positive ({})",
                self.weights[j]
            )));
        }
        let sum = self.weight_sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidInput(format!("weights sum to {sum}, not 1")));
        }
        if let (Some(target), true) = (&self.target, self.provenance.bounded_by_basis_size()) {
            if self.len() > target.len() {
                return Err(Error::InvalidInput(format!(
                    "{} nodes exceed the basis size {}",
                    self.len(),
                    target.len()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionConfig {
    /// First pool size; `None` means the basis size `d`.
    pub initial_pool: Option<usize>,
    pub growth_factor: f64,
    pub max_pool: usize,
    pub lp: LpOptions,
    pub seed: u64,
    pub stream_id: u64,
    /// Re-run an unstable LP once with Bland's rule from the start.
    pub retry_with_bland: bool,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        ConstructionConfig {
            initial_pool: None,
            growth_factor: 2.0,
            max_pool: 1_000_000,
            lp: LpOptions::default(),
            seed: 0,
            stream_id: 0,
            retry_with_bland: true,
        }
    }
}

impl ConstructionConfig {
    pub fn with_seed(seed: u64) -> Self {
        ConstructionConfig {
            seed,
            ..ConstructionConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.growth_factor.is_finite() || self.growth_factor <= 1.0 {
            return Err(Error::InvalidInput("growth factor must be a finite number > 1".into()));
        }
        if self.initial_pool == Some(0) || self.max_pool == 0 {
            return Err(Error::InvalidInput("pool sizes must be positive".into()));
        }
        Ok(())
    }
}

fn check_target(basis: &TestFunctionBasis, target: &MomentVector) -> Result<()> {
    if target.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            context: "moment vector vs basis size",
            expected: basis.len(),
            found: target.len(),
        });
    }
    Ok(())
}

/// Draws i.i.d. candidates from `distribution` until `target` lies in the
/// convex hull of their lifts, then extracts at most `d` of them as nodes.
///
/// The pool starts at `initial_pool` points and is multiplied by
/// `growth_factor` after every failed membership test; earlier draws are kept.
pub fn construct_exact(
    distribution: Distribution,
    basis: &TestFunctionBasis,
    target: &MomentVector,
    config: &ConstructionConfig,
) -> Result<Cubature> {
    config.validate()?;
    check_target(basis, target)?;
    if !basis.is_monomial() {
        return Err(Error::Unsupported(
            "fresh sampling needs pointwise-evaluable test functions; use subsample_lifted for tabulated bases"
                .into(),
        ));
    }
    let d = basis.len();
    let s = basis.input_dim();
    let mut stream = SampleStream::new(distribution, s, config.seed, config.stream_id);
    let mut pool = PointSet::with_capacity(s, config.initial_pool.unwrap_or(d));
    let mut lifted: Vec<f64> = Vec::new();
    let mut pool_size = config.initial_pool.unwrap_or(d).min(config.max_pool);

    loop {
        let fresh = pool_size - pool.len();
        let start = pool.len();
        stream.extend(&mut pool, fresh);
        lifted.resize(d * pool.len(), 0.0);
        for j in start..pool.len() {
            basis.evaluate_into(pool.row(j), &mut lifted[j * d..(j + 1) * d])?;
        }
        let instance = LpInstance::new(d, pool.len(), lifted.clone(), target.values().to_vec())?;

        let status = with_bland_retry(config, |opts| {
            let status = membership_status(&instance, opts)?;
            Ok((status, status == BfsStatus::NumericallyUnstable))
        })?;
        log::debug!("pool {} -> {:?}", pool.len(), status);
        match status {
            BfsStatus::Feasible => {
                let bfs = with_bland_retry(config, |opts| {
                    let r = find_bfs(&instance, opts)?;
                    let unstable = r.status == BfsStatus::NumericallyUnstable;
                    Ok((r, unstable))
                })?;
                match bfs.status {
                    BfsStatus::Feasible => {
                        return Ok(assemble(
                            &pool,
                            basis,
                            target,
                            bfs,
                            CubatureProvenance::ExactConstruction {
                                pool_size: pool.len(),
                                seed: config.seed,
                                stream_id: config.stream_id,
                            },
                        ))
                    }
                    BfsStatus::NumericallyUnstable => {
                        return Err(Error::NumericallyUnstable {
                            reason: bfs.unstable_reason.unwrap_or_default(),
                            pool: Some(pool.len()),
                        })
                    }
                    // membership accepted within tolerance but the full solve did not; keep growing
                    BfsStatus::Infeasible => {}
                }
            }
            BfsStatus::NumericallyUnstable => {
                return Err(Error::NumericallyUnstable {
                    reason: "membership test did not converge".into(),
                    pool: Some(pool.len()),
                })
            }
            BfsStatus::Infeasible => {}
        }

        if pool_size >= config.max_pool {
            return Err(Error::PoolExhausted {
                max_pool: config.max_pool,
            });
        }
        let grown = (pool_size as f64 * config.growth_factor).ceil() as usize;
        pool_size = grown.max(pool_size + 1).min(config.max_pool);
    }
}

fn with_bland_retry<T>(
    config: &ConstructionConfig,
    mut run: impl FnMut(&LpOptions) -> Result<(T, bool)>,
) -> Result<T> {
    let (value, unstable) = run(&config.lp)?;
    if unstable && config.retry_with_bland && config.lp.pivot_rule != PivotRule::Bland {
        let bland = LpOptions {
            pivot_rule: PivotRule::Bland,
            ..config.lp.clone()
        };
        return Ok(run(&bland)?.0);
    }
    Ok(value)
}

fn assemble(
    points: &PointSet,
    basis: &TestFunctionBasis,
    target: &MomentVector,
    bfs: BfsResult,
    provenance: CubatureProvenance,
) -> Cubature {
    Cubature {
        nodes: points.select(&bfs.support),
        weights: bfs.weights,
        basis: Some(basis.descriptor()),
        target: Some(target.values().to_vec()),
        residual: Some(bfs.residual),
        provenance,
    }
}

fn bfs_to_result(bfs: &BfsResult) -> Result<()> {
    match bfs.status {
        BfsStatus::Feasible => Ok(()),
        BfsStatus::Infeasible => Err(Error::Infeasible {
            phase_one_objective: bfs.phase_one_objective,
        }),
        BfsStatus::NumericallyUnstable => Err(Error::NumericallyUnstable {
            reason: bfs.unstable_reason.clone().unwrap_or_default(),
            pool: None,
        }),
    }
}

/// Carathéodory–Tchakaloff subsampling of a finite point set: positive
/// weights on at most `d` of `points` reproducing `target`. Succeeds iff the
/// target lies in the convex hull of the lifted points.
pub fn subsample(
    points: &PointSet,
    basis: &TestFunctionBasis,
    target: &MomentVector,
    options: &LpOptions,
) -> Result<Cubature> {
    check_target(basis, target)?;
    if points.dim() != basis.input_dim() {
        return Err(Error::DimensionMismatch {
            context: "point dimension vs basis",
            expected: basis.input_dim(),
            found: points.dim(),
        });
    }
    if points.is_empty() {
        return Err(Error::EmptySamples);
    }
    let lifted = basis.lift(points)?;
    let instance = LpInstance::new(basis.len(), points.len(), lifted, target.values().to_vec())?;
    let bfs = find_bfs(&instance, options)?;
    bfs_to_result(&bfs)?;
    Ok(assemble(points, basis, target, bfs, CubatureProvenance::Subsampled))
}

/// As [`subsample`], with test-function values supplied directly: `lifted`
/// is column-major `d x n`, column `j` holding `phi(points[j])`. Every
/// column's first entry must be 1.
pub fn subsample_lifted(
    points: &PointSet,
    basis: &TestFunctionBasis,
    lifted: &[f64],
    target: &MomentVector,
    options: &LpOptions,
) -> Result<Cubature> {
    check_target(basis, target)?;
    let d = basis.len();
    if lifted.len() != d * points.len() {
        return Err(Error::DimensionMismatch {
            context: "lifted matrix entries",
            expected: d * points.len(),
            found: lifted.len(),
        });
    }
    if points.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut lifted = lifted.to_vec();
    for (j, col) in lifted.chunks_exact_mut(d).enumerate() {
        if (col[0] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "lifted column {j} has constant component {} instead of 1",
                col[0]
            )));
        }
        col[0] = 1.0;
    }
    let instance = LpInstance::new(d, points.len(), lifted, target.values().to_vec())?;
    let bfs = find_bfs(&instance, options)?;
    bfs_to_result(&bfs)?;
    Ok(assemble(points, basis, target, bfs, CubatureProvenance::Subsampled))
}

/// Compresses the empirical measure of `samples` to at most `d` weighted
/// samples with the same `phi`-moments.
pub fn compress_empirical(
    samples: &SampleBatch,
    basis: &TestFunctionBasis,
    options: &LpOptions,
) -> Result<Cubature> {
    let target = empirical_moments(samples, basis)?;
    subsample(&samples.points, basis, &target, options).map_err(|e| match e {
        // the empirical mean is a convex combination of the lifts by construction
        Error::Infeasible { phase_one_objective } => Error::NumericallyUnstable {
            reason: format!(
                "empirical moment vector rejected with phase-one objective {phase_one_objective:.3e}"
            ),
            pool: Some(samples.len()),
        },
        other => other,
    })
}

/// k-fold tensor product: nodes `(x_{j1}, ..., x_{jk})` with weight
/// `w_{j1} ... w_{jk}`, `j1` varying slowest.
pub fn product_cubature(base: &Cubature, k: u32, cap: usize) -> Result<Cubature> {
    if k == 0 {
        return Err(Error::InvalidInput("product order must be at least 1".into()));
    }
    let n = base.len();
    let total = (n as u128).checked_pow(k).filter(|&t| t <= cap as u128).ok_or_else(|| {
        Error::SizeCap {
            context: "product cubature nodes",
            requested: format!("{n}^{k}"),
            cap,
        }
    })? as usize;
    let s = base.dim();
    let k = k as usize;
    let mut nodes = PointSet::with_capacity(s * k, total);
    let mut weights = Vec::with_capacity(total);
    let mut idx = vec![0usize; k];
    let mut point = vec![0.0; s * k];
    for _ in 0..total {
        let mut w = 1.0;
        for (f, &j) in idx.iter().enumerate() {
            point[f * s..(f + 1) * s].copy_from_slice(base.nodes.row(j));
            w *= base.weights[j];
        }
        nodes.push_unchecked(&point);
        weights.push(w);
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }
    Ok(Cubature {
        nodes,
        weights,
        basis: None,
        target: None,
        residual: None,
        provenance: CubatureProvenance::Product { k: k as u32 },
    })
}

/// `sum_j w_j values[j]`.
pub fn integrate(cub: &Cubature, values: &[f64]) -> Result<f64> {
    if values.len() != cub.len() {
        return Err(Error::DimensionMismatch {
            context: "integrand values vs nodes",
            expected: cub.len(),
            found: values.len(),
        });
    }
    Ok(cub.weights.iter().zip(values).map(|(w, v)| w * v).sum())
}

/// Integrates `f` at the cubature nodes.
pub fn integrate_fn(cub: &Cubature, f: impl Fn(&[f64]) -> f64) -> f64 {
    cub.nodes
        .rows()
        .zip(&cub.weights)
        .map(|(x, w)| w * f(x))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// Set when the cubature, basis and target disagree in shape; nothing else is meaningful then.
    pub dimension_error: Option<String>,
    pub component_residuals: Vec<f64>,
    pub max_residual: f64,
    /// Absolute residual bound `tol * max(1, |b|_inf)`.
    pub residual_bound: f64,
    pub weights_positive: bool,
    pub weight_sum: f64,
    pub weights_normalized: bool,
    pub node_count: usize,
    pub basis_size: usize,
    /// `None` when the provenance does not promise `n <= d` (product rules).
    pub within_basis_size: Option<bool>,
    /// `dim P_{floor(m/2)}` for a full monomial basis of degree `m`.
    pub fisher_bound: Option<usize>,
    /// Checked only against analytic targets, whose measure has full-dimensional support.
    pub satisfies_fisher_bound: Option<bool>,
}

impl VerificationReport {
    pub fn residuals_ok(&self) -> bool {
        self.max_residual <= self.residual_bound
    }

    pub fn passed(&self) -> bool {
        self.dimension_error.is_none()
            && self.residuals_ok()
            && self.weights_positive
            && self.weights_normalized
            && self.within_basis_size != Some(false)
            && self.satisfies_fisher_bound != Some(false)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(e) = &self.dimension_error {
            out.push(format!("dimension error: {e}"));
            return out;
        }
        if !self.residuals_ok() {
            let worst: Vec<String> = self
                .component_residuals
                .iter()
                .enumerate()
                .filter(|(_, &r)| r > self.residual_bound)
                .map(|(i, r)| format!("{i}:{r:.3e}"))
                .collect();
            out.push(format!(
                "moment residual {:.3e} exceeds {:.3e} (components {})",
                self.max_residual,
                self.residual_bound,
                worst.join(" ")
            ));
        }
        if !self.weights_positive {
            out.push("weights are not all strictly positive".into());
        }
        if !self.weights_normalized {
            out.push(format!("weights sum to {:.17e}, not 1", self.weight_sum));
        }
        if self.within_basis_size == Some(false) {
            out.push(format!(
                "{} nodes exceed the basis size {}",
                self.node_count, self.basis_size
            ));
        }
        if self.satisfies_fisher_bound == Some(false) {
            out.push(format!(
                "{} nodes fall below the lower bound {}",
                self.node_count,
                self.fisher_bound.unwrap_or(0)
            ));
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(e) = &self.dimension_error {
            return writeln!(f, "dimension error: {e}");
        }
        writeln!(f, "nodes            {}", self.node_count)?;
        writeln!(f, "basis size       {}", self.basis_size)?;
        writeln!(f, "max residual     {:.3e} (bound {:.3e})", self.max_residual, self.residual_bound)?;
        writeln!(f, "weight sum       {:.17}", self.weight_sum)?;
        writeln!(f, "weights positive {}", self.weights_positive)?;
        match self.within_basis_size {
            Some(ok) => writeln!(f, "n <= d           {ok}")?,
            None => writeln!(f, "n <= d           n/a")?,
        }
        match (self.fisher_bound, self.satisfies_fisher_bound) {
            (Some(b), Some(ok)) => writeln!(f, "n >= {b:<11} {ok}")?,
            (Some(b), None) => writeln!(f, "n >= {b:<11} n/a")?,
            _ => {}
        }
        writeln!(f, "result           {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Checks `cub` against `target` on `basis`. Never fails; problems are reported.
pub fn verify(
    cub: &Cubature,
    basis: &TestFunctionBasis,
    target: &MomentVector,
    tol: f64,
) -> VerificationReport {
    let mut report = VerificationReport {
        dimension_error: None,
        component_residuals: Vec::new(),
        max_residual: f64::NAN,
        residual_bound: tol * target.max_abs().max(1.0),
        weights_positive: cub.weights.iter().all(|&w| w > 0.0 && w.is_finite()),
        weight_sum: cub.weight_sum(),
        weights_normalized: false,
        node_count: cub.len(),
        basis_size: basis.len(),
        within_basis_size: None,
        fisher_bound: None,
        satisfies_fisher_bound: None,
    };
    report.weights_normalized = (report.weight_sum - 1.0).abs() <= NORMALIZATION_TOL;
    if cub.nodes.len() != cub.weights.len() {
        report.dimension_error = Some(format!(
            "{} nodes but {} weights",
            cub.nodes.len(),
            cub.weights.len()
        ));
        return report;
    }
    if cub.dim() != basis.input_dim() {
        report.dimension_error = Some(format!(
            "cubature nodes are {}-dimensional, basis expects {}",
            cub.dim(),
            basis.input_dim()
        ));
        return report;
    }
    if target.len() != basis.len() {
        report.dimension_error = Some(format!(
            "target has {} components, basis has {}",
            target.len(),
            basis.len()
        ));
        return report;
    }
    let moments = match cub.moments(basis) {
        Ok(m) => m,
        Err(e) => {
            report.dimension_error = Some(e.to_string());
            return report;
        }
    };
    report.component_residuals = moments
        .iter()
        .zip(target.values())
        .map(|(m, b)| (m - b).abs())
        .collect();
    report.max_residual = report
        .component_residuals
        .iter()
        .fold(0.0, |acc: f64, &r| if r.is_nan() { f64::NAN } else { acc.max(r) });
    if cub.provenance.bounded_by_basis_size() {
        report.within_basis_size = Some(cub.len() <= basis.len());
    }
    if let BasisKind::Monomial { max_degree } = basis.kind() {
        report.fisher_bound = basis_dim(basis.input_dim(), max_degree / 2).ok();
        if *target.provenance() == MomentProvenance::Analytic {
            report.satisfies_fisher_bound = report.fisher_bound.map(|b| cub.len() >= b);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_monomials;
    use crate::moments::analytic_moment_vector;
    use crate::sampler::sample_uniform_cube;

    fn simpson() -> Cubature {
        Cubature {
            nodes: PointSet::from_rows(1, &[[0.0], [0.5], [1.0]]).unwrap(),
            weights: vec![1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
            basis: Some("monomial s=1 m=3".into()),
            target: None,
            residual: None,
            provenance: CubatureProvenance::Subsampled,
        }
    }

    #[test]
    fn subsample_recovers_simpson() {
        let basis = enumerate_monomials(1, 3).unwrap();
        let target = analytic_moment_vector(&basis).unwrap();
        let pts = PointSet::from_rows(1, &[[0.0], [0.5], [1.0]]).unwrap();
        let cub = subsample(&pts, &basis, &target, &LpOptions::default()).unwrap();
        for (w, e) in cub.weights.iter().zip([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]) {
            assert!((w - e).abs() <= 1e-12);
        }
        assert_eq!(cub.nodes, pts);
    }

    #[test]
    fn subsample_single_point_and_infeasible() {
        let basis = enumerate_monomials(1, 3).unwrap();
        let x0 = [0.37];
        let target =
            MomentVector::new(basis.evaluate(&x0).unwrap(), MomentProvenance::UserSupplied).unwrap();
        let cub = subsample(&PointSet::from_rows(1, &[x0]).unwrap(), &basis, &target, &LpOptions::default())
            .unwrap();
        assert_eq!(cub.weights, vec![1.0]);

        let b2 = enumerate_monomials(1, 2).unwrap();
        let t2 = analytic_moment_vector(&b2).unwrap();
        let pts = PointSet::from_rows(1, &[[0.0], [1.0]]).unwrap();
        assert!(matches!(
            subsample(&pts, &b2, &t2, &LpOptions::default()),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn subsample_lifted_uses_supplied_values() {
        let basis =
            TestFunctionBasis::tabulated(1, vec!["1".into(), "sin".into()]).unwrap();
        let pts = PointSet::from_rows(1, &[[0.0], [1.0], [2.0]]).unwrap();
        let lifted: Vec<f64> = pts.rows().flat_map(|x| [1.0, x[0].sin()]).collect();
        let mean_sin = (0.0f64.sin() + 1.0f64.sin() + 2.0f64.sin()) / 3.0;
        let target = MomentVector::new(vec![1.0, mean_sin], MomentProvenance::UserSupplied).unwrap();
        let cub = subsample_lifted(&pts, &basis, &lifted, &target, &LpOptions::default()).unwrap();
        assert!(cub.len() <= 2);
        let got: f64 = cub.nodes.rows().zip(&cub.weights).map(|(x, w)| w * x[0].sin()).sum();
        assert!((got - mean_sin).abs() < 1e-12);

        let mut bad = lifted.clone();
        bad[2] = 0.5;
        assert!(subsample_lifted(&pts, &basis, &bad, &target, &LpOptions::default()).is_err());
    }

    #[test]
    fn construct_exact_cubic_on_interval() {
        let basis = enumerate_monomials(1, 3).unwrap();
        let target = analytic_moment_vector(&basis).unwrap();
        let cub = construct_exact(
            Distribution::UniformCube,
            &basis,
            &target,
            &ConstructionConfig::with_seed(3),
        )
        .unwrap();
        assert!(cub.len() <= 4);
        for k in 0..4 {
            let m = integrate_fn(&cub, |x| x[0].powi(k));
            assert!((m - 1.0 / (k as f64 + 1.0)).abs() <= 1e-9);
        }
        cub.validate().unwrap();
    }

    #[test]
    fn construct_exact_point_mass_target() {
        let basis = enumerate_monomials(2, 2).unwrap();
        let config = ConstructionConfig::with_seed(17);
        let x0 = sample_uniform_cube(2, 1, config.seed, config.stream_id).points;
        let target =
            MomentVector::new(basis.evaluate(x0.row(0)).unwrap(), MomentProvenance::UserSupplied)
                .unwrap();
        let cub = construct_exact(Distribution::UniformCube, &basis, &target, &config).unwrap();
        assert_eq!(cub.len(), 1);
        assert_eq!(cub.nodes.row(0), x0.row(0));
        assert!((cub.weights[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn construct_exact_is_deterministic() {
        let basis = enumerate_monomials(2, 2).unwrap();
        let target = analytic_moment_vector(&basis).unwrap();
        let config = ConstructionConfig::with_seed(99);
        let a = construct_exact(Distribution::UniformCube, &basis, &target, &config).unwrap();
        let b = construct_exact(Distribution::UniformCube, &basis, &target, &config).unwrap();
        assert_eq!(a, b);
        assert!(matches!(a.provenance, CubatureProvenance::ExactConstruction { pool_size, .. } if pool_size >= 6));
    }

    #[test]
    fn construct_exact_errors() {
        let basis = enumerate_monomials(2, 2).unwrap();
        let target = analytic_moment_vector(&basis).unwrap();
        let capped = ConstructionConfig {
            max_pool: 3,
            ..ConstructionConfig::with_seed(1)
        };
        assert!(matches!(
            construct_exact(Distribution::UniformCube, &basis, &target, &capped),
            Err(Error::PoolExhausted { max_pool: 3 })
        ));
        let bad = ConstructionConfig {
            growth_factor: 1.0,
            ..ConstructionConfig::default()
        };
        assert!(construct_exact(Distribution::UniformCube, &basis, &target, &bad).is_err());

        let tab = TestFunctionBasis::tabulated(2, vec!["1".into(), "f".into()]).unwrap();
        let t = MomentVector::new(vec![1.0, 0.0], MomentProvenance::UserSupplied).unwrap();
        assert!(matches!(
            construct_exact(Distribution::UniformCube, &tab, &t, &ConstructionConfig::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn gaussian_construction_against_known_moments() {
        // E[X] = 0, E[X^2] = 1 for the standard normal
        let basis = enumerate_monomials(1, 2).unwrap();
        let target = MomentVector::new(vec![1.0, 0.0, 1.0], MomentProvenance::UserSupplied).unwrap();
        let cub =
            construct_exact(Distribution::Gaussian, &basis, &target, &ConstructionConfig::with_seed(5))
                .unwrap();
        assert!(cub.len() <= 3);
        assert!(verify(&cub, &basis, &target, 1e-9).passed());
    }

    #[test]
    fn compress_small_sample_keeps_everything_needed() {
        let basis = enumerate_monomials(2, 2).unwrap();
        let samples = sample_uniform_cube(2, 6, 8, 0);
        let cub = compress_empirical(&samples, &basis, &LpOptions::default()).unwrap();
        assert!(cub.len() <= 6);
        let emp = empirical_moments(&samples, &basis).unwrap();
        assert!(verify(&cub, &basis, &emp, 1e-9).passed());
    }

    #[test]
    fn simpson_product() {
        let prod = product_cubature(&simpson(), 2, DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(prod.len(), 9);
        assert_eq!(prod.nodes.row(0), &[0.0, 0.0]);
        assert!((prod.weights[0] - 1.0 / 36.0).abs() < 1e-16);
        assert_eq!(prod.nodes.row(4), &[0.5, 0.5]);
        assert!((prod.weights[4] - 4.0 / 9.0).abs() < 1e-16);
        assert!((prod.weight_sum() - 1.0).abs() < 1e-15);
        assert!(matches!(
            product_cubature(&simpson(), 20, DEFAULT_PRODUCT_CAP),
            Err(Error::SizeCap { .. })
        ));
        assert!(product_cubature(&simpson(), 0, DEFAULT_PRODUCT_CAP).is_err());
    }

    #[test]
    fn integrate_examples() {
        let s = simpson();
        assert!((integrate(&s, &[1.0, 1.0, 1.0]).unwrap() - 1.0).abs() <= 1e-15);
        assert!((integrate(&s, &[0.0, 0.125, 1.0]).unwrap() - 0.25).abs() < 1e-16);
        let quartic = integrate(&s, &[0.0, 1.0 / 16.0, 1.0]).unwrap();
        assert!((quartic - 5.0 / 24.0).abs() < 1e-16);
        assert!((quartic - 0.2).abs() > 1e-3);
        assert!(integrate(&s, &[1.0]).is_err());
    }

    #[test]
    fn verify_simpson_and_corruptions() {
        let basis = enumerate_monomials(1, 3).unwrap();
        let target = analytic_moment_vector(&basis).unwrap();
        let report = verify(&simpson(), &basis, &target, 1e-9);
        assert!(report.passed(), "{report}");
        assert!(report.max_residual <= 1e-15);
        assert_eq!(report.fisher_bound, Some(2));
        assert_eq!(report.satisfies_fisher_bound, Some(true));

        let mut bad = simpson();
        bad.weights[1] = -bad.weights[1];
        let r = verify(&bad, &basis, &target, 1e-9);
        assert!(!r.weights_positive && !r.passed());

        let b4 = enumerate_monomials(1, 5).unwrap();
        let t4 = analytic_moment_vector(&b4).unwrap();
        let r = verify(&simpson(), &b4, &t4, 1e-9);
        assert!(!r.residuals_ok());
        assert!(r.component_residuals[..4].iter().all(|&x| x < 1e-15));
        assert!(r.component_residuals[4] > 1e-3);

        let b2 = enumerate_monomials(2, 3).unwrap();
        let t2 = analytic_moment_vector(&b2).unwrap();
        assert!(verify(&simpson(), &b2, &t2, 1e-9).dimension_error.is_some());
    }
}
