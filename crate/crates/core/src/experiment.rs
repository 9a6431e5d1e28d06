//! Estimating the smallest sample size whose lifted hull contains the moment
//! vector with probability at least one half, and the Monte Carlo error of
//! compressed empirical measures.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{basis_dim, enumerate_monomials, TestFunctionBasis};
use crate::cubature::compress_empirical;
use crate::error::{Error, Result};
use crate::lp::{membership_status, BfsStatus, LpInstance, LpOptions};
use crate::moments::{analytic_moment_vector, MomentVector};
use crate::sampler::{derive_stream_id, SampleStream, Distribution};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub trials: usize,
    pub success_threshold: usize,
    /// Lower end of the search; `None` means `d_{s,m}`.
    pub search_lo: Option<usize>,
    pub search_hi: usize,
    pub master_seed: u64,
    pub lp: LpOptions,
    /// Run the trials of one probe on the rayon pool.
    pub parallel: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            trials: 20,
            success_threshold: 10,
            search_lo: None,
            search_hi: 10_000,
            master_seed: 0,
            lp: LpOptions {
                time_limit: Some(Duration::from_secs(10)),
                ..LpOptions::default()
            },
            parallel: true,
        }
    }
}

impl ExperimentConfig {
    pub fn with_seed(master_seed: u64) -> Self {
        ExperimentConfig {
            master_seed,
            ..ExperimentConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeLog {
    pub n: usize,
    pub successes: usize,
    /// Trials whose LP was flagged unstable; counted as failures.
    pub unstable: usize,
    /// ChaCha stream id of each trial (all share the master seed as key).
    pub trial_streams: Vec<u64>,
    /// Not serialized, so that records stay byte-identical across reruns.
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub s: usize,
    pub m: u32,
    pub d: usize,
    pub trials: usize,
    pub success_threshold: usize,
    pub search_lo: usize,
    pub search_hi: usize,
    /// `None` when even `search_hi` missed the threshold.
    pub estimated_n: Option<usize>,
    pub master_seed: u64,
    pub probes: Vec<ProbeLog>,
}

impl ExperimentRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    /// `"A (B)"` with `A` the estimate and `B = d`.
    pub fn cell(&self) -> String {
        match self.estimated_n {
            Some(n) => format!("{n} ({})", self.d),
            None => format!(">{} ({})", self.search_hi, self.d),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeOutcome {
    pub successes: usize,
    pub unstable: usize,
}

/// Stream id of trial `trial` at probe `probe_index` for cell `(s, m)`.
pub fn trial_stream(master_seed: u64, s: usize, m: u32, probe_index: usize, trial: usize) -> u64 {
    derive_stream_id(&[master_seed, s as u64, u64::from(m), probe_index as u64, trial as u64])
}

/// Counts the trials whose `n` fresh uniform samples have `target` in the
/// convex hull of their lifts. One trial per stream id.
pub fn probe(
    basis: &TestFunctionBasis,
    target: &MomentVector,
    n: usize,
    master_seed: u64,
    streams: &[u64],
    lp: &LpOptions,
    parallel: bool,
) -> Result<ProbeOutcome> {
    if n == 0 {
        return Err(Error::InvalidInput("probe size must be positive".into()));
    }
    if target.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            context: "moment vector vs basis size",
            expected: basis.len(),
            found: target.len(),
        });
    }
    let run = |&stream_id: &u64| -> Result<BfsStatus> {
        let mut stream =
            SampleStream::new(Distribution::UniformCube, basis.input_dim(), master_seed, stream_id);
        let batch = stream.next_batch(n);
        let lifted = basis.lift(&batch.points)?;
        let instance = LpInstance::new(basis.len(), n, lifted, target.values().to_vec())?;
        membership_status(&instance, lp)
    };
    let statuses: Vec<BfsStatus> = if parallel {
        streams.par_iter().map(run).collect::<Result<_>>()?
    } else {
        streams.iter().map(run).collect::<Result<_>>()?
    };
    let unstable = statuses
        .iter()
        .filter(|&&s| s == BfsStatus::NumericallyUnstable)
        .count();
    if unstable > 0 {
        log::warn!("{unstable} of {} trials unstable at n = {n}; counted as failures", streams.len());
    }
    Ok(ProbeOutcome {
        successes: statuses.iter().filter(|&&s| s == BfsStatus::Feasible).count(),
        unstable,
    })
}

/// Binary search for the smallest `n` in `[search_lo, search_hi]` at which at
/// least `success_threshold` of `trials` probes succeed.
///
/// `search_hi` is probed first; afterwards the upper end always satisfies the
/// threshold and the answer is the upper end when the interval closes.
pub fn estimate_n(s: usize, m: u32, config: &ExperimentConfig) -> Result<ExperimentRecord> {
    if config.success_threshold > config.trials || config.trials == 0 {
        return Err(Error::InvalidInput(
            "need 1 <= trials and success_threshold <= trials".into(),
        ));
    }
    let basis = enumerate_monomials(s, m)?;
    let target = analytic_moment_vector(&basis)?;
    let d = basis.len();
    let search_lo = config.search_lo.unwrap_or(d);
    if search_lo == 0 || search_lo > config.search_hi {
        return Err(Error::InvalidInput(format!(
            "empty search interval [{search_lo}, {}]",
            config.search_hi
        )));
    }
    let mut record = ExperimentRecord {
        s,
        m,
        d,
        trials: config.trials,
        success_threshold: config.success_threshold,
        search_lo,
        search_hi: config.search_hi,
        estimated_n: None,
        master_seed: config.master_seed,
        probes: Vec::new(),
    };

    let judge = |n: usize, record: &mut ExperimentRecord| -> Result<bool> {
        let probe_index = record.probes.len();
        let streams: Vec<u64> = (0..config.trials)
            .map(|i| trial_stream(config.master_seed, s, m, probe_index, i))
            .collect();
        let started = Instant::now();
        let outcome = probe(&basis, &target, n, config.master_seed, &streams, &config.lp, config.parallel)?;
        let wall_time = started.elapsed();
        log::info!(
            "(s={s}, m={m}) n={n}: {}/{} successes in {:.2?}",
            outcome.successes,
            config.trials,
            wall_time
        );
        record.probes.push(ProbeLog {
            n,
            successes: outcome.successes,
            unstable: outcome.unstable,
            trial_streams: streams,
            wall_time,
        });
        Ok(outcome.successes >= config.success_threshold)
    };

    if !judge(config.search_hi, &mut record)? {
        return Ok(record);
    }
    let mut lo = search_lo;
    let mut hi = config.search_hi;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if judge(mid, &mut record)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    record.estimated_n = Some(hi);
    Ok(record)
}

#[derive(Debug, Clone)]
pub struct TableRun {
    pub cells: Vec<(usize, u32, std::result::Result<ExperimentRecord, String>)>,
}

impl TableRun {
    /// Grid with `s` down the rows and `m` across the columns.
    pub fn render(&self) -> String {
        let mut ss: Vec<usize> = self.cells.iter().map(|c| c.0).collect();
        let mut ms: Vec<u32> = self.cells.iter().map(|c| c.1).collect();
        ss.sort_unstable();
        ss.dedup();
        ms.sort_unstable();
        ms.dedup();
        let cell = |s: usize, m: u32| -> String {
            match self.cells.iter().find(|c| c.0 == s && c.1 == m) {
                Some((_, _, Ok(r))) => r.cell(),
                Some((_, _, Err(_))) => match basis_dim(s, m) {
                    Ok(d) => format!("error ({d})"),
                    Err(_) => "error".into(),
                },
                None => String::new(),
            }
        };
        let width = self
            .cells
            .iter()
            .map(|c| cell(c.0, c.1).len())
            .max()
            .unwrap_or(0)
            .max(6);
        let mut out = String::new();
        write!(out, "{:>5} |", "s\\m").unwrap();
        for m in &ms {
            write!(out, " {m:>width$} |").unwrap();
        }
        out.push('\n');
        out.push_str(&"-".repeat(7 + ms.len() * (width + 3)));
        out.push('\n');
        for &s in &ss {
            write!(out, "{s:>5} |").unwrap();
            for &m in &ms {
                write!(out, " {:>width$} |", cell(s, m)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,m,d,estimated_n,status\n");
        for (s, m, r) in &self.cells {
            match r {
                Ok(rec) => {
                    let est = rec.estimated_n.map(|n| n.to_string()).unwrap_or_default();
                    let status = if rec.estimated_n.is_some() { "ok" } else { "above_search_hi" };
                    writeln!(out, "{s},{m},{},{est},{status}", rec.d).unwrap();
                }
                Err(e) => {
                    let d = basis_dim(*s, *m).map(|d| d.to_string()).unwrap_or_default();
                    writeln!(out, "{s},{m},{d},,error: {}", e.replace(',', ";")).unwrap();
                }
            }
        }
        out
    }
}

/// Runs [`estimate_n`] for every cell; failures are recorded per cell.
pub fn run_table(grid: &[(usize, u32)], config: &ExperimentConfig) -> TableRun {
    TableRun {
        cells: grid
            .iter()
            .map(|&(s, m)| (s, m, estimate_n(s, m, config).map_err(|e| e.to_string())))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McErrorRow {
    pub n: usize,
    /// Per basis component, against the analytic moments.
    pub rmse: Vec<f64>,
    pub mean_error: Vec<f64>,
    /// Standard error of `mean_error`.
    pub std_error: Vec<f64>,
    /// `sqrt(mean_i MSE_i)` over the nonconstant components.
    pub aggregate_rmse: f64,
    /// Largest node count seen across repetitions.
    pub max_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McErrorStudy {
    pub s: usize,
    pub m: u32,
    pub d: usize,
    pub reps: usize,
    pub seed: u64,
    pub rows: Vec<McErrorRow>,
}

impl McErrorStudy {
    /// `aggregate_rmse[j] / aggregate_rmse[i]`.
    pub fn rmse_ratio(&self, i: usize, j: usize) -> f64 {
        self.rows[j].aggregate_rmse / self.rows[i].aggregate_rmse
    }

    /// Largest `|mean error| / standard error` over nonconstant components and rows.
    pub fn max_bias_z(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| {
                r.mean_error
                    .iter()
                    .zip(&r.std_error)
                    .skip(1)
                    .map(|(m, se)| if *se > 0.0 { m.abs() / se } else { 0.0 })
            })
            .fold(0.0, f64::max)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "s = {}, m = {}, d = {}, reps = {}, seed = {}",
            self.s, self.m, self.d, self.reps, self.seed
        )
        .unwrap();
        writeln!(out, "{:>8} {:>14} {:>10} {:>10} {:>6}", "N", "rmse", "ratio", "max|z|", "nodes").unwrap();
        for (k, row) in self.rows.iter().enumerate() {
            let ratio = if k == 0 {
                "-".to_string()
            } else {
                format!("{:.4}", self.rmse_ratio(k - 1, k))
            };
            let z = row
                .mean_error
                .iter()
                .zip(&row.std_error)
                .skip(1)
                .map(|(m, se)| if *se > 0.0 { m.abs() / se } else { 0.0 })
                .fold(0.0, f64::max);
            writeln!(
                out,
                "{:>8} {:>14.6e} {:>10} {:>10.3} {:>6}",
                row.n, row.aggregate_rmse, ratio, z, row.max_nodes
            )
            .unwrap();
        }
        out
    }
}

/// For each `N`, compresses `reps` independent uniform samples of size `N`
/// and measures the error of the compressed moments against the exact ones.
pub fn mc_error_study(
    s: usize,
    m: u32,
    n_list: &[usize],
    reps: usize,
    seed: u64,
    lp: &LpOptions,
) -> Result<McErrorStudy> {
    if reps < 30 {
        return Err(Error::InvalidInput("the error study needs at least 30 repetitions".into()));
    }
    if n_list.contains(&0) {
        return Err(Error::InvalidInput("sample sizes must be positive".into()));
    }
    let basis = enumerate_monomials(s, m)?;
    let exact = analytic_moment_vector(&basis)?;
    let d = basis.len();
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let errors: Vec<(Vec<f64>, usize)> = (0..reps)
            .into_par_iter()
            .map(|r| -> Result<(Vec<f64>, usize)> {
                let stream_id = derive_stream_id(&[seed, s as u64, u64::from(m), n as u64, r as u64]);
                let batch = SampleStream::new(Distribution::UniformCube, s, seed, stream_id).next_batch(n);
                let cub = compress_empirical(&batch, &basis, lp)?;
                let moments = cub.moments(&basis)?;
                let err = moments.iter().zip(exact.values()).map(|(a, b)| a - b).collect();
                Ok((err, cub.len()))
            })
            .collect::<Result<_>>()?;
        let reps_f = reps as f64;
        let mut mean = vec![0.0; d];
        let mut mse = vec![0.0; d];
        for (e, _) in &errors {
            for i in 0..d {
                mean[i] += e[i] / reps_f;
                mse[i] += e[i] * e[i] / reps_f;
            }
        }
        let std_error: Vec<f64> = (0..d)
            .map(|i| {
                let var = errors.iter().map(|(e, _)| (e[i] - mean[i]).powi(2)).sum::<f64>()
                    / (reps_f - 1.0);
                (var / reps_f).sqrt()
            })
            .collect();
        let aggregate_rmse = if d > 1 {
            (mse[1..].iter().sum::<f64>() / (d - 1) as f64).sqrt()
        } else {
            0.0
        };
        rows.push(McErrorRow {
            n,
            rmse: mse.iter().map(|v| v.sqrt()).collect(),
            mean_error: mean,
            std_error,
            aggregate_rmse,
            max_nodes: errors.iter().map(|e| e.1).max().unwrap_or(0),
        });
    }
    Ok(McErrorStudy {
        s,
        m,
        d,
        reps,
        seed,
        rows,
    })
}
