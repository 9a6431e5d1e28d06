use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use tchakaloff::cubature::{product_cubature, subsample};
use tchakaloff::experiment::{estimate_n, mc_error_study, run_table, ExperimentConfig, TableRun};
use tchakaloff::format::{fmt_f64, read_cubature, read_cubature_unchecked, write_cubature};
use tchakaloff::sampler::entropy_seed;
use tchakaloff::{
    analytic_moment_vector, compress_empirical, construct_exact, empirical_moments, enumerate_monomials,
    load_moment_vector, load_samples, ConstructionConfig, Distribution, LpOptions, MomentProvenance,
    MomentVector, MultiIndex, SampleStream, TestFunctionBasis,
};

use crate::config::{manifest_path_for, write_manifest};
use crate::exit::{self, Failure};
use crate::{CompressArgs, ConstructArgs, ExperimentArgs, IntegrateArgs, ProductArgs, VerifyArgs};

type CmdResult = Result<(), Failure>;

fn parse_measure(name: &str) -> Result<Distribution, Failure> {
    Distribution::from_name(name)
        .ok_or_else(|| Failure::bad_input(format!("unknown measure {name:?} (expected uniform or gaussian)")))
}

fn write_output(path: &Path, cub: &tchakaloff::Cubature) -> CmdResult {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Failure::io(format!("{}: {e}", dir.display())))?;
    }
    write_cubature(path, cub).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> CmdResult {
    std::fs::write(path, text).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))
}

fn target_for(
    measure: Distribution,
    moments: Option<&Path>,
    basis: &TestFunctionBasis,
) -> Result<MomentVector, Failure> {
    match (moments, measure) {
        (Some(path), _) => load_moment_vector(path, basis).map_err(|e| Failure::reading("moment file", e)),
        (None, Distribution::UniformCube) => Ok(analytic_moment_vector(basis)?),
        (None, Distribution::Gaussian) => Err(Failure::bad_input(
            "no analytic moments for the gaussian measure; pass --moments",
        )),
    }
}

pub fn construct(mut args: ConstructArgs) -> CmdResult {
    let seed = *args.seed.get_or_insert_with(entropy_seed);
    let distribution = parse_measure(&args.measure)?;
    let basis = enumerate_monomials(args.dim, args.degree)?;
    let target = target_for(distribution, args.moments.as_deref(), &basis)?;
    let config = ConstructionConfig {
        initial_pool: args.initial_pool,
        growth_factor: args.growth_factor,
        max_pool: args.max_pool,
        lp: LpOptions::with_tolerance(args.tol),
        seed,
        stream_id: args.stream,
        retry_with_bland: !args.no_bland_retry,
    };
    let cub = construct_exact(distribution, &basis, &target, &config)?;
    write_output(&args.output, &cub)?;
    write_manifest(&manifest_path_for(&args.output), "construct", &args)?;

    let pool = match cub.provenance {
        tchakaloff::CubatureProvenance::ExactConstruction { pool_size, .. } => pool_size,
        _ => 0,
    };
    println!("d        = {}", basis.len());
    println!("n        = {}", cub.len());
    println!("N_used   = {pool}");
    println!("residual = {:.3e}", cub.residual.unwrap_or(f64::NAN));
    println!("seed     = {seed}");
    println!("output   = {}", args.output.display());
    Ok(())
}

pub fn compress(mut args: CompressArgs) -> CmdResult {
    let basis = enumerate_monomials(args.dim, args.degree)?;
    let samples = match (&args.samples, args.count) {
        (Some(path), _) => load_samples(path, args.dim).map_err(|e| Failure::reading("sample file", e))?,
        (None, Some(count)) => {
            if count == 0 {
                return Err(Failure::bad_input("--count must be positive"));
            }
            let seed = *args.seed.get_or_insert_with(entropy_seed);
            SampleStream::new(parse_measure(&args.measure)?, args.dim, seed, args.stream).next_batch(count)
        }
        (None, None) => return Err(Failure::bad_input("pass --samples <csv> or --count <N>")),
    };
    if samples.is_empty() {
        return Err(Failure::bad_input("sample set is empty"));
    }
    let cub = compress_empirical(&samples, &basis, &LpOptions::with_tolerance(args.tol))?;
    write_output(&args.output, &cub)?;
    write_manifest(&manifest_path_for(&args.output), "compress", &args)?;

    let empirical = empirical_moments(&samples, &basis)?;
    let compressed = cub.moments(&basis)?;
    let bound = args.tol * empirical.max_abs().max(1.0);
    let mut worst = 0.0f64;
    println!("N = {}, d = {}, n = {}", samples.len(), basis.len(), cub.len());
    println!("{:>16} {:>24} {:>24} {:>10}", "monomial", "empirical", "compressed", "|diff|");
    for ((alpha, e), c) in basis.members().iter().zip(empirical.values()).zip(&compressed) {
        let diff = (e - c).abs();
        worst = worst.max(diff);
        println!("{:>16} {:>24} {:>24} {:>10.2e}", alpha.to_string(), fmt_f64(*e), fmt_f64(*c), diff);
    }
    println!("max |diff| = {worst:.3e} (bound {bound:.3e})");
    println!("output = {}", args.output.display());
    if worst > bound {
        return Err(Failure::check_failed(format!(
            "compressed moments deviate by {worst:.3e} > {bound:.3e}"
        )));
    }
    Ok(())
}

pub fn verify(args: VerifyArgs) -> CmdResult {
    let cub = read_cubature_unchecked(&args.cubature).map_err(|e| Failure::reading("cubature file", e))?;
    let basis = match (args.degree, &cub.basis) {
        (Some(m), _) => enumerate_monomials(args.dim.unwrap_or(cub.dim()), m)?,
        (None, Some(desc)) => {
            let b = TestFunctionBasis::from_descriptor(desc)?;
            match args.dim {
                Some(s) if s != b.input_dim() => enumerate_monomials(s, b.max_degree().unwrap_or(0))?,
                _ => b,
            }
        }
        (None, None) => {
            return Err(Failure::bad_input(
                "the cubature file names no basis; pass --degree (and optionally --dim)",
            ))
        }
    };
    let target = if args.measure == "stored" && args.moments.is_none() {
        let values = cub
            .target
            .clone()
            .ok_or_else(|| Failure::bad_input("the cubature file stores no target"))?;
        MomentVector::new(values, MomentProvenance::UserSupplied)?
    } else {
        target_for(parse_measure(&args.measure)?, args.moments.as_deref(), &basis)?
    };
    let report = tchakaloff::verify(&cub, &basis, &target, args.tol);
    print!("{report}");
    if let Some(e) = &report.dimension_error {
        return Err(Failure::bad_input(format!("dimension error: {e}")));
    }
    if !report.passed() {
        return Err(Failure::check_failed(report.failures().join("; ")));
    }
    Ok(())
}

fn parse_range(text: &str) -> Result<Vec<u64>, Failure> {
    let bad = || Failure::bad_input(format!("invalid range {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',') {
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.trim().parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

/// `1..3x1..5` -> every `(s, m)` pair.
pub fn parse_grid(text: &str) -> Result<Vec<(usize, u32)>, Failure> {
    let (s_part, m_part) = text
        .split_once('x')
        .ok_or_else(|| Failure::bad_input(format!("grid {text:?} must look like 1..3x1..5")))?;
    let ss = parse_range(s_part)?;
    let ms = parse_range(m_part)?;
    let mut cells = Vec::new();
    for &s in &ss {
        for &m in &ms {
            if s == 0 {
                return Err(Failure::bad_input("dimension must be positive"));
            }
            cells.push((s as usize, m as u32));
        }
    }
    Ok(cells)
}

fn parse_cell(text: &str) -> Result<(usize, u32), Failure> {
    let bad = || Failure::bad_input(format!("cell {text:?} must look like s,m"));
    let (s, m) = text.split_once(',').ok_or_else(bad)?;
    let s: usize = s.trim().parse().map_err(|_| bad())?;
    let m: u32 = m.trim().parse().map_err(|_| bad())?;
    if s == 0 {
        return Err(bad());
    }
    Ok((s, m))
}

pub fn experiment(mut args: ExperimentArgs) -> CmdResult {
    let seed = *args.seed.get_or_insert_with(entropy_seed);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        builder = builder.num_threads(jobs.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Failure::internal(format!("cannot start worker pool: {e}")))?;
    let lp = LpOptions {
        feasibility_tol: args.tol,
        time_limit: (args.time_limit > 0.0).then(|| Duration::from_secs_f64(args.time_limit)),
        ..LpOptions::default()
    };
    std::fs::create_dir_all(&args.output_dir)
        .map_err(|e| Failure::io(format!("{}: {e}", args.output_dir.display())))?;
    let out = |name: &str| args.output_dir.join(name);

    if args.mc_error {
        let n_list: Vec<usize> = parse_range(&args.n_list)?.into_iter().map(|n| n as usize).collect();
        let study = pool.install(|| mc_error_study(args.dim, args.degree, &n_list, args.reps, seed, &lp))?;
        let rendered = study.render();
        print!("{rendered}");
        write_text(&out("mc_error.txt"), &rendered)?;
        let json = serde_json::to_string_pretty(&study).map_err(|e| Failure::internal(e.to_string()))?;
        write_text(&out("mc_error.json"), &json)?;
        write_manifest(&out("manifest.toml"), "experiment", &args)?;
        return Ok(());
    }

    let cells = match (&args.grid, &args.cell) {
        (Some(g), _) => parse_grid(g)?,
        (None, Some(c)) => vec![parse_cell(c)?],
        (None, None) => return Err(Failure::bad_input("pass --grid, --cell or --mc-error")),
    };
    let config = ExperimentConfig {
        trials: args.trials,
        success_threshold: args.threshold,
        search_lo: args.search_lo,
        search_hi: args.search_hi,
        master_seed: seed,
        lp,
        parallel: true,
    };
    let table: TableRun = if cells.len() == 1 {
        let (s, m) = cells[0];
        let record = pool.install(|| estimate_n(s, m, &config))?;
        TableRun {
            cells: vec![(s, m, Ok(record))],
        }
    } else {
        pool.install(|| run_table(&cells, &config))
    };

    let mut records = String::from("[\n");
    for (i, (s, m, r)) in table.cells.iter().enumerate() {
        let item = match r {
            Ok(rec) => serde_json::to_value(rec).map_err(|e| Failure::internal(e.to_string()))?,
            Err(e) => serde_json::json!({ "s": s, "m": m, "error": e }),
        };
        let text = serde_json::to_string_pretty(&item).map_err(|e| Failure::internal(e.to_string()))?;
        let sep = if i + 1 < table.cells.len() { "," } else { "" };
        writeln!(records, "{text}{sep}").unwrap();
    }
    records.push_str("]\n");
    let rendered = table.render();
    print!("{rendered}");
    write_text(&out("records.json"), &records)?;
    write_text(&out("table.txt"), &rendered)?;
    write_text(&out("table.csv"), &table.to_csv())?;
    write_manifest(&out("manifest.toml"), "experiment", &args)?;

    let failed: Vec<String> = table
        .cells
        .iter()
        .filter_map(|(s, m, r)| r.as_ref().err().map(|e| format!("({s},{m}): {e}")))
        .collect();
    if !failed.is_empty() {
        return Err(Failure::new(exit::CHECK_FAILED, format!("cells failed: {}", failed.join("; "))));
    }
    Ok(())
}

pub fn product(args: ProductArgs) -> CmdResult {
    let base = read_cubature(&args.cubature).map_err(|e| Failure::reading("cubature file", e))?;
    let prod = product_cubature(&base, args.k, args.cap)?;
    let result = if args.reduce {
        let degree = args
            .degree
            .ok_or_else(|| Failure::bad_input("--reduce needs --degree"))?;
        let basis = enumerate_monomials(prod.dim(), degree)?;
        let mut own = prod.moments(&basis)?;
        own[0] = 1.0;
        let target = MomentVector::new(own, MomentProvenance::UserSupplied)?;
        subsample(&prod.nodes, &basis, &target, &LpOptions::with_tolerance(args.tol))?
    } else {
        prod
    };
    write_output(&args.output, &result)?;
    write_manifest(&manifest_path_for(&args.output), "product", &args)?;
    println!("n = {}", result.len());
    println!("output = {}", args.output.display());
    Ok(())
}

pub fn integrate(args: IntegrateArgs) -> CmdResult {
    let cub = read_cubature(&args.cubature).map_err(|e| Failure::reading("cubature file", e))?;
    let value = match (&args.values, &args.monomial) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::bad_input(format!("cannot read {}: {e}", path.display())))?;
            let mut values = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                values.push(line.parse::<f64>().map_err(|_| {
                    Failure::bad_input(format!("{}: line {}: not a number: {line:?}", path.display(), i + 1))
                })?);
            }
            tchakaloff::integrate(&cub, &values)?
        }
        (None, Some(exps)) => {
            let exponents: Vec<u32> = exps
                .split(',')
                .map(|e| e.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::bad_input(format!("invalid exponents {exps:?}")))?;
            if exponents.len() != cub.dim() {
                return Err(Failure::bad_input(format!(
                    "{} exponents for {}-dimensional nodes",
                    exponents.len(),
                    cub.dim()
                )));
            }
            let alpha = MultiIndex::new(exponents);
            tchakaloff::integrate_fn(&cub, |x| alpha.evaluate(x))
        }
        (None, None) => return Err(Failure::bad_input("pass --values or --monomial")),
    };
    println!("{}", fmt_f64(value));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("1..2x1..3").unwrap().len(), 6);
        assert_eq!(parse_grid("2x3").unwrap(), vec![(2, 3)]);
        assert_eq!(parse_grid("1,3x2").unwrap(), vec![(1, 2), (3, 2)]);
        assert!(parse_grid("1..3").is_err());
        assert!(parse_grid("3..1x1").is_err());
        assert!(parse_grid("0x1").is_err());
        assert_eq!(parse_cell("2, 3").unwrap(), (2, 3));
        assert!(parse_cell("2").is_err());
    }
}
