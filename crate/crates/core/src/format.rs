//! Cubature file format.
//!
//! ```text
//! # tchakaloff cubature
//! format_version = 1
//! s = 1
//! d = 4
//! basis = monomial s=1 m=3
//! provenance = exact_construction pool_size=8 seed=42 stream=0
//! residual = 5.5511151231257827e-17
//! target = 1.0000000000000000e0 5.0000000000000000e-1 ...
//! n = 3
//! nodes
//! <x_1> ... <x_s> <w>
//! ```
//!
//! Header lines are `key = value`; `d`, `basis`, `residual` and `target` are
//! omitted when unknown (unreduced product rules). Every float is written
//! with 17 significant digits, so binary64 values survive a round trip.

use std::fmt::Write as _;
use std::path::Path;

use crate::basis::TestFunctionBasis;
use crate::cubature::{Cubature, CubatureProvenance};
use crate::error::{Error, Result};
use crate::points::PointSet;

pub const FORMAT_VERSION: u32 = 1;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn provenance_record(p: &CubatureProvenance) -> String {
    match p {
        CubatureProvenance::ExactConstruction {
            pool_size,
            seed,
            stream_id,
        } => format!("exact_construction pool_size={pool_size} seed={seed} stream={stream_id}"),
        CubatureProvenance::Subsampled => "subsampled".into(),
        CubatureProvenance::Product { k } => format!("product k={k}"),
    }
}

fn parse_provenance(text: &str, line: usize) -> Result<CubatureProvenance> {
    let mut parts = text.split_whitespace();
    let kind = parts.next().unwrap_or("");
    let mut field = |name: &str| -> Result<u64> {
        let part = parts
            .next()
            .ok_or_else(|| Error::parse(line, format!("provenance lacks {name}")))?;
        let value = part
            .strip_prefix(name)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| Error::parse(line, format!("expected {name}=..., found {part:?}")))?;
        value
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid {name} value {value:?}")))
    };
    match kind {
        "exact_construction" => Ok(CubatureProvenance::ExactConstruction {
            pool_size: field("pool_size")? as usize,
            seed: field("seed")?,
            stream_id: field("stream")?,
        }),
        "subsampled" => Ok(CubatureProvenance::Subsampled),
        "product" => Ok(CubatureProvenance::Product {
            k: field("k")? as u32,
        }),
        other => Err(Error::parse(line, format!("unknown provenance {other:?}"))),
    }
}

pub fn write_cubature_string(cub: &Cubature) -> String {
    let mut out = String::new();
    out.push_str("# tchakaloff cubature\n");
    writeln!(out, "format_version = {FORMAT_VERSION}").unwrap();
    writeln!(out, "s = {}", cub.dim()).unwrap();
    if let Some(target) = &cub.target {
        writeln!(out, "d = {}", target.len()).unwrap();
    }
    if let Some(basis) = &cub.basis {
        writeln!(out, "basis = {basis}").unwrap();
    }
    writeln!(out, "provenance = {}", provenance_record(&cub.provenance)).unwrap();
    if let Some(r) = cub.residual {
        writeln!(out, "residual = {}", fmt_f64(r)).unwrap();
    }
    if let Some(target) = &cub.target {
        let values: Vec<String> = target.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(out, "target = {}", values.join(" ")).unwrap();
    }
    writeln!(out, "n = {}", cub.len()).unwrap();
    out.push_str("nodes\n");
    for (node, &w) in cub.nodes.rows().zip(&cub.weights) {
        for &x in node {
            out.push_str(&fmt_f64(x));
            out.push(' ');
        }
        out.push_str(&fmt_f64(w));
        out.push('\n');
    }
    out
}

pub fn write_cubature(path: &Path, cub: &Cubature) -> Result<()> {
    std::fs::write(path, write_cubature_string(cub))?;
    Ok(())
}

/// Parses the file structure without checking weight or moment invariants.
pub fn parse_cubature_unchecked(text: &str) -> Result<Cubature> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut version = None;
    let mut s = None;
    let mut d = None;
    let mut basis = None;
    let mut provenance = None;
    let mut residual = None;
    let mut target: Option<Vec<f64>> = None;
    let mut n = None;
    let mut saw_nodes = false;

    for (lineno, line) in lines.by_ref() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "nodes" {
            saw_nodes = true;
            break;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| Error::parse(lineno, format!("expected key = value, found {line:?}")))?;
        match key {
            "format_version" => version = Some(parse_num::<u32>(value, lineno)?),
            "s" => s = Some(parse_num::<usize>(value, lineno)?),
            "d" => d = Some(parse_num::<usize>(value, lineno)?),
            "basis" => basis = Some(value.to_string()),
            "provenance" => provenance = Some(parse_provenance(value, lineno)?),
            "residual" => residual = Some(parse_float(value, lineno)?),
            "target" => {
                target = Some(
                    value
                        .split_whitespace()
                        .map(|v| parse_float(v, lineno))
                        .collect::<Result<_>>()?,
                )
            }
            "n" => n = Some(parse_num::<usize>(value, lineno)?),
            other => return Err(Error::parse(lineno, format!("unknown header key {other:?}"))),
        }
    }

    match version {
        Some(FORMAT_VERSION) => {}
        Some(v) => return Err(Error::parse(1, format!("unsupported format_version {v}"))),
        None => return Err(Error::parse(1, "missing format_version")),
    }
    if !saw_nodes {
        return Err(Error::parse(0, "missing nodes section"));
    }
    let s = s.ok_or_else(|| Error::parse(0, "missing s"))?;
    if s == 0 {
        return Err(Error::parse(0, "s must be positive"));
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing n"))?;
    let provenance = provenance.ok_or_else(|| Error::parse(0, "missing provenance"))?;
    if let (Some(d), Some(t)) = (d, &target) {
        if t.len() != d {
            return Err(Error::parse(0, format!("target has {} entries, d = {d}", t.len())));
        }
    }

    let mut nodes = PointSet::with_capacity(s, n);
    let mut weights = Vec::with_capacity(n);
    let mut row = Vec::with_capacity(s + 1);
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        row.clear();
        for v in line.split_whitespace() {
            row.push(parse_float(v, lineno)?);
        }
        if row.len() != s + 1 {
            return Err(Error::parse(
                lineno,
                format!("expected {} values (s coordinates and a weight), found {}", s + 1, row.len()),
            ));
        }
        nodes.push_unchecked(&row[..s]);
        weights.push(row[s]);
    }
    if weights.len() != n {
        return Err(Error::parse(0, format!("header says n = {n}, found {} records", weights.len())));
    }
    Ok(Cubature {
        nodes,
        weights,
        basis,
        target,
        residual,
        provenance,
    })
}

/// Parses and validates: positive normalized weights, node bound, and basis consistency.
pub fn parse_cubature(text: &str) -> Result<Cubature> {
    let cub = parse_cubature_unchecked(text)?;
    cub.validate()?;
    if let Some(desc) = &cub.basis {
        let basis = TestFunctionBasis::from_descriptor(desc)?;
        if basis.input_dim() != cub.dim() {
            return Err(Error::DimensionMismatch {
                context: "basis descriptor vs node dimension",
                expected: cub.dim(),
                found: basis.input_dim(),
            });
        }
        if let Some(t) = &cub.target {
            if t.len() != basis.len() {
                return Err(Error::DimensionMismatch {
                    context: "target length vs basis size",
                    expected: basis.len(),
                    found: t.len(),
                });
            }
        }
    }
    Ok(cub)
}

pub fn read_cubature(path: &Path) -> Result<Cubature> {
    parse_cubature(&std::fs::read_to_string(path)?)
}

pub fn read_cubature_unchecked(path: &Path) -> Result<Cubature> {
    parse_cubature_unchecked(&std::fs::read_to_string(path)?)
}

fn parse_num<T: std::str::FromStr>(v: &str, line: usize) -> Result<T> {
    v.parse()
        .map_err(|_| Error::parse(line, format!("invalid integer {v:?}")))
}

fn parse_float(v: &str, line: usize) -> Result<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid number {v:?}")))?;
    if !x.is_finite() {
        return Err(Error::parse(line, format!("non-finite number {v:?}")));
    }
    Ok(x)
}
