//! Config files and run manifests.
//!
//! A config file is a TOML table whose keys are the long flag names of one
//! subcommand (`max_pool` or `max-pool`). Its entries are spliced into the
//! argument list ahead of the command-line flags, and every argument is
//! declared overridable, so flags given on the command line win.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::exit::Failure;

pub const MANIFEST_COMMAND_KEY: &str = "command";

/// Expands `--config <file>` in `argv` (program name first, subcommand second).
pub fn expand_config(argv: Vec<String>) -> Result<Vec<String>, Failure> {
    let Some(path) = find_config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::bad_input(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| Failure::bad_input(format!("invalid config {}: {e}", path.display())))?;

    let subcommand = argv.get(1).cloned().unwrap_or_default();
    if let Some(toml::Value::String(cmd)) = table.get(MANIFEST_COMMAND_KEY) {
        if *cmd != subcommand {
            return Err(Failure::bad_input(format!(
                "config {} was written for `{cmd}`, not `{subcommand}`",
                path.display()
            )));
        }
    }
    let mut injected = Vec::new();
    for (key, value) in &table {
        if key == MANIFEST_COMMAND_KEY || key == "config" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            toml::Value::Boolean(true) => injected.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => {
                injected.push(flag);
                injected.push(s.clone());
            }
            toml::Value::Integer(i) => {
                injected.push(flag);
                injected.push(i.to_string());
            }
            toml::Value::Float(f) => {
                injected.push(flag);
                injected.push(f.to_string());
            }
            other => {
                return Err(Failure::bad_input(format!(
                    "config key {key}: unsupported value {other}"
                )))
            }
        }
    }
    let split = argv.len().min(2);
    let mut out = argv[..split].to_vec();
    out.extend(injected);
    out.extend_from_slice(&argv[split..]);
    Ok(out)
}

fn find_config_path(argv: &[String]) -> Option<PathBuf> {
    let mut iter = argv.iter().skip(2);
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            return iter.next().map(PathBuf::from);
        }
        if let Some(p) = arg.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Serializes the resolved arguments of `command` as TOML (keys sorted).
pub fn manifest_string<T: Serialize>(command: &str, args: &T) -> Result<String, Failure> {
    let mut table = toml::Table::try_from(args)
        .map_err(|e| Failure::internal(format!("cannot serialize manifest: {e}")))?;
    table.remove("config");
    table.insert(MANIFEST_COMMAND_KEY.into(), toml::Value::String(command.into()));
    Ok(table.to_string())
}

pub fn write_manifest<T: Serialize>(path: &Path, command: &str, args: &T) -> Result<(), Failure> {
    let text = manifest_string(command, args)?;
    std::fs::write(path, text)
        .map_err(|e| Failure::io(format!("cannot write manifest {}: {e}", path.display())))
}

/// `<output>.manifest.toml`
pub fn manifest_path_for(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.toml");
    PathBuf::from(name)
}

/// TOML integers are signed 64-bit, so seeds travel as strings.
pub fn opt_u64_as_string<S: serde::Serializer>(v: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

pub fn u64_as_string<S: serde::Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
