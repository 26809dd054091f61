//! Flat `key = value` config files. Each key names a long flag; flags given
//! on the command line win.

use std::ffi::OsString;
use std::path::Path;

use crate::CliError;

pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key = value", no + 1)));
        };
        let k = k.trim().replace('_', "-");
        if k.is_empty() || k == "config" {
            return Err(CliError::Usage(format!("config line {}: bad key", no + 1)));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

fn flag_given(args: &[OsString], key: &str) -> bool {
    let long = format!("--{key}");
    let prefix = format!("--{key}=");
    args.iter().any(|a| a.to_str().is_some_and(|s| s == long || s.starts_with(&prefix)))
}

/// Finds `--config <path>` in `args`, removes it and appends the flags from
/// the file that the command line does not already set.
pub fn merge(mut args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(pos) = args.iter().position(|a| a == "--config" || a.to_str().is_some_and(|s| s.starts_with("--config="))) else {
        return Ok(args);
    };
    let flag = args.remove(pos).into_string().unwrap_or_default();
    let path = match flag.strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None if pos < args.len() => args.remove(pos).to_string_lossy().into_owned(),
        None => return Err(CliError::Usage("--config needs a path".into())),
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
    for (k, v) in parse(&text)? {
        if flag_given(&args, &k) {
            continue;
        }
        args.push(format!("--{k}").into());
        if v != "true" {
            args.push(v.into());
        }
    }
    Ok(args)
}
