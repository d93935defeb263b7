//! `key = value` configuration files, spliced into the argument list so that
//! flags given on the command line take precedence.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Parse `key = value` lines. Blank lines and lines starting with `#` are
/// skipped. Keys use the long flag names, with `_` accepted for `-`.
pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
        .map(|(lineno, line)| {
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("config line {lineno}: expected `key = value`"))?;
            let key = key.trim().replace('_', "-");
            if key.is_empty() || key == "config" {
                bail!("config line {lineno}: invalid key `{}`", key);
            }
            Ok((key, value.trim().trim_matches('"').to_string()))
        })
        .collect()
}

/// Flag tokens for parsed entries. `true` becomes a bare switch and `false`
/// drops the entry.
pub fn to_flags(entries: &[(String, String)]) -> Vec<OsString> {
    let mut out = Vec::new();
    for (key, value) in entries {
        match value.as_str() {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                out.push(format!("--{key}").into());
                out.push(value.into());
            }
        }
    }
    out
}

/// Value of `--config` in a raw argument list, if present.
pub fn find_config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

/// Insert the config file's flags directly after the subcommand name, ahead
/// of every user-supplied flag.
pub fn splice(args: Vec<OsString>, subcommands: &[&str]) -> Result<Vec<OsString>> {
    let Some(path) = find_config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(Path::new(&path))
        .with_context(|| format!("cannot read config file {}", path.to_string_lossy()))?;
    let flags = to_flags(&parse(&text)?);
    let Some(pos) = args
        .iter()
        .position(|a| subcommands.contains(&a.to_string_lossy().as_ref()))
    else {
        return Ok(args);
    };
    let mut out = args[..=pos].to_vec();
    out.extend(flags);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}
