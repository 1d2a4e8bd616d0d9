//! Flat `key = value` configuration with command-line overrides.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum UsageError {
    #[error("unknown command '{0}'")]
    UnknownCommand(String),
    #[error("unknown key '{key}' for command {command}")]
    UnknownKey { command: String, key: String },
    #[error("bad value for '{key}': {msg}")]
    BadValue { key: String, msg: String },
    #[error("{0}")]
    Other(String),
}

pub struct KeySpec {
    pub name: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub command: String,
    pub values: BTreeMap<String, String>,
    pub seed: u64,
}

fn bad(key: &str, msg: impl Into<String>) -> UsageError {
    UsageError::BadValue { key: key.to_string(), msg: msg.into() }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, UsageError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| UsageError::Other(format!("config line {}: expected key = value", lineno + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Parses `--key=value` overrides.
pub fn parse_overrides(args: &[String]) -> Result<Vec<(String, String)>, UsageError> {
    args.iter()
        .map(|a| {
            let body = a
                .strip_prefix("--")
                .ok_or_else(|| UsageError::Other(format!("unexpected argument '{a}', expected --key=value")))?;
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| UsageError::Other(format!("override '{a}' needs the form --key=value")))?;
            Ok((k.to_string(), v.to_string()))
        })
        .collect()
}

impl ExperimentConfig {
    /// Applies defaults, then file entries, then overrides; rejects keys not in `spec`.
    pub fn build(
        command: &str,
        spec: &[KeySpec],
        file: Option<&Path>,
        overrides: &[(String, String)],
        seed: Option<u64>,
    ) -> Result<Self, UsageError> {
        let mut values: BTreeMap<String, String> =
            spec.iter().map(|k| (k.name.to_string(), k.default.to_string())).collect();
        let mut file_seed = None;
        let mut entries = Vec::new();
        if let Some(path) = file {
            let text = fs::read_to_string(path)
                .map_err(|e| UsageError::Other(format!("cannot read config {}: {e}", path.display())))?;
            entries.extend(parse_config_text(&text)?);
        }
        entries.extend(overrides.iter().cloned());
        for (k, v) in entries {
            if k == "seed" {
                file_seed = Some(v.parse::<u64>().map_err(|_| bad("seed", "expected a nonnegative integer"))?);
                continue;
            }
            if !values.contains_key(&k) {
                return Err(UsageError::UnknownKey { command: command.to_string(), key: k });
            }
            values.insert(k, v);
        }
        Ok(Self { command: command.to_string(), values, seed: seed.or(file_seed).unwrap_or(1) })
    }

    pub fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    pub fn strings(&self, key: &str) -> Result<Vec<String>, UsageError> {
        let v: Vec<String> = self.raw(key).split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        if v.is_empty() {
            return Err(bad(key, "empty list"));
        }
        Ok(v)
    }

    pub fn floats(&self, key: &str) -> Result<Vec<f64>, UsageError> {
        self.strings(key)?
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| bad(key, format!("'{s}' is not a number")))
            })
            .collect()
    }

    pub fn ints(&self, key: &str) -> Result<Vec<i64>, UsageError> {
        self.strings(key)?
            .iter()
            .map(|s| s.parse::<i64>().map_err(|_| bad(key, format!("'{s}' is not an integer"))))
            .collect()
    }

    pub fn float(&self, key: &str) -> Result<f64, UsageError> {
        single(key, self.floats(key)?)
    }

    pub fn int(&self, key: &str) -> Result<i64, UsageError> {
        single(key, self.ints(key)?)
    }

    pub fn usize(&self, key: &str) -> Result<usize, UsageError> {
        usize::try_from(self.int(key)?).map_err(|_| bad(key, "must be nonnegative"))
    }

    pub fn string(&self, key: &str) -> Result<String, UsageError> {
        single(key, self.strings(key)?)
    }
}

fn single<T>(key: &str, mut v: Vec<T>) -> Result<T, UsageError> {
    if v.len() != 1 {
        return Err(bad(key, "expected a single value"));
    }
    Ok(v.remove(0))
}
