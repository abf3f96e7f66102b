//! Optional TOML run file. Keys mirror the long flag names (`trial-offset`
//! or `trial_offset`); a flag given on the command line wins over the file.

use std::path::Path;
use std::str::FromStr;

use toml::{Table, Value};

use crate::error::{CliError, Result};

const KEYS: &[&str] = &[
    "algo",
    "problem",
    "rho",
    "eps",
    "delta",
    "gamma",
    "k",
    "alpha-mode",
    "alpha-constant",
    "seed",
    "trials",
    "trial-offset",
    "in",
    "out",
];

#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    table: Table,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })?;
        Self::parse(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let raw: Table = text
            .parse()
            .map_err(|e: toml::de::Error| e.message().to_string())?;
        let mut table = Table::new();
        for (key, value) in raw {
            let key = key.replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(format!("unknown key {key:?}"));
            }
            if matches!(
                value,
                Value::Table(_) | Value::Array(_) | Value::Datetime(_)
            ) {
                return Err(format!("key {key:?} must be a string, number or boolean"));
            }
            table.insert(key, value);
        }
        Ok(FileConfig { table })
    }

    /// The raw text of `key`, as a flag would spell it.
    pub fn text(&self, key: &str) -> Option<String> {
        self.table.get(key).map(|v| match v {
            Value::String(s) => s.clone(),
            Value::Integer(i) => i.to_string(),
            Value::Float(f) => f.to_string(),
            Value::Boolean(b) => b.to_string(),
            other => other.to_string(),
        })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.text(key)
            .map(|s| {
                s.parse()
                    .map_err(|_| CliError::usage(format!("config key {key:?}: cannot parse {s:?}")))
            })
            .transpose()
    }

    /// Flag, then file, then default.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: Option<T>) -> Result<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(v) = self.get(key)? {
            return Ok(v);
        }
        default.ok_or_else(|| CliError::usage(format!("missing required --{key}")))
    }

    /// Like [`pick`](Self::pick) for text that is parsed later (grids).
    pub fn pick_text(
        &self,
        flag: Option<String>,
        key: &str,
        default: Option<&str>,
    ) -> Result<String> {
        flag.or_else(|| self.text(key))
            .or_else(|| default.map(str::to_string))
            .ok_or_else(|| CliError::usage(format!("missing required --{key}")))
    }
}
