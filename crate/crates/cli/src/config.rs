//! `key = value` configuration files. Command-line flags take precedence.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::failure::Failure;

const KNOWN_KEYS: &[&str] = &[
    "n", "b", "p", "q", "metric", "trials", "seed", "lambda", "format", "decimals",
    "p_values", "n_values", "b_rules",
];

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, Failure> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Failure::Parameter(format!("config line {}: expected key = value, got '{line}'", lineno + 1))
            })?;
            let key = key.trim().to_ascii_lowercase().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Failure::Parameter(format!(
                    "config line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    fn raw<'a>(&'a self, keys: &[&'a str]) -> Option<(&'a str, &'a str)> {
        keys.iter()
            .find_map(|&k| self.values.get(k).map(|v| (k, v.as_str())))
    }

    /// The flag value if given, else the first config key present.
    pub fn pick<T>(&self, flag: Option<T>, keys: &[&str]) -> Result<Option<T>, Failure>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(keys) {
            None => Ok(None),
            Some((key, value)) => value
                .parse()
                .map(Some)
                .map_err(|e| Failure::Parameter(format!("config key '{key}': {e}"))),
        }
    }

    /// Like [`Config::pick`] for comma-separated lists.
    pub fn pick_list<T>(&self, flag: Option<Vec<T>>, keys: &[&str]) -> Result<Option<Vec<T>>, Failure>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(keys) {
            None => Ok(None),
            Some((key, value)) => value
                .split(',')
                .map(|item| {
                    item.trim()
                        .parse()
                        .map_err(|e| Failure::Parameter(format!("config key '{key}': {e}")))
                })
                .collect::<Result<Vec<T>, _>>()
                .map(Some),
        }
    }
}
