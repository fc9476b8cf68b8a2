//! `key = value` experiment files with `#` comments.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::{Error, Result};

pub const KNOWN_KEYS: [&str; 12] = [
    "scheme",
    "preset",
    "omega",
    "delta",
    "t_final",
    "c",
    "kappa",
    "mu",
    "radius",
    "half_extent",
    "out",
    "format",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigEntries {
    map: BTreeMap<String, String>,
}

impl ConfigEntries {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| Error::Parse(format!("invalid value `{v}` for `{key}`")))
            })
            .transpose()
    }

    /// Comma-separated list value.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<T>()
                            .map_err(|_| Error::Parse(format!("invalid entry `{s}` for `{key}`")))
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Parses the file body. Keys may use `-` or `_`; later lines win.
pub fn parse_config(text: &str) -> Result<ConfigEntries> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", no + 1)))?;
        let key = key.trim().replace('-', "_");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Parse(format!("line {}: unknown key `{key}`", no + 1)));
        }
        let value = value.trim();
        if value.is_empty() {
            return Err(Error::Parse(format!("line {}: empty value for `{key}`", no + 1)));
        }
        map.insert(key, value.to_string());
    }
    Ok(ConfigEntries { map })
}
