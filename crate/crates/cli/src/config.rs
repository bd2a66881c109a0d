//! Run configuration: tolerances and search defaults from a TOML file, with
//! per-key overrides from the command line.
//!
//! ```toml
//! budget = 256
//! seed = 0
//!
//! [tolerances]
//! tol_orth = 1e-8
//! ```

use std::fs;

use anyhow::{bail, Context, Result};
use bjorth::Tolerances;
use serde::{Deserialize, Serialize};

pub const DEFAULT_BUDGET: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub budget: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for Config {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, seed: 0, tolerances: Tolerances::default() }
    }
}

impl Config {
    /// Reads the optional file, then applies `key=value` overrides. Keys are
    /// `budget`, `seed`, or any tolerance name.
    pub fn load(path: Option<&str>, overrides: &[String]) -> Result<Self> {
        let mut table = match path {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {p}"))?;
                text.parse::<toml::Table>().with_context(|| format!("parsing {p}"))?
            }
            None => toml::Table::new(),
        };
        for item in overrides {
            let Some((key, value)) = item.split_once('=') else {
                bail!("override {item:?} is not of the form key=value");
            };
            let key = key.trim();
            let value: toml::Value = value
                .trim()
                .parse::<toml::Value>()
                .or_else(|_| format!("v = {}", value.trim()).parse::<toml::Table>().map(|t| t["v"].clone()))
                .with_context(|| format!("bad value in override {item:?}"))?;
            if key == "budget" || key == "seed" {
                table.insert(key.into(), value);
            } else {
                let entry = table.entry("tolerances").or_insert_with(|| toml::Value::Table(toml::Table::new()));
                let Some(t) = entry.as_table_mut() else {
                    bail!("`tolerances` must be a table");
                };
                t.insert(key.into(), value);
            }
        }
        toml::Value::Table(table).try_into().context("invalid configuration")
    }
}
