use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rabi_qpt::experiments::FockDim;
use rabi_qpt::model::ModelParams;
use serde_json::Value;

use crate::args::Common;

const COMMON_KEYS: &[&str] = &[
    "Omega-ratio",
    "chi",
    "alpha",
    "g0-ratio",
    "omega-a-ratio",
    "fock-dim",
    "format",
    "output",
    "no-timestamp",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Merged settings of one invocation: file values overlaid by flags.
#[derive(Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, Value>,
}

impl Settings {
    /// Reads `--config` (if any), rejects keys outside `COMMON_KEYS` and
    /// `extra_keys`, then applies the common flags.
    pub fn load(common: &Common, extra_keys: &[&str]) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        if let Some(path) = &common.config {
            values = read_file(path)?;
            let unknown: Vec<&String> = values
                .keys()
                .filter(|k| !COMMON_KEYS.contains(&k.as_str()) && !extra_keys.contains(&k.as_str()))
                .collect();
            if !unknown.is_empty() {
                return Err(format!("unknown config keys: {unknown:?}"));
            }
        }
        let mut s = Self { values };
        s.set("Omega-ratio", common.omega_ratio.map(Value::from));
        s.set("chi", common.chi.map(Value::from));
        s.set("alpha", common.alpha.map(Value::from));
        s.set("g0-ratio", common.g0_ratio.map(Value::from));
        s.set("omega-a-ratio", common.omega_a_ratio.map(Value::from));
        s.set("fock-dim", common.fock_dim.clone().map(Value::from));
        s.set("format", common.format.clone().map(Value::from));
        s.set("output", common.output.as_ref().map(|p| Value::from(p.display().to_string())));
        if common.no_timestamp {
            s.set("no-timestamp", Some(Value::Bool(true)));
        }
        Ok(s)
    }

    /// Overrides `key` when the flag was given.
    pub fn set(&mut self, key: &str, value: Option<Value>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), v);
        }
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key).filter(|v| !v.is_null())
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, String> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Number(n)) => n.as_f64().ok_or_else(|| format!("`{key}` is not a number")),
            Some(Value::String(s)) => s.trim().parse().map_err(|_| format!("`{key}`: cannot parse `{s}` as a number")),
            Some(v) => Err(format!("`{key}`: expected a number, found {v}")),
        }
    }

    pub fn u32_or(&self, key: &str, default: u32) -> Result<u32, String> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Number(n)) => n
                .as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| format!("`{key}` must be a non-negative integer")),
            Some(Value::String(s)) => s.trim().parse().map_err(|_| format!("`{key}`: cannot parse `{s}` as an integer")),
            Some(v) => Err(format!("`{key}`: expected an integer, found {v}")),
        }
    }

    pub fn string(&self, key: &str) -> Option<String> {
        match self.get(key)? {
            Value::String(s) => Some(s.clone()),
            other => Some(other.to_string()),
        }
    }

    /// Comma-separated string, JSON array or single scalar, as strings.
    pub fn list(&self, key: &str) -> Option<Vec<String>> {
        match self.get(key)? {
            Value::Array(items) => Some(
                items
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect(),
            ),
            Value::String(s) => Some(s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()),
            other => Some(vec![other.to_string()]),
        }
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.get(key), Some(Value::Bool(true)))
    }

    pub fn format(&self) -> Result<Format, String> {
        match self.string("format").as_deref() {
            None | Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(other) => Err(format!("unknown format `{other}` (csv or json)")),
        }
    }

    pub fn fock_dim(&self) -> Result<FockDim, String> {
        match self.string("fock-dim").as_deref() {
            None | Some("auto") => Ok(FockDim::Auto),
            Some(s) => s.parse().map(FockDim::Fixed).map_err(|_| format!("`fock-dim`: expected an integer or `auto`, found `{s}`")),
        }
    }

    pub fn timestamp(&self) -> bool {
        !self.flag("no-timestamp")
    }

    /// Model parameters with ω = 1. Defaults: Ω/ω = 100, χ = 0, α = 0,
    /// g0/ω = 0, ω_a/ω = 1.
    pub fn params(&self, n: u32) -> Result<ModelParams, String> {
        let p = ModelParams::from_ratios(
            self.f64_or("Omega-ratio", 100.0)?,
            self.f64_or("chi", 0.0)?,
            self.f64_or("alpha", 0.0)?,
            self.f64_or("g0-ratio", 0.0)?,
            n,
        )
        .map_err(|e| e.to_string())?;
        p.with_omega_a(self.f64_or("omega-a-ratio", 1.0)?).map_err(|e| e.to_string())
    }
}

fn read_file(path: &Path) -> Result<BTreeMap<String, Value>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    match serde_json::from_str::<Value>(&text).map_err(|e| format!("{}: {e}", path.display()))? {
        Value::Object(map) => {
            if let Some((k, _)) = map.iter().find(|(_, v)| v.is_object()) {
                return Err(format!("{}: config must be flat, `{k}` is nested", path.display()));
            }
            Ok(map.into_iter().collect())
        }
        _ => Err(format!("{}: config must be a JSON object", path.display())),
    }
}
