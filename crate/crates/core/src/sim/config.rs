//! Flat `key = value` configuration files and grid specifications.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Keys accepted in configuration files; they mirror the CLI flag names.
pub const KNOWN_KEYS: [&str; 15] = [
    "mod-order",
    "csi",
    "feedback",
    "iterations",
    "ebn0",
    "es",
    "frames",
    "errors",
    "trials",
    "seed",
    "out",
    "plot",
    "workers",
    "info-len",
    "codeword-len",
];

/// Parses `key = value` lines. Blank lines and `#` comments are ignored; a key
/// may appear once.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("line {}: unknown key '{key}'", n + 1)));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key '{key}'", n + 1)));
        }
    }
    Ok(map)
}

/// `start:step:stop` (inclusive) or a single value.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("invalid grid '{spec}', expected start:step:stop"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    match parts[..] {
        [v] if v.is_finite() => Ok(vec![v]),
        [start, step, stop] if step > 0.0 && stop >= start && start.is_finite() && stop.is_finite() => {
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            // snapped to 1e-9
            Ok((0..=n)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        _ => Err(bad()),
    }
}
