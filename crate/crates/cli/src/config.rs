//! Flags and config files meet here. Parsed flags are serialized to a TOML
//! table, the config file's keys replace matching entries, and the result
//! is deserialized back, so a value in the file always wins over a flag.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{CliError, CliResult};

pub fn resolve<T: Serialize + DeserializeOwned>(flags: &T, config: Option<&Path>) -> CliResult<T> {
    let Some(path) = config else {
        return flags_roundtrip(flags);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    let file: toml::Table = text
        .parse()
        .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
    let mut merged = to_table(flags)?;
    for (k, v) in &file {
        merged.insert(k.clone(), v.clone());
    }
    let resolved: T = toml::Value::Table(merged)
        .try_into()
        .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
    // a key that does not survive the round trip is not a known setting
    let known = to_table(&resolved)?;
    if let Some(k) = file.keys().find(|k| !known.contains_key(*k)) {
        return Err(CliError::Validation(format!(
            "config {}: unknown key '{k}'",
            path.display()
        )));
    }
    Ok(resolved)
}

fn flags_roundtrip<T: Serialize + DeserializeOwned>(flags: &T) -> CliResult<T> {
    toml::Value::Table(to_table(flags)?)
        .try_into()
        .map_err(|e| CliError::Validation(e.to_string()))
}

fn to_table<T: Serialize>(v: &T) -> CliResult<toml::Table> {
    match toml::Value::try_from(v) {
        Ok(toml::Value::Table(t)) => Ok(t),
        Ok(_) => Err(CliError::Other("settings did not serialize to a table".into())),
        Err(e) => Err(CliError::Other(e.to_string())),
    }
}
