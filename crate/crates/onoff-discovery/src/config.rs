//! Flat key-value scenario configuration.
//!
//! The on-disk format is one `key = value` pair per line with `#`
//! comments. CLI flags override file values, and every run can log the
//! fully resolved configuration for the reproducibility audit trail.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::experiment::{Scenario, SchemeParams};

pub type ConfigMap = BTreeMap<String, String>;

pub fn parse_kv(text: &str) -> Result<ConfigMap> {
    let mut map = ConfigMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::config(format!(
                "line {}: expected 'key = value', got '{raw}'",
                lineno + 1
            )));
        };
        map.insert(key.trim().to_ascii_lowercase(), value.trim().to_string());
    }
    Ok(map)
}

fn get_parsed<T: std::str::FromStr>(map: &ConfigMap, key: &str) -> Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::config(format!("invalid value for {key}: '{v}'"))),
    }
}

fn require<T: std::str::FromStr>(map: &ConfigMap, key: &str) -> Result<T> {
    get_parsed(map, key)?.ok_or_else(|| Error::config(format!("missing required key '{key}'")))
}

fn get_or<T: std::str::FromStr>(map: &ConfigMap, key: &str, default: T) -> Result<T> {
    Ok(get_parsed(map, key)?.unwrap_or(default))
}

fn parse_bool(map: &ConfigMap, key: &str, default: bool) -> Result<bool> {
    match map.get(key).map(|s| s.as_str()) {
        None => Ok(default),
        Some("true") | Some("1") | Some("yes") | Some("on") => Ok(true),
        Some("false") | Some("0") | Some("no") | Some("off") => Ok(false),
        Some(v) => Err(Error::config(format!("invalid boolean for {key}: '{v}'"))),
    }
}

pub fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::config(format!("invalid number '{t}' in list")))
        })
        .collect()
}

/// Build a scenario from a config map (file contents merged with CLI
/// overrides). Required keys: `scheme`, `population`, `mean_neighbors`,
/// `snr_db`; scheme-specific keys as below.
pub fn scenario_from_map(map: &ConfigMap) -> Result<Scenario> {
    let scheme_name: String = require(map, "scheme")?;
    let scheme = match scheme_name.as_str() {
        "random-gt" => SchemeParams::RandomGt {
            m_slots: require(map, "m_slots")?,
            on_fraction: require(map, "q")?,
            energy_threshold: require(map, "threshold")?,
            tolerance: get_or(map, "tolerance", 2u32)?,
            phase_randomization: parse_bool(map, "phases", true)?,
        },
        "rm-chirp" => SchemeParams::RmChirp {
            m: require(map, "m")?,
            m0: get_or(map, "m0", 1usize)?,
            n1: require(map, "n1")?,
            n2: require(map, "n2")?,
            max_iterations: get_parsed(map, "t_max")?,
            accept_threshold: get_parsed(map, "eta0")?,
            weak_limit: get_or(map, "n0", 5usize)?,
        },
        other => {
            return Err(Error::config(format!(
                "unknown scheme '{other}' (expected random-gt or rm-chirp)"
            )))
        }
    };
    let snr_db_list = parse_f64_list(
        map.get("snr_db")
            .ok_or_else(|| Error::config("missing required key 'snr_db'"))?,
    )?;
    let scenario = Scenario {
        scheme,
        population: require(map, "population")?,
        mean_neighbors: require(map, "mean_neighbors")?,
        path_loss_exponent: get_or(map, "alpha", 3.0)?,
        neighbor_threshold: get_or(map, "eta", 0.05)?,
        snr_db_list,
        realizations: get_or(map, "realizations", 10usize)?,
        query_nodes: get_or(map, "query_nodes", 100usize)?,
        network_wide: parse_bool(map, "network_wide", false)?,
        master_seed: get_or(map, "seed", 0u64)?,
        workers: get_or(map, "workers", 0usize)?,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Dump the fully resolved scenario back to the flat format.
pub fn resolved_config(s: &Scenario) -> String {
    use crate::numeric::fmt_sig;
    let mut out = String::new();
    out.push_str(&format!("scheme = {}\n", s.scheme.name()));
    match &s.scheme {
        SchemeParams::RandomGt {
            m_slots,
            on_fraction,
            energy_threshold,
            tolerance,
            phase_randomization,
        } => {
            out.push_str(&format!("m_slots = {m_slots}\n"));
            out.push_str(&format!("q = {}\n", fmt_sig(*on_fraction, 6)));
            out.push_str(&format!("threshold = {}\n", fmt_sig(*energy_threshold, 6)));
            out.push_str(&format!("tolerance = {tolerance}\n"));
            out.push_str(&format!("phases = {phase_randomization}\n"));
        }
        SchemeParams::RmChirp { m, m0, n1, n2, max_iterations, accept_threshold, weak_limit } => {
            out.push_str(&format!("m = {m}\nm0 = {m0}\nn1 = {n1}\nn2 = {n2}\n"));
            if let Some(t) = max_iterations {
                out.push_str(&format!("t_max = {t}\n"));
            }
            if let Some(e) = accept_threshold {
                out.push_str(&format!("eta0 = {}\n", fmt_sig(*e, 6)));
            }
            out.push_str(&format!("n0 = {weak_limit}\n"));
        }
    }
    out.push_str(&format!("population = {}\n", s.population));
    out.push_str(&format!("mean_neighbors = {}\n", fmt_sig(s.mean_neighbors, 6)));
    out.push_str(&format!("alpha = {}\n", fmt_sig(s.path_loss_exponent, 6)));
    out.push_str(&format!("eta = {}\n", fmt_sig(s.neighbor_threshold, 6)));
    let snrs: Vec<String> = s.snr_db_list.iter().map(|v| fmt_sig(*v, 6)).collect();
    out.push_str(&format!("snr_db = {}\n", snrs.join(",")));
    out.push_str(&format!("realizations = {}\n", s.realizations));
    out.push_str(&format!("query_nodes = {}\n", s.query_nodes));
    out.push_str(&format!("network_wide = {}\n", s.network_wide));
    out.push_str(&format!("seed = {}\n", s.master_seed));
    out.push_str(&format!("workers = {}\n", s.workers));
    out
}
