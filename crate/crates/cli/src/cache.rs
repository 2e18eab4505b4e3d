//! Advisory JSON cache for computed `c_n` values.
//!
//! Path resolution: `--cache <path>` flag, then the `PENNEY_CACHE`
//! environment variable, then `$XDG_CACHE_HOME/penney/cn-cache.json`,
//! then `~/.cache/penney/cn-cache.json`. The cache is validated against
//! recomputation on load (seeds plus three sampled recurrence steps);
//! a cache that fails validation is ignored, never trusted.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_bigint::BigUint;
use penney_core::sequence::CnTable;

pub const CACHE_ENV: &str = "PENNEY_CACHE";

pub fn resolve_path(flag: Option<PathBuf>) -> Option<PathBuf> {
    if let Some(path) = flag {
        return Some(path);
    }
    if let Ok(path) = std::env::var(CACHE_ENV) {
        if !path.is_empty() {
            return Some(PathBuf::from(path));
        }
    }
    let base = std::env::var("XDG_CACHE_HOME")
        .ok()
        .filter(|p| !p.is_empty())
        .map(PathBuf::from)
        .or_else(|| std::env::var("HOME").ok().map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("penney").join("cn-cache.json"))
}

/// Load cached values into the table. Returns how many entries were
/// adopted; invalid or unreadable caches count as empty.
pub fn load(table: &CnTable, path: &PathBuf) -> usize {
    let Ok(text) = std::fs::read_to_string(path) else {
        return 0;
    };
    let Ok(map) = serde_json::from_str::<BTreeMap<String, String>>(&text) else {
        eprintln!("warning: ignoring malformed cache at {}", path.display());
        return 0;
    };
    let mut entries = Vec::with_capacity(map.len());
    for (key, value) in map {
        let (Ok(n), Ok(v)) = (key.parse::<u64>(), value.parse::<BigUint>()) else {
            eprintln!("warning: ignoring malformed cache at {}", path.display());
            return 0;
        };
        entries.push((n, v));
    }
    match table.preload(entries) {
        Ok(adopted) => adopted,
        Err(err) => {
            eprintln!("warning: ignoring cache at {}: {err}", path.display());
            0
        }
    }
}

/// Persist the table when it has grown past what was loaded.
pub fn save(table: &CnTable, path: &PathBuf, loaded: usize) {
    let values = table.snapshot();
    if values.len() <= loaded + 3 {
        return;
    }
    let map: BTreeMap<String, String> = values
        .iter()
        .enumerate()
        .map(|(i, v)| ((i as u64 + 3).to_string(), v.to_string()))
        .collect();
    if let Some(parent) = path.parent() {
        let _ = std::fs::create_dir_all(parent);
    }
    match serde_json::to_string(&map) {
        Ok(text) => {
            if let Err(err) = std::fs::write(path, text) {
                eprintln!("warning: could not write cache {}: {err}", path.display());
            }
        }
        Err(err) => eprintln!("warning: could not serialize cache: {err}"),
    }
}
