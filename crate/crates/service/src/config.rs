//! Service configuration: a TOML file with `ABSTEXT_*` environment overrides.

use std::path::{Path, PathBuf};

use abstext::entity::RemoteEntityClient;
use abstext::registry::RegistryConfig;
use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub listen: String,
    pub data_dir: PathBuf,
    pub cache_capacity: usize,
    pub depth_limit: usize,
    /// Fetch unknown items from the remote entity service on store.
    pub remote_fetch: bool,
    pub remote_url: String,
    /// Write accepted edits back to the data directory.
    pub persist: bool,
}

impl Default for Config {
    fn default() -> Self {
        let registry = RegistryConfig::default();
        Config {
            listen: "127.0.0.1:8080".into(),
            data_dir: PathBuf::from("fixtures"),
            cache_capacity: registry.cache_capacity,
            depth_limit: registry.depth_limit,
            remote_fetch: false,
            remote_url: RemoteEntityClient::default().base_url,
            persist: false,
        }
    }
}

impl Config {
    /// Reads `path` if given, then applies overrides from `env`.
    pub fn load(path: Option<&Path>, env: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => Config::default(),
        };
        for (key, value) in env {
            let Some(name) = key.strip_prefix("ABSTEXT_") else { continue };
            let bad = |e: &dyn std::fmt::Display| anyhow::anyhow!("{key}={value:?}: {e}");
            match name {
                "LISTEN" => config.listen = value.clone(),
                "DATA_DIR" => config.data_dir = PathBuf::from(&value),
                "CACHE_CAPACITY" => config.cache_capacity = value.parse().map_err(|e| bad(&e))?,
                "DEPTH_LIMIT" => config.depth_limit = value.parse().map_err(|e| bad(&e))?,
                "REMOTE_FETCH" => config.remote_fetch = parse_flag(&value).ok_or_else(|| bad(&"expected a boolean"))?,
                "REMOTE_URL" => config.remote_url = value.clone(),
                "PERSIST" => config.persist = parse_flag(&value).ok_or_else(|| bad(&"expected a boolean"))?,
                _ => {}
            }
        }
        Ok(config)
    }

    pub fn registry(&self) -> RegistryConfig {
        RegistryConfig {
            cache_capacity: self.cache_capacity,
            depth_limit: self.depth_limit,
            ..RegistryConfig::default()
        }
    }
}

fn parse_flag(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Some(true),
        "0" | "false" | "no" | "off" => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_environment() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("abstext.toml");
        std::fs::write(&path, "listen = \"0.0.0.0:9000\"\ndepth_limit = 64\n").unwrap();
        let env = [("ABSTEXT_DEPTH_LIMIT".to_string(), "32".to_string()), ("HOME".into(), "/".into())];
        let c = Config::load(Some(&path), env).unwrap();
        assert_eq!(c.listen, "0.0.0.0:9000");
        assert_eq!(c.depth_limit, 32);
        assert_eq!(c.cache_capacity, RegistryConfig::default().cache_capacity);
        assert!(Config::load(None, [("ABSTEXT_PERSIST".to_string(), "maybe".to_string())]).is_err());
        std::fs::write(&path, "listne = \"x\"\n").unwrap();
        assert!(Config::load(Some(&path), []).is_err());
    }
}
