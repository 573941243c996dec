//! One-document-per-entity JSON persistence shared by the catalogs.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl DocumentError {
    pub(crate) fn parse(path: &Path, message: impl Into<String>) -> Self {
        DocumentError::Parse {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }
}

/// Reads every `*.json` file in `dir`, sorted by file name. A missing
/// directory yields no documents.
pub fn load_dir<T: DeserializeOwned>(dir: &Path) -> Result<Vec<(PathBuf, T)>, DocumentError> {
    if !dir.exists() {
        return Ok(Vec::new());
    }
    let io = |source| DocumentError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.into_iter().map(|p| load_file(&p).map(|doc| (p, doc))).collect()
}

pub fn load_file<T: DeserializeOwned>(path: &Path) -> Result<T, DocumentError> {
    let text = fs::read_to_string(path).map_err(|source| DocumentError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| DocumentError::parse(path, e.to_string()))
}

/// Writes `doc` to `dir/<id>.json`, creating the directory if needed.
pub fn write_document<T: Serialize>(dir: &Path, id: &str, doc: &T) -> Result<PathBuf, DocumentError> {
    let path = dir.join(format!("{id}.json"));
    let io = |source| DocumentError::Io {
        path: path.clone(),
        source,
    };
    fs::create_dir_all(dir).map_err(io)?;
    let mut text = serde_json::to_string_pretty(doc).expect("documents always serialize");
    text.push('\n');
    fs::write(&path, text).map_err(io)?;
    Ok(path)
}
