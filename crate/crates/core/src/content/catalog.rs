use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::docs::{self, DocumentError};
use crate::phrase::GrammaticalType;

/// What kind of value a key accepts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeDescriptor {
    Integer,
    Text,
    Item,
    /// A zero-key constructor whose result type is the given one.
    EnumOf(GrammaticalType),
    ListOf(Box<TypeDescriptor>),
    /// Any instantiation (including zero-key ones) with this result type.
    ConstructorReturning(GrammaticalType),
}

impl fmt::Display for TypeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeDescriptor::Integer => f.write_str("integer"),
            TypeDescriptor::Text => f.write_str("text"),
            TypeDescriptor::Item => f.write_str("item"),
            TypeDescriptor::EnumOf(t) => write!(f, "enum<{t}>"),
            TypeDescriptor::ListOf(d) => write!(f, "list<{d}>"),
            TypeDescriptor::ConstructorReturning(t) => write!(f, "constructor<{t}>"),
        }
    }
}

impl FromStr for TypeDescriptor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "integer" => return Ok(TypeDescriptor::Integer),
            "text" => return Ok(TypeDescriptor::Text),
            "item" => return Ok(TypeDescriptor::Item),
            _ => {}
        }
        let (head, rest) = s
            .split_once('<')
            .ok_or_else(|| format!("unknown type descriptor `{s}`"))?;
        let inner = rest
            .strip_suffix('>')
            .ok_or_else(|| format!("unbalanced `<` in type descriptor `{s}`"))?;
        match head {
            "list" => Ok(TypeDescriptor::ListOf(Box::new(inner.parse()?))),
            "enum" => Ok(TypeDescriptor::EnumOf(inner.parse()?)),
            "constructor" => Ok(TypeDescriptor::ConstructorReturning(inner.parse()?)),
            _ => Err(format!("unknown type descriptor `{s}`")),
        }
    }
}

impl Serialize for TypeDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TypeDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeySpec {
    pub id: String,
    #[serde(default)]
    pub labels: BTreeMap<String, String>,
    #[serde(default)]
    pub required: bool,
    pub accepted: Vec<TypeDescriptor>,
}

impl KeySpec {
    pub fn new(id: impl Into<String>, required: bool, accepted: Vec<TypeDescriptor>) -> Self {
        KeySpec {
            id: id.into(),
            labels: BTreeMap::new(),
            required,
            accepted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructorSpec {
    pub id: String,
    #[serde(default)]
    pub labels: BTreeMap<String, String>,
    #[serde(default)]
    pub doc: String,
    #[serde(default)]
    pub keys: Vec<KeySpec>,
    pub result_type: GrammaticalType,
}

impl ConstructorSpec {
    pub fn new(id: impl Into<String>, result_type: GrammaticalType, keys: Vec<KeySpec>) -> Self {
        ConstructorSpec {
            id: id.into(),
            labels: BTreeMap::new(),
            doc: String::new(),
            keys,
            result_type,
        }
    }

    pub fn key(&self, id: &str) -> Option<&KeySpec> {
        self.keys.iter().find(|k| k.id == id)
    }

    /// Zero-key constructors act as enumeration values.
    pub fn is_enumeration(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn check(&self) -> Result<(), CatalogError> {
        if !crate::content::value::is_identifier(&self.id) {
            return Err(CatalogError::InvalidId(self.id.clone()));
        }
        let mut seen = HashSet::new();
        for key in &self.keys {
            if !crate::content::value::is_identifier(&key.id) {
                return Err(CatalogError::InvalidId(format!("{}.{}", self.id, key.id)));
            }
            if !seen.insert(key.id.as_str()) {
                return Err(CatalogError::DuplicateKey {
                    constructor: self.id.clone(),
                    key: key.id.clone(),
                });
            }
            if key.accepted.is_empty() {
                return Err(CatalogError::EmptyAccepted {
                    constructor: self.id.clone(),
                    key: key.id.clone(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("constructor `{0}` already exists")]
    DuplicateId(String),
    #[error("`{0}` is not a valid identifier")]
    InvalidId(String),
    #[error("constructor `{constructor}` declares key `{key}` twice")]
    DuplicateKey { constructor: String, key: String },
    #[error("key `{constructor}.{key}` accepts no value types")]
    EmptyAccepted { constructor: String, key: String },
    #[error(transparent)]
    Document(#[from] DocumentError),
}

/// The set of constructor specifications content is validated against.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    specs: IndexMap<String, ConstructorSpec>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, spec: ConstructorSpec) -> Result<(), CatalogError> {
        spec.check()?;
        if self.specs.contains_key(&spec.id) {
            return Err(CatalogError::DuplicateId(spec.id));
        }
        self.specs.insert(spec.id.clone(), spec);
        Ok(())
    }

    /// Inserts or replaces a spec; the catalog stays editable at all times.
    pub fn upsert(&mut self, spec: ConstructorSpec) -> Result<Option<ConstructorSpec>, CatalogError> {
        spec.check()?;
        Ok(self.specs.insert(spec.id.clone(), spec))
    }

    pub fn remove(&mut self, id: &str) -> Option<ConstructorSpec> {
        self.specs.shift_remove(id)
    }

    pub fn get(&self, id: &str) -> Option<&ConstructorSpec> {
        self.specs.get(id)
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ConstructorSpec> {
        self.specs.values()
    }

    pub fn load_dir(dir: &Path) -> Result<Self, CatalogError> {
        let mut catalog = Catalog::new();
        for (_, spec) in docs::load_dir::<ConstructorSpec>(dir)? {
            catalog.insert(spec)?;
        }
        Ok(catalog)
    }

    pub fn save_spec(dir: &Path, spec: &ConstructorSpec) -> Result<(), CatalogError> {
        docs::write_document(dir, &spec.id, spec)?;
        Ok(())
    }
}

impl FromIterator<ConstructorSpec> for Catalog {
    /// Later specs with a repeated id replace earlier ones.
    fn from_iter<I: IntoIterator<Item = ConstructorSpec>>(iter: I) -> Self {
        let mut catalog = Catalog::new();
        for spec in iter {
            catalog.specs.insert(spec.id.clone(), spec);
        }
        catalog
    }
}
