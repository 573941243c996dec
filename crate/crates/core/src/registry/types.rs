use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Type of a function parameter or result.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SemanticType {
    Integer,
    Text,
    Boolean,
    Item,
    Any,
    /// Constructor instantiations and enumeration values.
    Content,
    Phrase,
    Features,
    Record,
    ListOf(Box<SemanticType>),
    /// A registry-defined type, checked by its predicate.
    Named(String),
}

impl fmt::Display for SemanticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemanticType::Integer => f.write_str("integer"),
            SemanticType::Text => f.write_str("text"),
            SemanticType::Boolean => f.write_str("boolean"),
            SemanticType::Item => f.write_str("item"),
            SemanticType::Any => f.write_str("any"),
            SemanticType::Content => f.write_str("content"),
            SemanticType::Phrase => f.write_str("phrase"),
            SemanticType::Features => f.write_str("features"),
            SemanticType::Record => f.write_str("record"),
            SemanticType::ListOf(t) => write!(f, "list<{t}>"),
            SemanticType::Named(id) => f.write_str(id),
        }
    }
}

impl FromStr for SemanticType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        Ok(match s {
            "integer" => SemanticType::Integer,
            "text" => SemanticType::Text,
            "boolean" => SemanticType::Boolean,
            "item" => SemanticType::Item,
            "any" => SemanticType::Any,
            "content" => SemanticType::Content,
            "phrase" => SemanticType::Phrase,
            "features" => SemanticType::Features,
            "record" => SemanticType::Record,
            _ => {
                if let Some(inner) = s.strip_prefix("list<").and_then(|r| r.strip_suffix('>')) {
                    SemanticType::ListOf(Box::new(inner.parse()?))
                } else if crate::content::value::is_identifier(s) {
                    SemanticType::Named(s.to_string())
                } else {
                    return Err(format!("malformed type `{s}`"));
                }
            }
        })
    }
}

impl Serialize for SemanticType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SemanticType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A registry-defined type: values of `base` accepted by `predicate`, a
/// one-parameter function returning a boolean.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeDef {
    pub id: String,
    pub base: SemanticType,
    pub predicate: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form() {
        for s in ["integer", "list<list<item>>", "positive_integer", "phrase"] {
            assert_eq!(s.parse::<SemanticType>().unwrap().to_string(), s);
        }
        assert!("list<".parse::<SemanticType>().is_err());
    }
}
