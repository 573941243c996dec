use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value as Json};

use crate::content::serialize::quote_text;
use crate::content::{parse_content, serialize_content, Content, ConstructorInstantiation, ItemId, Value};
use crate::lexicon::FeatureBundle;
use crate::phrase::Phrase;

/// A runtime value flowing through function evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Datum {
    Int(i64),
    Text(String),
    Bool(bool),
    Item(ItemId),
    List(Vec<Datum>),
    /// A constructor instantiation or enumeration value, unevaluated.
    Node(ConstructorInstantiation),
    Features(FeatureBundle),
    Phrase(Phrase),
    Record(BTreeMap<String, Datum>),
    /// A form or rendering that could not be produced, with the reason.
    Missing(String),
    /// The absence of a value, e.g. an optional key that is not set.
    Unit,
}

impl Datum {
    pub fn text(s: impl Into<String>) -> Self {
        Datum::Text(s.into())
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Datum::Int(_) => "integer",
            Datum::Text(_) => "text",
            Datum::Bool(_) => "boolean",
            Datum::Item(_) => "item",
            Datum::List(_) => "list",
            Datum::Node(_) => "content",
            Datum::Features(_) => "features",
            Datum::Phrase(_) => "phrase",
            Datum::Record(_) => "record",
            Datum::Missing(_) => "missing",
            Datum::Unit => "nothing",
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Datum::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Datum::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Datum::Bool(b) => Some(*b),
            _ => None,
        }
    }

    /// Canonical text used for memoization keys and display.
    pub fn canonical(&self) -> String {
        self.to_string()
    }

    /// JSON encoding used by the HTTP API. Plain JSON scalars and arrays map
    /// to integers, text, booleans and lists; everything else is a
    /// single-key tagged object.
    pub fn to_json(&self) -> Json {
        match self {
            Datum::Int(n) => json!(n),
            Datum::Text(s) => json!(s),
            Datum::Bool(b) => json!(b),
            Datum::Item(id) => json!({ "item": id.as_str() }),
            Datum::List(xs) => Json::Array(xs.iter().map(Datum::to_json).collect()),
            Datum::Node(inst) => json!({ "content": serialize_content(&Content::new(inst.clone())) }),
            Datum::Features(f) => json!({ "features": f.to_string() }),
            Datum::Phrase(p) => json!({ "phrase": serde_json::to_value(p).expect("phrases serialize") }),
            Datum::Record(m) => json!({ "record": m.iter().map(|(k, v)| (k.clone(), v.to_json())).collect::<serde_json::Map<_, _>>() }),
            Datum::Missing(reason) => json!({ "missing": reason }),
            Datum::Unit => Json::Null,
        }
    }

    pub fn from_json(v: &Json) -> Result<Datum, String> {
        match v {
            Json::Null => Ok(Datum::Unit),
            Json::Bool(b) => Ok(Datum::Bool(*b)),
            Json::Number(n) => n.as_i64().map(Datum::Int).ok_or_else(|| format!("{n} is not an integer")),
            Json::String(s) => Ok(Datum::Text(s.clone())),
            Json::Array(xs) => xs.iter().map(Datum::from_json).collect::<Result<_, _>>().map(Datum::List),
            Json::Object(m) if m.len() == 1 => {
                let (tag, body) = m.iter().next().expect("one entry");
                let text = || body.as_str().ok_or_else(|| format!("`{tag}` expects a string"));
                match tag.as_str() {
                    "item" => ItemId::new(text()?).map(Datum::Item).map_err(|e| e.to_string()),
                    "content" => parse_content(text()?).map(|c| Datum::Node(c.root)).map_err(|e| e.to_string()),
                    "features" => text()?.parse().map(Datum::Features),
                    "phrase" => serde_json::from_value(body.clone()).map(Datum::Phrase).map_err(|e| e.to_string()),
                    "missing" => Ok(Datum::Missing(text()?.to_string())),
                    "record" => body
                        .as_object()
                        .ok_or("`record` expects an object")?
                        .iter()
                        .map(|(k, v)| Datum::from_json(v).map(|d| (k.clone(), d)))
                        .collect::<Result<_, _>>()
                        .map(Datum::Record),
                    other => Err(format!("unknown value tag `{other}`")),
                }
            }
            Json::Object(_) => Err("tagged values have exactly one key".to_string()),
        }
    }

    /// Converts a content value without evaluating anything; function calls
    /// are rejected. When `booleans` is set the bare words `true` and
    /// `false` become booleans instead of enumeration values.
    pub fn from_constant(value: &Value, booleans: bool) -> Result<Datum, String> {
        use crate::content::Literal;
        Ok(match value {
            Value::Literal(Literal::Integer(n)) => Datum::Int(*n),
            Value::Literal(Literal::Text(s)) => Datum::Text(s.clone()),
            Value::Item(r) => Datum::Item(r.id.clone()),
            Value::List(xs) => Datum::List(xs.iter().map(|v| Datum::from_constant(v, booleans)).collect::<Result<_, _>>()?),
            Value::Enum(id) if booleans && id == "true" => Datum::Bool(true),
            Value::Enum(id) if booleans && id == "false" => Datum::Bool(false),
            Value::Enum(id) => Datum::Node(ConstructorInstantiation::new(id.clone())),
            Value::Constructor(inst) => Datum::Node(inst.clone()),
            Value::FunctionCall(call) => return Err(format!("`{}(...)` is not a constant", call.function_id)),
        })
    }
}

impl serde::Serialize for Datum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Datum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Datum::from_json(&Json::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Datum::Int(n) => write!(f, "{n}"),
            Datum::Text(s) => f.write_str(&quote_text(s)),
            Datum::Bool(b) => write!(f, "{b}"),
            Datum::Item(id) => write!(f, "{id}"),
            Datum::List(xs) => {
                f.write_str("[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
            Datum::Node(inst) => f.write_str(&serialize_content(&Content::new(inst.clone()))),
            Datum::Features(b) => write!(f, "features({})", quote_text(&b.to_string())),
            Datum::Phrase(p) => write!(f, "phrase({})", serde_json::to_string(p).expect("phrases serialize")),
            Datum::Record(m) => {
                f.write_str("{")?;
                for (i, (k, v)) in m.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                f.write_str("}")
            }
            Datum::Missing(reason) => write!(f, "missing({})", quote_text(reason)),
            Datum::Unit => f.write_str("nothing"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::parse_value;

    #[test]
    fn json_round_trip() {
        let d = Datum::List(vec![
            Datum::Int(3),
            Datum::text("x"),
            Datum::Bool(false),
            Datum::Item(ItemId::new("Q62").unwrap()),
            Datum::Features("case=dative".parse().unwrap()),
            Datum::Missing("gone".into()),
            Datum::Unit,
        ]);
        assert_eq!(Datum::from_json(&d.to_json()).unwrap(), d);
        assert!(Datum::from_json(&json!({"item": "Q0"})).is_err());
        assert!(Datum::from_json(&json!(1.5)).is_err());
    }

    #[test]
    fn constants() {
        let v = parse_value("[1, true, Q5, A(b: \"c\")]").unwrap();
        let d = Datum::from_constant(&v, true).unwrap();
        assert_eq!(d.to_string(), "[1, true, Q5, A(b: \"c\")]");
        assert!(matches!(Datum::from_constant(&parse_value("true").unwrap(), false).unwrap(), Datum::Node(_)));
        assert!(Datum::from_constant(&parse_value("f(1)").unwrap(), true).is_err());
    }
}
