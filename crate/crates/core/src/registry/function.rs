use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::content::{parse_value, serialize_value, Value};

use super::types::SemanticType;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: SemanticType,
}

/// Arguments and expected result, both written in content notation
/// (`true`/`false` are booleans; function calls are evaluated first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    pub args: Vec<Value>,
    pub expected: Value,
}

impl TestCase {
    pub fn parse(args: &[&str], expected: &str) -> Result<Self, String> {
        Ok(TestCase {
            args: args.iter().map(|a| parse_value(a).map_err(|e| e.to_string())).collect::<Result<_, _>>()?,
            expected: parse_value(expected).map_err(|e| e.to_string())?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct TestCaseDoc {
    args: Vec<String>,
    expected: String,
}

impl Serialize for TestCase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TestCaseDoc {
            args: self.args.iter().map(serialize_value).collect(),
            expected: serialize_value(&self.expected),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TestCase {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = TestCaseDoc::deserialize(d)?;
        let args: Vec<&str> = doc.args.iter().map(String::as_str).collect();
        TestCase::parse(&args, &doc.expected).map_err(serde::de::Error::custom)
    }
}

fn default_pure() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

/// A function interface. It exists independently of its implementations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionDef {
    pub id: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, String>,
    pub params: Vec<Param>,
    pub return_type: SemanticType,
    #[serde(default = "default_pure", skip_serializing_if = "is_true")]
    pub pure: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tests: Vec<TestCase>,
    /// Boolean expressions over the parameters.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub preconditions: Vec<String>,
    /// Boolean expressions over the parameters and `result`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub postconditions: Vec<String>,
}

impl FunctionDef {
    pub fn new(id: impl Into<String>, return_type: &str) -> Self {
        FunctionDef {
            id: id.into(),
            labels: BTreeMap::new(),
            params: Vec::new(),
            return_type: return_type.parse().expect("valid return type"),
            pure: true,
            tests: Vec::new(),
            preconditions: Vec::new(),
            postconditions: Vec::new(),
        }
    }

    pub fn param(mut self, name: &str, ty: &str) -> Self {
        self.params.push(Param {
            name: name.to_string(),
            ty: ty.parse().expect("valid parameter type"),
        });
        self
    }

    pub fn impure(mut self) -> Self {
        self.pure = false;
        self
    }

    pub fn test(mut self, args: &[&str], expected: &str) -> Self {
        self.tests.push(TestCase::parse(args, expected).expect("valid test case"));
        self
    }

    pub fn precondition(mut self, expr: &str) -> Self {
        self.preconditions.push(expr.to_string());
        self
    }

    pub fn postcondition(mut self, expr: &str) -> Self {
        self.postconditions.push(expr.to_string());
        self
    }

    pub fn label(mut self, lang: &str, text: &str) -> Self {
        self.labels.insert(lang.to_string(), text.to_string());
        self
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImplKind {
    /// Host-provided code, looked up by name in the builtin table.
    Builtin(String),
    /// An expression in the composition notation.
    Composition(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Implementation {
    pub id: String,
    #[serde(flatten)]
    pub kind: ImplKind,
}

impl Implementation {
    pub fn builtin(id: &str, name: &str) -> Self {
        Implementation {
            id: id.to_string(),
            kind: ImplKind::Builtin(name.to_string()),
        }
    }

    pub fn composition(id: &str, expression: &str) -> Self {
        Implementation {
            id: id.to_string(),
            kind: ImplKind::Composition(expression.to_string()),
        }
    }
}

/// On-disk form: one document per function with its implementations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionDocument {
    #[serde(flatten)]
    pub def: FunctionDef,
    #[serde(default)]
    pub implementations: Vec<Implementation>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_form() {
        let doc: FunctionDocument = serde_json::from_value(serde_json::json!({
            "id": "twice",
            "params": [{"name": "x", "type": "positive_integer"}],
            "return_type": "positive_integer",
            "tests": [{"args": ["2"], "expected": "4"}],
            "implementations": [
                {"id": "twice_add", "composition": "add(x, x)"},
                {"id": "twice_host", "builtin": "twice"}
            ]
        }))
        .unwrap();
        assert!(doc.def.pure);
        assert_eq!(doc.def.tests[0].expected, Value::int(4));
        assert_eq!(doc.implementations[1].kind, ImplKind::Builtin("twice".into()));
        let back: FunctionDocument = serde_json::from_value(serde_json::to_value(&doc).unwrap()).unwrap();
        assert_eq!(back, doc);
    }
}
