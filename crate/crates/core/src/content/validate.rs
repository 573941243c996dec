//! Checks content against the constructor catalog. All problems are
//! collected; validation never stops at the first one.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::catalog::{Catalog, KeySpec, TypeDescriptor};
use super::path::ContentPath;
use super::value::{Content, ConstructorInstantiation, Literal, Value};
use crate::phrase::GrammaticalType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagnosticCode {
    UnknownConstructor,
    UnknownKey,
    MissingRequiredKey,
    TypeMismatch,
    NotAnArticle,
    UnknownFunction,
    ArityMismatch,
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variants serialize");
        f.write_str(s.as_str().unwrap_or_default())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub path: ContentPath,
    pub code: DiagnosticCode,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.path.is_root() { "<root>".to_string() } else { self.path.to_string() };
        write!(f, "{at}: {}: {}", self.code, self.message)
    }
}

/// Shape of a function as far as content validation cares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallSignature {
    pub arity: usize,
    /// Descriptors the result can satisfy; empty means unconstrained.
    pub returns: Vec<TypeDescriptor>,
}

pub trait FunctionLookup {
    fn call_signature(&self, function_id: &str) -> Option<CallSignature>;
}

/// Validates a whole document. The root must be an article-level
/// constructor.
pub fn validate(content: &Content, catalog: &Catalog) -> Vec<Diagnostic> {
    Validator::new(catalog).validate(content)
}

pub struct Validator<'a> {
    catalog: &'a Catalog,
    functions: Option<&'a dyn FunctionLookup>,
}

impl<'a> Validator<'a> {
    pub fn new(catalog: &'a Catalog) -> Self {
        Validator {
            catalog,
            functions: None,
        }
    }

    /// Also checks function calls against the given signatures. Without
    /// this, function calls are accepted wherever a value is.
    pub fn with_functions(mut self, functions: &'a dyn FunctionLookup) -> Self {
        self.functions = Some(functions);
        self
    }

    pub fn validate(&self, content: &Content) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let root_path = ContentPath::root();
        if let Some(spec) = self.catalog.get(&content.root.constructor_id) {
            if spec.result_type != GrammaticalType::ArticleText {
                out.push(Diagnostic {
                    path: root_path.clone(),
                    code: DiagnosticCode::NotAnArticle,
                    message: format!(
                        "root constructor `{}` renders as {}, expected {}",
                        spec.id,
                        spec.result_type,
                        GrammaticalType::ArticleText
                    ),
                });
            }
        }
        self.check_instantiation(&content.root, &root_path, &mut out);
        out
    }

    /// Validates a single instantiation without the article-root rule.
    pub fn validate_instantiation(&self, inst: &ConstructorInstantiation) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        self.check_instantiation(inst, &ContentPath::root(), &mut out);
        out
    }

    fn check_instantiation(&self, inst: &ConstructorInstantiation, path: &ContentPath, out: &mut Vec<Diagnostic>) {
        let Some(spec) = self.catalog.get(&inst.constructor_id) else {
            out.push(Diagnostic {
                path: path.clone(),
                code: DiagnosticCode::UnknownConstructor,
                message: format!("no constructor `{}` in the catalog", inst.constructor_id),
            });
            for (key, value) in &inst.arguments {
                self.check_untyped(value, &path.key(key), out);
            }
            return;
        };
        for (key, value) in &inst.arguments {
            let key_path = path.key(key);
            match spec.key(key) {
                Some(key_spec) => self.check_value(value, key_spec, &key_spec.accepted, &key_path, out),
                None => {
                    out.push(Diagnostic {
                        path: key_path.clone(),
                        code: DiagnosticCode::UnknownKey,
                        message: format!("constructor `{}` has no key `{key}`", spec.id),
                    });
                    self.check_untyped(value, &key_path, out);
                }
            }
        }
        for key_spec in spec.keys.iter().filter(|k| k.required) {
            if !inst.arguments.contains_key(&key_spec.id) {
                out.push(Diagnostic {
                    path: path.key(&key_spec.id),
                    code: DiagnosticCode::MissingRequiredKey,
                    message: format!("`{}` requires key `{}`", spec.id, key_spec.id),
                });
            }
        }
    }

    fn check_value(
        &self,
        value: &Value,
        key: &KeySpec,
        accepted: &[TypeDescriptor],
        path: &ContentPath,
        out: &mut Vec<Diagnostic>,
    ) {
        if let Value::List(items) = value {
            return self.check_list(items, key, accepted, path, out);
        }
        if let Value::FunctionCall(call) = value {
            if let Some(lookup) = self.functions {
                match lookup.call_signature(&call.function_id) {
                    None => out.push(Diagnostic {
                        path: path.clone(),
                        code: DiagnosticCode::UnknownFunction,
                        message: format!("no function `{}` is registered", call.function_id),
                    }),
                    Some(sig) if sig.arity != call.args.len() => out.push(Diagnostic {
                        path: path.clone(),
                        code: DiagnosticCode::ArityMismatch,
                        message: format!(
                            "`{}` takes {} argument(s), {} given",
                            call.function_id,
                            sig.arity,
                            call.args.len()
                        ),
                    }),
                    Some(_) => {}
                }
            }
        }
        if !accepted.iter().any(|d| self.matches(value, d)) {
            out.push(mismatch(value, key, accepted, path));
        }
        self.check_untyped(value, path, out);
    }

    fn check_list(
        &self,
        items: &[Value],
        key: &KeySpec,
        accepted: &[TypeDescriptor],
        path: &ContentPath,
        out: &mut Vec<Diagnostic>,
    ) {
        let element_types: Vec<&TypeDescriptor> = accepted
            .iter()
            .filter_map(|d| match d {
                TypeDescriptor::ListOf(inner) => Some(inner.as_ref()),
                _ => None,
            })
            .collect();
        if element_types.is_empty() {
            out.push(mismatch(&Value::List(items.to_vec()), key, accepted, path));
            for (i, v) in items.iter().enumerate() {
                self.check_untyped(v, &path.index(i), out);
            }
            return;
        }
        // Elements must all conform to one element type; pick the one that
        // fits best and report the elements that do not.
        let best = element_types
            .iter()
            .max_by_key(|d| {
                let hits = items.iter().filter(|v| self.matches(v, d)).count();
                (hits, std::cmp::Reverse(element_types.iter().position(|e| e == *d)))
            })
            .copied()
            .expect("non-empty");
        let inner = std::slice::from_ref(best);
        for (i, v) in items.iter().enumerate() {
            self.check_value(v, key, inner, &path.index(i), out);
        }
    }

    /// Recurses into nested structure without a type expectation.
    fn check_untyped(&self, value: &Value, path: &ContentPath, out: &mut Vec<Diagnostic>) {
        match value {
            Value::Enum(_) | Value::Constructor(_) => {
                let inst = value.as_instantiation().expect("constructor value");
                self.check_instantiation(&inst, path, out);
            }
            Value::List(items) => {
                for (i, v) in items.iter().enumerate() {
                    self.check_untyped(v, &path.index(i), out);
                }
            }
            Value::FunctionCall(call) => {
                for (i, v) in call.args.iter().enumerate() {
                    self.check_untyped(v, &path.index(i), out);
                }
            }
            Value::Literal(_) | Value::Item(_) => {}
        }
    }

    fn matches(&self, value: &Value, desc: &TypeDescriptor) -> bool {
        match (value, desc) {
            (Value::Literal(Literal::Integer(_)), TypeDescriptor::Integer) => true,
            (Value::Literal(Literal::Text(_)), TypeDescriptor::Text) => true,
            (Value::Item(_), TypeDescriptor::Item) => true,
            (Value::Enum(id), TypeDescriptor::EnumOf(t)) => match self.catalog.get(id) {
                Some(spec) => spec.is_enumeration() && spec.result_type == *t,
                None => true,
            },
            (Value::Enum(id), TypeDescriptor::ConstructorReturning(t)) => {
                self.catalog.get(id).is_none_or(|s| s.result_type == *t)
            }
            (Value::Constructor(inst), TypeDescriptor::ConstructorReturning(t)) => {
                self.catalog.get(&inst.constructor_id).is_none_or(|s| s.result_type == *t)
            }
            (Value::List(items), TypeDescriptor::ListOf(inner)) => items.iter().all(|v| self.matches(v, inner)),
            (Value::FunctionCall(call), d) => match self.functions.and_then(|f| f.call_signature(&call.function_id)) {
                Some(sig) => sig.returns.is_empty() || sig.returns.contains(d),
                None => true,
            },
            _ => false,
        }
    }
}

fn mismatch(value: &Value, key: &KeySpec, accepted: &[TypeDescriptor], path: &ContentPath) -> Diagnostic {
    let expected: Vec<String> = accepted.iter().map(|d| d.to_string()).collect();
    Diagnostic {
        path: path.clone(),
        code: DiagnosticCode::TypeMismatch,
        message: format!(
            "key `{}` accepts {}, found {}",
            key.id,
            expected.join(" | "),
            value.kind_name()
        ),
    }
}
