use std::fmt::Write;

use super::catalog::Catalog;
use super::value::{Content, ConstructorInstantiation, Literal, Value};

/// Canonical single-line notation. Keys are written in the order they are
/// stored; use [`serialize_content_with`] to get catalog key order.
pub fn serialize_content(content: &Content) -> String {
    let mut out = String::new();
    write_instantiation(&mut out, &content.root, None);
    out
}

/// Canonical notation with keys reordered to match their constructor spec.
/// Keys unknown to the catalog follow in stored order.
pub fn serialize_content_with(content: &Content, catalog: &Catalog) -> String {
    let mut out = String::new();
    write_instantiation(&mut out, &content.root, Some(catalog));
    out
}

pub fn serialize_value(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, None);
    out
}

pub(crate) fn quote_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn write_instantiation(out: &mut String, inst: &ConstructorInstantiation, catalog: Option<&Catalog>) {
    out.push_str(&inst.constructor_id);
    if inst.arguments.is_empty() {
        return;
    }
    let mut keys: Vec<&String> = inst.arguments.keys().collect();
    if let Some(spec) = catalog.and_then(|c| c.get(&inst.constructor_id)) {
        let rank = |k: &str| spec.keys.iter().position(|ks| ks.id == k).unwrap_or(usize::MAX);
        keys.sort_by_key(|k| rank(k));
    }
    out.push('(');
    for (i, key) in keys.into_iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(key);
        out.push_str(": ");
        write_value(out, &inst.arguments[key.as_str()], catalog);
    }
    out.push(')');
}

fn write_value(out: &mut String, value: &Value, catalog: Option<&Catalog>) {
    match value {
        Value::Literal(Literal::Integer(n)) => {
            let _ = write!(out, "{n}");
        }
        Value::Literal(Literal::Text(s)) => out.push_str(&quote_text(s)),
        Value::Item(r) => match &r.label {
            Some(label) => {
                let _ = write!(out, "{label} ({})", r.id);
            }
            None => out.push_str(r.id.as_str()),
        },
        Value::List(items) => {
            out.push('[');
            for (i, v) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, v, catalog);
            }
            out.push(']');
        }
        Value::Enum(id) => out.push_str(id),
        Value::FunctionCall(call) => {
            out.push_str(&call.function_id);
            out.push('(');
            for (i, v) in call.args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, v, catalog);
            }
            out.push(')');
        }
        Value::Constructor(inst) => write_instantiation(out, inst, catalog),
    }
}
