use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

/// An entity identifier of the form `Q[1-9][0-9]*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ItemId(String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid item id {0:?}: expected Q followed by a positive number")]
pub struct InvalidItemId(pub String);

impl ItemId {
    pub fn new(id: impl Into<String>) -> Result<Self, InvalidItemId> {
        let id = id.into();
        if Self::is_valid(&id) {
            Ok(ItemId(id))
        } else {
            Err(InvalidItemId(id))
        }
    }

    pub fn is_valid(s: &str) -> bool {
        let mut chars = s.chars();
        chars.next() == Some('Q')
            && matches!(chars.next(), Some('1'..='9'))
            && chars.all(|c| c.is_ascii_digit())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for ItemId {
    type Err = InvalidItemId;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ItemId::new(s)
    }
}

impl TryFrom<String> for ItemId {
    type Error = InvalidItemId;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        ItemId::new(s)
    }
}

impl From<ItemId> for String {
    fn from(id: ItemId) -> String {
        id.0
    }
}

/// A reference to an item, optionally annotated with the display label the
/// author wrote next to it (`San Francisco (Q62)`). The label is carried for
/// round-tripping only; it never affects validation or rendering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ItemRef {
    pub id: ItemId,
    pub label: Option<String>,
}

impl ItemRef {
    pub fn new(id: ItemId) -> Self {
        ItemRef { id, label: None }
    }

    /// Attaches a label. Labels must be a space separated sequence of
    /// identifier words so that the notation can carry them.
    pub fn labeled(id: ItemId, label: &str) -> Option<Self> {
        let words: Vec<&str> = label.split_whitespace().collect();
        if words.is_empty() || !words.iter().all(|w| is_label_word(w)) {
            return None;
        }
        Some(ItemRef {
            id,
            label: Some(words.join(" ")),
        })
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_')
}

pub(crate) fn is_label_word(s: &str) -> bool {
    is_identifier(s) && !ItemId::is_valid(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    Integer(i64),
    Text(String),
}

/// A value held by a constructor key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Literal(Literal),
    Item(ItemRef),
    List(Vec<Value>),
    /// A zero-argument constructor, written as a bare identifier.
    Enum(String),
    FunctionCall(FunctionCall),
    Constructor(ConstructorInstantiation),
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Literal(Literal::Integer(n))
    }

    pub fn text(s: impl Into<String>) -> Self {
        Value::Literal(Literal::Text(s.into()))
    }

    pub fn item(id: ItemId) -> Self {
        Value::Item(ItemRef::new(id))
    }

    /// Wraps an instantiation, collapsing the zero-argument case to an
    /// enumeration value so there is exactly one representation for it.
    pub fn constructor(inst: ConstructorInstantiation) -> Self {
        if inst.arguments.is_empty() {
            Value::Enum(inst.constructor_id)
        } else {
            Value::Constructor(inst)
        }
    }

    /// Views enumeration values and constructor calls uniformly.
    pub fn as_instantiation(&self) -> Option<std::borrow::Cow<'_, ConstructorInstantiation>> {
        match self {
            Value::Enum(id) => Some(std::borrow::Cow::Owned(ConstructorInstantiation::new(id.clone()))),
            Value::Constructor(inst) => Some(std::borrow::Cow::Borrowed(inst)),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Literal(Literal::Integer(_)) => "integer",
            Value::Literal(Literal::Text(_)) => "text",
            Value::Item(_) => "item",
            Value::List(_) => "list",
            Value::Enum(_) => "enumeration value",
            Value::FunctionCall(_) => "function call",
            Value::Constructor(_) => "constructor instantiation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionCall {
    pub function_id: String,
    pub args: Vec<Value>,
}

/// A constructor with its keys filled in. Argument order is not significant
/// for equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructorInstantiation {
    pub constructor_id: String,
    pub arguments: IndexMap<String, Value>,
}

impl ConstructorInstantiation {
    pub fn new(constructor_id: impl Into<String>) -> Self {
        ConstructorInstantiation {
            constructor_id: constructor_id.into(),
            arguments: IndexMap::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: Value) -> Self {
        self.arguments.insert(key.into(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.arguments.get(key)
    }
}

/// A complete abstract content document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Content {
    pub root: ConstructorInstantiation,
}

impl Content {
    pub fn new(root: ConstructorInstantiation) -> Self {
        Content { root }
    }

    /// Top-level sentences, i.e. the elements of the article body list.
    pub fn sentences(&self) -> &[Value] {
        match self.root.get(ARTICLE_BODY_KEY) {
            Some(Value::List(items)) => items,
            _ => &[],
        }
    }

    /// Every item referenced anywhere in the tree, in document order.
    pub fn item_refs(&self) -> Vec<ItemId> {
        fn walk(v: &Value, out: &mut Vec<ItemId>) {
            match v {
                Value::Item(r) => out.push(r.id.clone()),
                Value::List(vs) => vs.iter().for_each(|v| walk(v, out)),
                Value::FunctionCall(call) => call.args.iter().for_each(|v| walk(v, out)),
                Value::Constructor(inst) => inst.arguments.values().for_each(|v| walk(v, out)),
                Value::Literal(_) | Value::Enum(_) => {}
            }
        }
        let mut out = Vec::new();
        self.root.arguments.values().for_each(|v| walk(v, &mut out));
        out
    }
}

/// Key of the article-level constructor that holds the list of sentences.
pub const ARTICLE_BODY_KEY: &str = "content";
