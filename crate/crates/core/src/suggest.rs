//! Rule-based classifier from free text to candidate content.
//!
//! A rule is a template such as
//! `{subject:item} is the {rank:ordinal}-most {by:adjective} {object:noun}`,
//! where each slot names a constructor key and how its text is resolved.

use std::fmt;
use std::str::FromStr;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::content::{serialize_content_with, Catalog, Content, ConstructorInstantiation, Diagnostic, ItemId, ItemRef, Value, ARTICLE_BODY_KEY};
use crate::entity::{EntityStore, Item};
use crate::lexicon::{Category, Lexicon};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    /// A QID or an item label.
    Item,
    /// A spelled-out ordinal from the language profile.
    Ordinal,
    /// An item lexicalized by an adjective with a matching lemma or form.
    Adjective,
    /// An item lexicalized by a noun, or with a matching label.
    Noun,
}

impl FromStr for SlotKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "item" => Ok(SlotKind::Item),
            "ordinal" => Ok(SlotKind::Ordinal),
            "adjective" => Ok(SlotKind::Adjective),
            "noun" => Ok(SlotKind::Noun),
            other => Err(format!("unknown slot kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub id: String,
    pub constructor: String,
    pub pattern: String,
}

/// Rules of one language, as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleDocument {
    pub language: String,
    pub rules: Vec<RuleSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("rule `{rule}`: {message}")]
pub struct RuleError {
    pub rule: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment {
    Literal(String),
    Slot { key: String, kind: SlotKind },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub spec: RuleSpec,
    pub language: String,
    segments: Vec<Segment>,
}

impl Rule {
    pub fn new(language: &str, spec: RuleSpec) -> Result<Self, RuleError> {
        let err = |message: String| RuleError {
            rule: spec.id.clone(),
            message,
        };
        let mut segments = Vec::new();
        let mut rest = spec.pattern.as_str();
        while let Some(open) = rest.find('{') {
            if open > 0 {
                segments.push(Segment::Literal(rest[..open].to_string()));
            }
            let close = rest[open..].find('}').ok_or_else(|| err("unclosed `{`".into()))? + open;
            let (key, kind) = rest[open + 1..close]
                .split_once(':')
                .ok_or_else(|| err(format!("slot `{}` needs `key:kind`", &rest[open + 1..close])))?;
            segments.push(Segment::Slot {
                key: key.trim().to_string(),
                kind: kind.trim().parse().map_err(err)?,
            });
            rest = &rest[close + 1..];
        }
        if !rest.is_empty() {
            segments.push(Segment::Literal(rest.to_string()));
        }
        if !segments.iter().any(|s| matches!(s, Segment::Slot { .. })) {
            return Err(err("pattern has no slots".into()));
        }
        Ok(Rule {
            spec,
            language: language.to_string(),
            segments,
        })
    }

    fn regex(&self, lexicon: &Lexicon) -> Option<Regex> {
        let mut ordinals: Vec<&str> = lexicon
            .language(&self.language)
            .ok()?
            .ordinals
            .values()
            .map(String::as_str)
            .collect();
        // Longest first so that "siebzehnt" is not read as "sieb" + "zehnt".
        ordinals.sort_by_key(|o| std::cmp::Reverse(o.chars().count()));
        let ordinal = ordinals.iter().map(|o| regex::escape(o)).collect::<Vec<_>>().join("|");
        let mut re = String::from("^");
        for seg in &self.segments {
            match seg {
                Segment::Literal(text) => re.push_str(&regex::escape(text)),
                Segment::Slot { kind: SlotKind::Item, .. } => {
                    re.push_str(r"(Q[1-9][0-9]*|\p{L}[\p{L}\p{N}]*(?: [\p{L}\p{N}]+)*?)")
                }
                Segment::Slot { kind: SlotKind::Ordinal, .. } => {
                    re.push('(');
                    re.push_str(&ordinal);
                    re.push(')');
                }
                Segment::Slot { .. } => re.push_str(r"(\p{L}+(?: \p{L}+)*?)"),
            }
        }
        re.push_str(r"\.?$");
        Regex::new(&re).ok()
    }

    fn slots(&self) -> impl Iterator<Item = (&str, SlotKind)> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Slot { key, kind } => Some((key.as_str(), *kind)),
            Segment::Literal(_) => None,
        })
    }

    /// The sentence this rule reads out of `text`, if every slot resolves.
    pub fn apply(&self, text: &str, lexicon: &Lexicon, items: &EntityStore) -> Option<ConstructorInstantiation> {
        let caps = self.regex(lexicon)?.captures(text.trim())?;
        let mut inst = ConstructorInstantiation::new(&self.spec.constructor);
        for (i, (key, kind)) in self.slots().enumerate() {
            let found = caps.get(i + 1)?.as_str();
            let value = resolve(found, kind, &self.language, lexicon, items)?;
            inst.arguments.insert(key.to_string(), value);
        }
        Some(inst)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}): {}", self.spec.id, self.language, self.spec.pattern)
    }
}

fn item_value(item: &Item, lang: &str) -> Value {
    let label = item.labels.get(lang).or_else(|| item.labels.values().next());
    Value::Item(
        label
            .and_then(|l| ItemRef::labeled(item.id.clone(), l))
            .unwrap_or_else(|| ItemRef::new(item.id.clone())),
    )
}

fn lexicalized_by(item: &Item, text: &str, lang: &str, lexicon: &Lexicon, noun: bool) -> bool {
    item.lexemes
        .get(lang)
        .and_then(|id| lexicon.get(id))
        .filter(|l| noun != (l.category == Category::Adjective))
        .is_some_and(|l| l.lemma == text || l.forms.values().any(|f| f == text))
}

fn resolve(text: &str, kind: SlotKind, lang: &str, lexicon: &Lexicon, items: &EntityStore) -> Option<Value> {
    match kind {
        SlotKind::Item => {
            if ItemId::is_valid(text) {
                let id = ItemId::new(text).ok()?;
                return Some(match items.get(&id) {
                    Some(item) => item_value(item, lang),
                    None => Value::Item(ItemRef::new(id)),
                });
            }
            items.find_by_label(text, lang).first().map(|i| item_value(i, lang))
        }
        SlotKind::Ordinal => lexicon
            .language(lang)
            .ok()?
            .ordinals
            .iter()
            .find(|(_, o)| o.as_str() == text)
            .map(|(n, _)| Value::int(i64::from(*n))),
        SlotKind::Adjective => items
            .iter()
            .find(|i| lexicalized_by(i, text, lang, lexicon, false))
            .map(|i| item_value(i, lang)),
        SlotKind::Noun => items
            .iter()
            .find(|i| lexicalized_by(i, text, lang, lexicon, true))
            .or_else(|| items.find_by_label(text, lang).into_iter().next())
            .map(|i| item_value(i, lang)),
    }
}

/// A candidate article holding the one sentence a rule recognized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Suggestion {
    pub rule: String,
    #[serde(skip)]
    pub content: Content,
    /// The candidate in content notation.
    pub notation: String,
    pub diagnostics: Vec<Diagnostic>,
}

impl Suggestion {
    pub fn new(
        rule: &str,
        sentence: ConstructorInstantiation,
        catalog: &Catalog,
        diagnose: impl FnOnce(&Content) -> Vec<Diagnostic>,
    ) -> Self {
        let mut root = ConstructorInstantiation::new("Article");
        root.arguments
            .insert(ARTICLE_BODY_KEY.to_string(), Value::List(vec![Value::Constructor(sentence)]));
        let content = Content::new(root);
        Suggestion {
            rule: rule.to_string(),
            notation: serialize_content_with(&content, catalog),
            diagnostics: diagnose(&content),
            content,
        }
    }
}
