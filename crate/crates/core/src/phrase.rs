//! Grammatical phrases produced by renderers and their linearization to
//! surface text.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lexicon::FeatureBundle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrammaticalType {
    TextFragment,
    NounPhrase,
    Modifier,
    Clause,
    Sentence,
    ArticleText,
}

impl GrammaticalType {
    pub const ALL: [GrammaticalType; 6] = [
        GrammaticalType::TextFragment,
        GrammaticalType::NounPhrase,
        GrammaticalType::Modifier,
        GrammaticalType::Clause,
        GrammaticalType::Sentence,
        GrammaticalType::ArticleText,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GrammaticalType::TextFragment => "text-fragment",
            GrammaticalType::NounPhrase => "noun-phrase",
            GrammaticalType::Modifier => "modifier",
            GrammaticalType::Clause => "clause",
            GrammaticalType::Sentence => "sentence",
            GrammaticalType::ArticleText => "article-text",
        }
    }
}

impl fmt::Display for GrammaticalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GrammaticalType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        GrammaticalType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown grammatical type `{s}`"))
    }
}

/// Placeholder for something a renderer could not produce.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MissingPart {
    /// Path of the offending value relative to the sentence, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Phrase(Phrase),
    Text(String),
    Missing(MissingPart),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phrase {
    pub gtype: GrammaticalType,
    #[serde(default, skip_serializing_if = "FeatureBundle::is_empty")]
    pub features: FeatureBundle,
    pub parts: Vec<Part>,
    /// Phrases sharing a group are rendered or omitted together, in order:
    /// a member is dropped when an earlier member was.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependency_group: Option<String>,
}

impl Phrase {
    pub fn new(gtype: GrammaticalType) -> Self {
        Phrase {
            gtype,
            features: FeatureBundle::default(),
            parts: Vec::new(),
            dependency_group: None,
        }
    }

    pub fn text(gtype: GrammaticalType, text: impl Into<String>) -> Self {
        Phrase::new(gtype).push(Part::Text(text.into()))
    }

    pub fn missing(gtype: GrammaticalType, reason: impl Into<String>) -> Self {
        Phrase::new(gtype).push(Part::Missing(MissingPart {
            at: None,
            reason: reason.into(),
        }))
    }

    pub fn with_features(mut self, features: FeatureBundle) -> Self {
        self.features = features;
        self
    }

    pub fn push(mut self, part: Part) -> Self {
        self.parts.push(part);
        self
    }

    /// True when no missing part occurs anywhere below this phrase.
    pub fn is_complete(&self) -> bool {
        self.first_missing().is_none()
    }

    pub fn first_missing(&self) -> Option<&MissingPart> {
        self.parts.iter().find_map(|p| match p {
            Part::Missing(m) => Some(m),
            Part::Phrase(ph) => ph.first_missing(),
            Part::Text(_) => None,
        })
    }

    /// Prefixes the location of every missing part with `at`, a key name
    /// or an index such as `[2]`.
    pub fn locate_missing(mut self, at: &str) -> Self {
        for part in &mut self.parts {
            match part {
                Part::Missing(m) => {
                    m.at = Some(match m.at.take() {
                        None => at.to_string(),
                        Some(inner) if inner.starts_with('[') => format!("{at}{inner}"),
                        Some(inner) => format!("{at}.{inner}"),
                    })
                }
                Part::Phrase(ph) => *ph = std::mem::replace(ph, Phrase::new(GrammaticalType::TextFragment)).locate_missing(at),
                _ => {}
            }
        }
        self
    }

    fn tokens<'a>(&'a self, out: &mut Vec<&'a str>) {
        for part in &self.parts {
            match part {
                Part::Text(t) if !t.is_empty() => out.push(t),
                Part::Phrase(p) => p.tokens(out),
                _ => {}
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("INCOMPLETE_PHRASE: {reason}")]
pub struct IncompletePhrase {
    pub reason: String,
}

fn is_closing_punctuation(token: &str) -> bool {
    matches!(token, "," | "." | ";" | ":" | "!" | "?")
}

/// Joins the phrase's text tokens with single spaces, with no space before
/// punctuation. Sentences get an initial capital and a terminal period;
/// an article joins its sentences with a space.
pub fn linearize(phrase: &Phrase) -> Result<String, IncompletePhrase> {
    if let Some(m) = phrase.first_missing() {
        return Err(IncompletePhrase {
            reason: m.reason.clone(),
        });
    }
    Ok(linearize_complete(phrase))
}

/// Linearizes whatever is present, skipping missing parts. Used for
/// articles whose omitted sentences are reported separately.
pub fn linearize_available(phrase: &Phrase) -> String {
    linearize_complete(phrase)
}

fn linearize_complete(phrase: &Phrase) -> String {
    if phrase.gtype == GrammaticalType::ArticleText {
        return phrase
            .parts
            .iter()
            .filter_map(|p| match p {
                Part::Phrase(s) => Some(linearize_complete(s)),
                Part::Text(t) => Some(t.clone()),
                Part::Missing(_) => None,
            })
            .filter(|s| !s.is_empty())
            .collect::<Vec<_>>()
            .join(" ");
    }
    let mut tokens = Vec::new();
    phrase.tokens(&mut tokens);
    let mut text = String::new();
    for tok in tokens {
        if !text.is_empty() && !is_closing_punctuation(tok) {
            text.push(' ');
        }
        text.push_str(tok);
    }
    if phrase.gtype == GrammaticalType::Sentence && !text.is_empty() {
        text = capitalize_first(&text);
        if !text.ends_with(['.', '!', '?']) {
            text.push('.');
        }
    }
    text
}

fn capitalize_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}
