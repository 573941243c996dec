//! Rendering content into text. Renderers are ordinary registry functions
//! `(node, language, context) -> phrase`, chosen per constructor through a
//! per-language manifest.

mod library;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::content::{Catalog, ContentPath, Diagnostic, ItemId, Value, ARTICLE_BODY_KEY};
use crate::entity::EntityStore;
use crate::lexicon::Lexicon;
use crate::phrase::{linearize_available, GrammaticalType, MissingPart, Part, Phrase};
use crate::registry::{Datum, EvalError, Evaluator, FunctionDef, Registry, RegistryError};

/// Keys whose item value is the subject of a sentence.
pub const SUBJECT_KEYS: [&str; 2] = ["subject", "instance"];

/// Renderer set of one language: constructor id to function id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub language: String,
    #[serde(default)]
    pub renderers: BTreeMap<String, String>,
    /// Renderer for zero-key constructors without their own entry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumerations: Option<String>,
}

impl Manifest {
    pub fn is_empty(&self) -> bool {
        self.renderers.is_empty() && self.enumerations.is_none()
    }
}

/// Everything renderers read: the environment registry builtins run in.
#[derive(Debug, Clone, Default)]
pub struct World {
    pub catalog: Catalog,
    pub lexicon: Lexicon,
    pub items: EntityStore,
    pub manifests: BTreeMap<String, Manifest>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Omission {
    pub path: ContentPath,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderOutcome {
    pub text: String,
    pub omissions: Vec<Omission>,
    pub complete: bool,
}

impl RenderOutcome {
    /// Text of what was rendered; omitted sentences are reported instead.
    pub fn from_phrase(article: &Phrase) -> Self {
        let omissions: Vec<Omission> = article
            .parts
            .iter()
            .filter_map(|p| match p {
                Part::Missing(m) => Some(omission(m)),
                _ => None,
            })
            .collect();
        RenderOutcome {
            text: linearize_available(article),
            complete: omissions.is_empty(),
            omissions,
        }
    }
}

fn omission(m: &MissingPart) -> Omission {
    let path = m
        .at
        .as_deref()
        .and_then(|at| at.parse().ok())
        .unwrap_or_else(ContentPath::root);
    Omission {
        path,
        reason: m.reason.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("UNSUPPORTED_LANGUAGE: no renderers for `{0}`")]
    UnsupportedLanguage(String),
    #[error("VALIDATION_FAILED: {} problem(s), first: {}", .0.len(), .0[0])]
    ValidationFailed(Vec<Diagnostic>),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl RenderError {
    pub fn code(&self) -> &str {
        match self {
            RenderError::UnsupportedLanguage(_) => "UNSUPPORTED_LANGUAGE",
            RenderError::ValidationFailed(_) => "VALIDATION_FAILED",
            RenderError::Eval(e) => e.code(),
        }
    }
}

fn subject_of(value: &Value) -> Option<ItemId> {
    let inst = value.as_instantiation()?;
    SUBJECT_KEYS.iter().find_map(|k| match inst.get(k) {
        Some(Value::Item(r)) => Some(r.id.clone()),
        _ => None,
    })
}

/// Renders an article sentence by sentence. A sentence that cannot be
/// completed becomes a located missing part; a sentence whose subject is
/// carried over from an omitted predecessor (and so would open with a
/// dangling pronoun) is omitted with it.
fn render_article(ev: &Evaluator<'_, World>, content: &Datum, lang: &str) -> Result<Phrase, EvalError> {
    let Datum::Node(root) = content else {
        return Err(EvalError::TypeError(format!("expected content, got {content}")));
    };
    let sentences: Vec<(ContentPath, &Value)> = match root.get(ARTICLE_BODY_KEY) {
        Some(Value::List(xs)) => xs
            .iter()
            .enumerate()
            .map(|(i, v)| (ContentPath::root().key(ARTICLE_BODY_KEY).index(i), v))
            .collect(),
        _ => Vec::new(),
    };
    let mut article = Phrase::new(GrammaticalType::ArticleText);
    let mut omitted_groups = HashSet::new();
    let mut previous: Option<ItemId> = None;
    let mut group = String::new();
    for (path, value) in sentences {
        let subject = subject_of(value);
        let carried = subject.is_some() && subject == previous;
        if !carried {
            group = path.to_string();
        }
        let mut ctx = BTreeMap::new();
        if let Some(p) = previous.take().filter(|_| carried) {
            ctx.insert("previous_subject".to_string(), Datum::Item(p));
        }
        previous = subject;
        if omitted_groups.contains(&group) {
            article = article.push(Part::Missing(MissingPart {
                at: Some(path.to_string()),
                reason: format!("depends on omitted sentence {group}"),
            }));
            continue;
        }
        let datum = match ev.resolve_value(value) {
            Ok(d) => d,
            Err(e) => Datum::Missing(e.to_string()),
        };
        let rendered = match ev.call("render_value", vec![datum, Datum::text(lang), Datum::Record(ctx)]) {
            Ok(Datum::Phrase(p)) => p,
            Ok(other) => Phrase::missing(GrammaticalType::Sentence, format!("renderer returned {other}")),
            Err(e @ EvalError::DepthExceeded(_)) => return Err(e),
            Err(e) => Phrase::missing(GrammaticalType::Sentence, e.to_string()),
        };
        match rendered.first_missing() {
            Some(m) => {
                let at = match &m.at {
                    Some(inner) => format!("{path}.{inner}"),
                    None => path.to_string(),
                };
                if group == path.to_string() {
                    omitted_groups.insert(group.clone());
                }
                article = article.push(Part::Missing(MissingPart {
                    at: Some(at),
                    reason: m.reason.clone(),
                }));
            }
            None => {
                let mut sentence = if rendered.gtype == GrammaticalType::Sentence {
                    rendered
                } else {
                    Phrase::new(GrammaticalType::Sentence).push(Part::Phrase(rendered))
                };
                sentence.dependency_group = Some(group.clone());
                article = article.push(Part::Phrase(sentence));
            }
        }
    }
    Ok(article)
}

pub(crate) fn install(reg: &mut Registry<World>) -> Result<(), RegistryError> {
    library::install(reg)?;
    reg.register_builtin(
        FunctionDef::new("render_phrase", "phrase")
            .param("content", "content")
            .param("language", "text"),
        |ev, a| render_article(ev, &a[0], a[1].as_text().unwrap_or_default()).map(Datum::Phrase),
    )?;
    reg.register_builtin(
        FunctionDef::new("render", "text")
            .label("en", "render")
            .param("content", "content")
            .param("language", "text"),
        |ev, a| match ev.call("render_phrase", a)? {
            Datum::Phrase(p) => Ok(Datum::Text(linearize_available(&p))),
            other => Err(EvalError::TypeError(format!("render_phrase returned {other}"))),
        },
    )?;
    Ok(())
}
