//! Lexemes with inflected forms, per-language closed-class tables, and the
//! morphological helpers renderers call.
//!
//! Lookups never invent forms: a form that is not stored is reported as
//! missing (`None`) and the caller decides how to degrade.

pub mod features;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::content::ItemId;
use crate::docs::{self, DocumentError};
use crate::entity::EntityStore;
pub use features::{Case, Definiteness, Degree, Dimension, FeatureBundle, Gender, Number, Person, Tense};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    Verb,
    Noun,
    Adjective,
    ProperNoun,
    Preposition,
    Article,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).expect("unit variants serialize");
        f.write_str(v.as_str().unwrap_or_default())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexeme {
    pub id: String,
    pub language: String,
    pub lemma: String,
    pub category: Category,
    /// Inherent features such as the gender of a noun.
    #[serde(default, skip_serializing_if = "FeatureBundle::is_empty")]
    pub features: FeatureBundle,
    /// Concepts (zero-key constructor ids) this lexeme lexicalizes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub denotes: Vec<String>,
    pub forms: BTreeMap<FeatureBundle, String>,
}

pub fn is_lexeme_id(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next() == Some('L') && matches!(chars.next(), Some('1'..='9')) && chars.all(|c| c.is_ascii_digit())
}

/// Per-language tables: which dimensions inflect per category, ordinal
/// stems, articles, the neuter pronoun, and the list conjunction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageProfile {
    pub code: String,
    #[serde(default)]
    pub name: String,
    pub paradigms: BTreeMap<Category, Vec<Dimension>>,
    #[serde(default)]
    pub ordinals: BTreeMap<u32, String>,
    /// Keyed by bundles over the `article` paradigm dimensions.
    #[serde(default)]
    pub articles: BTreeMap<FeatureBundle, String>,
    #[serde(default)]
    pub pronouns: BTreeMap<FeatureBundle, String>,
    pub conjunction: String,
}

impl LanguageProfile {
    pub fn paradigm(&self, category: Category) -> &[Dimension] {
        self.paradigms.get(&category).map(Vec::as_slice).unwrap_or(&[])
    }

    fn check(&self) -> Result<(), String> {
        let article_dims = self.paradigm(Category::Article);
        for key in self.articles.keys() {
            if key.dimensions().iter().any(|d| !article_dims.contains(d)) {
                return Err(format!("{}: article key `{key}` uses dimensions outside the article paradigm", self.code));
            }
        }
        if self.ordinals.contains_key(&0) {
            return Err(format!("{}: ordinal table starts at 1", self.code));
        }
        Ok(())
    }
}

/// Something a lexicon lookup can start from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LexicalRef {
    Item(ItemId),
    Lexeme(String),
    /// A zero-key constructor id such as `center`.
    Concept(String),
}

impl FromStr for LexicalRef {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(if ItemId::is_valid(s) {
            LexicalRef::Item(ItemId::new(s).expect("checked"))
        } else if is_lexeme_id(s) {
            LexicalRef::Lexeme(s.to_string())
        } else {
            LexicalRef::Concept(s.to_string())
        })
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("UNKNOWN_LEXEME: no lexeme {0}")]
    UnknownLexeme(String),
    #[error("UNSUPPORTED_LANGUAGE: no language profile for `{0}`")]
    UnsupportedLanguage(String),
    #[error("OUT_OF_TABLE: no ordinal for {n} in `{language}`")]
    OutOfTable { n: i64, language: String },
    #[error("INVALID_LEXEME: {0}")]
    Invalid(String),
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    lexemes: BTreeMap<String, Lexeme>,
    languages: BTreeMap<String, LanguageProfile>,
    by_concept: HashMap<(String, String), String>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_language(&mut self, profile: LanguageProfile) -> Result<(), LexiconError> {
        profile.check().map_err(LexiconError::Invalid)?;
        self.languages.insert(profile.code.clone(), profile);
        Ok(())
    }

    pub fn language(&self, code: &str) -> Result<&LanguageProfile, LexiconError> {
        self.languages
            .get(code)
            .ok_or_else(|| LexiconError::UnsupportedLanguage(code.to_string()))
    }

    pub fn languages(&self) -> impl Iterator<Item = &LanguageProfile> {
        self.languages.values()
    }

    /// Adds or replaces a lexeme after checking it against its language's
    /// paradigms.
    pub fn upsert(&mut self, lexeme: Lexeme) -> Result<Option<Lexeme>, LexiconError> {
        self.check_lexeme(&lexeme)?;
        let old = self.remove(&lexeme.id);
        for concept in &lexeme.denotes {
            self.by_concept
                .insert((concept.clone(), lexeme.language.clone()), lexeme.id.clone());
        }
        self.lexemes.insert(lexeme.id.clone(), lexeme);
        Ok(old)
    }

    pub fn remove(&mut self, id: &str) -> Option<Lexeme> {
        let old = self.lexemes.remove(id)?;
        self.by_concept.retain(|_, v| v != id);
        Some(old)
    }

    pub fn get(&self, id: &str) -> Option<&Lexeme> {
        self.lexemes.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Lexeme> {
        self.lexemes.values()
    }

    fn check_lexeme(&self, lexeme: &Lexeme) -> Result<(), LexiconError> {
        let invalid = |msg: String| LexiconError::Invalid(format!("{}: {msg}", lexeme.id));
        if !is_lexeme_id(&lexeme.id) {
            return Err(invalid("lexeme ids are L followed by a positive number".into()));
        }
        if lexeme.lemma.trim().is_empty() {
            return Err(invalid("empty lemma".into()));
        }
        let profile = self.language(&lexeme.language)?;
        let dims = profile.paradigm(lexeme.category);
        for key in lexeme.forms.keys() {
            if let Some(d) = key.dimensions().into_iter().find(|d| !dims.contains(d)) {
                return Err(invalid(format!(
                    "form key `{key}` uses `{d}`, which does not inflect for {} in {}",
                    lexeme.category, lexeme.language
                )));
            }
        }
        Ok(())
    }

    /// Exact-bundle lookup. `Ok(None)` means the form is not stored.
    pub fn lookup_form(&self, lexeme_id: &str, features: &FeatureBundle) -> Result<Option<&str>, LexiconError> {
        let lexeme = self
            .lexemes
            .get(lexeme_id)
            .ok_or_else(|| LexiconError::UnknownLexeme(lexeme_id.to_string()))?;
        Ok(lexeme.forms.get(features).map(String::as_str))
    }

    /// Looks up `features` restricted to the dimensions the lexeme's
    /// category inflects for in its language.
    pub fn inflect<'a>(&self, lexeme: &'a Lexeme, features: &FeatureBundle) -> Option<&'a str> {
        let profile = self.languages.get(&lexeme.language)?;
        let key = features.project(profile.paradigm(lexeme.category));
        lexeme.forms.get(&key).map(String::as_str)
    }

    /// The lexeme a reference stands for in `lang`, if any. Dangling links
    /// and lexemes of another language count as absent.
    pub fn resolve(&self, r: &LexicalRef, lang: &str, items: &EntityStore) -> Option<&Lexeme> {
        let id = match r {
            LexicalRef::Lexeme(id) => id.clone(),
            LexicalRef::Item(item) => items.get(item)?.lexemes.get(lang)?.clone(),
            LexicalRef::Concept(c) => self.by_concept.get(&(c.clone(), lang.to_string()))?.clone(),
        };
        self.lexemes.get(&id).filter(|l| l.language == lang)
    }

    pub fn ordinal(&self, n: i64, lang: &str) -> Result<&str, LexiconError> {
        let profile = self.language(lang)?;
        u32::try_from(n)
            .ok()
            .and_then(|k| profile.ordinals.get(&k))
            .map(String::as_str)
            .ok_or_else(|| LexiconError::OutOfTable {
                n,
                language: lang.to_string(),
            })
    }

    /// Superlative used in ranking phrases, from the property's adjective
    /// lexicalization. `agreement` supplies gender/definiteness for
    /// languages whose adjectives inflect for them.
    pub fn superlative(&self, property: &LexicalRef, lang: &str, items: &EntityStore, agreement: &FeatureBundle) -> Option<&str> {
        let lexeme = self.resolve(property, lang, items)?;
        self.inflect(lexeme, &agreement.merge(&FeatureBundle::new().degree(Degree::Superlative)))
    }

    /// Case-inflected form of an item's noun phrase. Without a
    /// lexicalization the label serves as the nominative (and as every case
    /// in languages whose proper nouns do not inflect for case).
    pub fn inflect_np(&self, item: &ItemId, case: Case, lang: &str, items: &EntityStore) -> Option<String> {
        let features = FeatureBundle::new().case(case).number(Number::Singular);
        if let Some(lexeme) = self.resolve(&LexicalRef::Item(item.clone()), lang, items) {
            return self.inflect(lexeme, &features).map(str::to_string);
        }
        let profile = self.languages.get(lang)?;
        let label = items.get(item)?.labels.get(lang)?;
        let case_inflects = profile.paradigm(Category::ProperNoun).contains(&Dimension::Case);
        (case == Case::Nominative || !case_inflects).then(|| label.clone())
    }

    /// Definite/indefinite article. Gender is ignored by languages whose
    /// articles do not inflect for it; `None` gender in a language where they
    /// do yields `Ok(None)`.
    pub fn article(&self, definiteness: Definiteness, gender: Option<Gender>, lang: &str) -> Result<Option<&str>, LexiconError> {
        let profile = self.language(lang)?;
        let dims = profile.paradigm(Category::Article);
        if profile.articles.is_empty() {
            return Err(LexiconError::UnsupportedLanguage(lang.to_string()));
        }
        if dims.contains(&Dimension::Gender) && gender.is_none() {
            return Ok(None);
        }
        let mut bundle = FeatureBundle::new().definiteness(definiteness);
        bundle.gender = gender;
        Ok(profile.articles.get(&bundle.project(dims)).map(String::as_str))
    }

    pub fn gender_of(&self, r: &LexicalRef, lang: &str, items: &EntityStore) -> Option<Gender> {
        self.resolve(r, lang, items)?.features.gender
    }

    pub fn pronoun(&self, features: &FeatureBundle, lang: &str) -> Option<&str> {
        let profile = self.languages.get(lang)?;
        profile.pronouns.get(features).map(String::as_str)
    }

    /// Loads `languages/*.json` and `lexemes/*.json` under a data directory.
    pub fn load(languages_dir: &Path, lexemes_dir: &Path) -> Result<Self, LoadError> {
        let mut lexicon = Lexicon::new();
        for (_, profile) in docs::load_dir::<LanguageProfile>(languages_dir)? {
            lexicon.add_language(profile)?;
        }
        for (_, lexeme) in docs::load_dir::<Lexeme>(lexemes_dir)? {
            lexicon.upsert(lexeme)?;
        }
        Ok(lexicon)
    }

    pub fn save_lexeme(dir: &Path, lexeme: &Lexeme) -> Result<(), DocumentError> {
        docs::write_document(dir, &lexeme.id, lexeme).map(|_| ())
    }
}
