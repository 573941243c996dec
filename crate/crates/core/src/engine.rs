//! The assembled pipeline: catalog, lexicon, items, renderer manifests,
//! function registry and stored content, loaded from a data directory.
//!
//! ```text
//! <data>/constructors/*.json   one ConstructorSpec per file
//! <data>/functions/*.json      one FunctionDocument per file
//! <data>/languages/*.json      language profiles
//! <data>/lexemes/*.json        one Lexeme per file
//! <data>/items/*.json          ItemDocument files
//! <data>/renderers/*.json      one Manifest per language
//! <data>/suggest/*.json        RuleDocument files
//! <data>/content/*.abstract    stored content, id = file stem
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use crate::content::{
    parse_content, serialize_content_with, Catalog, CatalogError, ConstructorSpec, Content, Diagnostic, SyntaxError, Validator,
};
use crate::docs::{self, DocumentError};
use crate::entity::{EntityError, EntityStore, Item};
use crate::lexicon::{Lexeme, Lexicon, LexiconError, LoadError};
use crate::registry::{
    stdlib, CacheStats, Datum, EvalError, EvalOptions, EvalReport, FunctionDocument, Registry, RegistryConfig, RegistryError,
};
use crate::render::{self, Manifest, RenderError, RenderOutcome, World, SUBJECT_KEYS};
use crate::suggest::{Rule, RuleDocument, RuleError, Suggestion};

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Lexicon(#[from] LoadError),
    #[error(transparent)]
    Entity(#[from] EntityError),
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error("{context}: {source}")]
    Registry {
        context: String,
        #[source]
        source: RegistryError,
    },
    #[error("{path}: {source}")]
    Syntax {
        path: PathBuf,
        #[source]
        source: SyntaxError,
    },
    #[error("BREAKS_CONTENT: the change would invalidate stored content {0:?}")]
    BreaksContent(Vec<String>),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("NOT_FOUND: {0}")]
    NotFound(String),
}

impl EngineError {
    pub fn code(&self) -> &str {
        match self {
            EngineError::Catalog(CatalogError::Document(_)) | EngineError::Document(_) => "IO_ERROR",
            EngineError::Catalog(_) => "INVALID_CONSTRUCTOR",
            EngineError::Lexicon(LoadError::Lexicon(e)) => lexicon_code(e),
            EngineError::Lexicon(LoadError::Document(_)) => "IO_ERROR",
            EngineError::Entity(EntityError::UnknownItem(_)) => "UNKNOWN_ITEM",
            EngineError::Entity(EntityError::Parse(_)) => "PARSE_ERROR",
            EngineError::Entity(EntityError::Network(_)) => "NETWORK_ERROR",
            EngineError::Entity(EntityError::Document(_)) => "IO_ERROR",
            EngineError::Registry { source, .. } => source.code(),
            EngineError::Syntax { .. } => "SYNTAX_ERROR",
            EngineError::BreaksContent(_) => "BREAKS_CONTENT",
            EngineError::Rule(_) => "INVALID_RULE",
            EngineError::NotFound(_) => "NOT_FOUND",
        }
    }
}

fn lexicon_code(e: &LexiconError) -> &'static str {
    match e {
        LexiconError::UnknownLexeme(_) => "UNKNOWN_LEXEME",
        LexiconError::UnsupportedLanguage(_) => "UNSUPPORTED_LANGUAGE",
        LexiconError::OutOfTable { .. } => "OUT_OF_TABLE",
        LexiconError::Invalid(_) => "INVALID_LEXEME",
    }
}

fn registry_error(context: &str) -> impl FnOnce(RegistryError) -> EngineError + '_ {
    move |source| EngineError::Registry {
        context: context.to_string(),
        source,
    }
}

pub struct Engine {
    registry: Registry<World>,
    world: World,
    contents: BTreeMap<String, Content>,
    rules: Vec<Rule>,
    next_scratch: usize,
    /// When set, accepted edits are written back as documents.
    persist_to: Option<PathBuf>,
}

impl Engine {
    /// An engine over `world` with the builtin function library installed.
    pub fn new(world: World, config: RegistryConfig) -> Result<Self, EngineError> {
        let mut registry = Registry::new(config);
        stdlib::install(&mut registry).map_err(registry_error("stdlib"))?;
        render::install(&mut registry).map_err(registry_error("render library"))?;
        Ok(Engine {
            registry,
            world,
            contents: BTreeMap::new(),
            rules: Vec::new(),
            next_scratch: 1,
            persist_to: None,
        })
    }

    pub fn load(data_dir: &Path, config: RegistryConfig) -> Result<Self, EngineError> {
        let mut world = World {
            catalog: Catalog::load_dir(&data_dir.join("constructors"))?,
            lexicon: Lexicon::load(&data_dir.join("languages"), &data_dir.join("lexemes"))?,
            items: EntityStore::load_dir(&data_dir.join("items"))?,
            manifests: BTreeMap::new(),
        };
        for (_, m) in docs::load_dir::<Manifest>(&data_dir.join("renderers"))? {
            world.manifests.insert(m.language.clone(), m);
        }
        let mut engine = Engine::new(world, config)?;
        let functions = docs::load_dir::<FunctionDocument>(&data_dir.join("functions"))?;
        engine.load_functions(functions.into_iter().map(|(p, d)| (p.display().to_string(), d)))?;
        for (_, doc) in docs::load_dir::<RuleDocument>(&data_dir.join("suggest"))? {
            for spec in doc.rules {
                engine.add_rule(Rule::new(&doc.language, spec)?);
            }
        }
        let dir = data_dir.join("content");
        if dir.is_dir() {
            let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
                .map_err(|source| DocumentError::Io { path: dir.clone(), source })?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "abstract"))
                .collect();
            paths.sort();
            for path in paths {
                let text = fs::read_to_string(&path).map_err(|source| DocumentError::Io { path: path.clone(), source })?;
                let content = parse_content(&text).map_err(|source| EngineError::Syntax { path: path.clone(), source })?;
                let id = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                engine.contents.insert(id, content);
            }
        }
        Ok(engine)
    }

    /// Interfaces first, then implementations, so compositions may refer to
    /// functions defined in later documents.
    fn load_functions(&mut self, docs: impl Iterator<Item = (String, FunctionDocument)>) -> Result<(), EngineError> {
        let docs: Vec<_> = docs.collect();
        let mut fresh = HashSet::new();
        for (ctx, doc) in &docs {
            if self.registry.def(&doc.def.id).is_none() {
                self.registry.register(doc.def.clone()).map_err(registry_error(ctx))?;
                fresh.insert(doc.def.id.clone());
            }
        }
        for (ctx, doc) in docs {
            if fresh.contains(&doc.def.id) {
                for imp in doc.implementations {
                    self.registry.add_implementation(&doc.def.id, imp).map_err(registry_error(&ctx))?;
                }
            } else {
                self.registry.upsert_document(doc).map_err(registry_error(&ctx))?;
            }
        }
        Ok(())
    }

    pub fn persist_to(mut self, data_dir: impl Into<PathBuf>) -> Self {
        self.persist_to = Some(data_dir.into());
        self
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn registry(&self) -> &Registry<World> {
        &self.registry
    }

    /// World changes invalidate memoized renderings.
    fn changed(&self) {
        self.registry.clear_cache();
    }

    pub fn validate(&self, content: &Content) -> Vec<Diagnostic> {
        Validator::new(&self.world.catalog).with_functions(&self.registry).validate(content)
    }

    pub fn supports(&self, lang: &str) -> bool {
        self.world.manifests.get(lang).is_some_and(|m| !m.is_empty()) && self.world.lexicon.language(lang).is_ok()
    }

    pub fn languages(&self) -> Vec<&str> {
        self.world
            .manifests
            .keys()
            .map(String::as_str)
            .filter(|l| self.supports(l))
            .collect()
    }

    pub fn render(&self, content: &Content, lang: &str) -> Result<RenderOutcome, RenderError> {
        self.render_with(content, lang, &EvalOptions::default())
    }

    pub fn render_with(&self, content: &Content, lang: &str, options: &EvalOptions) -> Result<RenderOutcome, RenderError> {
        if !self.supports(lang) {
            return Err(RenderError::UnsupportedLanguage(lang.to_string()));
        }
        let diagnostics = self.validate(content);
        if !diagnostics.is_empty() {
            return Err(RenderError::ValidationFailed(diagnostics));
        }
        let args = vec![Datum::Node(content.root.clone()), Datum::text(lang)];
        match self.registry.evaluate(&self.world, "render_phrase", args, options)? {
            Datum::Phrase(p) => Ok(RenderOutcome::from_phrase(&p)),
            other => Err(EvalError::TypeError(format!("render_phrase returned {other}")).into()),
        }
    }

    pub fn evaluate(&self, function: &str, args: Vec<Datum>) -> Result<Datum, EvalError> {
        self.registry.evaluate(&self.world, function, args, &EvalOptions::default())
    }

    pub fn run_tests(&self, function: &str) -> Result<EvalReport, EvalError> {
        self.registry.run_tests(&self.world, function)
    }

    pub fn select_implementation(&self, function: &str) -> Result<String, EvalError> {
        self.registry.select_implementation(&self.world, function)
    }

    pub fn cache_stats(&self) -> CacheStats {
        self.registry.cache_stats()
    }

    pub fn add_rule(&mut self, rule: Rule) {
        self.rules.push(rule);
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Candidate articles for free text, cleanest first. Nothing is stored.
    pub fn suggest(&self, text: &str, lang: &str) -> Vec<Suggestion> {
        let mut found: Vec<(usize, Suggestion)> = self
            .rules
            .iter()
            .filter(|r| r.language == lang)
            .filter_map(|r| {
                let sentence = r.apply(text, &self.world.lexicon, &self.world.items)?;
                let filled = sentence.arguments.len();
                Some((filled, Suggestion::new(&r.spec.id, sentence, &self.world.catalog, |c| self.validate(c))))
            })
            .collect();
        found.sort_by_key(|(filled, s)| (s.diagnostics.len(), std::cmp::Reverse(*filled)));
        let mut out: Vec<Suggestion> = Vec::new();
        for (_, s) in found {
            if !out.iter().any(|o| o.content == s.content) {
                out.push(s);
            }
        }
        out
    }

    // Stored content.

    pub fn content(&self, id: &str) -> Option<&Content> {
        self.contents.get(id)
    }

    pub fn content_ids(&self) -> impl Iterator<Item = &str> {
        self.contents.keys().map(String::as_str)
    }

    /// Id for new content: the item the first sentence is about, else a
    /// scratch id.
    fn content_id_for(&mut self, content: &Content) -> String {
        let subject = content.sentences().first().and_then(|s| {
            let inst = s.as_instantiation()?;
            SUBJECT_KEYS.iter().find_map(|k| match inst.get(k) {
                Some(crate::content::Value::Item(r)) => Some(r.id.to_string()),
                _ => None,
            })
        });
        if let Some(id) = subject {
            return id;
        }
        loop {
            let id = format!("scratch-{}", self.next_scratch);
            self.next_scratch += 1;
            if !self.contents.contains_key(&id) {
                return id;
            }
        }
    }

    /// Stores content (valid or not) and returns its id and diagnostics.
    pub fn store_content(&mut self, id: Option<&str>, content: Content) -> Result<(String, Vec<Diagnostic>), EngineError> {
        let id = match id {
            Some(id) => id.to_string(),
            None => self.content_id_for(&content),
        };
        if !crate::content::value::is_identifier(&id.replace('-', "_")) {
            return Err(EngineError::NotFound(format!("`{id}` is not a usable content id")));
        }
        let diagnostics = self.validate(&content);
        if let Some(dir) = &self.persist_to {
            let dir = dir.join("content");
            let path = dir.join(format!("{id}.abstract"));
            fs::create_dir_all(&dir)
                .and_then(|_| fs::write(&path, serialize_content_with(&content, &self.world.catalog) + "\n"))
                .map_err(|source| DocumentError::Io { path, source })?;
        }
        self.contents.insert(id.clone(), content);
        Ok((id, diagnostics))
    }

    fn valid_content_ids(&self) -> HashSet<String> {
        self.contents
            .iter()
            .filter(|(_, c)| self.validate(c).is_empty())
            .map(|(id, _)| id.clone())
            .collect()
    }

    // Catalog edits.

    /// Adds or replaces a constructor. A change that would make previously
    /// valid stored content invalid is refused.
    pub fn put_constructor(&mut self, spec: ConstructorSpec) -> Result<(), EngineError> {
        let valid_before = self.valid_content_ids();
        let previous = self.world.catalog.upsert(spec.clone())?;
        let broken: Vec<String> = valid_before
            .into_iter()
            .filter(|id| !self.validate(&self.contents[id]).is_empty())
            .collect();
        if !broken.is_empty() {
            match previous {
                Some(p) => {
                    self.world.catalog.upsert(p)?;
                }
                None => {
                    self.world.catalog.remove(&spec.id);
                }
            }
            let mut broken = broken;
            broken.sort();
            return Err(EngineError::BreaksContent(broken));
        }
        if let Some(dir) = &self.persist_to {
            Catalog::save_spec(&dir.join("constructors"), &spec)?;
        }
        self.changed();
        Ok(())
    }

    pub fn put_function(&mut self, doc: FunctionDocument) -> Result<(), EngineError> {
        let id = doc.def.id.clone();
        self.registry.upsert_document(doc.clone()).map_err(registry_error(&id))?;
        if let Some(dir) = &self.persist_to {
            docs::write_document(&dir.join("functions"), &id, &doc)?;
        }
        self.changed();
        Ok(())
    }

    pub fn put_lexeme(&mut self, lexeme: Lexeme) -> Result<(), EngineError> {
        self.world.lexicon.upsert(lexeme.clone()).map_err(LoadError::from)?;
        if let Some(dir) = &self.persist_to {
            Lexicon::save_lexeme(&dir.join("lexemes"), &lexeme)?;
        }
        self.changed();
        Ok(())
    }

    pub fn remove_lexeme(&mut self, id: &str) -> Option<Lexeme> {
        let old = self.world.lexicon.remove(id);
        self.changed();
        old
    }

    pub fn put_item(&mut self, item: Item) -> Result<(), EngineError> {
        self.world.items.upsert(item.clone())?;
        if let Some(dir) = &self.persist_to {
            EntityStore::save_item(&dir.join("items"), &item)?;
        }
        self.changed();
        Ok(())
    }

    pub fn import_items(&mut self, source: &str) -> Result<usize, EngineError> {
        let n = self.world.items.import_items(source)?;
        self.changed();
        Ok(n)
    }

    /// Direct access for edits that bypass validation and persistence,
    /// such as tests removing fixture entries.
    pub fn world_mut(&mut self) -> &mut World {
        self.changed();
        &mut self.world
    }
}
