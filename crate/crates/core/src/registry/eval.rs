use std::cell::Cell;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::num::NonZeroUsize;
use std::sync::Arc;

use indexmap::IndexMap;
use lru::LruCache;
use parking_lot::{Mutex, RwLock};
use serde::Serialize;

use crate::content::{CallSignature, FunctionLookup, TypeDescriptor, Value};

use super::datum::Datum;
use super::expr::{parse_expr, Expr, RawExpr};
use super::function::{FunctionDef, FunctionDocument, ImplKind, Implementation};
use super::types::{SemanticType, TypeDef};

/// Host code behind a builtin implementation. It receives already
/// evaluated arguments and may call back into the registry through the
/// evaluator.
pub type BuiltinFn<E> = Arc<dyn Fn(&Evaluator<'_, E>, Vec<Datum>) -> Result<Datum, EvalError> + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize)]
#[serde(tag = "code", content = "message", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EvalError {
    #[error("UNKNOWN_FUNCTION: {0}")]
    UnknownFunction(String),
    #[error("TYPE_ERROR: {0}")]
    TypeError(String),
    #[error("PRECONDITION_FAILED: {0}")]
    PreconditionFailed(String),
    #[error("POSTCONDITION_FAILED: {0}")]
    PostconditionFailed(String),
    #[error("DEPTH_EXCEEDED: call depth limit {0} reached")]
    DepthExceeded(usize),
    #[error("NO_IMPLEMENTATION: {0}")]
    NoImplementation(String),
    /// An error raised by host code with its own code, e.g. `OUT_OF_TABLE`.
    #[error("{code}: {message}")]
    #[serde(untagged)]
    Domain { code: String, message: String },
}

impl EvalError {
    pub fn domain(code: &str, message: impl Into<String>) -> Self {
        EvalError::Domain {
            code: code.to_string(),
            message: message.into(),
        }
    }

    pub fn code(&self) -> &str {
        match self {
            EvalError::UnknownFunction(_) => "UNKNOWN_FUNCTION",
            EvalError::TypeError(_) => "TYPE_ERROR",
            EvalError::PreconditionFailed(_) => "PRECONDITION_FAILED",
            EvalError::PostconditionFailed(_) => "POSTCONDITION_FAILED",
            EvalError::DepthExceeded(_) => "DEPTH_EXCEEDED",
            EvalError::NoImplementation(_) => "NO_IMPLEMENTATION",
            EvalError::Domain { code, .. } => code,
        }
    }

    pub fn message(&self) -> String {
        match self {
            EvalError::Domain { message, .. } => message.clone(),
            other => {
                let full = other.to_string();
                full.split_once(": ").map_or(full.clone(), |(_, m)| m.to_string())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("DUPLICATE_ID: `{0}` is already registered")]
    DuplicateId(String),
    #[error("UNKNOWN_FUNCTION: no function `{0}`")]
    UnknownFunction(String),
    #[error("UNKNOWN_BUILTIN: the host provides no builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("UNKNOWN_TYPE: no type `{0}`")]
    UnknownType(String),
    #[error("INVALID_DEFINITION: {0}")]
    Invalid(String),
}

impl RegistryError {
    pub fn code(&self) -> &'static str {
        match self {
            RegistryError::DuplicateId(_) => "DUPLICATE_ID",
            RegistryError::UnknownFunction(_) => "UNKNOWN_FUNCTION",
            RegistryError::UnknownBuiltin(_) => "UNKNOWN_BUILTIN",
            RegistryError::UnknownType(_) => "UNKNOWN_TYPE",
            RegistryError::Invalid(_) => "INVALID_DEFINITION",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistryConfig {
    /// Entries per function in the memoization cache.
    pub cache_capacity: usize,
    pub depth_limit: usize,
    /// Check postconditions on every evaluation, not only under test.
    pub check_postconditions: bool,
}

impl Default for RegistryConfig {
    fn default() -> Self {
        RegistryConfig {
            cache_capacity: 10_000,
            depth_limit: 256,
            check_postconditions: false,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    /// Forces an implementation for a function, at every call depth.
    pub pins: HashMap<String, String>,
    pub bypass_cache: bool,
    pub check_postconditions: Option<bool>,
    pub depth_limit: Option<usize>,
}

impl EvalOptions {
    pub fn pin(mut self, function: &str, implementation: &str) -> Self {
        self.pins.insert(function.to_string(), implementation.to_string());
        self
    }

    pub fn no_cache(mut self) -> Self {
        self.bypass_cache = true;
        self
    }

    pub fn depth_limit(mut self, limit: usize) -> Self {
        self.depth_limit = Some(limit);
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub entries: usize,
}

struct FunctionCache {
    lru: LruCache<String, Datum>,
    hits: u64,
    misses: u64,
}

struct MemoCache {
    capacity: NonZeroUsize,
    by_function: Mutex<HashMap<String, FunctionCache>>,
}

impl MemoCache {
    fn new(capacity: usize) -> Self {
        MemoCache {
            capacity: NonZeroUsize::new(capacity.max(1)).expect("non-zero"),
            by_function: Mutex::new(HashMap::new()),
        }
    }

    fn get(&self, function: &str, key: &str) -> Option<Datum> {
        let mut map = self.by_function.lock();
        let cache = map.entry(function.to_string()).or_insert_with(|| FunctionCache {
            lru: LruCache::new(self.capacity),
            hits: 0,
            misses: 0,
        });
        match cache.lru.get(key) {
            Some(v) => {
                cache.hits += 1;
                Some(v.clone())
            }
            None => {
                cache.misses += 1;
                None
            }
        }
    }

    fn put(&self, function: &str, key: String, value: Datum) {
        if let Some(cache) = self.by_function.lock().get_mut(function) {
            cache.lru.put(key, value);
        }
    }

    fn stats(&self, function: Option<&str>) -> CacheStats {
        let map = self.by_function.lock();
        let mut stats = CacheStats::default();
        for (id, c) in map.iter() {
            if function.is_some_and(|f| f != id) {
                continue;
            }
            stats.hits += c.hits;
            stats.misses += c.misses;
            stats.entries += c.lru.len();
        }
        stats
    }

    fn clear(&self, function: Option<&str>) {
        let mut map = self.by_function.lock();
        match function {
            Some(f) => {
                map.remove(f);
            }
            None => map.clear(),
        }
    }
}

enum Compiled<E> {
    Builtin(BuiltinFn<E>),
    Composition(Expr),
}

struct ImplEntry<E> {
    doc: Implementation,
    compiled: Compiled<E>,
}

pub(crate) struct FunctionEntry<E> {
    pub(crate) def: FunctionDef,
    impls: Vec<ImplEntry<E>>,
    pre: Vec<Expr>,
    post: Vec<Expr>,
}

impl<E> FunctionEntry<E> {
    pub(crate) fn implementation_ids(&self) -> impl Iterator<Item = &str> {
        self.impls.iter().map(|i| i.doc.id.as_str())
    }
}

/// Function interfaces, their implementations, registry-defined types, and
/// the memoization cache. `E` is the environment builtins read from.
pub struct Registry<E> {
    config: RegistryConfig,
    types: BTreeMap<String, TypeDef>,
    pub(crate) functions: IndexMap<String, FunctionEntry<E>>,
    host: HashMap<String, BuiltinFn<E>>,
    impl_ids: HashSet<String>,
    preferred: RwLock<HashMap<String, String>>,
    cache: MemoCache,
}

impl<E> Registry<E> {
    pub fn new(config: RegistryConfig) -> Self {
        Registry {
            cache: MemoCache::new(config.cache_capacity),
            config,
            types: BTreeMap::new(),
            functions: IndexMap::new(),
            host: HashMap::new(),
            impl_ids: HashSet::new(),
            preferred: RwLock::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &RegistryConfig {
        &self.config
    }

    /// Makes host code available to builtin implementations under `name`.
    pub fn provide_builtin<F>(&mut self, name: &str, f: F)
    where
        F: Fn(&Evaluator<'_, E>, Vec<Datum>) -> Result<Datum, EvalError> + Send + Sync + 'static,
    {
        self.host.insert(name.to_string(), Arc::new(f));
    }

    pub fn register_type(&mut self, ty: TypeDef) -> Result<(), RegistryError> {
        if self.types.contains_key(&ty.id) {
            return Err(RegistryError::DuplicateId(ty.id));
        }
        self.check_type(&ty.base)?;
        let pred = self
            .functions
            .get(&ty.predicate)
            .ok_or_else(|| RegistryError::UnknownFunction(ty.predicate.clone()))?;
        if pred.def.params.len() != 1 {
            return Err(RegistryError::Invalid(format!("type predicate `{}` must take one argument", ty.predicate)));
        }
        self.types.insert(ty.id.clone(), ty);
        Ok(())
    }

    pub fn type_def(&self, id: &str) -> Option<&TypeDef> {
        self.types.get(id)
    }

    fn check_type(&self, ty: &SemanticType) -> Result<(), RegistryError> {
        match ty {
            SemanticType::Named(id) if !self.types.contains_key(id) => Err(RegistryError::UnknownType(id.clone())),
            SemanticType::ListOf(inner) => self.check_type(inner),
            _ => Ok(()),
        }
    }

    fn check_def(&self, def: &FunctionDef) -> Result<(Vec<Expr>, Vec<Expr>), RegistryError> {
        if !crate::content::value::is_identifier(&def.id) {
            return Err(RegistryError::Invalid(format!("`{}` is not a valid function id", def.id)));
        }
        let mut seen = HashSet::new();
        for p in &def.params {
            if !seen.insert(p.name.as_str()) {
                return Err(RegistryError::Invalid(format!("`{}` declares parameter `{}` twice", def.id, p.name)));
            }
            self.check_type(&p.ty)?;
        }
        self.check_type(&def.return_type)?;
        let mut scope: Vec<String> = def.params.iter().map(|p| p.name.clone()).collect();
        let pre = def
            .preconditions
            .iter()
            .map(|src| self.compile(src, &scope, Some(def)))
            .collect::<Result<_, _>>()?;
        scope.push("result".to_string());
        let post = def
            .postconditions
            .iter()
            .map(|src| self.compile(src, &scope, Some(def)))
            .collect::<Result<_, _>>()?;
        Ok((pre, post))
    }

    /// Registers an interface. Ids are never reassigned.
    pub fn register(&mut self, def: FunctionDef) -> Result<String, RegistryError> {
        if self.functions.contains_key(&def.id) {
            return Err(RegistryError::DuplicateId(def.id));
        }
        let (pre, post) = self.check_def(&def)?;
        let id = def.id.clone();
        self.functions.insert(
            id.clone(),
            FunctionEntry {
                def,
                impls: Vec::new(),
                pre,
                post,
            },
        );
        Ok(id)
    }

    pub fn add_implementation(&mut self, fn_id: &str, imp: Implementation) -> Result<String, RegistryError> {
        let entry = self
            .functions
            .get(fn_id)
            .ok_or_else(|| RegistryError::UnknownFunction(fn_id.to_string()))?;
        if self.impl_ids.contains(&imp.id) {
            return Err(RegistryError::DuplicateId(imp.id));
        }
        let compiled = self.compile_impl(&entry.def, &imp)?;
        let id = imp.id.clone();
        self.impl_ids.insert(id.clone());
        self.functions[fn_id].impls.push(ImplEntry { doc: imp, compiled });
        Ok(id)
    }

    fn compile_impl(&self, def: &FunctionDef, imp: &Implementation) -> Result<Compiled<E>, RegistryError> {
        Ok(match &imp.kind {
            ImplKind::Builtin(name) => Compiled::Builtin(
                self.host
                    .get(name)
                    .cloned()
                    .ok_or_else(|| RegistryError::UnknownBuiltin(name.clone()))?,
            ),
            ImplKind::Composition(src) => {
                let scope: Vec<String> = def.params.iter().map(|p| p.name.clone()).collect();
                Compiled::Composition(self.compile(src, &scope, Some(def))?)
            }
        })
    }

    /// Registers a host function whose builtin name and interface id agree;
    /// the implementation id is `<id>_builtin`.
    pub fn register_builtin<F>(&mut self, def: FunctionDef, f: F) -> Result<String, RegistryError>
    where
        F: Fn(&Evaluator<'_, E>, Vec<Datum>) -> Result<Datum, EvalError> + Send + Sync + 'static,
    {
        let id = def.id.clone();
        self.provide_builtin(&id, f);
        self.register(def)?;
        self.add_implementation(&id, Implementation::builtin(&format!("{id}_builtin"), &id))
    }

    /// Loads a function document: the interface is registered (or, when the
    /// id exists, replaced) together with all of its implementations. The
    /// registry is unchanged if anything fails to compile.
    pub fn upsert_document(&mut self, doc: FunctionDocument) -> Result<(), RegistryError> {
        let id = doc.def.id.clone();
        let (pre, post) = self.check_def(&doc.def)?;
        let existing: HashSet<&str> = self
            .functions
            .get(&id)
            .map(|e| e.implementation_ids().collect())
            .unwrap_or_default();
        let mut seen = HashSet::new();
        for imp in &doc.implementations {
            if !seen.insert(imp.id.as_str()) || (self.impl_ids.contains(&imp.id) && !existing.contains(imp.id.as_str())) {
                return Err(RegistryError::DuplicateId(imp.id.clone()));
            }
        }
        // Compile against the new interface so recursive references see it.
        let previous = self.functions.insert(
            id.clone(),
            FunctionEntry {
                def: doc.def.clone(),
                impls: Vec::new(),
                pre,
                post,
            },
        );
        let compiled: Result<Vec<_>, _> = doc
            .implementations
            .iter()
            .map(|imp| self.compile_impl(&doc.def, imp).map(|c| ImplEntry { doc: imp.clone(), compiled: c }))
            .collect();
        match compiled {
            Ok(impls) => {
                if let Some(prev) = previous {
                    for imp in prev.impls {
                        self.impl_ids.remove(&imp.doc.id);
                    }
                }
                self.impl_ids.extend(impls.iter().map(|i| i.doc.id.clone()));
                self.functions[&id].impls = impls;
                self.preferred.write().remove(&id);
                self.cache.clear(Some(&id));
                Ok(())
            }
            Err(e) => {
                match previous {
                    Some(prev) => {
                        self.functions.insert(id, prev);
                    }
                    None => {
                        self.functions.shift_remove(&id);
                    }
                }
                Err(e)
            }
        }
    }

    pub fn document(&self, id: &str) -> Option<FunctionDocument> {
        self.functions.get(id).map(|e| FunctionDocument {
            def: e.def.clone(),
            implementations: e.impls.iter().map(|i| i.doc.clone()).collect(),
        })
    }

    pub fn def(&self, id: &str) -> Option<&FunctionDef> {
        self.functions.get(id).map(|e| &e.def)
    }

    pub fn function_ids(&self) -> impl Iterator<Item = &str> {
        self.functions.keys().map(String::as_str)
    }

    pub fn implementations(&self, id: &str) -> Vec<&Implementation> {
        self.functions
            .get(id)
            .map(|e| e.impls.iter().map(|i| &i.doc).collect())
            .unwrap_or_default()
    }

    pub fn preferred_implementation(&self, id: &str) -> Option<String> {
        self.preferred.read().get(id).cloned()
    }

    pub(crate) fn set_preferred(&self, id: &str, imp: &str) {
        self.preferred.write().insert(id.to_string(), imp.to_string());
    }

    pub fn cache_stats(&self) -> CacheStats {
        self.cache.stats(None)
    }

    pub fn function_cache_stats(&self, id: &str) -> CacheStats {
        self.cache.stats(Some(id))
    }

    pub fn clear_cache(&self) {
        self.cache.clear(None);
    }

    fn compile(&self, src: &str, scope: &[String], this: Option<&FunctionDef>) -> Result<Expr, RegistryError> {
        let raw = parse_expr(src).map_err(|e| RegistryError::Invalid(format!("in `{src}`: {e}")))?;
        self.resolve(&raw, scope, this)
    }

    fn resolve(&self, raw: &RawExpr, scope: &[String], this: Option<&FunctionDef>) -> Result<Expr, RegistryError> {
        match raw {
            RawExpr::Const(d) => Ok(Expr::Const(d.clone())),
            RawExpr::List(xs) => Ok(Expr::List(
                xs.iter().map(|x| self.resolve(x, scope, this)).collect::<Result<_, _>>()?,
            )),
            RawExpr::Name(n) => scope
                .iter()
                .position(|s| s == n)
                .map(Expr::Param)
                .ok_or_else(|| RegistryError::Invalid(format!("unknown name `{n}`"))),
            RawExpr::Call { function, args, line, column } => {
                let at = |msg: String| RegistryError::Invalid(format!("line {line}, column {column}: {msg}"));
                if function == "if" {
                    let names = ["condition", "then", "else"];
                    let ordered = order_args(args, &names).map_err(at)?;
                    let mut it = ordered.into_iter().map(|a| self.resolve(a, scope, this));
                    let (c, t, e) = (it.next().expect("3")?, it.next().expect("3")?, it.next().expect("3")?);
                    return Ok(Expr::If(Box::new(c), Box::new(t), Box::new(e)));
                }
                let def = match this {
                    Some(d) if &d.id == function => d,
                    _ => self
                        .functions
                        .get(function)
                        .map(|e| &e.def)
                        .ok_or_else(|| RegistryError::UnknownFunction(function.clone()))?,
                };
                let names: Vec<&str> = def.params.iter().map(|p| p.name.as_str()).collect();
                let ordered = order_args(args, &names).map_err(|m| at(format!("`{function}`: {m}")))?;
                Ok(Expr::Call {
                    function: function.clone(),
                    args: ordered
                        .into_iter()
                        .map(|a| self.resolve(a, scope, this))
                        .collect::<Result<_, _>>()?,
                })
            }
        }
    }

    pub fn evaluator<'a>(&'a self, env: &'a E, options: &'a EvalOptions) -> Evaluator<'a, E> {
        Evaluator {
            registry: self,
            env,
            options,
            depth: Cell::new(0),
        }
    }

    pub fn evaluate(&self, env: &E, fn_id: &str, args: Vec<Datum>, options: &EvalOptions) -> Result<Datum, EvalError> {
        self.evaluator(env, options).call(fn_id, args)
    }
}

fn order_args<'r>(args: &'r [(Option<String>, RawExpr)], names: &[&str]) -> Result<Vec<&'r RawExpr>, String> {
    let keyed = args.iter().filter(|(k, _)| k.is_some()).count();
    if keyed != 0 && keyed != args.len() {
        return Err("arguments must be all positional or all keyed".to_string());
    }
    if args.len() != names.len() {
        return Err(format!("expects {} argument(s), {} given", names.len(), args.len()));
    }
    if keyed == 0 {
        return Ok(args.iter().map(|(_, e)| e).collect());
    }
    names
        .iter()
        .map(|n| {
            args.iter()
                .find(|(k, _)| k.as_deref() == Some(n))
                .map(|(_, e)| e)
                .ok_or_else(|| format!("missing argument `{n}`"))
        })
        .collect()
}

/// One evaluation in progress: tracks call depth and carries the options.
pub struct Evaluator<'a, E> {
    registry: &'a Registry<E>,
    env: &'a E,
    options: &'a EvalOptions,
    depth: Cell<usize>,
}

impl<'a, E> Evaluator<'a, E> {
    pub fn env(&self) -> &'a E {
        self.env
    }

    pub fn registry(&self) -> &'a Registry<E> {
        self.registry
    }

    pub fn options(&self) -> &'a EvalOptions {
        self.options
    }

    pub fn depth(&self) -> usize {
        self.depth.get()
    }

    /// Calls a registered function. Every call, including calls made by
    /// builtins and type predicates, counts towards the depth limit.
    pub fn call(&self, fn_id: &str, args: Vec<Datum>) -> Result<Datum, EvalError> {
        let limit = self.options.depth_limit.unwrap_or(self.registry.config.depth_limit);
        let depth = self.depth.get() + 1;
        if depth > limit {
            return Err(EvalError::DepthExceeded(limit));
        }
        self.depth.set(depth);
        let result = stacker::maybe_grow(128 * 1024, 4 * 1024 * 1024, || self.call_inner(fn_id, args));
        self.depth.set(depth - 1);
        result
    }

    fn call_inner(&self, fn_id: &str, args: Vec<Datum>) -> Result<Datum, EvalError> {
        let registry = self.registry;
        let entry = registry
            .functions
            .get(fn_id)
            .ok_or_else(|| EvalError::UnknownFunction(fn_id.to_string()))?;
        let def = &entry.def;
        if args.len() != def.params.len() {
            return Err(EvalError::TypeError(format!(
                "`{fn_id}` takes {} argument(s), {} given",
                def.params.len(),
                args.len()
            )));
        }
        for (p, a) in def.params.iter().zip(&args) {
            if !self.conforms(a, &p.ty)? {
                return Err(EvalError::TypeError(format!(
                    "argument `{}` of `{fn_id}` must be {}, got {a}",
                    p.name, p.ty
                )));
            }
        }
        for (src, pre) in def.preconditions.iter().zip(&entry.pre) {
            if self.interpret(pre, &args)? != Datum::Bool(true) {
                return Err(EvalError::PreconditionFailed(format!("`{fn_id}` requires {src}")));
            }
        }

        let pinned = self.options.pins.get(fn_id).cloned();
        let wanted = pinned.clone().or_else(|| registry.preferred_implementation(fn_id));
        let imp = match &wanted {
            Some(w) => entry.impls.iter().find(|i| &i.doc.id == w),
            None => None,
        };
        let imp = match (imp, pinned) {
            (Some(i), _) => i,
            (None, Some(p)) => return Err(EvalError::NoImplementation(format!("`{fn_id}` has no implementation `{p}`"))),
            (None, None) => entry
                .impls
                .first()
                .ok_or_else(|| EvalError::NoImplementation(format!("`{fn_id}` has no implementations")))?,
        };

        let key = (def.pure && !self.options.bypass_cache).then(|| {
            let mut k = imp.doc.id.clone();
            for a in &args {
                k.push('|');
                k.push_str(&a.canonical());
            }
            k
        });
        if let Some(k) = &key {
            if let Some(hit) = registry.cache.get(fn_id, k) {
                return Ok(hit);
            }
        }

        let result = match &imp.compiled {
            Compiled::Builtin(f) => f(self, args.clone())?,
            Compiled::Composition(expr) => self.interpret(expr, &args)?,
        };
        if !self.conforms(&result, &def.return_type)? {
            return Err(EvalError::TypeError(format!(
                "`{fn_id}` ({}) returned {result}, which is not a {}",
                imp.doc.id, def.return_type
            )));
        }
        let check_post = self
            .options
            .check_postconditions
            .unwrap_or(registry.config.check_postconditions);
        if check_post && !entry.post.is_empty() {
            let mut bound = args;
            bound.push(result.clone());
            for (src, post) in def.postconditions.iter().zip(&entry.post) {
                if self.interpret(post, &bound)? != Datum::Bool(true) {
                    return Err(EvalError::PostconditionFailed(format!("`{fn_id}` ensures {src}")));
                }
            }
        }
        if let Some(k) = key {
            registry.cache.put(fn_id, k, result.clone());
        }
        Ok(result)
    }

    fn interpret(&self, expr: &Expr, args: &[Datum]) -> Result<Datum, EvalError> {
        match expr {
            Expr::Const(d) => Ok(d.clone()),
            Expr::List(xs) => Ok(Datum::List(
                xs.iter().map(|x| self.interpret(x, args)).collect::<Result<_, _>>()?,
            )),
            Expr::Param(i) => Ok(args[*i].clone()),
            Expr::If(c, t, e) => match self.interpret(c, args)? {
                Datum::Bool(true) => self.interpret(t, args),
                Datum::Bool(false) => self.interpret(e, args),
                other => Err(EvalError::TypeError(format!("`if` condition must be a boolean, got {other}"))),
            },
            Expr::Call { function, args: arg_exprs } => {
                let vals = arg_exprs
                    .iter()
                    .map(|a| self.interpret(a, args))
                    .collect::<Result<Vec<_>, _>>()?;
                self.call(function, vals)
            }
        }
    }

    /// Whether `d` is a value of type `ty`; registry-defined types run
    /// their predicate.
    pub fn conforms(&self, d: &Datum, ty: &SemanticType) -> Result<bool, EvalError> {
        Ok(match (ty, d) {
            (SemanticType::Any, _) => true,
            (SemanticType::Integer, Datum::Int(_))
            | (SemanticType::Text, Datum::Text(_))
            | (SemanticType::Boolean, Datum::Bool(_))
            | (SemanticType::Item, Datum::Item(_))
            | (SemanticType::Content, Datum::Node(_))
            | (SemanticType::Phrase, Datum::Phrase(_))
            | (SemanticType::Features, Datum::Features(_))
            | (SemanticType::Record, Datum::Record(_)) => true,
            (SemanticType::ListOf(inner), Datum::List(xs)) => {
                for x in xs {
                    if !self.conforms(x, inner)? {
                        return Ok(false);
                    }
                }
                true
            }
            (SemanticType::Named(id), _) => {
                let td = self
                    .registry
                    .types
                    .get(id)
                    .ok_or_else(|| EvalError::TypeError(format!("unknown type `{id}`")))?;
                self.conforms(d, &td.base)? && self.call(&td.predicate, vec![d.clone()])? == Datum::Bool(true)
            }
            _ => false,
        })
    }

    /// Turns a content value into a datum, evaluating function calls.
    pub fn resolve_value(&self, value: &Value) -> Result<Datum, EvalError> {
        self.resolve_value_with(value, false)
    }

    pub(crate) fn resolve_value_with(&self, value: &Value, booleans: bool) -> Result<Datum, EvalError> {
        match value {
            Value::FunctionCall(call) => {
                let args = call
                    .args
                    .iter()
                    .map(|a| self.resolve_value_with(a, booleans))
                    .collect::<Result<Vec<_>, _>>()?;
                self.call(&call.function_id, args)
            }
            Value::List(xs) => Ok(Datum::List(
                xs.iter().map(|x| self.resolve_value_with(x, booleans)).collect::<Result<_, _>>()?,
            )),
            other => Datum::from_constant(other, booleans).map_err(EvalError::TypeError),
        }
    }
}

impl<E> FunctionLookup for Registry<E> {
    fn call_signature(&self, function_id: &str) -> Option<CallSignature> {
        let def = self.def(function_id)?;
        let mut ty = &def.return_type;
        while let SemanticType::Named(id) = ty {
            match self.types.get(id) {
                Some(td) => ty = &td.base,
                None => break,
            }
        }
        let returns = match ty {
            SemanticType::Integer => vec![TypeDescriptor::Integer],
            SemanticType::Text => vec![TypeDescriptor::Text],
            SemanticType::Item => vec![TypeDescriptor::Item],
            SemanticType::ListOf(inner) => match inner.as_ref() {
                SemanticType::Integer => vec![TypeDescriptor::ListOf(Box::new(TypeDescriptor::Integer))],
                SemanticType::Text => vec![TypeDescriptor::ListOf(Box::new(TypeDescriptor::Text))],
                SemanticType::Item => vec![TypeDescriptor::ListOf(Box::new(TypeDescriptor::Item))],
                _ => Vec::new(),
            },
            _ => Vec::new(),
        };
        Some(CallSignature {
            arity: def.params.len(),
            returns,
        })
    }
}
