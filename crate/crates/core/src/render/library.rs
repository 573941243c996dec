//! Registry functions renderers are built from: content access, phrase
//! assembly, agreement helpers and lexicon lookups.

use std::collections::BTreeMap;

use crate::content::{ConstructorInstantiation, ItemId};
use crate::lexicon::{Case, Category, Definiteness, Degree, Dimension, FeatureBundle, Gender, LexicalRef, LexiconError, Number, Person, Tense};
use crate::phrase::{GrammaticalType, MissingPart, Part, Phrase};
use crate::registry::{Datum, EvalError, Evaluator, FunctionDef, Registry, RegistryError};

use super::World;

type Ev<'a> = Evaluator<'a, World>;

fn bad(what: &str, got: &Datum) -> EvalError {
    EvalError::TypeError(format!("expected {what}, got {got}"))
}

fn text(a: &[Datum], i: usize) -> Result<&str, EvalError> {
    a[i].as_text().ok_or_else(|| bad("text", &a[i]))
}

fn node(a: &[Datum], i: usize) -> Result<&ConstructorInstantiation, EvalError> {
    match &a[i] {
        Datum::Node(n) => Ok(n),
        other => Err(bad("content", other)),
    }
}

fn phrase(a: &[Datum], i: usize) -> Result<&Phrase, EvalError> {
    match &a[i] {
        Datum::Phrase(p) => Ok(p),
        other => Err(bad("a phrase", other)),
    }
}

fn features(d: &Datum) -> Result<FeatureBundle, EvalError> {
    match d {
        Datum::Features(f) => Ok(*f),
        Datum::Unit => Ok(FeatureBundle::new()),
        other => Err(bad("features", other)),
    }
}

fn record(d: &Datum) -> Result<&BTreeMap<String, Datum>, EvalError> {
    match d {
        Datum::Record(r) => Ok(r),
        other => Err(bad("a record", other)),
    }
}

fn parsed<T: std::str::FromStr<Err = String>>(s: &str) -> Result<T, EvalError> {
    s.parse().map_err(EvalError::TypeError)
}

fn lexicon_error(e: LexiconError) -> EvalError {
    let full = e.to_string();
    let (code, message) = full.split_once(": ").unwrap_or(("LEXICON_ERROR", &full));
    EvalError::domain(code, message)
}

fn lexical_ref(d: &Datum) -> Result<LexicalRef, EvalError> {
    match d {
        Datum::Item(id) => Ok(LexicalRef::Item(id.clone())),
        Datum::Text(s) => Ok(s.parse().expect("infallible")),
        Datum::Node(n) => Ok(LexicalRef::Concept(n.constructor_id.clone())),
        other => Err(bad("an item, lexeme or concept", other)),
    }
}

fn describe(r: &LexicalRef) -> String {
    match r {
        LexicalRef::Item(id) => id.to_string(),
        LexicalRef::Lexeme(id) | LexicalRef::Concept(id) => id.clone(),
    }
}

fn form(found: Option<&str>, missing: impl FnOnce() -> String) -> Datum {
    match found {
        Some(s) => Datum::text(s),
        None => Datum::Missing(missing()),
    }
}

/// Pins a missing datum to the key it came from.
fn located(d: Datum, key: &str) -> Datum {
    match d {
        Datum::Missing(reason) => Datum::Phrase(Phrase::missing(GrammaticalType::TextFragment, reason).locate_missing(key)),
        d => d,
    }
}

fn third_singular() -> FeatureBundle {
    FeatureBundle::new().person(Person::Third).number(Number::Singular)
}

fn context_case(ctx: &Datum) -> Result<Case, EvalError> {
    match record(ctx)?.get("case") {
        Some(Datum::Text(c)) => parsed(c),
        _ => Ok(Case::Nominative),
    }
}

/// Noun phrase for an item: its case form plus person, number and (when
/// known) gender for agreement.
fn item_phrase(world: &World, id: &ItemId, lang: &str, case: Case) -> Phrase {
    let lexicon = &world.lexicon;
    let Some(surface) = lexicon.inflect_np(id, case, lang, &world.items) else {
        return Phrase::missing(GrammaticalType::NounPhrase, format!("no {case} form of {id} in {lang}"));
    };
    let mut f = third_singular();
    f.gender = lexicon.gender_of(&LexicalRef::Item(id.clone()), lang, &world.items);
    Phrase::text(GrammaticalType::NounPhrase, surface).with_features(f)
}

/// Dispatches a value to its renderer.
pub(crate) fn render_value(ev: &Ev<'_>, value: &Datum, lang: &str, ctx: &Datum) -> Result<Phrase, EvalError> {
    let world = ev.env();
    Ok(match value {
        Datum::Node(inst) => {
            let Some(manifest) = world.manifests.get(lang) else {
                return Ok(Phrase::missing(GrammaticalType::TextFragment, format!("no renderer set for {lang}")));
            };
            let enumeration = inst.arguments.is_empty()
                && world.catalog.get(&inst.constructor_id).is_none_or(|s| s.is_enumeration());
            let renderer = manifest
                .renderers
                .get(&inst.constructor_id)
                .or(manifest.enumerations.as_ref().filter(|_| enumeration));
            match renderer {
                None => Phrase::missing(
                    GrammaticalType::TextFragment,
                    format!("NO_RENDERER: no renderer for {} in {lang}", inst.constructor_id),
                ),
                Some(f) => match ev.call(f, vec![value.clone(), Datum::text(lang), ctx.clone()])? {
                    Datum::Phrase(p) => p,
                    other => return Err(EvalError::TypeError(format!("renderer `{f}` returned {other}"))),
                },
            }
        }
        Datum::Item(id) => item_phrase(world, id, lang, context_case(ctx)?),
        Datum::Int(n) => Phrase::text(GrammaticalType::TextFragment, n.to_string()),
        Datum::Text(s) => Phrase::text(GrammaticalType::TextFragment, s.clone()),
        Datum::List(xs) => render_list(ev, xs, lang, "serial", ctx)?,
        Datum::Phrase(p) => p.clone(),
        Datum::Missing(reason) => Phrase::missing(GrammaticalType::TextFragment, reason.clone()),
        Datum::Unit => Phrase::new(GrammaticalType::TextFragment),
        other => return Err(bad("a renderable value", other)),
    })
}

/// Joins rendered values with commas and the language's conjunction.
/// `serial` puts a comma before the conjunction when there are three or
/// more elements; `plain` does not.
pub(crate) fn render_list(ev: &Ev<'_>, values: &[Datum], lang: &str, style: &str, ctx: &Datum) -> Result<Phrase, EvalError> {
    let serial = match style {
        "serial" => true,
        "plain" => false,
        other => return Err(EvalError::TypeError(format!("unknown list style `{other}`"))),
    };
    let conjunction = ev.env().lexicon.language(lang).map_err(lexicon_error)?.conjunction.clone();
    let mut rendered = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        rendered.push(render_value(ev, v, lang, ctx)?.locate_missing(&format!("[{i}]")));
    }
    if rendered.len() == 1 {
        return Ok(rendered.pop().expect("one element"));
    }
    let n = rendered.len();
    let mut out = Phrase::new(GrammaticalType::TextFragment);
    for (i, p) in rendered.into_iter().enumerate() {
        if i > 0 && i + 1 < n {
            out = out.push(Part::Text(",".into()));
        }
        if i > 0 && i + 1 == n {
            if serial && n >= 3 {
                out = out.push(Part::Text(",".into()));
            }
            out = out.push(Part::Text(conjunction.clone()));
        }
        out = out.push(Part::Phrase(p));
    }
    Ok(out)
}

fn pronoun_or_name(ev: &Ev<'_>, value: &Datum, lang: &str, ctx: &Datum) -> Result<Phrase, EvalError> {
    let previous = record(ctx)?.get("previous_subject");
    if matches!(value, Datum::Item(_)) && previous == Some(value) {
        let f = third_singular().gender(Gender::Neuter);
        if let Some(p) = ev.env().lexicon.pronoun(&f, lang) {
            return Ok(Phrase::text(GrammaticalType::NounPhrase, p).with_features(f));
        }
    }
    render_value(ev, value, lang, ctx)
}

fn build_phrase(gtype: &str, parts: &Datum, f: FeatureBundle) -> Result<Phrase, EvalError> {
    fn add(p: Phrase, d: &Datum) -> Result<Phrase, EvalError> {
        Ok(match d {
            Datum::Phrase(x) => p.push(Part::Phrase(x.clone())),
            Datum::Text(t) => p.push(Part::Text(t.clone())),
            Datum::Int(n) => p.push(Part::Text(n.to_string())),
            Datum::Missing(reason) => p.push(Part::Missing(MissingPart {
                at: None,
                reason: reason.clone(),
            })),
            Datum::Unit => p,
            Datum::List(xs) => xs.iter().try_fold(p, add)?,
            other => return Err(bad("a phrase part", other)),
        })
    }
    add(Phrase::new(parsed(gtype)?).with_features(f), parts)
}

/// Prepends the article selected by the phrase's definiteness and gender.
fn determine(world: &World, np: &Phrase, lang: &str) -> Phrase {
    let Some(def) = np.features.definiteness else {
        return np.clone();
    };
    let article = match world.lexicon.article(def, np.features.gender, lang) {
        Ok(Some(a)) => Part::Text(a.to_string()),
        Ok(None) => Part::Missing(MissingPart {
            at: None,
            reason: format!("no {def} article for `{}` in {lang}", np.features),
        }),
        // No article table: the language does not mark definiteness this way.
        Err(_) => return np.clone(),
    };
    Phrase::new(GrammaticalType::NounPhrase)
        .with_features(np.features)
        .push(article)
        .push(Part::Phrase(np.clone()))
}

fn agree_verb(world: &World, lexeme: &str, subject: &Phrase, tense: Tense) -> Phrase {
    let f = subject
        .features
        .project(&[Dimension::Person, Dimension::Number])
        .tense(tense);
    let found = world.lexicon.get(lexeme).and_then(|l| world.lexicon.inflect(l, &f));
    match found {
        Some(s) => Phrase::text(GrammaticalType::TextFragment, s).with_features(f),
        None => Phrase::missing(GrammaticalType::TextFragment, format!("no `{f}` form of {lexeme}")),
    }
}

fn render_lexical(world: &World, inst: &ConstructorInstantiation, lang: &str, ctx: &Datum) -> Result<Phrase, EvalError> {
    let concept = &inst.constructor_id;
    let lexicon = &world.lexicon;
    let Some(lexeme) = lexicon.resolve(&LexicalRef::Concept(concept.clone()), lang, &world.items) else {
        return Ok(Phrase::missing(GrammaticalType::TextFragment, format!("no {lang} lexicalization of {concept}")));
    };
    let (gtype, request, inherent) = match lexeme.category {
        Category::Noun | Category::ProperNoun => {
            let f = third_singular().merge(&lexeme.features);
            (GrammaticalType::NounPhrase, f.case(context_case(ctx)?), f)
        }
        Category::Adjective => {
            let agreement = match record(ctx)?.get("agreement") {
                Some(d) => features(d)?,
                None => FeatureBundle::new(),
            };
            (GrammaticalType::Modifier, agreement.degree(Degree::Positive), FeatureBundle::new())
        }
        _ => (GrammaticalType::TextFragment, FeatureBundle::new(), FeatureBundle::new()),
    };
    Ok(match lexicon.inflect(lexeme, &request) {
        Some(s) => Phrase::text(gtype, s).with_features(inherent),
        None => Phrase::missing(gtype, format!("no `{request}` form of {} ({concept})", lexeme.id)),
    })
}

/// Builtin twin of the Ranking compositions, assembled directly.
fn ranking(ev: &Ev<'_>, a: &[Datum], german: bool) -> Result<Datum, EvalError> {
    let inst = node(a, 0)?;
    let lang = text(a, 1)?;
    let ctx = &a[2];
    let get = |k: &str| -> Result<Datum, EvalError> {
        inst.get(k).map_or(Ok(Datum::Unit), |v| ev.resolve_value(v))
    };
    let key = |k: &str, ctx: &Datum| -> Result<Phrase, EvalError> {
        Ok(render_value(ev, &get(k)?, lang, ctx)?.locate_missing(k))
    };
    let subject = pronoun_or_name(ev, &get("subject")?, lang, ctx)?;
    let object = key("object", ctx)?;
    let mut agreement = object.features.project(&[Dimension::Gender]).definiteness(Definiteness::Definite);
    if !german {
        agreement = FeatureBundle::new().definiteness(Definiteness::Definite);
    }
    let ordinal = ev.call("ordinal", vec![get("rank")?, Datum::text(lang)])?;
    let superlative = ev.call("superlative", vec![get("by")?, Datum::text(lang), Datum::Features(agreement)])?;
    let stem = located(
        if german {
            ev.call("glue", vec![Datum::List(vec![ordinal, superlative])])?
        } else {
            ev.call("glue", vec![Datum::List(vec![ordinal, Datum::text("-"), superlative])])?
        },
        "by",
    );
    let after = match get("after")? {
        Datum::List(xs) => Some(render_list(ev, &xs, lang, "plain", ctx)?.locate_missing("after")),
        _ => None,
    };
    let local = if inst.get("local_constraint").is_some() {
        let ctx = if german {
            let mut r = record(ctx)?.clone();
            r.insert("case".into(), Datum::text("dative"));
            Datum::Record(r)
        } else {
            ctx.clone()
        };
        Some(key("local_constraint", &ctx)?)
    } else {
        None
    };
    let mut parts = vec![Datum::Phrase(subject)];
    if german {
        parts.push(Datum::text("ist"));
        if let Some(after) = after {
            parts.extend([Datum::text(","), Datum::text("nach"), Datum::Phrase(after), Datum::text(",")]);
        }
        let gender = object.features.gender.map_or_else(
            || Datum::Missing("no gender for the ranked object".into()),
            |g| Datum::text(g.as_str()),
        );
        parts.push(located(ev.call("article", vec![Datum::text("definite"), gender, Datum::text(lang)])?, "object"));
        parts.extend([stem, Datum::Phrase(object)]);
        if let Some(local) = local {
            parts.extend([Datum::text("in"), Datum::Phrase(local)]);
        }
    } else {
        parts.extend([Datum::text("is"), Datum::text("the"), stem, Datum::Phrase(object)]);
        if let Some(local) = local {
            parts.extend([Datum::text("in"), Datum::Phrase(local)]);
        }
        if let Some(after) = after {
            parts.extend([Datum::text(","), Datum::text("after"), Datum::Phrase(after)]);
        }
    }
    build_phrase("sentence", &Datum::List(parts), FeatureBundle::new()).map(Datum::Phrase)
}

fn def(id: &str, ret: &str, params: &[(&str, &str)]) -> FunctionDef {
    params.iter().fold(FunctionDef::new(id, ret), |d, (n, t)| d.param(n, t))
}

const RENDERER: &[(&str, &str)] = &[("node", "content"), ("language", "text"), ("context", "record")];

pub fn install(reg: &mut Registry<World>) -> Result<(), RegistryError> {
    // Content access.
    reg.register_builtin(def("arg", "any", &[("node", "content"), ("key", "text")]), |ev, a| {
        let inst = node(&a, 0)?;
        inst.get(text(&a, 1)?).map_or(Ok(Datum::Unit), |v| ev.resolve_value(v))
    })?;
    reg.register_builtin(def("has", "boolean", &[("node", "content"), ("key", "text")]), |_, a| {
        Ok(Datum::Bool(node(&a, 0)?.get(text(&a, 1)?).is_some()))
    })?;
    reg.register_builtin(
        def("key", "phrase", &[("node", "content"), ("key", "text"), ("language", "text"), ("context", "record")]),
        |ev, a| {
            let k = text(&a, 1)?;
            let value = node(&a, 0)?.get(k).map_or(Ok(Datum::Unit), |v| ev.resolve_value(v))?;
            Ok(Datum::Phrase(render_value(ev, &value, text(&a, 2)?, &a[3])?.locate_missing(k)))
        },
    )?;
    reg.register_builtin(
        def("render_value", "phrase", &[("value", "any"), ("language", "text"), ("context", "record")]),
        |ev, a| render_value(ev, &a[0], text(&a, 1)?, &a[2]).map(Datum::Phrase),
    )?;
    reg.register_builtin(
        def("render_list", "phrase", &[("values", "list<any>"), ("language", "text"), ("style", "text"), ("context", "record")]),
        |ev, a| {
            let Datum::List(xs) = &a[0] else { return Err(bad("a list", &a[0])) };
            render_list(ev, xs, text(&a, 1)?, text(&a, 2)?, &a[3]).map(Datum::Phrase)
        },
    )?;
    reg.register_builtin(
        def("pronoun_or_name", "phrase", &[("value", "any"), ("language", "text"), ("context", "record")]),
        |ev, a| pronoun_or_name(ev, &a[0], text(&a, 1)?, &a[2]).map(Datum::Phrase),
    )?;

    // Phrases, features and records.
    reg.register_builtin(def("nothing", "any", &[]), |_, _| Ok(Datum::Unit))?;
    reg.register_builtin(
        def("phrase", "phrase", &[("gtype", "text"), ("parts", "list<any>"), ("features", "any")]),
        |_, a| build_phrase(text(&a, 0)?, &a[1], features(&a[2])?).map(Datum::Phrase),
    )?;
    reg.register_builtin(
        def("bundle", "features", &[("spec", "text")]).test(&["\"case=dative\""], "bundle(\"case=dative\")"),
        |_, a| parsed(text(&a, 0)?).map(Datum::Features),
    )?;
    reg.register_builtin(def("features_of", "features", &[("phrase", "phrase")]), |_, a| {
        Ok(Datum::Features(phrase(&a, 0)?.features))
    })?;
    reg.register_builtin(def("merge_features", "features", &[("a", "any"), ("b", "any")]), |_, a| {
        Ok(Datum::Features(features(&a[0])?.merge(&features(&a[1])?)))
    })?;
    reg.register_builtin(def("with_features", "phrase", &[("phrase", "phrase"), ("features", "any")]), |_, a| {
        let p = phrase(&a, 0)?;
        let f = p.features.merge(&features(&a[1])?);
        Ok(Datum::Phrase(p.clone().with_features(f)))
    })?;
    reg.register_builtin(def("set", "record", &[("record", "record"), ("key", "text"), ("value", "any")]), |_, a| {
        let mut r = record(&a[0])?.clone();
        r.insert(text(&a, 1)?.to_string(), a[2].clone());
        Ok(Datum::Record(r))
    })?;
    reg.register_builtin(def("get", "any", &[("record", "record"), ("key", "text")]), |_, a| {
        Ok(record(&a[0])?.get(text(&a, 1)?).cloned().unwrap_or(Datum::Unit))
    })?;
    reg.register_builtin(
        def("glue", "any", &[("parts", "list<any>")]).test(&["[\"viert\", \"größte\"]"], "\"viertgrößte\""),
        |_, a| {
            let Datum::List(xs) = &a[0] else { return Err(bad("a list", &a[0])) };
            let mut out = String::new();
            for x in xs {
                match x {
                    Datum::Text(s) => out.push_str(s),
                    Datum::Int(n) => out.push_str(&n.to_string()),
                    Datum::Missing(_) => return Ok(x.clone()),
                    other => return Err(bad("text", other)),
                }
            }
            Ok(Datum::Text(out))
        },
    )?;
    reg.register_builtin(def("determine", "phrase", &[("np", "phrase"), ("language", "text")]), |ev, a| {
        Ok(Datum::Phrase(determine(ev.env(), phrase(&a, 0)?, text(&a, 1)?)))
    })?;
    reg.register_builtin(
        def("agree_verb", "phrase", &[("lexeme", "text"), ("subject", "phrase"), ("tense", "text")]),
        |ev, a| Ok(Datum::Phrase(agree_verb(ev.env(), text(&a, 0)?, phrase(&a, 1)?, parsed(text(&a, 2)?)?))),
    )?;

    // Lexicon lookups. Absent forms come back as `missing` values.
    reg.register_builtin(def("lookup_form", "any", &[("lexeme", "text"), ("features", "features")]), |ev, a| {
        let id = text(&a, 0)?;
        let f = features(&a[1])?;
        let found = ev.env().lexicon.lookup_form(id, &f).map_err(lexicon_error)?;
        Ok(form(found, || format!("{id} has no `{f}` form")))
    })?;
    reg.register_builtin(
        def("ordinal", "text", &[("n", "positive_integer"), ("language", "text")])
            .test(&["4", "\"en\""], "\"fourth\"")
            .test(&["4", "\"de\""], "\"viert\""),
        |ev, a| {
            let n = a[0].as_int().ok_or_else(|| bad("an integer", &a[0]))?;
            ev.env().lexicon.ordinal(n, text(&a, 1)?).map(Datum::text).map_err(lexicon_error)
        },
    )?;
    reg.register_builtin(
        def("superlative", "any", &[("property", "any"), ("language", "text"), ("agreement", "any")]),
        |ev, a| {
            let w = ev.env();
            let r = lexical_ref(&a[0])?;
            let lang = text(&a, 1)?;
            let found = w.lexicon.superlative(&r, lang, &w.items, &features(&a[2])?);
            Ok(form(found, || format!("no superlative for {} in {lang}", describe(&r))))
        },
    )?;
    reg.register_builtin(
        def("inflect_np", "any", &[("item", "item"), ("case", "text"), ("language", "text")]),
        |ev, a| {
            let w = ev.env();
            let Datum::Item(id) = &a[0] else { return Err(bad("an item", &a[0])) };
            let case: Case = parsed(text(&a, 1)?)?;
            let lang = text(&a, 2)?;
            let found = w.lexicon.inflect_np(id, case, lang, &w.items);
            Ok(form(found.as_deref(), || format!("no {case} form of {id} in {lang}")))
        },
    )?;
    reg.register_builtin(
        def("article", "any", &[("definiteness", "text"), ("gender", "any"), ("language", "text")]),
        |ev, a| {
            let def: Definiteness = parsed(text(&a, 0)?)?;
            let gender: Option<Gender> = match &a[1] {
                Datum::Text(g) => Some(parsed(g)?),
                Datum::Unit => None,
                Datum::Missing(_) => return Ok(a[1].clone()),
                other => return Err(bad("a gender", other)),
            };
            let lang = text(&a, 2)?;
            let found = ev.env().lexicon.article(def, gender, lang).map_err(lexicon_error)?;
            Ok(form(found, || format!("no {def} article without a gender in {lang}")))
        },
    )?;
    reg.register_builtin(def("gender_of", "any", &[("ref", "any"), ("language", "text")]), |ev, a| {
        let w = ev.env();
        let r = lexical_ref(&a[0])?;
        let lang = text(&a, 1)?;
        Ok(match w.lexicon.gender_of(&r, lang, &w.items) {
            Some(g) => Datum::text(g.as_str()),
            None => Datum::Missing(format!("no gender for {} in {lang}", describe(&r))),
        })
    })?;

    // Renderers implemented in host code.
    reg.register_builtin(def("render_lexical", "phrase", RENDERER), |ev, a| {
        render_lexical(ev.env(), node(&a, 0)?, text(&a, 1)?, &a[2]).map(Datum::Phrase)
    })?;
    reg.provide_builtin("ranking_en", |ev, a| ranking(ev, &a, false));
    reg.provide_builtin("ranking_de", |ev, a| ranking(ev, &a, true));
    Ok(())
}
