//! Fixture loading, content generators and independent oracles shared by
//! the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use abstext::content::{Content, ConstructorInstantiation, FunctionCall, ItemId, ItemRef, Literal, Value};
use abstext::registry::RegistryConfig;
use abstext::Engine;
use indexmap::IndexMap;
use proptest::prelude::*;

pub const EN: &str = "San Francisco is the cultural, commercial, and financial center of Northern California. It is the fourth-most populous city in California, after Los Angeles, San Diego and San Jose.";
pub const DE: &str = "San Francisco ist das kulturelle, kommerzielle und finanzielle Zentrum Nordkaliforniens. Es ist, nach Los Angeles, San Diego und San Jose, die viertgrößte Stadt in Kalifornien.";

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn engine() -> Engine {
    Engine::load(&fixtures(), RegistryConfig::default()).expect("fixtures load")
}

pub fn san_francisco(engine: &Engine) -> Content {
    engine.content("Q62").expect("stored San Francisco content").clone()
}

/// Splits rendered text after each full stop.
pub fn sentences(text: &str) -> Vec<&str> {
    text.split_inclusive(". ").map(str::trim).collect()
}

// Oracles, written from the number names rather than the fixture tables.

pub fn english_ordinal(n: u32) -> String {
    const CARDINAL: [&str; 20] = [
        "", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
        "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
    ];
    match n {
        1 => "first".into(),
        2 => "second".into(),
        3 => "third".into(),
        5 => "fifth".into(),
        8 => "eighth".into(),
        9 => "ninth".into(),
        12 => "twelfth".into(),
        20 => "twentieth".into(),
        n => format!("{}th", CARDINAL[n as usize]),
    }
}

/// Ordinal stems as they appear in German compounds ("viert" + "größte").
pub fn german_ordinal_stem(n: u32) -> String {
    const CARDINAL: [&str; 20] = [
        "", "eins", "zwei", "drei", "vier", "fünf", "sechs", "sieben", "acht", "neun", "zehn", "elf", "zwölf",
        "dreizehn", "vierzehn", "fünfzehn", "sechzehn", "siebzehn", "achtzehn", "neunzehn",
    ];
    match n {
        1 => "erst".into(),
        3 => "dritt".into(),
        7 => "siebt".into(),
        8 => "acht".into(),
        20 => "zwanzigst".into(),
        n => format!("{}t", CARDINAL[n as usize]),
    }
}

/// Natural subtraction by counting down, floored at zero.
pub fn monus(x: i64, y: i64) -> i64 {
    let mut r = x;
    for _ in 0..y {
        if r == 0 {
            break;
        }
        r -= 1;
    }
    r
}

// Generators.

pub fn ident() -> impl Strategy<Value = String> {
    "[a-zA-Z_][a-zA-Z0-9_]{0,7}".prop_filter("item ids are not identifiers", |s| !ItemId::is_valid(s))
}

pub fn item_id() -> impl Strategy<Value = ItemId> {
    (1u64..10_000_000).prop_map(|n| ItemId::new(format!("Q{n}")).unwrap())
}

pub fn item_ref() -> impl Strategy<Value = Value> {
    (item_id(), proptest::option::of(proptest::collection::vec(ident(), 1..3))).prop_map(|(id, words)| {
        Value::Item(match words {
            Some(w) => ItemRef::labeled(id, &w.join(" ")).unwrap(),
            None => ItemRef::new(id),
        })
    })
}

fn keyed(values: impl Strategy<Value = Value>) -> impl Strategy<Value = IndexMap<String, Value>> {
    proptest::collection::vec((ident(), values), 1..4).prop_map(|kv| kv.into_iter().collect())
}

/// Any syntactically well-formed value.
pub fn value() -> impl Strategy<Value = Value> {
    let leaf = prop_oneof![
        any::<i64>().prop_map(Value::int),
        any::<String>().prop_map(Value::text),
        item_ref(),
        ident().prop_map(Value::Enum),
    ];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 0..4).prop_map(Value::List),
            (ident(), proptest::collection::vec(inner.clone(), 1..4))
                .prop_map(|(f, args)| Value::FunctionCall(FunctionCall { function_id: f, args })),
            (ident(), keyed(inner)).prop_map(|(c, arguments)| Value::Constructor(ConstructorInstantiation {
                constructor_id: c,
                arguments
            })),
        ]
    })
}

/// Any syntactically well-formed content tree.
pub fn content() -> impl Strategy<Value = Content> {
    (ident(), keyed(value())).prop_map(|(c, arguments)| {
        Content::new(ConstructorInstantiation {
            constructor_id: c,
            arguments,
        })
    })
}

fn ctor(id: &str, args: Vec<(&str, Option<Value>)>) -> Value {
    let mut inst = ConstructorInstantiation::new(id);
    for (k, v) in args {
        if let Some(v) = v {
            inst.arguments.insert(k.to_string(), v);
        }
    }
    Value::Constructor(inst)
}

fn noun_phrase() -> impl Strategy<Value = Value> {
    let modifier = proptest::collection::vec(
        prop_oneof![Just("cultural"), Just("commercial"), Just("financial")].prop_map(|m| Value::Enum(m.into())),
        0..4,
    )
    .prop_map(|c| ctor("And_modifier", vec![("conjuncts", Some(Value::List(c)))]));
    (
        prop_oneof![Just(Value::Enum("center".into())), item_ref()],
        proptest::option::of(modifier),
        proptest::option::of(item_ref()),
    )
        .prop_map(|(object, modifier, of)| {
            ctor(
                "Object_with_modifier_and_of",
                vec![("object", Some(object)), ("modifier", modifier), ("of", of)],
            )
        })
}

fn sentence() -> impl Strategy<Value = Value> {
    let instantiation = (item_ref(), noun_phrase())
        .prop_map(|(i, c)| ctor("Instantiation", vec![("instance", Some(i)), ("class", Some(c))]));
    let ranking = (
        item_ref(),
        any::<i64>(),
        item_ref(),
        item_ref(),
        proptest::option::of(item_ref()),
        proptest::option::of(proptest::collection::vec(item_ref(), 0..4)),
    )
        .prop_map(|(s, r, o, b, l, a)| {
            ctor(
                "Ranking",
                vec![
                    ("subject", Some(s)),
                    ("rank", Some(Value::int(r))),
                    ("object", Some(o)),
                    ("by", Some(b)),
                    ("local_constraint", l),
                    ("after", a.map(Value::List)),
                ],
            )
        });
    prop_oneof![instantiation, ranking]
}

/// Articles that validate against the fixture catalog.
pub fn article() -> impl Strategy<Value = Content> {
    proptest::collection::vec(sentence(), 0..5).prop_map(|s| {
        let mut root = ConstructorInstantiation::new("Article");
        root.arguments.insert("content".into(), Value::List(s));
        Content::new(root)
    })
}

pub fn literal_text(v: &Value) -> Option<&str> {
    match v {
        Value::Literal(Literal::Text(s)) => Some(s),
        _ => None,
    }
}
