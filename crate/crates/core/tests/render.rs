mod support;

use abstext::content::{edit_value, Value};
use abstext::registry::{Datum, EvalOptions};
use proptest::prelude::*;
use support::{engine, san_francisco, DE, EN};

#[test]
fn golden_texts() {
    let e = engine();
    let c = san_francisco(&e);
    let en = e.render(&c, "en").unwrap();
    assert_eq!(en.text, EN);
    assert!(en.complete && en.omissions.is_empty());
    assert_eq!(e.render(&c, "de").unwrap().text, DE);
}

#[test]
fn composed_rankings_match_the_builtins() {
    let e = engine();
    let c = san_francisco(&e);
    for (lang, golden) in [("en", EN), ("de", DE)] {
        let f = format!("render_ranking_{lang}");
        let opts = EvalOptions::default().pin(&f, &format!("{f}_composed")).no_cache();
        assert_eq!(e.render_with(&c, lang, &opts).unwrap().text, golden);
    }
}

#[test]
fn unsupported_and_invalid() {
    let e = engine();
    let c = san_francisco(&e);
    assert_eq!(e.render(&c, "fr").unwrap_err().code(), "UNSUPPORTED_LANGUAGE");
    let bad = edit_value(&c, &"content[1].rank".parse().unwrap(), Value::text("four")).unwrap();
    assert_eq!(e.render(&bad, "en").unwrap_err().code(), "VALIDATION_FAILED");
}

#[test]
fn omission_is_located_at_the_key() {
    let mut e = engine();
    let c = san_francisco(&e);
    e.remove_lexeme("L900104");
    let out = e.render(&c, "de").unwrap();
    assert_eq!(out.omissions.len(), 1);
    assert_eq!(out.omissions[0].path.to_string(), "content[1].by");
}

#[test]
fn losing_the_first_sentence_drops_its_pronoun_dependent() {
    let mut e = engine();
    let c = san_francisco(&e);
    e.remove_lexeme("L900101");
    let out = e.render(&c, "de").unwrap();
    assert_eq!(out.text, "");
    assert_eq!(out.omissions.len(), 2);
    assert!(!out.complete);
}

#[test]
fn ordinals_out_of_table() {
    let e = engine();
    let err = e.evaluate("ordinal", vec![Datum::Int(21), Datum::text("en")]).unwrap_err();
    assert_eq!(err.code(), "OUT_OF_TABLE");
    let c = edit_value(&san_francisco(&e), &"content[1].rank".parse().unwrap(), Value::int(21)).unwrap();
    let out = e.render(&c, "en").unwrap();
    assert_eq!(out.omissions.len(), 1);
    assert_eq!(out.omissions[0].path.to_string(), "content[1]");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn valid_articles_never_fail_hard(c in support::article(), lang in prop_oneof![Just("en"), Just("de")]) {
        let e = engine();
        let out = e.render(&c, lang).unwrap();
        prop_assert_eq!(out.complete, out.omissions.is_empty());
    }
}
