use std::sync::atomic::{AtomicI64, Ordering};
use std::sync::Arc;

use super::*;

fn registry() -> Registry<()> {
    let mut r = Registry::new(RegistryConfig::default());
    stdlib::install(&mut r).unwrap();
    r
}

fn ints(xs: &[i64]) -> Vec<Datum> {
    xs.iter().map(|&n| Datum::Int(n)).collect()
}

#[test]
fn ids_are_never_reassigned() {
    let mut r = registry();
    let def = FunctionDef::new("multiply", "positive_integer").param("x", "positive_integer");
    assert_eq!(r.register(def).unwrap_err().code(), "DUPLICATE_ID");
    let err = r
        .add_implementation("multiply", Implementation::composition("m2", "froz(x, y)"))
        .unwrap_err();
    assert_eq!(err, RegistryError::UnknownFunction("froz".into()));
    assert_eq!(
        r.add_implementation("nope", Implementation::builtin("n", "add")).unwrap_err().code(),
        "UNKNOWN_FUNCTION"
    );
    let err = r
        .add_implementation("multiply", Implementation::composition("m3", "add(x, z)"))
        .unwrap_err();
    assert_eq!(err.code(), "INVALID_DEFINITION");
    assert_eq!(
        r.add_implementation("add", Implementation::builtin("multiply_recursive", "add")).unwrap_err().code(),
        "DUPLICATE_ID"
    );
}

#[test]
fn keyed_arguments_follow_parameter_order() {
    let mut r = registry();
    r.register(
        FunctionDef::new("minus", "positive_integer")
            .param("x", "positive_integer")
            .param("y", "positive_integer"),
    )
    .unwrap();
    r.add_implementation("minus", Implementation::composition("minus_keyed", "subtract(y: y, x: x)"))
        .unwrap();
    assert_eq!(r.evaluate(&(), "minus", ints(&[5, 2]), &EvalOptions::default()), Ok(Datum::Int(3)));
}

#[test]
fn pure_calls_hit_the_cache() {
    let r = registry();
    let opts = EvalOptions::default();
    let a = r.evaluate(&(), "add", ints(&[2, 3]), &opts).unwrap();
    let before = r.function_cache_stats("add");
    let b = r.evaluate(&(), "add", ints(&[2, 3]), &opts).unwrap();
    let after = r.function_cache_stats("add");
    assert_eq!(a, b);
    assert_eq!(after.hits, before.hits + 1);
    r.clear_cache();
    assert_eq!(r.cache_stats(), CacheStats::default());
    r.evaluate(&(), "add", ints(&[2, 3]), &opts).unwrap();
    assert_eq!(r.function_cache_stats("add").misses, 1);
    r.evaluate(&(), "add", ints(&[2, 3]), &opts).unwrap();
    assert_eq!(r.function_cache_stats("add").hits, 1);
}

#[test]
fn impure_calls_bypass_the_cache() {
    let mut r = registry();
    let counter = Arc::new(AtomicI64::new(0));
    let c = counter.clone();
    r.register_builtin(FunctionDef::new("tick", "integer").impure(), move |_, _| {
        Ok(Datum::Int(c.fetch_add(1, Ordering::SeqCst)))
    })
    .unwrap();
    let opts = EvalOptions::default();
    let a = r.evaluate(&(), "tick", vec![], &opts).unwrap();
    let b = r.evaluate(&(), "tick", vec![], &opts).unwrap();
    assert_ne!(a, b);
    assert_eq!(r.function_cache_stats("tick").hits, 0);
}

#[test]
fn preconditions() {
    let mut r = registry();
    r.register(
        FunctionDef::new("halve", "positive_integer")
            .param("x", "positive_integer")
            .precondition("not(is_zero(x))"),
    )
    .unwrap();
    r.add_implementation("halve", Implementation::composition("halve_c", "subtract(x, 1)"))
        .unwrap();
    let err = r.evaluate(&(), "halve", ints(&[0]), &EvalOptions::default()).unwrap_err();
    assert_eq!(err.code(), "PRECONDITION_FAILED");
}

#[test]
fn postconditions_run_under_test_only_by_default() {
    let mut r = registry();
    r.register(
        FunctionDef::new("lie", "integer")
            .param("x", "integer")
            .postcondition("equals(result, x)")
            .test(&["1"], "2"),
    )
    .unwrap();
    r.add_implementation("lie", Implementation::composition("lie_c", "add(x, 1)")).unwrap();
    assert_eq!(r.evaluate(&(), "lie", ints(&[1]), &EvalOptions::default()), Ok(Datum::Int(2)));
    let report = r.run_tests(&(), "lie").unwrap();
    assert_eq!(report.implementations[0].results[0].error.as_ref().unwrap().code(), "POSTCONDITION_FAILED");
}

#[test]
fn no_implementation() {
    let mut r = registry();
    r.register(FunctionDef::new("todo", "integer")).unwrap();
    let err = r.evaluate(&(), "todo", vec![], &EvalOptions::default()).unwrap_err();
    assert_eq!(err.code(), "NO_IMPLEMENTATION");
    let report = r.run_tests(&(), "todo").unwrap();
    assert!(report.implementations.is_empty());
    assert!(report.agreement.is_empty());
    assert_eq!(r.run_tests(&(), "froz").unwrap_err().code(), "UNKNOWN_FUNCTION");
    assert_eq!(r.select_implementation(&(), "todo").unwrap_err().code(), "NO_PASSING_IMPLEMENTATION");
}

#[test]
fn wrong_implementation_fails_and_disagrees() {
    let mut r = registry();
    r.add_implementation("multiply", Implementation::composition("multiply_wrong", "add(x, y)"))
        .unwrap();
    let report = r.run_tests(&(), "multiply").unwrap();
    let wrong = report.implementation("multiply_wrong").unwrap();
    assert!(!wrong.results[0].passed);
    assert_eq!(wrong.results[0].output, Some(Datum::Int(5)));
    assert!(report.implementation("multiply_builtin").unwrap().all_passed);
    assert!(report.implementation("multiply_recursive").unwrap().all_passed);
    let m = &report.agreement;
    for (i, row) in m.iter().enumerate() {
        assert_eq!(row[i], 1.0);
        for (j, x) in row.iter().enumerate() {
            assert_eq!(*x, m[j][i]);
        }
    }
    assert_eq!(m[0][1], 1.0);
    assert!(m[0][2] < 1.0);
}

#[test]
fn selection_prefers_the_fast_builtin() {
    let r = registry();
    assert_eq!(r.select_implementation(&(), "multiply").unwrap(), "multiply_builtin");
    assert_eq!(r.preferred_implementation("multiply").as_deref(), Some("multiply_builtin"));
    assert_eq!(r.select_implementation(&(), "add").unwrap(), "add_builtin");
}

#[test]
fn documents_replace_functions_atomically() {
    let mut r = registry();
    let mut doc = r.document("multiply").unwrap();
    doc.implementations.push(Implementation::composition("multiply_bad", "froz(x)"));
    assert!(r.upsert_document(doc).is_err());
    assert_eq!(r.implementations("multiply").len(), 2);
    let mut doc = r.document("multiply").unwrap();
    doc.implementations.retain(|i| i.id == "multiply_recursive");
    r.upsert_document(doc).unwrap();
    assert_eq!(r.implementations("multiply").len(), 1);
    assert_eq!(r.evaluate(&(), "multiply", ints(&[3, 3]), &EvalOptions::default()), Ok(Datum::Int(9)));
    // The dropped builtin's id is free again.
    r.add_implementation("multiply", Implementation::builtin("multiply_builtin", "multiply")).unwrap();
}
