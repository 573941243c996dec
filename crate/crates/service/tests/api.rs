mod common;

use axum::http::{Method, StatusCode};
use common::{app, send, DE, EN};
use serde_json::{json, Value};

#[tokio::test]
async fn render_stored_content() {
    let app = app();
    let (status, body) = send(&app, Method::GET, "/render?content_id=Q62&lang=de", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["text"], DE);
    assert_eq!(body["complete"], true);
    let (_, body) = send(&app, Method::GET, "/render?content_id=Q62&lang=en", None).await;
    assert_eq!(body["text"], EN);
}

#[tokio::test]
async fn render_errors_are_structured() {
    let app = app();
    let (status, body) = send(&app, Method::GET, "/render?content_id=Q1&lang=en", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "NOT_FOUND");
    let (status, body) = send(&app, Method::GET, "/render?content_id=Q62&lang=fr", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "UNSUPPORTED_LANGUAGE");

    let bad = "Article(content: [Ranking(subject: Q62, rank: \"four\", object: Q515, by: Q1613416)])";
    let (status, body) = send(&app, Method::POST, "/content?id=bad", Some(bad.into())).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["diagnostics"][0]["code"], "TYPE_MISMATCH");
    let (status, body) = send(&app, Method::GET, "/render?content_id=bad&lang=en", None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "VALIDATION_FAILED");
    assert_eq!(body["path"], "content[0].rank");
}

#[tokio::test]
async fn post_content_then_render() {
    let app = app();
    let text = std::fs::read_to_string(common::fixtures().join("sf.abstract")).unwrap();
    let edited = text.replace("rank: 4", "rank: 3").replace(",\n              San Jose (Q16553)", "");
    let (status, body) = send(&app, Method::POST, "/content?id=sf3", Some(edited)).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    assert_eq!(body["diagnostics"], json!([]));
    let (_, body) = send(&app, Method::GET, "/render?content_id=sf3&lang=en", None).await;
    assert!(body["text"].as_str().unwrap().contains("third-most populous city in California, after Los Angeles and San Diego."));

    let (status, body) = send(&app, Method::POST, "/content", Some("Article(".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "SYNTAX_ERROR");
    let (status, body) = send(&app, Method::POST, "/content", Some("Article(content: [])".into())).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["id"], "scratch-1");
}

#[tokio::test]
async fn additive_constructor_change_keeps_content_valid() {
    let app = app();
    let (status, mut spec) = send(&app, Method::GET, "/constructors/Ranking", None).await;
    assert_eq!(status, StatusCode::OK);
    spec["keys"].as_array_mut().unwrap().push(json!({
        "id": "year", "labels": {"en": "year"}, "required": false, "accepted": ["integer"]
    }));
    let (status, _) = send(&app, Method::PUT, "/constructors/Ranking", Some(spec.to_string())).await;
    assert_eq!(status, StatusCode::OK);
    let (_, body) = send(&app, Method::GET, "/content/Q62", None).await;
    assert_eq!(body["diagnostics"], json!([]));
    let (status, _) = send(&app, Method::GET, "/render?content_id=Q62&lang=en", None).await;
    assert_eq!(status, StatusCode::OK);

    // A new required key is not additive: stored content lacks it.
    spec["keys"].as_array_mut().unwrap().last_mut().unwrap()["required"] = json!(true);
    let (status, body) = send(&app, Method::PUT, "/constructors/Ranking", Some(spec.to_string())).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "BREAKS_CONTENT");
    let (status, body) = send(&app, Method::PUT, "/constructors/Other", Some(spec.to_string())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "ID_MISMATCH");
}

#[tokio::test]
async fn lexeme_and_item_edits_show_up_in_renders() {
    let app = app();
    let (status, mut lexeme) = send(&app, Method::GET, "/lexemes/L900002", None).await;
    assert_eq!(status, StatusCode::OK);
    lexeme["forms"]["number=sg"] = json!("town");
    let (status, _) = send(&app, Method::PUT, "/lexemes/L900002", Some(lexeme.to_string())).await;
    assert_eq!(status, StatusCode::OK);
    let (_, body) = send(&app, Method::GET, "/render?content_id=Q62&lang=en", None).await;
    assert!(body["text"].as_str().unwrap().contains("populous town in"));

    let (_, mut item) = send(&app, Method::GET, "/items/Q16553", None).await;
    item["labels"]["en"] = json!("San José");
    let (status, _) = send(&app, Method::PUT, "/items/Q16553", Some(item.to_string())).await;
    assert_eq!(status, StatusCode::OK);
    let (_, body) = send(&app, Method::GET, "/render?content_id=Q62&lang=en", None).await;
    assert!(body["text"].as_str().unwrap().ends_with("San Diego and San José."));

    let (status, body) = send(&app, Method::GET, "/items/X1", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "INVALID_ITEM_ID");
    let (status, _) = send(&app, Method::GET, "/lexemes/L1", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn functions_round_trip() {
    let app = app();
    let (status, doc) = send(&app, Method::GET, "/functions/multiply", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(doc["implementations"].as_array().unwrap().len(), 2);
    let (status, _) = send(&app, Method::PUT, "/functions/multiply", Some(doc.to_string())).await;
    assert_eq!(status, StatusCode::OK);
    let mut broken = doc.clone();
    broken["implementations"][1]["composition"] = json!("froz(x)");
    let (status, body) = send(&app, Method::PUT, "/functions/multiply", Some(broken.to_string())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "UNKNOWN_FUNCTION");
}

#[tokio::test]
async fn evaluate() {
    let app = app();
    let (status, body) = send(&app, Method::POST, "/evaluate", Some(r#"{"fn": "multiply", "args": [3, 4]}"#.into())).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, json!({"value": 12}));
    let (status, body) = send(&app, Method::POST, "/evaluate", Some(r#"{"fn": "multiply", "args": [-1, 4]}"#.into())).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "TYPE_ERROR");
    let (status, body) = send(&app, Method::POST, "/evaluate", Some(r#"{"fn": "froz", "args": []}"#.into())).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "UNKNOWN_FUNCTION");
    let (_, body) = send(
        &app,
        Method::POST,
        "/evaluate",
        Some(r#"{"fn": "ordinal", "args": [4, "de"]}"#.into()),
    )
    .await;
    assert_eq!(body["value"], "viert");
}

#[tokio::test]
async fn suggest() {
    let app = app();
    let req = json!({"text": "Q62 is the fourth-most populous city in Q99", "lang": "en"});
    let (status, body) = send(&app, Method::POST, "/suggest", Some(req.to_string())).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(
        body[0]["notation"],
        "Article(content: [Ranking(subject: San Francisco (Q62), rank: 4, object: city (Q515), by: population (Q1613416), local_constraint: California (Q99))])"
    );
    assert_eq!(body[0]["diagnostics"], json!([]));
    for text in ["", "nothing to see"] {
        let (_, body) = send(&app, Method::POST, "/suggest", Some(json!({"text": text, "lang": "en"}).to_string())).await;
        assert_eq!(body, Value::Array(vec![]));
    }
    let (_, ids) = send(&app, Method::GET, "/content", None).await;
    assert_eq!(ids, json!(["Q62"]));
}
