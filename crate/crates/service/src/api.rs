//! HTTP API over a shared engine. Reads take the engine's read lock; edits
//! are serialized behind the write lock.

use std::sync::Arc;

use abstext::content::{parse_content, serialize_content_with, ConstructorSpec, Content, Diagnostic, ItemId};
use abstext::entity::{Item, RemoteEntityClient};
use abstext::lexicon::Lexeme;
use abstext::registry::{Datum, EvalError, FunctionDocument};
use abstext::render::{RenderError, RenderOutcome};
use abstext::suggest::Suggestion;
use abstext::{Engine, EngineError};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as JsonValue};

#[derive(Clone)]
pub struct AppState {
    pub engine: Arc<RwLock<Engine>>,
    /// Set when unknown items should be fetched on store.
    pub remote: Option<RemoteEntityClient>,
}

impl AppState {
    pub fn new(engine: Engine) -> Self {
        AppState {
            engine: Arc::new(RwLock::new(engine)),
            remote: None,
        }
    }
}

/// Body of every 4xx/5xx response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: u16,
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status: status.as_u16(),
            code: code.to_string(),
            message: message.into(),
            path: None,
            diagnostics: Vec::new(),
        }
    }

    fn not_found(what: &str, id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "NOT_FOUND", format!("no {what} `{id}`"))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

impl From<RenderError> for ApiError {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::UnsupportedLanguage(_) => ApiError::new(StatusCode::BAD_REQUEST, e.code(), e.to_string()),
            RenderError::ValidationFailed(diagnostics) => {
                let mut err = ApiError::new(
                    StatusCode::UNPROCESSABLE_ENTITY,
                    "VALIDATION_FAILED",
                    format!("{} problem(s)", diagnostics.len()),
                );
                err.path = diagnostics.first().map(|d| d.path.to_string());
                err.message = diagnostics.first().map_or(err.message, |d| d.message.clone());
                err.diagnostics = diagnostics;
                err
            }
            RenderError::Eval(e) => e.into(),
        }
    }
}

impl From<EvalError> for ApiError {
    fn from(e: EvalError) -> Self {
        let status = match e {
            EvalError::UnknownFunction(_) => StatusCode::NOT_FOUND,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError::new(status, e.code(), e.message())
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        let status = match e.code() {
            "BREAKS_CONTENT" | "DUPLICATE_ID" => StatusCode::CONFLICT,
            "NOT_FOUND" => StatusCode::NOT_FOUND,
            "IO_ERROR" | "NETWORK_ERROR" => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.code(), e.to_string())
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/render", get(render))
        .route("/languages", get(languages))
        .route("/content", post(store_content).get(list_content))
        .route("/content/{id}", get(get_content))
        .route("/constructors", get(list_constructors))
        .route("/constructors/{id}", get(get_constructor).put(put_constructor))
        .route("/functions/{id}", get(get_function).put(put_function))
        .route("/lexemes/{id}", get(get_lexeme).put(put_lexeme))
        .route("/items/{id}", get(get_item).put(put_item))
        .route("/evaluate", post(evaluate))
        .route("/suggest", post(suggest))
        .with_state(state)
}

#[derive(Debug, Deserialize)]
pub struct RenderQuery {
    pub content_id: String,
    pub lang: String,
}

async fn render(State(s): State<AppState>, Query(q): Query<RenderQuery>) -> ApiResult<RenderOutcome> {
    let engine = s.engine.read();
    let content = engine.content(&q.content_id).ok_or_else(|| ApiError::not_found("content", &q.content_id))?;
    let out = engine.render(content, &q.lang)?;
    tracing::info!(content = %q.content_id, lang = %q.lang, complete = out.complete, "render");
    Ok(Json(out))
}

async fn languages(State(s): State<AppState>) -> Json<Vec<String>> {
    Json(s.engine.read().languages().into_iter().map(String::from).collect())
}

#[derive(Debug, Deserialize)]
pub struct StoreQuery {
    pub id: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Stored {
    pub id: String,
    pub diagnostics: Vec<Diagnostic>,
}

fn syntax_error(e: abstext::content::SyntaxError) -> ApiError {
    let mut err = ApiError::new(StatusCode::BAD_REQUEST, "SYNTAX_ERROR", e.to_string());
    err.path = Some(format!("{}:{}", e.line, e.column));
    err
}

async fn store_content(State(s): State<AppState>, Query(q): Query<StoreQuery>, body: String) -> Result<(StatusCode, Json<Stored>), ApiError> {
    let content = parse_content(&body).map_err(syntax_error)?;
    if let Some(client) = s.remote.clone() {
        fetch_unknown_items(&s, &client, &content).await?;
    }
    let (id, diagnostics) = s.engine.write().store_content(q.id.as_deref(), content)?;
    tracing::info!(%id, problems = diagnostics.len(), "stored content");
    Ok((StatusCode::CREATED, Json(Stored { id, diagnostics })))
}

async fn fetch_unknown_items(s: &AppState, client: &RemoteEntityClient, content: &Content) -> Result<(), ApiError> {
    let missing: Vec<ItemId> = s.engine.read().world().items.unresolved(content);
    for id in missing {
        let client = client.clone();
        let item = tokio::task::spawn_blocking(move || client.fetch_remote(&id))
            .await
            .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "INTERNAL", e.to_string()))?
            .map_err(EngineError::from)?;
        s.engine.write().put_item(item)?;
    }
    Ok(())
}

async fn list_content(State(s): State<AppState>) -> Json<Vec<String>> {
    Json(s.engine.read().content_ids().map(String::from).collect())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StoredContent {
    pub id: String,
    pub notation: String,
    pub diagnostics: Vec<Diagnostic>,
}

async fn get_content(State(s): State<AppState>, Path(id): Path<String>) -> ApiResult<StoredContent> {
    let engine = s.engine.read();
    let content = engine.content(&id).ok_or_else(|| ApiError::not_found("content", &id))?;
    Ok(Json(StoredContent {
        notation: serialize_content_with(content, &engine.world().catalog),
        diagnostics: engine.validate(content),
        id,
    }))
}

fn check_id(path: &str, body: &str) -> Result<(), ApiError> {
    if path == body {
        Ok(())
    } else {
        Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "ID_MISMATCH",
            format!("body id `{body}` does not match `{path}`"),
        ))
    }
}

async fn list_constructors(State(s): State<AppState>) -> Json<Vec<ConstructorSpec>> {
    Json(s.engine.read().world().catalog.iter().cloned().collect())
}

async fn get_constructor(State(s): State<AppState>, Path(id): Path<String>) -> ApiResult<ConstructorSpec> {
    let engine = s.engine.read();
    engine.world().catalog.get(&id).cloned().map(Json).ok_or_else(|| ApiError::not_found("constructor", &id))
}

async fn put_constructor(State(s): State<AppState>, Path(id): Path<String>, Json(spec): Json<ConstructorSpec>) -> ApiResult<ConstructorSpec> {
    check_id(&id, &spec.id)?;
    s.engine.write().put_constructor(spec.clone())?;
    Ok(Json(spec))
}

async fn get_function(State(s): State<AppState>, Path(id): Path<String>) -> ApiResult<FunctionDocument> {
    s.engine.read().registry().document(&id).map(Json).ok_or_else(|| ApiError::not_found("function", &id))
}

async fn put_function(State(s): State<AppState>, Path(id): Path<String>, Json(doc): Json<FunctionDocument>) -> ApiResult<FunctionDocument> {
    check_id(&id, &doc.def.id)?;
    s.engine.write().put_function(doc.clone())?;
    Ok(Json(doc))
}

async fn get_lexeme(State(s): State<AppState>, Path(id): Path<String>) -> ApiResult<Lexeme> {
    s.engine.read().world().lexicon.get(&id).cloned().map(Json).ok_or_else(|| ApiError::not_found("lexeme", &id))
}

async fn put_lexeme(State(s): State<AppState>, Path(id): Path<String>, Json(lexeme): Json<Lexeme>) -> ApiResult<Lexeme> {
    check_id(&id, &lexeme.id)?;
    s.engine.write().put_lexeme(lexeme.clone())?;
    Ok(Json(lexeme))
}

fn item_id(id: &str) -> Result<ItemId, ApiError> {
    ItemId::new(id).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "INVALID_ITEM_ID", e.to_string()))
}

async fn get_item(State(s): State<AppState>, Path(id): Path<String>) -> ApiResult<Item> {
    let qid = item_id(&id)?;
    s.engine.read().world().items.get(&qid).cloned().map(Json).ok_or_else(|| ApiError::not_found("item", &id))
}

async fn put_item(State(s): State<AppState>, Path(id): Path<String>, Json(item): Json<Item>) -> ApiResult<Item> {
    check_id(&id, item.id.as_str())?;
    s.engine.write().put_item(item.clone())?;
    Ok(Json(item))
}

#[derive(Debug, Deserialize)]
pub struct EvaluateRequest {
    #[serde(rename = "fn")]
    pub function: String,
    #[serde(default)]
    pub args: Vec<JsonValue>,
}

async fn evaluate(State(s): State<AppState>, Json(req): Json<EvaluateRequest>) -> ApiResult<JsonValue> {
    let args = req
        .args
        .iter()
        .map(Datum::from_json)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "TYPE_ERROR", e))?;
    let value = s.engine.read().evaluate(&req.function, args)?;
    Ok(Json(json!({ "value": value.to_json() })))
}

#[derive(Debug, Deserialize)]
pub struct SuggestRequest {
    pub text: String,
    pub lang: String,
}

async fn suggest(State(s): State<AppState>, Json(req): Json<SuggestRequest>) -> Json<Vec<Suggestion>> {
    Json(s.engine.read().suggest(&req.text, &req.lang))
}
