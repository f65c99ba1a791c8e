//! HTTP/JSON binding of [`LexiconService`].

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::JsonRejection;
use axum::extract::{DefaultBodyLimit, Path as UrlPath, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use glex_core::{AnaphoraError, EntryKey, LexicalEntry, PersistError};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use crate::service::{entry_hash, AnaphoraRequest, LexiconService, ServiceError};

const BODY_LIMIT: usize = 64 * 1024 * 1024;

type Shared = State<Arc<LexiconService>>;

pub fn router(service: Arc<LexiconService>, ui_dir: Option<&Path>) -> Router {
    let mut app = Router::new()
        .route("/session", post(create_session))
        .route("/entries", get(search))
        .route(
            "/entries/{lemma}/{sense}",
            get(fetch).put(upsert).delete(remove),
        )
        .route("/entries/{lemma}/{sense}/features/{path}", get(feature))
        .route(
            "/entries/{lemma}/{sense}/features/",
            get(feature_empty_path),
        )
        .route("/lexicon/export", get(export))
        .route("/lexicon/import", post(import))
        .route("/anaphora/validate", post(validate_anaphora))
        .route("/types", get(types))
        .layer(DefaultBodyLimit::max(BODY_LIMIT));
    if let Some(dir) = ui_dir {
        app = app.nest_service("/ui", ServeDir::new(dir));
    }
    app.with_state(service)
}

/// Error response: `{error, detail}` plus structured extras where available.
#[derive(Debug)]
pub struct ApiError(pub ServiceError);

impl<E: Into<ServiceError>> From<E> for ApiError {
    fn from(e: E) -> Self {
        ApiError(e.into())
    }
}

pub fn status_of(e: &ServiceError) -> StatusCode {
    match e {
        ServiceError::AuthFailed | ServiceError::Unauthorized(_) => StatusCode::UNAUTHORIZED,
        ServiceError::Forbidden(_) => StatusCode::FORBIDDEN,
        ServiceError::NotFound(_) | ServiceError::Anaphora(AnaphoraError::UnknownWord { .. }) => {
            StatusCode::NOT_FOUND
        }
        ServiceError::ValidationFailed(_)
        | ServiceError::Anaphora(AnaphoraError::NoRelation { .. }) => {
            StatusCode::UNPROCESSABLE_ENTITY
        }
        ServiceError::Conflict(_) => StatusCode::CONFLICT,
        ServiceError::Io(_) | ServiceError::Anaphora(AnaphoraError::Hierarchy(_)) => {
            StatusCode::INTERNAL_SERVER_ERROR
        }
        ServiceError::BadFilter(_)
        | ServiceError::BadPath(_)
        | ServiceError::BadFormat(_)
        | ServiceError::BadRequest(_)
        | ServiceError::Persist(_)
        | ServiceError::Anaphora(AnaphoraError::BadTemplate(_)) => StatusCode::BAD_REQUEST,
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let e = self.0;
        let status = status_of(&e);
        let mut body = json!({ "error": e.name(), "detail": e.to_string() });
        match &e {
            ServiceError::ValidationFailed(report) => body["report"] = json!(report),
            ServiceError::Persist(PersistError::Parse { line, message }) => {
                body["line"] = json!(line);
                body["message"] = json!(message);
            }
            ServiceError::Persist(PersistError::DuplicateKey(key)) => body["key"] = json!(key),
            ServiceError::Anaphora(AnaphoraError::UnknownWord { surface, tried }) => {
                body["surface"] = json!(surface);
                body["tried"] = json!(tried);
            }
            ServiceError::Anaphora(AnaphoraError::NoRelation {
                head,
                modifier,
                reasons,
            }) => {
                body["head"] = json!(head);
                body["modifier"] = json!(modifier);
                body["reasons"] = json!(reasons);
            }
            ServiceError::Anaphora(AnaphoraError::BadTemplate(n)) => {
                body["placeholders"] = json!(n)
            }
            _ => {}
        }
        if status.is_server_error() {
            tracing::error!("{e}");
        }
        let mut response = (status, Json(body)).into_response();
        if status == StatusCode::UNAUTHORIZED {
            response
                .headers_mut()
                .insert(header::WWW_AUTHENTICATE, HeaderValue::from_static("Bearer"));
        }
        response
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn bearer(headers: &HeaderMap) -> Result<Option<String>, ServiceError> {
    let Some(value) = headers.get(header::AUTHORIZATION) else {
        return Ok(None);
    };
    value
        .to_str()
        .ok()
        .and_then(|v| v.strip_prefix("Bearer "))
        .map(|t| Some(t.trim().to_string()))
        .ok_or(ServiceError::Unauthorized("malformed authorization header"))
}

/// `If-Match` value without quotes or weak prefix; `*` means no check.
fn if_match(headers: &HeaderMap) -> Result<Option<String>, ServiceError> {
    let Some(value) = headers.get(header::IF_MATCH) else {
        return Ok(None);
    };
    let v = value
        .to_str()
        .map_err(|_| ServiceError::BadRequest("If-Match is not ASCII".into()))?
        .trim();
    if v == "*" {
        return Ok(None);
    }
    let v = v.strip_prefix("W/").unwrap_or(v);
    Ok(Some(v.trim_matches('"').to_string()))
}

fn etag(e: &LexicalEntry) -> HeaderValue {
    HeaderValue::from_str(&format!("\"{}\"", entry_hash(e))).expect("hex is a valid header")
}

fn key(lemma: String, sense: &str) -> Result<EntryKey, ServiceError> {
    let sense = sense
        .parse()
        .map_err(|_| ServiceError::BadRequest(format!("sense `{sense}` is not a number")))?;
    Ok(EntryKey::new(lemma, sense))
}

fn json_body<T>(body: Result<Json<T>, JsonRejection>) -> Result<T, ServiceError> {
    body.map(|Json(t)| t)
        .map_err(|r| ServiceError::BadRequest(r.body_text()))
}

#[derive(Debug, Deserialize)]
struct Credentials {
    username: String,
    password: String,
}

async fn create_session(
    State(s): Shared,
    body: Result<Json<Credentials>, JsonRejection>,
) -> ApiResult<impl IntoResponse> {
    let c = json_body(body)?;
    Ok(Json(s.bind(&c.username, &c.password)?))
}

async fn search(
    State(s): Shared,
    headers: HeaderMap,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<impl IntoResponse> {
    let token = bearer(&headers)?;
    let filter = q.get("filter").map(String::as_str).unwrap_or("");
    Ok(Json(s.search(token.as_deref(), filter)?))
}

async fn fetch(
    State(s): Shared,
    headers: HeaderMap,
    UrlPath((lemma, sense)): UrlPath<(String, String)>,
) -> ApiResult<impl IntoResponse> {
    let token = bearer(&headers)?;
    let entry = s.fetch(token.as_deref(), &key(lemma, &sense)?)?;
    Ok(([(header::ETAG, etag(&entry))], Json(entry)))
}

async fn upsert(
    State(s): Shared,
    headers: HeaderMap,
    UrlPath((lemma, sense)): UrlPath<(String, String)>,
    body: Result<Json<LexicalEntry>, JsonRejection>,
) -> ApiResult<impl IntoResponse> {
    let token = bearer(&headers)?;
    let key = key(lemma, &sense)?;
    let entry = json_body(body)?;
    let tag = etag(&entry);
    let stored = s.upsert(
        token.as_deref(),
        &key,
        entry,
        if_match(&headers)?.as_deref(),
    )?;
    Ok(([(header::ETAG, tag)], Json(stored)))
}

async fn remove(
    State(s): Shared,
    headers: HeaderMap,
    UrlPath((lemma, sense)): UrlPath<(String, String)>,
) -> ApiResult<StatusCode> {
    let token = bearer(&headers)?;
    s.remove(
        token.as_deref(),
        &key(lemma, &sense)?,
        if_match(&headers)?.as_deref(),
    )?;
    Ok(StatusCode::NO_CONTENT)
}

async fn feature(
    State(s): Shared,
    headers: HeaderMap,
    UrlPath((lemma, sense, path)): UrlPath<(String, String, String)>,
) -> ApiResult<impl IntoResponse> {
    let token = bearer(&headers)?;
    Ok(Json(s.feature(
        token.as_deref(),
        &key(lemma, &sense)?,
        &path,
    )?))
}

async fn feature_empty_path(
    State(s): Shared,
    headers: HeaderMap,
    UrlPath((lemma, sense)): UrlPath<(String, String)>,
) -> ApiResult<impl IntoResponse> {
    let token = bearer(&headers)?;
    Ok(Json(s.feature(
        token.as_deref(),
        &key(lemma, &sense)?,
        "",
    )?))
}

async fn export(
    State(s): Shared,
    headers: HeaderMap,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<impl IntoResponse> {
    let token = bearer(&headers)?;
    let format = q.get("format").map(String::as_str).unwrap_or("");
    let doc = s.export(token.as_deref(), format)?;
    let content_type = if format == "xml" {
        "application/xml; charset=utf-8"
    } else {
        "text/plain; charset=utf-8"
    };
    Ok(([(header::CONTENT_TYPE, content_type)], doc))
}

async fn import(
    State(s): Shared,
    headers: HeaderMap,
    Query(q): Query<HashMap<String, String>>,
    body: Bytes,
) -> ApiResult<impl IntoResponse> {
    let token = bearer(&headers)?;
    let format = q.get("format").map(String::as_str).unwrap_or("");
    let doc = std::str::from_utf8(&body)
        .map_err(|e| ServiceError::BadRequest(format!("document is not UTF-8: {e}")))?;
    Ok(Json(s.import(token.as_deref(), format, doc)?))
}

async fn validate_anaphora(
    State(s): Shared,
    headers: HeaderMap,
    body: Result<Json<AnaphoraRequest>, JsonRejection>,
) -> ApiResult<impl IntoResponse> {
    let token = bearer(&headers)?;
    let req = json_body(body)?;
    Ok(Json(s.validate_anaphora(token.as_deref(), &req)?))
}

async fn types(State(s): Shared, headers: HeaderMap) -> ApiResult<impl IntoResponse> {
    let token = bearer(&headers)?;
    Ok(Json(s.types(token.as_deref())?))
}

/// Body of a 4xx/5xx response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub detail: String,
    #[serde(flatten)]
    pub extra: HashMap<String, Value>,
}
