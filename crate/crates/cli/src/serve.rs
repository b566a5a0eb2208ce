//! HTTP front end for the walker UI. One story, one shared state; every
//! mutation takes the same lock, so the history seen by clients is a total
//! order.

use std::net::SocketAddr;
use std::path::{Component, Path, PathBuf};
use std::sync::{Arc, Mutex};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, State};
use axum::http::{header, StatusCode, Uri};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use saga::export::{graph_document, GraphDocument};
use saga::runtime::{SavedTransition, StoryState};
use saga::{Notification, Story};
use serde::{Deserialize, Serialize};

use crate::{load_story, CliError, CliResult};

pub struct AppState {
    story: Story,
    state: Mutex<StoryState>,
    ui: Option<PathBuf>,
}

type Shared = Arc<AppState>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateView {
    pub current: String,
    pub section: String,
    pub happened: Vec<String>,
    pub history: Vec<SavedTransition>,
    pub enabled: Vec<EnabledView>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnabledView {
    pub dst: String,
    pub missing: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct EventResponse {
    pub notifications: Vec<Notification>,
    pub state: StateView,
}

#[derive(Debug, Deserialize)]
pub struct EventRequest {
    pub event: String,
}

#[derive(Debug, Serialize)]
struct ApiError {
    error: String,
    code: &'static str,
}

fn api_error(status: StatusCode, code: &'static str, error: impl Into<String>) -> Response {
    (status, Json(ApiError { error: error.into(), code })).into_response()
}

pub fn state_view(story: &Story, state: &StoryState) -> StateView {
    let graph = &story.graph;
    StateView {
        current: graph.node_label(state.current).to_string(),
        section: graph.section(state.current_section(graph)).name.clone(),
        happened: state.happened_labels(graph),
        history: state.save(graph).history,
        enabled: state
            .enabled_transitions(graph)
            .into_iter()
            .map(|c| EnabledView {
                dst: graph.node_label(c.dst).to_string(),
                missing: c.missing.iter().map(|e| graph.event_label(*e).to_string()).collect(),
            })
            .collect(),
    }
}

/// The application router. `ui` is a directory with `index.html`; without
/// one a placeholder page is served.
pub fn router(story: Story, ui: Option<PathBuf>) -> Router {
    let state = Mutex::new(story.new_state());
    let shared = Arc::new(AppState { story, state, ui });
    let api = Router::new()
        .route("/story", get(get_story))
        .route("/state", get(get_state))
        .route("/events", post(post_event))
        .route("/reset", post(post_reset))
        .method_not_allowed_fallback(|| async {
            api_error(StatusCode::METHOD_NOT_ALLOWED, "method_not_allowed", "method not allowed")
        })
        .fallback(|uri: Uri| async move { api_error(StatusCode::NOT_FOUND, "not_found", format!("no route {uri}")) });
    Router::new()
        .nest("/api", api)
        .route("/", get(index))
        .route("/{*file}", get(static_file))
        .with_state(shared)
}

async fn get_story(State(app): State<Shared>) -> Json<GraphDocument> {
    Json(graph_document(&app.story.graph))
}

async fn get_state(State(app): State<Shared>) -> Json<StateView> {
    let state = app.state.lock().expect("state lock");
    Json(state_view(&app.story, &state))
}

async fn post_event(State(app): State<Shared>, body: Result<Json<EventRequest>, JsonRejection>) -> Response {
    let Json(req) = match body {
        Ok(b) => b,
        Err(e) => return api_error(StatusCode::BAD_REQUEST, "malformed_body", e.body_text()),
    };
    let event = req.event.split_whitespace().collect::<Vec<_>>().join(" ");
    if event.is_empty() {
        return api_error(StatusCode::BAD_REQUEST, "empty_event", "event label is empty");
    }
    let mut state = app.state.lock().expect("state lock");
    let notifications = state.signal(&app.story.graph, &event);
    Json(EventResponse { notifications, state: state_view(&app.story, &state) }).into_response()
}

async fn post_reset(State(app): State<Shared>) -> Json<StateView> {
    let mut state = app.state.lock().expect("state lock");
    *state = app.story.new_state();
    Json(state_view(&app.story, &state))
}

const PLACEHOLDER: &str = "<!doctype html>
<html><head><meta charset=\"utf-8\"><title>saga walker</title></head>
<body>
<p>The walker UI is not installed. Start the server with <code>--ui DIR</code>
pointing at a built bundle, or use the JSON API under <code>/api</code>.</p>
</body></html>
";

async fn index(State(app): State<Shared>) -> Response {
    match &app.ui {
        Some(dir) => serve_file(&dir.join("index.html")).await,
        None => Html(PLACEHOLDER).into_response(),
    }
}

async fn static_file(State(app): State<Shared>, UrlPath(file): UrlPath<String>) -> Response {
    let not_found = || api_error(StatusCode::NOT_FOUND, "not_found", format!("no file /{file}"));
    let Some(dir) = &app.ui else { return not_found() };
    // Only plain relative paths; no `..` or roots.
    if !Path::new(&file).components().all(|c| matches!(c, Component::Normal(_))) {
        return not_found();
    }
    serve_file(&dir.join(&file)).await
}

async fn serve_file(path: &Path) -> Response {
    let mime = match path.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js") | Some("mjs") => "text/javascript",
        Some("css") => "text/css",
        Some("json") => "application/json",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        _ => "application/octet-stream",
    };
    match tokio::fs::read(path).await {
        Ok(bytes) => ([(header::CONTENT_TYPE, mime)], bytes).into_response(),
        Err(_) => api_error(StatusCode::NOT_FOUND, "not_found", format!("no file {}", path.display())),
    }
}

pub fn cmd_serve(path: &Path, port: u16, ui: Option<PathBuf>) -> CliResult<()> {
    let story = load_story(path)?;
    let name = story.graph.name.clone();
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let io = |source| CliError::Io { path: PathBuf::from(addr.to_string()), source };
    let runtime = tokio::runtime::Runtime::new().map_err(io)?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr).await.map_err(io)?;
        println!("serving \"{name}\" on http://{addr}");
        axum::serve(listener, router(story, ui)).await.map_err(io)
    })
}
