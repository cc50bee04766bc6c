//! HTTP service for uploading candidate pools and running selection jobs.
//!
//! | Method | Path | |
//! |---|---|---|
//! | `POST` | `/datasets` | upload a CSV pool |
//! | `GET` | `/datasets/{id}` | column summary of a pool |
//! | `POST` | `/datasets/{id}/selections` | start a selection job |
//! | `GET` | `/selections/{job_id}` | job status and results |
//! | `GET` | `/selections/{job_id}/report` | per-column report as CSV |
//!
//! Payloads are described in `openapi.yaml` next to this crate's manifest.

pub mod job;
pub mod store;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use entrofy::{build_matrix, run_selection, CandidateTable, Error, SelectionRequest};
use serde::Deserialize;
use serde_json::json;

use job::{Job, JobStatus, JobView};
use store::Store;

/// Largest accepted request body.
pub const BODY_LIMIT: usize = 64 * 1024 * 1024;

#[derive(Clone)]
pub struct AppState {
    store: Store,
    jobs: Arc<Mutex<HashMap<String, Job>>>,
    dataset_locks: Arc<Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>>,
}

impl AppState {
    /// Opens the store at `root` and reloads jobs finished by earlier runs.
    pub fn open(root: impl Into<std::path::PathBuf>) -> std::io::Result<Self> {
        let store = Store::open(root)?;
        let jobs = store
            .load_jobs()?
            .into_iter()
            .filter(|j| j.status.is_finished())
            .map(|j| (j.job_id.clone(), j))
            .collect();
        Ok(AppState {
            store,
            jobs: Arc::new(Mutex::new(jobs)),
            dataset_locks: Arc::default(),
        })
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    /// The lock that serializes jobs on one dataset. Jobs wait in
    /// `pending` while another job on the same dataset holds it.
    pub fn dataset_lock(&self, dataset_id: &str) -> Arc<tokio::sync::Mutex<()>> {
        self.dataset_locks
            .lock()
            .unwrap()
            .entry(dataset_id.to_string())
            .or_default()
            .clone()
    }

    pub fn job(&self, job_id: &str) -> Option<Job> {
        self.jobs.lock().unwrap().get(job_id).cloned()
    }

    fn update(&self, job_id: &str, f: impl FnOnce(&mut Job)) -> Job {
        let mut jobs = self.jobs.lock().unwrap();
        let job = jobs.get_mut(job_id).expect("job exists");
        f(job);
        job.clone()
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/datasets", post(upload_dataset))
        .route("/datasets/{id}", get(get_dataset))
        .route("/datasets/{id}/selections", post(create_selection))
        .route("/selections/{job_id}", get(get_selection))
        .route("/selections/{job_id}/report", get(get_report))
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .with_state(state)
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

fn internal(e: std::io::Error) -> Response {
    error(StatusCode::INTERNAL_SERVER_ERROR, format!("storage error: {e}"))
}

#[derive(Debug, Deserialize)]
struct UploadQuery {
    id_column: Option<String>,
}

fn summary_body(id: &str, table: &CandidateTable) -> serde_json::Value {
    json!({
        "dataset_id": id,
        "candidates": table.len(),
        "columns": table.summarize(),
    })
}

async fn upload_dataset(
    State(state): State<AppState>,
    Query(query): Query<UploadQuery>,
    body: Bytes,
) -> Response {
    if body.iter().all(u8::is_ascii_whitespace) {
        return error(StatusCode::BAD_REQUEST, "request body is empty");
    }
    let table = match CandidateTable::from_csv(body.as_ref(), query.id_column.as_deref()) {
        Ok(t) => t,
        Err(e) => return error(StatusCode::BAD_REQUEST, e.to_string()),
    };
    match state.store.put_dataset(&body) {
        Ok(id) => (StatusCode::CREATED, Json(summary_body(&id, &table))).into_response(),
        Err(e) => internal(e),
    }
}

async fn get_dataset(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(query): Query<UploadQuery>,
) -> Response {
    let bytes = match state.store.get_dataset(&id) {
        Ok(Some(b)) => b,
        Ok(None) => return error(StatusCode::NOT_FOUND, format!("unknown dataset `{id}`")),
        Err(e) => return internal(e),
    };
    match CandidateTable::from_csv(bytes.as_slice(), query.id_column.as_deref()) {
        Ok(t) => Json(summary_body(&id, &t)).into_response(),
        Err(e) => error(StatusCode::BAD_REQUEST, e.to_string()),
    }
}

fn unprocessable(e: Error) -> Response {
    let messages: Vec<String> = e.flatten().iter().map(ToString::to_string).collect();
    (
        StatusCode::UNPROCESSABLE_ENTITY,
        Json(json!({ "error": messages.join("; "), "errors": messages })),
    )
        .into_response()
}

async fn create_selection(
    State(state): State<AppState>,
    Path(dataset_id): Path<String>,
    body: Bytes,
) -> Response {
    let bytes = match state.store.get_dataset(&dataset_id) {
        Ok(Some(b)) => b,
        Ok(None) => return error(StatusCode::NOT_FOUND, format!("unknown dataset `{dataset_id}`")),
        Err(e) => return internal(e),
    };
    let request: SelectionRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::UNPROCESSABLE_ENTITY, format!("invalid request: {e}")),
    };
    let checked = CandidateTable::from_csv(bytes.as_slice(), request.id_column.as_deref())
        .and_then(|table| build_matrix(&table, &request.schema))
        .and_then(|matrix| request.params.validate_for(&matrix).map(|_| ()));
    if let Err(e) = checked {
        return unprocessable(e);
    }

    let job = Job {
        job_id: uuid::Uuid::new_v4().simple().to_string(),
        dataset_id: dataset_id.clone(),
        status: JobStatus::Pending,
        request,
        outcome: None,
        error: None,
    };
    let job_id = job.job_id.clone();
    state.jobs.lock().unwrap().insert(job_id.clone(), job);
    tokio::spawn(execute(state.clone(), job_id.clone()));

    (
        StatusCode::ACCEPTED,
        [(header::LOCATION, format!("/selections/{job_id}"))],
        Json(json!({ "job_id": job_id, "status": JobStatus::Pending })),
    )
        .into_response()
}

async fn execute(state: AppState, job_id: String) {
    let job = state.job(&job_id).expect("job exists");
    let lock = state.dataset_lock(&job.dataset_id);
    let _guard = lock.lock().await;
    state.update(&job_id, |j| j.status = JobStatus::Running);

    let store = state.store.clone();
    let work = tokio::task::spawn_blocking(move || -> Result<_, String> {
        let bytes = store
            .get_dataset(&job.dataset_id)
            .map_err(|e| format!("storage error: {e}"))?
            .ok_or_else(|| format!("dataset `{}` is no longer stored", job.dataset_id))?;
        let table = CandidateTable::from_csv(bytes.as_slice(), job.request.id_column.as_deref())
            .map_err(|e| e.to_string())?;
        run_selection(&table, &job.request.schema, &job.request.params).map_err(|e| e.to_string())
    })
    .await
    .unwrap_or_else(|e| Err(format!("selection task aborted: {e}")));

    let finished = state.update(&job_id, |j| match work {
        Ok(outcome) => {
            j.status = JobStatus::Done;
            j.outcome = Some(outcome);
        }
        Err(message) => {
            j.status = JobStatus::Failed;
            j.error = Some(message);
        }
    });
    if let Err(e) = state.store.save_job(&finished) {
        eprintln!("could not persist job {job_id}: {e}");
    }
}

async fn get_selection(State(state): State<AppState>, Path(job_id): Path<String>) -> Response {
    match state.job(&job_id) {
        Some(job) => Json(JobView::from(&job)).into_response(),
        None => error(StatusCode::NOT_FOUND, format!("unknown job `{job_id}`")),
    }
}

async fn get_report(State(state): State<AppState>, Path(job_id): Path<String>) -> Response {
    let Some(job) = state.job(&job_id) else {
        return error(StatusCode::NOT_FOUND, format!("unknown job `{job_id}`"));
    };
    match (&job.status, &job.outcome) {
        (JobStatus::Done, Some(outcome)) => (
            [(header::CONTENT_TYPE, "text/csv; charset=utf-8")],
            outcome.report.to_csv(),
        )
            .into_response(),
        (JobStatus::Failed, _) => (
            StatusCode::CONFLICT,
            Json(json!({
                "error": job.error.clone().unwrap_or_default(),
                "status": job.status,
            })),
        )
            .into_response(),
        _ => (
            StatusCode::CONFLICT,
            Json(json!({ "error": "job is not done", "status": job.status })),
        )
            .into_response(),
    }
}
