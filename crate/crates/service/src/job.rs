use entrofy::{DistanceReport, Report, SelectionOutcome, SelectionRequest, SelectionResult};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobStatus {
    Pending,
    Running,
    Done,
    Failed,
}

impl JobStatus {
    pub fn is_finished(self) -> bool {
        matches!(self, JobStatus::Done | JobStatus::Failed)
    }
}

/// A selection job. The request is a snapshot taken at submission; a job
/// never changes after it is done or failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub job_id: String,
    pub dataset_id: String,
    pub status: JobStatus,
    pub request: SelectionRequest,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<SelectionOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Per-column arrays aligned by index, ready for plotting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnArrays {
    pub column_id: Vec<String>,
    pub attribute: Vec<String>,
    pub label: Vec<String>,
    pub target: Vec<f64>,
    pub pool_fraction: Vec<f64>,
    pub selected_fraction: Vec<f64>,
}

impl From<&Report> for ColumnArrays {
    fn from(r: &Report) -> Self {
        ColumnArrays {
            column_id: r.rows.iter().map(|x| x.column_id.clone()).collect(),
            attribute: r.rows.iter().map(|x| x.attribute.clone()).collect(),
            label: r.rows.iter().map(|x| x.label.clone()).collect(),
            target: r.rows.iter().map(|x| x.target).collect(),
            pool_fraction: r.rows.iter().map(|x| x.pool_fraction).collect(),
            selected_fraction: r.rows.iter().map(|x| x.selected_fraction).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distances<'a> {
    pub pool: &'a DistanceReport,
    pub selected: &'a DistanceReport,
}

/// Body of `GET /selections/{job_id}`.
#[derive(Debug, Serialize)]
pub struct JobView<'a> {
    pub job_id: &'a str,
    pub dataset_id: &'a str,
    pub status: JobStatus,
    pub request: &'a SelectionRequest,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<&'a SelectionResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<Distances<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub columns: Option<ColumnArrays>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<&'a str>,
}

impl<'a> From<&'a Job> for JobView<'a> {
    fn from(job: &'a Job) -> Self {
        let outcome = job.outcome.as_ref();
        JobView {
            job_id: &job.job_id,
            dataset_id: &job.dataset_id,
            status: job.status,
            request: &job.request,
            result: outcome.map(|o| &o.result),
            distance: outcome.map(|o| Distances {
                pool: &o.report.pool,
                selected: &o.report.selected,
            }),
            columns: outcome.map(|o| ColumnArrays::from(&o.report)),
            error: job.error.as_deref(),
        }
    }
}
