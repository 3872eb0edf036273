use std::time::Duration;

use chrono::{DateTime, FixedOffset, Utc};
use lifelog_core::engine::IndexSet;
use serde::{Deserialize, Serialize};

/// Wire format of a submission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Submission {
    pub id: String,
    pub timestamp: DateTime<FixedOffset>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubmissionStatus {
    Accepted,
    Rejected,
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmissionReceipt {
    pub id: String,
    pub timestamp: DateTime<FixedOffset>,
    pub submitted_at: DateTime<Utc>,
    pub status: SubmissionStatus,
    /// True when no endpoint is configured and nothing was sent.
    pub practice: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub http_status: Option<u16>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SubmitError {
    #[error("unknown record id '{0}'")]
    UnknownId(String),
}

#[derive(Debug, Clone)]
pub struct Submitter {
    url: Option<String>,
    client: reqwest::Client,
}

impl Submitter {
    pub fn new(url: Option<String>, timeout: Duration) -> Self {
        let client = reqwest::Client::builder()
            .timeout(timeout)
            .build()
            .expect("http client builds with default settings");
        Submitter { url, client }
    }

    pub fn practice() -> Self {
        Submitter::new(None, Duration::from_secs(5))
    }

    pub fn url(&self) -> Option<&str> {
        self.url.as_deref()
    }

    /// Sends `{id, timestamp}` for a known record. Network and HTTP failures
    /// are reported in the receipt, never as errors.
    pub async fn submit(&self, idx: &IndexSet, id: &str) -> Result<SubmissionReceipt, SubmitError> {
        let rec = idx
            .record_by_id(id)
            .ok_or_else(|| SubmitError::UnknownId(id.to_owned()))?;
        let body = Submission {
            id: rec.id.clone(),
            timestamp: rec.timestamp,
        };
        let submitted_at = Utc::now();
        let receipt = |status, http_status, message| SubmissionReceipt {
            id: body.id.clone(),
            timestamp: body.timestamp,
            submitted_at,
            status,
            practice: self.url.is_none(),
            http_status,
            message,
        };

        let Some(url) = &self.url else {
            tracing::info!(id = %body.id, timestamp = %body.timestamp, "practice submission");
            return Ok(receipt(SubmissionStatus::Accepted, None, None));
        };
        match self.client.post(url).json(&body).send().await {
            Ok(resp) => {
                let code = resp.status();
                let text = resp.text().await.unwrap_or_default();
                let status = if code.is_success() {
                    SubmissionStatus::Accepted
                } else {
                    SubmissionStatus::Rejected
                };
                tracing::info!(id = %body.id, %code, "submission answered");
                Ok(receipt(status, Some(code.as_u16()), Some(text).filter(|t| !t.is_empty())))
            }
            Err(e) => {
                tracing::warn!(id = %body.id, error = %e, "submission endpoint unreachable");
                Ok(receipt(SubmissionStatus::Unreachable, None, Some(e.to_string())))
            }
        }
    }
}
