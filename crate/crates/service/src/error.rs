use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};
use stegotax::catalog::CatalogError;
use stegotax::descriptor::DescriptorError;
use stegotax::diagnostic::Diagnostic;
use stegotax::udm::UdmError;

/// Error body returned by every endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub status: u16,
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagnostics: Option<Vec<Diagnostic>>,
}

impl ApiError {
    pub fn new(
        status: StatusCode,
        code: impl Into<String>,
        message: impl Into<String>,
    ) -> ApiError {
        ApiError {
            status: status.as_u16(),
            code: code.into(),
            message: message.into(),
            diagnostics: None,
        }
    }

    pub fn bad_request(code: impl Into<String>, message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, code, message)
    }

    pub fn not_found(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "NotFound", message)
    }

    fn with_diagnostics(mut self, diagnostics: Vec<Diagnostic>) -> ApiError {
        self.diagnostics = Some(diagnostics);
        self
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

impl From<DescriptorError> for ApiError {
    fn from(e: DescriptorError) -> ApiError {
        ApiError::bad_request(e.code().as_str(), e.to_string()).with_diagnostics(e.diagnostics())
    }
}

impl From<UdmError> for ApiError {
    fn from(e: UdmError) -> ApiError {
        match e {
            UdmError::ParseError(m) => ApiError::bad_request("ParseError", m),
            UdmError::MissingRequiredField(field) => ApiError::bad_request(
                "MissingRequiredField",
                format!("missing required field `{field}`"),
            ),
            UdmError::ValidationFailed(d) => {
                ApiError::bad_request("ValidationFailed", "document failed validation")
                    .with_diagnostics(d)
            }
        }
    }
}

impl From<CatalogError> for ApiError {
    fn from(e: CatalogError) -> ApiError {
        match e {
            CatalogError::ValidationFailed(d) => {
                ApiError::bad_request("ValidationFailed", "document failed validation")
                    .with_diagnostics(d)
            }
            CatalogError::NotFound(id) => {
                ApiError::not_found(format!("no catalog entry with id {id}"))
            }
            e @ CatalogError::StorageError { .. } => ApiError::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "StorageError",
                e.to_string(),
            ),
            e @ CatalogError::CorruptStore { .. } => ApiError::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "CorruptStore",
                e.to_string(),
            ),
        }
    }
}
