use std::sync::{Arc, RwLockReadGuard, RwLockWriteGuard};

use axum::extract::rejection::JsonRejection;
use axum::extract::{FromRequest, Path, Query, Request, State};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use stegotax::catalog::{AddOutcome, Catalog, CatalogEntry};
use stegotax::descriptor::{self, Descriptor, ExplanationEntry};
use stegotax::diagnostic::{has_errors, Diagnostic};
use stegotax::taxonomy::{PatternCode, PatternRecord, Taxonomy};
use stegotax::udm;

use crate::{ApiError, AppState};

type Shared = State<Arc<AppState>>;
type ApiResult<T> = Result<Json<T>, ApiError>;

pub(crate) fn routes() -> Router<Arc<AppState>> {
    Router::new()
        .route("/api/taxonomy", get(taxonomy_tree))
        .route("/api/taxonomy/{code}", get(taxonomy_record))
        .route("/api/parse", post(parse))
        .route("/api/normalize", post(normalize))
        .route("/api/validate", post(validate))
        .route("/api/explain", post(explain))
        .route("/api/derive-repr", post(derive_repr))
        .route("/api/udm/validate", post(udm_validate))
        .route("/api/catalog", get(catalog_list).post(catalog_add))
        .route("/api/catalog/dupes", get(catalog_dupes))
        .route("/api/catalog/{id}", get(catalog_get).delete(catalog_remove))
}

/// JSON body whose rejections become 400 `InvalidRequest` errors.
struct Body<T>(T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for Body<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, ApiError> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(value)) => Ok(Body(value)),
            Err(rejection) => Err(invalid_request(rejection)),
        }
    }
}

fn invalid_request(rejection: JsonRejection) -> ApiError {
    ApiError::bad_request("InvalidRequest", rejection.body_text())
}

fn read(state: &AppState) -> RwLockReadGuard<'_, Catalog> {
    state
        .catalog
        .read()
        .unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn write(state: &AppState) -> RwLockWriteGuard<'_, Catalog> {
    state
        .catalog
        .write()
        .unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn parse_code(text: &str) -> Result<PatternCode, ApiError> {
    text.parse().map_err(|e: stegotax::taxonomy::CodeError| {
        ApiError::bad_request("MalformedCode", e.to_string())
    })
}

#[derive(Serialize)]
struct TreeNode<'a> {
    #[serde(flatten)]
    record: &'a PatternRecord,
    children: Vec<TreeNode<'a>>,
}

fn tree<'a>(taxonomy: &'a Taxonomy, record: &'a PatternRecord) -> TreeNode<'a> {
    TreeNode {
        record,
        children: taxonomy
            .direct_children(&record.code)
            .into_iter()
            .map(|child| tree(taxonomy, child))
            .collect(),
    }
}

#[derive(Serialize)]
struct TaxonomyTree<'a> {
    version: &'a str,
    roots: Vec<TreeNode<'a>>,
}

async fn taxonomy_tree(State(state): Shared) -> Json<serde_json::Value> {
    let tax = state.taxonomy();
    let body = TaxonomyTree {
        version: tax.version(),
        roots: tax.roots().into_iter().map(|r| tree(tax, r)).collect(),
    };
    Json(serde_json::to_value(body).expect("tree serializes"))
}

#[derive(Serialize)]
struct RecordView {
    #[serde(flatten)]
    record: PatternRecord,
    children: Vec<PatternCode>,
}

async fn taxonomy_record(State(state): Shared, Path(code): Path<String>) -> ApiResult<RecordView> {
    let code = parse_code(&code)?;
    let tax = state.taxonomy();
    let record = tax
        .get(&code)
        .ok_or_else(|| ApiError::not_found(format!("pattern {code} is not in the taxonomy")))?;
    Ok(Json(RecordView {
        record: record.clone(),
        children: tax
            .direct_children(&code)
            .into_iter()
            .map(|r| r.code.clone())
            .collect(),
    }))
}

#[derive(Deserialize)]
struct DescriptorRequest {
    descriptor: String,
}

#[derive(Serialize)]
struct ParseResponse {
    descriptor: Descriptor,
    canonical: String,
    warnings: Vec<Diagnostic>,
}

async fn parse(
    State(state): Shared,
    Body(req): Body<DescriptorRequest>,
) -> ApiResult<ParseResponse> {
    let tax = state.taxonomy();
    let parsed = descriptor::parse_with_diagnostics(&req.descriptor, tax)?;
    let canonical = descriptor::render_canonical(&parsed.descriptor, tax)?;
    Ok(Json(ParseResponse {
        descriptor: parsed.descriptor,
        canonical,
        warnings: parsed.warnings,
    }))
}

#[derive(Serialize)]
struct NormalizeResponse {
    canonical: String,
}

async fn normalize(
    State(state): Shared,
    Body(req): Body<DescriptorRequest>,
) -> ApiResult<NormalizeResponse> {
    let canonical = descriptor::normalize(&req.descriptor, state.taxonomy())?;
    Ok(Json(NormalizeResponse { canonical }))
}

#[derive(Serialize)]
struct ValidateResponse {
    valid: bool,
    diagnostics: Vec<Diagnostic>,
}

/// Always 200: the diagnostics are the result.
async fn validate(
    State(state): Shared,
    Body(req): Body<DescriptorRequest>,
) -> Json<ValidateResponse> {
    let diagnostics = descriptor::check(&req.descriptor, state.taxonomy());
    Json(ValidateResponse {
        valid: !has_errors(&diagnostics),
        diagnostics,
    })
}

#[derive(Serialize)]
struct ExplainResponse {
    canonical: String,
    entries: Vec<ExplanationEntry>,
}

async fn explain(
    State(state): Shared,
    Body(req): Body<DescriptorRequest>,
) -> ApiResult<ExplainResponse> {
    let tax = state.taxonomy();
    let parsed = descriptor::parse_descriptor(&req.descriptor, tax)?;
    Ok(Json(ExplainResponse {
        canonical: descriptor::render_canonical(&parsed, tax)?,
        entries: descriptor::explain(&parsed, tax)?,
    }))
}

#[derive(Serialize)]
struct DeriveResponse {
    canonical: String,
    descriptor: Descriptor,
}

async fn derive_repr(
    State(state): Shared,
    Body(req): Body<DescriptorRequest>,
) -> ApiResult<DeriveResponse> {
    let tax = state.taxonomy();
    let parsed = descriptor::parse_descriptor(&req.descriptor, tax)?;
    let derived = descriptor::derive_representation(&parsed, tax)?;
    Ok(Json(DeriveResponse {
        canonical: descriptor::render_canonical(&derived, tax)?,
        descriptor: derived,
    }))
}

#[derive(Serialize)]
struct UdmValidateResponse {
    valid: bool,
    diagnostics: Vec<Diagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    representation: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    signature: Option<String>,
}

/// UDM bodies go through `deserialize_udm` so missing fields get their own
/// error code.
async fn udm_validate(State(state): Shared, body: String) -> ApiResult<UdmValidateResponse> {
    let tax = state.taxonomy();
    let doc = udm::deserialize_udm(&body)?;
    let diagnostics = udm::validate_udm(&doc, tax);
    let valid = !has_errors(&diagnostics);
    Ok(Json(UdmValidateResponse {
        valid,
        diagnostics,
        representation: valid
            .then(|| udm::resolve_representation(&doc, tax).ok())
            .flatten(),
        signature: valid.then(|| udm::signature(&doc, tax).ok()).flatten(),
    }))
}

#[derive(Deserialize)]
struct CatalogQuery {
    prefix: Option<String>,
}

#[derive(Serialize)]
struct EntriesResponse {
    entries: Vec<CatalogEntry>,
}

async fn catalog_list(
    State(state): Shared,
    Query(query): Query<CatalogQuery>,
) -> ApiResult<EntriesResponse> {
    let prefix = query
        .prefix
        .as_deref()
        .filter(|p| !p.is_empty())
        .map(parse_code)
        .transpose()?;
    let catalog = read(&state);
    let entries = match &prefix {
        Some(code) => catalog.find_by_prefix(code),
        None => catalog.list_entries(),
    };
    Ok(Json(EntriesResponse {
        entries: entries.into_iter().cloned().collect(),
    }))
}

/// Applies `change` to a copy of the catalog, persists the copy when a store
/// is configured, then swaps it in. The write lock is held throughout.
fn mutate<T>(
    state: &AppState,
    change: impl FnOnce(&mut Catalog) -> Result<T, ApiError>,
) -> Result<T, ApiError> {
    let mut guard = write(state);
    let mut next = guard.clone();
    let out = change(&mut next)?;
    if let Some(store) = &state.store {
        next.persist(store)?;
    }
    *guard = next;
    Ok(out)
}

async fn catalog_add(State(state): Shared, body: String) -> ApiResult<AddOutcome> {
    let doc = udm::deserialize_udm(&body)?;
    let outcome = mutate(&state, |catalog| Ok(catalog.add(doc)?))?;
    if !outcome.duplicates.is_empty() {
        tracing::info!(id = %outcome.entry.id, duplicates = ?outcome.duplicates, "catalog entry duplicates existing entries");
    }
    Ok(Json(outcome))
}

#[derive(Serialize)]
struct DupesResponse {
    groups: Vec<Vec<String>>,
}

async fn catalog_dupes(State(state): Shared) -> Json<DupesResponse> {
    Json(DupesResponse {
        groups: read(&state).find_duplicates(),
    })
}

async fn catalog_get(State(state): Shared, Path(id): Path<String>) -> ApiResult<CatalogEntry> {
    read(&state)
        .get(&id)
        .cloned()
        .map(Json)
        .ok_or_else(|| ApiError::not_found(format!("no catalog entry with id {id}")))
}

#[derive(Serialize)]
struct RemoveResponse {
    removed: CatalogEntry,
}

async fn catalog_remove(State(state): Shared, Path(id): Path<String>) -> ApiResult<RemoveResponse> {
    let removed = mutate(&state, |catalog| Ok(catalog.remove(&id)?))?;
    Ok(Json(RemoveResponse { removed }))
}
