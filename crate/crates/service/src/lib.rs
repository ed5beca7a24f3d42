//! JSON HTTP API over the `stegotax` library, plus static hosting of the
//! built web UI.
//!
//! The taxonomy is shared read-only. The catalog sits behind a lock; every
//! mutation clones it, applies the change, persists the clone and only then
//! swaps it in, so a failed write leaves memory and disk in agreement.

mod api;
mod error;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::response::Html;
use axum::routing::get;
use axum::Router;
use stegotax::catalog::{Catalog, CatalogError};
use stegotax::taxonomy::{Taxonomy, TaxonomyError};
use thiserror::Error;
use tower_http::services::{ServeDir, ServeFile};

pub use error::ApiError;

pub const ENV_ADDR: &str = "STEGOTAX_ADDR";
pub const ENV_STORE: &str = "STEGOTAX_STORE";
pub const ENV_TAXONOMY: &str = "STEGOTAX_TAXONOMY";
pub const ENV_UI: &str = "STEGOTAX_UI";
pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("cannot read taxonomy file {path}: {source}")]
    TaxonomyIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid taxonomy file {path}: {source}")]
    Taxonomy {
        path: PathBuf,
        #[source]
        source: TaxonomyError,
    },
    #[error("cannot open catalog store: {0}")]
    Store(#[from] CatalogError),
    #[error("invalid bind address {0:?}")]
    Address(String),
    #[error("server error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    pub addr: Option<SocketAddr>,
    pub taxonomy_path: Option<PathBuf>,
    pub store_path: Option<PathBuf>,
    pub ui_dir: Option<PathBuf>,
}

impl ServiceConfig {
    /// Reads `STEGOTAX_ADDR`, `STEGOTAX_STORE`, `STEGOTAX_TAXONOMY` and
    /// `STEGOTAX_UI`.
    pub fn from_env() -> Result<ServiceConfig, ServiceError> {
        let var = |name| std::env::var_os(name).filter(|v| !v.is_empty());
        let addr = match std::env::var(ENV_ADDR).ok().filter(|v| !v.is_empty()) {
            Some(text) => Some(text.parse().map_err(|_| ServiceError::Address(text))?),
            None => None,
        };
        Ok(ServiceConfig {
            addr,
            taxonomy_path: var(ENV_TAXONOMY).map(PathBuf::from),
            store_path: var(ENV_STORE).map(PathBuf::from),
            ui_dir: var(ENV_UI).map(PathBuf::from),
        })
    }

    pub fn bind_addr(&self) -> SocketAddr {
        self.addr
            .unwrap_or_else(|| DEFAULT_ADDR.parse().expect("default address parses"))
    }
}

pub struct AppState {
    taxonomy: Arc<Taxonomy>,
    catalog: RwLock<Catalog>,
    store: Option<PathBuf>,
}

impl AppState {
    /// In-memory state; catalog changes are not persisted.
    pub fn new(taxonomy: Arc<Taxonomy>) -> AppState {
        AppState {
            catalog: RwLock::new(Catalog::new(taxonomy.clone())),
            taxonomy,
            store: None,
        }
    }

    /// State backed by the store directory `store`, opened now.
    pub fn with_store(taxonomy: Arc<Taxonomy>, store: PathBuf) -> Result<AppState, CatalogError> {
        let catalog = Catalog::open(&store, taxonomy.clone())?;
        Ok(AppState {
            taxonomy,
            catalog: RwLock::new(catalog),
            store: Some(store),
        })
    }

    pub fn from_config(config: &ServiceConfig) -> Result<AppState, ServiceError> {
        let taxonomy = Arc::new(load_taxonomy(config.taxonomy_path.as_deref())?);
        match &config.store_path {
            Some(store) => Ok(AppState::with_store(taxonomy, store.clone())?),
            None => Ok(AppState::new(taxonomy)),
        }
    }

    pub fn taxonomy(&self) -> &Taxonomy {
        &self.taxonomy
    }
}

/// The bundled seed, or the file at `path`.
pub fn load_taxonomy(path: Option<&std::path::Path>) -> Result<Taxonomy, ServiceError> {
    let Some(path) = path else {
        return Ok(Taxonomy::seed());
    };
    let text = std::fs::read_to_string(path).map_err(|source| ServiceError::TaxonomyIo {
        path: path.to_path_buf(),
        source,
    })?;
    Taxonomy::load(&text).map_err(|source| ServiceError::Taxonomy {
        path: path.to_path_buf(),
        source,
    })
}

const PLACEHOLDER: &str = "<!doctype html>\n<title>stegotax</title>\n<p>The web UI is not built. \
Set STEGOTAX_UI to its build directory, or use the JSON API under <code>/api</code>.</p>\n";

pub fn router(state: Arc<AppState>, ui_dir: Option<PathBuf>) -> Router {
    let app = api::routes().with_state(state);
    match ui_dir {
        Some(dir) => {
            let index = dir.join("index.html");
            app.fallback_service(ServeDir::new(dir).fallback(ServeFile::new(index)))
        }
        None => app.route("/", get(|| async { Html(PLACEHOLDER) })),
    }
}

/// Binds and serves until ctrl-c.
pub async fn serve(config: ServiceConfig) -> Result<(), ServiceError> {
    let state = Arc::new(AppState::from_config(&config)?);
    let listener = tokio::net::TcpListener::bind(config.bind_addr()).await?;
    tracing::info!(addr = %listener.local_addr()?, "stegotax service listening");
    axum::serve(listener, router(state, config.ui_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
