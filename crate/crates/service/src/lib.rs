//! HTTP API over the catalogue store: entries, search, the review
//! workflow, analytics, and bulk import/export.
//!
//! Every body is UTF-8 JSON in canonical form (sorted keys, no
//! whitespace) unless a report is requested as CSV or markdown.

pub mod api;
pub mod config;
pub mod error;
pub mod openapi;
mod query;
pub mod state;

use std::sync::Arc;

use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Router;
use catalogue_core::store::Store;
use tokio::net::TcpListener;
use tower_http::cors::{AllowOrigin, CorsLayer};

pub use config::{Config, ConfigError};
pub use error::{ApiError, ERROR_KINDS};
pub use state::AppState;

pub(crate) fn json_response(status: StatusCode, body: Vec<u8>) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot open data directory: {0}")]
    Store(#[from] catalogue_core::store::StoreError),
    #[error("invalid CORS origin {0:?}")]
    Cors(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The full application for `state`, with CORS for `cors_origin`.
pub fn app(state: Arc<AppState>, cors_origin: Option<&str>) -> Result<Router, ServeError> {
    let router = api::router(state);
    let Some(origin) = cors_origin else {
        return Ok(router);
    };
    let origin = HeaderValue::from_str(origin).map_err(|_| ServeError::Cors(origin.to_string()))?;
    let cors = CorsLayer::new()
        .allow_origin(AllowOrigin::exact(origin))
        .allow_methods([Method::GET, Method::POST, Method::PATCH])
        .allow_headers([header::CONTENT_TYPE]);
    Ok(router.layer(cors))
}

/// Serve `router` on an already bound listener until ctrl-c.
pub async fn serve_on(listener: TcpListener, router: Router) -> std::io::Result<()> {
    axum::serve(listener, router)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

/// Open the store named by `config` and serve it.
pub async fn serve(config: Config) -> Result<(), ServeError> {
    let store = Arc::new(Store::open(&config.data_dir)?);
    let state = Arc::new(AppState::new(store, config.review));
    let router = app(state, config.cors_origin.as_deref())?;
    let listener = TcpListener::bind(config.listen).await?;
    eprintln!("catalogue service listening on http://{}", listener.local_addr()?);
    serve_on(listener, router).await?;
    Ok(())
}
