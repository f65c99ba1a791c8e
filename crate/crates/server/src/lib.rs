//! Network service for a Generative Lexicon: sessions, reader/editor roles,
//! search, entry CRUD with optional compare-and-set, LDIF/XML import and
//! export, and anaphora validation over HTTP/JSON.

pub mod auth;
pub mod config;
pub mod http;
pub mod service;

use std::future::Future;
use std::net::SocketAddr;
use std::sync::Arc;
use std::thread::JoinHandle;

use thiserror::Error;
use tokio::net::TcpListener;
use tokio::sync::oneshot;

pub use auth::{hash_password, Session};
pub use config::{ConfigError, Role, ServerConfig, User};
pub use http::{router, ErrorBody};
pub use service::{entry_hash, AnaphoraRequest, ImportSummary, LexiconService, ServiceError};

#[derive(Debug, Error)]
pub enum ServeError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot load lexicon: {0}")]
    Load(ServiceError),
    #[error("cannot flush lexicon: {0}")]
    Flush(ServiceError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Serves until `shutdown` resolves, then flushes the lexicon to disk.
pub async fn serve(
    listener: TcpListener,
    service: Arc<LexiconService>,
    ui_dir: Option<&std::path::Path>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ServeError> {
    let app = router(service.clone(), ui_dir);
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown)
        .await?;
    service.flush().map_err(ServeError::Flush)
}

/// Runs the configured server until SIGINT. `on_ready` gets the bound address.
pub fn run(config: &ServerConfig, on_ready: impl FnOnce(SocketAddr)) -> Result<(), ServeError> {
    config.validate()?;
    let service = Arc::new(LexiconService::open(config).map_err(ServeError::Load)?);
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()?;
    rt.block_on(async {
        let listener = TcpListener::bind(config.listen).await?;
        on_ready(listener.local_addr()?);
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        serve(listener, service, config.ui_dir.as_deref(), shutdown).await
    })
}

/// A server on a background thread, stopped on [`ServerHandle::shutdown`] or drop.
#[derive(Debug)]
pub struct ServerHandle {
    addr: SocketAddr,
    stop: Option<oneshot::Sender<()>>,
    thread: Option<JoinHandle<Result<(), ServeError>>>,
}

impl ServerHandle {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }

    pub fn shutdown(mut self) -> Result<(), ServeError> {
        self.stop_and_join()
    }

    fn stop_and_join(&mut self) -> Result<(), ServeError> {
        if let Some(stop) = self.stop.take() {
            let _ = stop.send(());
        }
        match self.thread.take() {
            Some(t) => t.join().expect("server thread panicked"),
            None => Ok(()),
        }
    }
}

impl Drop for ServerHandle {
    fn drop(&mut self) {
        let _ = self.stop_and_join();
    }
}

/// Starts `service` on `listen` (port 0 picks a free port).
pub fn spawn(
    service: Arc<LexiconService>,
    listen: SocketAddr,
    ui_dir: Option<std::path::PathBuf>,
) -> Result<ServerHandle, ServeError> {
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()?;
    let listener = rt.block_on(TcpListener::bind(listen))?;
    let addr = listener.local_addr()?;
    let (stop, stopped) = oneshot::channel::<()>();
    let thread = std::thread::spawn(move || {
        rt.block_on(serve(listener, service, ui_dir.as_deref(), async {
            let _ = stopped.await;
        }))
    });
    Ok(ServerHandle {
        addr,
        stop: Some(stop),
        thread: Some(thread),
    })
}
