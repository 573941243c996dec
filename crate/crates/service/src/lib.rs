//! HTTP service and command-line front end.

pub mod api;
pub mod cli;
pub mod config;

use anyhow::Context;

/// Serves the API on `config.listen` until interrupted.
pub async fn serve(config: config::Config) -> anyhow::Result<()> {
    let engine = cli::load_engine(&config).with_context(|| format!("loading {}", config.data_dir.display()))?;
    let mut state = api::AppState::new(engine);
    if config.remote_fetch {
        state.remote = Some(abstext::entity::RemoteEntityClient::new(&config.remote_url));
    }
    let listener = tokio::net::TcpListener::bind(&config.listen)
        .await
        .with_context(|| format!("binding {}", config.listen))?;
    tracing::info!(addr = %listener.local_addr()?, data = %config.data_dir.display(), "listening");
    axum::serve(listener, api::router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
