use abstext_service::cli::{self, Cli, Command};
use clap::Parser;
use tracing_subscriber::EnvFilter;

fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    let mut config = cli::load_config(&cli)?;
    if let Command::Serve { listen } = &cli.command {
        if let Some(addr) = listen {
            config.listen = addr.clone();
        }
        let runtime = tokio::runtime::Runtime::new()?;
        return runtime.block_on(abstext_service::serve(config));
    }
    let code = cli::run(&cli, &config, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
