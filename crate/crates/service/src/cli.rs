//! Command-line verbs. `run` writes to the given streams and returns the
//! process exit code so that tests can drive it in-process.

use std::io::Write;
use std::path::{Path, PathBuf};

use abstext::content::{parse_content, parse_value, serialize_content_with, Content, Diagnostic};
use abstext::entity::ItemDocument;
use abstext::registry::Datum;
use abstext::render::RenderError;
use abstext::Engine;
use clap::{Parser, Subcommand};

use crate::config::Config;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "abstext", version, about = "Render abstract content into text")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, env = "ABSTEXT_CONFIG")]
    pub config: Option<PathBuf>,
    /// Data directory; overrides the configuration.
    #[arg(long, global = true)]
    pub data_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a content file and print it in canonical notation.
    Parse { file: PathBuf },
    /// Validate a content file against the constructor catalog.
    Validate { file: PathBuf },
    /// Render a content file.
    Render {
        file: PathBuf,
        #[arg(long)]
        lang: String,
    },
    /// Evaluate a function on constant arguments written in content notation.
    Eval {
        function: String,
        args: Vec<String>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long)]
        listen: Option<String>,
    },
    /// Import an item document into the data directory.
    Import { file: PathBuf },
}

/// A failure with the structured code shared with the HTTP API.
struct Failure {
    exit: i32,
    code: String,
    message: String,
}

impl Failure {
    fn new(code: &str, message: impl ToString) -> Self {
        Failure {
            exit: EXIT_ERROR,
            code: code.to_string(),
            message: message.to_string(),
        }
    }
}

impl From<RenderError> for Failure {
    fn from(e: RenderError) -> Self {
        let exit = if matches!(e, RenderError::ValidationFailed(_)) { EXIT_INVALID } else { EXIT_ERROR };
        Failure {
            exit,
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

impl From<abstext::EngineError> for Failure {
    fn from(e: abstext::EngineError) -> Self {
        Failure::new(e.code(), &e)
    }
}

pub fn load_config(cli: &Cli) -> anyhow::Result<Config> {
    let mut config = Config::load(cli.config.as_deref(), std::env::vars())?;
    if let Some(dir) = &cli.data_dir {
        config.data_dir = dir.clone();
    }
    Ok(config)
}

pub fn load_engine(config: &Config) -> Result<Engine, abstext::EngineError> {
    let engine = Engine::load(&config.data_dir, config.registry())?;
    Ok(if config.persist { engine.persist_to(&config.data_dir) } else { engine })
}

fn read_content(file: &Path) -> Result<Content, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::new("IO_ERROR", format!("{}: {e}", file.display())))?;
    parse_content(&text).map_err(|e| Failure::new("SYNTAX_ERROR", format!("{}: {e}", file.display())))
}

fn report(err: &mut dyn Write, diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        let _ = writeln!(err, "{d}");
    }
}

fn eval_arg(text: &str) -> Result<Datum, Failure> {
    let value = parse_value(text).map_err(|e| Failure::new("SYNTAX_ERROR", format!("argument `{text}`: {e}")))?;
    Datum::from_constant(&value, true).map_err(|e| Failure::new("TYPE_ERROR", format!("argument `{text}`: {e}")))
}

/// Runs every verb except `serve`, which needs a runtime.
pub fn run(cli: &Cli, config: &Config, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, config, out, err) {
        Ok(code) => code,
        Err(f) => {
            let prefix = format!("{}: ", f.code);
            let message = f.message.strip_prefix(&prefix).unwrap_or(&f.message);
            let _ = writeln!(err, "{}: {message}", f.code);
            f.exit
        }
    }
}

fn execute(cli: &Cli, config: &Config, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::new("IO_ERROR", e);
    match &cli.command {
        Command::Parse { file } => {
            let content = read_content(file)?;
            let engine = load_engine(config)?;
            writeln!(out, "{}", serialize_content_with(&content, &engine.world().catalog)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Validate { file } => {
            let content = read_content(file)?;
            let diagnostics = load_engine(config)?.validate(&content);
            report(err, &diagnostics);
            Ok(if diagnostics.is_empty() { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Render { file, lang } => {
            let content = read_content(file)?;
            let engine = load_engine(config)?;
            let outcome = engine.render(&content, lang).map_err(|e| {
                if let RenderError::ValidationFailed(d) = &e {
                    report(err, d);
                }
                Failure::from(e)
            })?;
            writeln!(out, "{}", outcome.text).map_err(io)?;
            for o in &outcome.omissions {
                let _ = writeln!(err, "omitted {}: {}", o.path, o.reason);
            }
            Ok(EXIT_OK)
        }
        Command::Eval { function, args } => {
            let args = args.iter().map(|a| eval_arg(a)).collect::<Result<Vec<_>, _>>()?;
            let engine = load_engine(config)?;
            let value = engine.evaluate(function, args).map_err(|e| Failure::new(e.code(), e.message()))?;
            writeln!(out, "{value}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Import { file } => {
            let text = std::fs::read_to_string(file).map_err(io)?;
            let doc: ItemDocument =
                serde_json::from_str(&text).map_err(|e| Failure::new("PARSE_ERROR", format!("{}: {e}", file.display())))?;
            let mut engine = load_engine(config)?.persist_to(&config.data_dir);
            let n = doc.items.len();
            for item in doc.items {
                engine.put_item(item)?;
            }
            writeln!(out, "imported {n} item(s)").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Serve { .. } => Err(Failure::new("USAGE", "serve is handled by the binary")),
    }
}
