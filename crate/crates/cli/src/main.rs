//! `glex`: run the compound anaphora demo, serve a lexicon, look entries up,
//! and convert between LDIF and XML.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use glex_client::{pretty_print, ClientError, Connection};
use glex_core::{seed, Number};
use glex_server::{ServeError, ServerConfig};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "glex", version, about = "Generative Lexicon toolkit")]
struct Cli {
    #[command(flatten)]
    source: Source,
    #[command(subcommand)]
    command: Command,
}

/// Where the lexicon comes from; the built-in seed when neither is given.
#[derive(Debug, Args)]
struct Source {
    /// Lexicon file (`.xml` for XML, LDIF otherwise).
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "server")]
    lexicon: Option<PathBuf>,
    /// Server base URL, e.g. http://127.0.0.1:7878
    #[arg(long, global = true, value_name = "URL")]
    server: Option<String>,
    #[arg(long, global = true, env = "GLEX_USER", requires = "password")]
    user: Option<String>,
    #[arg(long, global = true, env = "GLEX_PASSWORD", hide_env_values = true)]
    password: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Ldif,
    Xml,
}

impl FormatArg {
    fn as_str(self) -> &'static str {
        match self {
            FormatArg::Ldif => "ldif",
            FormatArg::Xml => "xml",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NumberArg {
    Sg,
    Pl,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the definite, possessive and demonstrative variants, starring the unlicensed ones.
    Demo {
        head: String,
        modifier: String,
        /// Sentence with three `%s`: head, determiner, modifier.
        template: String,
        #[arg(long, value_enum, default_value = "sg")]
        possessor_number: NumberArg,
    },
    /// Run the lexicon server until interrupted.
    Serve {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
    },
    /// Pretty-print the entries for WORD, or the values at --path.
    Get {
        word: String,
        #[arg(long, value_name = "PATH")]
        path: Option<String>,
    },
    /// Write the whole lexicon to FILE (`-` for stdout).
    Export {
        #[arg(long, value_enum)]
        format: FormatArg,
        file: PathBuf,
    },
    /// Replace the whole lexicon with the contents of FILE (`-` for stdin).
    Import {
        #[arg(long, value_enum)]
        format: FormatArg,
        file: PathBuf,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Client(#[from] ClientError),
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Serve(#[from] ServeError),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Serve(ServeError::Config(_)) => 2,
            _ => 1,
        }
    }
}

fn connect(source: &Source) -> Result<Connection, CliError> {
    let credentials = match (&source.user, &source.password) {
        (Some(u), Some(p)) => Some((u.as_str(), p.as_str())),
        _ => None,
    };
    if let Some(url) = &source.server {
        return Ok(Connection::connect(url, credentials)?);
    }
    if credentials.is_some() {
        return Err(CliError::Usage("--user needs --server".into()));
    }
    match &source.lexicon {
        Some(path) => Ok(Connection::Local(glex_client::Local::open(path)?)),
        None => Ok(Connection::local(seed::lexicon())),
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    match cli.command {
        Command::Demo {
            head,
            modifier,
            template,
            possessor_number,
        } => {
            let conn = connect(&cli.source)?;
            let number = match possessor_number {
                NumberArg::Sg => Number::Sg,
                NumberArg::Pl => Number::Pl,
            };
            let verdict = conn.validate_anaphora(&head, &modifier, &template, number)?;
            for note in &verdict.diagnostics {
                eprintln!("note: {note}");
            }
            for line in verdict.lines() {
                writeln!(out, "{line}")?;
            }
        }
        Command::Serve { config } => {
            if cli.source.lexicon.is_some() || cli.source.server.is_some() {
                return Err(CliError::Usage(
                    "serve takes its lexicon from the config file".into(),
                ));
            }
            let config = ServerConfig::load(&config).map_err(ServeError::from)?;
            tracing_subscriber::fmt().with_writer(io::stderr).init();
            glex_server::run(&config, |addr| eprintln!("listening on http://{addr}"))?;
        }
        Command::Get { word, path } => {
            let conn = connect(&cli.source)?;
            if word.contains('*') || word.contains('=') {
                return Err(CliError::Usage(format!("`{word}` is a filter, not a word")));
            }
            let keys = conn.search_word(&word)?;
            if keys.is_empty() {
                return Err(CliError::UnknownWord(word));
            }
            for (i, key) in keys.iter().enumerate() {
                match &path {
                    Some(p) => {
                        for v in conn.get_feature_value(key, p)? {
                            writeln!(out, "{v}")?;
                        }
                    }
                    None => {
                        if i > 0 {
                            writeln!(out)?;
                        }
                        write!(out, "{}", pretty_print(&conn.get_features(key)?))?;
                    }
                }
            }
        }
        Command::Export { format, file } => {
            let conn = connect(&cli.source)?;
            let doc = conn.export(format.as_str())?;
            if file.as_os_str() == "-" {
                out.write_all(doc.as_bytes())?;
            } else {
                std::fs::write(&file, doc)
                    .map_err(|source| CliError::File { path: file, source })?;
            }
        }
        Command::Import { format, file } => {
            let mut conn = connect(&cli.source)?;
            let summary = if file.as_os_str() == "-" {
                conn.restore_lexicon(format.as_str(), &mut io::stdin().lock())?
            } else {
                let mut f = File::open(&file).map_err(|source| CliError::File {
                    path: file.clone(),
                    source,
                })?;
                conn.restore_lexicon(format.as_str(), &mut f)?
            };
            if let Connection::Local(local) = &conn {
                local.persist()?;
            }
            writeln!(
                out,
                "imported {} entries, {} types",
                summary.entries, summary.types
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out).and_then(|()| Ok(out.flush()?)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("glex: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
