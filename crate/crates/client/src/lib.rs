//! Client library for a glex lexicon.
//!
//! A [`Connection`] talks either to a running server over HTTP or to a lexicon
//! file loaded into memory. Read operations answer identically in both modes.

mod remote;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use glex_core::{
    feature_at_path, generate_variants, search_str, AnaphoraError, AnaphoraOptions,
    AnaphoraVerdict, ContainmentSet, EntryKey, Format, LexicalEntry, Lexicon, Number, PersistError,
    TypeHierarchy,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use glex_core::pretty_print;
pub use remote::Remote;

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("cannot reach {address}: {message}")]
    ConnectFailed { address: String, message: String },
    #[error("authentication failed")]
    AuthFailed,
    #[error("{0}")]
    Unauthorized(String),
    #[error("{0}")]
    Forbidden(String),
    #[error("no entry {0}")]
    NotFound(EntryKey),
    /// Message of the underlying filter error.
    #[error("{0}")]
    BadFilter(String),
    #[error("{0}")]
    BadPath(String),
    #[error("{0}")]
    BadFormat(String),
    #[error(transparent)]
    Persist(#[from] PersistError),
    #[error(transparent)]
    Anaphora(#[from] AnaphoraError),
    #[error("cannot access {path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("server error {status} {error}: {detail}")]
    Server {
        status: u16,
        error: String,
        detail: String,
    },
}

pub type Result<T, E = ClientError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportSummary {
    pub entries: usize,
    pub types: usize,
}

/// A lexicon file held in memory.
#[derive(Debug, Clone)]
pub struct Local {
    lexicon: Lexicon,
    path: Option<PathBuf>,
    format: Format,
    containment: ContainmentSet,
}

impl Local {
    pub fn new(lexicon: Lexicon) -> Self {
        Local {
            lexicon,
            path: None,
            format: Format::Ldif,
            containment: ContainmentSet::default(),
        }
    }

    /// Reads `path`; `.xml` files are XML, anything else LDIF.
    pub fn open(path: &Path) -> Result<Self> {
        let format = format_for(path);
        let text = std::fs::read_to_string(path).map_err(|source| ClientError::File {
            path: path.to_path_buf(),
            source,
        })?;
        let containment = ContainmentSet::default();
        let lexicon = format.import(&text, &containment)?;
        Ok(Local {
            lexicon,
            path: Some(path.to_path_buf()),
            format,
            containment,
        })
    }

    pub fn with_containment(mut self, containment: ContainmentSet) -> Self {
        self.containment = containment;
        self
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// Writes the lexicon back to the file it came from, in that file's format.
    /// Returns `false` when there is no file.
    pub fn persist(&self) -> Result<bool> {
        let Some(path) = &self.path else {
            return Ok(false);
        };
        std::fs::write(path, self.format.export(&self.lexicon)).map_err(|source| {
            ClientError::File {
                path: path.clone(),
                source,
            }
        })?;
        Ok(true)
    }
}

/// Format implied by a file name.
pub fn format_for(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("xml") => Format::Xml,
        _ => Format::Ldif,
    }
}

#[derive(Debug)]
pub enum Connection {
    Remote(Remote),
    Local(Local),
}

fn parse_format(format: &str) -> Result<Format> {
    format.parse().map_err(ClientError::BadFormat)
}

impl Connection {
    /// `http://` and `https://` addresses connect to a server (binding when
    /// credentials are given); anything else is a lexicon file.
    pub fn connect(address: &str, credentials: Option<(&str, &str)>) -> Result<Connection> {
        if address.starts_with("http://") || address.starts_with("https://") {
            Ok(Connection::Remote(Remote::connect(address, credentials)?))
        } else {
            Ok(Connection::Local(Local::open(Path::new(address))?))
        }
    }

    pub fn local(lexicon: Lexicon) -> Connection {
        Connection::Local(Local::new(lexicon))
    }

    pub fn search_word(&self, word: &str) -> Result<Vec<EntryKey>> {
        match self {
            Connection::Remote(r) => r.search(word),
            Connection::Local(l) => {
                search_str(&l.lexicon, word).map_err(|e| ClientError::BadFilter(e.to_string()))
            }
        }
    }

    pub fn get_features(&self, key: &EntryKey) -> Result<LexicalEntry> {
        match self {
            Connection::Remote(r) => r.fetch(key),
            Connection::Local(l) => l
                .lexicon
                .get(key)
                .cloned()
                .ok_or_else(|| ClientError::NotFound(key.clone())),
        }
    }

    pub fn get_feature_value(&self, key: &EntryKey, path: &str) -> Result<Vec<String>> {
        match self {
            Connection::Remote(r) => r.feature(key, path),
            Connection::Local(_) => feature_at_path(&self.get_features(key)?, path)
                .map_err(|e| ClientError::BadPath(e.to_string())),
        }
    }

    /// The serialized lexicon in `format` (`ldif` or `xml`).
    pub fn export(&self, format: &str) -> Result<String> {
        match self {
            Connection::Remote(r) => r.export(format),
            Connection::Local(l) => Ok(parse_format(format)?.export(&l.lexicon)),
        }
    }

    pub fn save_lexicon(&self, format: &str, sink: &mut impl Write) -> Result<()> {
        sink.write_all(self.export(format)?.as_bytes())?;
        Ok(())
    }

    /// Replaces the whole lexicon. In local mode only the in-memory copy changes;
    /// see [`Local::persist`].
    pub fn restore_lexicon(
        &mut self,
        format: &str,
        source: &mut impl Read,
    ) -> Result<ImportSummary> {
        let mut text = String::new();
        source.read_to_string(&mut text)?;
        match self {
            Connection::Remote(r) => r.import(format, &text),
            Connection::Local(l) => {
                let lexicon = parse_format(format)?.import(&text, &l.containment)?;
                let summary = ImportSummary {
                    entries: lexicon.len(),
                    types: lexicon.hierarchy().len(),
                };
                l.lexicon = lexicon;
                Ok(summary)
            }
        }
    }

    pub fn validate_anaphora(
        &self,
        head: &str,
        modifier: &str,
        template: &str,
        possessor_number: Number,
    ) -> Result<AnaphoraVerdict> {
        match self {
            Connection::Remote(r) => {
                r.validate_anaphora(head, modifier, template, possessor_number)
            }
            Connection::Local(l) => Ok(generate_variants(
                head,
                modifier,
                template,
                AnaphoraOptions { possessor_number },
                &l.lexicon,
                &l.containment,
            )?),
        }
    }

    pub fn types(&self) -> Result<TypeHierarchy> {
        match self {
            Connection::Remote(r) => r.types(),
            Connection::Local(l) => Ok(l.lexicon.hierarchy().clone()),
        }
    }
}
