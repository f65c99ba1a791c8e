//! The lexicon service: every HTTP operation as a plain method.
//!
//! Readers take an `Arc` snapshot of the whole lexicon; writers serialize on a
//! mutex, build a modified copy, flush it, then swap it in. A reader never sees
//! a half-applied import or upsert.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::Duration;

use glex_core::{
    feature_at_path, generate_variants, search_str, AnaphoraError, AnaphoraOptions,
    AnaphoraVerdict, BadFilter, BadPath, ContainmentSet, EntryKey, Format, LexicalEntry, Lexicon,
    Number, PersistError, TypeHierarchy, ValidationReport,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::auth::{Authenticator, Session};
use crate::config::{Role, ServerConfig};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("authentication failed")]
    AuthFailed,
    #[error("unauthorized: {0}")]
    Unauthorized(&'static str),
    #[error("forbidden: {0} role cannot modify the lexicon")]
    Forbidden(Role),
    #[error("no entry {0}")]
    NotFound(EntryKey),
    #[error(transparent)]
    BadFilter(#[from] BadFilter),
    #[error(transparent)]
    BadPath(#[from] BadPath),
    #[error("{0}")]
    BadFormat(String),
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error(transparent)]
    Persist(PersistError),
    #[error("validation failed with {} problem(s)", .0.problems.len())]
    ValidationFailed(ValidationReport),
    #[error(transparent)]
    Anaphora(#[from] AnaphoraError),
    #[error("entry {0} changed since it was fetched")]
    Conflict(EntryKey),
    #[error("cannot write lexicon: {0}")]
    Io(#[from] std::io::Error),
}

impl From<PersistError> for ServiceError {
    fn from(e: PersistError) -> Self {
        match e {
            PersistError::ValidationFailed(r) => ServiceError::ValidationFailed(r),
            other => ServiceError::Persist(other),
        }
    }
}

impl ServiceError {
    /// Stable name used in error bodies.
    pub fn name(&self) -> &'static str {
        match self {
            ServiceError::AuthFailed => "AuthFailed",
            ServiceError::Unauthorized(_) => "Unauthorized",
            ServiceError::Forbidden(_) => "Forbidden",
            ServiceError::NotFound(_) => "NotFound",
            ServiceError::BadFilter(_) => "BadFilter",
            ServiceError::BadPath(_) => "BadPath",
            ServiceError::BadFormat(_) => "BadFormat",
            ServiceError::BadRequest(_) => "BadRequest",
            ServiceError::Persist(PersistError::DuplicateKey(_)) => "DuplicateKey",
            ServiceError::Persist(_) => "ParseError",
            ServiceError::ValidationFailed(_) => "ValidationFailed",
            ServiceError::Anaphora(AnaphoraError::UnknownWord { .. }) => "UnknownWord",
            ServiceError::Anaphora(AnaphoraError::NoRelation { .. }) => "NoRelation",
            ServiceError::Anaphora(AnaphoraError::BadTemplate(_)) => "BadTemplate",
            ServiceError::Anaphora(AnaphoraError::Hierarchy(_)) => "HierarchyError",
            ServiceError::Conflict(_) => "Conflict",
            ServiceError::Io(_) => "IoError",
        }
    }
}

pub type Result<T, E = ServiceError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnaphoraRequest {
    pub head: String,
    pub modifier: String,
    pub template: String,
    #[serde(default)]
    pub possessor_number: Number,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportSummary {
    pub entries: usize,
    pub types: usize,
}

/// Content hash used for compare-and-set; hex SHA-256 of the entry's JSON.
pub fn entry_hash(e: &LexicalEntry) -> String {
    let json = serde_json::to_vec(e).expect("entries always serialize");
    hex::encode(Sha256::digest(json))
}

#[derive(Debug)]
pub struct LexiconService {
    store: RwLock<Arc<Lexicon>>,
    writer: Mutex<()>,
    auth: Authenticator,
    auth_required: bool,
    containment: ContainmentSet,
    flush_to: Option<PathBuf>,
}

impl LexiconService {
    /// Loads `config.lexicon_path` (LDIF); mutations are written back there.
    pub fn open(config: &ServerConfig) -> Result<Self> {
        let text = std::fs::read_to_string(&config.lexicon_path)?;
        let lex = Format::Ldif.import(&text, &config.containment())?;
        let mut service = Self::with_lexicon(config, lex);
        service.flush_to = Some(config.lexicon_path.clone());
        Ok(service)
    }

    /// Serves `lexicon` from memory only; `config.lexicon_path` is ignored.
    pub fn with_lexicon(config: &ServerConfig, lexicon: Lexicon) -> Self {
        LexiconService {
            store: RwLock::new(Arc::new(lexicon)),
            writer: Mutex::new(()),
            auth: Authenticator::new(&config.users, Duration::from_secs(config.session_ttl)),
            auth_required: config.auth_required,
            containment: config.containment(),
            flush_to: None,
        }
    }

    pub fn snapshot(&self) -> Arc<Lexicon> {
        self.store.read().unwrap().clone()
    }

    pub fn containment(&self) -> &ContainmentSet {
        &self.containment
    }

    /// Role of the caller presenting `token`.
    pub fn authorize(&self, token: Option<&str>) -> Result<Role> {
        match token {
            Some(t) => self
                .auth
                .session(t)
                .map(|s| s.role)
                .ok_or(ServiceError::Unauthorized("invalid or expired session")),
            None if self.auth_required => Err(ServiceError::Unauthorized("missing bearer token")),
            None => Ok(Role::Reader),
        }
    }

    fn require_editor(&self, token: Option<&str>) -> Result<()> {
        match self.authorize(token)? {
            Role::Editor => Ok(()),
            role => Err(ServiceError::Forbidden(role)),
        }
    }

    pub fn bind(&self, username: &str, password: &str) -> Result<Session> {
        self.auth
            .bind(username, password)
            .ok_or(ServiceError::AuthFailed)
    }

    pub fn search(&self, token: Option<&str>, filter: &str) -> Result<Vec<EntryKey>> {
        self.authorize(token)?;
        Ok(search_str(&self.snapshot(), filter)?)
    }

    pub fn fetch(&self, token: Option<&str>, key: &EntryKey) -> Result<LexicalEntry> {
        self.authorize(token)?;
        self.snapshot()
            .get(key)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(key.clone()))
    }

    pub fn feature(&self, token: Option<&str>, key: &EntryKey, path: &str) -> Result<Vec<String>> {
        let entry = self.fetch(token, key)?;
        Ok(feature_at_path(&entry, path)?)
    }

    /// Inserts or replaces the entry at `key`. With `if_match`, the current
    /// entry's [`entry_hash`] must equal it.
    pub fn upsert(
        &self,
        token: Option<&str>,
        key: &EntryKey,
        entry: LexicalEntry,
        if_match: Option<&str>,
    ) -> Result<EntryKey> {
        self.require_editor(token)?;
        if entry.key() != *key {
            return Err(ServiceError::BadRequest(format!(
                "entry {} does not belong at {key}",
                entry.key()
            )));
        }
        self.write(|lex| {
            check_precondition(lex, key, if_match)?;
            lex.upsert(entry, &self.containment)
                .map_err(ServiceError::ValidationFailed)?;
            Ok(key.clone())
        })
    }

    pub fn remove(
        &self,
        token: Option<&str>,
        key: &EntryKey,
        if_match: Option<&str>,
    ) -> Result<()> {
        self.require_editor(token)?;
        self.write(|lex| {
            if !lex.contains_key(key) {
                return Err(ServiceError::NotFound(key.clone()));
            }
            check_precondition(lex, key, if_match)?;
            lex.remove(key);
            Ok(())
        })
    }

    pub fn export(&self, token: Option<&str>, format: &str) -> Result<String> {
        self.authorize(token)?;
        let format: Format = format.parse().map_err(ServiceError::BadFormat)?;
        Ok(format.export(&self.snapshot()))
    }

    /// Replaces the whole lexicon.
    pub fn import(
        &self,
        token: Option<&str>,
        format: &str,
        document: &str,
    ) -> Result<ImportSummary> {
        self.require_editor(token)?;
        let format: Format = format.parse().map_err(ServiceError::BadFormat)?;
        let next = format.import(document, &self.containment)?;
        let summary = ImportSummary {
            entries: next.len(),
            types: next.hierarchy().len(),
        };
        let _guard = self.writer.lock().unwrap();
        self.commit(next)?;
        Ok(summary)
    }

    pub fn validate_anaphora(
        &self,
        token: Option<&str>,
        req: &AnaphoraRequest,
    ) -> Result<AnaphoraVerdict> {
        self.authorize(token)?;
        Ok(generate_variants(
            &req.head,
            &req.modifier,
            &req.template,
            AnaphoraOptions {
                possessor_number: req.possessor_number,
            },
            &self.snapshot(),
            &self.containment,
        )?)
    }

    pub fn types(&self, token: Option<&str>) -> Result<TypeHierarchy> {
        self.authorize(token)?;
        Ok(self.snapshot().hierarchy().clone())
    }

    /// Writes the current lexicon to the backing file, if any.
    pub fn flush(&self) -> Result<()> {
        let _guard = self.writer.lock().unwrap();
        match &self.flush_to {
            Some(path) => Ok(write_atomically(
                path,
                &Format::Ldif.export(&self.snapshot()),
            )?),
            None => Ok(()),
        }
    }

    fn write<T>(&self, f: impl FnOnce(&mut Lexicon) -> Result<T>) -> Result<T> {
        let _guard = self.writer.lock().unwrap();
        let mut next = Lexicon::clone(&self.snapshot());
        let out = f(&mut next)?;
        self.commit(next)?;
        Ok(out)
    }

    /// Caller holds the writer lock.
    fn commit(&self, next: Lexicon) -> Result<()> {
        if let Some(path) = &self.flush_to {
            write_atomically(path, &Format::Ldif.export(&next))?;
        }
        *self.store.write().unwrap() = Arc::new(next);
        Ok(())
    }
}

fn check_precondition(lex: &Lexicon, key: &EntryKey, if_match: Option<&str>) -> Result<()> {
    let Some(expected) = if_match else {
        return Ok(());
    };
    match lex.get(key) {
        Some(current) if entry_hash(current) == expected => Ok(()),
        _ => Err(ServiceError::Conflict(key.clone())),
    }
}

fn write_atomically(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
