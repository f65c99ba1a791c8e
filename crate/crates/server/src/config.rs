//! TOML server configuration.

use std::collections::BTreeSet;
use std::fmt;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use glex_core::ContainmentSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Reader,
    Editor,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Reader => "reader",
            Role::Editor => "editor",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct User {
    pub username: String,
    /// `sha256$<salt>$<hex digest of salt || password>`
    pub password_hash: String,
    pub role: Role,
}

fn default_listen() -> SocketAddr {
    SocketAddr::from(([127, 0, 0, 1], 7878))
}

fn default_true() -> bool {
    true
}

fn default_containment() -> BTreeSet<String> {
    ["contain".to_string()].into()
}

fn default_ttl() -> u64 {
    3600
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServerConfig {
    #[serde(default = "default_listen")]
    pub listen: SocketAddr,
    #[serde(default)]
    pub users: Vec<User>,
    #[serde(default = "default_true")]
    pub auth_required: bool,
    #[serde(default = "default_containment")]
    pub containment_predicates: BTreeSet<String>,
    /// LDIF file loaded at startup and rewritten after every mutation.
    pub lexicon_path: PathBuf,
    /// Seconds.
    #[serde(default = "default_ttl")]
    pub session_ttl: u64,
    /// Static editor assets served under `/ui`.
    #[serde(default)]
    pub ui_dir: Option<PathBuf>,
}

impl ServerConfig {
    pub fn new(lexicon_path: impl Into<PathBuf>) -> Self {
        ServerConfig {
            listen: default_listen(),
            users: Vec::new(),
            auth_required: true,
            containment_predicates: default_containment(),
            lexicon_path: lexicon_path.into(),
            session_ttl: default_ttl(),
            ui_dir: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        text.parse()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut seen = BTreeSet::new();
        for u in &self.users {
            if !seen.insert(u.username.as_str()) {
                return Err(ConfigError::Invalid(format!(
                    "duplicate user `{}`",
                    u.username
                )));
            }
            if crate::auth::PasswordHash::parse(&u.password_hash).is_none() {
                return Err(ConfigError::Invalid(format!(
                    "user `{}`: password_hash must look like sha256$<salt>$<64 hex digits>",
                    u.username
                )));
            }
        }
        if self.containment_predicates.is_empty() {
            return Err(ConfigError::Invalid(
                "containment_predicates is empty".into(),
            ));
        }
        Ok(())
    }

    pub fn containment(&self) -> ContainmentSet {
        ContainmentSet::new(self.containment_predicates.iter())
    }
}

impl FromStr for ServerConfig {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let config: ServerConfig = toml::from_str(s)?;
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HASH: &str =
        "sha256$pepper$0000000000000000000000000000000000000000000000000000000000000000";

    #[test]
    fn parses_with_defaults() {
        let c: ServerConfig = "lexicon_path = \"lex.ldif\"".parse().unwrap();
        assert!(c.auth_required);
        assert_eq!(c.session_ttl, 3600);
        assert!(c.containment().contains("contain"));
        assert!(c.users.is_empty());
    }

    #[test]
    fn full_config() {
        let c: ServerConfig = format!(
            r#"
listen = "0.0.0.0:9000"
auth_required = false
containment_predicates = ["contain", "hold"]
lexicon_path = "/tmp/x.ldif"
session_ttl = 60

[[users]]
username = "ana"
password_hash = "{HASH}"
role = "editor"
"#
        )
        .parse()
        .unwrap();
        assert_eq!(c.listen.port(), 9000);
        assert_eq!(c.users[0].role, Role::Editor);
        assert!(c.containment().contains("hold"));
    }

    #[test]
    fn rejects_bad_configs() {
        let dup = format!(
            "lexicon_path = \"a\"\n[[users]]\nusername = \"a\"\npassword_hash = \"{HASH}\"\nrole = \"reader\"\n[[users]]\nusername = \"a\"\npassword_hash = \"{HASH}\"\nrole = \"editor\"\n"
        );
        for bad in [
            "",
            "lexicon_path = 3",
            "lexicon_path = \"a\"\ncolour = 1",
            "lexicon_path = \"a\"\n[[users]]\nusername = \"a\"\npassword_hash = \"plain\"\nrole = \"reader\"",
            "lexicon_path = \"a\"\n[[users]]\nusername = \"a\"\npassword_hash = \"x\"\nrole = \"admin\"",
            dup.as_str(),
        ] {
            assert!(bad.parse::<ServerConfig>().is_err(), "{bad}");
        }
    }
}
