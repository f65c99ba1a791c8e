//! Password verification and in-memory sessions.

use std::collections::HashMap;
use std::sync::Mutex;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use rand::RngCore;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use subtle::ConstantTimeEq;

use crate::config::{Role, User};

const SCHEME: &str = "sha256";

/// Parsed `sha256$<salt>$<hex>` hash.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PasswordHash {
    salt: String,
    digest: [u8; 32],
}

impl PasswordHash {
    pub fn parse(s: &str) -> Option<PasswordHash> {
        let mut parts = s.splitn(3, '$');
        if parts.next()? != SCHEME {
            return None;
        }
        let salt = parts.next()?;
        let digest = hex::decode(parts.next()?).ok()?.try_into().ok()?;
        if salt.contains('$') {
            return None;
        }
        Some(PasswordHash {
            salt: salt.to_string(),
            digest,
        })
    }

    pub fn verify(&self, password: &str) -> bool {
        digest(&self.salt, password).ct_eq(&self.digest).into()
    }
}

fn digest(salt: &str, password: &str) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(salt.as_bytes());
    h.update(password.as_bytes());
    h.finalize().into()
}

/// Renders a config `password_hash` value.
pub fn hash_password(salt: &str, password: &str) -> String {
    format!("{SCHEME}${salt}${}", hex::encode(digest(salt, password)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    /// 32 hex characters.
    pub token: String,
    pub user: String,
    pub role: Role,
    /// Unix seconds.
    pub expires: u64,
}

impl Session {
    pub fn is_expired(&self, now: SystemTime) -> bool {
        unix(now) >= self.expires
    }
}

fn unix(t: SystemTime) -> u64 {
    t.duration_since(UNIX_EPOCH).unwrap_or_default().as_secs()
}

#[derive(Debug)]
pub(crate) struct Authenticator {
    users: HashMap<String, (PasswordHash, Role)>,
    ttl: Duration,
    sessions: Mutex<HashMap<String, Session>>,
    dummy: PasswordHash,
}

impl Authenticator {
    pub fn new(users: &[User], ttl: Duration) -> Self {
        let users = users
            .iter()
            .filter_map(|u| {
                Some((
                    u.username.clone(),
                    (PasswordHash::parse(&u.password_hash)?, u.role),
                ))
            })
            .collect();
        Authenticator {
            users,
            ttl,
            sessions: Mutex::new(HashMap::new()),
            dummy: PasswordHash::parse(&hash_password("-", "")).expect("well-formed"),
        }
    }

    /// `None` for a wrong password and for an unknown user alike.
    pub fn bind(&self, username: &str, password: &str) -> Option<Session> {
        let (hash, role) = match self.users.get(username) {
            Some((hash, role)) => (hash, Some(*role)),
            None => (&self.dummy, None),
        };
        let ok = hash.verify(password);
        let role = role.filter(|_| ok)?;
        let mut bytes = [0u8; 16];
        rand::rng().fill_bytes(&mut bytes);
        let session = Session {
            token: hex::encode(bytes),
            user: username.to_string(),
            role,
            expires: unix(SystemTime::now() + self.ttl),
        };
        let mut sessions = self.sessions.lock().unwrap();
        let now = SystemTime::now();
        sessions.retain(|_, s| !s.is_expired(now));
        sessions.insert(session.token.clone(), session.clone());
        Some(session)
    }

    /// The live session for `token`; expired sessions are dropped.
    pub fn session(&self, token: &str) -> Option<Session> {
        let mut sessions = self.sessions.lock().unwrap();
        match sessions.get(token) {
            Some(s) if s.is_expired(SystemTime::now()) => {
                sessions.remove(token);
                None
            }
            other => other.cloned(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_format_round_trips() {
        let h = hash_password("salt", "secret");
        assert!(h.starts_with("sha256$salt$"));
        assert_eq!(h.len(), "sha256$salt$".len() + 64);
        let parsed = PasswordHash::parse(&h).unwrap();
        assert!(parsed.verify("secret"));
        assert!(!parsed.verify("secreT"));
        assert!(PasswordHash::parse("md5$a$00").is_none());
        assert!(PasswordHash::parse("sha256$a$zz").is_none());
        assert!(PasswordHash::parse("sha256$a").is_none());
    }

    #[test]
    fn known_digest() {
        // printf 'abc' | sha256sum, split as salt "a" + password "bc".
        assert_eq!(
            hash_password("a", "bc"),
            "sha256$a$ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    fn auth(ttl: u64) -> Authenticator {
        let users = [User {
            username: "ana".into(),
            password_hash: hash_password("s", "pw"),
            role: Role::Editor,
        }];
        Authenticator::new(&users, Duration::from_secs(ttl))
    }

    #[test]
    fn bind_issues_tokens() {
        let a = auth(3600);
        let s = a.bind("ana", "pw").unwrap();
        assert_eq!(s.token.len(), 32);
        assert!(s.token.chars().all(|c| c.is_ascii_hexdigit()));
        let now = unix(SystemTime::now());
        assert!(s.expires >= now + 3599 && s.expires <= now + 3601);
        assert_eq!(a.session(&s.token).unwrap().role, Role::Editor);
        assert_ne!(a.bind("ana", "pw").unwrap().token, s.token);
        assert!(a.bind("ana", "nope").is_none());
        assert!(a.bind("bob", "pw").is_none());
    }

    #[test]
    fn expired_sessions_are_rejected() {
        let a = auth(0);
        let s = a.bind("ana", "pw").unwrap();
        assert!(a.session(&s.token).is_none());
    }
}
