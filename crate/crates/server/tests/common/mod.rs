#![allow(dead_code)]

use std::sync::Arc;

use glex_core::seed;
use glex_server::{hash_password, spawn, LexiconService, Role, ServerConfig, ServerHandle, User};
use reqwest::blocking::{Client, RequestBuilder, Response};
use reqwest::Method;

pub const EDITOR: (&str, &str) = ("ana", "editor-pw");
pub const READER: (&str, &str) = ("rui", "reader-pw");

pub fn config(auth_required: bool) -> ServerConfig {
    let mut c = ServerConfig::new("unused.ldif");
    c.auth_required = auth_required;
    c.users = vec![
        User {
            username: EDITOR.0.into(),
            password_hash: hash_password("s1", EDITOR.1),
            role: Role::Editor,
        },
        User {
            username: READER.0.into(),
            password_hash: hash_password("s2", READER.1),
            role: Role::Reader,
        },
    ];
    c
}

pub fn start(config: &ServerConfig) -> ServerHandle {
    let service = Arc::new(LexiconService::with_lexicon(config, seed::lexicon()));
    spawn(service, "127.0.0.1:0".parse().unwrap(), None).unwrap()
}

pub struct Api {
    pub base: String,
    pub client: Client,
}

impl Api {
    pub fn new(server: &ServerHandle) -> Self {
        Api {
            base: server.url(),
            client: Client::new(),
        }
    }

    pub fn login(&self, (user, password): (&str, &str)) -> String {
        let r = self
            .client
            .post(format!("{}/session", self.base))
            .json(&serde_json::json!({ "username": user, "password": password }))
            .send()
            .unwrap();
        assert_eq!(r.status(), 200);
        r.json::<serde_json::Value>().unwrap()["token"]
            .as_str()
            .unwrap()
            .to_string()
    }

    pub fn req(&self, method: Method, path: &str, token: Option<&str>) -> RequestBuilder {
        let b = self
            .client
            .request(method, format!("{}{}", self.base, path));
        match token {
            Some(t) => b.bearer_auth(t),
            None => b,
        }
    }

    pub fn get(&self, path: &str, token: Option<&str>) -> Response {
        self.req(Method::GET, path, token).send().unwrap()
    }
}
