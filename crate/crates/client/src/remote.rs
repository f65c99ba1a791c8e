//! HTTP side of [`crate::Connection`].

use glex_core::{
    AnaphoraError, AnaphoraVerdict, EntryKey, LexicalEntry, Number, PersistError, TypeHierarchy,
    ValidationReport,
};
use reqwest::blocking::{Client, RequestBuilder, Response};
use reqwest::Url;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::{ClientError, ImportSummary, Result};

#[derive(Debug, Clone, Deserialize)]
pub struct SessionInfo {
    pub token: String,
    pub user: String,
    pub role: String,
    pub expires: u64,
}

#[derive(Debug)]
pub struct Remote {
    base: Url,
    http: Client,
    session: Option<SessionInfo>,
}

#[derive(Debug, Deserialize)]
struct ErrorBody {
    error: String,
    detail: String,
    #[serde(flatten)]
    extra: serde_json::Map<String, Value>,
}

impl Remote {
    pub fn connect(address: &str, credentials: Option<(&str, &str)>) -> Result<Remote> {
        let connect_failed = |message: String| ClientError::ConnectFailed {
            address: address.to_string(),
            message,
        };
        let base = Url::parse(address).map_err(|e| connect_failed(e.to_string()))?;
        if base.cannot_be_a_base() {
            return Err(connect_failed("not a base URL".into()));
        }
        let mut remote = Remote {
            base,
            http: Client::new(),
            session: None,
        };
        match credentials {
            Some((username, password)) => {
                let r = remote
                    .request(reqwest::Method::POST, &["session"])
                    .json(&json!({ "username": username, "password": password }))
                    .send()
                    .map_err(|e| connect_failed(e.to_string()))?;
                if r.status() == 401 {
                    return Err(ClientError::AuthFailed);
                }
                remote.session = Some(decode(r, None)?);
            }
            None => {
                // Any HTTP answer proves the endpoint is there.
                remote
                    .request(reqwest::Method::GET, &["types"])
                    .send()
                    .map_err(|e| connect_failed(e.to_string()))?;
            }
        }
        Ok(remote)
    }

    pub fn session(&self) -> Option<&SessionInfo> {
        self.session.as_ref()
    }

    fn url(&self, segments: &[&str]) -> Url {
        let mut url = self.base.clone();
        url.path_segments_mut()
            .expect("checked at connect")
            .pop_if_empty()
            .extend(segments);
        url
    }

    fn request(&self, method: reqwest::Method, segments: &[&str]) -> RequestBuilder {
        let b = self.http.request(method, self.url(segments));
        match &self.session {
            Some(s) => b.bearer_auth(&s.token),
            None => b,
        }
    }

    fn send(&self, b: RequestBuilder) -> Result<Response> {
        b.send().map_err(|e| ClientError::ConnectFailed {
            address: self.base.to_string(),
            message: e.to_string(),
        })
    }

    fn get_with_query(&self, segments: &[&str], key: &str, value: &str) -> RequestBuilder {
        let mut url = self.url(segments);
        url.query_pairs_mut().append_pair(key, value);
        let b = self.http.get(url);
        match &self.session {
            Some(s) => b.bearer_auth(&s.token),
            None => b,
        }
    }

    pub fn search(&self, filter: &str) -> Result<Vec<EntryKey>> {
        decode(
            self.send(self.get_with_query(&["entries"], "filter", filter))?,
            None,
        )
    }

    pub fn fetch(&self, key: &EntryKey) -> Result<LexicalEntry> {
        let sense = key.sense.to_string();
        let r = self.send(self.request(reqwest::Method::GET, &["entries", &key.lemma, &sense]))?;
        decode(r, Some(key))
    }

    pub fn feature(&self, key: &EntryKey, path: &str) -> Result<Vec<String>> {
        let sense = key.sense.to_string();
        let r = self.send(self.request(
            reqwest::Method::GET,
            &["entries", &key.lemma, &sense, "features", path],
        ))?;
        decode(r, Some(key))
    }

    pub fn export(&self, format: &str) -> Result<String> {
        let r = self.send(self.get_with_query(&["lexicon", "export"], "format", format))?;
        let r = check(r, None)?;
        r.text().map_err(|e| ClientError::Server {
            status: 200,
            error: "BadBody".into(),
            detail: e.to_string(),
        })
    }

    pub fn import(&self, format: &str, document: &str) -> Result<ImportSummary> {
        let mut url = self.url(&["lexicon", "import"]);
        url.query_pairs_mut().append_pair("format", format);
        let mut b = self.http.post(url).body(document.to_string());
        if let Some(s) = &self.session {
            b = b.bearer_auth(&s.token);
        }
        decode(self.send(b)?, None)
    }

    pub fn validate_anaphora(
        &self,
        head: &str,
        modifier: &str,
        template: &str,
        possessor_number: Number,
    ) -> Result<AnaphoraVerdict> {
        let b = self
            .request(reqwest::Method::POST, &["anaphora", "validate"])
            .json(&json!({
                "head": head,
                "modifier": modifier,
                "template": template,
                "possessor_number": possessor_number,
            }));
        decode(self.send(b)?, None)
    }

    pub fn types(&self) -> Result<TypeHierarchy> {
        decode(
            self.send(self.request(reqwest::Method::GET, &["types"]))?,
            None,
        )
    }
}

fn decode<T: DeserializeOwned>(r: Response, key: Option<&EntryKey>) -> Result<T> {
    let r = check(r, key)?;
    let status = r.status().as_u16();
    r.json().map_err(|e| ClientError::Server {
        status,
        error: "BadBody".into(),
        detail: e.to_string(),
    })
}

/// Maps an error response back onto the error the local mode would raise.
fn check(r: Response, key: Option<&EntryKey>) -> Result<Response> {
    let status = r.status();
    if status.is_success() {
        return Ok(r);
    }
    let status = status.as_u16();
    let body: ErrorBody = match r.json() {
        Ok(b) => b,
        Err(e) => {
            return Err(ClientError::Server {
                status,
                error: "BadBody".into(),
                detail: e.to_string(),
            })
        }
    };
    fn field<T: DeserializeOwned>(body: &ErrorBody, name: &str) -> serde_json::Result<T> {
        serde_json::from_value(body.extra.get(name).cloned().unwrap_or(Value::Null))
    }
    let err = match body.error.as_str() {
        "AuthFailed" => Some(ClientError::AuthFailed),
        "Unauthorized" => Some(ClientError::Unauthorized(body.detail.clone())),
        "Forbidden" => Some(ClientError::Forbidden(body.detail.clone())),
        "NotFound" => key.map(|k| ClientError::NotFound(k.clone())),
        "BadFilter" => Some(ClientError::BadFilter(body.detail.clone())),
        "BadPath" => Some(ClientError::BadPath(body.detail.clone())),
        "BadFormat" => Some(ClientError::BadFormat(body.detail.clone())),
        "ParseError" => match (field(&body, "line"), field(&body, "message")) {
            (Ok(line), Ok(message)) => Some(PersistError::Parse { line, message }.into()),
            _ => None,
        },
        "DuplicateKey" => field(&body, "key")
            .ok()
            .map(|k| PersistError::DuplicateKey(k).into()),
        "ValidationFailed" => field(&body, "report")
            .ok()
            .map(|r: ValidationReport| PersistError::ValidationFailed(r).into()),
        "UnknownWord" => match (field(&body, "surface"), field(&body, "tried")) {
            (Ok(surface), Ok(tried)) => Some(AnaphoraError::UnknownWord { surface, tried }.into()),
            _ => None,
        },
        "NoRelation" => match (
            field(&body, "head"),
            field(&body, "modifier"),
            field(&body, "reasons"),
        ) {
            (Ok(head), Ok(modifier), Ok(reasons)) => Some(
                AnaphoraError::NoRelation {
                    head,
                    modifier,
                    reasons,
                }
                .into(),
            ),
            _ => None,
        },
        "BadTemplate" => field(&body, "placeholders")
            .ok()
            .map(|n| AnaphoraError::BadTemplate(n).into()),
        _ => None,
    };
    Err(err.unwrap_or(ClientError::Server {
        status,
        error: body.error,
        detail: body.detail,
    }))
}
