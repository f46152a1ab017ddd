use std::collections::BTreeMap;
use std::fmt::{Display, Write as _};
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::{Error, Result};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// Every input of a run: configuration values, seeds, worker layout and
/// hashes of input files. The config hash covers everything except the
/// timestamp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub command: String,
    entries: BTreeMap<String, String>,
    artifacts: BTreeMap<String, String>,
    pub created_unix: u64,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            entries: BTreeMap::new(),
            artifacts: BTreeMap::new(),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.entries.insert(key.to_string(), value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Records the SHA-256 of an input file's contents.
    pub fn add_artifact(&mut self, name: &str, contents: &[u8]) -> &mut Self {
        self.artifacts
            .insert(name.to_string(), sha256_hex(contents));
        self
    }

    fn body(&self) -> String {
        let mut out = format!("command = {}\n", self.command);
        for (k, v) in &self.entries {
            let _ = writeln!(out, "config.{k} = {v}");
        }
        for (k, v) in &self.artifacts {
            let _ = writeln!(out, "artifact.{k} = sha256:{v}");
        }
        out
    }

    pub fn config_hash(&self) -> String {
        sha256_hex(self.body().as_bytes())
    }

    pub fn to_text(&self) -> String {
        format!(
            "# smnuc run manifest\n{}created_unix = {}\nconfig_hash = {}\n",
            self.body(),
            self.created_unix,
            self.config_hash()
        )
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut m = RunManifest::new("");
        for (i, line) in text.lines().enumerate() {
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let (k, v) = line.split_once(" = ").ok_or(Error::Parse {
                line: i + 1,
                msg: "expected `key = value`".into(),
            })?;
            if k == "command" {
                m.command = v.to_string();
            } else if k == "created_unix" {
                m.created_unix = v.parse().map_err(|_| Error::Parse {
                    line: i + 1,
                    msg: "bad timestamp".into(),
                })?;
            } else if let Some(key) = k.strip_prefix("config.") {
                m.entries.insert(key.to_string(), v.to_string());
            } else if let Some(key) = k.strip_prefix("artifact.") {
                m.artifacts
                    .insert(key.to_string(), v.trim_start_matches("sha256:").to_string());
            }
        }
        Ok(m)
    }
}
