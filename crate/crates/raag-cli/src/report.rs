use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Proved,
    Refuted,
    Inconclusive,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::Refuted => "refuted",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub name: String,
    pub status: Status,
    pub witness: Value,
    pub truncation: Value,
}

/// The JSON document printed for every command.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    digest: Sha256,
    pub truncation: Map<String, Value>,
    pub results: Map<String, Value>,
    pub certificates: Vec<Certificate>,
}

impl RunReport {
    pub fn new(command: &str, args: &[String]) -> Self {
        let mut digest = Sha256::new();
        for a in args {
            digest.update(a.as_bytes());
            digest.update([0]);
        }
        RunReport { command: command.to_string(), digest, truncation: Map::new(), results: Map::new(), certificates: Vec::new() }
    }

    /// Mixes the contents of an input file into the digest.
    pub fn input(&mut self, bytes: &[u8]) {
        self.digest.update((bytes.len() as u64).to_le_bytes());
        self.digest.update(bytes);
    }

    pub fn truncate(&mut self, key: &str, value: impl Into<Value>) {
        self.truncation.insert(key.to_string(), value.into());
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    /// A yes/no predicate: proved when `holds`, refuted with the witness otherwise.
    pub fn verdict(&mut self, name: &str, holds: bool, witness: Value) {
        let status = if holds { Status::Proved } else { Status::Refuted };
        self.certify(name, status, witness, Value::Null);
    }

    pub fn certify(&mut self, name: &str, status: Status, witness: Value, truncation: Value) {
        let truncation = if status == Status::Inconclusive && truncation.is_null() {
            Value::Object(self.truncation.clone())
        } else {
            truncation
        };
        self.certificates.push(Certificate { name: name.to_string(), status, witness, truncation });
    }

    pub fn exit_code(&self) -> i32 {
        if self.certificates.iter().any(|c| c.status == Status::Inconclusive) {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        let certs: Vec<Value> = self
            .certificates
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("name".into(), json!(c.name));
                m.insert("status".into(), json!(c.status.as_str()));
                if !c.witness.is_null() {
                    m.insert("witness".into(), c.witness.clone());
                }
                if !c.truncation.is_null() {
                    m.insert("truncation".into(), c.truncation.clone());
                }
                Value::Object(m)
            })
            .collect();
        json!({
            "command": self.command,
            "inputs_digest": format!("{:x}", self.digest.clone().finalize()),
            "truncation": self.truncation,
            "results": self.results,
            "certificates": certs,
        })
    }
}
