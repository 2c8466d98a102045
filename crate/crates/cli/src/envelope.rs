//! The certificate envelope: `{kind, manifest, payload, digest}`.
//!
//! The digest is SHA-256 over the canonical JSON of the envelope without the
//! digest itself and without the manifest's wall time, so reruns of the same
//! command produce the same digest.

use std::collections::BTreeMap;

use kottsep_core::Budgets;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Kottman,
    Sumfree,
    Gaussian,
    Witness,
    Free,
    Extend,
    Grid,
    Auerbach,
    Separate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: Vec<String>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub config_digest: String,
    pub budgets: Budgets,
    pub versions: BTreeMap<String, String>,
    /// Excluded from the digest.
    pub wall_time_ms: u64,
}

impl Manifest {
    pub fn versions() -> BTreeMap<String, String> {
        BTreeMap::from([
            ("kottsep-cli".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("format".to_string(), "1".to_string()),
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub kind: Kind,
    pub manifest: Manifest,
    pub payload: Value,
    pub digest: String,
}

impl Envelope {
    pub fn seal(kind: Kind, manifest: Manifest, payload: Value) -> Self {
        let mut e = Self { kind, manifest, payload, digest: String::new() };
        e.digest = e.compute_digest();
        e
    }

    pub fn compute_digest(&self) -> String {
        let mut v = serde_json::to_value(self).expect("envelope serializes");
        let obj = v.as_object_mut().expect("object");
        obj.remove("digest");
        if let Some(m) = obj.get_mut("manifest").and_then(Value::as_object_mut) {
            m.remove("wall_time_ms");
        }
        // serde_json maps are ordered by key, so this string is canonical
        hex::encode(Sha256::digest(v.to_string().as_bytes()))
    }

    pub fn digest_matches(&self) -> bool {
        self.digest == self.compute_digest()
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest(ms: u64) -> Manifest {
        Manifest {
            command: vec!["grid".into(), "3".into()],
            seed: 0,
            threads: None,
            config_digest: "x".into(),
            budgets: Budgets::default(),
            versions: Manifest::versions(),
            wall_time_ms: ms,
        }
    }

    #[test]
    fn digest_ignores_wall_time_only() {
        let a = Envelope::seal(Kind::Grid, manifest(1), serde_json::json!({"n": 3}));
        let b = Envelope::seal(Kind::Grid, manifest(999), serde_json::json!({"n": 3}));
        assert_eq!(a.digest, b.digest);
        let mut c = a.clone();
        c.payload = serde_json::json!({"n": 4});
        assert!(!c.digest_matches());
        let back: Envelope = serde_json::from_str(&a.to_pretty()).unwrap();
        assert!(back.digest_matches());
    }
}
