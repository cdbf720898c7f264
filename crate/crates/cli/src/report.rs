use nbldpc::FieldSpec;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::time::Instant;

pub const SCHEMA: &str = "nbldpc-report/1";

/// Provenance embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub field: Option<FieldSpec>,
    pub seed: Option<u64>,
    pub rng: Option<&'static str>,
    pub version: &'static str,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(name: &str, text: &str) -> Self {
        let sha256 = Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        InputDigest {
            name: name.to_string(),
            sha256,
        }
    }
}

pub struct Run {
    started: Instant,
    pub manifest: RunManifest,
}

impl Run {
    pub fn start(command: &str) -> Self {
        Run {
            started: Instant::now(),
            manifest: RunManifest {
                command: command.to_string(),
                inputs: Vec::new(),
                field: None,
                seed: None,
                rng: None,
                version: env!("CARGO_PKG_VERSION"),
                elapsed_ms: 0,
            },
        }
    }

    /// Renders the report as text (manifest as `#` header lines) or JSON.
    pub fn finish(mut self, json: bool, text: String, body: Value) -> String {
        self.manifest.elapsed_ms = self.started.elapsed().as_millis();
        if json {
            let doc = json!({
                "schema": SCHEMA,
                "manifest": self.manifest,
                "report": body,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("report serialises");
            s.push('\n');
            return s;
        }
        let m = &self.manifest;
        let mut out = format!("# nbldpc {} {}\n", m.version, m.command);
        for i in &m.inputs {
            out.push_str(&format!("# input {} sha256:{}\n", i.name, i.sha256));
        }
        if let Some(f) = m.field {
            out.push_str(&format!(
                "# field GF(2^{}) primpoly {:#x}\n",
                f.m, f.prim_poly
            ));
        }
        if let (Some(seed), Some(rng)) = (m.seed, m.rng) {
            out.push_str(&format!("# seed {seed} ({rng})\n"));
        }
        out.push_str(&format!("# elapsed {} ms\n", m.elapsed_ms));
        out.push_str(&text);
        out
    }
}

/// `36x^8 + 96x^12 + 72x^16`
pub fn polynomial<'a>(terms: impl IntoIterator<Item = (&'a usize, &'a usize)>) -> String {
    let parts: Vec<String> = terms
        .into_iter()
        .map(|(l, n)| format!("{n}x^{l}"))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
