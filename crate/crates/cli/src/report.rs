//! Report envelope and deterministic writers. Every report embeds the tool
//! version, the full command configuration, and the master seed, so a run
//! can be reproduced from its output alone.

use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Envelope<C: Serialize, B: Serialize> {
    pub tool_version: &'static str,
    pub command: &'static str,
    pub config: C,
    #[serde(flatten)]
    pub body: B,
}

pub fn envelope<C: Serialize, B: Serialize>(
    command: &'static str,
    config: C,
    body: B,
) -> Envelope<C, B> {
    Envelope {
        tool_version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        body,
    }
}

/// Serializes to pretty JSON with a trailing newline; byte-identical for
/// identical inputs.
pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(format!("{}\n", serde_json::to_string_pretty(value)?))
}

pub fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    let mut f =
        std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    f.write_all(contents.as_bytes())
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}
