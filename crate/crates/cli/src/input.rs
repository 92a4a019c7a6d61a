//! Reading command arguments: text or JSON, inline, from `@file`, or `-` for
//! standard input.

use std::io::Read;

use ftrees_core::boundary::PairTruncation;
use ftrees_core::{DiagonalProjection, Error, GeneratorWord, GroupElement};

pub type CliResult<T> = Result<T, String>;

pub fn resolve(arg: &str) -> CliResult<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("reading stdin: {e}"))?;
        return Ok(s);
    }
    if let Some(path) = arg.strip_prefix('@') {
        return std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"));
    }
    Ok(arg.to_string())
}

fn err(e: Error) -> String {
    e.to_string()
}

/// `a:b + ...`, `{"terms": ...}`, or a word in the generators (`x0 x1^-1`).
pub fn element(arg: &str) -> CliResult<GroupElement> {
    let s = resolve(arg)?;
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| format!("invalid element JSON: {e}"));
    }
    if s.contains(':') {
        return s.parse().map_err(err);
    }
    let word: GeneratorWord = s.parse().map_err(|_| format!("cannot parse element {s:?}"))?;
    Ok(word.evaluate())
}

/// `0`, `1`, `P[w]+...`, or the same as a JSON string.
pub fn projection(arg: &str) -> CliResult<DiagonalProjection> {
    let s = resolve(arg)?;
    let s = s.trim();
    if s.starts_with('"') {
        return serde_json::from_str(s).map_err(|e| format!("invalid projection JSON: {e}"));
    }
    s.parse().map_err(err)
}

pub fn pair(arg: &str) -> CliResult<PairTruncation> {
    let s = resolve(arg)?;
    serde_json::from_str(s.trim()).map_err(|e| format!("invalid pair JSON: {e}"))
}

pub fn generator_word(arg: &str) -> CliResult<GeneratorWord> {
    resolve(arg)?.parse().map_err(err)
}
