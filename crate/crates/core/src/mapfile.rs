//! Text and JSON encodings of vertex maps (profiles and derangements).
//!
//! Text: one line `v w` per vertex meaning `f(v) = w`, with `v` ascending
//! from 0 and every vertex present exactly once. JSON: `{"map": [...]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDocument {
    pub map: Vec<usize>,
}

pub fn map_to_text(map: &[usize]) -> String {
    map.iter()
        .enumerate()
        .map(|(v, w)| format!("{v} {w}\n"))
        .collect()
}

/// Parses the text encoding for a graph on `n` vertices. Range and
/// ordering are checked here; admissibility is up to the caller.
pub fn parse_map_text(text: &str, n: usize) -> Result<Vec<usize>> {
    let mut map = Vec::with_capacity(n);
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        let toks: Vec<&str> = body.split_whitespace().collect();
        let [v, w] = toks.as_slice() else {
            return Err(err(format!("expected \"v w\", got {body:?}")));
        };
        let v: usize = v.parse().map_err(|_| err(format!("bad vertex {v:?}")))?;
        let w: usize = w.parse().map_err(|_| err(format!("bad vertex {w:?}")))?;
        if v != map.len() {
            return Err(err(format!("expected vertex {} next, got {v}", map.len())));
        }
        if v >= n || w >= n {
            return Err(err(format!("vertex out of range for n={n}")));
        }
        map.push(w);
    }
    if map.len() != n {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("expected {n} vertices, found {}", map.len()),
        });
    }
    Ok(map)
}
