//! Line-oriented text serialization for decks and bundles.
//!
//! Deck files:
//!
//! ```text
//! deck m=3 n=4 mode=full
//! Bw 4
//! ```
//!
//! Bundle files carry the anchor before the pair-graph lines:
//!
//! ```text
//! bundle m=4 n=8
//! anchor CF
//! G?B~w 1
//! ```
//!
//! One `«graph6» «multiplicity»` line per canonical class, emitted in key
//! order so identical structures always serialize to identical bytes.

use thiserror::Error;

use crate::graph6;
use crate::recon::{AdjacentBundle, Deck, DeckMode};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TextError {
    #[error("line {line}: expected header `{expected} m=.. n=..`")]
    BadHeader { line: usize, expected: &'static str },
    #[error("line {line}: bad field `{field}`")]
    BadField { line: usize, field: String },
    #[error("line {line}: expected `<graph6> <multiplicity>`")]
    BadRecord { line: usize },
    #[error("line {line}: {source}")]
    BadGraph6 {
        line: usize,
        source: graph6::Graph6Error,
    },
    #[error("line {line}: graph has order {found}, expected {expected}")]
    WrongOrder {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("missing `anchor` line")]
    MissingAnchor,
}

fn parse_usize_field(line_no: usize, token: &str, key: &str) -> Result<usize, TextError> {
    token
        .strip_prefix(key)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| TextError::BadField {
            line: line_no,
            field: token.to_string(),
        })
}

fn parse_record(line_no: usize, line: &str, order: usize) -> Result<(crate::Graph, u64), TextError> {
    let mut parts = line.split_whitespace();
    let (Some(g6), Some(mult), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(TextError::BadRecord { line: line_no });
    };
    let graph = graph6::decode_str(g6).map_err(|source| TextError::BadGraph6 {
        line: line_no,
        source,
    })?;
    if graph.order() != order {
        return Err(TextError::WrongOrder {
            line: line_no,
            expected: order,
            found: graph.order(),
        });
    }
    let mult: u64 = mult.parse().map_err(|_| TextError::BadRecord { line: line_no })?;
    Ok((graph, mult))
}

impl Deck {
    pub fn to_text(&self) -> String {
        let mode = match self.mode() {
            DeckMode::Full => "full",
            DeckMode::Sampled => "sampled",
        };
        let mut out = format!(
            "deck m={} n={} mode={}\n",
            self.subgraph_order(),
            self.host_order(),
            mode
        );
        for (key, mult) in self.entries() {
            out.push_str(&graph6::encode(&key.to_graph()));
            out.push(' ');
            out.push_str(&mult.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Deck, TextError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(TextError::BadHeader {
            line: 1,
            expected: "deck",
        })?;
        let mut tokens = header.split_whitespace();
        if tokens.next() != Some("deck") {
            return Err(TextError::BadHeader {
                line: 1,
                expected: "deck",
            });
        }
        let m = parse_usize_field(1, tokens.next().unwrap_or(""), "m=")?;
        let n = parse_usize_field(1, tokens.next().unwrap_or(""), "n=")?;
        let mode = match tokens.next() {
            Some("mode=full") => DeckMode::Full,
            Some("mode=sampled") => DeckMode::Sampled,
            other => {
                return Err(TextError::BadField {
                    line: 1,
                    field: other.unwrap_or("").to_string(),
                })
            }
        };
        let mut entries = std::collections::BTreeMap::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (graph, mult) = parse_record(idx + 1, line, m)?;
            let key = crate::iso::canonical_pair(&graph).1;
            *entries.entry(key).or_insert(0) += mult;
        }
        Ok(Deck::from_parts(m, n, mode, entries))
    }
}

impl AdjacentBundle {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "bundle m={} n={}\n",
            self.anchor().order(),
            self.total_order()
        );
        out.push_str("anchor ");
        out.push_str(&graph6::encode(self.anchor()));
        out.push('\n');
        for (_, graph, mult) in self.pair_graphs() {
            out.push_str(&graph6::encode(graph));
            out.push(' ');
            out.push_str(&mult.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<AdjacentBundle, TextError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(TextError::BadHeader {
            line: 1,
            expected: "bundle",
        })?;
        let mut tokens = header.split_whitespace();
        if tokens.next() != Some("bundle") {
            return Err(TextError::BadHeader {
                line: 1,
                expected: "bundle",
            });
        }
        let m = parse_usize_field(1, tokens.next().unwrap_or(""), "m=")?;
        let n = parse_usize_field(1, tokens.next().unwrap_or(""), "n=")?;

        let (_, anchor_line) = lines.next().ok_or(TextError::MissingAnchor)?;
        let anchor_g6 = anchor_line
            .strip_prefix("anchor ")
            .ok_or(TextError::MissingAnchor)?;
        let anchor = graph6::decode_str(anchor_g6).map_err(|source| TextError::BadGraph6 {
            line: 2,
            source,
        })?;
        if anchor.order() != m {
            return Err(TextError::WrongOrder {
                line: 2,
                expected: m,
                found: anchor.order(),
            });
        }

        let mut pairs = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            pairs.push(parse_record(idx + 1, line, m + 2)?);
        }
        Ok(AdjacentBundle::from_parts(anchor, n, pairs))
    }
}
