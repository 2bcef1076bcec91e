//! The `.setsys` text format.
//!
//! ```text
//! # comment to end of line
//! universe a b c
//! set S = {a, b}
//! set T = {b c}
//! set E = {}
//! ```
//!
//! The first significant line names the universe; each `set` line adds one
//! member. Labels inside braces are separated by commas or whitespace. Set
//! names only feed diagnostics. LF and CRLF are accepted; LF is emitted.

use crate::error::{Error, Result};
use crate::sets::{bits, SetFamily, Universe, MAX_POINTS};

/// A parsed document together with its diagnostics.
#[derive(Debug, Clone)]
pub struct ParsedSystem {
    pub family: SetFamily,
    /// `(name, line)` for every `set` line, in document order.
    pub set_names: Vec<(String, usize)>,
    pub warnings: Vec<String>,
}

fn is_label(token: &str) -> bool {
    !token.is_empty()
        && token
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses a document into a canonical family, discarding diagnostics.
pub fn parse_set_system(text: &str) -> Result<SetFamily> {
    parse_with_diagnostics(text).map(|p| p.family)
}

pub fn parse_with_diagnostics(text: &str) -> Result<ParsedSystem> {
    let mut universe: Option<Universe> = None;
    let mut masks: Vec<u64> = Vec::new();
    let mut set_names: Vec<(String, usize)> = Vec::new();
    let mut warnings = Vec::new();

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let keyword = content.split_whitespace().next().unwrap_or_default();
        match (keyword, &universe) {
            ("universe", None) => {
                universe = Some(parse_universe_line(content, line_no)?);
            }
            ("universe", Some(_)) => {
                return Err(syntax(line_no, "second `universe` line"));
            }
            ("set", Some(u)) => {
                let (name, mask) = parse_set_line(content, line_no, u)?;
                if let Some((_, first)) = set_names.iter().find(|(n, _)| *n == name) {
                    warnings.push(format!(
                        "line {line_no}: set name `{name}` already used on line {first}"
                    ));
                }
                if let Some(pos) = masks.iter().position(|&m| m == mask) {
                    warnings.push(format!(
                        "line {line_no}: set `{name}` duplicates `{}` (line {}); collapsed",
                        set_names[pos].0, set_names[pos].1
                    ));
                }
                masks.push(mask);
                set_names.push((name, line_no));
            }
            ("set", None) => {
                return Err(syntax(line_no, "`set` line before the `universe` line"));
            }
            _ => {
                return Err(syntax(
                    line_no,
                    format!("expected `universe` or `set`, found `{keyword}`"),
                ));
            }
        }
    }

    let universe = universe.ok_or(Error::EmptyUniverse)?;
    let family = SetFamily::from_masks(universe, masks)?;
    Ok(ParsedSystem {
        family,
        set_names,
        warnings,
    })
}

fn parse_universe_line(content: &str, line: usize) -> Result<Universe> {
    let labels: Vec<&str> = content.split_whitespace().skip(1).collect();
    if labels.is_empty() {
        return Err(Error::EmptyUniverse);
    }
    if labels.len() > MAX_POINTS {
        return Err(Error::TooManyPoints {
            count: labels.len(),
            max: MAX_POINTS,
        });
    }
    for (i, label) in labels.iter().enumerate() {
        if !is_label(label) {
            return Err(syntax(line, format!("invalid label `{label}`")));
        }
        if labels[..i].contains(label) {
            return Err(Error::DuplicateLabel {
                line,
                label: (*label).to_string(),
            });
        }
    }
    Universe::new(labels)
}

fn parse_set_line(content: &str, line: usize, universe: &Universe) -> Result<(String, u64)> {
    let rest = content["set".len()..].trim_start();
    let (name, body) = rest
        .split_once('=')
        .ok_or_else(|| syntax(line, "expected `set <name> = { ... }`"))?;
    let name = name.trim();
    if !is_label(name) {
        return Err(syntax(line, format!("invalid set name `{name}`")));
    }
    let body = body.trim();
    let inner = body
        .strip_prefix('{')
        .and_then(|b| b.strip_suffix('}'))
        .ok_or_else(|| syntax(line, "set body must be enclosed in `{` and `}`"))?;
    if inner.contains(['{', '}']) {
        return Err(syntax(line, "nested braces in set body"));
    }
    let mut mask = 0u64;
    for token in inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        if !is_label(token) {
            return Err(syntax(line, format!("invalid label `{token}`")));
        }
        let i = universe.index_of(token).ok_or_else(|| Error::UnknownLabel {
            line,
            label: token.to_string(),
        })?;
        mask |= 1 << i;
    }
    Ok((name.to_string(), mask))
}

/// Emits the canonical document: members in ascending mask order, named
/// `s0`, `s1`, ...
pub fn serialize_set_system(family: &SetFamily) -> String {
    let u = family.universe();
    let mut out = format!("universe {}\n", u.labels().join(" "));
    for (i, &mask) in family.masks().iter().enumerate() {
        let labels: Vec<&str> = bits(mask).map(|p| u.label(p)).collect();
        out.push_str(&format!("set s{i} = {{{}}}\n", labels.join(", ")));
    }
    out
}
