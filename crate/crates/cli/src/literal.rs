//! Parser for algebra element literals used in module files and fixtures.
//!
//! Grammar:
//!   literal  := term (" + " term)*
//!   term     := "chords(" pair ("," pair)* ")"
//!             | "a(" diagram ")"
//!             | "idem(" ints? ")"
//!             | "unit"
//!   pair     := "[" int "," int "]"
//!   diagram  := "S={ints} T={ints} phi=[s>t(,s>t)*]"
//!
//! `chords(...)` builds a chord element, `a(...)` the swap-class of a strand
//! diagram, `idem(...)` an idempotent by matched-pair indices, and `unit`
//! the sum of all idempotents.

use bordered_core::arcalg::{self, ArcAlgebraElement, Chord};
use bordered_core::pmc::PointedMatchedCircle;
use bordered_core::strands::StrandDiagram;

#[derive(Debug)]
pub struct LiteralError(pub String);

impl std::fmt::Display for LiteralError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "bad element literal: {}", self.0)
    }
}

impl std::error::Error for LiteralError {}

pub fn parse_element(
    circle: &PointedMatchedCircle,
    input: &str,
) -> Result<ArcAlgebraElement, LiteralError> {
    let mut out = ArcAlgebraElement::zero(circle);
    for term in input.split(" + ") {
        out = out.add(&parse_term(circle, term.trim())?);
    }
    Ok(out)
}

fn parse_term(
    circle: &PointedMatchedCircle,
    term: &str,
) -> Result<ArcAlgebraElement, LiteralError> {
    if term == "unit" {
        return Ok(arcalg::unit(circle));
    }
    if let Some(body) = enclosed(term, "chords(") {
        let chords = parse_chords(body)?;
        return arcalg::chord_element(circle, &chords)
            .map_err(|e| LiteralError(format!("{term}: {e}")));
    }
    if let Some(body) = enclosed(term, "a(") {
        let diagram = parse_diagram(circle.num_points(), body)?;
        return Ok(arcalg::a_map(circle, &diagram));
    }
    if let Some(body) = enclosed(term, "idem(") {
        let pairs = parse_ints(body)?;
        let count = circle.pairs().len();
        for &p in &pairs {
            if p >= count {
                return Err(LiteralError(format!("pair index {p} out of range")));
            }
        }
        return Ok(arcalg::idempotent_for_pairs(
            circle,
            &pairs.into_iter().collect(),
        ));
    }
    Err(LiteralError(format!("unrecognized term {term:?}")))
}

fn enclosed<'a>(term: &'a str, prefix: &str) -> Option<&'a str> {
    term.strip_prefix(prefix)?.strip_suffix(')')
}

fn parse_chords(body: &str) -> Result<Vec<Chord>, LiteralError> {
    let mut out = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let Some(stripped) = rest.strip_prefix('[') else {
            return Err(LiteralError(format!("expected '[' in {body:?}")));
        };
        let Some(end) = stripped.find(']') else {
            return Err(LiteralError(format!("missing ']' in {body:?}")));
        };
        let inner = &stripped[..end];
        let nums = parse_ints(inner)?;
        if nums.len() != 2 {
            return Err(LiteralError(format!("chord needs two endpoints: {inner:?}")));
        }
        out.push(Chord::new(nums[0], nums[1]).map_err(|e| LiteralError(e.to_string()))?);
        rest = stripped[end + 1..].trim_start_matches(',').trim();
    }
    Ok(out)
}

fn parse_ints(body: &str) -> Result<Vec<usize>, LiteralError> {
    let body = body.trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| LiteralError(format!("bad integer {s:?}")))
        })
        .collect()
}

/// Parses the diagram literal syntax `S={1,2} T={2,3} phi=[1>3,2>2]`.
pub fn parse_diagram(ambient: usize, body: &str) -> Result<StrandDiagram, LiteralError> {
    let sources = extract_braced(body, "S=")?;
    let targets = extract_braced(body, "T=")?;
    let phi = extract_bracketed(body, "phi=")?;
    let sources = parse_ints(&sources)?;
    let targets = parse_ints(&targets)?;
    let mut strands = Vec::new();
    if phi.trim().is_empty() {
        if !sources.is_empty() {
            return Err(LiteralError("phi is empty but S is not".into()));
        }
    } else {
        for part in phi.split(',') {
            let mut halves = part.trim().split('>');
            let (Some(s), Some(t), None) = (halves.next(), halves.next(), halves.next()) else {
                return Err(LiteralError(format!("bad strand {part:?}")));
            };
            let s: usize = s
                .trim()
                .parse()
                .map_err(|_| LiteralError(format!("bad strand source {part:?}")))?;
            let t: usize = t
                .trim()
                .parse()
                .map_err(|_| LiteralError(format!("bad strand target {part:?}")))?;
            if t < s {
                return Err(LiteralError(format!("strand {part:?} decreases")));
            }
            strands.push((s, t));
        }
    }
    let mut got_sources: Vec<usize> = strands.iter().map(|&(s, _)| s).collect();
    got_sources.sort();
    let mut got_targets: Vec<usize> = strands.iter().map(|&(_, t)| t).collect();
    got_targets.sort();
    if got_sources != sources || got_targets != targets {
        return Err(LiteralError(format!(
            "phi endpoints disagree with S/T in {body:?}"
        )));
    }
    for &(s, t) in &strands {
        if s == 0 || s > ambient || t == 0 || t > ambient {
            return Err(LiteralError(format!(
                "strand ({s},{t}) outside 1..={ambient}"
            )));
        }
    }
    Ok(StrandDiagram::new(ambient, strands))
}

fn extract_braced(body: &str, key: &str) -> Result<String, LiteralError> {
    let start = body
        .find(key)
        .ok_or_else(|| LiteralError(format!("missing {key} in {body:?}")))?;
    let rest = &body[start + key.len()..];
    let rest = rest
        .strip_prefix('{')
        .ok_or_else(|| LiteralError(format!("expected '{{' after {key}")))?;
    let end = rest
        .find('}')
        .ok_or_else(|| LiteralError(format!("missing '}}' after {key}")))?;
    Ok(rest[..end].to_string())
}

fn extract_bracketed(body: &str, key: &str) -> Result<String, LiteralError> {
    let start = body
        .find(key)
        .ok_or_else(|| LiteralError(format!("missing {key} in {body:?}")))?;
    let rest = &body[start + key.len()..];
    let rest = rest
        .strip_prefix('[')
        .ok_or_else(|| LiteralError(format!("expected '[' after {key}")))?;
    let end = rest
        .find(']')
        .ok_or_else(|| LiteralError(format!("missing ']' after {key}")))?;
    Ok(rest[..end].to_string())
}
