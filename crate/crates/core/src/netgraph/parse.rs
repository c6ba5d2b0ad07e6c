use crate::label::Label;
use crate::petri::Capacity;

use super::{EdgeTagging, NodeRendering, Port, Sign, SignedCondition, Triple};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?}: {reason}")]
pub struct ParseError {
    pub input: String,
    pub reason: String,
}

pub(crate) fn err<T>(input: &str, reason: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        input: input.to_string(),
        reason: reason.into(),
    })
}

/// Splits on commas outside any parentheses.
pub(crate) fn split_top(s: &str) -> Result<Vec<&str>, ParseError> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return err(s, "unbalanced ')'");
                }
            }
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return err(s, "unbalanced '('");
    }
    parts.push(&s[start..]);
    Ok(parts)
}

/// Strips one pair of enclosing parentheses.
pub(crate) fn unwrap_parens(s: &str) -> Result<&str, ParseError> {
    match s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        Some(inner) => Ok(inner),
        None => err(s, "expected parenthesized group"),
    }
}

fn label(s: &str) -> Result<Label, ParseError> {
    Label::new(s).or_else(|e| err(s, e.to_string()))
}

fn capacity(s: &str) -> Result<Capacity, ParseError> {
    if s == "inf" {
        return Ok(Capacity::Infinite);
    }
    match s.parse::<u32>() {
        Ok(n) if n > 0 => Ok(Capacity::Finite(n)),
        _ => err(s, "bad capacity"),
    }
}

fn weight(s: &str) -> Result<u32, ParseError> {
    match s.parse::<u32>() {
        Ok(n) if n > 0 => Ok(n),
        _ => err(s, "bad weight"),
    }
}

/// Leading sign, returning the rest.
fn sign(s: &str) -> Result<(Sign, &str), ParseError> {
    if let Some(r) = s.strip_prefix("--") {
        Ok((Sign::Inhibitor, r))
    } else if let Some(r) = s.strip_prefix('-') {
        Ok((Sign::Minus, r))
    } else if let Some(r) = s.strip_prefix('+') {
        Ok((Sign::Plus, r))
    } else {
        err(s, "expected sign")
    }
}

/// A port: sign optionally followed by a weight.
fn port(s: &str) -> Result<Port, ParseError> {
    let (sg, rest) = sign(s)?;
    let w = if rest.is_empty() { 1 } else { weight(rest)? };
    Ok(Port::weighted(sg, w))
}

/// `name` or `name(annotation)`.
fn split_annotation(s: &str) -> Result<(&str, Option<&str>), ParseError> {
    match s.find('(') {
        None => Ok((s, None)),
        Some(i) => Ok((&s[..i], Some(unwrap_parens(&s[i..])?))),
    }
}

fn signed_condition(s: &str) -> Result<SignedCondition, ParseError> {
    let (sg, rest) = sign(s)?;
    let (name, ann) = split_annotation(rest)?;
    let mut sc = SignedCondition::new(sg, label(name)?);
    if let Some(a) = ann {
        let parts = split_top(a)?;
        if parts.len() != 2 {
            return err(s, "annotation needs capacity and weight");
        }
        sc.capacity = capacity(parts[0])?;
        sc.weight = weight(parts[1])?;
        if sc.capacity.is_infinite() && sc.weight == 1 {
            return err(s, "default annotation must be omitted");
        }
    }
    Ok(sc)
}

/// Parses a parenthesized node tagging such as `(-c1,+c2)`.
pub fn parse_tagging(s: &str) -> Result<Vec<SignedCondition>, ParseError> {
    let inner = unwrap_parens(s)?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    split_top(inner)?.into_iter().map(signed_condition).collect()
}

/// Parses `label(tagging)`.
pub fn parse_node_rendering(s: &str) -> Result<NodeRendering, ParseError> {
    let Some(i) = s.find('(') else {
        return err(s, "missing node tagging");
    };
    Ok(NodeRendering {
        label: label(&s[..i])?,
        tagging: parse_tagging(&s[i..])?,
    })
}

fn triple(s: &str) -> Result<Triple, ParseError> {
    let parts = split_top(unwrap_parens(s)?)?;
    if parts.len() != 3 {
        return err(s, "triple needs three parts");
    }
    let (name, ann) = split_annotation(parts[1])?;
    let cap = match ann {
        None => Capacity::Infinite,
        Some(a) => match capacity(a)? {
            Capacity::Infinite => return err(s, "infinite capacity must be omitted"),
            c => c,
        },
    };
    Ok(Triple::new(port(parts[0])?, label(name)?, cap, port(parts[2])?))
}

/// Parses `((s,label,s'),...)`. Triples may come in any order; the result is
/// sorted.
pub fn parse_edge_tagging(s: &str) -> Result<EdgeTagging, ParseError> {
    let inner = unwrap_parens(s)?;
    if inner.is_empty() {
        return Ok(EdgeTagging(Vec::new()));
    }
    let triples = split_top(inner)?
        .into_iter()
        .map(triple)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EdgeTagging::from_unsorted(triples))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_round_trip() {
        for s in [
            "v2(-c8,-c9,+c6,+c10,+c11,+c12)",
            "e()",
            "t2(-s8(8,13),-s9(9,14),+s6(6,18))",
            "x(--a,-b(inf,3),+c)",
        ] {
            assert_eq!(parse_node_rendering(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn edge_round_trip() {
        for s in [
            "((-,c9,-),(+,c6,+))",
            "((-2,s9(9),-14),(+6,s6(6),+18))",
            "((--,a,+))",
        ] {
            assert_eq!(parse_edge_tagging(s).unwrap().to_string(), s);
        }
        let t = parse_edge_tagging("((+,c6,+),(-,c9,-))").unwrap();
        assert_eq!(t.to_string(), "((-,c9,-),(+,c6,+))");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["v1", "v1(-c1", "v1(c1)", "v1(-c1(0,1))", "v1(-c1(inf,1))", "(a)b(-x)"] {
            assert!(parse_node_rendering(s).is_err(), "{s}");
        }
        for s in ["(-,c9,-)", "((-,c9))", "((-,c9,*))", "((-0,c,+))", "((-,c(inf),+))"] {
            assert!(parse_edge_tagging(s).is_err(), "{s}");
        }
    }
}
