//! Type expressions such as `2A3 + 4A1`, `K(4,3)`, `(1:(2:*,*),*)` or
//! `@graph.json`.
//!
//! ```text
//! expr := term ("+" term)*
//! term := [count] name | [count] "@" path | [count] key
//! ```

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::error::{GraphError, NameError, TreeError};
use crate::graph::GraphFile;
use crate::registry::make_named_type;
use crate::tree::{canonical_form, SingularityType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Name(#[from] NameError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("graph file {path}: {reason}")]
    GraphFile { path: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at column {}: {kind}", .position + 1)]
pub struct ExprError {
    /// Byte offset into the expression.
    pub position: usize,
    pub kind: ExprErrorKind,
}

impl ExprError {
    fn syntax(position: usize, msg: impl Into<String>) -> Self {
        ExprError {
            position,
            kind: ExprErrorKind::Syntax(msg.into()),
        }
    }
}

/// Parsed multiset of types, merged and in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeExpression {
    pub text: String,
    pub terms: Vec<(u64, SingularityType)>,
}

impl TypeExpression {
    pub fn from_types(types: &[SingularityType]) -> Self {
        let terms = merge(types.iter().map(|t| (1, t.clone())).collect());
        let text = render(&terms);
        TypeExpression { text, terms }
    }

    /// Every type repeated by its count.
    pub fn expand(&self) -> Vec<SingularityType> {
        self.terms
            .iter()
            .flat_map(|(n, t)| std::iter::repeat(t.clone()).take(*n as usize))
            .collect()
    }

    pub fn len(&self) -> u64 {
        self.terms.iter().map(|(n, _)| n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single type of a one-term expression with count 1.
    pub fn single(&self) -> Option<&SingularityType> {
        match self.terms.as_slice() {
            [(1, t)] => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for TypeExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.terms))
    }
}

/// Order used for printing and for search: larger delta first, then more
/// branches, then key.
pub fn display_order(a: &SingularityType, b: &SingularityType) -> std::cmp::Ordering {
    b.delta()
        .cmp(&a.delta())
        .then(b.branches().cmp(&a.branches()))
        .then(a.key().cmp(b.key()))
}

fn merge(mut terms: Vec<(u64, SingularityType)>) -> Vec<(u64, SingularityType)> {
    terms.sort_by(|a, b| display_order(&a.1, &b.1));
    let mut out: Vec<(u64, SingularityType)> = Vec::with_capacity(terms.len());
    for (n, t) in terms {
        match out.last_mut() {
            Some((m, last)) if *last == t => *m += n,
            _ => out.push((n, t)),
        }
    }
    out
}

fn render(terms: &[(u64, SingularityType)]) -> String {
    terms
        .iter()
        .map(|(n, t)| {
            let label = t.label();
            if *n == 1 {
                label
            } else {
                format!("{n}{label}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Formats a list of types the way [`TypeExpression`] prints.
pub fn format_types(types: &[SingularityType]) -> String {
    TypeExpression::from_types(types).to_string()
}

/// Loads a graph file and returns its type.
pub fn load_graph_file(path: &Path) -> Result<SingularityType, ExprErrorKind> {
    let err = |reason: String| ExprErrorKind::GraphFile {
        path: path.display().to_string(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
    let file: GraphFile = serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
    let g = file
        .into_graph()
        .map_err(|e: GraphError| err(e.to_string()))?;
    Ok(canonical_form(&g))
}

/// Resolves a single name or key without a count.
pub fn parse_type(text: &str) -> Result<SingularityType, ExprError> {
    let e = parse_expression(text)?;
    e.single().cloned().ok_or_else(|| {
        ExprError::syntax(0, format!("expected a single type, got {e}"))
    })
}

pub fn parse_expression(text: &str) -> Result<TypeExpression, ExprError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut terms = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while bytes.get(*pos).is_some_and(u8::is_ascii_whitespace) {
            *pos += 1;
        }
    };
    loop {
        skip_ws(&mut pos);
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        let count = if pos > start {
            let n: u64 = text[start..pos]
                .parse()
                .map_err(|_| ExprError::syntax(start, "count too large"))?;
            if n == 0 {
                return Err(ExprError::syntax(start, "count must be at least 1"));
            }
            skip_ws(&mut pos);
            n
        } else {
            1
        };
        let item_start = pos;
        let ty = match bytes.get(pos) {
            None => return Err(ExprError::syntax(pos, "expected a type")),
            Some(b'@') => {
                pos += 1;
                let path_start = pos;
                while pos < bytes.len() && bytes[pos] != b'+' {
                    pos += 1;
                }
                let path = text[path_start..pos].trim();
                if path.is_empty() {
                    return Err(ExprError::syntax(path_start, "expected a file path after '@'"));
                }
                load_graph_file(Path::new(path)).map_err(|kind| ExprError {
                    position: path_start,
                    kind,
                })?
            }
            Some(b'(') => {
                let end = balanced_end(bytes, pos)
                    .ok_or_else(|| ExprError::syntax(pos, "unbalanced '('"))?;
                pos = end;
                SingularityType::parse_key(&text[item_start..end]).map_err(|e| ExprError {
                    position: item_start,
                    kind: e.into(),
                })?
            }
            Some(c) if c.is_ascii_alphabetic() => {
                pos = name_end(bytes, pos)
                    .ok_or_else(|| ExprError::syntax(item_start, "unbalanced bracket in name"))?;
                make_named_type(&text[item_start..pos]).map_err(|e| ExprError {
                    position: item_start,
                    kind: e.into(),
                })?
            }
            Some(_) => {
                let ch = text[pos..].chars().next().unwrap_or('?');
                return Err(ExprError::syntax(pos, format!("unexpected {ch:?}")));
            }
        };
        terms.push((count, ty));
        skip_ws(&mut pos);
        match bytes.get(pos) {
            None => break,
            Some(b'+') => pos += 1,
            Some(_) => {
                let ch = text[pos..].chars().next().unwrap_or('?');
                return Err(ExprError::syntax(pos, format!("expected '+', found {ch:?}")));
            }
        }
    }
    Ok(TypeExpression {
        text: text.to_string(),
        terms: merge(terms),
    })
}

/// End of the balanced parenthesised group starting at `start`.
fn balanced_end(bytes: &[u8], start: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (i, &b) in bytes.iter().enumerate().skip(start) {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return Some(i + 1);
                }
            }
            _ => {}
        }
    }
    None
}

/// End of a name such as `A_13`, `J_{2,2}` or `K(4, 3)`.
fn name_end(bytes: &[u8], start: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut pos = start;
    while let Some(&b) = bytes.get(pos) {
        match b {
            b'(' | b'{' => depth += 1,
            b')' | b'}' => depth = depth.checked_sub(1)?,
            b'+' if depth == 0 => break,
            b if b.is_ascii_whitespace() && depth == 0 => break,
            b if b.is_ascii_alphanumeric() || b == b'_' || b == b',' || b.is_ascii_whitespace() => {}
            _ => break,
        }
        pos += 1;
    }
    (depth == 0).then_some(pos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{a_odd, kpk};

    #[test]
    fn counts_and_names() {
        let e = parse_expression("2A3+4A1").unwrap();
        assert_eq!(e.terms, vec![(2, a_odd(2)), (4, a_odd(1))]);
        assert_eq!(e.to_string(), "2A_3 + 4A_1");
        assert_eq!(e.len(), 6);
        let e = parse_expression(" A1 + 2 A3 + A1 ").unwrap();
        assert_eq!(e.terms, vec![(2, a_odd(2)), (2, a_odd(1))]);
        assert_eq!(parse_type("K(4,3)").unwrap(), kpk(4, 3));
        assert_eq!(parse_type("K(4, 3)").unwrap(), kpk(4, 3));
    }

    #[test]
    fn display_round_trip() {
        for text in ["2A_7 + 4A_1", "J_{2,2} + X_{1,2}", "K(3,4) + 3D_4", "(1:(2:•,•),(3:•,•))"] {
            let e = parse_expression(text).unwrap();
            let again = parse_expression(&e.to_string()).unwrap();
            assert_eq!(e.terms, again.terms);
            assert_eq!(again.to_string(), e.to_string());
        }
    }

    #[test]
    fn keys() {
        let t = parse_type("(1:*,(2:*,*))").unwrap();
        assert_eq!(t.label(), "D_6");
        let e = parse_expression("2(1:*,*,*)").unwrap();
        assert_eq!(e.to_string(), "2D_4");
    }

    #[test]
    fn errors() {
        let e = parse_expression("A4").unwrap_err();
        assert!(matches!(e.kind, ExprErrorKind::Name(NameError::SingularBranchType { .. })));
        let e = parse_expression("2A3 + ").unwrap_err();
        assert_eq!(e.position, 6);
        let e = parse_expression("2A3 4A1").unwrap_err();
        assert!(matches!(e.kind, ExprErrorKind::Syntax(_)));
        let e = parse_expression("0A1").unwrap_err();
        assert_eq!(e.position, 0);
        let e = parse_expression("A1 + Q3").unwrap_err();
        assert_eq!(e.position, 5);
        assert!(matches!(e.kind, ExprErrorKind::Name(NameError::UnknownName { .. })));
        assert!(parse_expression("K(3,2").is_err());
        assert!(parse_expression("@/nonexistent/graph.json").is_err());
        assert!(parse_type("2A1").is_err());
    }
}
