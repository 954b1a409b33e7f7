//! Plain-text digraph format.
//!
//! ```text
//! # comment lines start with '#'
//! 3 3
//! 0 1
//! 1 2
//! 2 0
//! ```
//!
//! The header gives the order and arc count, then one `u v` line per arc.

use thiserror::Error;

use crate::graph::Digraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed header, expected `n m`")]
    MalformedHeader { line: usize },
    #[error("line {line}: malformed arc, expected `u v`")]
    MalformedArc { line: usize },
    #[error("line {line}: loop at vertex {vertex}")]
    Loop { line: usize, vertex: usize },
    #[error("line {line}: duplicate arc ({u},{v})")]
    DuplicateArc { line: usize, u: usize, v: usize },
    #[error("line {line}: vertex {vertex} out of range for order {n}")]
    OutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("expected {expected} arcs, found {found}")]
    ArcCount { expected: usize, found: usize },
    #[error("order must be at least 1")]
    EmptyOrder,
    #[error("missing header")]
    MissingHeader,
}

fn numbers(s: &str) -> Option<(usize, usize)> {
    let mut it = s.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Some((a, b)),
        _ => None,
    }
}

pub fn parse_digraph(text: &str) -> Result<Digraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let (n, m) = numbers(header).ok_or(ParseError::MalformedHeader { line })?;
    if n == 0 {
        return Err(ParseError::EmptyOrder);
    }
    let mut g = Digraph::empty(n);
    let mut found = 0;
    for (line, text) in lines {
        let (u, v) = numbers(text).ok_or(ParseError::MalformedArc { line })?;
        for vertex in [u, v] {
            if vertex >= n {
                return Err(ParseError::OutOfRange { line, vertex, n });
            }
        }
        if u == v {
            return Err(ParseError::Loop { line, vertex: u });
        }
        if g.has_arc(u, v) {
            return Err(ParseError::DuplicateArc { line, u, v });
        }
        g.add_arc(u, v);
        found += 1;
    }
    if found != m {
        return Err(ParseError::ArcCount { expected: m, found });
    }
    Ok(g)
}

/// Arcs in lexicographic order, newline-terminated.
pub fn write_digraph(g: &Digraph) -> String {
    let mut s = format!("{} {}\n", g.order(), g.arc_count());
    for (u, v) in g.arcs() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = Digraph::new(3, [(2, 0), (0, 1), (1, 2)]).unwrap();
        let text = write_digraph(&g);
        assert_eq!(text, "3 3\n0 1\n1 2\n2 0\n");
        assert_eq!(parse_digraph(&text).unwrap(), g);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_digraph("# c\n\n2 2\n# arcs\n0 1\n1 0\n").unwrap();
        assert_eq!(g.arc_count(), 2);
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(
            parse_digraph("x\n"),
            Err(ParseError::MalformedHeader { line: 1 })
        );
        assert_eq!(
            parse_digraph("2 1\n1 1\n"),
            Err(ParseError::Loop { line: 2, vertex: 1 })
        );
        assert_eq!(
            parse_digraph("2 2\n0 1\n0 1\n"),
            Err(ParseError::DuplicateArc {
                line: 3,
                u: 0,
                v: 1
            })
        );
        assert_eq!(
            parse_digraph("#h\n2 1\n0 5\n"),
            Err(ParseError::OutOfRange {
                line: 3,
                vertex: 5,
                n: 2
            })
        );
        assert_eq!(
            parse_digraph("2 2\n0 1\n"),
            Err(ParseError::ArcCount {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(parse_digraph(""), Err(ParseError::MissingHeader));
        assert_eq!(
            parse_digraph("2 1\n0 1 2\n"),
            Err(ParseError::MalformedArc { line: 2 })
        );
    }
}
