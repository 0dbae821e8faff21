//! Line-oriented certificate files.
//!
//! ```text
//! classes 3 3
//! colors 3
//! edges 1 2 3 2 3 1 3 1 2
//! S 3 0:0 0:1 0:2
//! tree 3 0 3 6
//! tree 3 1 4 7
//! ```
//!
//! The first three lines describe the graph and a coloring in canonical edge
//! order. The optional `S` line and the `tree` lines that follow it are a
//! packing certificate: one tree per line, edge indices ascending. Parsing is
//! strict: token counts must match and colors must lie in `1..=t`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Coloring, GraphError, MultipartiteGraph, VertexId};
use crate::packing::Packing;
use crate::tree::{STree, TerminalSet, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("line {line}: expected `{expected}`")]
    MissingLine { line: usize, expected: &'static str },
    #[error("line {line}: expected keyword `{expected}`, found `{found}`")]
    Keyword {
        line: usize,
        expected: &'static str,
        found: String,
    },
    #[error("line {line}: `{token}` is not a valid {what}")]
    BadToken {
        line: usize,
        token: String,
        what: &'static str,
    },
    #[error("line {line}: expected {expected} values, found {found}")]
    Count {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("line {line}: {source}")]
    Tree { line: usize, source: TreeError },
    #[error("line {line}: unexpected content `{content}`")]
    Trailing { line: usize, content: String },
}

/// A parsed certificate: graph, coloring and an optional packing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub graph: MultipartiteGraph,
    pub coloring: Coloring,
    pub packing: Option<Packing>,
}

impl Certificate {
    pub fn new(graph: MultipartiteGraph, coloring: Coloring) -> Self {
        Self {
            graph,
            coloring,
            packing: None,
        }
    }

    pub fn with_packing(mut self, packing: Packing) -> Self {
        self.packing = Some(packing);
        self
    }

    pub fn parse(text: &str) -> Result<Self, CertificateError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (ln, line) = lines.next().ok_or(CertificateError::MissingLine {
            line: 1,
            expected: "classes",
        })?;
        let sizes = numbers::<usize>(ln, keyword(ln, line, "classes")?, "class size")?;
        let graph = MultipartiteGraph::new(&sizes).map_err(|source| CertificateError::Graph { line: ln, source })?;

        let (ln, line) = lines.next().ok_or(CertificateError::MissingLine {
            line: ln + 1,
            expected: "colors",
        })?;
        let t = numbers::<u32>(ln, keyword(ln, line, "colors")?, "color count")?;
        if t.len() != 1 {
            return Err(CertificateError::Count {
                line: ln,
                expected: 1,
                found: t.len(),
            });
        }
        let t = t[0];

        let (ln, line) = lines.next().ok_or(CertificateError::MissingLine {
            line: ln + 1,
            expected: "edges",
        })?;
        let colors = numbers::<u32>(ln, keyword(ln, line, "edges")?, "color")?;
        if colors.len() != graph.edge_count() {
            return Err(CertificateError::Count {
                line: ln,
                expected: graph.edge_count(),
                found: colors.len(),
            });
        }
        let coloring = Coloring::new(&graph, t, colors).map_err(|source| CertificateError::Graph { line: ln, source })?;

        let mut cert = Certificate::new(graph, coloring);
        let Some((ln, line)) = lines.next() else {
            return Ok(cert);
        };
        let rest = keyword(ln, line, "S")?;
        let mut tokens = rest.split_whitespace();
        let k = parse_token::<usize>(ln, tokens.next().unwrap_or(""), "terminal count")?;
        let vertices = tokens
            .map(|tok| parse_vertex(ln, tok))
            .collect::<Result<Vec<_>, _>>()?;
        if vertices.len() != k {
            return Err(CertificateError::Count {
                line: ln,
                expected: k,
                found: vertices.len(),
            });
        }
        let terminals =
            TerminalSet::new(&cert.graph, &vertices).map_err(|source| CertificateError::Tree { line: ln, source })?;

        let mut trees = Vec::new();
        for (ln, line) in lines {
            let values = numbers::<usize>(ln, keyword(ln, line, "tree")?, "edge index")?;
            let (&m, edges) = values.split_first().ok_or(CertificateError::Count {
                line: ln,
                expected: 1,
                found: 0,
            })?;
            if edges.len() != m {
                return Err(CertificateError::Count {
                    line: ln,
                    expected: m,
                    found: edges.len(),
                });
            }
            if let Some(w) = edges.windows(2).find(|w| w[0] >= w[1]) {
                return Err(CertificateError::BadToken {
                    line: ln,
                    token: w[1].to_string(),
                    what: "edge index (indices must ascend)",
                });
            }
            let tree =
                STree::new(&cert.graph, &terminals, edges).map_err(|source| CertificateError::Tree { line: ln, source })?;
            trees.push(tree);
        }
        cert.packing = Some(Packing::new(terminals, trees));
        Ok(cert)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("classes");
        for n in self.graph.class_sizes() {
            let _ = write!(out, " {n}");
        }
        let _ = writeln!(out, "\ncolors {}", self.coloring.t());
        out.push_str("edges");
        for c in self.coloring.colors() {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
        if let Some(p) = &self.packing {
            out.push_str(&render_packing(p));
        }
        out
    }
}

/// The `S` line and one `tree` line per tree.
pub fn render_packing(packing: &Packing) -> String {
    let mut out = String::new();
    let s = packing.terminals();
    let _ = write!(out, "S {}", s.k());
    for v in s.vertices() {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
    for tree in packing.trees() {
        let _ = write!(out, "tree {}", tree.edge_count());
        for e in tree.edges() {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

fn keyword<'a>(line: usize, text: &'a str, expected: &'static str) -> Result<&'a str, CertificateError> {
    let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    if head != expected {
        return Err(CertificateError::Keyword {
            line,
            expected,
            found: head.to_string(),
        });
    }
    Ok(rest)
}

fn parse_token<T: std::str::FromStr>(line: usize, token: &str, what: &'static str) -> Result<T, CertificateError> {
    token.parse().map_err(|_| CertificateError::BadToken {
        line,
        token: token.to_string(),
        what,
    })
}

fn numbers<T: std::str::FromStr>(line: usize, rest: &str, what: &'static str) -> Result<Vec<T>, CertificateError> {
    rest.split_whitespace().map(|tok| parse_token(line, tok, what)).collect()
}

/// Parses `class:offset`.
pub fn parse_vertex(line: usize, token: &str) -> Result<VertexId, CertificateError> {
    let bad = || CertificateError::BadToken {
        line,
        token: token.to_string(),
        what: "vertex (class:offset)",
    };
    let (c, o) = token.split_once(':').ok_or_else(bad)?;
    Ok(VertexId::new(c.parse().map_err(|_| bad())?, o.parse().map_err(|_| bad())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::max_rainbow_packing;

    const LATIN: &str = "classes 3 3\ncolors 3\nedges 1 2 3 2 3 1 3 1 2\n";

    #[test]
    fn parse_and_render_coloring() {
        let cert = Certificate::parse(LATIN).unwrap();
        assert_eq!(cert.graph.class_sizes(), &[3, 3]);
        assert_eq!(cert.coloring, Coloring::latin(&cert.graph, 3).unwrap());
        assert_eq!(cert.render(), LATIN);
    }

    #[test]
    fn packing_block_round_trip() {
        let cert = Certificate::parse(LATIN).unwrap();
        let s = TerminalSet::new(&cert.graph, &[VertexId::new(0, 0), VertexId::new(0, 1), VertexId::new(0, 2)]).unwrap();
        let res = max_rainbow_packing(&cert.graph, &cert.coloring, &s, 5);
        let with = cert.clone().with_packing(res.packing.clone());
        let text = with.render();
        assert!(text.ends_with("S 3 0:0 0:1 0:2\ntree 3 0 3 6\ntree 3 1 4 7\ntree 3 2 5 8\n"));
        assert_eq!(Certificate::parse(&text).unwrap(), with);
    }

    #[test]
    fn strict_parsing() {
        let err = |s: &str| Certificate::parse(s).unwrap_err();
        assert!(matches!(err("classes 3 3\ncolors 3\nedges 1 2 3\n"), CertificateError::Count { line: 3, .. }));
        assert!(matches!(
            err("classes 3 3\ncolors 3\nedges 1 2 3 2 3 1 3 1 4\n"),
            CertificateError::Graph { line: 3, .. }
        ));
        assert!(matches!(err("classes 3 3\ncolours 3\n"), CertificateError::Keyword { line: 2, .. }));
        assert!(matches!(err("classes 3\ncolors 1\nedges\n"), CertificateError::Graph { line: 1, .. }));
        assert!(matches!(err("classes 2 x\n"), CertificateError::BadToken { line: 1, .. }));
        assert!(matches!(err("classes 1 1\ncolors 1 2\nedges 1\n"), CertificateError::Count { line: 2, .. }));
        assert!(matches!(err("classes 1 1\n"), CertificateError::MissingLine { .. }));
        assert!(matches!(err(&format!("{LATIN}S 2 0:0 0:1\ntree 2 0 9\n")), CertificateError::Tree { line: 5, .. }));
        assert!(matches!(err(&format!("{LATIN}S 2 0:0 0:1\ntree 3 0 2\n")), CertificateError::Count { line: 5, .. }));
        assert!(matches!(err(&format!("{LATIN}S 3 0:0 0:1\n")), CertificateError::Count { line: 4, .. }));
        assert!(matches!(err(&format!("{LATIN}S 2 0:0 0-1\n")), CertificateError::BadToken { line: 4, .. }));
        // 0:0-1:0 and 0:0-1:1 leave 0:1 uncovered
        assert!(matches!(err(&format!("{LATIN}S 2 0:0 0:1\ntree 2 0 1\n")), CertificateError::Tree { line: 5, .. }));
    }
}
