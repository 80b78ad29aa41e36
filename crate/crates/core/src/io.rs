//! Edge-list and DIMACS graph readers.
//!
//! Edge lists hold one `u v` pair per line with 1-based ids; `#` starts a
//! comment, and a line with a single id declares an isolated vertex. DIMACS
//! files carry a `p edge n m` header followed by `e u v` lines.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFormat {
    #[default]
    EdgeList,
    Dimacs,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" | "edges" => Ok(GraphFormat::EdgeList),
            "dimacs" => Ok(GraphFormat::Dimacs),
            other => Err(Error::Input(format!("unknown graph format '{other}'"))),
        }
    }
}

/// Reads a graph file.
pub fn parse_graph(path: impl AsRef<Path>, format: GraphFormat) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_graph_str(&text, format)
}

pub fn parse_graph_str(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Dimacs => parse_dimacs(text),
    }
}

fn parse_id(token: &str, line: usize) -> Result<usize> {
    let id: usize = token.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("'{token}' is not a vertex id"),
    })?;
    if id == 0 {
        return Err(Error::Parse {
            line,
            msg: "vertex ids start at 1".into(),
        });
    }
    Ok(id - 1)
}

fn check_edge(u: usize, v: usize, line: usize) -> Result<()> {
    if u == v {
        return Err(Error::Parse {
            line,
            msg: format!("self-loop on vertex {}", u + 1),
        });
    }
    Ok(())
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n = 0;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [v] => n = n.max(parse_id(v, line)? + 1),
            [u, v] => {
                let (u, v) = (parse_id(u, line)?, parse_id(v, line)?);
                check_edge(u, v, line)?;
                n = n.max(u.max(v) + 1);
                edges.push((u, v));
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected 'u v', found '{}'", content.trim()),
                })
            }
        }
    }
    Graph::new(n, edges)
}

fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        match tokens.as_slice() {
            [] | ["c", ..] => {}
            ["p", "edge" | "col", count, _] => {
                if n.is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: "duplicate problem line".into(),
                    });
                }
                n = Some(count.parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("'{count}' is not a vertex count"),
                })?);
            }
            ["e", u, v] => {
                let Some(n) = n else {
                    return Err(Error::Parse {
                        line,
                        msg: "edge before 'p edge' line".into(),
                    });
                };
                let (u, v) = (parse_id(u, line)?, parse_id(v, line)?);
                check_edge(u, v, line)?;
                for x in [u, v] {
                    if x >= n {
                        return Err(Error::VertexOutOfRange { vertex: x + 1, n });
                    }
                }
                edges.push((u, v));
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unrecognized line '{}'", raw.trim()),
                })
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing 'p edge' line".into(),
    })?;
    Graph::new(n, edges)
}

/// Writes `g` as a 1-based edge list; isolated vertices get their own line.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for v in 0..g.n() {
        if g.degree(v) == 0 {
            out.push_str(&format!("{}\n", v + 1));
        }
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}
