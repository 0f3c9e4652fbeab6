//! Plain-text edge lists.
//!
//! One `source target` pair per line, separated by whitespace or a comma.
//! A line holding a single id declares an isolated node. Lines starting with
//! `#` and blank lines are ignored, except that a leading
//! `# netdiff <directed|undirected> <simple|multi>` header is recorded in
//! [`EdgeList::declared`]. LF and CRLF endings are both accepted.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Directedness, EdgeList, EdgePolicy, Graph, NodeId};

const HEADER_TAG: &str = "# netdiff";

fn parse_header(line: &str) -> Option<(Directedness, EdgePolicy)> {
    let mut words = line.strip_prefix(HEADER_TAG)?.split_whitespace();
    let directedness = match words.next()? {
        "directed" => Directedness::Directed,
        "undirected" => Directedness::Undirected,
        _ => return None,
    };
    let policy = match words.next()? {
        "simple" => EdgePolicy::Simple,
        "multi" => EdgePolicy::Multi,
        _ => return None,
    };
    Some((directedness, policy))
}
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut edges = Vec::new();
    let mut node_count = 0usize;
    let mut declared = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.starts_with('#') {
            if declared.is_none() && edges.is_empty() {
                declared = parse_header(line);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        let ids = tokens
            .iter()
            .map(|t| parse_id(t, line_no))
            .collect::<Result<Vec<_>>>()?;
        match ids.as_slice() {
            [u] => node_count = node_count.max(*u as usize + 1),
            [s, t] => {
                node_count = node_count.max(*s.max(t) as usize + 1);
                edges.push((*s, *t));
            }
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `source target`, found {} fields", ids.len()),
                })
            }
        }
    }
    Ok(EdgeList {
        node_count,
        edges,
        declared,
    })
}

fn parse_id(token: &str, line: usize) -> Result<NodeId> {
    if token.starts_with('-') {
        return Err(Error::Parse {
            line,
            message: format!("negative node id `{token}`"),
        });
    }
    token.parse::<NodeId>().map_err(|_| Error::Parse {
        line,
        message: format!("invalid node id `{token}`"),
    })
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<EdgeList> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text)
}

/// Serializes `g`. Undirected edges are written once as `min max`; nodes
/// without any incident edge are written as single-id lines.
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let kind = if g.is_directed() { "directed" } else { "undirected" };
    let policy = if g.is_multigraph() { "multi" } else { "simple" };
    let _ = writeln!(
        out,
        "{HEADER_TAG} {kind} {policy} nodes={} edges={}",
        g.node_count(),
        g.edge_count()
    );
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    for u in 0..g.node_count() {
        if g.out_degree(u) == 0 && g.in_degree(u) == 0 {
            let _ = writeln!(out, "{u}");
        }
    }
    out
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_edge_list(g)).map_err(|e| Error::io(path, e))
}
