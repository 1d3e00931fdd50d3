//! The `p orptab` detour-table file: one record per vertex regardless of `m`.
//!
//! ```text
//! p orptab <n> <t>
//! <parent edge | -1> <swap edge | -1> [<successor edge | -1>]
//! ```
//!
//! `t` is 1-based like the graph format; edge ids are 0-based. The optional
//! third column carries a solved successor edge per vertex.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use super::{compute_c_values, DetourTable};
use crate::cost::{Cost, Weight};
use crate::graph::{EdgeId, Graph, ShortestPathTree, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("missing \"p orptab <n> <t>\" header")]
    MissingHeader,
    #[error("malformed header at line {line}")]
    MalformedHeader { line: usize },
    #[error("table is for {table} vertices but the graph has {graph}")]
    VertexCount { table: usize, graph: usize },
    #[error("malformed record at line {line}")]
    MalformedRecord { line: usize },
    #[error("expected {expected} records, found {found}")]
    RecordCount { expected: usize, found: usize },
    #[error("inconsistent record columns at line {line}")]
    MixedColumns { line: usize },
    #[error("edge {edge} at line {line} is not a valid choice for vertex {vertex}")]
    BadEdge {
        line: usize,
        vertex: usize,
        edge: EdgeId,
    },
    #[error("parent edges do not form a tree rooted at the destination")]
    NotATree,
}

pub struct LoadedTable<W> {
    pub table: DetourTable<W>,
    pub successor_edge: Option<Vec<Option<EdgeId>>>,
}

fn id_or_dash(out: &mut String, id: Option<EdgeId>) {
    match id {
        Some(e) => {
            let _ = write!(out, "{e}");
        }
        None => out.push_str("-1"),
    }
}

/// Serializes the compact encoding: exactly `n` records.
pub fn write_table<W: Weight>(
    table: &DetourTable<W>,
    successor_edge: Option<&[Option<EdgeId>]>,
) -> String {
    let tree = table.tree();
    let n = tree.parent_edge.len();
    let mut out = String::with_capacity(24 + 16 * n);
    let _ = writeln!(out, "p orptab {} {}", n, tree.dest + 1);
    for x in 0..n {
        id_or_dash(&mut out, tree.parent_edge[x]);
        out.push(' ');
        id_or_dash(&mut out, table.swap_edge(x));
        if let Some(succ) = successor_edge {
            out.push(' ');
            id_or_dash(&mut out, succ[x]);
        }
        out.push('\n');
    }
    out
}

fn parse_id(tok: &str, m: usize, line: usize) -> Result<Option<EdgeId>, TableError> {
    if tok == "-1" {
        return Ok(None);
    }
    let e: EdgeId = tok
        .parse()
        .map_err(|_| TableError::MalformedRecord { line })?;
    if e >= m {
        return Err(TableError::MalformedRecord { line });
    }
    Ok(Some(e))
}

/// Rebuilds the table for `g`: distances from the parent chains, `c`
/// values from the graph, and detour values as `c(swap) - d*(u)`.
pub fn read_table<W: Weight>(g: &Graph<W>, text: &str) -> Result<LoadedTable<W>, TableError> {
    let n = g.n();
    let m = g.m();
    let mut dest: Option<VertexId> = None;
    let mut parent_edge = Vec::with_capacity(n);
    let mut swap_edge = Vec::with_capacity(n);
    let mut successor: Vec<Option<EdgeId>> = Vec::new();
    let mut columns: Option<usize> = None;
    let mut record_lines = Vec::with_capacity(n);

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first() {
            None | Some(&"c") => continue,
            Some(&"p") => {
                let [_, "orptab", tn, tt] = fields.as_slice() else {
                    return Err(TableError::MalformedHeader { line });
                };
                let tn: usize = tn
                    .parse()
                    .map_err(|_| TableError::MalformedHeader { line })?;
                let tt: usize = tt
                    .parse()
                    .map_err(|_| TableError::MalformedHeader { line })?;
                if dest.is_some() || tt == 0 || tt > tn {
                    return Err(TableError::MalformedHeader { line });
                }
                if tn != n {
                    return Err(TableError::VertexCount {
                        table: tn,
                        graph: n,
                    });
                }
                dest = Some(tt - 1);
            }
            Some(_) => {
                if dest.is_none() {
                    return Err(TableError::MissingHeader);
                }
                if !(2..=3).contains(&fields.len()) {
                    return Err(TableError::MalformedRecord { line });
                }
                if *columns.get_or_insert(fields.len()) != fields.len() {
                    return Err(TableError::MixedColumns { line });
                }
                parent_edge.push(parse_id(fields[0], m, line)?);
                swap_edge.push(parse_id(fields[1], m, line)?);
                if fields.len() == 3 {
                    successor.push(parse_id(fields[2], m, line)?);
                }
                record_lines.push(line);
            }
        }
    }

    let t = dest.ok_or(TableError::MissingHeader)?;
    if parent_edge.len() != n {
        return Err(TableError::RecordCount {
            expected: n,
            found: parent_edge.len(),
        });
    }

    let mut parent = vec![None; n];
    for x in 0..n {
        if let Some(e) = parent_edge[x] {
            let p = g
                .edge(e)
                .other(x)
                .filter(|_| x != t)
                .ok_or(TableError::BadEdge {
                    line: record_lines[x],
                    vertex: x,
                    edge: e,
                })?;
            parent[x] = Some(p);
        }
    }

    // distances top-down from the destination
    let mut children = vec![Vec::new(); n];
    for (x, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            children[p].push(x);
        }
    }
    let mut dstar = vec![Cost::Infinite; n];
    let mut order = Vec::with_capacity(n);
    dstar[t] = Cost::zero();
    let mut queue = VecDeque::from([t]);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &c in &children[u] {
            dstar[c] = dstar[u].plus(g.length(parent_edge[c].unwrap()));
            queue.push_back(c);
        }
    }
    if (0..n).any(|x| parent[x].is_some() && dstar[x].is_infinite()) {
        return Err(TableError::NotATree);
    }

    let tree = ShortestPathTree {
        dest: t,
        parent_edge,
        parent,
        dstar,
        order,
        heap_pops: 0,
    };
    let cvalue = compute_c_values(g, &tree);
    for x in 0..n {
        if let Some(f) = swap_edge[x] {
            let usable =
                tree.parent_edge[x].is_some() && matches!(cvalue[f], Some(Cost::Finite(_)));
            if !usable {
                return Err(TableError::BadEdge {
                    line: record_lines[x],
                    vertex: x,
                    edge: f,
                });
            }
        }
    }
    if columns == Some(3) {
        for x in 0..n {
            if let Some(e) = successor[x] {
                if !g.is_incident(e, x) {
                    return Err(TableError::BadEdge {
                        line: record_lines[x],
                        vertex: x,
                        edge: e,
                    });
                }
            }
        }
    }

    Ok(LoadedTable {
        table: DetourTable::from_parts(tree, swap_edge, cvalue),
        successor_edge: (columns == Some(3)).then_some(successor),
    })
}
