//! Single-failure online replacement paths.
//!
//! The potential `y(u)` is the best worst-case cost of reaching the
//! destination from `u` when one unknown edge may have failed and a failure
//! is discovered only by trying to cross it. It satisfies
//! `y(u) = min over edges uv of max{len(uv) + y(v), d_{G-uv}(u, t)}`
//! and is computed label-setting style, like Dijkstra.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::cost::{Cost, Weight};
use crate::detour::DetourTable;
use crate::graph::{EdgeId, Graph, GraphView, VertexId};
use crate::heap::{RadixHeap, NO_EDGE};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("edge {edge} does not exist")]
    UnknownEdge { edge: EdgeId },
    #[error("path is not contiguous at position {position}")]
    NotContiguous { position: usize },
    #[error("path does not end at the destination")]
    NotEndingAtDestination,
    #[error("path revisits vertex {vertex}")]
    NotSimple { vertex: VertexId },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrpError {
    #[error("no robust path from vertex {source_vertex}")]
    NoRobustPath { source_vertex: VertexId },
    #[error("successor pointers do not lead to the destination from vertex {vertex}")]
    BrokenSuccessors { vertex: VertexId },
}

/// Potentials and successor pointers toward one destination.
///
/// Following `successor_edge` from any vertex with finite `y` traces an
/// optimal nominal path.
#[derive(Clone, Debug)]
pub struct OrpSolution<W> {
    pub dest: VertexId,
    pub y: Vec<Cost<W>>,
    pub successor: Vec<Option<VertexId>>,
    pub successor_edge: Vec<Option<EdgeId>>,
    /// Vertices in the order their labels became permanent.
    pub finalize_order: Vec<VertexId>,
    pub heap_pops: usize,
}

/// Label-setting core shared with the k-failure solver: `failure(v, e)` is
/// the worst-case cost from `v` once `e` is found broken.
pub(crate) fn label_setting<'g, W, F>(
    view: GraphView<'g, W>,
    t: VertexId,
    failure: F,
) -> OrpSolution<W>
where
    W: Weight,
    F: Fn(VertexId, EdgeId) -> Cost<W>,
{
    let n = view.n();
    let mut y = vec![W::zero(); n];
    let mut via = vec![(NO_EDGE, NO_EDGE); n];
    let mut reached = FixedBitSet::with_capacity(n);
    let mut done = FixedBitSet::with_capacity(n);
    let mut finalize_order = Vec::with_capacity(n);
    let mut heap = RadixHeap::new();
    let mut heap_pops = 0;

    reached.insert(t);
    heap.push(0, t);
    while let Some((_, u)) = heap.pop() {
        heap_pops += 1;
        if done.put(u) {
            continue;
        }
        let key = y[u];
        finalize_order.push(u);
        for (e, v, len) in view.arcs(u) {
            if done.contains(v) {
                continue;
            }
            let through = key + len;
            let known = reached.contains(v);
            // cheap rejection before consulting the failure cost
            if known && through.total_cmp(&y[v]).is_ge() {
                continue;
            }
            let Cost::Finite(fail) = failure(v, e) else {
                continue;
            };
            let cand = if fail.total_cmp(&through).is_gt() {
                fail
            } else {
                through
            };
            if !known || cand.total_cmp(&y[v]).is_lt() {
                reached.insert(v);
                y[v] = cand;
                via[v] = (u as u32, e as u32);
                heap.push(cand.radix_key(), v);
            }
        }
    }
    // vertices without a robust path keep an infinite label
    finalize_order.extend((0..n).filter(|&x| !done.contains(x)));
    let y = (0..n)
        .map(|x| {
            if reached.contains(x) {
                Cost::Finite(y[x])
            } else {
                Cost::Infinite
            }
        })
        .collect();
    let some = |x: u32| (x != NO_EDGE).then_some(x as usize);
    let successor = via.iter().map(|&(v, _)| some(v)).collect();
    let successor_edge = via.iter().map(|&(_, e)| some(e)).collect();

    OrpSolution {
        dest: t,
        y,
        successor,
        successor_edge,
        finalize_order,
        heap_pops,
    }
}

/// Optimal potentials for every source toward the table's destination.
pub fn solve_orp<'g, W: Weight>(
    view: impl Into<GraphView<'g, W>>,
    dt: &DetourTable<W>,
) -> OrpSolution<W> {
    let view = view.into();
    // Off the tree edge the failure cost is d*(v) <= d*(u) + len <= y(u) + len,
    // so it never decides the max; only (parent edge, detour) is read.
    let tree = dt.tree();
    // (parent edge, detour finite, detour) in 16 bytes
    let packed: Vec<(u32, bool, W)> = (0..view.n())
        .map(|x| {
            let pe = tree.parent_edge[x].map_or(u32::MAX, |e| e as u32);
            match dt.svalue(x) {
                Cost::Finite(w) => (pe, true, w),
                Cost::Infinite => (pe, false, W::zero()),
            }
        })
        .collect();
    // non-tree edges are never a parent edge; skip the per-vertex read
    let mut tree_edge = FixedBitSet::with_capacity(view.graph().m());
    for e in tree.parent_edge.iter().flatten() {
        tree_edge.insert(*e);
    }
    label_setting(view, dt.dest(), |v, e| {
        if !tree_edge.contains(e) {
            return Cost::zero();
        }
        let (pe, finite, sv) = packed[v];
        match (pe as usize == e, finite) {
            (false, _) => Cost::zero(),
            (true, true) => Cost::Finite(sv),
            (true, false) => Cost::Infinite,
        }
    })
}

impl<W: Weight> OrpSolution<W> {
    /// Rebuilds potentials from stored successor edges by evaluating
    /// `max{len(e) + y(next), detour(u, e)}` down each successor chain.
    pub fn from_successors(
        g: &Graph<W>,
        dt: &DetourTable<W>,
        successor_edge: Vec<Option<EdgeId>>,
    ) -> Result<Self, OrpError> {
        let n = g.n();
        let t = dt.dest();
        let mut y: Vec<Option<Cost<W>>> = vec![None; n];
        let mut successor = vec![None; n];
        y[t] = Some(Cost::zero());
        for x in 0..n {
            if x != t && successor_edge[x].is_none() {
                y[x] = Some(Cost::Infinite);
            }
            if let Some(e) = successor_edge[x] {
                successor[x] = g.edge(e).other(x);
            }
        }
        for start in 0..n {
            let mut chain = Vec::new();
            let mut x = start;
            while y[x].is_none() {
                if chain.len() > n {
                    return Err(OrpError::BrokenSuccessors { vertex: start });
                }
                chain.push(x);
                x = successor[x].ok_or(OrpError::BrokenSuccessors { vertex: x })?;
            }
            for &u in chain.iter().rev() {
                let e = successor_edge[u].unwrap();
                let next = successor[u].unwrap();
                let val = y[next].unwrap().plus(g.length(e)).max(dt.svalue_at(u, e));
                y[u] = Some(val);
            }
        }
        Ok(OrpSolution {
            dest: t,
            y: y.into_iter().map(Option::unwrap).collect(),
            successor,
            successor_edge,
            finalize_order: Vec::new(),
            heap_pops: 0,
        })
    }
}

/// Follows successor edges from `s` to the destination.
pub fn nominal_path<W: Weight>(sol: &OrpSolution<W>, s: VertexId) -> Result<Vec<EdgeId>, OrpError> {
    if sol.y[s].is_infinite() {
        return Err(OrpError::NoRobustPath { source_vertex: s });
    }
    let mut path = Vec::new();
    let mut x = s;
    while x != sol.dest {
        if path.len() >= sol.y.len() {
            return Err(OrpError::BrokenSuccessors { vertex: s });
        }
        path.push(sol.successor_edge[x].ok_or(OrpError::BrokenSuccessors { vertex: x })?);
        x = sol.successor[x].ok_or(OrpError::BrokenSuccessors { vertex: x })?;
    }
    Ok(path)
}

/// Vertex sequence of an edge path that ends at `t`, recovered backwards
/// from `t`. The result has one more entry than `path`.
pub fn orient_path<W: Weight>(
    g: &Graph<W>,
    path: &[EdgeId],
    t: VertexId,
) -> Result<Vec<VertexId>, PathError> {
    let mut vertices = vec![t; path.len() + 1];
    let mut cur = t;
    for (i, &e) in path.iter().enumerate().rev() {
        if e >= g.m() {
            return Err(PathError::UnknownEdge { edge: e });
        }
        cur = match g.edge(e).other(cur) {
            Some(prev) => prev,
            None if i + 1 == path.len() => return Err(PathError::NotEndingAtDestination),
            None => return Err(PathError::NotContiguous { position: i + 1 }),
        };
        vertices[i] = cur;
    }
    let mut seen = vec![false; g.n()];
    for &x in &vertices {
        if std::mem::replace(&mut seen[x], true) {
            return Err(PathError::NotSimple { vertex: x });
        }
    }
    Ok(vertices)
}

/// Worst-case cost of following `path` to the destination when any one of
/// its edges may be broken: the larger of the full length and, for each
/// edge, the prefix length plus the best detour avoiding that edge.
pub fn robust_length<W: Weight>(
    g: &Graph<W>,
    dt: &DetourTable<W>,
    path: &[EdgeId],
) -> Result<Cost<W>, PathError> {
    let vertices = orient_path(g, path, dt.dest())?;
    let mut prefix = W::zero();
    let mut worst = Cost::zero();
    for (i, &e) in path.iter().enumerate() {
        worst = worst.max(dt.svalue_at(vertices[i], e).plus(prefix));
        prefix = prefix + g.length(e);
    }
    Ok(worst.max(Cost::Finite(prefix)))
}
