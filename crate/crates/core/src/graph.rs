//! Undirected weighted multigraphs, the `p orp` text format, and the
//! single-destination shortest-path tree.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::cost::{Cost, Weight};
use crate::heap::{RadixHeap, NO_EDGE};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge<W> {
    pub u: VertexId,
    pub v: VertexId,
    pub length: W,
}

impl<W> Edge<W> {
    /// The endpoint opposite `x`, or `None` if `x` is not an endpoint.
    #[inline]
    pub fn other(&self, x: VertexId) -> Option<VertexId> {
        if self.u == x {
            Some(self.v)
        } else if self.v == x {
            Some(self.u)
        } else {
            None
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {edge} is a self-loop on vertex {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} has endpoint {vertex} outside 0..{n}")]
    EndpointOutOfRange {
        edge: EdgeId,
        vertex: VertexId,
        n: usize,
    },
    #[error("edge {edge} has a negative or non-finite length")]
    InadmissibleLength { edge: EdgeId },
    #[error("vertex {vertex} out of range 0..{n}")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("graphs are limited to 2^32 - 1 vertices and edges")]
    TooLarge,
}

/// Undirected multigraph with dense edge ids `0..m` and a compressed
/// adjacency array. Each vertex lists its incident edges in id order.
#[derive(Clone, Debug)]
pub struct Graph<W> {
    n: usize,
    edges: Vec<Edge<W>>,
    adj_start: Vec<usize>,
    // (edge, other endpoint, length) per arc; lengths are mirrored here so
    // scans never touch the edge array
    adj: Vec<(u32, u32, W)>,
}

impl<W: Weight> Graph<W> {
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId, W)>,
    {
        if n >= u32::MAX as usize {
            return Err(GraphError::TooLarge);
        }
        let mut list = Vec::new();
        for (id, (u, v, length)) in edges.into_iter().enumerate() {
            if id >= u32::MAX as usize {
                return Err(GraphError::TooLarge);
            }
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::EndpointOutOfRange {
                        edge: id,
                        vertex: x,
                        n,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop {
                    edge: id,
                    vertex: u,
                });
            }
            if !length.is_admissible() {
                return Err(GraphError::InadmissibleLength { edge: id });
            }
            list.push(Edge { u, v, length });
        }

        let mut degree = vec![0usize; n + 1];
        for e in &list {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut adj_start = vec![0usize; n + 1];
        for x in 0..n {
            adj_start[x + 1] = adj_start[x] + degree[x];
        }
        let mut fill = adj_start.clone();
        let mut adj = vec![(0, 0, W::zero()); 2 * list.len()];
        for (id, e) in list.iter().enumerate() {
            let id = id as u32;
            adj[fill[e.u]] = (id, e.v as u32, e.length);
            fill[e.u] += 1;
            adj[fill[e.v]] = (id, e.u as u32, e.length);
            fill[e.v] += 1;
        }

        Ok(Graph {
            n,
            edges: list,
            adj_start,
            adj,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &Edge<W> {
        &self.edges[e]
    }

    #[inline]
    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    #[inline]
    pub fn length(&self, e: EdgeId) -> W {
        self.edges[e].length
    }

    /// Incident `(edge, other endpoint)` pairs of `x`, in edge-id order.
    #[inline]
    pub fn incident(&self, x: VertexId) -> impl ExactSizeIterator<Item = (EdgeId, VertexId)> + '_ {
        self.adj[self.adj_start[x]..self.adj_start[x + 1]]
            .iter()
            .map(|&(e, v, _)| (e as EdgeId, v as VertexId))
    }

    #[inline]
    pub fn degree(&self, x: VertexId) -> usize {
        self.adj_start[x + 1] - self.adj_start[x]
    }

    /// Incident `(edge, other endpoint, length)` triples of `x`.
    #[inline]
    pub fn arcs(&self, x: VertexId) -> impl Iterator<Item = (EdgeId, VertexId, W)> + '_ {
        self.adj[self.adj_start[x]..self.adj_start[x + 1]]
            .iter()
            .map(|&(e, v, len)| (e as EdgeId, v as VertexId, len))
    }

    #[inline]
    pub fn is_incident(&self, e: EdgeId, x: VertexId) -> bool {
        e < self.m() && self.edges[e].other(x).is_some()
    }

    pub fn check_vertex(&self, x: VertexId) -> Result<(), GraphError> {
        if x < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: x,
                n: self.n,
            })
        }
    }

    pub fn view(&self) -> GraphView<'_, W> {
        GraphView {
            graph: self,
            removed: None,
        }
    }

    /// The graph with the edges in `mask` hidden.
    pub fn without<'a>(&'a self, mask: &'a EdgeMask) -> GraphView<'a, W> {
        GraphView {
            graph: self,
            removed: Some(mask),
        }
    }
}

impl<W: PartialEq> PartialEq for Graph<W> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

/// A sorted, duplicate-free set of edge ids. Used for known failures,
/// scenarios and memo keys.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(Vec<EdgeId>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(Vec::new())
    }

    /// Returns `false` if `e` was already present.
    pub fn insert(&mut self, e: EdgeId) -> bool {
        match self.0.binary_search(&e) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, e);
                true
            }
        }
    }

    pub fn with(&self, e: EdgeId) -> EdgeSet {
        let mut s = self.clone();
        s.insert(e);
        s
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }

    pub fn to_mask(&self, m: usize) -> EdgeMask {
        let mut mask = EdgeMask::empty(m);
        for e in self.iter() {
            mask.remove(e);
        }
        mask
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        let mut v: Vec<EdgeId> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        EdgeSet(v)
    }
}

/// Dense removed-edge bitmap backing a [`GraphView`].
#[derive(Clone, Debug)]
pub struct EdgeMask {
    removed: Vec<bool>,
}

impl EdgeMask {
    pub fn empty(m: usize) -> Self {
        EdgeMask {
            removed: vec![false; m],
        }
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.removed[e] = true;
    }

    #[inline]
    pub fn is_removed(&self, e: EdgeId) -> bool {
        self.removed[e]
    }
}

/// A graph with an optional set of hidden edges. Edge ids and vertex ids
/// are those of the underlying graph.
pub struct GraphView<'g, W> {
    graph: &'g Graph<W>,
    removed: Option<&'g EdgeMask>,
}

impl<W> Clone for GraphView<'_, W> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<W> Copy for GraphView<'_, W> {}

impl<'g, W: Weight> GraphView<'g, W> {
    #[inline]
    pub fn graph(&self) -> &'g Graph<W> {
        self.graph
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.graph.n
    }

    #[inline]
    pub fn is_active(&self, e: EdgeId) -> bool {
        match self.removed {
            Some(mask) => !mask.is_removed(e),
            None => true,
        }
    }

    /// Active incident `(edge, other endpoint)` pairs of `x`, in edge-id order.
    #[inline]
    pub fn incident(&self, x: VertexId) -> impl Iterator<Item = (EdgeId, VertexId)> + 'g {
        let removed = self.removed;
        self.graph
            .incident(x)
            .filter(move |&(e, _)| removed.is_none_or(|mask| !mask.is_removed(e)))
    }

    /// Active incident `(edge, other endpoint, length)` triples of `x`.
    #[inline]
    pub fn arcs(&self, x: VertexId) -> impl Iterator<Item = (EdgeId, VertexId, W)> + 'g {
        let removed = self.removed;
        self.graph
            .arcs(x)
            .filter(move |&(e, _, _)| removed.is_none_or(|mask| !mask.is_removed(e)))
    }

    /// Active edge ids in increasing order.
    pub fn active_edges(&self) -> impl Iterator<Item = EdgeId> + 'g {
        let removed = self.removed;
        (0..self.graph.m()).filter(move |&e| removed.is_none_or(|mask| !mask.is_removed(e)))
    }
}

impl<'g, W: Weight> From<&'g Graph<W>> for GraphView<'g, W> {
    fn from(g: &'g Graph<W>) -> Self {
        g.view()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing \"p orp <n> <m>\" header")]
    MissingHeader,
    #[error("malformed header at line {line}")]
    MalformedHeader { line: usize },
    #[error("duplicate header at line {line}")]
    DuplicateHeader { line: usize },
    #[error("edge before header at line {line}")]
    EdgeBeforeHeader { line: usize },
    #[error("malformed edge at line {line}")]
    MalformedEdge { line: usize },
    #[error("negative length at line {line}")]
    NegativeLength { line: usize },
    #[error("invalid length at line {line}")]
    InvalidLength { line: usize },
    #[error("self-loop at line {line}")]
    SelfLoop { line: usize },
    #[error("endpoint {vertex} out of range 1..={n} at line {line}")]
    EndpointOutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("unrecognized line {line}")]
    UnknownLine { line: usize },
    #[error("header declares {expected} edges but {found} were given")]
    EdgeCountMismatch { expected: usize, found: usize },
}

/// Parses the line-oriented graph format.
///
/// ```text
/// c comment
/// p orp <n> <m>
/// e <u> <v> <length>     (1-based endpoints, edge id = order of appearance)
/// ```
pub fn parse_graph<W: Weight>(text: &str) -> Result<Graph<W>, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(ParseError::DuplicateHeader { line });
                }
                let fields: Vec<&str> = tok.collect();
                let parsed = match fields.as_slice() {
                    ["orp", n, m] => n.parse::<usize>().ok().zip(m.parse::<usize>().ok()),
                    _ => None,
                };
                header = Some(parsed.ok_or(ParseError::MalformedHeader { line })?);
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(ParseError::EdgeBeforeHeader { line });
                };
                let fields: Vec<&str> = tok.collect();
                let [u, v, len] = fields.as_slice() else {
                    return Err(ParseError::MalformedEdge { line });
                };
                let endpoint = |s: &str| -> Result<usize, ParseError> {
                    let x: usize = s.parse().map_err(|_| ParseError::MalformedEdge { line })?;
                    if x == 0 || x > n {
                        return Err(ParseError::EndpointOutOfRange { line, vertex: x, n });
                    }
                    Ok(x - 1)
                };
                let (u, v) = (endpoint(u)?, endpoint(v)?);
                if u == v {
                    return Err(ParseError::SelfLoop { line });
                }
                if len.starts_with('-') {
                    return Err(ParseError::NegativeLength { line });
                }
                let length: W = len
                    .parse()
                    .map_err(|_| ParseError::InvalidLength { line })?;
                if !length.is_admissible() {
                    return Err(ParseError::InvalidLength { line });
                }
                edges.push((u, v, length));
            }
            _ => return Err(ParseError::UnknownLine { line }),
        }
    }

    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if edges.len() != m {
        return Err(ParseError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    // every structural check already ran per line
    Ok(Graph::from_edges(n, edges).expect("validated while parsing"))
}

/// Canonical text form; `parse_graph(write_graph(g)) == g`.
pub fn write_graph<W: Weight>(g: &Graph<W>) -> String {
    let mut out = String::with_capacity(16 + 24 * g.m());
    let _ = writeln!(out, "p orp {} {}", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.length);
    }
    out
}

/// Shortest-path tree toward a single destination.
#[derive(Clone, Debug)]
pub struct ShortestPathTree<W> {
    pub dest: VertexId,
    /// First edge on the tree path to `dest`; `None` at `dest` and at
    /// vertices that cannot reach it.
    pub parent_edge: Vec<Option<EdgeId>>,
    pub parent: Vec<Option<VertexId>>,
    /// `d*(u)`, the distance from `u` to `dest`.
    pub dstar: Vec<Cost<W>>,
    /// Reachable vertices in settling order; every parent precedes its children.
    pub order: Vec<VertexId>,
    /// Priority-queue pops, stale entries included.
    pub heap_pops: usize,
}

impl<W: Weight> ShortestPathTree<W> {
    #[inline]
    pub fn reaches(&self, x: VertexId) -> bool {
        self.dstar[x].is_finite()
    }

    /// Tree edges, i.e. edges that are someone's `parent_edge`.
    pub fn is_tree_edge(&self, g: &Graph<W>, e: EdgeId) -> bool {
        let edge = g.edge(e);
        self.parent_edge[edge.u] == Some(e) || self.parent_edge[edge.v] == Some(e)
    }
}

/// Dijkstra from `t` over the undirected graph.
///
/// Heap ties go to the smaller vertex id. Among equally short parents the
/// smaller `(vertex id, edge id)` pair wins, so the tree is reproducible.
pub fn dijkstra_tree<'g, W: Weight>(
    view: impl Into<GraphView<'g, W>>,
    t: VertexId,
) -> ShortestPathTree<W> {
    let view = view.into();
    let n = view.n();
    assert!(t < n, "destination {t} out of range");

    // the only per-vertex array read on every relaxation is `dist`; parent
    // records are touched on improvement only
    let mut dist = vec![W::zero(); n];
    let mut via = vec![(NO_EDGE, NO_EDGE); n];
    let mut reached = FixedBitSet::with_capacity(n);
    let mut settled = FixedBitSet::with_capacity(n);
    let mut order = Vec::with_capacity(n);
    let mut heap = RadixHeap::new();
    let mut heap_pops = 0usize;

    reached.insert(t);
    heap.push(0, t);
    while let Some((_, u)) = heap.pop() {
        heap_pops += 1;
        // superseded by a shorter label popped earlier
        if settled.put(u) {
            continue;
        }
        let d = dist[u];
        order.push(u);
        for (e, v, len) in view.arcs(u) {
            if settled.contains(v) {
                continue;
            }
            let cand = d + len;
            if reached.contains(v) {
                match cand.total_cmp(&dist[v]) {
                    std::cmp::Ordering::Less => {}
                    std::cmp::Ordering::Equal => {
                        // equal length: keep the smaller (parent, edge) pair
                        let arc = (u as u32, e as u32);
                        if arc < via[v] {
                            via[v] = arc;
                        }
                        continue;
                    }
                    std::cmp::Ordering::Greater => continue,
                }
            }
            reached.insert(v);
            dist[v] = cand;
            via[v] = (u as u32, e as u32);
            heap.push(cand.radix_key(), v);
        }
    }

    let some = |x: u32| (x != NO_EDGE).then_some(x as usize);
    let parent_edge = via.iter().map(|&(_, e)| some(e)).collect();
    let parent = via.iter().map(|&(p, _)| some(p)).collect();
    let dstar = (0..n)
        .map(|x| {
            if reached.contains(x) {
                Cost::Finite(dist[x])
            } else {
                Cost::Infinite
            }
        })
        .collect();

    ShortestPathTree {
        dest: t,
        parent_edge,
        parent,
        dstar,
        order,
        heap_pops,
    }
}
