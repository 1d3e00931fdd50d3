//! Detour lengths for every shortest-path-tree edge.
//!
//! For a vertex `u` with tree edge `uu'`, the detour value is the distance
//! from `u` to the destination once `uu'` is gone. It equals
//! `c(vw) - d*(u)` for the cheapest non-tree edge `vw` with exactly one
//! endpoint below `u`, where `c(vw) = d*(v) + d*(w) + len(vw)`. Scanning
//! non-tree edges by increasing `c` and contracting every tree edge as soon
//! as it is covered assigns each tree edge exactly once.

mod dsu;
mod file;
mod lca;

use fixedbitset::FixedBitSet;
use thiserror::Error;

pub use dsu::DisjointSets;
pub use file::{read_table, write_table, LoadedTable, TableError};
pub use lca::offline_lca;

use crate::cost::{Cost, Weight};
use crate::graph::{EdgeId, Graph, GraphView, ShortestPathTree, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DetourError {
    #[error("vertex {vertex} is not in the shortest-path tree")]
    NotInTree { vertex: VertexId },
    #[error("edge {edge} is not incident to vertex {vertex}")]
    NotIncident { vertex: VertexId, edge: EdgeId },
}

/// Work counters of one [`build_detour_table`] run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DetourStats {
    /// Tree edges contracted; never exceeds `n - 1`.
    pub contractions: usize,
    /// Candidate edges that assigned at least one tree edge.
    pub covering_edges: usize,
    /// Candidate edges dropped because both endpoints were already merged.
    pub discarded_edges: usize,
}

/// Per-vertex detour value and swap edge on top of the shortest-path tree.
///
/// Apart from the per-edge `c` values this is `O(n)`: the tree plus one
/// cost and one edge id per vertex.
#[derive(Clone, Debug)]
pub struct DetourTable<W> {
    tree: ShortestPathTree<W>,
    svalue: Vec<Cost<W>>,
    swap_edge: Vec<Option<EdgeId>>,
    cvalue: Vec<Option<Cost<W>>>,
    stats: DetourStats,
}

impl<W: Weight> DetourTable<W> {
    pub fn tree(&self) -> &ShortestPathTree<W> {
        &self.tree
    }

    pub fn dest(&self) -> VertexId {
        self.tree.dest
    }

    #[inline]
    pub fn dstar(&self, x: VertexId) -> Cost<W> {
        self.tree.dstar[x]
    }

    /// Distance from `x` to the destination avoiding `x`'s tree edge.
    /// `0` at the destination, infinite where no detour exists.
    #[inline]
    pub fn svalue(&self, x: VertexId) -> Cost<W> {
        self.svalue[x]
    }

    pub fn svalues(&self) -> &[Cost<W>] {
        &self.svalue
    }

    #[inline]
    pub fn swap_edge(&self, x: VertexId) -> Option<EdgeId> {
        self.swap_edge[x]
    }

    pub fn swap_edges(&self) -> &[Option<EdgeId>] {
        &self.swap_edge
    }

    /// `c(e)` for non-tree edges, `None` for tree or hidden edges.
    pub fn cvalue(&self, e: EdgeId) -> Option<Cost<W>> {
        self.cvalue[e]
    }

    pub fn stats(&self) -> DetourStats {
        self.stats
    }

    /// `d_{G-e}(x, t)` for an edge `e` assumed incident to `x`.
    #[inline]
    pub fn svalue_at(&self, x: VertexId, e: EdgeId) -> Cost<W> {
        if self.tree.parent_edge[x] == Some(e) {
            self.svalue[x]
        } else {
            self.tree.dstar[x]
        }
    }

    /// Checked form of [`svalue_at`](Self::svalue_at).
    pub fn svalue_query(
        &self,
        g: &Graph<W>,
        x: VertexId,
        e: EdgeId,
    ) -> Result<Cost<W>, DetourError> {
        if x >= g.n() || !g.is_incident(e, x) {
            return Err(DetourError::NotIncident { vertex: x, edge: e });
        }
        Ok(self.svalue_at(x, e))
    }

    /// Assembles a table from the compact per-vertex encoding: tree plus swap
    /// edge. Detour values are recomputed as `c(swap) - d*(u)`.
    pub(crate) fn from_parts(
        tree: ShortestPathTree<W>,
        swap_edge: Vec<Option<EdgeId>>,
        cvalue: Vec<Option<Cost<W>>>,
    ) -> Self {
        let svalue = (0..tree.dstar.len())
            .map(|x| initial_svalue(&tree, x))
            .zip(&swap_edge)
            .enumerate()
            .map(|(x, (init, swap))| match swap {
                Some(f) => cvalue[*f].expect("swap edge is a non-tree edge").minus(
                    tree.dstar[x]
                        .finite()
                        .expect("swap vertex reaches the destination"),
                ),
                None => init,
            })
            .collect();
        DetourTable {
            tree,
            svalue,
            swap_edge,
            cvalue,
            stats: DetourStats::default(),
        }
    }
}

fn initial_svalue<W: Weight>(tree: &ShortestPathTree<W>, x: VertexId) -> Cost<W> {
    if x == tree.dest {
        Cost::zero()
    } else {
        Cost::Infinite
    }
}

/// `c(vw) = d*(v) + d*(w) + len(vw)` for every active non-tree edge,
/// indexed by edge id. Infinite when an endpoint cannot reach the
/// destination; `None` for tree edges and hidden edges.
pub fn compute_c_values<'g, W: Weight>(
    view: impl Into<GraphView<'g, W>>,
    spt: &ShortestPathTree<W>,
) -> Vec<Option<Cost<W>>> {
    let view = view.into();
    let g = view.graph();
    // Tree edges from a bitset over edge ids and distances as bare lengths:
    // the per-edge random reads then hit an 8-byte-per-vertex array.
    let mut tree_edge = FixedBitSet::with_capacity(g.m());
    for e in spt.parent_edge.iter().flatten() {
        tree_edge.insert(*e);
    }
    let mut reached = FixedBitSet::with_capacity(g.n());
    let dist: Vec<W> = spt
        .dstar
        .iter()
        .enumerate()
        .map(|(x, d)| {
            reached.set(x, d.is_finite());
            d.finite().unwrap_or(W::zero())
        })
        .collect();
    let mut c = vec![None; g.m()];
    for e in view.active_edges() {
        if tree_edge.contains(e) {
            continue;
        }
        let edge = g.edge(e);
        let cv = dist[edge.u] + dist[edge.v] + edge.length;
        c[e] = Some(if reached.contains(edge.u) && reached.contains(edge.v) {
            Cost::Finite(cv)
        } else {
            Cost::Infinite
        });
    }
    c
}

/// LCA label of each listed edge's endpoints.
pub fn compute_lca_labels<W: Weight>(
    g: &Graph<W>,
    spt: &ShortestPathTree<W>,
    edges: &[EdgeId],
) -> Result<Vec<VertexId>, DetourError> {
    let pairs: Vec<_> = edges.iter().map(|&e| (g.edge(e).u, g.edge(e).v)).collect();
    offline_lca(spt, &pairs)
}

/// Computes every tree edge's detour value in `O(m log n)`.
///
/// Candidates are the non-tree edges with finite `c`, sorted by
/// `(c, edge id)`. Each candidate walks both endpoints up the contracted
/// tree to its LCA; every super-vertex passed gets its detour from this
/// candidate and is merged into its parent.
pub fn build_detour_table<'g, W: Weight>(
    view: impl Into<GraphView<'g, W>>,
    spt: ShortestPathTree<W>,
) -> DetourTable<W> {
    let view = view.into();
    let g = view.graph();
    let n = g.n();
    let cvalue = compute_c_values(view, &spt);

    let mut candidates: Vec<(W, EdgeId, u32, u32)> = cvalue
        .iter()
        .enumerate()
        .filter_map(|(e, c)| {
            let edge = g.edge(e);
            c.and_then(Cost::finite)
                .map(|c| (c, e, edge.u as u32, edge.v as u32))
        })
        .collect();
    candidates.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut svalue: Vec<Cost<W>> = (0..n).map(|x| initial_svalue(&spt, x)).collect();
    let mut swap_edge = vec![None; n];
    let mut stats = DetourStats::default();

    // tree depth and parent side by side, for the climb below
    let mut up = vec![(0u32, u32::MAX); n];
    for &x in &spt.order {
        if let Some(p) = spt.parent[x] {
            up[x] = (up[p].0 + 1, p as u32);
        }
    }

    // Super-vertices as a union-find forest that is always linked toward the
    // destination, so every root is the topmost vertex of its super-vertex.
    let mut link: Vec<u32> = (0..n as u32).collect();
    let top = |link: &mut Vec<u32>, mut x: u32| {
        while link[x as usize] != x {
            let grand = link[link[x as usize] as usize];
            link[x as usize] = grand;
            x = grand;
        }
        x
    };
    let tree_edges = spt.order.len().saturating_sub(1);

    for &(c, e, u, v) in &candidates {
        if stats.contractions == tree_edges {
            break;
        }
        let mut a = top(&mut link, u);
        let mut b = top(&mut link, v);
        if a == b {
            stats.discarded_edges += 1;
            continue;
        }
        // Climb from both endpoints, always moving the deeper top. A deeper
        // top cannot be an ancestor of the other side, so its tree edge lies
        // below the LCA on the covered cycle; the climbs meet at the LCA's
        // super-vertex.
        while a != b {
            if up[a as usize].0 < up[b as usize].0 {
                std::mem::swap(&mut a, &mut b);
            }
            let ai = a as usize;
            let da = spt.dstar[ai].finite().expect("tree vertex");
            svalue[ai] = Cost::Finite(c - da);
            swap_edge[ai] = Some(e);
            let above = top(&mut link, up[ai].1);
            link[ai] = above;
            stats.contractions += 1;
            a = above;
        }
        stats.covering_edges += 1;
    }

    DetourTable {
        tree: spt,
        svalue,
        swap_edge,
        cvalue,
        stats,
    }
}

/// Shortest-path tree and detour table for destination `t` in one call.
pub fn detour_table<'g, W: Weight>(
    view: impl Into<GraphView<'g, W>>,
    t: VertexId,
) -> DetourTable<W> {
    let view = view.into();
    let spt = crate::graph::dijkstra_tree(view, t);
    build_detour_table(view, spt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::dijkstra_tree;

    fn triangle() -> Graph<u64> {
        Graph::from_edges(3, [(0, 2, 1), (0, 1, 1), (1, 2, 1)]).unwrap()
    }

    /// Independent detour value: Dijkstra-free Bellman-Ford on `G - e`.
    fn slow_svalue(g: &Graph<u64>, t: VertexId, x: VertexId, skip: EdgeId) -> Cost<u64> {
        let mut d = vec![Cost::Infinite; g.n()];
        d[t] = Cost::Finite(0);
        for _ in 0..g.n() {
            for (id, e) in g.edges().iter().enumerate() {
                if id == skip {
                    continue;
                }
                let (a, b) = (d[e.u].plus(e.length), d[e.v].plus(e.length));
                d[e.v] = d[e.v].min(a);
                d[e.u] = d[e.u].min(b);
            }
        }
        d[x]
    }

    #[test]
    fn triangle_c_values() {
        let g = triangle();
        let spt = dijkstra_tree(&g, 2);
        assert_eq!(
            compute_c_values(&g, &spt),
            vec![None, Some(Cost::Finite(3)), None]
        );
    }

    #[test]
    fn unreachable_endpoint_gives_infinite_c() {
        // 0-1 tree edge to t=1; 2-3 isolated pair
        let g = Graph::from_edges(4, [(0, 1, 1u64), (2, 3, 1)]).unwrap();
        let spt = dijkstra_tree(&g, 1);
        assert_eq!(compute_c_values(&g, &spt)[1], Some(Cost::Infinite));
    }

    #[test]
    fn zero_length_edge_between_zero_distance_vertices() {
        // 0 and 1 both hang off t=2 with zero-length edges, plus a zero 0-1 edge
        let g = Graph::from_edges(3, [(0, 2, 0u64), (1, 2, 0), (0, 1, 0)]).unwrap();
        let spt = dijkstra_tree(&g, 2);
        let c = compute_c_values(&g, &spt);
        assert_eq!(
            c.iter().flatten().collect::<Vec<_>>(),
            vec![&Cost::Finite(0)]
        );
        let dt = build_detour_table(&g, spt);
        assert_eq!(
            dt.svalues(),
            &[Cost::Finite(0), Cost::Finite(0), Cost::Finite(0)]
        );
    }

    #[test]
    fn lca_labels() {
        let g = triangle();
        let spt = dijkstra_tree(&g, 2);
        assert_eq!(compute_lca_labels(&g, &spt, &[1]).unwrap(), vec![2]);
    }

    #[test]
    fn triangle_table() {
        let g = triangle();
        let dt = detour_table(&g, 2);
        assert_eq!(dt.svalue(0), Cost::Finite(2));
        assert_eq!(dt.svalue(1), Cost::Finite(2));
        assert_eq!(dt.svalue(2), Cost::Finite(0));
        assert_eq!(dt.swap_edge(0), Some(1));
        assert_eq!(dt.swap_edge(1), Some(1));
        assert_eq!(dt.stats().contractions, 2);
        for x in 0..3 {
            for (e, _) in g.incident(x) {
                assert_eq!(dt.svalue_query(&g, x, e).unwrap(), slow_svalue(&g, 2, x, e));
            }
        }
    }

    #[test]
    fn queries_on_triangle() {
        let g = triangle();
        let dt = detour_table(&g, 2);
        assert_eq!(dt.svalue_query(&g, 0, 1), Ok(Cost::Finite(1)));
        assert_eq!(dt.svalue_query(&g, 0, 0), Ok(Cost::Finite(2)));
        assert_eq!(dt.svalue_query(&g, 2, 0), Ok(Cost::Finite(0)));
        assert_eq!(dt.svalue_query(&g, 2, 2), Ok(Cost::Finite(0)));
        assert_eq!(
            dt.svalue_query(&g, 2, 1),
            Err(DetourError::NotIncident { vertex: 2, edge: 1 })
        );
    }

    #[test]
    fn bridges_have_no_detour() {
        let g = Graph::from_edges(3, [(0, 1, 1u64), (1, 2, 1)]).unwrap();
        let dt = detour_table(&g, 2);
        assert_eq!(dt.svalue(0), Cost::Infinite);
        assert_eq!(dt.svalue(1), Cost::Infinite);
        assert_eq!(dt.swap_edge(0), None);
    }

    #[test]
    fn parallel_edge_is_the_detour() {
        let g = Graph::from_edges(2, [(0, 1, 10u64), (0, 1, 12)]).unwrap();
        let dt = detour_table(&g, 1);
        assert_eq!(dt.tree().parent_edge[0], Some(0));
        assert_eq!(dt.svalue(0), Cost::Finite(12));
        assert_eq!(slow_svalue(&g, 1, 0, 0), Cost::Finite(12));
    }

    #[test]
    fn c_ties_resolve_to_smaller_edge_id() {
        // two parallel detours of equal length for the single tree edge
        let g = Graph::from_edges(2, [(0, 1, 1u64), (0, 1, 2), (0, 1, 2)]).unwrap();
        let dt = detour_table(&g, 1);
        assert_eq!(dt.swap_edge(0), Some(1));
    }

    #[test]
    fn hidden_edges_do_not_cover() {
        let g = triangle();
        let mask = crate::graph::EdgeSet::from_iter([1]).to_mask(g.m());
        let dt = detour_table(g.without(&mask), 2);
        assert_eq!(dt.svalue(0), Cost::Infinite);
        assert_eq!(dt.cvalue(1), None);
    }
}
