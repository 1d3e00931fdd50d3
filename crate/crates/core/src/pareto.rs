//! Shortest path subject to a bound on robust length.
//!
//! Dijkstra from the source in which an edge `uv` may only be relaxed when
//! the detour from `u` avoiding `uv`, started after the prefix `d(u)`,
//! still arrives within the bound. The robust length also counts the full
//! path length, so the destination label itself must respect the bound.

use thiserror::Error;

use crate::cost::{Cost, Weight};
use crate::detour::DetourTable;
use crate::graph::{EdgeId, GraphView, VertexId};
use crate::heap::{VertexHeap, ABSENT};
use crate::orp::robust_length;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParetoError {
    #[error("destination is unreachable from vertex {source_vertex}")]
    Unreachable { source_vertex: VertexId },
    #[error("no path meets the robust-length bound")]
    BoundTooTight,
    #[error("detour table was built for destination {table}, not {requested}")]
    WrongDestination {
        table: VertexId,
        requested: VertexId,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParetoPath<W: Weight> {
    pub path: Vec<EdgeId>,
    pub length: W,
    pub robust_length: Cost<W>,
}

/// Shortest `s`-`t` path among those with robust length at most `bound`.
pub fn solve_pareto<'g, W: Weight>(
    view: impl Into<GraphView<'g, W>>,
    s: VertexId,
    t: VertexId,
    bound: Cost<W>,
    dt: &DetourTable<W>,
) -> Result<ParetoPath<W>, ParetoError> {
    let view = view.into();
    let g = view.graph();
    if dt.dest() != t {
        return Err(ParetoError::WrongDestination {
            table: dt.dest(),
            requested: t,
        });
    }
    if dt.dstar(s).is_infinite() {
        return Err(ParetoError::Unreachable { source_vertex: s });
    }

    let n = view.n();
    let mut d = vec![Cost::Infinite; n];
    let mut pred: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = VertexHeap::new(n);
    let mut pos = vec![ABSENT; n];
    d[s] = Cost::zero();
    heap.push_or_decrease(&mut pos, s, W::zero());

    while let Some((du, u)) = heap.pop(&mut pos) {
        let du = Cost::Finite(du);
        settled[u] = true;
        if u == t {
            break;
        }
        for (e, v) in view.incident(u) {
            if settled[v] {
                continue;
            }
            if du + dt.svalue_at(u, e) > bound {
                continue;
            }
            let cand = du.plus(g.length(e));
            if cand < d[v] {
                d[v] = cand;
                pred[v] = Some((u, e));
                heap.push_or_decrease(&mut pos, v, cand.finite().expect("finite prefix"));
            }
        }
    }

    let length = match d[t] {
        Cost::Finite(len) if d[t] <= bound => len,
        _ => return Err(ParetoError::BoundTooTight),
    };
    let mut path = Vec::new();
    let mut x = t;
    while let Some((p, e)) = pred[x] {
        path.push(e);
        x = p;
    }
    path.reverse();
    let robust = robust_length(g, dt, &path).expect("label-setting paths are simple and end at t");
    Ok(ParetoPath {
        path,
        length,
        robust_length: robust,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detour::detour_table;
    use crate::graph::Graph;

    fn four_edge() -> Graph<u64> {
        Graph::from_edges(3, [(0, 2, 4), (0, 1, 1), (1, 2, 1), (1, 2, 3)]).unwrap()
    }

    #[test]
    fn bound_four_prefers_the_shorter_path() {
        let g = four_edge();
        let dt = detour_table(&g, 2);
        let p = solve_pareto(&g, 0, 2, Cost::Finite(4), &dt).unwrap();
        assert_eq!(p.path, vec![1, 2]);
        assert_eq!(p.length, 2);
        assert_eq!(p.robust_length, Cost::Finite(4));
    }

    #[test]
    fn bound_three_is_infeasible() {
        let g = four_edge();
        let dt = detour_table(&g, 2);
        assert_eq!(
            solve_pareto(&g, 0, 2, Cost::Finite(3), &dt),
            Err(ParetoError::BoundTooTight)
        );
    }

    #[test]
    fn infinite_bound_is_plain_shortest_path() {
        let g = four_edge();
        let dt = detour_table(&g, 2);
        let p = solve_pareto(&g, 0, 2, Cost::Infinite, &dt).unwrap();
        assert_eq!(Cost::Finite(p.length), dt.dstar(0));
    }

    #[test]
    fn unreachable_is_distinguished() {
        let g = Graph::from_edges(3, [(0, 1, 1u64)]).unwrap();
        let dt = detour_table(&g, 1);
        assert_eq!(
            solve_pareto(&g, 2, 1, Cost::Infinite, &dt),
            Err(ParetoError::Unreachable { source_vertex: 2 })
        );
        // bridge: reachable, but no finite bound admits it
        assert_eq!(
            solve_pareto(&g, 0, 1, Cost::Finite(100), &dt),
            Err(ParetoError::BoundTooTight)
        );
    }

    #[test]
    fn source_at_destination() {
        let g = four_edge();
        let dt = detour_table(&g, 2);
        let p = solve_pareto(&g, 2, 2, Cost::Finite(0), &dt).unwrap();
        assert!(p.path.is_empty());
        assert_eq!(p.length, 0);
    }
}
