//! Slow reference implementations. Nothing here calls into the fast
//! solvers; only the `Graph` type and `Cost` arithmetic are shared.

use std::collections::HashMap;

use thiserror::Error;

use crate::cost::{Cost, Weight};
use crate::graph::{EdgeId, Graph, VertexId};

/// Largest vertex count for simple-path enumeration.
pub const PATH_ENUMERATION_LIMIT: usize = 12;
/// Largest `n * #removed-sets` state space for the k-failure fixpoint.
pub const FIXPOINT_STATE_LIMIT: usize = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{n} vertices exceed the path-enumeration guard of {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("{states} states exceed the fixpoint guard of {limit}")]
    TooManyStates { states: usize, limit: usize },
}

/// `O(n^2)` Dijkstra toward `t` ignoring edge `skip`, scanning for the
/// minimum instead of using a heap.
fn scan_dijkstra<W: Weight>(g: &Graph<W>, t: VertexId, skip: Option<EdgeId>) -> Vec<Cost<W>> {
    let n = g.n();
    let mut dist = vec![Cost::Infinite; n];
    let mut done = vec![false; n];
    dist[t] = Cost::zero();
    loop {
        let mut best: Option<VertexId> = None;
        for x in 0..n {
            if !done[x] && dist[x].is_finite() && best.is_none_or(|b| dist[x] < dist[b]) {
                best = Some(x);
            }
        }
        let Some(u) = best else { break };
        done[u] = true;
        for (e, edge) in g.edges().iter().enumerate() {
            if Some(e) == skip {
                continue;
            }
            let v = if edge.u == u {
                edge.v
            } else if edge.v == u {
                edge.u
            } else {
                continue;
            };
            let cand = dist[u] + edge.length;
            if cand < dist[v] {
                dist[v] = cand;
            }
        }
    }
    dist
}

/// Distances to `t` by label correcting over the edge list until stable.
pub fn brute_distances<W: Weight>(g: &Graph<W>, t: VertexId) -> Vec<Cost<W>> {
    let mut dist = vec![Cost::Infinite; g.n()];
    dist[t] = Cost::zero();
    let mut changed = true;
    while changed {
        changed = false;
        for edge in g.edges() {
            for (a, b) in [(edge.u, edge.v), (edge.v, edge.u)] {
                let cand = dist[b] + edge.length;
                if cand < dist[a] {
                    dist[a] = cand;
                    changed = true;
                }
            }
        }
    }
    dist
}

/// `d_{G-e}(u, t)`, from scratch.
pub fn brute_svalue<W: Weight>(g: &Graph<W>, t: VertexId, u: VertexId, e: EdgeId) -> Cost<W> {
    scan_dijkstra(g, t, Some(e))[u]
}

/// Distances to `t` in `G - e` for every vertex.
pub fn brute_svalues_without<W: Weight>(g: &Graph<W>, t: VertexId, e: EdgeId) -> Vec<Cost<W>> {
    scan_dijkstra(g, t, Some(e))
}

/// Every simple `s`-`t` path as an edge list, by depth-first search.
pub fn brute_simple_paths<W: Weight>(
    g: &Graph<W>,
    s: VertexId,
    t: VertexId,
) -> Result<Vec<Vec<EdgeId>>, OracleError> {
    if g.n() > PATH_ENUMERATION_LIMIT {
        return Err(OracleError::TooManyVertices {
            n: g.n(),
            limit: PATH_ENUMERATION_LIMIT,
        });
    }
    fn dfs<W: Weight>(
        g: &Graph<W>,
        at: VertexId,
        t: VertexId,
        on_path: &mut [bool],
        path: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
    ) {
        if at == t {
            out.push(path.clone());
            return;
        }
        for (e, edge) in g.edges().iter().enumerate() {
            let next = if edge.u == at {
                edge.v
            } else if edge.v == at {
                edge.u
            } else {
                continue;
            };
            if on_path[next] {
                continue;
            }
            on_path[next] = true;
            path.push(e);
            dfs(g, next, t, on_path, path, out);
            path.pop();
            on_path[next] = false;
        }
    }
    let mut on_path = vec![false; g.n()];
    on_path[s] = true;
    let mut out = Vec::new();
    dfs(g, s, t, &mut on_path, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Worst-case cost of a path from `s`: the full length, or for any edge,
/// the prefix before it plus the distance to `t` with that edge gone.
pub fn brute_val<W: Weight>(g: &Graph<W>, s: VertexId, t: VertexId, path: &[EdgeId]) -> Cost<W> {
    let mut svalue = |u, e| brute_svalue(g, t, u, e);
    val_with(g, s, path, &mut svalue)
}

fn val_with<W: Weight>(
    g: &Graph<W>,
    s: VertexId,
    path: &[EdgeId],
    svalue: &mut impl FnMut(VertexId, EdgeId) -> Cost<W>,
) -> Cost<W> {
    let mut at = s;
    let mut prefix = Cost::zero();
    let mut worst = Cost::zero();
    for &e in path {
        worst = worst.max(prefix + svalue(at, e));
        let edge = g.edge(e);
        prefix = prefix + edge.length;
        at = if edge.u == at { edge.v } else { edge.u };
    }
    worst.max(prefix)
}

/// A simple path with its worst-case cost and its length.
pub type PathValue<W> = (Vec<EdgeId>, Cost<W>, W);

/// Every simple `s`-`t` path with its worst-case cost and length.
pub fn brute_path_values<W: Weight>(
    g: &Graph<W>,
    s: VertexId,
    t: VertexId,
) -> Result<Vec<PathValue<W>>, OracleError> {
    let paths = brute_simple_paths(g, s, t)?;
    let mut cache: HashMap<EdgeId, Vec<Cost<W>>> = HashMap::new();
    let mut svalue = |u: VertexId, e: EdgeId| {
        cache
            .entry(e)
            .or_insert_with(|| scan_dijkstra(g, t, Some(e)))[u]
    };
    Ok(paths
        .into_iter()
        .map(|p| {
            let val = val_with(g, s, &p, &mut svalue);
            let len = p.iter().fold(W::zero(), |acc, &e| acc + g.length(e));
            (p, val, len)
        })
        .collect())
}

/// Minimum worst-case cost over all simple `s`-`t` paths.
pub fn brute_orp_value<W: Weight>(
    g: &Graph<W>,
    s: VertexId,
    t: VertexId,
) -> Result<Cost<W>, OracleError> {
    Ok(brute_path_values(g, s, t)?
        .into_iter()
        .map(|(_, val, _)| val)
        .min()
        .unwrap_or(Cost::Infinite))
}

fn removed_sets(m: usize, k: usize) -> Vec<Vec<EdgeId>> {
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..k.min(m) {
        let mut next = Vec::new();
        for set in &layer {
            let from = set.last().map_or(0, |&e: &EdgeId| e + 1);
            for e in from..m {
                let mut grown = set.clone();
                grown.push(e);
                next.push(grown);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// `y^k(v)` for every vertex by iterating the min-max recursion to its
/// fixpoint over states (vertex, removed set), starting from infinity.
pub fn brute_korp_values<W: Weight>(
    g: &Graph<W>,
    t: VertexId,
    k: usize,
) -> Result<Vec<Cost<W>>, OracleError> {
    let n = g.n();
    let m = g.m();
    let sets = removed_sets(m, k);
    let states = sets.len().saturating_mul(n);
    if states > FIXPOINT_STATE_LIMIT {
        return Err(OracleError::TooManyStates {
            states,
            limit: FIXPOINT_STATE_LIMIT,
        });
    }
    let index: HashMap<&[EdgeId], usize> = sets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    // successor-set index for each (set, edge not in set), when budget allows
    let grown: Vec<Vec<Option<usize>>> = sets
        .iter()
        .map(|set| {
            (0..m)
                .map(|e| {
                    if set.len() >= k || set.contains(&e) {
                        return None;
                    }
                    let mut bigger = set.clone();
                    bigger.push(e);
                    bigger.sort_unstable();
                    Some(index[bigger.as_slice()])
                })
                .collect()
        })
        .collect();

    let mut value = vec![vec![Cost::Infinite; n]; sets.len()];
    for row in &mut value {
        row[t] = Cost::zero();
    }
    let mut changed = true;
    while changed {
        changed = false;
        for si in 0..sets.len() {
            for v in 0..n {
                if v == t {
                    continue;
                }
                let mut best = Cost::Infinite;
                for (e, edge) in g.edges().iter().enumerate() {
                    let u = if edge.u == v {
                        edge.v
                    } else if edge.v == v {
                        edge.u
                    } else {
                        continue;
                    };
                    if sets[si].contains(&e) {
                        continue;
                    }
                    let through = value[si][u] + edge.length;
                    let failed = match grown[si][e] {
                        Some(sj) => value[sj][v],
                        None => Cost::zero(),
                    };
                    best = best.min(through.max(failed));
                }
                if best != value[si][v] {
                    value[si][v] = best;
                    changed = true;
                }
            }
        }
    }
    Ok(value.swap_remove(0))
}

pub fn brute_korp_value<W: Weight>(
    g: &Graph<W>,
    s: VertexId,
    t: VertexId,
    k: usize,
) -> Result<Cost<W>, OracleError> {
    Ok(brute_korp_values(g, t, k)?[s])
}

/// Two rounds of augmenting paths on the unit-capacity graph.
pub fn has_two_edge_disjoint_paths<W: Weight>(g: &Graph<W>, s: VertexId, t: VertexId) -> bool {
    if s == t {
        return true;
    }
    let n = g.n();
    // arc 2e goes u->v, arc 2e+1 goes v->u; residual capacity starts at 1
    let mut residual = vec![1u8; 2 * g.m()];
    let tail = |a: usize| {
        let edge = g.edge(a / 2);
        if a.is_multiple_of(2) {
            edge.u
        } else {
            edge.v
        }
    };
    let head = |a: usize| tail(a ^ 1);
    for _ in 0..2 {
        let mut via: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for a in 0..residual.len() {
                if residual[a] > 0 && tail(a) == x && !seen[head(a)] {
                    seen[head(a)] = true;
                    via[head(a)] = Some(a);
                    queue.push_back(head(a));
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut x = t;
        while let Some(a) = via[x] {
            residual[a] -= 1;
            residual[a ^ 1] += 1;
            x = tail(a);
        }
    }
    true
}
