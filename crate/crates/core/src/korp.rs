//! Online replacement paths with up to `k` failed edges.
//!
//! `y^k(v, E)` is the min over edges `vu` of
//! `max{len(vu) + y^k(u, E), y^(k-1)(v, E - vu)}`: either the probe
//! succeeds and the adversary keeps its budget, or it fails and the walk
//! continues from `v` with one edge less and one failure spent. Each level
//! is a label-setting pass over sub-solutions of the level below;
//! sub-solutions are memoized by their removed-edge set.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use thiserror::Error;

use crate::cost::{Cost, Weight};
use crate::detour::detour_table;
use crate::graph::{dijkstra_tree, EdgeId, EdgeSet, Graph, GraphView, VertexId};
use crate::orp::{label_setting, solve_orp, OrpSolution};

/// Default largest accepted failure parameter; work grows like `m^k`.
pub const DEFAULT_FAILURE_CAP: usize = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KorpError {
    #[error("failure parameter {k} exceeds the configured cap of {cap}")]
    AboveCap { k: usize, cap: usize },
    #[error("destination {vertex} out of range")]
    BadDestination { vertex: VertexId },
}

#[derive(Clone, Debug)]
pub struct KorpSolution<W> {
    pub k: usize,
    pub dest: VertexId,
    pub yk: Vec<Cost<W>>,
    /// Minimizing edge at each vertex; `None` at the destination and where
    /// `yk` is infinite.
    pub successor_k: Vec<Option<EdgeId>>,
    pub successor: Vec<Option<VertexId>>,
}

type Memo<W> = Mutex<HashMap<(EdgeSet, usize), Arc<OrpSolution<W>>>>;

/// Memoizing solver for one graph and destination.
pub struct KorpSolver<'g, W> {
    graph: &'g Graph<W>,
    dest: VertexId,
    cap: usize,
    memo: Memo<W>,
}

impl<'g, W: Weight> KorpSolver<'g, W> {
    pub fn new(graph: &'g Graph<W>, dest: VertexId) -> Result<Self, KorpError> {
        if dest >= graph.n() {
            return Err(KorpError::BadDestination { vertex: dest });
        }
        Ok(KorpSolver {
            graph,
            dest,
            cap: DEFAULT_FAILURE_CAP,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn graph(&self) -> &'g Graph<W> {
        self.graph
    }

    pub fn dest(&self) -> VertexId {
        self.dest
    }

    /// Number of memoized sub-solutions.
    pub fn memo_len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    pub fn solve(&self, k: usize) -> Result<KorpSolution<W>, KorpError> {
        if k > self.cap {
            return Err(KorpError::AboveCap { k, cap: self.cap });
        }
        let level = self.level(&EdgeSet::new(), k);
        Ok(KorpSolution {
            k,
            dest: self.dest,
            yk: level.y.clone(),
            successor_k: level.successor_edge.clone(),
            successor: level.successor.clone(),
        })
    }

    /// `y^budget(·, E - removed)` with successor edges.
    pub fn level(&self, removed: &EdgeSet, budget: usize) -> Arc<OrpSolution<W>> {
        let key = (removed.clone(), budget);
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return Arc::clone(hit);
        }
        let computed = Arc::new(self.compute(removed, budget));
        // concurrent solvers of the same key produce identical values
        let mut memo = self.memo.lock().unwrap();
        Arc::clone(memo.entry(key).or_insert(computed))
    }

    fn compute(&self, removed: &EdgeSet, budget: usize) -> OrpSolution<W> {
        let g = self.graph;
        let mask = removed.to_mask(g.m());
        let view: GraphView<'_, W> = g.without(&mask);
        match budget {
            0 => {
                let spt = dijkstra_tree(view, self.dest);
                let mut finalize_order = spt.order.clone();
                finalize_order.extend((0..g.n()).filter(|&x| !spt.reaches(x)));
                OrpSolution {
                    dest: self.dest,
                    y: spt.dstar,
                    successor: spt.parent,
                    successor_edge: spt.parent_edge,
                    finalize_order,
                    heap_pops: spt.heap_pops,
                }
            }
            1 => solve_orp(view, &detour_table(view, self.dest)),
            b => {
                let active: Vec<EdgeId> = view.active_edges().collect();
                let subs: Vec<(EdgeId, Arc<OrpSolution<W>>)> = active
                    .par_iter()
                    .map(|&e| (e, self.level(&removed.with(e), b - 1)))
                    .collect();
                let mut by_edge: Vec<Option<Arc<OrpSolution<W>>>> = vec![None; g.m()];
                for (e, sub) in subs {
                    by_edge[e] = Some(sub);
                }
                label_setting(view, self.dest, |v, e| {
                    by_edge[e].as_ref().expect("active edge").y[v]
                })
            }
        }
    }
}

/// `y^k` for every vertex toward `t`, with the default cap.
pub fn solve_korp<W: Weight>(
    g: &Graph<W>,
    t: VertexId,
    k: usize,
) -> Result<KorpSolution<W>, KorpError> {
    KorpSolver::new(g, t)?.solve(k)
}

/// What a routing strategy does at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    /// Try to cross this incident edge.
    Take(EdgeId),
    /// At the destination.
    Halt,
    /// No way forward exists in the remaining graph.
    Stranded,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrategyError {
    #[error("{known} known failures exceed the budget of {k}")]
    BudgetExceeded { known: usize, k: usize },
}

/// Deterministic routing rule: the decision depends only on the set of
/// failures discovered so far and the current vertex.
pub trait RoutingStrategy: Sync {
    fn dest(&self) -> VertexId;

    fn decide(&self, known_failed: &EdgeSet, at: VertexId) -> Result<Decision, StrategyError>;
}

/// Follows the `(k - |F'|)`-failure solution on `G - F'`.
pub struct OptimalStrategy<'g, W> {
    solver: KorpSolver<'g, W>,
    k: usize,
}

impl<'g, W: Weight> OptimalStrategy<'g, W> {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn solver(&self) -> &KorpSolver<'g, W> {
        &self.solver
    }
}

impl<W: Weight> RoutingStrategy for OptimalStrategy<'_, W> {
    fn dest(&self) -> VertexId {
        self.solver.dest
    }

    fn decide(&self, known_failed: &EdgeSet, at: VertexId) -> Result<Decision, StrategyError> {
        if known_failed.len() > self.k {
            return Err(StrategyError::BudgetExceeded {
                known: known_failed.len(),
                k: self.k,
            });
        }
        if at == self.solver.dest {
            return Ok(Decision::Halt);
        }
        let level = self.solver.level(known_failed, self.k - known_failed.len());
        Ok(match level.successor_edge[at] {
            Some(e) => Decision::Take(e),
            None => Decision::Stranded,
        })
    }
}

pub fn optimal_strategy<W: Weight>(
    g: &Graph<W>,
    t: VertexId,
    k: usize,
) -> Result<OptimalStrategy<'_, W>, KorpError> {
    let solver = KorpSolver::new(g, t)?;
    if k > solver.cap {
        return Err(KorpError::AboveCap { k, cap: solver.cap });
    }
    Ok(OptimalStrategy { solver, k })
}
