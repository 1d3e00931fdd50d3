//! Running routing strategies against failure scenarios, the greedy
//! shortest-path strategy, and instance generators.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cost::{Cost, Weight};
use crate::graph::{dijkstra_tree, EdgeId, EdgeSet, Graph, ShortestPathTree, VertexId};
use crate::korp::{Decision, RoutingStrategy, StrategyError};

/// Largest number of scenarios [`evaluate_worst_case`] enumerates by default.
pub const DEFAULT_SCENARIO_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimulateError {
    #[error("edge {edge} does not exist")]
    UnknownEdge { edge: EdgeId },
    #[error("strategy chose edge {edge}, which is not incident to vertex {vertex}")]
    NotIncident { vertex: VertexId, edge: EdgeId },
    #[error("strategy halted at vertex {vertex}, not at the destination")]
    HaltedEarly { vertex: VertexId },
    #[error("walk exceeded the step cap of {cap}")]
    StepCapExceeded { cap: usize },
    #[error("strategy routes to {strategy}, walk asked for {requested}")]
    WrongDestination {
        strategy: VertexId,
        requested: VertexId,
    },
    #[error("{count} scenarios exceed the enumeration budget of {budget}")]
    TooManyScenarios { count: u64, budget: u64 },
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// A fixed set of failed edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scenario {
    failed: EdgeSet,
}

impl Scenario {
    pub fn none() -> Self {
        Scenario::default()
    }

    pub fn new<W: Weight>(
        g: &Graph<W>,
        edges: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Self, SimulateError> {
        let failed: EdgeSet = edges.into_iter().collect();
        if let Some(edge) = failed.iter().find(|&e| e >= g.m()) {
            return Err(SimulateError::UnknownEdge { edge });
        }
        Ok(Scenario { failed })
    }

    pub fn failed(&self) -> &EdgeSet {
        &self.failed
    }

    pub fn len(&self) -> usize {
        self.failed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.failed.is_empty()
    }
}

/// One probe. A failed probe leaves the walk where it was (`from == to`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub from: VertexId,
    pub edge: EdgeId,
    pub to: VertexId,
    pub failed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Walk<W: Weight> {
    pub steps: Vec<Step>,
    /// Sum over crossed edges; failed probes are free. Infinite if stranded.
    pub total_cost: Cost<W>,
    pub probed_failures: Vec<EdgeId>,
    pub stranded: bool,
}

impl<W: Weight> Walk<W> {
    /// Recomputes the cost from the steps alone.
    pub fn traversed_length(&self, g: &Graph<W>) -> W {
        self.steps
            .iter()
            .filter(|s| !s.failed)
            .fold(W::zero(), |acc, s| acc + g.length(s.edge))
    }
}

/// Walks from `s` following `strategy`, revealing failures from `scenario`
/// as they are probed.
///
/// Gives up after `(|scenario| + 1) * n + m` steps.
pub fn execute_walk<W: Weight, R: RoutingStrategy + ?Sized>(
    g: &Graph<W>,
    strategy: &R,
    s: VertexId,
    t: VertexId,
    scenario: &Scenario,
) -> Result<Walk<W>, SimulateError> {
    if strategy.dest() != t {
        return Err(SimulateError::WrongDestination {
            strategy: strategy.dest(),
            requested: t,
        });
    }
    let cap = (scenario.len() + 1) * g.n() + g.m();
    let mut known = EdgeSet::new();
    let mut steps = Vec::new();
    let mut probed_failures = Vec::new();
    let mut cost = W::zero();
    let mut at = s;

    while at != t {
        if steps.len() >= cap {
            return Err(SimulateError::StepCapExceeded { cap });
        }
        let edge = match strategy.decide(&known, at)? {
            Decision::Take(e) => e,
            Decision::Halt => return Err(SimulateError::HaltedEarly { vertex: at }),
            Decision::Stranded => {
                return Ok(Walk {
                    steps,
                    total_cost: Cost::Infinite,
                    probed_failures,
                    stranded: true,
                })
            }
        };
        let to = (edge < g.m())
            .then(|| g.edge(edge).other(at))
            .flatten()
            .ok_or(SimulateError::NotIncident { vertex: at, edge })?;
        if scenario.failed.contains(edge) {
            steps.push(Step {
                from: at,
                edge,
                to: at,
                failed: true,
            });
            if known.insert(edge) {
                probed_failures.push(edge);
            }
        } else {
            steps.push(Step {
                from: at,
                edge,
                to,
                failed: false,
            });
            cost = cost + g.length(edge);
            at = to;
        }
    }

    Ok(Walk {
        steps,
        total_cost: Cost::Finite(cost),
        probed_failures,
        stranded: false,
    })
}

#[derive(Clone, Debug)]
pub struct WorstCase<W: Weight> {
    pub cost: Cost<W>,
    pub scenario: Scenario,
}

/// `sum_{j <= k} C(m, j)`, saturating.
pub fn scenario_count(m: usize, k: usize) -> u64 {
    let mut total: u64 = 0;
    let mut binom: u64 = 1;
    for j in 0..=k.min(m) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul((m - j) as u64) / (j as u64 + 1);
    }
    total
}

fn all_scenarios(m: usize, k: usize) -> Vec<Vec<EdgeId>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..k.min(m) {
        let mut next = Vec::new();
        for set in &frontier {
            let lo = set.last().map_or(0, |&e: &EdgeId| e + 1);
            for e in lo..m {
                let mut s = set.clone();
                s.push(e);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out
}

/// Exact worst case over every scenario with at most `k` failures. Among
/// maximizers the lexicographically smallest sorted edge list is reported.
pub fn evaluate_worst_case<W: Weight, R: RoutingStrategy + ?Sized>(
    g: &Graph<W>,
    strategy: &R,
    s: VertexId,
    t: VertexId,
    k: usize,
    budget: u64,
) -> Result<WorstCase<W>, SimulateError> {
    let count = scenario_count(g.m(), k);
    if count > budget {
        return Err(SimulateError::TooManyScenarios { count, budget });
    }
    let scenarios = all_scenarios(g.m(), k);
    let costs: Vec<Cost<W>> = scenarios
        .par_iter()
        .map(|failed| {
            let sc = Scenario {
                failed: failed.iter().copied().collect(),
            };
            execute_walk(g, strategy, s, t, &sc).map(|w| w.total_cost)
        })
        .collect::<Result<_, _>>()?;

    // scenarios are sorted, so the first maximum is the smallest
    let (mut best, mut cost) = (0, costs[0]);
    for (i, &c) in costs.iter().enumerate().skip(1) {
        if c > cost {
            best = i;
            cost = c;
        }
    }
    Ok(WorstCase {
        cost,
        scenario: Scenario {
            failed: scenarios[best].iter().copied().collect(),
        },
    })
}

/// Always heads along a shortest path of `G - F'`, recomputed whenever a
/// new failure is discovered.
pub struct GreedyStrategy<'g, W> {
    graph: &'g Graph<W>,
    dest: VertexId,
    trees: Mutex<HashMap<EdgeSet, Arc<ShortestPathTree<W>>>>,
}

impl<'g, W: Weight> GreedyStrategy<'g, W> {
    fn tree(&self, known_failed: &EdgeSet) -> Arc<ShortestPathTree<W>> {
        if let Some(hit) = self.trees.lock().unwrap().get(known_failed) {
            return Arc::clone(hit);
        }
        let mask = known_failed.to_mask(self.graph.m());
        let tree = Arc::new(dijkstra_tree(self.graph.without(&mask), self.dest));
        let mut trees = self.trees.lock().unwrap();
        Arc::clone(trees.entry(known_failed.clone()).or_insert(tree))
    }
}

impl<W: Weight> RoutingStrategy for GreedyStrategy<'_, W> {
    fn dest(&self) -> VertexId {
        self.dest
    }

    fn decide(&self, known_failed: &EdgeSet, at: VertexId) -> Result<Decision, StrategyError> {
        if at == self.dest {
            return Ok(Decision::Halt);
        }
        Ok(match self.tree(known_failed).parent_edge[at] {
            Some(e) => Decision::Take(e),
            None => Decision::Stranded,
        })
    }
}

pub fn greedy_strategy<W: Weight>(g: &Graph<W>, t: VertexId) -> GreedyStrategy<'_, W> {
    GreedyStrategy {
        graph: g,
        dest: t,
        trees: Mutex::new(HashMap::new()),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("failure parameter must be at least 1")]
    ZeroFailures,
    #[error("scale must be at least 1")]
    ZeroScale,
    #[error("edge lengths overflow")]
    Overflow,
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("{m} edges cannot connect {n} vertices")]
    TooFewEdges { n: usize, m: usize },
    #[error("edges need two distinct vertices")]
    NoRoomForEdges,
}

/// The instance on which greedy shortest-path routing is worst.
#[derive(Clone, Debug)]
pub struct BadExample {
    pub graph: Graph<u64>,
    pub s: VertexId,
    pub t: VertexId,
}

/// `k + 1` parallel `s`-`t` edges of length `M + 1`, a chain
/// `s, u_1, ..., u_k` with `len(s u_1) = M` and `len(u_i u_{i+1}) = 2^i M`,
/// and zero-length spokes `u_i t`.
///
/// Vertices: `s = 0`, `t = 1`, `u_i = i + 1`. Edges: the parallel edges,
/// then the chain, then the spokes.
pub fn gen_bad_example(k: usize, scale: u64) -> Result<BadExample, GenError> {
    if k == 0 {
        return Err(GenError::ZeroFailures);
    }
    if scale == 0 {
        return Err(GenError::ZeroScale);
    }
    let (s, t) = (0, 1);
    let u = |i: usize| i + 1;
    let mut edges = Vec::with_capacity(3 * k + 1);
    let direct = scale.checked_add(1).ok_or(GenError::Overflow)?;
    edges.extend((0..=k).map(|_| (s, t, direct)));
    edges.push((s, u(1), scale));
    for i in 1..k {
        let len = 1u64
            .checked_shl(i as u32)
            .and_then(|p| p.checked_mul(scale))
            .ok_or(GenError::Overflow)?;
        edges.push((u(i), u(i + 1), len));
    }
    edges.extend((1..=k).map(|i| (u(i), t, 0)));
    let graph = Graph::from_edges(k + 2, edges).expect("well-formed construction");
    Ok(BadExample { graph, s, t })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomGraphParams {
    pub n: usize,
    pub m: usize,
    pub max_weight: u64,
    pub seed: u64,
    /// Start from a random spanning tree so every vertex is connected.
    pub connected: bool,
}

/// Seeded random multigraph with integer weights uniform in `0..=max_weight`.
pub fn gen_random_graph(p: RandomGraphParams) -> Result<Graph<u64>, GenError> {
    if p.n == 0 {
        return Err(GenError::NoVertices);
    }
    if p.connected && p.m + 1 < p.n {
        return Err(GenError::TooFewEdges { n: p.n, m: p.m });
    }
    if p.n == 1 && p.m > 0 {
        return Err(GenError::NoRoomForEdges);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut pairs = Vec::with_capacity(p.m);
    if p.connected {
        let mut perm: Vec<VertexId> = (0..p.n).collect();
        perm.shuffle(&mut rng);
        for i in 1..p.n {
            let j = rng.gen_range(0..i);
            pairs.push((perm[i], perm[j]));
        }
    }
    while pairs.len() < p.m {
        let a = rng.gen_range(0..p.n);
        let b = rng.gen_range(0..p.n - 1);
        let b = if b >= a { b + 1 } else { b };
        pairs.push((a, b));
    }
    pairs.shuffle(&mut rng);
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            (a, b, rng.gen_range(0..=p.max_weight))
        })
        .collect();
    Ok(Graph::from_edges(p.n, edges).expect("generated edges are valid"))
}
