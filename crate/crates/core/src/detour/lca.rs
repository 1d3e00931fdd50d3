//! Offline lowest common ancestors on a shortest-path tree (Tarjan's
//! union-find method): one DFS answers all queries in near-linear time.

use super::dsu::DisjointSets;
use super::DetourError;
use crate::cost::Weight;
use crate::graph::{ShortestPathTree, VertexId};

/// Children of every vertex of `spt`, as a compressed adjacency array.
pub(crate) struct Children {
    start: Vec<usize>,
    list: Vec<VertexId>,
}

impl Children {
    pub(crate) fn of<W: Weight>(spt: &ShortestPathTree<W>) -> Self {
        let n = spt.parent.len();
        let mut count = vec![0usize; n + 1];
        for &x in &spt.order {
            if let Some(p) = spt.parent[x] {
                count[p] += 1;
            }
        }
        let mut start = vec![0usize; n + 1];
        for x in 0..n {
            start[x + 1] = start[x] + count[x];
        }
        let mut fill = start.clone();
        let mut list = vec![0; start[n]];
        for &x in &spt.order {
            if let Some(p) = spt.parent[x] {
                list[fill[p]] = x;
                fill[p] += 1;
            }
        }
        Children { start, list }
    }

    #[inline]
    pub(crate) fn of_vertex(&self, x: VertexId) -> &[VertexId] {
        &self.list[self.start[x]..self.start[x + 1]]
    }
}

/// LCA of every `(a, b)` pair. Fails if an endpoint is not in the tree,
/// i.e. cannot reach the destination.
pub fn offline_lca<W: Weight>(
    spt: &ShortestPathTree<W>,
    queries: &[(VertexId, VertexId)],
) -> Result<Vec<VertexId>, DetourError> {
    let n = spt.parent.len();
    for &(a, b) in queries {
        for x in [a, b] {
            if x >= n || !spt.reaches(x) {
                return Err(DetourError::NotInTree { vertex: x });
            }
        }
    }

    let children = Children::of(spt);

    let mut qcount = vec![0usize; n + 1];
    for &(a, b) in queries {
        qcount[a] += 1;
        qcount[b] += 1;
    }
    let mut qstart = vec![0usize; n + 1];
    for x in 0..n {
        qstart[x + 1] = qstart[x] + qcount[x];
    }
    let mut fill = qstart.clone();
    let mut qlist = vec![0usize; qstart[n]];
    for (i, &(a, b)) in queries.iter().enumerate() {
        qlist[fill[a]] = i;
        fill[a] += 1;
        qlist[fill[b]] = i;
        fill[b] += 1;
    }

    let mut sets = DisjointSets::new(n);
    let mut ancestor: Vec<VertexId> = (0..n).collect();
    let mut done = vec![false; n];
    let mut answer = vec![usize::MAX; queries.len()];

    let root = spt.dest;
    let mut stack: Vec<(VertexId, usize)> = vec![(root, 0)];
    while let Some(&mut (u, ref mut next)) = stack.last_mut() {
        if let Some(&c) = children.of_vertex(u).get(*next) {
            *next += 1;
            stack.push((c, 0));
            continue;
        }
        stack.pop();
        done[u] = true;
        for &q in &qlist[qstart[u]..qstart[u + 1]] {
            let (a, b) = queries[q];
            let other = if a == u { b } else { a };
            if done[other] {
                answer[q] = ancestor[sets.find(other)];
            }
        }
        if let Some(&(p, _)) = stack.last() {
            let r = sets.union(p, u);
            ancestor[r] = p;
        }
    }

    debug_assert!(answer.iter().all(|&a| a != usize::MAX));
    Ok(answer)
}
