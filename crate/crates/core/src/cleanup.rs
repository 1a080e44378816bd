//! Cleanup phase: drop non-essential edges, scanning the grow order backwards.

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, MultiGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Surviving edges in grow insertion order.
    pub kept: Vec<EdgeId>,
    /// Dropped edges in the order they were removed.
    pub removed: Vec<EdgeId>,
    pub total_cost: Cost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EssentialityTest {
    /// DFS with low values and low-hopping from `t` back to `s`, `O(|T|)`.
    #[default]
    LowHop,
    /// Remove the edge and run a full bridge detection.
    Definitional,
}

/// Edge subset of a graph with removable edges and reusable DFS scratch space.
struct Subgraph<'g> {
    graph: &'g MultiGraph,
    edges: Vec<EdgeId>,
    offset: Vec<usize>,
    adj: Vec<(usize, EdgeId)>,
    active: Vec<bool>,
    disc: Vec<usize>,
    low: Vec<usize>,
    node_at: Vec<usize>,
}

const UNSEEN: usize = usize::MAX;

impl<'g> Subgraph<'g> {
    fn new(graph: &'g MultiGraph, edges: &[EdgeId]) -> Self {
        let n = graph.node_count();
        let mut offset = vec![0usize; n + 1];
        for &e in edges {
            let (u, v) = graph.endpoints(e);
            offset[u.0 + 1] += 1;
            offset[v.0 + 1] += 1;
        }
        for i in 0..n {
            offset[i + 1] += offset[i];
        }
        let mut fill = offset.clone();
        let mut adj = vec![(0, EdgeId(0)); offset[n]];
        let mut active = vec![false; graph.edge_count()];
        for &e in edges {
            let (u, v) = graph.endpoints(e);
            adj[fill[u.0]] = (v.0, e);
            fill[u.0] += 1;
            adj[fill[v.0]] = (u.0, e);
            fill[v.0] += 1;
            active[e.0] = true;
        }
        Subgraph {
            graph,
            edges: edges.to_vec(),
            offset,
            adj,
            active,
            disc: vec![UNSEEN; n],
            low: vec![0; n],
            node_at: Vec::with_capacity(n),
        }
    }

    /// Is `e` essential in the active edge set? Runs a DFS from `s` in the set
    /// minus `e`, computes low values bottom-up, then walks `v := low(v)` from
    /// `t` to a fixpoint. `e` is non-essential iff the walk ends at `s`.
    fn is_essential(&mut self, e: EdgeId) -> bool {
        let (s, t) = self.graph.endpoints(e);
        let (s, t) = (s.0, t.0);
        self.disc.iter_mut().for_each(|d| *d = UNSEEN);
        self.node_at.clear();

        // (node, tree edge into it, next adjacency slot)
        let mut stack = vec![(s, e, self.offset[s])];
        self.disc[s] = 0;
        self.low[s] = 0;
        self.node_at.push(s);
        while let Some(top) = stack.last_mut() {
            let (v, via, pos) = *top;
            if pos < self.offset[v + 1] {
                top.2 += 1;
                let (w, f) = self.adj[pos];
                // a parallel copy of the tree edge counts as a non-tree edge
                if f == via || f == e || !self.active[f.0] {
                    continue;
                }
                if self.disc[w] == UNSEEN {
                    self.disc[w] = self.node_at.len();
                    self.low[w] = self.disc[w];
                    self.node_at.push(w);
                    stack.push((w, f, self.offset[w]));
                } else if self.disc[w] < self.low[v] {
                    self.low[v] = self.disc[w];
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    if self.low[v] < self.low[p] {
                        self.low[p] = self.low[v];
                    }
                }
            }
        }
        if self.disc[t] == UNSEEN {
            return true;
        }
        let mut v = t;
        loop {
            let next = self.node_at[self.low[v]];
            if next == v {
                break;
            }
            v = next;
        }
        v != s
    }

    fn active_edges(&self) -> Vec<EdgeId> {
        self.edges.iter().copied().filter(|e| self.active[e.0]).collect()
    }
}

fn is_essential_by_bridges(g: &MultiGraph, edge_set: &[EdgeId], e: EdgeId) -> bool {
    let rest: Vec<EdgeId> = edge_set.iter().copied().filter(|&f| f != e).collect();
    !g.is_two_edge_connected(&rest)
}

/// Fast essentiality test for `e` within the 2-edge-connected set `edge_set`.
pub fn is_essential(g: &MultiGraph, edge_set: &[EdgeId], e: EdgeId) -> Result<bool> {
    if !edge_set.contains(&e) {
        return Err(Error::NotInSolution(e));
    }
    debug_assert!(g.is_two_edge_connected(edge_set));
    Ok(Subgraph::new(g, edge_set).is_essential(e))
}

/// Reference test: `edge_set − e` is not 2-edge-connected.
pub fn is_essential_definitional(g: &MultiGraph, edge_set: &[EdgeId], e: EdgeId) -> Result<bool> {
    if !edge_set.contains(&e) {
        return Err(Error::NotInSolution(e));
    }
    Ok(is_essential_by_bridges(g, edge_set, e))
}

pub fn run_cleanup(g: &MultiGraph, solution_order: &[EdgeId]) -> Result<Solution> {
    run_cleanup_with(g, solution_order, EssentialityTest::LowHop)
}

pub fn run_cleanup_with(g: &MultiGraph, solution_order: &[EdgeId], test: EssentialityTest) -> Result<Solution> {
    if !g.is_two_edge_connected(solution_order) {
        return Err(Error::NotTwoEdgeConnected);
    }
    let mut sub = Subgraph::new(g, solution_order);
    let mut removed = Vec::new();
    for (i, &e) in solution_order.iter().enumerate().rev() {
        let essential = match test {
            EssentialityTest::LowHop => {
                let fast = sub.is_essential(e);
                if cfg!(debug_assertions) && i % 8 == 0 {
                    let current = sub.active_edges();
                    assert_eq!(fast, is_essential_by_bridges(g, &current, e), "essentiality of {e}");
                }
                fast
            }
            EssentialityTest::Definitional => is_essential_by_bridges(g, &sub.active_edges(), e),
        };
        if !essential {
            sub.active[e.0] = false;
            removed.push(e);
        }
    }
    let kept: Vec<EdgeId> = solution_order.iter().copied().filter(|e| sub.active[e.0]).collect();
    let total_cost = g.total_cost(&kept);
    Ok(Solution { kept, removed, total_cost })
}
