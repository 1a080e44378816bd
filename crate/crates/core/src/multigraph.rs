//! Undirected multigraphs with exact costs, node partitions and bridge tests.

use std::fmt;

use crate::cost::Cost;
use crate::error::{Error, Result};

/// Dense 0-based node index. Files and user-facing output use `index + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }

    pub fn external(self) -> usize {
        self.0 + 1
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.external())
    }
}

/// Edges are identified by name, independent of their (possibly contracted)
/// endpoints. Assigned 0-based in input order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub cost: Cost,
}

impl Edge {
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Immutable undirected multigraph without self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    node_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<EdgeId>>,
    dropped_self_loops: usize,
}

impl MultiGraph {
    /// Builds a graph from 1-based endpoint triples. Self-loops are dropped
    /// (they never help 2-edge-connectivity) and counted.
    pub fn build<I>(node_count: usize, edge_list: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Cost)>,
    {
        if node_count < 2 {
            return Err(Error::TooSmall(node_count));
        }
        let mut edges = Vec::new();
        let mut adjacency = vec![Vec::new(); node_count];
        let mut dropped_self_loops = 0;
        for (index, (u, v, cost)) in edge_list.into_iter().enumerate() {
            for x in [u, v] {
                if x == 0 || x > node_count {
                    return Err(Error::InvalidNode { node: x, node_count });
                }
            }
            if cost.is_negative() {
                return Err(Error::InvalidCost { index, cost: cost.to_string() });
            }
            if u == v {
                dropped_self_loops += 1;
                continue;
            }
            let id = EdgeId(edges.len());
            adjacency[u - 1].push(id);
            adjacency[v - 1].push(id);
            edges.push(Edge { u: NodeId(u - 1), v: NodeId(v - 1), cost });
        }
        Ok(MultiGraph { node_count, edges, adjacency, dropped_self_loops })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn cost(&self, e: EdgeId) -> &Cost {
        &self.edges[e.0].cost
    }

    pub fn endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        let edge = &self.edges[e.0];
        (edge.u, edge.v)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges.iter().enumerate().map(|(i, e)| (EdgeId(i), e))
    }

    pub fn edge_ids(&self) -> impl ExactSizeIterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.node_count).map(NodeId)
    }

    pub fn adjacency(&self, v: NodeId) -> &[EdgeId] {
        &self.adjacency[v.0]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v.0].len()
    }

    /// Number of self-loops discarded while building.
    pub fn dropped_self_loops(&self) -> usize {
        self.dropped_self_loops
    }

    pub fn total_cost<'a, I>(&self, edges: I) -> Cost
    where
        I: IntoIterator<Item = &'a EdgeId>,
    {
        edges.into_iter().map(|e| self.cost(*e)).sum()
    }

    /// True iff `(V, edge_subset)` spans all nodes, is connected and has no
    /// bridge.
    pub fn is_two_edge_connected(&self, edge_subset: &[EdgeId]) -> bool {
        let ends: Vec<(usize, usize)> = edge_subset
            .iter()
            .map(|&e| {
                let (u, v) = self.endpoints(e);
                (u.0, v.0)
            })
            .collect();
        is_bridgeless_connected(self.node_count, &ends)
    }

    pub fn is_two_edge_connected_full(&self) -> bool {
        let all: Vec<EdgeId> = self.edge_ids().collect();
        self.is_two_edge_connected(&all)
    }
}

/// One low-link DFS over the multigraph `(0..node_count, ends)`. Parallel
/// edges are told apart by position, so a doubled edge is never a bridge.
/// Self-loops are ignored.
pub fn is_bridgeless_connected(node_count: usize, ends: &[(usize, usize)]) -> bool {
    if node_count <= 1 {
        return true;
    }
    let mut offset = vec![0usize; node_count + 1];
    for &(a, b) in ends {
        if a != b {
            offset[a + 1] += 1;
            offset[b + 1] += 1;
        }
    }
    for i in 0..node_count {
        offset[i + 1] += offset[i];
    }
    let mut fill = offset.clone();
    let mut adj = vec![(0usize, 0usize); offset[node_count]];
    for (i, &(a, b)) in ends.iter().enumerate() {
        if a != b {
            adj[fill[a]] = (b, i);
            fill[a] += 1;
            adj[fill[b]] = (a, i);
            fill[b] += 1;
        }
    }

    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; node_count];
    let mut low = vec![0usize; node_count];
    // (node, edge used to enter it, next adjacency slot)
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, UNSEEN, offset[0])];
    disc[0] = 0;
    low[0] = 0;
    let mut clock = 1;
    while let Some(top) = stack.last_mut() {
        let (v, via, pos) = *top;
        if pos < offset[v + 1] {
            top.2 += 1;
            let (w, e) = adj[pos];
            if e == via {
                continue;
            }
            if disc[w] == UNSEEN {
                disc[w] = clock;
                low[w] = clock;
                clock += 1;
                stack.push((w, e, offset[w]));
            } else {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if low[v] > disc[p] {
                    return false;
                }
            }
        }
    }
    clock == node_count
}

/// Node partition with enumerable blocks. Every node carries the label of its
/// block's representative; merging relabels the smaller blocks, so lookups
/// are O(1) and never mutate.
#[derive(Debug, Clone)]
pub struct Partition {
    label: Vec<usize>,
    members: Vec<Vec<NodeId>>,
    blocks: usize,
}

impl Partition {
    pub fn identity(node_count: usize) -> Self {
        Partition {
            label: (0..node_count).collect(),
            members: (0..node_count).map(|v| vec![NodeId(v)]).collect(),
            blocks: node_count,
        }
    }

    pub fn node_count(&self) -> usize {
        self.label.len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    /// Representative of the block containing `v`.
    pub fn find(&self, v: NodeId) -> usize {
        self.label[v.0]
    }

    pub fn is_representative(&self, r: usize) -> bool {
        self.label[r] == r
    }

    /// Original nodes in the block represented by `rep` (unsorted).
    pub fn members(&self, rep: usize) -> &[NodeId] {
        debug_assert!(self.is_representative(rep));
        &self.members[rep]
    }

    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.label.len()).filter(move |&r| self.label[r] == r)
    }

    /// Merges the blocks represented by `reps` and returns the survivor.
    pub fn contract(&mut self, reps: &[usize]) -> usize {
        assert!(!reps.is_empty(), "contract needs at least one block");
        debug_assert!(reps.iter().all(|&r| self.is_representative(r)));
        let survivor = *reps.iter().max_by_key(|&&r| (self.members[r].len(), std::cmp::Reverse(r))).unwrap();
        for &r in reps {
            if r == survivor {
                continue;
            }
            let moved = std::mem::take(&mut self.members[r]);
            for &x in &moved {
                self.label[x.0] = survivor;
            }
            self.members[survivor].extend(moved);
            self.blocks -= 1;
        }
        survivor
    }
}
