//! Independent checkers: an exact exponential oracle, a minimality audit, and
//! replays of a grow trace that re-derive partitions and forests from the
//! chosen edges alone and test the leaf-degree inequality and the
//! essentiality of kept edges at every intermediate state.

use crate::cleanup::Solution;
use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::grow::GrowTrace;
use crate::multigraph::{is_bridgeless_connected, EdgeId, MultiGraph, NodeId};

pub const ORACLE_MAX_EDGES: usize = 24;

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connectivity of `(0..n, ends)` skipping the edge at position `skip`.
fn connected_without(n: usize, ends: &[(usize, usize)], skip: Option<usize>) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    let mut comps = n;
    for (i, &(a, b)) in ends.iter().enumerate() {
        if Some(i) == skip {
            continue;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    comps <= 1
}

/// 2-edge-connectivity straight from the definition: spanning, connected, and
/// still connected after deleting any single edge.
pub fn is_two_edge_connected_by_definition(n: usize, ends: &[(usize, usize)]) -> bool {
    connected_without(n, ends, None) && (0..ends.len()).all(|i| connected_without(n, ends, Some(i)))
}

fn ends_of(g: &MultiGraph, edges: &[EdgeId]) -> Vec<(usize, usize)> {
    edges
        .iter()
        .map(|&e| {
            let (u, v) = g.endpoints(e);
            (u.0, v.0)
        })
        .collect()
}

struct Search<'g> {
    g: &'g MultiGraph,
    chosen: Vec<EdgeId>,
    deg: Vec<usize>,
    undecided: Vec<usize>,
    best_cost: Cost,
    best: Vec<EdgeId>,
}

impl Search<'_> {
    fn run(&mut self, i: usize, cost: &Cost) {
        if *cost >= self.best_cost {
            return;
        }
        if i == self.g.edge_count() {
            if is_two_edge_connected_by_definition(self.g.node_count(), &ends_of(self.g, &self.chosen)) {
                self.best_cost = cost.clone();
                self.best = self.chosen.clone();
            }
            return;
        }
        let e = EdgeId(i);
        let (u, v) = self.g.endpoints(e);
        self.undecided[u.0] -= 1;
        self.undecided[v.0] -= 1;

        // skip e first: cheap solutions tighten the bound early
        if self.deg[u.0] + self.undecided[u.0] >= 2 && self.deg[v.0] + self.undecided[v.0] >= 2 {
            self.run(i + 1, cost);
        }
        self.chosen.push(e);
        self.deg[u.0] += 1;
        self.deg[v.0] += 1;
        self.run(i + 1, &(cost + self.g.cost(e)));
        self.deg[u.0] -= 1;
        self.deg[v.0] -= 1;
        self.chosen.pop();

        self.undecided[u.0] += 1;
        self.undecided[v.0] += 1;
    }
}

/// Exact minimum-cost 2-edge-connected spanning subgraph by pruned subset
/// enumeration. Limited to [`ORACLE_MAX_EDGES`] edges.
pub fn brute_force_opt(g: &MultiGraph) -> Result<(Cost, Vec<EdgeId>)> {
    let m = g.edge_count();
    if m > ORACLE_MAX_EDGES {
        return Err(Error::TooLargeForOracle(m));
    }
    let all: Vec<EdgeId> = g.edge_ids().collect();
    if !is_two_edge_connected_by_definition(g.node_count(), &ends_of(g, &all)) {
        return Err(Error::InfeasibleInstance);
    }
    let full_cost = g.total_cost(&all);
    let mut search = Search {
        g,
        chosen: Vec::with_capacity(m),
        deg: vec![0; g.node_count()],
        undecided: g.nodes().map(|v| g.degree(v)).collect(),
        // one above the full set so that the full set itself is reachable
        best_cost: &full_cost + &Cost::one(),
        best: all,
    };
    search.run(0, &Cost::zero());
    Ok((search.best_cost, search.best))
}

/// Every kept edge is essential: dropping it leaves a set with a bridge.
pub fn check_minimal(g: &MultiGraph, sol: &Solution) -> bool {
    sol.kept.iter().all(|&e| {
        let rest: Vec<EdgeId> = sol.kept.iter().copied().filter(|&f| f != e).collect();
        !g.is_two_edge_connected(&rest)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafStepReport {
    /// Number of grow steps applied before this state.
    pub state: usize,
    pub leaves: usize,
    pub isolated: usize,
    pub in_solution: usize,
    pub outside_solution: usize,
    pub degree_sum: usize,
    pub bound: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LeafSnapshotReport {
    pub states: Vec<LeafStepReport>,
}

impl LeafSnapshotReport {
    pub fn violations(&self) -> impl Iterator<Item = &LeafStepReport> {
        self.states.iter().filter(|s| !s.holds)
    }

    pub fn holds(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Re-derives the partition and forest of every intermediate state from the
/// chosen edges, independently of the grow implementation.
struct Replay<'a> {
    g: &'a MultiGraph,
    trace: &'a GrowTrace,
    label: Vec<usize>,
    members: Vec<Vec<usize>>,
    blocks: usize,
    forest: Vec<EdgeId>,
    chosen: Vec<bool>,
    kept: Vec<bool>,
}

impl<'a> Replay<'a> {
    fn new(g: &'a MultiGraph, trace: &'a GrowTrace, sol: &Solution) -> Result<Self> {
        let n = g.node_count();
        if trace.node_count != n {
            return Err(Error::CorruptTrace("trace is for a different graph".into()));
        }
        if trace.solution_order.len() != trace.steps.len()
            || trace.steps.iter().zip(&trace.solution_order).any(|(s, e)| s.edge != *e)
        {
            return Err(Error::CorruptTrace("solution order disagrees with the steps".into()));
        }
        let mut in_order = vec![false; g.edge_count()];
        for e in &trace.solution_order {
            if e.0 >= g.edge_count() || in_order[e.0] {
                return Err(Error::CorruptTrace(format!("edge {e} invalid or chosen twice")));
            }
            in_order[e.0] = true;
        }
        let mut kept = vec![false; g.edge_count()];
        for e in &sol.kept {
            if e.0 >= g.edge_count() || !in_order[e.0] {
                return Err(Error::CorruptTrace(format!("kept edge {e} was never grown")));
            }
            kept[e.0] = true;
        }
        Ok(Replay {
            g,
            trace,
            label: (0..n).collect(),
            members: (0..n).map(|v| vec![v]).collect(),
            blocks: n,
            forest: Vec::new(),
            chosen: vec![false; g.edge_count()],
            kept,
        })
    }

    fn ends(&self, e: EdgeId) -> (usize, usize) {
        let (u, v) = self.g.endpoints(e);
        (self.label[u.0], self.label[v.0])
    }

    fn forest_path(&self, from: usize, to: usize) -> Option<Vec<EdgeId>> {
        let n = self.label.len();
        let mut adj: Vec<Vec<(usize, EdgeId)>> = vec![Vec::new(); n];
        for &f in &self.forest {
            let (a, b) = self.ends(f);
            adj[a].push((b, f));
            adj[b].push((a, f));
        }
        let mut prev: Vec<Option<(usize, EdgeId)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &(y, f) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, f));
                    queue.push_back(y);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut path = Vec::new();
        let mut x = to;
        while let Some((p, f)) = prev[x] {
            path.push(f);
            x = p;
        }
        Some(path)
    }

    fn merge(&mut self, reps: &[usize]) {
        let target = reps[0];
        for &r in &reps[1..] {
            if r == target || self.label[r] != r {
                continue;
            }
            let moved = std::mem::take(&mut self.members[r]);
            for &x in &moved {
                self.label[x] = target;
            }
            self.members[target].extend(moved);
            self.blocks -= 1;
        }
    }

    fn apply(&mut self, step_index: usize) -> Result<()> {
        let step = &self.trace.steps[step_index];
        let corrupt = |m: &str| Error::CorruptTrace(format!("step {}: {m}", step.index));
        let e = step.edge;
        let (a, b) = self.ends(e);
        if a == b {
            return Err(corrupt("chosen edge is a self-loop"));
        }
        if self.chosen[e.0] {
            return Err(corrupt("edge chosen twice"));
        }
        self.chosen[e.0] = true;
        let path = self.forest_path(a, b);
        self.forest.push(e);
        match (path, &step.contraction) {
            (None, None) => Ok(()),
            (Some(mut cycle), Some(record)) => {
                cycle.push(e);
                let mut expected = record.cycle.clone();
                cycle.sort();
                expected.sort();
                if cycle != expected {
                    return Err(corrupt("recorded cycle differs from the replayed one"));
                }
                let mut reps: Vec<usize> = cycle
                    .iter()
                    .flat_map(|&f| {
                        let (x, y) = self.ends(f);
                        [x, y]
                    })
                    .collect();
                reps.sort();
                reps.dedup();
                if reps.len() != record.merged.len() {
                    return Err(corrupt("recorded contraction merges a different number of nodes"));
                }
                self.merge(&reps);
                self.forest.retain(|f| !cycle.contains(f));
                Ok(())
            }
            (None, Some(_)) => Err(corrupt("contraction recorded but no cycle closed")),
            (Some(_), None) => Err(corrupt("cycle closed but no contraction recorded")),
        }
    }

    /// Forest degree and one incident forest edge per representative.
    fn forest_incidence(&self) -> (Vec<usize>, Vec<Option<EdgeId>>) {
        let n = self.label.len();
        let mut deg = vec![0; n];
        let mut edge = vec![None; n];
        for &f in &self.forest {
            let (a, b) = self.ends(f);
            for x in [a, b] {
                deg[x] += 1;
                edge[x] = Some(f);
            }
        }
        (deg, edge)
    }

    fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.label.len()).filter(|&r| self.label[r] == r)
    }

    /// Compares the recorded leaf snapshot of the next step, if any.
    fn check_recorded_leaves(&self, step_index: usize) -> Result<()> {
        let Some(step) = self.trace.steps.get(step_index) else {
            return Ok(());
        };
        if !self.trace.leaves_recorded {
            return Ok(());
        }
        let (deg, edge) = self.forest_incidence();
        let mut replayed: Vec<(Vec<NodeId>, Option<EdgeId>)> = self
            .representatives()
            .filter(|&r| deg[r] <= 1)
            .map(|r| {
                let mut m: Vec<NodeId> = self.members[r].iter().map(|&x| NodeId(x)).collect();
                m.sort();
                (m, edge[r])
            })
            .collect();
        let mut recorded = Vec::with_capacity(step.leaves.len());
        for leaf in &step.leaves {
            let m = self
                .trace
                .block_members(leaf.block)
                .ok_or_else(|| Error::CorruptTrace(format!("step {}: unknown block {}", step.index, leaf.block.0)))?;
            recorded.push((m, leaf.forest_edge));
        }
        replayed.sort();
        recorded.sort();
        if replayed != recorded {
            return Err(Error::CorruptTrace(format!("step {}: leaf snapshot differs from replay", step.index)));
        }
        Ok(())
    }

    /// Kept edges mapped into the current partition, self-loops dropped.
    fn contracted_solution(&self) -> Vec<(EdgeId, usize, usize)> {
        self.g
            .edge_ids()
            .filter(|e| self.kept[e.0])
            .filter_map(|e| {
                let (a, b) = self.ends(e);
                (a != b).then_some((e, a, b))
            })
            .collect()
    }

    fn leaf_report(&self, state: usize) -> LeafStepReport {
        if self.blocks <= 1 {
            return LeafStepReport {
                state,
                leaves: 0,
                isolated: 0,
                in_solution: 0,
                outside_solution: 0,
                degree_sum: 0,
                bound: 0,
                holds: true,
            };
        }
        let (deg_f, edge_f) = self.forest_incidence();
        let mut deg_t = vec![0usize; self.label.len()];
        for (_, a, b) in self.contracted_solution() {
            deg_t[a] += 1;
            deg_t[b] += 1;
        }
        let (mut l0, mut l1, mut l2, mut degree_sum) = (0, 0, 0, 0);
        for r in self.representatives().filter(|&r| deg_f[r] <= 1) {
            degree_sum += deg_t[r];
            match edge_f[r] {
                None => l0 += 1,
                Some(f) if self.kept[f.0] => l1 += 1,
                Some(_) => l2 += 1,
            }
        }
        let leaves = l0 + l1 + l2;
        let bound = 3 * (leaves + l0) + l1;
        LeafStepReport {
            state,
            leaves,
            isolated: l0,
            in_solution: l1,
            outside_solution: l2,
            degree_sum,
            bound,
            holds: degree_sum <= bound,
        }
    }

    /// Every contracted kept edge outside the forest is essential in the
    /// contracted solution plus forest.
    fn kept_edges_essential(&self) -> bool {
        if self.blocks <= 1 {
            return true;
        }
        let mut index = vec![usize::MAX; self.label.len()];
        for (i, r) in self.representatives().enumerate() {
            index[r] = i;
        }
        let mut in_forest = vec![false; self.g.edge_count()];
        for f in &self.forest {
            in_forest[f.0] = true;
        }
        let mut edges: Vec<(EdgeId, usize, usize)> = self.contracted_solution();
        for &f in &self.forest {
            if !self.kept[f.0] {
                let (a, b) = self.ends(f);
                edges.push((f, a, b));
            }
        }
        let pairs: Vec<(usize, usize)> = edges.iter().map(|&(_, a, b)| (index[a], index[b])).collect();
        edges.iter().enumerate().all(|(i, &(e, _, _))| {
            if !self.kept[e.0] || in_forest[e.0] {
                return true;
            }
            let mut rest = pairs.clone();
            rest.swap_remove(i);
            !is_bridgeless_connected(self.blocks, &rest)
        })
    }
}

/// Evaluates `Σ_{v∈L} deg_T̄(v) ≤ 3(|L| + |L₀|) + |L₁|` at every state of the
/// run, from the initial all-isolated forest to the final single node.
pub fn check_leaf_degree(g: &MultiGraph, trace: &GrowTrace, sol: &Solution) -> Result<LeafSnapshotReport> {
    let mut replay = Replay::new(g, trace, sol)?;
    let mut report = LeafSnapshotReport::default();
    for i in 0..=trace.steps.len() {
        replay.check_recorded_leaves(i)?;
        report.states.push(replay.leaf_report(i));
        if i < trace.steps.len() {
            replay.apply(i)?;
        }
    }
    if replay.blocks != 1 {
        return Err(Error::CorruptTrace("replay does not end in a single node".into()));
    }
    Ok(report)
}

/// At every state, each kept edge outside the forest is essential in the
/// contracted kept edges plus the forest.
pub fn check_kept_edges_essential(g: &MultiGraph, trace: &GrowTrace, sol: &Solution) -> Result<bool> {
    let mut replay = Replay::new(g, trace, sol)?;
    let mut ok = true;
    for i in 0..=trace.steps.len() {
        ok &= replay.kept_edges_essential();
        if i < trace.steps.len() {
            replay.apply(i)?;
        }
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cleanup::run_cleanup;
    use crate::grow::grow_simple;
    use crate::instances::{fix_k4, fix_par, fix_tri, gen_tight};

    fn solve(g: &MultiGraph) -> (GrowTrace, Solution) {
        let t = grow_simple(g).unwrap();
        let s = run_cleanup(g, &t.solution_order).unwrap();
        (t, s)
    }

    #[test]
    fn oracle_on_fixtures() {
        let (c, w) = brute_force_opt(&fix_tri()).unwrap();
        assert_eq!(c, Cost::from_int(3));
        assert_eq!(w.len(), 3);
        let g = fix_k4();
        let (c, w) = brute_force_opt(&g).unwrap();
        assert_eq!(c, Cost::from_int(4));
        assert_eq!(w.len(), 4);
        assert!(g.is_two_edge_connected(&w));
        assert_eq!(brute_force_opt(&fix_par()).unwrap().0, Cost::from_int(6));
        let tight = gen_tight(3, &Cost::ratio(1, 4)).unwrap();
        assert_eq!(brute_force_opt(&tight).unwrap().0, Cost::ratio(9, 2));
    }

    #[test]
    fn oracle_errors() {
        let path = MultiGraph::build(3, [(1, 2, 1.into()), (2, 3, 1.into())]).unwrap();
        assert_eq!(brute_force_opt(&path), Err(Error::InfeasibleInstance));
        let big = gen_tight(6, &Cost::ratio(1, 4)).unwrap();
        assert_eq!(brute_force_opt(&big), Err(Error::TooLargeForOracle(29)));
    }

    #[test]
    fn minimality_examples() {
        let g = fix_tri();
        let all: Vec<EdgeId> = g.edge_ids().collect();
        let sol = Solution { kept: all.clone(), removed: vec![], total_cost: Cost::from_int(3) };
        assert!(check_minimal(&g, &sol));
        let g = fix_k4();
        let all: Vec<EdgeId> = g.edge_ids().collect();
        let sol = Solution { kept: all, removed: vec![], total_cost: Cost::from_int(6) };
        assert!(!check_minimal(&g, &sol));
        let g = fix_par();
        let (_, sol) = solve(&g);
        assert!(check_minimal(&g, &sol));
    }

    #[test]
    fn triangle_leaf_degree() {
        let g = fix_tri();
        let (t, s) = solve(&g);
        let r = check_leaf_degree(&g, &t, &s).unwrap();
        let first = &r.states[0];
        assert_eq!((first.degree_sum, first.leaves, first.isolated, first.bound), (6, 3, 3, 18));
        let last = r.states.last().unwrap();
        assert!(last.holds && last.leaves == 0);
        assert!(r.holds());
    }

    #[test]
    fn kept_edges_essential_examples() {
        for g in [fix_tri(), fix_par(), gen_tight(3, &Cost::ratio(1, 4)).unwrap()] {
            let (t, s) = solve(&g);
            assert!(check_kept_edges_essential(&g, &t, &s).unwrap());
        }
    }

    #[test]
    fn parallel_pair_mid_run() {
        // F = {e0}, T̄ = {e0, e1}: e1 is essential in the two-node multigraph
        let g = fix_par();
        let (t, s) = solve(&g);
        let mut replay = Replay::new(&g, &t, &s).unwrap();
        replay.apply(0).unwrap();
        assert_eq!(replay.forest, vec![EdgeId(0)]);
        assert!(replay.kept_edges_essential());
    }

    #[test]
    fn mismatched_solution_is_corrupt() {
        let g = fix_k4();
        let (t, mut s) = solve(&g);
        let missing = g.edge_ids().find(|e| !t.solution_order.contains(e));
        if let Some(e) = missing {
            s.kept.push(e);
            assert!(matches!(check_leaf_degree(&g, &t, &s), Err(Error::CorruptTrace(_))));
        }
        let (mut t, s) = solve(&fix_tri());
        t.steps[2].contraction = None;
        assert!(matches!(check_leaf_degree(&fix_tri(), &t, &s), Err(Error::CorruptTrace(_))));
    }
}
