//! The grow phase: repeatedly pick the cheapest eligible edge (one with a leaf
//! endpoint in the current forest), charge every eligible edge for it, add it
//! to the forest and contract the cycle it may close.
//!
//! Two pricing strategies share one contraction engine:
//!
//! * [`Variant::Simple`] keeps reduced costs in an array and scans all live
//!   edges twice per step, `O(nm)` overall.
//! * [`Variant::Heaps`] keeps a global offset `Γ` and `⌈√m⌉` indexed binary
//!   heaps of shifted priorities, `O(m + n² log n)` overall.
//!
//! Both remove futile parallel edges (all but the two cheapest of a parallel
//! class) up front and after every contraction, and both break ties by the
//! smallest [`EdgeId`], so they produce identical traces.

use std::fmt;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, MultiGraph, NodeId, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Simple,
    Heaps,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Simple => "simple",
            Variant::Heaps => "heap",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowOptions {
    /// Store the leaf set before every step. Needed for the dual certificate;
    /// costs `O(n)` memory per step.
    pub record_leaves: bool,
}

impl Default for GrowOptions {
    fn default() -> Self {
        GrowOptions { record_leaves: true }
    }
}

/// A block of the node partition at some point of the run. Ids `0..n` are the
/// singletons; every contraction creates a fresh id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockParts {
    Node(NodeId),
    Merged(Vec<BlockId>),
}

/// A forest leaf (degree ≤ 1) at the start of a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeafEntry {
    pub block: BlockId,
    /// The unique forest edge at this leaf, if it is not isolated.
    pub forest_edge: Option<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    /// Edges of the closed forest cycle, the new edge last.
    pub cycle: Vec<EdgeId>,
    pub merged: Vec<BlockId>,
    pub block: BlockId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowStep {
    /// 1-based.
    pub index: usize,
    pub edge: EdgeId,
    pub delta: Cost,
    /// Leaves before the step; empty when recording is off.
    pub leaves: Vec<LeafEntry>,
    pub contraction: Option<Contraction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowTrace {
    pub node_count: usize,
    pub steps: Vec<GrowStep>,
    pub solution_order: Vec<EdgeId>,
    pub blocks: Vec<BlockParts>,
    /// Parallel edges discarded as futile, in removal order.
    pub futile: Vec<EdgeId>,
    pub leaves_recorded: bool,
}

impl GrowTrace {
    pub fn deltas(&self) -> Vec<Cost> {
        self.steps.iter().map(|s| s.delta.clone()).collect()
    }

    /// Sorted original nodes of a block, or `None` for an unknown id.
    pub fn block_members(&self, block: BlockId) -> Option<Vec<NodeId>> {
        let mut out = Vec::new();
        let mut stack = vec![block];
        while let Some(b) = stack.pop() {
            match self.blocks.get(b.0)? {
                BlockParts::Node(v) => out.push(*v),
                BlockParts::Merged(parts) => {
                    if parts.iter().any(|p| p.0 >= b.0) {
                        return None;
                    }
                    stack.extend(parts.iter().copied());
                }
            }
        }
        out.sort();
        Some(out)
    }
}

pub fn grow_simple(g: &MultiGraph) -> Result<GrowTrace> {
    grow(g, Variant::Simple, GrowOptions::default())
}

pub fn grow_heaps(g: &MultiGraph) -> Result<GrowTrace> {
    grow(g, Variant::Heaps, GrowOptions::default())
}

pub fn grow(g: &MultiGraph, variant: Variant, options: GrowOptions) -> Result<GrowTrace> {
    grow_observed(g, variant, options, |_, _| {})
}

/// Runs the grow phase, handing the state to `on_step` after every step.
pub fn grow_observed<F>(g: &MultiGraph, variant: Variant, options: GrowOptions, mut on_step: F) -> Result<GrowTrace>
where
    F: FnMut(&GrowState<'_>, &GrowStep),
{
    let mut state = GrowState::new(g, variant, options)?;
    while !state.is_done() {
        state.step()?;
        let last = state.steps.last().expect("step recorded");
        on_step(&state, last);
    }
    Ok(state.into_trace())
}

/// Marks all but the two cheapest edges of every parallel class as futile.
/// `O(m)` apart from sorting classes that are actually oversized.
fn initial_futile(g: &MultiGraph) -> Vec<bool> {
    let n = g.node_count();
    let mut futile = vec![false; g.edge_count()];
    let mut bucket = vec![usize::MAX; n];
    let mut groups: Vec<Vec<EdgeId>> = Vec::new();
    for u in g.nodes() {
        groups.clear();
        let mut touched = Vec::new();
        for &e in g.adjacency(u) {
            let w = g.edge(e).other(u);
            if w <= u {
                continue;
            }
            if bucket[w.0] == usize::MAX {
                bucket[w.0] = groups.len();
                groups.push(Vec::new());
                touched.push(w.0);
            }
            groups[bucket[w.0]].push(e);
        }
        for w in touched {
            bucket[w] = usize::MAX;
        }
        for group in groups.iter_mut().filter(|grp| grp.len() > 2) {
            group.sort_by(|a, b| g.cost(*a).cmp(g.cost(*b)).then(a.cmp(b)));
            for e in &group[2..] {
                futile[e.0] = true;
            }
        }
    }
    futile
}

#[derive(Debug)]
struct SimplePricing {
    reduced: Vec<Cost>,
    /// Live edges in increasing id order.
    live_list: Vec<EdgeId>,
}

const ABSENT: usize = usize::MAX;

/// `⌈√m⌉` indexed binary heaps over shifted priorities `Δ̄`.
///
/// Invariant: `key(e) = Δ(e) + Γ` if `e` is eligible (`ell(e) ≥ 1`), and
/// `key(e) = c'(e)` otherwise. Eligible edges live in heap `e mod k`.
#[derive(Debug)]
struct HeapBank {
    gamma: Cost,
    key: Vec<Cost>,
    ell: Vec<u8>,
    heaps: Vec<Vec<EdgeId>>,
    pos: Vec<usize>,
}

impl HeapBank {
    fn new(g: &MultiGraph, live: &[bool]) -> Self {
        let m_live = live.iter().filter(|&&l| l).count().max(1);
        let k = (m_live as f64).sqrt().ceil() as usize;
        let mut bank = HeapBank {
            gamma: Cost::zero(),
            key: g.edges().map(|(_, e)| e.cost.clone()).collect(),
            ell: vec![0; g.edge_count()],
            heaps: vec![Vec::new(); k.max(1)],
            pos: vec![ABSENT; g.edge_count()],
        };
        // Every node starts as an isolated leaf, so every live edge has ℓ = 2.
        for e in g.edge_ids().filter(|e| live[e.0]) {
            bank.ell[e.0] = 2;
            bank.key[e.0] = g.cost(e).div_int(2);
            bank.insert(e);
        }
        bank
    }

    fn heap_of(&self, e: EdgeId) -> usize {
        e.0 % self.heaps.len()
    }

    fn less(&self, a: EdgeId, b: EdgeId) -> bool {
        match self.key[a.0].cmp(&self.key[b.0]) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => a < b,
        }
    }

    fn insert(&mut self, e: EdgeId) {
        let h = self.heap_of(e);
        let i = self.heaps[h].len();
        self.heaps[h].push(e);
        self.pos[e.0] = i;
        self.sift_up(h, i);
    }

    fn remove(&mut self, e: EdgeId) {
        let i = self.pos[e.0];
        if i == ABSENT {
            return;
        }
        let h = self.heap_of(e);
        let last = self.heaps[h].pop().expect("non-empty heap");
        self.pos[e.0] = ABSENT;
        if last != e {
            self.heaps[h][i] = last;
            self.pos[last.0] = i;
            self.sift_up(h, i);
            self.sift_down(h, self.pos[last.0]);
        }
    }

    fn sift_up(&mut self, h: usize, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            let (a, b) = (self.heaps[h][i], self.heaps[h][parent]);
            if !self.less(a, b) {
                break;
            }
            self.heaps[h].swap(i, parent);
            self.pos[a.0] = parent;
            self.pos[b.0] = i;
            i = parent;
        }
    }

    fn sift_down(&mut self, h: usize, mut i: usize) {
        let len = self.heaps[h].len();
        loop {
            let mut best = i;
            for child in [2 * i + 1, 2 * i + 2] {
                if child < len && self.less(self.heaps[h][child], self.heaps[h][best]) {
                    best = child;
                }
            }
            if best == i {
                break;
            }
            let (a, b) = (self.heaps[h][i], self.heaps[h][best]);
            self.heaps[h].swap(i, best);
            self.pos[a.0] = best;
            self.pos[b.0] = i;
            i = best;
        }
    }

    fn minimum(&self) -> Option<EdgeId> {
        let mut best: Option<EdgeId> = None;
        for heap in &self.heaps {
            if let Some(&top) = heap.first() {
                if best.is_none_or(|b| self.less(top, b)) {
                    best = Some(top);
                }
            }
        }
        best
    }

    fn reduced_cost(&self, e: EdgeId) -> Cost {
        match self.ell[e.0] {
            0 => self.key[e.0].clone(),
            l => (&self.key[e.0] - &self.gamma).mul_int(l as i64),
        }
    }

    /// Re-keys `e` for a new leaf count; handles 0↔1 (re)insertion and the
    /// 1↔2 halving/doubling of `Δ`.
    fn set_leaf_count(&mut self, e: EdgeId, ell: u8) {
        let old = self.ell[e.0];
        if old == ell {
            return;
        }
        let c = self.reduced_cost(e);
        self.ell[e.0] = ell;
        self.key[e.0] = match ell {
            0 => c,
            l => &c.div_int(l as i64) + &self.gamma,
        };
        match (old, ell) {
            (0, _) => self.insert(e),
            (_, 0) => self.remove(e),
            _ => {
                let h = self.heap_of(e);
                let i = self.pos[e.0];
                self.sift_up(h, i);
                self.sift_down(h, self.pos[e.0]);
            }
        }
    }

    /// Freezes `e` at its current reduced cost and drops it from the heaps.
    fn retire(&mut self, e: EdgeId) {
        let c = self.reduced_cost(e);
        self.remove(e);
        self.key[e.0] = c;
        self.ell[e.0] = 0;
    }
}

#[derive(Debug)]
enum Pricing {
    Simple(SimplePricing),
    Heaps(HeapBank),
}

/// Working state of the grow phase: contracted graph `G'`, forest `F`, the
/// ordered solution `T`, and the pricing structure for reduced costs.
#[derive(Debug)]
pub struct GrowState<'g> {
    graph: &'g MultiGraph,
    variant: Variant,
    partition: Partition,
    live: Vec<bool>,
    in_forest: Vec<bool>,
    /// Live edges of `G'` at each representative; may hold stale dead ids.
    incident: Vec<Vec<EdgeId>>,
    forest: Vec<Vec<EdgeId>>,
    reps: Vec<usize>,
    block_of: Vec<BlockId>,
    blocks: Vec<BlockParts>,
    solution: Vec<EdgeId>,
    steps: Vec<GrowStep>,
    futile: Vec<EdgeId>,
    pricing: Pricing,
    record_leaves: bool,
    seen: Vec<u32>,
    epoch: u32,
    came_from: Vec<(usize, EdgeId)>,
    bucket: Vec<usize>,
}

impl<'g> GrowState<'g> {
    pub fn new(g: &'g MultiGraph, variant: Variant, options: GrowOptions) -> Result<Self> {
        if !g.is_two_edge_connected_full() {
            return Err(Error::InfeasibleInstance);
        }
        let n = g.node_count();
        let futile_mask = initial_futile(g);
        let live: Vec<bool> = futile_mask.iter().map(|f| !f).collect();
        let futile = g.edge_ids().filter(|e| futile_mask[e.0]).collect();
        let incident = g.nodes().map(|v| g.adjacency(v).iter().copied().filter(|e| live[e.0]).collect()).collect();
        let pricing = match variant {
            Variant::Simple => Pricing::Simple(SimplePricing {
                reduced: g.edges().map(|(_, e)| e.cost.clone()).collect(),
                live_list: g.edge_ids().filter(|e| live[e.0]).collect(),
            }),
            Variant::Heaps => Pricing::Heaps(HeapBank::new(g, &live)),
        };
        Ok(GrowState {
            graph: g,
            variant,
            partition: Partition::identity(n),
            in_forest: vec![false; g.edge_count()],
            live,
            incident,
            forest: vec![Vec::new(); n],
            reps: (0..n).collect(),
            block_of: (0..n).map(BlockId).collect(),
            blocks: (0..n).map(|v| BlockParts::Node(NodeId(v))).collect(),
            solution: Vec::new(),
            steps: Vec::new(),
            futile,
            pricing,
            record_leaves: options.record_leaves,
            seen: vec![0; n],
            epoch: 0,
            came_from: vec![(usize::MAX, EdgeId(usize::MAX)); n],
            bucket: vec![usize::MAX; n],
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn graph(&self) -> &'g MultiGraph {
        self.graph
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn is_done(&self) -> bool {
        self.reps.len() == 1
    }

    pub fn solution_order(&self) -> &[EdgeId] {
        &self.solution
    }

    pub fn steps(&self) -> &[GrowStep] {
        &self.steps
    }

    pub fn is_live(&self, e: EdgeId) -> bool {
        self.live[e.0]
    }

    pub fn in_forest(&self, e: EdgeId) -> bool {
        self.in_forest[e.0]
    }

    pub fn live_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.graph.edge_ids().filter(|e| self.live[e.0])
    }

    /// Current endpoints in `G'` as partition representatives.
    pub fn ends(&self, e: EdgeId) -> (usize, usize) {
        let (u, v) = self.graph.endpoints(e);
        (self.partition.find(u), self.partition.find(v))
    }

    pub fn forest_degree(&self, rep: usize) -> usize {
        self.forest[rep].len()
    }

    fn is_leaf(&self, rep: usize) -> bool {
        self.forest[rep].len() <= 1
    }

    /// `ℓ_e`: how many endpoints of `e` are forest leaves.
    pub fn leaf_count(&self, e: EdgeId) -> u8 {
        let (a, b) = self.ends(e);
        self.is_leaf(a) as u8 + self.is_leaf(b) as u8
    }

    pub fn is_eligible(&self, e: EdgeId) -> bool {
        self.live[e.0] && !self.in_forest[e.0] && self.leaf_count(e) >= 1
    }

    /// Current reduced cost `c'(e)`. For dead edges, the value at removal.
    pub fn reduced_cost(&self, e: EdgeId) -> Cost {
        if self.in_forest[e.0] {
            return Cost::zero();
        }
        match &self.pricing {
            Pricing::Simple(p) => p.reduced[e.0].clone(),
            Pricing::Heaps(b) => b.reduced_cost(e),
        }
    }

    /// Heap variant only: the global offset `Γ`.
    pub fn gamma(&self) -> Option<&Cost> {
        match &self.pricing {
            Pricing::Heaps(b) => Some(&b.gamma),
            Pricing::Simple(_) => None,
        }
    }

    /// Heap variant only: the stored priority `Δ̄(e)`.
    pub fn shifted_priority(&self, e: EdgeId) -> Option<&Cost> {
        match &self.pricing {
            Pricing::Heaps(b) => Some(&b.key[e.0]),
            Pricing::Simple(_) => None,
        }
    }

    /// Largest number of live parallel edges between two current nodes.
    pub fn max_multiplicity(&self) -> usize {
        let mut pairs: Vec<(usize, usize)> = self
            .live_edges()
            .map(|e| {
                let (a, b) = self.ends(e);
                (a.min(b), a.max(b))
            })
            .collect();
        pairs.sort_unstable();
        pairs.chunk_by(|x, y| x == y).map(|c| c.len()).max().unwrap_or(0)
    }

    /// The eligible edge minimising `Δ(e) = c'(e) / ℓ_e`, ties to the smaller
    /// id, together with that minimum.
    pub fn eligible_minimum(&self) -> Result<(EdgeId, Cost)> {
        match &self.pricing {
            Pricing::Simple(p) => {
                let mut best: Option<(Cost, EdgeId)> = None;
                for &e in &p.live_list {
                    if self.in_forest[e.0] {
                        continue;
                    }
                    let ell = self.leaf_count(e);
                    if ell == 0 {
                        continue;
                    }
                    let c = &p.reduced[e.0];
                    if c.is_zero() {
                        // live_list is id-ordered: nothing later can beat this
                        best = Some((Cost::zero(), e));
                        break;
                    }
                    let delta = if ell == 1 { c.clone() } else { c.div_int(2) };
                    if best.as_ref().is_none_or(|(d, _)| delta < *d) {
                        best = Some((delta, e));
                    }
                }
                best.map(|(d, e)| (e, d)).ok_or(Error::NoEligibleEdge)
            }
            Pricing::Heaps(b) => {
                let e = b.minimum().ok_or(Error::NoEligibleEdge)?;
                Ok((e, &b.key[e.0] - &b.gamma))
            }
        }
    }

    fn leaf_snapshot(&self) -> Vec<LeafEntry> {
        self.reps
            .iter()
            .filter(|&&r| self.is_leaf(r))
            .map(|&r| LeafEntry { block: self.block_of[r], forest_edge: self.forest[r].first().copied() })
            .collect()
    }

    /// Lowers `c'(e)` by `ℓ_e · delta` for every eligible edge.
    fn charge(&mut self, chosen: EdgeId, delta: &Cost) {
        match &mut self.pricing {
            Pricing::Simple(p) => {
                if !delta.is_zero() {
                    let double = delta.mul_int(2);
                    for i in 0..p.live_list.len() {
                        let e = p.live_list[i];
                        if self.in_forest[e.0] {
                            continue;
                        }
                        let (u, v) = self.graph.endpoints(e);
                        let ell = (self.forest[self.partition.find(u)].len() <= 1) as u8
                            + (self.forest[self.partition.find(v)].len() <= 1) as u8;
                        match ell {
                            0 => {}
                            1 => p.reduced[e.0] -= delta,
                            _ => p.reduced[e.0] -= &double,
                        }
                    }
                }
                debug_assert!(p.reduced[chosen.0].is_zero());
            }
            Pricing::Heaps(b) => {
                b.gamma += delta;
                b.remove(chosen);
                b.key[chosen.0] = Cost::zero();
                b.ell[chosen.0] = 0;
            }
        }
    }

    fn add_to_forest(&mut self, e: EdgeId) {
        let (a, b) = self.ends(e);
        debug_assert!(a != b);
        self.in_forest[e.0] = true;
        self.forest[a].push(e);
        self.forest[b].push(e);
        self.solution.push(e);
    }

    /// Forest path from `from` to `to` avoiding `skip`, as `(node, edge)`
    /// pairs walking back from `to`; `None` if they lie in different trees.
    fn forest_path(&mut self, from: usize, to: usize, skip: EdgeId) -> Option<Vec<(usize, EdgeId)>> {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.seen[from] = epoch;
        let mut stack = vec![from];
        while let Some(x) = stack.pop() {
            if x == to {
                break;
            }
            for &f in &self.forest[x] {
                if f == skip {
                    continue;
                }
                let (a, b) = self.ends(f);
                let y = if a == x { b } else { a };
                if self.seen[y] != epoch {
                    self.seen[y] = epoch;
                    self.came_from[y] = (x, f);
                    stack.push(y);
                }
            }
        }
        if self.seen[to] != epoch {
            return None;
        }
        let mut path = Vec::new();
        let mut x = to;
        while x != from {
            let (prev, f) = self.came_from[x];
            path.push((x, f));
            x = prev;
        }
        Some(path)
    }

    fn kill(&mut self, e: EdgeId) {
        self.live[e.0] = false;
        if let Pricing::Heaps(b) = &mut self.pricing {
            b.retire(e);
        }
    }

    /// Contracts the forest cycle closed by `new_edge`, if any. Cycle edges and
    /// arising self-loops leave `G'` and `F`; futile parallels at the merged
    /// node are dropped.
    pub fn apply_contraction(&mut self, new_edge: EdgeId) -> Option<Contraction> {
        debug_assert!(self.in_forest[new_edge.0]);
        let (s, t) = self.ends(new_edge);
        let path = self.forest_path(s, t, new_edge)?;

        let mut nodes = vec![s];
        let mut cycle = Vec::with_capacity(path.len() + 1);
        for &(x, f) in path.iter().rev() {
            nodes.push(x);
            cycle.push(f);
        }
        cycle.push(new_edge);
        let merged: Vec<BlockId> = nodes.iter().map(|&r| self.block_of[r]).collect();

        for &f in &cycle {
            self.in_forest[f.0] = false;
            self.live[f.0] = false;
        }
        let mut gathered = Vec::new();
        let mut forest_edges = Vec::new();
        for &r in &nodes {
            gathered.append(&mut self.incident[r]);
            forest_edges.append(&mut self.forest[r]);
        }
        let q = self.partition.contract(&nodes);
        forest_edges.retain(|f| self.in_forest[f.0]);
        self.forest[q] = forest_edges;

        let mut kept = Vec::with_capacity(gathered.len());
        for f in gathered {
            if !self.live[f.0] {
                continue;
            }
            let (a, b) = self.ends(f);
            if a == b {
                self.kill(f);
            } else {
                kept.push(f);
            }
        }
        self.drop_futile_at(q, &mut kept);
        self.incident[q] = kept;

        self.reps.retain(|&r| self.partition.is_representative(r));
        let block = BlockId(self.blocks.len());
        self.blocks.push(BlockParts::Merged(merged.clone()));
        self.block_of[q] = block;
        if let Pricing::Simple(p) = &mut self.pricing {
            let live = &self.live;
            p.live_list.retain(|e| live[e.0]);
        }
        Some(Contraction { cycle, merged, block })
    }

    /// Keeps at most two edges per parallel class at `q`: the forest edge if
    /// present, then the smallest `(c', id)`.
    fn drop_futile_at(&mut self, q: usize, edges: &mut Vec<EdgeId>) {
        let mut groups: Vec<Vec<EdgeId>> = Vec::new();
        let mut touched = Vec::new();
        for &f in edges.iter() {
            let (a, b) = self.ends(f);
            let w = if a == q { b } else { a };
            if self.bucket[w] == usize::MAX {
                self.bucket[w] = groups.len();
                groups.push(Vec::new());
                touched.push(w);
            }
            groups[self.bucket[w]].push(f);
        }
        for w in touched {
            self.bucket[w] = usize::MAX;
        }
        let mut dropped = false;
        for mut group in groups.into_iter().filter(|grp| grp.len() > 2) {
            let mut keyed: Vec<(bool, Cost, EdgeId)> =
                group.drain(..).map(|f| (!self.in_forest[f.0], self.reduced_cost(f), f)).collect();
            keyed.sort();
            debug_assert!(keyed.iter().filter(|k| !k.0).count() <= 1);
            for (_, _, f) in keyed.into_iter().skip(2) {
                self.kill(f);
                self.futile.push(f);
                dropped = true;
            }
        }
        if dropped {
            let live = &self.live;
            edges.retain(|f| live[f.0]);
        }
    }

    fn refresh_leaf_counts(&mut self, rep: usize) {
        if let Pricing::Heaps(_) = self.pricing {
            for i in 0..self.incident[rep].len() {
                let e = self.incident[rep][i];
                if !self.live[e.0] || self.in_forest[e.0] {
                    continue;
                }
                let ell = self.leaf_count(e);
                if let Pricing::Heaps(b) = &mut self.pricing {
                    b.set_leaf_count(e, ell);
                }
            }
        }
    }

    /// One grow step: select, charge, insert into the forest, contract.
    pub fn step(&mut self) -> Result<()> {
        let (edge, delta) = self.eligible_minimum().map_err(|_| Error::InfeasibleInstance)?;
        let leaves = if self.record_leaves { self.leaf_snapshot() } else { Vec::new() };
        self.charge(edge, &delta);
        self.add_to_forest(edge);
        let contraction = self.apply_contraction(edge);
        let (a, b) = self.ends(edge);
        self.refresh_leaf_counts(a);
        if b != a {
            self.refresh_leaf_counts(b);
        }
        self.steps.push(GrowStep { index: self.steps.len() + 1, edge, delta, leaves, contraction });
        Ok(())
    }

    pub fn into_trace(self) -> GrowTrace {
        GrowTrace {
            node_count: self.graph.node_count(),
            steps: self.steps,
            solution_order: self.solution,
            blocks: self.blocks,
            futile: self.futile,
            leaves_recorded: self.record_leaves,
        }
    }
}
