//! The dual solution implied by a grow run, its feasibility check, the lower
//! bound it certifies, and the factor-3 certificate for the final solution.
//!
//! The dual has a variable `y_S` per proper non-empty node subset and `z_e`
//! per edge; each constraint reads `Σ_{S : e ∈ δ(S)} y_S − z_e ≤ c(e)` and the
//! objective is `2 Σ y_S − Σ z_e`. Every grow step with width `Δ̃` raises
//! `y_{S(v)}` for each leaf `v` and `z_e` for each (leaf, incident forest
//! edge) pair by `Δ̃`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::cleanup::Solution;
use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::grow::{BlockId, BlockParts, GrowStep, GrowTrace};
use crate::multigraph::{EdgeId, MultiGraph, NodeId};

/// Sorted, duplicate-free node subset used as a dual variable key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeSet(Vec<NodeId>);

impl NodeSet {
    pub fn new(mut nodes: Vec<NodeId>) -> Self {
        nodes.sort();
        nodes.dedup();
        NodeSet(nodes)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DualCertificate {
    pub y: BTreeMap<NodeSet, Cost>,
    pub z: BTreeMap<EdgeId, Cost>,
}

impl DualCertificate {
    /// `B = 2 Σ y_S − Σ z_e`.
    pub fn objective(&self) -> Cost {
        let y: Cost = self.y.values().sum();
        let z: Cost = self.z.values().sum();
        &y.mul_int(2) - &z
    }

    /// One line per entry: `y <nodes> <p/q>` with comma-separated 1-based
    /// nodes, then `z <edge-id> <p/q>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (set, val) in &self.y {
            let nodes: Vec<String> = set.nodes().iter().map(|v| v.to_string()).collect();
            writeln!(out, "y {} {}", nodes.join(","), val.to_fraction_string()).unwrap();
        }
        for (e, val) in &self.z {
            writeln!(out, "z {} {}", e, val.to_fraction_string()).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cert = DualCertificate::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| Error::Parse { line, message };
            let fields: Vec<&str> = raw.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if fields.len() != 3 {
                return Err(err("expected `<y|z> <key> <value>`".into()));
            }
            let value: Cost = fields[2].parse().map_err(|e| err(format!("{e}")))?;
            match fields[0] {
                "y" => {
                    let nodes = fields[1]
                        .split(',')
                        .map(|s| match s.parse::<usize>() {
                            Ok(x) if x >= 1 => Ok(NodeId(x - 1)),
                            _ => Err(err(format!("bad node {s:?}"))),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    *cert.y.entry(NodeSet::new(nodes)).or_default() += &value;
                }
                "z" => {
                    let e = fields[1].parse().map_err(|_| err(format!("bad edge {:?}", fields[1])))?;
                    *cert.z.entry(EdgeId(e)).or_default() += &value;
                }
                other => return Err(err(format!("unknown entry kind {other:?}"))),
            }
        }
        Ok(cert)
    }
}

/// Checks the block table and that every step only refers to blocks that are
/// current at that point. Returns sorted members for every block.
fn validate_trace(trace: &GrowTrace) -> Result<Vec<Vec<NodeId>>> {
    let corrupt = |m: String| Err(Error::CorruptTrace(m));
    let n = trace.node_count;
    if trace.blocks.len() < n {
        return corrupt(format!("{} blocks for {n} nodes", trace.blocks.len()));
    }
    let mut members: Vec<Vec<NodeId>> = Vec::with_capacity(trace.blocks.len());
    let mut used = vec![false; trace.blocks.len()];
    for (i, b) in trace.blocks.iter().enumerate() {
        match b {
            BlockParts::Node(v) if i < n && v.0 == i => members.push(vec![*v]),
            BlockParts::Merged(parts) if i >= n && parts.len() >= 2 => {
                let mut m = Vec::new();
                for p in parts {
                    if p.0 >= i || used[p.0] {
                        return corrupt(format!("block {i} merges invalid part {}", p.0));
                    }
                    used[p.0] = true;
                    m.extend_from_slice(&members[p.0]);
                }
                m.sort();
                members.push(m);
            }
            _ => return corrupt(format!("malformed block {i}")),
        }
    }

    let mut alive = vec![false; trace.blocks.len()];
    alive[..n].iter_mut().for_each(|a| *a = true);
    let mut next_block = n;
    for step in &trace.steps {
        if step.delta.is_negative() {
            return corrupt(format!("step {} has negative width", step.index));
        }
        for leaf in &step.leaves {
            if leaf.block.0 >= alive.len() || !alive[leaf.block.0] {
                return corrupt(format!("step {} names stale block {}", step.index, leaf.block.0));
            }
            if members[leaf.block.0].len() == n {
                return corrupt(format!("step {} has the full node set as a leaf", step.index));
            }
        }
        if let Some(c) = &step.contraction {
            if c.block.0 != next_block {
                return corrupt(format!("step {} creates block {} out of order", step.index, c.block.0));
            }
            match trace.blocks.get(c.block.0) {
                Some(BlockParts::Merged(parts)) if *parts == c.merged => {}
                _ => return corrupt(format!("step {} disagrees with the block table", step.index)),
            }
            for b in &c.merged {
                if !alive[b.0] {
                    return corrupt(format!("step {} merges stale block {}", step.index, b.0));
                }
                alive[b.0] = false;
            }
            alive[c.block.0] = true;
            next_block += 1;
        }
    }
    if next_block != trace.blocks.len() {
        return corrupt("unused blocks in the block table".into());
    }
    Ok(members)
}

/// Replays a trace step by step, accumulating `y` per block and `z` per edge.
pub struct CertificateBuilder<'t> {
    trace: &'t GrowTrace,
    members: Vec<Vec<NodeId>>,
    y: Vec<Cost>,
    z: BTreeMap<EdgeId, Cost>,
    applied: usize,
}

impl<'t> CertificateBuilder<'t> {
    pub fn new(trace: &'t GrowTrace) -> Result<Self> {
        if !trace.leaves_recorded && !trace.steps.is_empty() {
            return Err(Error::CorruptTrace("leaf snapshots were not recorded".into()));
        }
        let members = validate_trace(trace)?;
        Ok(CertificateBuilder { trace, y: vec![Cost::zero(); members.len()], members, z: BTreeMap::new(), applied: 0 })
    }

    pub fn applied_steps(&self) -> usize {
        self.applied
    }

    /// Applies the next step; `false` once the trace is exhausted.
    pub fn apply_next(&mut self) -> bool {
        let Some(step) = self.trace.steps.get(self.applied) else {
            return false;
        };
        self.apply(step);
        self.applied += 1;
        true
    }

    fn apply(&mut self, step: &GrowStep) {
        if step.delta.is_zero() {
            return;
        }
        for leaf in &step.leaves {
            self.y[leaf.block.0] += &step.delta;
            if let Some(f) = leaf.forest_edge {
                *self.z.entry(f).or_default() += &step.delta;
            }
        }
    }

    pub fn finish(mut self) -> DualCertificate {
        while self.apply_next() {}
        self.certificate()
    }

    pub fn certificate(&self) -> DualCertificate {
        let y = self
            .y
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(b, v)| (NodeSet(self.members[b].clone()), v.clone()))
            .collect();
        DualCertificate { y, z: self.z.clone() }
    }

    /// `c(e) − Σ_{S ∋ exactly one end of e} y_S + z_e` with the steps applied
    /// so far.
    pub fn slack(&self, g: &MultiGraph, e: EdgeId) -> Cost {
        let (u, v) = g.endpoints(e);
        let mut crossing = Cost::zero();
        for (b, val) in self.y.iter().enumerate() {
            if val.is_zero() {
                continue;
            }
            let m = &self.members[b];
            if m.binary_search(&u).is_ok() != m.binary_search(&v).is_ok() {
                crossing += val;
            }
        }
        let z = self.z.get(&e).cloned().unwrap_or_default();
        &(g.cost(e) - &crossing) + &z
    }

    pub fn block_members(&self, b: BlockId) -> &[NodeId] {
        &self.members[b.0]
    }
}

pub fn build_certificate(trace: &GrowTrace) -> Result<DualCertificate> {
    Ok(CertificateBuilder::new(trace)?.finish())
}

/// Per-edge slack `c(e) − Σ y_S + z_e` of every dual constraint. `None` if
/// the certificate names nodes outside the graph or an empty/full subset.
pub fn edge_slacks(g: &MultiGraph, cert: &DualCertificate) -> Option<Vec<Cost>> {
    let n = g.node_count();
    let mut crossing = vec![Cost::zero(); g.edge_count()];
    let mut inside = vec![false; n];
    for (set, val) in &cert.y {
        if set.is_empty() || set.len() >= n || set.nodes().iter().any(|v| v.0 >= n) {
            return None;
        }
        for v in set.nodes() {
            inside[v.0] = true;
        }
        for (e, edge) in g.edges() {
            if inside[edge.u.0] != inside[edge.v.0] {
                crossing[e.0] += val;
            }
        }
        for v in set.nodes() {
            inside[v.0] = false;
        }
    }
    if cert.z.keys().any(|e| e.0 >= g.edge_count()) {
        return None;
    }
    Some(
        g.edges()
            .map(|(e, edge)| {
                let z = cert.z.get(&e).cloned().unwrap_or_default();
                &(&edge.cost - &crossing[e.0]) + &z
            })
            .collect(),
    )
}

/// Non-negativity of all variables and of every edge's slack, including edges
/// the algorithm never touched.
pub fn verify_feasibility(g: &MultiGraph, cert: &DualCertificate) -> bool {
    if cert.y.values().chain(cert.z.values()).any(Cost::is_negative) {
        return false;
    }
    match edge_slacks(g, cert) {
        Some(slacks) => slacks.iter().all(|s| !s.is_negative()),
        None => false,
    }
}

pub fn dual_objective(cert: &DualCertificate) -> Cost {
    cert.objective()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub primal: Cost,
    pub bound: Cost,
    pub feasible: bool,
    /// `c(T̄) ≤ 3B`.
    pub within_three: bool,
}

impl RatioReport {
    /// `c(T̄) / B`; `None` when `B = 0`.
    pub fn ratio(&self) -> Option<Cost> {
        if self.bound.is_zero() {
            return None;
        }
        Some(&self.primal * &Cost::from_big(self.bound.to_big().recip()))
    }
}

/// Verifies that every kept edge has a tight dual constraint and compares
/// `c(T̄)` against `3B`.
pub fn check_ratio_certificate(g: &MultiGraph, sol: &Solution, cert: &DualCertificate) -> Result<RatioReport> {
    let feasible = verify_feasibility(g, cert);
    let slacks =
        edge_slacks(g, cert).ok_or_else(|| Error::CorruptTrace("certificate does not match the graph".into()))?;
    if let Some(&e) = sol.kept.iter().find(|e| !slacks[e.0].is_zero()) {
        return Err(Error::CertificateMismatch(e));
    }
    let bound = cert.objective();
    let within_three = sol.total_cost <= bound.mul_int(3);
    Ok(RatioReport { primal: sol.total_cost.clone(), bound, feasible, within_three })
}
