//! Instance generators and the line-oriented instance file format.
//!
//! ```text
//! # comment
//! p 2ecss <n> <m>
//! e <u> <v> <cost>      (m lines, 1-based nodes, cost decimal or p/q)
//! ```

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::multigraph::MultiGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceSpec {
    Tight { k: usize, eps: Cost },
    Random { n: usize, m: usize, max_cost: u32, seed: u64 },
}

impl InstanceSpec {
    pub fn generate(&self) -> Result<MultiGraph> {
        match self {
            InstanceSpec::Tight { k, eps } => gen_tight(*k, eps),
            InstanceSpec::Random { n, m, max_cost, seed } => gen_random(*n, *m, *max_cost, *seed),
        }
    }
}

fn unit(k: i64) -> Cost {
    Cost::from_int(k)
}

/// Triangle with unit costs.
pub fn fix_tri() -> MultiGraph {
    MultiGraph::build(3, [(1, 2, unit(1)), (1, 3, unit(1)), (2, 3, unit(1))]).unwrap()
}

/// Two nodes joined by parallel edges of cost 2 and 4.
pub fn fix_par() -> MultiGraph {
    MultiGraph::build(2, [(1, 2, unit(2)), (1, 2, unit(4))]).unwrap()
}

/// `K4` with unit costs, edges in lexicographic endpoint order.
pub fn fix_k4() -> MultiGraph {
    let mut edges = Vec::new();
    for u in 1..=4 {
        for v in u + 1..=4 {
            edges.push((u, v, unit(1)));
        }
    }
    MultiGraph::build(4, edges).unwrap()
}

/// The tight family: a centre `c` and `k` branches `c – u_i – v_i`.
///
/// Node 1 is the centre, `u_i = 2i`, `v_i = 2i + 1`. Each branch contributes,
/// in this order, two parallel `c–u_i` edges of cost 1, a `u_i–v_i` edge of
/// cost 1 and a `u_i–v_i` edge of cost 0. Then `k − 1` connector edges of
/// cost `1 + eps` follow: `v_1–v_2` and `u_i–v_{i+1}` for `2 ≤ i < k`, so that
/// `c, u_1, v_1, v_2, u_2, v_3, u_3, …, v_k, u_k, c` is a Hamiltonian cycle of
/// cost `k + 1 + (k − 1)·eps`, while the algorithm keeps every non-connector
/// edge for a total of `3k`.
pub fn gen_tight(k: usize, eps: &Cost) -> Result<MultiGraph> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("tight family needs k >= 2, got {k}")));
    }
    if *eps <= Cost::zero() {
        return Err(Error::InvalidParameter(format!("tight family needs eps > 0, got {eps}")));
    }
    let u = |i: usize| 2 * i;
    let v = |i: usize| 2 * i + 1;
    let mut edges = Vec::with_capacity(5 * k - 1);
    for i in 1..=k {
        edges.push((1, u(i), unit(1)));
        edges.push((1, u(i), unit(1)));
        edges.push((u(i), v(i), unit(1)));
        edges.push((u(i), v(i), unit(0)));
    }
    let dashed = &Cost::one() + eps;
    edges.push((v(1), v(2), dashed.clone()));
    for i in 2..k {
        edges.push((u(i), v(i + 1), dashed.clone()));
    }
    MultiGraph::build(2 * k + 1, edges)
}

/// Random Hamiltonian cycle plus `m − n` uniform extra edges (parallels
/// allowed), integer costs uniform in `[0, max_cost]`.
pub fn gen_random(n: usize, m: usize, max_cost: u32, seed: u64) -> Result<MultiGraph> {
    gen_random_costs(n, m, 0, max_cost, seed)
}

/// Like [`gen_random`] with costs uniform in `[min_cost, max_cost]`.
pub fn gen_random_costs(n: usize, m: usize, min_cost: u32, max_cost: u32, seed: u64) -> Result<MultiGraph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("random instance needs n >= 3, got {n}")));
    }
    if m < n {
        return Err(Error::TooSparse { n, m });
    }
    if min_cost > max_cost {
        return Err(Error::InvalidParameter(format!("empty cost range {min_cost}..={max_cost}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(&mut rng);
    let cost = |rng: &mut ChaCha8Rng| Cost::from(rng.gen_range(min_cost..=max_cost));
    let mut edges = Vec::with_capacity(m);
    for i in 0..n {
        let c = cost(&mut rng);
        edges.push((order[i], order[(i + 1) % n], c));
    }
    while edges.len() < m {
        let a = rng.gen_range(1..=n);
        let b = rng.gen_range(1..=n);
        if a != b {
            let c = cost(&mut rng);
            edges.push((a, b, c));
        }
    }
    let g = MultiGraph::build(n, edges)?;
    debug_assert!(g.is_two_edge_connected_full());
    Ok(g)
}

pub fn serialize(g: &MultiGraph) -> String {
    let mut out = String::new();
    writeln!(out, "p 2ecss {} {}", g.node_count(), g.edge_count()).unwrap();
    for (_, e) in g.edges() {
        writeln!(out, "e {} {} {}", e.u, e.v, e.cost).unwrap();
    }
    out
}

pub fn parse(text: &str) -> Result<MultiGraph> {
    let err = |line: usize, message: String| Error::Parse { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(err(line, "duplicate header".into()));
                }
                if fields.len() != 4 || fields[1] != "2ecss" {
                    return Err(err(line, "expected `p 2ecss <n> <m>`".into()));
                }
                let n = fields[2].parse().map_err(|_| err(line, format!("bad node count {:?}", fields[2])))?;
                let m = fields[3].parse().map_err(|_| err(line, format!("bad edge count {:?}", fields[3])))?;
                header = Some((n, m));
            }
            "e" => {
                let (n, m) = header.ok_or_else(|| err(line, "edge line before header".into()))?;
                if fields.len() != 4 {
                    return Err(err(line, "expected `e <u> <v> <cost>`".into()));
                }
                if edges.len() == m {
                    return Err(err(line, format!("more than {m} edge lines")));
                }
                let u: usize = fields[1].parse().map_err(|_| err(line, format!("bad node {:?}", fields[1])))?;
                let v: usize = fields[2].parse().map_err(|_| err(line, format!("bad node {:?}", fields[2])))?;
                let c: Cost = fields[3].parse().map_err(|e| err(line, format!("{e}")))?;
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(err(line, format!("node {x} out of range 1..={n}")));
                    }
                }
                if c.is_negative() {
                    return Err(err(line, format!("negative cost {c}")));
                }
                edges.push((u, v, c));
            }
            other => return Err(err(line, format!("unknown line type {other:?}"))),
        }
    }
    let (n, m) = header.ok_or_else(|| err(last_line.max(1), "missing `p 2ecss` header".into()))?;
    if edges.len() != m {
        return Err(err(last_line, format!("header announces {m} edges, found {}", edges.len())));
    }
    MultiGraph::build(n, edges).map_err(|e| err(1, e.to_string()))
}
