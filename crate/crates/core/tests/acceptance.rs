//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use ecss::cleanup::{is_essential, is_essential_definitional, run_cleanup, Solution};
use ecss::cli::{bench, BenchRow, Density};
use ecss::dual::{build_certificate, check_ratio_certificate, CertificateBuilder};
use ecss::grow::{grow, grow_heaps, grow_observed, grow_simple, GrowOptions, GrowTrace, Variant};
use ecss::instances::gen_random;
use ecss::verify::{brute_force_opt, check_leaf_degree, check_minimal};
use ecss::{Cost, EdgeId, MultiGraph};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Run {
    name: String,
    graph: MultiGraph,
    trace: GrowTrace,
    solution: Solution,
    opt: Option<Cost>,
}

impl Run {
    fn new(name: String, graph: MultiGraph, with_oracle: bool) -> Run {
        let trace = grow_simple(&graph).unwrap();
        let solution = run_cleanup(&graph, &trace.solution_order).unwrap();
        let opt = with_oracle.then(|| brute_force_opt(&graph).unwrap().0);
        Run { name, graph, trace, solution, opt }
    }
}

struct Corpus {
    tight: Vec<(usize, Run)>,
    random: Vec<Run>,
    fixtures: Vec<Run>,
}

impl Corpus {
    fn all(&self) -> impl Iterator<Item = &Run> {
        self.tight.iter().map(|(_, r)| r).chain(&self.random).chain(&self.fixtures)
    }
}

fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| Corpus {
        tight: common::tight_family()
            .into_iter()
            .map(|(k, g)| (k, Run::new(format!("tight k={k}"), g, k <= 4)))
            .collect(),
        random: common::small_random(200, 1)
            .into_iter()
            .map(|(seed, g)| Run::new(format!("random seed={seed}"), g, true))
            .collect(),
        fixtures: common::fixtures().into_iter().map(|(name, g)| Run::new(name, g, true)).collect(),
    })
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tight_family() -> Outcome {
    let start = Instant::now();
    let eps = Cost::ratio(1, 8);
    let mut checked_ratios = 0;
    for (k, g) in common::tight_family() {
        let k_cost = Cost::from_int(k as i64);
        let trace = grow_simple(&g).unwrap();
        let sol = run_cleanup(&g, &trace.solution_order).unwrap();
        ensure(sol.total_cost == k_cost.mul_int(3), || format!("k={k}: cost {} != {}", sol.total_cost, 3 * k))?;
        let formula = &(&k_cost + &Cost::one()) + &eps.mul_int(k as i64 - 1);
        if k <= 4 {
            let (opt, _) = brute_force_opt(&g).unwrap();
            ensure(opt == formula, || format!("k={k}: oracle {opt} != {formula}"))?;
            let observed = &sol.total_cost * &Cost::from_big(opt.to_big().recip());
            let expected = &k_cost.mul_int(3) * &Cost::from_big(formula.to_big().recip());
            ensure(observed == expected, || format!("k={k}: ratio {observed} != {expected}"))?;
            checked_ratios += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"))?;
    Ok(format!("cost 3k for k=2..8, OPT and ratio exact for {checked_ratios} k, {elapsed:.2?}"))
}

fn ratio_property() -> Outcome {
    let start = Instant::now();
    let runs: Vec<Run> =
        common::small_random(200, 1).into_iter().map(|(seed, g)| Run::new(format!("seed {seed}"), g, true)).collect();
    let elapsed = start.elapsed();
    let mut worst = Cost::zero();
    for r in &runs {
        let opt = r.opt.as_ref().unwrap();
        ensure(r.solution.total_cost <= opt.mul_int(3), || format!("{}: {} > 3·{opt}", r.name, r.solution.total_cost))?;
        if !opt.is_zero() {
            worst = worst.max(&r.solution.total_cost * &Cost::from_big(opt.to_big().recip()));
        }
    }
    ensure(elapsed.as_secs_f64() < 60.0, || format!("took {elapsed:?}"))?;
    Ok(format!("200 instances, worst ratio {worst} ({:.3}), {elapsed:.2?}", worst.to_f64()))
}

fn certificates() -> Outcome {
    let mut count = 0;
    for r in corpus().all() {
        let cert = build_certificate(&r.trace).unwrap();
        let report = check_ratio_certificate(&r.graph, &r.solution, &cert).map_err(|e| format!("{}: {e}", r.name))?;
        ensure(report.feasible, || format!("{}: dual infeasible", r.name))?;
        ensure(report.within_three, || format!("{}: c(T) > 3B", r.name))?;
        if let Some(opt) = &r.opt {
            ensure(report.bound <= *opt, || format!("{}: B {} > OPT {opt}", r.name, report.bound))?;
        }
        count += 1;
    }
    Ok(format!("{count} certificates feasible, kept edges tight, c(T) <= 3B, B <= OPT"))
}

fn reconstruction() -> Outcome {
    let graphs = common::fixtures()
        .into_iter()
        .chain(common::medium_random(50, 500).into_iter().map(|(s, g)| (format!("seed {s}"), g)));
    let mut comparisons = 0usize;
    for (name, g) in graphs {
        for variant in [Variant::Simple, Variant::Heaps] {
            let trace = grow(&g, variant, GrowOptions::default()).unwrap();
            let mut builder = CertificateBuilder::new(&trace).unwrap();
            let mut failure = None;
            grow_observed(&g, variant, GrowOptions::default(), |state, step| {
                builder.apply_next();
                for e in g.edge_ids().filter(|&e| state.is_live(e) || state.in_forest(e)) {
                    comparisons += 1;
                    if failure.is_none() && builder.slack(&g, e) != state.reduced_cost(e) {
                        failure = Some(format!("{name} ({variant}) step {}: edge {e}", step.index));
                    }
                }
            })
            .unwrap();
            if let Some(f) = failure {
                return Err(f);
            }
        }
    }
    Ok(format!("{comparisons} per-step comparisons exact"))
}

fn leaf_degree() -> Outcome {
    let mut states = 0;
    for r in corpus().all() {
        let report = check_leaf_degree(&r.graph, &r.trace, &r.solution).map_err(|e| format!("{}: {e}", r.name))?;
        if let Some(v) = report.violations().next() {
            return Err(format!("{}: state {} has {} > {}", r.name, v.state, v.degree_sum, v.bound));
        }
        states += report.states.len();
    }
    for (k, r) in &corpus().tight {
        let report = check_leaf_degree(&r.graph, &r.trace, &r.solution).unwrap();
        let s = &report.states[*k];
        ensure(s.degree_sum == 8 * k && s.bound == 8 * k + 6, || {
            format!("k={k}: state {k} has {} vs {}", s.degree_sum, s.bound)
        })?;
        ensure(s.leaves == 2 * k + 1 && s.isolated == 1 && s.in_solution == 2 * k, || format!("k={k}: leaf classes"))?;
    }
    Ok(format!("{states} states, no violation; tight family gives 8k vs 8k+6"))
}

fn minimality() -> Outcome {
    let mut count = 0;
    for r in corpus().all() {
        let n = r.graph.node_count();
        let mut touched = vec![false; n];
        for &e in &r.solution.kept {
            let (u, v) = r.graph.endpoints(e);
            touched[u.0] = true;
            touched[v.0] = true;
        }
        ensure(touched.iter().all(|&t| t), || format!("{}: not spanning", r.name))?;
        ensure(r.graph.is_two_edge_connected(&r.solution.kept), || format!("{}: not 2EC", r.name))?;
        ensure(check_minimal(&r.graph, &r.solution), || format!("{}: not minimal", r.name))?;
        count += 1;
    }
    Ok(format!("{count} solutions spanning, 2-edge-connected, minimal"))
}

fn variant_equivalence() -> Outcome {
    let graphs = common::fixtures()
        .into_iter()
        .chain(common::medium_random(200, 700).into_iter().map(|(s, g)| (format!("seed {s}"), g)));
    let mut steps = 0;
    for (name, g) in graphs {
        let a = grow_simple(&g).unwrap();
        let b = grow_heaps(&g).unwrap();
        ensure(a.solution_order == b.solution_order, || format!("{name}: orders differ"))?;
        ensure(a.deltas() == b.deltas(), || format!("{name}: step widths differ"))?;
        steps += a.steps.len();
    }
    Ok(format!("fixtures + 200 instances, {steps} identical steps"))
}

fn check_essentiality(g: &MultiGraph, set: &[EdgeId], e: EdgeId) -> Result<bool, String> {
    let fast = is_essential(g, set, e).unwrap();
    let slow = is_essential_definitional(g, set, e).unwrap();
    ensure(fast == slow, || format!("edge {e}: fast {fast}, definitional {slow}"))?;
    Ok(fast)
}

fn essentiality_oracle() -> Outcome {
    let mut exhaustive = 0;
    for r in corpus().all().filter(|r| r.graph.edge_count() <= 16) {
        let all: Vec<EdgeId> = r.graph.edge_ids().collect();
        for set in [&all, &r.trace.solution_order] {
            for &e in set.iter() {
                check_essentiality(&r.graph, set, e).map_err(|m| format!("{}: {m}", r.name))?;
                exhaustive += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut sampled, mut essential) = (0, 0);
    let mut seed = 0;
    while sampled < 10_000 {
        seed += 1;
        let g = gen_random(100, 100 + 2 * seed as usize, 10, seed).unwrap();
        let all: Vec<EdgeId> = g.edge_ids().collect();
        let order = grow_simple(&g).unwrap().solution_order;
        for set in [&all, &order] {
            for &e in set.choose_multiple(&mut rng, 250) {
                essential += check_essentiality(&g, set, e).map_err(|m| format!("seed {seed}: {m}"))? as usize;
                sampled += 1;
            }
        }
    }
    Ok(format!("{exhaustive} exhaustive + {sampled} sampled queries agree ({essential} essential)"))
}

fn growth(rows: &[BenchRow]) -> Vec<f64> {
    rows.windows(2).map(|w| w[1].total.as_secs_f64() / w[0].total.as_secs_f64()).collect()
}

fn scaling() -> Outcome {
    // warm-up so that allocator and cache effects do not land on the first size
    bench(&[250], Variant::Simple, Density::Sparse, 1, 0).unwrap();
    let sparse = bench(&[250, 500, 1000, 2000], Variant::Simple, Density::Sparse, 7, 1).unwrap();
    let dense = bench(&[100, 200, 400], Variant::Heaps, Density::Dense, 7, 1).unwrap();
    let (gs, gd) = (growth(&sparse), growth(&dense));
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>().join(", ");
    let ms = |rows: &[BenchRow]| {
        rows.iter().map(|r| format!("{:.1}", r.total.as_secs_f64() * 1e3)).collect::<Vec<_>>().join("/")
    };
    let detail = format!(
        "simple sparse ×[{}] (≤5; {} ms), heap dense ×[{}] (≤5.5; {} ms)",
        fmt(&gs),
        ms(&sparse),
        fmt(&gd),
        ms(&dense)
    );
    ensure(gs.iter().all(|&x| x <= 5.0) && gd.iter().all(|&x| x <= 5.5), || detail.clone())?;
    Ok(detail)
}

fn uniform_costs() -> Outcome {
    let mut worst = Cost::zero();
    for (seed, g) in common::small_unit(100, 5_000) {
        let sol = run_cleanup(&g, &grow_heaps(&g).unwrap().solution_order).unwrap();
        let (opt, _) = brute_force_opt(&g).unwrap();
        ensure(sol.total_cost <= opt.mul_int(2), || format!("seed {seed}: {} > 2·{opt}", sol.total_cost))?;
        worst = worst.max(&sol.total_cost * &Cost::from_big(opt.to_big().recip()));
    }
    Ok(format!("100 unit-cost instances, worst ratio {worst}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("tight family reproduction", tight_family),
        ("approximation ratio vs exact optimum", ratio_property),
        ("dual certificates", certificates),
        ("reduced-cost reconstruction", reconstruction),
        ("leaf-degree inequality", leaf_degree),
        ("minimality and correctness", minimality),
        ("variant equivalence", variant_equivalence),
        ("essentiality test agreement", essentiality_oracle),
        ("scaling sanity", scaling),
        ("uniform costs within factor 2", uniform_costs),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
