//! Command-line front end: `solve`, `gen`, `oracle` and `bench`.
//!
//! Exit codes: 0 success, 1 bad parameters or input, 2 infeasible instance,
//! 3 failed check.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cleanup::{run_cleanup, Solution};
use crate::cost::Cost;
use crate::dual::{build_certificate, check_ratio_certificate};
use crate::error::Error;
use crate::grow::{grow, GrowOptions, Variant};
use crate::instances::{gen_random, gen_tight, parse, serialize};
use crate::multigraph::{EdgeId, MultiGraph};
use crate::verify::{brute_force_opt, check_kept_edges_essential, check_leaf_degree, check_minimal};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ecss", version, about = "Minimum-cost 2-edge-connected spanning subgraphs, within a factor 3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Simple,
    Heap,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Simple => Variant::Simple,
            VariantArg::Heap => Variant::Heaps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum CheckLevel {
    None,
    /// Dual feasibility, tightness of kept edges, and the ratio certificate.
    Fast,
    /// `fast` plus minimality and both trace replays.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Density {
    /// `m = 2n`
    Sparse,
    /// `m = n²/4`
    Dense,
}

impl Density {
    pub fn edges(self, n: usize) -> usize {
        match self {
            Density::Sparse => 2 * n,
            Density::Dense => (n * n / 4).max(n),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance and print a report plus the solution edges.
    Solve {
        /// Instance file, `-` for stdin.
        input: PathBuf,
        #[arg(long, value_enum, default_value = "simple")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "fast")]
        check: CheckLevel,
        /// Report destination, `-` for stdout.
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Generate an instance file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(short, long, default_value = "-", global = true)]
        output: PathBuf,
    },
    /// Exact optimum by exhaustive search (at most 24 edges).
    Oracle { input: PathBuf },
    /// Time seeded random instances over a size schedule.
    Bench {
        /// Comma-separated node counts.
        #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
        sizes: Vec<usize>,
        #[arg(long, value_enum, default_value = "simple")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "sparse")]
        density: Density,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Family on which the factor 3 is approached.
    Tight {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1/8")]
        eps: Cost,
    },
    /// Hamiltonian cycle plus random extra edges.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        max_cost: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Outcome of a check: `None` when it was not run.
type Check = Option<bool>;

fn show(c: Check) -> &'static str {
    match c {
        None => "skipped",
        Some(true) => "pass",
        Some(false) => "fail",
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub nodes: usize,
    pub edges: usize,
    pub variant: Variant,
    pub check: CheckLevel,
    pub solution: Solution,
    pub lower_bound: Option<Cost>,
    pub dual_feasible: Check,
    pub kept_tight: Check,
    pub within_three: Check,
    pub two_edge_connected: Check,
    pub minimal: Check,
    pub leaf_degree: Check,
    pub kept_essential: Check,
    pub time_grow: Duration,
    pub time_cleanup: Duration,
    pub time_check: Duration,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        [
            self.dual_feasible,
            self.kept_tight,
            self.within_three,
            self.two_edge_connected,
            self.minimal,
            self.leaf_degree,
            self.kept_essential,
        ]
        .iter()
        .all(|c| *c != Some(false))
    }

    /// `c(T̄)/B`, only when the certificate was verified.
    pub fn ratio_bound(&self) -> Option<Cost> {
        let b = self.lower_bound.as_ref()?;
        if b.is_zero() || self.dual_feasible != Some(true) || self.kept_tight != Some(true) {
            return None;
        }
        Some(&self.solution.total_cost * &Cost::from_big(b.to_big().recip()))
    }

    pub fn to_text(&self, g: &MultiGraph) -> String {
        let mut s = String::new();
        let cost = &self.solution.total_cost;
        writeln!(s, "nodes: {}", self.nodes).unwrap();
        writeln!(s, "edges: {}", self.edges).unwrap();
        writeln!(s, "variant: {}", self.variant).unwrap();
        writeln!(s, "check: {}", format!("{:?}", self.check).to_lowercase()).unwrap();
        writeln!(s, "cost: {cost}").unwrap();
        writeln!(s, "cost_decimal: {:.6}", cost.to_f64()).unwrap();
        match &self.lower_bound {
            Some(b) => writeln!(s, "lower_bound: {b}").unwrap(),
            None => writeln!(s, "lower_bound: skipped").unwrap(),
        }
        match self.ratio_bound() {
            Some(r) => writeln!(s, "ratio_bound: {r} ({:.6})", r.to_f64()).unwrap(),
            None => writeln!(s, "ratio_bound: none").unwrap(),
        }
        writeln!(s, "dual_feasible: {}", show(self.dual_feasible)).unwrap();
        writeln!(s, "kept_tight: {}", show(self.kept_tight)).unwrap();
        writeln!(s, "within_three: {}", show(self.within_three)).unwrap();
        writeln!(s, "two_edge_connected: {}", show(self.two_edge_connected)).unwrap();
        writeln!(s, "minimal: {}", show(self.minimal)).unwrap();
        writeln!(s, "leaf_degree: {}", show(self.leaf_degree)).unwrap();
        writeln!(s, "kept_essential: {}", show(self.kept_essential)).unwrap();
        writeln!(s, "time_grow_ms: {:.3}", ms(self.time_grow)).unwrap();
        writeln!(s, "time_cleanup_ms: {:.3}", ms(self.time_cleanup)).unwrap();
        writeln!(s, "time_check_ms: {:.3}", ms(self.time_check)).unwrap();
        writeln!(s, "solution_edges: {}", self.solution.kept.len()).unwrap();
        let mut kept: Vec<EdgeId> = self.solution.kept.clone();
        kept.sort();
        for e in kept {
            let edge = g.edge(e);
            writeln!(s, "edge {} {} {} {}", e, edge.u, edge.v, edge.cost).unwrap();
        }
        s
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Runs grow, cleanup and the requested checks.
pub fn solve(g: &MultiGraph, variant: Variant, check: CheckLevel) -> crate::Result<RunReport> {
    let opts = GrowOptions { record_leaves: check >= CheckLevel::Fast };
    let t0 = Instant::now();
    let trace = grow(g, variant, opts)?;
    let time_grow = t0.elapsed();
    let t1 = Instant::now();
    let solution = run_cleanup(g, &trace.solution_order)?;
    let time_cleanup = t1.elapsed();

    let t2 = Instant::now();
    let mut report = RunReport {
        nodes: g.node_count(),
        edges: g.edge_count(),
        variant,
        check,
        solution,
        lower_bound: None,
        dual_feasible: None,
        kept_tight: None,
        within_three: None,
        two_edge_connected: None,
        minimal: None,
        leaf_degree: None,
        kept_essential: None,
        time_grow,
        time_cleanup,
        time_check: Duration::ZERO,
    };
    if check >= CheckLevel::Fast {
        let cert = build_certificate(&trace)?;
        report.lower_bound = Some(cert.objective());
        match check_ratio_certificate(g, &report.solution, &cert) {
            Ok(r) => {
                report.dual_feasible = Some(r.feasible);
                report.kept_tight = Some(true);
                report.within_three = Some(r.within_three);
            }
            Err(Error::CertificateMismatch(_)) => {
                report.dual_feasible = Some(crate::dual::verify_feasibility(g, &cert));
                report.kept_tight = Some(false);
                report.within_three = Some(false);
            }
            Err(e) => return Err(e),
        }
    }
    if check >= CheckLevel::Full {
        let sol = &report.solution;
        report.two_edge_connected = Some(g.is_two_edge_connected(&sol.kept));
        report.minimal = Some(check_minimal(g, sol));
        report.leaf_degree = Some(check_leaf_degree(g, &trace, sol)?.holds());
        report.kept_essential = Some(check_kept_edges_essential(g, &trace, sol)?);
    }
    report.time_check = t2.elapsed();
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub variant: Variant,
    pub reps: usize,
    pub grow: Duration,
    pub cleanup: Duration,
    /// Median of the per-instance sums, not the sum of the medians.
    pub total: Duration,
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

/// Median grow, cleanup and total times over `reps` seeded instances per
/// size. Costs are integers in `[1, 100]`. Repetitions are interleaved
/// across sizes so that a transient slowdown does not hit a single size.
/// Returns no rows when `reps == 0`.
pub fn bench(
    sizes: &[usize],
    variant: Variant,
    density: Density,
    reps: usize,
    seed: u64,
) -> crate::Result<Vec<BenchRow>> {
    if reps == 0 {
        return Ok(Vec::new());
    }
    let mut graphs = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let m = density.edges(n);
        let per_size: crate::Result<Vec<MultiGraph>> =
            (0..reps).map(|r| crate::instances::gen_random_costs(n, m, 1, 100, seed.wrapping_add(r as u64))).collect();
        graphs.push(per_size?);
    }
    let mut times = vec![(Vec::new(), Vec::new(), Vec::new()); sizes.len()];
    for r in 0..reps {
        for (i, per_size) in graphs.iter().enumerate() {
            let g = &per_size[r];
            let t0 = Instant::now();
            let trace = grow(g, variant, GrowOptions { record_leaves: false })?;
            let t1 = Instant::now();
            run_cleanup(g, &trace.solution_order)?;
            let t2 = Instant::now();
            times[i].0.push(t1 - t0);
            times[i].1.push(t2 - t1);
            times[i].2.push(t2 - t0);
        }
    }
    Ok(sizes
        .iter()
        .zip(times)
        .map(|(&n, (g, c, t))| BenchRow {
            n,
            m: density.edges(n),
            variant,
            reps,
            grow: median(g),
            cleanup: median(c),
            total: median(t),
        })
        .collect())
}

pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut s = format!(
        "{:>8} {:>10} {:>8} {:>5} {:>12} {:>12} {:>12}\n",
        "n", "m", "variant", "reps", "grow_ms", "cleanup_ms", "total_ms"
    );
    for r in rows {
        writeln!(
            s,
            "{:>8} {:>10} {:>8} {:>5} {:>12.3} {:>12.3} {:>12.3}",
            r.n,
            r.m,
            r.variant.to_string(),
            r.reps,
            ms(r.grow),
            ms(r.cleanup),
            ms(r.total)
        )
        .unwrap();
    }
    s
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InfeasibleInstance | Error::NoEligibleEdge | Error::NotTwoEdgeConnected => EXIT_INFEASIBLE,
        Error::CertificateMismatch(_) | Error::CorruptTrace(_) => EXIT_CHECK_FAILED,
        _ => EXIT_USAGE,
    }
}

fn read_input(path: &Path) -> std::io::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn write_output(path: &Path, text: &str) -> std::io::Result<()> {
    if path == Path::new("-") {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()
    } else {
        std::fs::write(path, text)
    }
}

#[derive(Debug)]
enum Failure {
    Io(PathBuf, std::io::Error),
    Solver(Error),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Solver(e)
    }
}

fn load(path: &Path) -> Result<MultiGraph, Failure> {
    let text = read_input(path).map_err(|e| Failure::Io(path.to_owned(), e))?;
    let g = parse(&text)?;
    if g.dropped_self_loops() > 0 {
        eprintln!("warning: ignored {} self-loop(s)", g.dropped_self_loops());
    }
    Ok(g)
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Solve { input, variant, check, output } => {
            let g = load(&input)?;
            let report = solve(&g, variant.into(), check)?;
            write_output(&output, &report.to_text(&g)).map_err(|e| Failure::Io(output, e))?;
            if !report.passed() {
                return Err(Failure::Check);
            }
        }
        Command::Gen { kind, output } => {
            let g = match kind {
                GenKind::Tight { k, eps } => gen_tight(k, &eps)?,
                GenKind::Random { n, m, max_cost, seed } => gen_random(n, m, max_cost, seed)?,
            };
            write_output(&output, &serialize(&g)).map_err(|e| Failure::Io(output, e))?;
        }
        Command::Oracle { input } => {
            let g = load(&input)?;
            let (opt, witness) = brute_force_opt(&g)?;
            let mut s = format!("opt: {opt}\nopt_decimal: {:.6}\nwitness_edges: {}\n", opt.to_f64(), witness.len());
            for e in witness {
                let edge = g.edge(e);
                writeln!(s, "edge {} {} {} {}", e, edge.u, edge.v, edge.cost).unwrap();
            }
            write_output(Path::new("-"), &s).map_err(|e| Failure::Io("-".into(), e))?;
        }
        Command::Bench { sizes, variant, density, reps, seed } => {
            let rows = bench(&sizes, variant.into(), density, reps, seed)?;
            write_output(Path::new("-"), &bench_table(&rows)).map_err(|e| Failure::Io("-".into(), e))?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            EXIT_USAGE
        }
        Err(Failure::Solver(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
        Err(Failure::Check) => {
            eprintln!("error: verification failed");
            EXIT_CHECK_FAILED
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{fix_tri, gen_tight};

    #[test]
    fn triangle_full_check() {
        let r = solve(&fix_tri(), Variant::Simple, CheckLevel::Full).unwrap();
        assert!(r.passed());
        assert_eq!(r.solution.total_cost, Cost::from_int(3));
        assert_eq!(r.lower_bound, Some(Cost::from_int(3)));
        assert_eq!(r.ratio_bound(), Some(Cost::one()));
        assert_eq!(r.minimal, Some(true));
    }

    #[test]
    fn tight_heap_fast() {
        let g = gen_tight(5, &Cost::ratio(1, 8)).unwrap();
        let r = solve(&g, Variant::Heaps, CheckLevel::Fast).unwrap();
        assert_eq!(r.solution.total_cost, Cost::from_int(15));
        assert_eq!(r.within_three, Some(true));
        assert_eq!(r.minimal, None);
    }

    #[test]
    fn no_checks_means_no_claims() {
        let r = solve(&fix_tri(), Variant::Simple, CheckLevel::None).unwrap();
        assert_eq!(r.ratio_bound(), None);
        assert!(r.to_text(&fix_tri()).contains("within_three: skipped"));
    }

    #[test]
    fn bench_with_zero_reps_is_empty() {
        assert!(bench(&[10, 20], Variant::Simple, Density::Sparse, 0, 1).unwrap().is_empty());
        let rows = bench(&[10], Variant::Heaps, Density::Dense, 1, 1).unwrap();
        assert_eq!((rows[0].n, rows[0].m), (10, 25));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["ecss", "gen", "tight", "--k", "1"]), EXIT_USAGE);
        assert_eq!(run(["ecss", "bogus"]), EXIT_USAGE);
        assert_eq!(run(["ecss", "solve", "/nonexistent/file"]), EXIT_USAGE);
    }
}
