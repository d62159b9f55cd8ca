//! The packing/covering bound for balls, per-instance checks and batch
//! experiments.
//!
//! Reports carry two bounds. `dsw_bound` uses the 2VC-dimension computed on
//! the `B_ell`-hypergraph itself, which only bounds the distance 2VC from
//! below, so a miss there is informative but not a bug. `dprime_bound` uses
//! an externally supplied upper bound on the distance 2VC (4 for grids, 2
//! for paths and cycles) and a miss there is a solver bug.

use std::io::Write;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::b_ell;
use crate::error::{Error, Result};
use crate::generators::{family, GraphFamily};
use crate::graph::Graph;
use crate::hypergraph::{
    packing_number, shattered_lower_bound, transversality, two_vc_dimension, ShatterMode, SolveMode,
    EXHAUSTIVE_VERTEX_CAP,
};

/// `11 d² (d + ν + 3) C(d + ν, d)²`, exactly.
pub fn dsw_bound(d: u64, nu: u64) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::precondition("the bound needs d >= 1"));
    }
    let binom = binomial(d + nu, d);
    Ok(BigUint::from(11u32) * d * d * (d + nu + 3) * &binom * &binom)
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    // Each partial product is itself a binomial coefficient, so the division
    // is exact.
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    CapExceeded,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Timings {
    pub packing_ms: u128,
    pub transversal_ms: u128,
    pub two_vc_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub fingerprint: String,
    pub vertices: usize,
    pub ell: usize,
    pub status: Status,
    pub nu: Option<usize>,
    pub tau: Option<usize>,
    /// 2VC-dimension of the `B_ell`-hypergraph of the whole graph; a lower
    /// bound on the distance 2VC-dimension.
    pub two_vc: Option<i64>,
    /// False when the graph is above the exhaustive cap and `two_vc` comes
    /// from the randomized greedy search.
    pub two_vc_exact: bool,
    /// Decimal, since the value outgrows 64 bits quickly.
    pub dsw_bound: Option<String>,
    /// `tau <= dsw_bound(two_vc, nu)`.
    pub bound_satisfied: Option<bool>,
    /// Supplied upper bound on the distance 2VC-dimension.
    pub dprime: Option<u64>,
    pub dprime_bound: Option<String>,
    /// `tau <= dsw_bound(dprime, nu)`; `false` here is a correctness bug.
    pub dprime_satisfied: Option<bool>,
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    pub dprime: Option<u64>,
    /// Wall-clock timings make output nondeterministic, so they are opt-in.
    pub timings: bool,
    /// Seed for the greedy 2VC search above the exhaustive cap.
    pub seed: u64,
}

const GREEDY_TWO_VC_TRIALS: usize = 32;

/// Exact `nu_ell`, `tau_ell` and 2VC of the `B_ell`-hypergraph, and both
/// bounds. Solver caps turn into a partial report with
/// `status = cap_exceeded`; only an empty graph or `dprime = 0` is an error.
pub fn check_instance(g: &Graph, ell: usize, opts: &CheckOptions) -> Result<InstanceReport> {
    if g.vertex_count() == 0 {
        return Err(Error::precondition("the graph has no vertices"));
    }
    if opts.dprime == Some(0) {
        return Err(Error::precondition("dprime must be at least 1"));
    }
    let h = b_ell(g, ell);
    let h = h.hypergraph();
    let mut report = InstanceReport {
        fingerprint: g.fingerprint(),
        vertices: g.vertex_count(),
        ell,
        status: Status::Ok,
        nu: None,
        tau: None,
        two_vc: None,
        two_vc_exact: g.vertex_count() <= EXHAUSTIVE_VERTEX_CAP,
        dsw_bound: None,
        bound_satisfied: None,
        dprime: opts.dprime,
        dprime_bound: None,
        dprime_satisfied: None,
        message: None,
        timings: None,
    };
    let mut clock = Instant::now();
    let mut lap = || {
        let ms = clock.elapsed().as_millis();
        clock = Instant::now();
        ms
    };

    let nu = packing_number(h, SolveMode::Exact).map(|p| p.len());
    let packing_ms = lap();
    let tau = transversality(h, SolveMode::Exact).map(|t| t.len());
    let transversal_ms = lap();
    let two_vc = if report.two_vc_exact {
        two_vc_dimension(h)
    } else {
        shattered_lower_bound(h, ShatterMode::Pairs, GREEDY_TWO_VC_TRIALS, opts.seed).map(|lb| lb.value)
    };
    let two_vc_ms = lap();
    if opts.timings {
        report.timings = Some(Timings {
            packing_ms,
            transversal_ms,
            two_vc_ms,
        });
    }

    let mut problems = Vec::new();
    report.nu = take(nu, &mut problems);
    report.tau = take(tau, &mut problems);
    report.two_vc = take(two_vc.map(|v| v.max(1)), &mut problems);
    if let Some(e) = problems.first() {
        report.status = if problems.iter().all(|e| matches!(e, Error::CapExceeded { .. })) {
            Status::CapExceeded
        } else {
            Status::Failed
        };
        report.message = Some(e.to_string());
    }

    if let (Some(nu), Some(tau)) = (report.nu, report.tau) {
        if tau < nu {
            report.status = Status::Failed;
            report.message = Some(format!("tau = {tau} below nu = {nu}"));
        }
        if let Some(d) = report.two_vc {
            let bound = dsw_bound(d as u64, nu as u64)?;
            report.bound_satisfied = Some(BigUint::from(tau) <= bound);
            report.dsw_bound = Some(bound.to_string());
        }
        if let Some(d) = opts.dprime {
            let bound = dsw_bound(d, nu as u64)?;
            let ok = BigUint::from(tau) <= bound;
            report.dprime_satisfied = Some(ok);
            report.dprime_bound = Some(bound.to_string());
            if !ok {
                report.status = Status::Failed;
                report.message = Some(format!("tau = {tau} exceeds the bound for d' = {d}"));
            }
        }
    }
    Ok(report)
}

fn take<T>(r: Result<T>, problems: &mut Vec<Error>) -> Option<T> {
    r.map_err(|e| problems.push(e)).ok()
}

/// One line of the experiment matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentEntry {
    pub family: GraphFamily,
    pub radii: Vec<usize>,
    /// Only random families use seeds; others are built once.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub dprime: Option<u64>,
    /// Instances above this many vertices are reported as `cap_exceeded`
    /// without running the solvers.
    #[serde(default)]
    pub max_vertices: Option<usize>,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub entries: Vec<ExperimentEntry>,
    #[serde(default)]
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceRow {
    pub row: &'static str,
    pub family: String,
    pub seed: Option<u64>,
    pub ell: usize,
    pub report: Option<InstanceReport>,
    /// Set when the instance could not be built or checked at all.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub row: &'static str,
    pub instances: usize,
    pub ok: usize,
    pub cap_exceeded: usize,
    pub failed: usize,
    pub errors: usize,
    /// Instances where `tau` exceeds the bound with the computed 2VC.
    pub computed_bound_misses: usize,
    /// Instances where `tau` exceeds the bound with the supplied `dprime`.
    pub bound_violations: usize,
}

impl Summary {
    fn add(&mut self, row: &InstanceRow) {
        self.instances += 1;
        let Some(r) = &row.report else {
            self.errors += 1;
            return;
        };
        match r.status {
            Status::Ok => self.ok += 1,
            Status::CapExceeded => self.cap_exceeded += 1,
            Status::Failed => self.failed += 1,
        }
        self.computed_bound_misses += usize::from(r.bound_satisfied == Some(false));
        self.bound_violations += usize::from(r.dprime_satisfied == Some(false));
    }
}

struct Job<'a> {
    entry: &'a ExperimentEntry,
    seed: Option<u64>,
    ell: usize,
}

fn run_job(job: &Job, timings: bool) -> InstanceRow {
    let mut row = InstanceRow {
        row: "instance",
        family: job.entry.family.to_string(),
        seed: job.seed,
        ell: job.ell,
        report: None,
        error: None,
    };
    let g = match family(&job.entry.family, job.seed.unwrap_or(0)) {
        Ok(g) => g,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    if let Some(cap) = job.entry.max_vertices.filter(|&cap| g.vertex_count() > cap) {
        row.report = Some(InstanceReport {
            fingerprint: g.fingerprint(),
            vertices: g.vertex_count(),
            ell: job.ell,
            status: Status::CapExceeded,
            nu: None,
            tau: None,
            two_vc: None,
            two_vc_exact: false,
            dsw_bound: None,
            bound_satisfied: None,
            dprime: job.entry.dprime,
            dprime_bound: None,
            dprime_satisfied: None,
            message: Some(format!("{} vertices, configured cap {cap}", g.vertex_count())),
            timings: None,
        });
        return row;
    }
    let opts = CheckOptions {
        dprime: job.entry.dprime,
        timings,
        seed: job.seed.unwrap_or(0),
    };
    match check_instance(&g, job.ell, &opts) {
        Ok(r) => row.report = Some(r),
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs every `(family, seed, ell)` cell of the config and writes one JSON
/// line per instance in config order, then a summary line. Instances run in
/// parallel in batches; each batch is flushed before the next starts.
pub fn run_experiments(config: &ExperimentConfig, out: &mut impl Write) -> Result<Summary> {
    let jobs: Vec<Job> = config
        .entries
        .iter()
        .flat_map(|entry| {
            let seeds: Vec<Option<u64>> = match entry.family {
                GraphFamily::Gnp { .. } => entry.seeds.iter().copied().map(Some).collect(),
                _ => vec![None],
            };
            seeds
                .into_iter()
                .flat_map(move |seed| entry.radii.iter().map(move |&ell| Job { entry, seed, ell }))
        })
        .collect();
    let batch = rayon::current_num_threads().max(1) * 4;
    let mut summary = Summary {
        row: "summary",
        ..Summary::default()
    };
    for chunk in jobs.chunks(batch) {
        let rows: Vec<InstanceRow> = chunk.par_iter().map(|j| run_job(j, config.timings)).collect();
        for row in &rows {
            summary.add(row);
            serde_json::to_writer(&mut *out, row)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
    }
    serde_json::to_writer(&mut *out, &summary)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(summary)
}
