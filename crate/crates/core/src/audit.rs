//! Batch certification over enumerated instance spaces.
//!
//! Instances are processed in parallel and merged back in enumeration order,
//! so records and summaries do not depend on scheduling.

use std::collections::HashSet;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::canon::canonical_graph6;
use crate::constructive::{check_bound_for, construct_graph_code, construct_tree_code, BoundStatus};
use crate::error::{Error, Result};
use crate::families::{
    enumerate_small_graphs, enumerate_trees, gen_reduced_subdivided_star, gen_subcubic_gp, gen_subdivided_star,
    gen_tight_tree_pair, random_graph, GraphFilter,
};
use crate::graph::Graph;
use crate::set::VertexSet;
use crate::solver::{solve, solve_with_budget};
use crate::verify::is_io_code;

/// Environment variable holding the worker count for audits.
pub const WORKERS_ENV: &str = "IOCODE_WORKERS";

/// Largest tree order accepted by [`audit_trees`].
pub const TREE_AUDIT_CAP: usize = 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AuditOptions {
    /// Fixed degree bound; `None` uses `max(3, Δ(G))` per instance.
    pub delta: Option<usize>,
    /// Worker threads; `None` reads [`WORKERS_ENV`], then uses all cores.
    pub workers: Option<usize>,
}

impl AuditOptions {
    pub fn with_delta(delta: usize) -> Self {
        AuditOptions {
            delta: Some(delta),
            workers: None,
        }
    }

    fn delta_for(&self, g: &Graph) -> usize {
        self.delta.unwrap_or_else(|| g.max_degree().unwrap_or(0).max(3))
    }

    fn admits(&self, g: &Graph) -> bool {
        self.delta.is_none_or(|d| g.degree_at_most(d))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditRecord {
    /// Canonical graph6.
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub delta: usize,
    pub twin_free: bool,
    pub c4_free: bool,
    pub gamma: usize,
    pub constructor_size: usize,
    /// Status of the exact value.
    pub bound_status: BoundStatus,
    /// Status of the constructor's code (also `Violation` when it is invalid).
    pub constructor_status: BoundStatus,
    pub is_extremal: bool,
    pub fallbacks: usize,
    pub witness_code: VertexSet,
}

impl AuditRecord {
    pub fn is_violation(&self) -> bool {
        self.bound_status == BoundStatus::Violation || self.constructor_status == BoundStatus::Violation
    }

    pub fn csv_header() -> &'static str {
        "id,n,m,max_degree,delta,twin_free,c4_free,gamma,constructor_size,bound_status,constructor_status,is_extremal,fallbacks,witness_code"
    }

    pub fn csv_row(&self) -> String {
        let code: Vec<String> = self.witness_code.iter().map(|v| v.to_string()).collect();
        let status = |s: BoundStatus| match s {
            BoundStatus::WithinBound => "within_bound",
            BoundStatus::ExceptionalStar => "exceptional_star",
            BoundStatus::Violation => "violation",
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.id,
            self.n,
            self.m,
            self.max_degree,
            self.delta,
            self.twin_free,
            self.c4_free,
            self.gamma,
            self.constructor_size,
            status(self.bound_status),
            status(self.constructor_status),
            self.is_extremal,
            self.fallbacks,
            code.join(" ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditSummary {
    pub kind: String,
    pub n_max: usize,
    /// `None` when the bound is taken per instance.
    pub delta: Option<usize>,
    /// Records emitted (one per isomorphism class).
    pub instances: usize,
    /// Instances checked, counting labeled duplicates.
    pub checked: usize,
    pub violations: usize,
    pub exceptional: usize,
    pub extremal: usize,
    pub fallbacks: usize,
    pub violation_ids: Vec<String>,
    pub exceptional_ids: Vec<String>,
    pub extremal_ids: Vec<String>,
    pub seed: Option<u64>,
    pub runtime_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub summary: AuditSummary,
    pub records: Vec<AuditRecord>,
}

impl AuditReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(AuditRecord::csv_header());
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }
}

fn run_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    let workers = workers.or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()));
    match workers {
        None => Ok(job()),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))
            .map(|pool| pool.install(job)),
    }
}

/// Exact value, constructor output and bound status for one instance.
pub fn audit_instance(g: &Graph, delta: usize, tree: bool) -> Result<AuditRecord> {
    let exact = solve(g)?;
    let built = if tree {
        construct_tree_code(g, delta)
    } else {
        construct_graph_code(g, delta)
    };
    let (constructor_size, constructor_status, fallbacks) = match built {
        Ok((code, trace)) => {
            let valid = is_io_code(g, &code)?.ok;
            let status = if valid {
                check_bound_for(g, code.len(), delta)
            } else {
                BoundStatus::Violation
            };
            (code.len(), status, trace.fallbacks())
        }
        Err(Error::Internal(_)) => (g.order(), BoundStatus::Violation, 0),
        Err(e) => return Err(e),
    };
    let bound_status = check_bound_for(g, exact.gamma, delta);
    let is_extremal =
        bound_status == BoundStatus::WithinBound && 2 * delta * exact.gamma == (2 * delta - 1) * g.order();
    Ok(AuditRecord {
        id: canonical_graph6(g),
        n: g.order(),
        m: g.size(),
        max_degree: g.max_degree()?,
        delta,
        twin_free: g.is_open_twin_free(),
        c4_free: !g.has_four_cycle(),
        gamma: exact.gamma,
        constructor_size,
        bound_status,
        constructor_status,
        is_extremal,
        fallbacks,
        witness_code: exact.code,
    })
}

fn summarize(
    kind: &str,
    n_max: usize,
    opts: &AuditOptions,
    records: Vec<AuditRecord>,
    checked: usize,
    violations: usize,
    seed: Option<u64>,
    start: Instant,
) -> AuditReport {
    let ids = |f: &dyn Fn(&AuditRecord) -> bool| -> Vec<String> {
        records.iter().filter(|r| f(r)).map(|r| r.id.clone()).collect()
    };
    let violation_ids = ids(&|r| r.is_violation());
    let exceptional_ids = ids(&|r| r.bound_status == BoundStatus::ExceptionalStar);
    let extremal_ids = ids(&|r| r.is_extremal);
    let summary = AuditSummary {
        kind: kind.into(),
        n_max,
        delta: opts.delta,
        instances: records.len(),
        checked,
        violations,
        exceptional: exceptional_ids.len(),
        extremal: extremal_ids.len(),
        fallbacks: records.iter().map(|r| r.fallbacks).sum(),
        violation_ids,
        exceptional_ids,
        extremal_ids,
        seed,
        runtime_ms: start.elapsed().as_millis(),
    };
    AuditReport { summary, records }
}

/// Every open twin-free tree with `5 ≤ n ≤ n_max`, one per isomorphism class.
pub fn audit_trees(n_max: usize, opts: AuditOptions) -> Result<AuditReport> {
    if !(5..=TREE_AUDIT_CAP).contains(&n_max) {
        return Err(Error::BadParam(format!(
            "tree audit needs 5 <= n_max <= {TREE_AUDIT_CAP}, got {n_max}"
        )));
    }
    let start = Instant::now();
    let mut instances = Vec::new();
    for n in 5..=n_max {
        instances.extend(enumerate_trees(n)?.filter(|t| t.is_open_twin_free() && opts.admits(t)));
    }
    let records = run_pool(opts.workers, || {
        instances
            .par_iter()
            .map(|t| audit_instance(t, opts.delta_for(t), true))
            .collect::<Result<Vec<_>>>()
    })??;
    let violations = records.iter().filter(|r| r.is_violation()).count();
    let checked = records.len();
    Ok(summarize(
        "trees", n_max, &opts, records, checked, violations, None, start,
    ))
}

/// Every connected, open twin-free, 4-cycle-free labeled graph with
/// `5 ≤ n ≤ n_max`. All labeled instances are checked; one record is kept per
/// isomorphism class (its first labeled occurrence).
pub fn audit_graphs(n_max: usize, opts: AuditOptions) -> Result<AuditReport> {
    if !(5..=crate::families::SMALL_GRAPH_CAP).contains(&n_max) {
        return Err(Error::BadParam(format!(
            "exhaustive graph audit needs 5 <= n_max <= {}, got {n_max}",
            crate::families::SMALL_GRAPH_CAP
        )));
    }
    let start = Instant::now();
    let filter = GraphFilter {
        max_degree: opts.delta,
        ..GraphFilter::audit_class()
    };
    let mut instances = Vec::new();
    for n in 5..=n_max {
        instances.extend(enumerate_small_graphs(n, filter)?);
    }
    let all = run_pool(opts.workers, || {
        instances
            .par_iter()
            .map(|g| audit_instance(g, opts.delta_for(g), false))
            .collect::<Result<Vec<_>>>()
    })??;
    let checked = all.len();
    let violations = all.iter().filter(|r| r.is_violation()).count();
    let mut seen = HashSet::new();
    let records: Vec<AuditRecord> = all.into_iter().filter(|r| seen.insert(r.id.clone())).collect();
    Ok(summarize(
        "graphs", n_max, &opts, records, checked, violations, None, start,
    ))
}

/// `count` seeded random connected, open twin-free, 4-cycle-free graphs of order `n`.
pub fn audit_graphs_sampled(n: usize, count: usize, seed: u64, opts: AuditOptions) -> Result<AuditReport> {
    if n < 5 {
        return Err(Error::BadParam(format!("sampled audit needs n >= 5, got {n}")));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = (2.5 / n as f64).min(0.9);
    let mut instances = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while instances.len() < count {
        attempts += 1;
        if attempts > count.saturating_mul(100_000).max(1_000_000) {
            return Err(Error::BadParam(format!(
                "could not sample {count} admissible graphs of order {n}"
            )));
        }
        let g = random_graph(n, p, &mut rng);
        if g.is_connected() && g.is_open_twin_free() && !g.has_four_cycle() && opts.admits(&g) {
            instances.push(g);
        }
    }
    let records = run_pool(opts.workers, || {
        instances
            .par_iter()
            .map(|g| audit_instance(g, opts.delta_for(g), false))
            .collect::<Result<Vec<_>>>()
    })??;
    let violations = records.iter().filter(|r| r.is_violation()).count();
    let checked = records.len();
    Ok(summarize(
        "graphs_sampled",
        n,
        &opts,
        records,
        checked,
        violations,
        Some(seed),
        start,
    ))
}

/// One named instance checked against its expected exact value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TightRow {
    pub family: String,
    pub param: usize,
    pub n: usize,
    pub expected_gamma: usize,
    /// Exact value, when it was computed.
    pub gamma: Option<usize>,
    pub reference_size: Option<usize>,
    pub reference_ok: Option<bool>,
    /// No code of size `expected_gamma - 1` exists, when that search was run.
    pub lower_bound_certified: Option<bool>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TightReport {
    pub rows: Vec<TightRow>,
    pub all_ok: bool,
    pub runtime_ms: u128,
}

/// Exact values of the subdivided stars, the tight tree pairs and the
/// subcubic cycle family. `exact_p_max` bounds where a full solve is run on
/// the cycle family; beyond it the reference code and a budgeted
/// infeasibility search are used.
pub fn verify_tight_families(delta_max: usize, p_max: usize, exact_p_max: usize) -> Result<TightReport> {
    if delta_max < 3 || p_max < 3 {
        return Err(Error::BadParam(format!(
            "need delta_max >= 3 and p_max >= 3, got {delta_max} and {p_max}"
        )));
    }
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut row = |family: &str,
                   param: usize,
                   g: &Graph,
                   expected: usize,
                   reference: Option<&VertexSet>,
                   exact: bool|
     -> Result<()> {
        let gamma = if exact { Some(solve(g)?.gamma) } else { None };
        let reference_ok = reference.map(|s| is_io_code(g, s).map(|v| v.ok)).transpose()?;
        let lower = if expected > 0 {
            Some(solve_with_budget(g, expected - 1)?.is_none())
        } else {
            None
        };
        let ok = gamma.is_none_or(|x| x == expected)
            && reference_ok.unwrap_or(true)
            && reference.is_none_or(|s| s.len() == expected)
            && lower.unwrap_or(true);
        rows.push(TightRow {
            family: family.into(),
            param,
            n: g.order(),
            expected_gamma: expected,
            gamma,
            reference_size: reference.map(VertexSet::len),
            reference_ok,
            lower_bound_certified: lower,
            ok,
        });
        Ok(())
    };
    for delta in 3..=delta_max {
        let (g, s) = gen_subdivided_star(delta)?;
        row("subdivided_star", delta, &g, 2 * delta, s.reference_code.as_ref(), true)?;
        let (g, s) = gen_reduced_subdivided_star(delta)?;
        row(
            "reduced_subdivided_star",
            delta,
            &g,
            2 * delta - 1,
            s.reference_code.as_ref(),
            true,
        )?;
        let (g, s) = gen_tight_tree_pair(delta)?;
        row(
            "tight_tree_pair",
            delta,
            &g,
            4 * delta - 2,
            s.reference_code.as_ref(),
            true,
        )?;
    }
    for p in (3..=p_max).filter(|&p| p != 4) {
        let (g, s) = gen_subcubic_gp(p)?;
        row("subcubic_gp", p, &g, 5 * p, s.reference_code.as_ref(), p <= exact_p_max)?;
    }
    let all_ok = rows.iter().all(|r| r.ok);
    Ok(TightReport {
        rows,
        all_ok,
        runtime_ms: start.elapsed().as_millis(),
    })
}
