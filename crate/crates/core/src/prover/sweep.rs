//! Exhaustive runs over classification entries, parabolics and essential
//! ranges. Instances run in parallel; results keep enumeration order.

use std::fmt::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{prove, rule, verify_certificate, Problem, SearchOptions};
use crate::parabolic::ParabolicContext;
use crate::rootsystem::{Root, RootSystem, Series};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub max_rank: usize,
    pub series: Vec<Series>,
    pub options: SearchOptions,
    /// Largest essential range tried; 1 means singletons only.
    pub er_size_cap: usize,
    /// Admit `E7` and `E8` when the rank bound reaches them.
    pub include_large: bool,
}

impl SweepConfig {
    pub fn new(max_rank: usize) -> Self {
        SweepConfig {
            max_rank,
            series: vec![
                Series::A,
                Series::B,
                Series::C,
                Series::D,
                Series::BC,
                Series::F,
                Series::G,
            ],
            options: SearchOptions::default(),
            er_size_cap: 1,
            include_large: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub problem: Problem,
    pub found: bool,
    pub verified: bool,
    pub nodes: usize,
    pub depth: usize,
    pub used_fallback: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl InstanceResult {
    pub fn ok(&self) -> bool {
        self.found && self.verified
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSummary {
    pub system: String,
    pub instances: usize,
    pub failures: usize,
    pub fallback: usize,
    pub max_nodes: usize,
    pub max_depth: usize,
    pub total_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub instances: Vec<InstanceResult>,
    pub summaries: Vec<SystemSummary>,
    pub failures: usize,
    /// Maximal parabolics where the string criterion and the literal
    /// transverse-sliding condition disagree.
    pub notes: Vec<String>,
}

impl SweepReport {
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<8} {:>9} {:>8} {:>8} {:>9} {:>9} {:>11}\n",
            "system", "instances", "failures", "fallback", "max nodes", "max depth", "total nodes"
        );
        for s in &self.summaries {
            let _ = writeln!(
                out,
                "{:<8} {:>9} {:>8} {:>8} {:>9} {:>9} {:>11}",
                s.system,
                s.instances,
                s.failures,
                s.fallback,
                s.max_nodes,
                s.max_depth,
                s.total_nodes
            );
        }
        let total: usize = self.summaries.iter().map(|s| s.instances).sum();
        let _ = writeln!(out, "{total} instances, {} failures", self.failures);
        for i in self.instances.iter().filter(|i| !i.ok()) {
            let er: Vec<String> = i.problem.er.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                out,
                "FAILED {}{} Λ={:?} ER={{{}}}: {}",
                i.problem.series,
                i.problem.rank,
                i.problem.lambda,
                er.join(", "),
                i.error.as_deref().unwrap_or("")
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

fn subsets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x.clone());
            out.push(rest);
        }
    }
    out
}

/// Every proper `Λ`, each with the chosen essential ranges inside
/// `nilradical ∩ Φ⁺_max`, for one classification entry.
pub fn instances(series: Series, rank: usize, er_size_cap: usize) -> crate::Result<Vec<Problem>> {
    let sys = Arc::new(RootSystem::build(series, rank)?);
    let mut out = Vec::new();
    for mask in 0u32..(1 << rank) - 1 {
        let lambda: Vec<usize> = (0..rank).filter(|i| mask & (1 << i) != 0).collect();
        let ctx = ParabolicContext::new(sys.clone(), &lambda)?;
        let pool: Vec<Root> = ctx
            .nilradical()
            .iter()
            .filter(|r| ctx.in_phi_max(r))
            .cloned()
            .collect();
        for k in 1..=er_size_cap.max(1).min(pool.len()) {
            for er in subsets(&pool, k) {
                out.push(Problem::new(series, rank, lambda.clone(), er));
            }
        }
    }
    Ok(out)
}

fn run(problem: &Problem, opts: &SearchOptions) -> InstanceResult {
    match prove(problem, opts) {
        Ok(cert) => {
            let v = verify_certificate(&cert);
            InstanceResult {
                problem: problem.clone(),
                found: true,
                verified: v.valid,
                nodes: cert.tree.node_count(),
                depth: cert.tree.depth(),
                used_fallback: cert.tree.uses_rule(rule::FALLBACK),
                error: v.failure.map(|f| f.to_string()),
            }
        }
        Err(e) => InstanceResult {
            problem: problem.clone(),
            found: false,
            verified: false,
            nodes: 0,
            depth: 0,
            used_fallback: false,
            error: Some(e.to_string()),
        },
    }
}

/// For a maximal parabolic `Λ = Φ \ {α}` and `λ = mα + μ`, flags the case
/// where `μ` is not a root yet `α` fails the literal sliding condition.
fn string_criterion_note(problem: &Problem) -> Option<String> {
    if problem.lambda.len() + 1 != problem.rank || problem.rank < 2 {
        return None;
    }
    let alpha = (0..problem.rank).find(|i| !problem.lambda.contains(i))?;
    let sys = Arc::new(RootSystem::build(problem.series, problem.rank).ok()?);
    let ctx = ParabolicContext::new(sys.clone(), &problem.lambda).ok()?;
    let a = Root::simple(problem.rank, alpha);
    let literal = ctx.transverse_slide_admissible(&a).ok()?;
    let no_mu_root = problem.er.iter().all(|l| {
        let mut mu = l.clone();
        let m = mu.coeffs()[alpha];
        mu = mu.add_scaled(&a, -m);
        !sys.is_root(&mu)
    });
    (no_mu_root && !literal).then(|| {
        let er: Vec<String> = problem.er.iter().map(ToString::to_string).collect();
        format!(
            "{}{} Λ={:?} ER={{{}}}: no μ_i is a root but the sliding condition fails",
            problem.series,
            problem.rank,
            problem.lambda,
            er.join(", ")
        )
    })
}

pub fn sweep(config: &SweepConfig) -> crate::Result<SweepReport> {
    let mut problems = Vec::new();
    for series in Series::ALL {
        if !config.series.contains(&series) {
            continue;
        }
        for rank in 1..=config.max_rank {
            if !series.admits_rank(rank) {
                continue;
            }
            if series == Series::E && rank >= 7 && !config.include_large {
                continue;
            }
            problems.extend(instances(series, rank, config.er_size_cap)?);
        }
    }
    let results: Vec<InstanceResult> = problems
        .par_iter()
        .map(|p| run(p, &config.options))
        .collect();
    let notes: Vec<String> = problems.iter().filter_map(string_criterion_note).collect();

    let mut summaries: Vec<SystemSummary> = Vec::new();
    for r in &results {
        let name = format!("{}{}", r.problem.series, r.problem.rank);
        if summaries.last().is_none_or(|s| s.system != name) {
            summaries.push(SystemSummary {
                system: name,
                instances: 0,
                failures: 0,
                fallback: 0,
                max_nodes: 0,
                max_depth: 0,
                total_nodes: 0,
            });
        }
        let s = summaries.last_mut().expect("just pushed");
        s.instances += 1;
        s.failures += usize::from(!r.ok());
        s.fallback += usize::from(r.used_fallback);
        s.max_nodes = s.max_nodes.max(r.nodes);
        s.max_depth = s.max_depth.max(r.depth);
        s.total_nodes += r.nodes;
    }
    let failures = results.iter().filter(|r| !r.ok()).count();
    Ok(SweepReport {
        instances: results,
        summaries,
        failures,
        notes,
    })
}
