//! The searcher: a deterministic playbook of degree-lowering steps, with a
//! bounded AND-OR search as fallback when no playbook step applies.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{rule, Derivation, TerminalJudgment};
use crate::holonomy::{AdmissibleOp, Direction, HolonomyDescriptor, SignAssumption};
use crate::rootsystem::Root;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    /// Descriptor expansions allowed per search.
    pub max_steps: u64,
    pub max_seconds: Option<f64>,
    /// Depth bound of the fallback search between two playbook steps.
    pub max_fallback_depth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 200_000,
            max_seconds: None,
            max_fallback_depth: 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SearchOptions {
    pub budget: Budget,
    /// Close branches at a root outside `Φ⁺_max` instead of restricting to
    /// the parabolic subvariety it spans and recursing.
    pub stop_at_goal: bool,
    /// Never fall back to generic search.
    pub playbook_only: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchFailure {
    pub reason: String,
    pub steps: u64,
    /// Essential ranges of the descriptors left open, in context notation.
    pub frontier: Vec<String>,
}

impl SearchFailure {
    pub(crate) fn invalid(reason: String) -> Self {
        SearchFailure {
            reason,
            steps: 0,
            frontier: Vec::new(),
        }
    }
}

impl fmt::Display for SearchFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} after {} steps", self.reason, self.steps)?;
        for d in &self.frontier {
            write!(f, "\n  open: {d}")?;
        }
        Ok(())
    }
}

enum Stop {
    Budget(&'static str),
    Stuck(String),
}

/// Finds a derivation closing every branch from `d`.
pub fn search_degree_reduction(
    d: &HolonomyDescriptor,
    opts: &SearchOptions,
) -> Result<Derivation, SearchFailure> {
    if d.essential_range().is_empty() {
        return Err(SearchFailure::invalid("essential range is empty".into()));
    }
    let mut s = Searcher {
        opts,
        steps: 0,
        start: Instant::now(),
        frontier: Vec::new(),
    };
    match s.solve(d.clone()) {
        Ok(tree) => Ok(tree),
        Err(stop) => {
            let reason = match stop {
                Stop::Budget(what) => format!("budget exhausted ({what})"),
                Stop::Stuck(why) => why,
            };
            Err(SearchFailure {
                reason,
                steps: s.steps,
                frontier: s.frontier,
            })
        }
    }
}

fn min_degree(roots: &[Root]) -> i32 {
    roots
        .iter()
        .map(|r| r.degree().unwrap_or(i32::MAX))
        .min()
        .unwrap_or(i32::MAX)
}

fn summary(d: &HolonomyDescriptor) -> String {
    let er: Vec<String> = d
        .essential_range()
        .iter()
        .map(ToString::to_string)
        .collect();
    let maybe: Vec<String> = d
        .with_status(crate::holonomy::BoundednessStatus::Maybe)
        .iter()
        .map(ToString::to_string)
        .collect();
    format!(
        "{} Λ={:?} ER={{{}}} maybe={{{}}}",
        d.context().system().name(),
        d.context().lambda(),
        er.join(", "),
        maybe.join(", ")
    )
}

/// A fallback proof fragment whose open leaves go back to the playbook.
enum Partial {
    Open(HolonomyDescriptor),
    Step {
        d: HolonomyDescriptor,
        op: AdmissibleOp,
        children: Vec<Partial>,
    },
}

struct Searcher<'a> {
    opts: &'a SearchOptions,
    steps: u64,
    start: Instant,
    frontier: Vec<String>,
}

impl Searcher<'_> {
    fn tick(&mut self) -> Result<(), Stop> {
        self.steps += 1;
        if self.steps > self.opts.budget.max_steps {
            return Err(Stop::Budget("steps"));
        }
        if let Some(secs) = self.opts.budget.max_seconds {
            if self.start.elapsed() > Duration::from_secs_f64(secs) {
                return Err(Stop::Budget("time"));
            }
        }
        Ok(())
    }

    fn apply(
        &self,
        d: &HolonomyDescriptor,
        op: &AdmissibleOp,
    ) -> Result<Vec<HolonomyDescriptor>, Stop> {
        d.apply(op)
            .map_err(|e| Stop::Stuck(format!("internal: playbook step {op} rejected: {e}")))
    }

    fn step(
        &mut self,
        d: HolonomyDescriptor,
        op: AdmissibleOp,
        rule: Option<&str>,
    ) -> Result<Derivation, Stop> {
        let children = self.apply(&d, &op)?;
        let children = children
            .into_iter()
            .map(|c| self.solve(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Derivation::Step {
            descriptor: d.to_doc(),
            op,
            rule: rule.map(str::to_string),
            children,
        })
    }

    /// Applies `ops` in sequence along a single branch, then continues.
    fn chain(&mut self, d: HolonomyDescriptor, ops: &[AdmissibleOp]) -> Result<Derivation, Stop> {
        let Some((first, rest)) = ops.split_first() else {
            return self.solve(d);
        };
        let mut next = self.apply(&d, first)?;
        if next.len() != 1 {
            return Err(Stop::Stuck(format!(
                "internal: {first} branched inside a chain"
            )));
        }
        let child = self.chain(next.pop().unwrap(), rest)?;
        Ok(Derivation::Step {
            descriptor: d.to_doc(),
            op: first.clone(),
            rule: None,
            children: vec![child],
        })
    }

    fn leaf(d: &HolonomyDescriptor, judgment: TerminalJudgment) -> Derivation {
        Derivation::Leaf {
            descriptor: d.to_doc(),
            judgment,
        }
    }

    fn solve(&mut self, d: HolonomyDescriptor) -> Result<Derivation, Stop> {
        self.tick()?;
        let er = d.essential_range();
        if d.context().rank() == 1 {
            if er.is_empty() {
                self.frontier.push(summary(&d));
                return Err(Stop::Stuck(
                    "rank-one context without unbounded component".into(),
                ));
            }
            return Ok(Self::leaf(&d, TerminalJudgment::RankOneUnbounded));
        }
        if let Some(goal) = d.goal_reached() {
            if self.opts.stop_at_goal {
                return Ok(Self::leaf(
                    &d,
                    TerminalJudgment::GoalOutsidePhiMax { root: goal },
                ));
            }
            let psi = goal.support();
            return self.step(
                d,
                AdmissibleOp::Restrict { psi },
                Some(rule::PARABOLIC_SUBVARIETY),
            );
        }
        if let Some(result) = self.playbook(&d) {
            return result;
        }
        if self.opts.playbook_only {
            self.frontier.push(summary(&d));
            return Err(Stop::Stuck("no playbook step applies".into()));
        }
        self.fallback(d)
    }

    /// The first applicable degree-lowering step, tried in a fixed order.
    fn playbook(&mut self, d: &HolonomyDescriptor) -> Option<Result<Derivation, Stop>> {
        if let Some(op) = self.weyl_step(d) {
            return Some(self.step(d.clone(), op, Some(rule::WEYL)));
        }
        if let Some(op) = self.transverse_step(d) {
            return Some(self.step(d.clone(), op, Some(rule::TRANSVERSE)));
        }
        if let Some((mu, below, above)) = self.vertical_step(d) {
            return Some(self.sign_split(d, mu, &below, &above));
        }
        if let Some(op) = self.levi_step(d) {
            return Some(self.step(d.clone(), op, Some(rule::LEVI)));
        }
        if let Some(op) = self.root_restriction(d) {
            return Some(self.step(d.clone(), op, Some(rule::ROOT_SUBVARIETY)));
        }
        None
    }

    /// A reflection in `Λ⁺` lowering the minimal degree of the essential
    /// range as far as possible; simple pivots win ties.
    fn weyl_step(&self, d: &HolonomyDescriptor) -> Option<AdmissibleOp> {
        let er = d.essential_range();
        let current = min_degree(&er);
        let sys = d.context().system();
        let mut best: Option<(i32, bool, Root)> = None;
        for mu in d.context().lambda_plus() {
            let images: Option<Vec<Root>> =
                er.iter().map(|l| sys.weyl_reflect(mu, l).ok()).collect();
            let Some(images) = images else { continue };
            let m = min_degree(&images);
            if m >= current {
                continue;
            }
            let cand = (m, mu.simple_index().is_none(), mu.clone());
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        best.map(|(_, _, pivot)| AdmissibleOp::Weyl { pivot })
    }

    fn minimal(d: &HolonomyDescriptor) -> Vec<Root> {
        let er = d.essential_range();
        let m = min_degree(&er);
        er.into_iter()
            .filter(|r| r.degree().ok() == Some(m))
            .collect()
    }

    /// A transverse sliding of a minimal-degree root along a simple root
    /// outside `Λ` pairing positively with it.
    fn transverse_step(&self, d: &HolonomyDescriptor) -> Option<AdmissibleOp> {
        let ctx = d.context();
        let sys = ctx.system();
        for lambda in Self::minimal(d) {
            for i in 0..ctx.rank() {
                if ctx.lambda().contains(&i) {
                    continue;
                }
                let alpha = Root::simple(ctx.rank(), i);
                if sys.cartan_integer(&alpha, &lambda).unwrap_or(0) <= 0 {
                    continue;
                }
                let target = &lambda - &alpha;
                if !ctx.in_nilradical(&target) {
                    continue;
                }
                if !ctx.transverse_slide_admissible(&alpha).unwrap_or(false) {
                    continue;
                }
                let op = AdmissibleOp::TransverseSlide { alpha, target };
                if d.apply(&op).is_ok() {
                    return Some(op);
                }
            }
        }
        None
    }

    /// A root `μ ∈ Λ⁺` with `λ - μ` a root and `A_{μλ} ≤ 0`, for a
    /// minimal-degree `λ`. Below: slide up to `λ - μ`. Above: slide down to
    /// the top `λ + qμ` of the string, then reflect in `μ` to its bottom.
    fn vertical_step(
        &self,
        d: &HolonomyDescriptor,
    ) -> Option<(Root, Vec<AdmissibleOp>, Vec<AdmissibleOp>)> {
        let ctx = d.context();
        let sys = ctx.system();
        let mut pivots: Vec<Root> = ctx.lambda_plus().to_vec();
        pivots.sort_by_key(|m| (m.simple_index().is_none(), m.clone()));
        for lambda in Self::minimal(d) {
            for mu in &pivots {
                if d.sign(mu) != SignAssumption::Unconstrained {
                    continue;
                }
                if lambda.ratio_to(mu).is_some() {
                    continue;
                }
                let below_target = &lambda - mu;
                if !ctx.in_nilradical(&below_target) {
                    continue;
                }
                if sys.cartan_integer(mu, &lambda).unwrap_or(1) > 0 {
                    continue;
                }
                let Ok((_, q)) = sys.root_string(mu, &lambda) else {
                    continue;
                };
                let below = vec![AdmissibleOp::VerticalSlide {
                    alpha: mu.clone(),
                    direction: Direction::Up,
                    target: below_target,
                }];
                let mut above: Vec<AdmissibleOp> = (1..=q)
                    .map(|j| AdmissibleOp::VerticalSlide {
                        alpha: mu.clone(),
                        direction: Direction::Down,
                        target: lambda.add_scaled(mu, j),
                    })
                    .collect();
                above.push(AdmissibleOp::Weyl { pivot: mu.clone() });
                return Some((mu.clone(), below, above));
            }
        }
        None
    }

    fn sign_split(
        &mut self,
        d: &HolonomyDescriptor,
        mu: Root,
        below: &[AdmissibleOp],
        above: &[AdmissibleOp],
    ) -> Result<Derivation, Stop> {
        let op = AdmissibleOp::SignSplit { alpha: mu };
        let mut branches = self.apply(d, &op)?;
        let upper = branches.pop().expect("two branches");
        let lower = branches.pop().expect("two branches");
        let children = vec![self.chain(lower, below)?, self.chain(upper, above)?];
        Ok(Derivation::Step {
            descriptor: d.to_doc(),
            op,
            rule: Some(rule::VERTICAL.into()),
            children,
        })
    }

    fn levi_step(&self, d: &HolonomyDescriptor) -> Option<AdmissibleOp> {
        if !d.context().is_g2_long_parabolic() {
            return None;
        }
        let op = AdmissibleOp::LeviSlide {
            alpha: Root::new(vec![1, 0]),
            targets: vec![Root::new(vec![1, 0]), Root::new(vec![1, 1])],
        };
        d.apply(&op).is_ok().then_some(op)
    }

    fn root_restriction(&self, d: &HolonomyDescriptor) -> Option<AdmissibleOp> {
        Self::minimal(d).into_iter().find_map(|root| {
            let op = AdmissibleOp::RestrictToRoot { root };
            d.apply(&op).is_ok().then_some(op)
        })
    }

    /// Whether a fallback leaf can be handed back to the playbook.
    fn progressed(d: &HolonomyDescriptor, start_degree: i32) -> bool {
        d.goal_reached().is_some() || min_degree(&d.essential_range()) < start_degree
    }

    fn candidate_ops(d: &HolonomyDescriptor) -> Vec<AdmissibleOp> {
        let ctx = d.context();
        let er = d.essential_range();
        let mut ops = Vec::new();
        for mu in ctx.lambda_plus() {
            ops.push(AdmissibleOp::Weyl { pivot: mu.clone() });
            let sign = d.sign(mu);
            for lambda in &er {
                let up = lambda - mu;
                let down = lambda + mu;
                if sign == SignAssumption::Unconstrained {
                    if ctx.in_nilradical(&up) || ctx.in_nilradical(&down) {
                        ops.push(AdmissibleOp::SignSplit { alpha: mu.clone() });
                    }
                    continue;
                }
                ops.push(AdmissibleOp::VerticalSlide {
                    alpha: mu.clone(),
                    direction: Direction::Up,
                    target: up,
                });
                ops.push(AdmissibleOp::VerticalSlide {
                    alpha: mu.clone(),
                    direction: Direction::Down,
                    target: down,
                });
            }
        }
        for i in 0..ctx.rank() {
            if ctx.lambda().contains(&i) {
                continue;
            }
            let alpha = Root::simple(ctx.rank(), i);
            for lambda in &er {
                ops.push(AdmissibleOp::TransverseSlide {
                    alpha: alpha.clone(),
                    target: lambda - &alpha,
                });
            }
        }
        if ctx.is_g2_long_parabolic() {
            ops.push(AdmissibleOp::LeviSlide {
                alpha: Root::new(vec![1, 0]),
                targets: vec![Root::new(vec![1, 0]), Root::new(vec![1, 1])],
            });
        }
        let mut keyed: Vec<(String, AdmissibleOp)> = ops
            .into_iter()
            .map(|op| (serde_json::to_string(&op).expect("op serializes"), op))
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        keyed.into_iter().map(|(_, op)| op).collect()
    }

    /// Iterative deepening over all applicable operations, until every
    /// branch lowers the minimal degree or reaches a goal.
    fn fallback(&mut self, d: HolonomyDescriptor) -> Result<Derivation, Stop> {
        let start_degree = min_degree(&d.essential_range());
        let mut failed = HashSet::new();
        for depth in 1..=self.opts.budget.max_fallback_depth {
            if let Some(p) = self.and_or(&d, depth, start_degree, &mut failed)? {
                return self.close(p, true);
            }
        }
        self.frontier.push(summary(&d));
        Err(Stop::Stuck(format!(
            "fallback search found no derivation within depth {}",
            self.opts.budget.max_fallback_depth
        )))
    }

    fn and_or(
        &mut self,
        d: &HolonomyDescriptor,
        depth: usize,
        start_degree: i32,
        failed: &mut HashSet<(String, usize)>,
    ) -> Result<Option<Partial>, Stop> {
        if Self::progressed(d, start_degree) {
            return Ok(Some(Partial::Open(d.clone())));
        }
        if depth == 0 {
            return Ok(None);
        }
        let key = (d.key(), depth);
        if failed.contains(&key) {
            return Ok(None);
        }
        for op in Self::candidate_ops(d) {
            self.tick()?;
            let Ok(children) = d.apply(&op) else { continue };
            if children.len() == 1 && children[0] == *d {
                continue;
            }
            let mut parts = Vec::with_capacity(children.len());
            for c in &children {
                match self.and_or(c, depth - 1, start_degree, failed)? {
                    Some(p) => parts.push(p),
                    None => break,
                }
            }
            if parts.len() == children.len() {
                return Ok(Some(Partial::Step {
                    d: d.clone(),
                    op,
                    children: parts,
                }));
            }
        }
        failed.insert(key);
        Ok(None)
    }

    fn close(&mut self, p: Partial, first: bool) -> Result<Derivation, Stop> {
        match p {
            Partial::Open(d) => self.solve(d),
            Partial::Step { d, op, children } => {
                let children = children
                    .into_iter()
                    .map(|c| self.close(c, false))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Derivation::Step {
                    descriptor: d.to_doc(),
                    op,
                    rule: first.then(|| rule::FALLBACK.to_string()),
                    children,
                })
            }
        }
    }
}
