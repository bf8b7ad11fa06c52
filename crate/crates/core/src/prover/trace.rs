//! Human-readable rendering of derivations.

use std::fmt::Write;

use super::{Certificate, Derivation, TerminalJudgment};
use crate::holonomy::{BoundednessStatus, DescriptorDoc};
use crate::notation::simple_label;

fn range(doc: &DescriptorDoc, status: BoundednessStatus) -> String {
    let roots: Vec<String> = doc
        .status
        .iter()
        .filter(|e| e.status == status)
        .map(|e| e.root.to_string())
        .collect();
    format!("{{{}}}", roots.join(", "))
}

fn context(doc: &DescriptorDoc) -> String {
    let lambda: Vec<String> = doc
        .context
        .lambda_indices
        .iter()
        .map(|&i| simple_label(i))
        .collect();
    let sys = &doc.context.system_ref;
    let series = sys.series.map(|s| s.to_string()).unwrap_or_default();
    let rank = doc
        .status
        .first()
        .map(|e| e.root.rank())
        .unwrap_or(sys.rank);
    let scope = if sys.basis.is_some() {
        format!("rank-{rank} subsystem of {series}{}", sys.rank)
    } else {
        format!("{series}{}", sys.rank)
    };
    format!("{scope}, Λ={{{}}}", lambda.join(","))
}

fn render(node: &Derivation, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match node {
        Derivation::Step {
            descriptor,
            op,
            children,
            ..
        } => {
            let _ = writeln!(
                out,
                "{pad}[{}] {op}   ER={} maybe={}",
                op.anchor(),
                range(descriptor, BoundednessStatus::Unbounded),
                range(descriptor, BoundednessStatus::Maybe),
            );
            let branching = children.len() > 1;
            for (k, c) in children.iter().enumerate() {
                if branching {
                    let _ = writeln!(out, "{pad}  branch {}:", k + 1);
                    render(c, depth + 2, out);
                } else {
                    render(c, depth, out);
                }
            }
        }
        Derivation::Leaf {
            descriptor,
            judgment,
        } => {
            let what = match judgment {
                TerminalJudgment::GoalOutsidePhiMax { root } => {
                    format!("{root} ∉ Φ⁺_max is unbounded")
                }
                TerminalJudgment::RankOneUnbounded => {
                    format!("rank-one base case, {}", context(descriptor))
                }
            };
            let _ = writeln!(
                out,
                "{pad}[{}] {what}   ER={}",
                judgment.anchor(),
                range(descriptor, BoundednessStatus::Unbounded)
            );
        }
    }
}

/// One line per step, each tagged with the fact it rests on.
pub fn render_trace(cert: &Certificate) -> String {
    let p = &cert.problem;
    let lambda: Vec<String> = p.lambda.iter().map(|&i| simple_label(i)).collect();
    let er: Vec<String> = p.er.iter().map(ToString::to_string).collect();
    let mut out = format!(
        "problem: {}{}, Λ={{{}}}, ER={{{}}}\n",
        p.series,
        p.rank,
        lambda.join(","),
        er.join(", ")
    );
    render(&cert.tree, 0, &mut out);
    out
}
