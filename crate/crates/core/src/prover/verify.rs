//! Independent replay of certificates. Only the root-system, parabolic and
//! holonomy layers are used; nothing here calls the searcher.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Certificate, Derivation, TerminalJudgment};
use crate::holonomy::{BoundednessStatus, HolonomyDescriptor};

/// Stable clause names of replay failures that are not operation clauses.
pub mod clause {
    pub const ROOT_MISMATCH: &str = "root descriptor does not match the problem";
    pub const DESCRIPTOR_MISMATCH: &str = "recorded descriptor does not match replay";
    pub const BRANCH_COUNT: &str = "branch count mismatch";
    pub const CERTAINTY: &str = "certainty required";
    pub const GOAL_IN_PHI_MAX: &str = "goal inside Φ⁺_max";
    pub const RANK_ONE_RANK: &str = "rank-one judgment above rank one";
    pub const EMPTY_RANGE: &str = "empty essential range";
    pub const INVALID_PROBLEM: &str = "invalid problem";
    pub const OP_ERROR: &str = "operation failed";
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyFailure {
    /// Child indices from the root to the failing node, e.g. `0.1.0`.
    pub path: String,
    pub clause: String,
    pub detail: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at node [{}]: {} ({})",
            self.path, self.clause, self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub valid: bool,
    pub nodes_checked: usize,
    pub failure: Option<VerifyFailure>,
}

struct Replay {
    nodes: usize,
}

fn fail(path: &[usize], clause: &str, detail: impl Into<String>) -> VerifyFailure {
    let path: Vec<String> = path.iter().map(ToString::to_string).collect();
    VerifyFailure {
        path: path.join("."),
        clause: clause.to_string(),
        detail: detail.into(),
    }
}

impl Replay {
    fn node(
        &mut self,
        node: &Derivation,
        d: &HolonomyDescriptor,
        path: &mut Vec<usize>,
    ) -> Result<(), VerifyFailure> {
        self.nodes += 1;
        if *node.descriptor() != d.to_doc() {
            return Err(fail(
                path,
                clause::DESCRIPTOR_MISMATCH,
                "serialized descriptors differ",
            ));
        }
        match node {
            Derivation::Leaf { judgment, .. } => Self::judge(judgment, d, path),
            Derivation::Step { op, children, .. } => {
                let next = d.apply(op).map_err(|e| match e.clause() {
                    Some(c) => fail(path, c, format!("{op}: {e}")),
                    None => fail(path, clause::OP_ERROR, format!("{op}: {e}")),
                })?;
                if next.len() != children.len() {
                    return Err(fail(
                        path,
                        clause::BRANCH_COUNT,
                        format!(
                            "{op} yields {} branches, certificate has {}",
                            next.len(),
                            children.len()
                        ),
                    ));
                }
                for (k, (child, nd)) in children.iter().zip(&next).enumerate() {
                    path.push(k);
                    self.node(child, nd, path)?;
                    path.pop();
                }
                Ok(())
            }
        }
    }

    fn judge(
        j: &TerminalJudgment,
        d: &HolonomyDescriptor,
        path: &[usize],
    ) -> Result<(), VerifyFailure> {
        match j {
            TerminalJudgment::GoalOutsidePhiMax { root } => {
                if d.status(root) != Some(BoundednessStatus::Unbounded) {
                    return Err(fail(
                        path,
                        clause::CERTAINTY,
                        format!("{root} has status {:?}", d.status(root)),
                    ));
                }
                if d.context().in_phi_max(root) {
                    return Err(fail(path, clause::GOAL_IN_PHI_MAX, root.to_string()));
                }
                Ok(())
            }
            TerminalJudgment::RankOneUnbounded => {
                if d.context().rank() != 1 {
                    return Err(fail(
                        path,
                        clause::RANK_ONE_RANK,
                        format!("context has rank {}", d.context().rank()),
                    ));
                }
                if d.essential_range().is_empty() {
                    return Err(fail(
                        path,
                        clause::EMPTY_RANGE,
                        "no certainly-unbounded component",
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Replays every edge of the certificate from its problem statement.
pub fn verify_certificate(cert: &Certificate) -> Verification {
    let mut replay = Replay { nodes: 0 };
    let result = cert
        .problem
        .initial_descriptor()
        .map_err(|e| fail(&[], clause::INVALID_PROBLEM, e.to_string()))
        .and_then(|d| {
            if *cert.tree.descriptor() != d.to_doc() {
                return Err(fail(
                    &[],
                    clause::ROOT_MISMATCH,
                    "initial descriptor differs",
                ));
            }
            replay.node(&cert.tree, &d, &mut Vec::new())
        });
    Verification {
        valid: result.is_ok(),
        nodes_checked: replay.nodes,
        failure: result.err(),
    }
}
