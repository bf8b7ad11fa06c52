//! The rewrite calculus of admissible operations on holonomy descriptors.
//!
//! A descriptor records, for a reduced holonomy sequence `p_k = a_k n_k`,
//! what is known about each root component `Y_k^λ` of `ln n_k` and about the
//! growth of root functionals `α(ln a_k)`. Each operation rewrites that
//! knowledge the way the corresponding perturbation of the sequence does.
//!
//! Components other than the target of a sliding receive correction terms
//! `(ad ξ_k)^j Y_k` with `ξ_k → 0`, whose size is unknown. They become
//! [`BoundednessStatus::Maybe`] unless already known to be unbounded. Every
//! nonzero component (status other than `Trivial`) is treated as a source of
//! such corrections.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parabolic::{ContextRef, ParabolicContext};
use crate::rootsystem::Root;

/// Stable names of the precondition clauses an operation can fail on.
pub mod clause {
    pub const PIVOT_NOT_IN_LEVI: &str = "pivot not in Λ⁺";
    pub const REFLECTION_LEAVES_NILRADICAL: &str = "reflection leaves the nilradical";
    pub const ER_NOT_IN_PHI_MAX: &str = "essential range not in Φ⁺_max";
    pub const DIRECTION_NOT_ADMISSIBLE: &str = "sliding direction not admissible";
    pub const SOURCE_NOT_IN_ER: &str = "source not in essential range";
    pub const TARGET_NOT_POSITIVE: &str = "target not a positive root";
    pub const TARGET_NOT_IN_NILRADICAL: &str = "target not in nilradical";
    pub const SLIDE_ROOT_NOT_IN_LEVI: &str = "slide root not in Λ⁺";
    pub const SIGN_ASSUMPTION_MISSING: &str = "sign assumption missing";
    pub const SIGN_ALREADY_CONSTRAINED: &str = "sign already constrained";
    pub const SIGN_ROOT_NOT_POSITIVE: &str = "sign functional not a positive root";
    pub const NOT_G2_LONG_PARABOLIC: &str = "not the G2 long-root parabolic";
    pub const LEVI_SOURCE_MISSING: &str = "Levi slide source missing";
    pub const LEVI_TARGETS: &str = "Levi slide targets mismatch";
    pub const DEGENERATE_RESTRICTION: &str = "degenerate restriction";
    pub const RESTRICTION_SUPPORT: &str = "no essential root supported on Ψ";
    pub const ROOT_NOT_IN_ER: &str = "root not in essential range";
    pub const LINE_NOT_ISOLATED: &str = "rank-one line not isolated";
}

/// What is known about one component sequence `Y_k^λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundednessStatus {
    Trivial,
    Bounded,
    Unbounded,
    /// Bounded or unbounded, unknown.
    Maybe,
}

/// Assumption on the real sequence `α(Z_k)`, `Z_k = ln a_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignAssumption {
    BoundedBelow,
    BoundedAbove,
    Unconstrained,
}

impl SignAssumption {
    fn flipped(self) -> Self {
        match self {
            SignAssumption::BoundedBelow => SignAssumption::BoundedAbove,
            SignAssumption::BoundedAbove => SignAssumption::BoundedBelow,
            SignAssumption::Unconstrained => SignAssumption::Unconstrained,
        }
    }
}

/// Direction of a vertical sliding. `Up` moves unboundedness from `ν + α`
/// to `ν` (conjugating by `g_{-α}`), `Down` from `ν - α` to `ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Up,
    Down,
}

/// An elementary admissible operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdmissibleOp {
    Normalize,
    Weyl {
        pivot: Root,
    },
    TransverseSlide {
        alpha: Root,
        target: Root,
    },
    VerticalSlide {
        alpha: Root,
        direction: Direction,
        target: Root,
    },
    SignSplit {
        alpha: Root,
    },
    LeviSlide {
        alpha: Root,
        targets: Vec<Root>,
    },
    Restrict {
        psi: Vec<usize>,
    },
    RestrictToRoot {
        root: Root,
    },
}

impl AdmissibleOp {
    pub fn kind(&self) -> &'static str {
        match self {
            AdmissibleOp::Normalize => "normalize",
            AdmissibleOp::Weyl { .. } => "weyl",
            AdmissibleOp::TransverseSlide { .. } => "transverse_slide",
            AdmissibleOp::VerticalSlide { .. } => "vertical_slide",
            AdmissibleOp::SignSplit { .. } => "sign_split",
            AdmissibleOp::LeviSlide { .. } => "levi_slide",
            AdmissibleOp::Restrict { .. } => "restrict",
            AdmissibleOp::RestrictToRoot { .. } => "restrict_to_root",
        }
    }

    /// The mathematical fact the operation rests on, for traces.
    pub fn anchor(&self) -> &'static str {
        match self {
            AdmissibleOp::Normalize => "trivial-or-unbounded",
            AdmissibleOp::Weyl { .. } => "weyl-reflection",
            AdmissibleOp::TransverseSlide { .. } => "transverse-sliding",
            AdmissibleOp::VerticalSlide { .. } => "vertical-sliding",
            AdmissibleOp::SignSplit { .. } => "subsequence-sign-split",
            AdmissibleOp::LeviSlide { .. } => "levi-kak-slide",
            AdmissibleOp::Restrict { .. } => "parabolic-subvariety-invariance",
            AdmissibleOp::RestrictToRoot { .. } => "rank-one-root-subvariety",
        }
    }
}

impl fmt::Display for AdmissibleOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibleOp::Normalize => write!(f, "Normalize"),
            AdmissibleOp::Weyl { pivot } => write!(f, "Weyl({pivot})"),
            AdmissibleOp::TransverseSlide { alpha, target } => {
                write!(f, "TransverseSlide({alpha} → {target})")
            }
            AdmissibleOp::VerticalSlide {
                alpha,
                direction,
                target,
            } => {
                let d = match direction {
                    Direction::Up => "up",
                    Direction::Down => "down",
                };
                write!(f, "VerticalSlide({alpha}, {d} → {target})")
            }
            AdmissibleOp::SignSplit { alpha } => write!(f, "SignSplit({alpha})"),
            AdmissibleOp::LeviSlide { alpha, targets } => {
                let t: Vec<String> = targets.iter().map(ToString::to_string).collect();
                write!(f, "LeviSlide({alpha} → {})", t.join(" | "))
            }
            AdmissibleOp::Restrict { psi } => {
                let p: Vec<String> = psi
                    .iter()
                    .map(|&i| crate::notation::simple_label(i))
                    .collect();
                write!(f, "Restrict({{{}}})", p.join(","))
            }
            AdmissibleOp::RestrictToRoot { root } => write!(f, "RestrictToRoot({root})"),
        }
    }
}

/// Symbolic state of a reduced holonomy sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolonomyDescriptor {
    ctx: Arc<ParabolicContext>,
    status: BTreeMap<Root, BoundednessStatus>,
    /// Only constrained functionals are stored, keyed by positive roots.
    signs: BTreeMap<Root, SignAssumption>,
}

impl HolonomyDescriptor {
    /// The normalized descriptor with essential range `er`.
    pub fn initial(ctx: Arc<ParabolicContext>, er: &[Root]) -> Result<Self> {
        if er.is_empty() {
            return Err(Error::domain("initial essential range is empty"));
        }
        if let Some(bad) = er.iter().find(|r| !ctx.in_nilradical(r)) {
            return Err(Error::domain(format!("{bad} is not a nilradical root")));
        }
        let status = ctx
            .nilradical()
            .iter()
            .map(|r| {
                let s = if er.contains(r) {
                    BoundednessStatus::Unbounded
                } else {
                    BoundednessStatus::Trivial
                };
                (r.clone(), s)
            })
            .collect();
        Ok(HolonomyDescriptor {
            ctx,
            status,
            signs: BTreeMap::new(),
        })
    }

    pub fn context(&self) -> &ParabolicContext {
        &self.ctx
    }

    pub fn context_arc(&self) -> &Arc<ParabolicContext> {
        &self.ctx
    }

    pub fn status(&self, r: &Root) -> Option<BoundednessStatus> {
        self.status.get(r).copied()
    }

    pub fn statuses(&self) -> &BTreeMap<Root, BoundednessStatus> {
        &self.status
    }

    /// Assumption on the functional of the root `r`; negative roots read the
    /// flipped assumption of `-r`.
    pub fn sign(&self, r: &Root) -> SignAssumption {
        if r.is_negative() {
            return self.sign(&-r).flipped();
        }
        self.signs
            .get(r)
            .copied()
            .unwrap_or(SignAssumption::Unconstrained)
    }

    pub fn signs(&self) -> &BTreeMap<Root, SignAssumption> {
        &self.signs
    }

    /// Roots whose component is known to be unbounded.
    pub fn essential_range(&self) -> Vec<Root> {
        self.with_status(BoundednessStatus::Unbounded)
    }

    pub fn with_status(&self, s: BoundednessStatus) -> Vec<Root> {
        self.status
            .iter()
            .filter(|(_, &v)| v == s)
            .map(|(r, _)| r.clone())
            .collect()
    }

    /// A certainly-unbounded nilradical root outside `Φ⁺_max`, if any.
    pub fn goal_reached(&self) -> Option<Root> {
        self.status
            .iter()
            .find(|(r, &s)| s == BoundednessStatus::Unbounded && !self.ctx.in_phi_max(r))
            .map(|(r, _)| r.clone())
    }

    /// Applies an operation, returning the resulting branches.
    pub fn apply(&self, op: &AdmissibleOp) -> Result<Vec<HolonomyDescriptor>> {
        match op {
            AdmissibleOp::Normalize => Ok(vec![self.normalize()]),
            AdmissibleOp::Weyl { pivot } => self.weyl(pivot).map(|d| vec![d]),
            AdmissibleOp::TransverseSlide { alpha, target } => {
                self.transverse_slide(alpha, target).map(|d| vec![d])
            }
            AdmissibleOp::VerticalSlide {
                alpha,
                direction,
                target,
            } => self
                .vertical_slide(alpha, *direction, target)
                .map(|d| vec![d]),
            AdmissibleOp::SignSplit { alpha } => self.sign_split(alpha),
            AdmissibleOp::LeviSlide { alpha, targets } => self.levi_slide(alpha, targets),
            AdmissibleOp::Restrict { psi } => self.restrict(psi).map(|d| vec![d]),
            AdmissibleOp::RestrictToRoot { root } => self.restrict_to_root(root).map(|d| vec![d]),
        }
    }

    fn normalize(&self) -> Self {
        let mut d = self.clone();
        for s in d.status.values_mut() {
            if *s == BoundednessStatus::Bounded {
                *s = BoundednessStatus::Trivial;
            }
        }
        d
    }

    fn weyl(&self, pivot: &Root) -> Result<Self> {
        if !self.ctx.in_lambda_plus(pivot) {
            return Err(Error::rejected(
                clause::PIVOT_NOT_IN_LEVI,
                format!("{pivot} is not a positive root in the span of Λ"),
            ));
        }
        let sys = self.ctx.system();
        let mut status = BTreeMap::new();
        for (r, &s) in &self.status {
            let image = sys.weyl_reflect(pivot, r)?;
            if !self.ctx.in_nilradical(&image) {
                return Err(Error::rejected(
                    clause::REFLECTION_LEAVES_NILRADICAL,
                    format!("{r} ↦ {image}"),
                ));
            }
            status.insert(image, s);
        }
        let mut signs = BTreeMap::new();
        for (r, &s) in &self.signs {
            let image = sys.weyl_reflect(pivot, r)?;
            if image.is_negative() {
                signs.insert(-&image, s.flipped());
            } else {
                signs.insert(image, s);
            }
        }
        Ok(HolonomyDescriptor {
            ctx: self.ctx.clone(),
            status,
            signs,
        })
    }

    /// Marks `target` unbounded and contaminates the roots reached from any
    /// nonzero component by repeated steps of `step * alpha`.
    fn slide(&self, alpha: &Root, step: i32, target: &Root) -> Self {
        let sys = self.ctx.system();
        let mut status = self.status.clone();
        for (source, &s) in &self.status {
            if s == BoundednessStatus::Trivial {
                continue;
            }
            let mut j = 1;
            loop {
                let mu = source.add_scaled(alpha, step * j);
                if !sys.is_root(&mu) {
                    break;
                }
                if &mu != target {
                    if let Some(entry) = status.get_mut(&mu) {
                        if matches!(
                            *entry,
                            BoundednessStatus::Trivial | BoundednessStatus::Bounded
                        ) {
                            *entry = BoundednessStatus::Maybe;
                        }
                    }
                }
                j += 1;
            }
        }
        status.insert(target.clone(), BoundednessStatus::Unbounded);
        HolonomyDescriptor {
            ctx: self.ctx.clone(),
            status,
            signs: self.signs.clone(),
        }
    }

    fn require_unbounded(&self, r: &Root, clause: &'static str) -> Result<()> {
        if self.status(r) == Some(BoundednessStatus::Unbounded) {
            Ok(())
        } else {
            Err(Error::rejected(
                clause,
                format!("{r} is not certainly unbounded"),
            ))
        }
    }

    fn transverse_slide(&self, alpha: &Root, target: &Root) -> Result<Self> {
        if let Some(r) = self
            .essential_range()
            .iter()
            .find(|r| !self.ctx.in_phi_max(r))
        {
            return Err(Error::rejected(
                clause::ER_NOT_IN_PHI_MAX,
                format!("{r} ∉ Φ⁺_max"),
            ));
        }
        let admissible = alpha.rank() == self.ctx.rank()
            && alpha
                .simple_index()
                .is_some_and(|i| !self.ctx.lambda().contains(&i))
            && self.ctx.transverse_slide_admissible(alpha)?;
        if !admissible {
            return Err(Error::rejected(
                clause::DIRECTION_NOT_ADMISSIBLE,
                format!("{alpha} fails the transverse sliding condition"),
            ));
        }
        if !(target.is_positive() && self.ctx.system().is_root(target)) {
            return Err(Error::rejected(
                clause::TARGET_NOT_POSITIVE,
                target.to_string(),
            ));
        }
        self.require_unbounded(&(target + alpha), clause::SOURCE_NOT_IN_ER)?;
        if !self.ctx.in_nilradical(target) {
            return Err(Error::rejected(
                clause::TARGET_NOT_IN_NILRADICAL,
                target.to_string(),
            ));
        }
        Ok(self.slide(alpha, -1, target))
    }

    fn vertical_slide(&self, alpha: &Root, direction: Direction, target: &Root) -> Result<Self> {
        if !self.ctx.in_lambda_plus(alpha) {
            return Err(Error::rejected(
                clause::SLIDE_ROOT_NOT_IN_LEVI,
                alpha.to_string(),
            ));
        }
        if !self.ctx.in_nilradical(target) {
            return Err(Error::rejected(
                clause::TARGET_NOT_IN_NILRADICAL,
                target.to_string(),
            ));
        }
        let (needed, source, step) = match direction {
            Direction::Up => (SignAssumption::BoundedBelow, target + alpha, -1),
            Direction::Down => (SignAssumption::BoundedAbove, target - alpha, 1),
        };
        if self.sign(alpha) != needed {
            return Err(Error::rejected(
                clause::SIGN_ASSUMPTION_MISSING,
                format!("{alpha}(Z_k) must be {needed:?}"),
            ));
        }
        self.require_unbounded(&source, clause::SOURCE_NOT_IN_ER)?;
        Ok(self.slide(alpha, step, target))
    }

    fn sign_split(&self, alpha: &Root) -> Result<Vec<Self>> {
        if !(alpha.is_positive() && self.ctx.system().is_root(alpha)) {
            return Err(Error::rejected(
                clause::SIGN_ROOT_NOT_POSITIVE,
                alpha.to_string(),
            ));
        }
        if self.sign(alpha) != SignAssumption::Unconstrained {
            return Err(Error::rejected(
                clause::SIGN_ALREADY_CONSTRAINED,
                alpha.to_string(),
            ));
        }
        Ok([SignAssumption::BoundedBelow, SignAssumption::BoundedAbove]
            .into_iter()
            .map(|s| {
                let mut d = self.clone();
                d.signs.insert(alpha.clone(), s);
                d
            })
            .collect())
    }

    /// The `G2` maneuver for `Λ = {β}`: transverse slidings along `-α`
    /// followed by a `KAK` reabsorption in the Levi factor, which only
    /// guarantees that one of `α`, `α + β` is unbounded.
    fn levi_slide(&self, alpha: &Root, targets: &[Root]) -> Result<Vec<Self>> {
        if !self.ctx.is_g2_long_parabolic() {
            return Err(Error::rejected(
                clause::NOT_G2_LONG_PARABOLIC,
                self.ctx.system().name(),
            ));
        }
        let a = Root::new(vec![1, 0]);
        if *alpha != a {
            return Err(Error::rejected(
                clause::NOT_G2_LONG_PARABOLIC,
                format!("{alpha} ≠ {a}"),
            ));
        }
        let sources = [Root::new(vec![2, 1]), Root::new(vec![3, 1])];
        if !sources
            .iter()
            .any(|r| self.status(r) == Some(BoundednessStatus::Unbounded))
        {
            return Err(Error::rejected(
                clause::LEVI_SOURCE_MISSING,
                "neither 2a+b nor 3a+b is unbounded",
            ));
        }
        let expected = [a.clone(), Root::new(vec![1, 1])];
        if targets != expected {
            return Err(Error::rejected(
                clause::LEVI_TARGETS,
                "targets must be [a, a+b]",
            ));
        }
        Ok(expected
            .iter()
            .map(|t| {
                let mut d = self.clone();
                for (r, s) in d.status.iter_mut() {
                    *s = if r == t {
                        BoundednessStatus::Unbounded
                    } else {
                        BoundednessStatus::Maybe
                    };
                }
                d
            })
            .collect())
    }

    fn restrict(&self, psi: &[usize]) -> Result<Self> {
        let (sub, map) = self
            .ctx
            .restrict(psi)
            .map_err(|e| Error::rejected(clause::DEGENERATE_RESTRICTION, e.to_string()))?;
        let supported = self
            .essential_range()
            .iter()
            .any(|r| r.support().iter().all(|i| psi.contains(i)));
        if !supported {
            return Err(Error::rejected(
                clause::RESTRICTION_SUPPORT,
                format!("Ψ = {psi:?}"),
            ));
        }
        Ok(self.transfer(Arc::new(sub), &map))
    }

    fn restrict_to_root(&self, root: &Root) -> Result<Self> {
        self.require_unbounded(root, clause::ROOT_NOT_IN_ER)?;
        let (sub, map) = self
            .ctx
            .restrict_to_root(root)
            .map_err(|e| Error::rejected(clause::DEGENERATE_RESTRICTION, e.to_string()))?;
        if let Some((r, _)) = self
            .status
            .iter()
            .find(|(r, &s)| s != BoundednessStatus::Trivial && map.project(r).is_none())
        {
            return Err(Error::rejected(
                clause::LINE_NOT_ISOLATED,
                format!("{r} is nonzero off the line of {root}"),
            ));
        }
        Ok(self.transfer(Arc::new(sub), &map))
    }

    fn transfer(&self, sub: Arc<ParabolicContext>, map: &crate::parabolic::SubsystemMap) -> Self {
        let status = sub
            .nilradical()
            .iter()
            .map(|r| {
                let s = self
                    .status(&map.embed(r))
                    .unwrap_or(BoundednessStatus::Trivial);
                (r.clone(), s)
            })
            .collect();
        let signs = self
            .signs
            .iter()
            .filter_map(|(r, &s)| map.project(r).map(|p| (p, s)))
            .collect();
        HolonomyDescriptor {
            ctx: sub,
            status,
            signs,
        }
    }

    pub fn to_doc(&self) -> DescriptorDoc {
        DescriptorDoc {
            context: self.ctx.to_ref(),
            status: self
                .status
                .iter()
                .map(|(root, &status)| StatusEntry {
                    root: root.clone(),
                    status,
                })
                .collect(),
            signs: self
                .signs
                .iter()
                .map(|(root, &sign)| SignEntry {
                    root: root.clone(),
                    sign,
                })
                .collect(),
        }
    }

    /// Rebuilds a descriptor; the context's derived sets are recomputed and
    /// the status entries must cover exactly its nilradical.
    pub fn from_doc(doc: &DescriptorDoc) -> Result<Self> {
        let ctx = Arc::new(ParabolicContext::from_ref(&doc.context)?);
        let status: BTreeMap<Root, BoundednessStatus> = doc
            .status
            .iter()
            .map(|e| (e.root.clone(), e.status))
            .collect();
        let keys: Vec<&Root> = status.keys().collect();
        let nil: Vec<&Root> = ctx.nilradical().iter().collect();
        if keys != nil {
            return Err(Error::Schema(
                "status entries must cover the nilradical".into(),
            ));
        }
        let mut signs = BTreeMap::new();
        for e in &doc.signs {
            if !(e.root.is_positive() && ctx.system().is_root(&e.root)) {
                return Err(Error::Schema(format!("sign on non-root {}", e.root)));
            }
            if e.sign != SignAssumption::Unconstrained {
                signs.insert(e.root.clone(), e.sign);
            }
        }
        Ok(HolonomyDescriptor { ctx, status, signs })
    }

    /// Canonical key for memoization.
    pub fn key(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("descriptor serializes")
    }
}

/// Serialized descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorDoc {
    pub context: ContextRef,
    pub status: Vec<StatusEntry>,
    pub signs: Vec<SignEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusEntry {
    pub root: Root,
    pub status: BoundednessStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignEntry {
    pub root: Root,
    pub sign: SignAssumption,
}
