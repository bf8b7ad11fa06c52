//! Parabolic combinatorics: for a subset `Λ` of the simple roots, the roots
//! `Λ⁺` of the Levi factor and the nilradical roots `(Λ⁺)ᶜ`, together with
//! restriction to the subsystem carried by a parabolic subvariety.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsystem::{coords_in_basis, Root, RootSystem, Series};

/// A root system together with a proper subset `Λ` of its simple roots.
///
/// Contexts produced by restriction remember the ambient system they came
/// from and the ambient coordinates of their own simple roots, so that every
/// context in a derivation can be rebuilt from the top-level classification
/// entry.
#[derive(Clone)]
pub struct ParabolicContext {
    ambient: Arc<RootSystem>,
    basis: Vec<Root>,
    sys: Arc<RootSystem>,
    lambda: BTreeSet<usize>,
    lambda_plus: Vec<Root>,
    nilradical: Vec<Root>,
    nil_lookup: HashSet<Root>,
    phi_max: Vec<Root>,
}

impl fmt::Debug for ParabolicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParabolicContext")
            .field("system", &self.sys.name())
            .field("basis", &self.basis)
            .field("lambda", &self.lambda)
            .finish()
    }
}

impl PartialEq for ParabolicContext {
    fn eq(&self, other: &Self) -> bool {
        self.ambient.series() == other.ambient.series()
            && self.ambient.rank() == other.ambient.rank()
            && self.basis == other.basis
            && self.lambda == other.lambda
    }
}

impl Eq for ParabolicContext {}

impl ParabolicContext {
    /// The parabolic context `(sys, Λ)` with `Λ` given by simple-root indices.
    pub fn new(sys: Arc<RootSystem>, lambda: &[usize]) -> Result<Self> {
        let basis = sys.simple_roots();
        Self::assemble(sys.clone(), basis, sys, lambda)
    }

    fn assemble(
        ambient: Arc<RootSystem>,
        basis: Vec<Root>,
        sys: Arc<RootSystem>,
        lambda: &[usize],
    ) -> Result<Self> {
        let rank = sys.rank();
        let lambda: BTreeSet<usize> = lambda.iter().copied().collect();
        if let Some(&bad) = lambda.iter().find(|&&i| i >= rank) {
            return Err(Error::domain(format!("simple index {bad} out of range")));
        }
        if lambda.len() == rank {
            return Err(Error::NotParabolic(format!(
                "Λ contains every simple root of {}",
                sys.name()
            )));
        }
        let (lambda_plus, nilradical): (Vec<Root>, Vec<Root>) = sys
            .positive_roots()
            .iter()
            .cloned()
            .partition(|r| r.support().iter().all(|i| lambda.contains(i)));
        let nil_lookup = nilradical.iter().cloned().collect();
        let phi_max = sys.phi_max();
        Ok(ParabolicContext {
            ambient,
            basis,
            sys,
            lambda,
            lambda_plus,
            nilradical,
            nil_lookup,
            phi_max,
        })
    }

    pub fn system(&self) -> &RootSystem {
        &self.sys
    }

    pub fn system_arc(&self) -> &Arc<RootSystem> {
        &self.sys
    }

    /// The top-level system this context was restricted from.
    pub fn ambient(&self) -> &RootSystem {
        &self.ambient
    }

    /// Ambient coordinates of this context's simple roots.
    pub fn basis(&self) -> &[Root] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.sys.rank()
    }

    pub fn lambda(&self) -> &BTreeSet<usize> {
        &self.lambda
    }

    /// Positive roots in the span of `Λ`.
    pub fn lambda_plus(&self) -> &[Root] {
        &self.lambda_plus
    }

    /// Positive roots involving a simple root outside `Λ`.
    pub fn nilradical(&self) -> &[Root] {
        &self.nilradical
    }

    pub fn phi_max(&self) -> &[Root] {
        &self.phi_max
    }

    pub fn in_nilradical(&self, r: &Root) -> bool {
        self.nil_lookup.contains(r)
    }

    pub fn in_lambda_plus(&self, r: &Root) -> bool {
        r.is_positive() && self.sys.is_root(r) && !self.in_nilradical(r)
    }

    pub fn in_phi_max(&self, r: &Root) -> bool {
        r.coeffs().iter().all(|&c| c >= 1) && self.sys.is_root(r)
    }

    /// Whether this is `G2` with `Λ` the long simple root.
    pub fn is_g2_long_parabolic(&self) -> bool {
        self.sys.cartan() == [vec![2, -3], vec![-1, 2]]
            && self.lambda.iter().copied().collect::<Vec<_>>() == [1]
    }

    /// Restriction to the subsystem on the simple roots `psi`, with
    /// `Λ' = Λ ∩ Ψ` relabeled into the subsystem's own simple basis.
    pub fn restrict(&self, psi: &[usize]) -> Result<(ParabolicContext, SubsystemMap)> {
        let psi: Vec<usize> = psi
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if psi.is_empty() || psi.len() >= self.rank() {
            return Err(Error::DegenerateRestriction(
                "Ψ must be a proper nonempty subset of the simple roots".into(),
            ));
        }
        if let Some(&bad) = psi.iter().find(|&&i| i >= self.rank()) {
            return Err(Error::domain(format!("simple index {bad} out of range")));
        }
        if psi.iter().all(|i| self.lambda.contains(i)) {
            return Err(Error::DegenerateRestriction(
                "Ψ ⊆ Λ: the subvariety is a point".into(),
            ));
        }
        let local_basis: Vec<Root> = psi.iter().map(|&i| Root::simple(self.rank(), i)).collect();
        let lambda: Vec<usize> = psi
            .iter()
            .enumerate()
            .filter(|(_, i)| self.lambda.contains(i))
            .map(|(k, _)| k)
            .collect();
        let sub = self.sub_context(&local_basis, &lambda)?;
        let map = SubsystemMap {
            psi: Some(psi),
            basis: local_basis,
        };
        Ok((sub, map))
    }

    /// Restriction to the rank-one subsystem through the nilradical root
    /// `mu`: the roots proportional to `mu`. If `mu/2` is a root the
    /// subsystem is generated by it, so that `mu` is always included.
    pub fn restrict_to_root(&self, mu: &Root) -> Result<(ParabolicContext, SubsystemMap)> {
        if !self.in_nilradical(mu) {
            return Err(Error::DegenerateRestriction(format!(
                "{mu} is not a nilradical root"
            )));
        }
        let generator = match mu.halve() {
            Some(h) if self.sys.is_root(&h) => h,
            _ => mu.clone(),
        };
        let local_basis = vec![generator];
        let sub = self.sub_context(&local_basis, &[])?;
        let map = SubsystemMap {
            psi: None,
            basis: local_basis,
        };
        Ok((sub, map))
    }

    fn sub_context(&self, local_basis: &[Root], lambda: &[usize]) -> Result<ParabolicContext> {
        let basis: Vec<Root> = local_basis.iter().map(|b| self.to_ambient(b)).collect();
        let sys = Arc::new(self.ambient.subsystem(&basis)?);
        Self::assemble(self.ambient.clone(), basis, sys, lambda)
    }

    /// Ambient coordinates of a root of this context.
    pub fn to_ambient(&self, r: &Root) -> Root {
        let mut out = Root::zero(self.ambient.rank());
        for (b, &c) in self.basis.iter().zip(r.coeffs()) {
            out = out.add_scaled(b, c);
        }
        out
    }

    /// Whether the simple root `alpha ∉ Λ` may serve as a transverse sliding
    /// direction: for every `lambda` in `Φ⁺_max` and every `l ≥ 0`, a positive
    /// root `lambda - l alpha` stays in the nilradical.
    ///
    /// Only positive roots `lambda - l alpha` are considered. In rank two
    /// and higher no negative root arises this way; in rank one the sliding
    /// direction is vacuous.
    pub fn transverse_slide_admissible(&self, alpha: &Root) -> Result<bool> {
        let i = alpha
            .simple_index()
            .filter(|_| alpha.rank() == self.rank())
            .ok_or_else(|| Error::domain(format!("{alpha} is not a simple root")))?;
        if self.lambda.contains(&i) {
            return Err(Error::domain(format!("{alpha} is not in the nilradical")));
        }
        for lambda in &self.phi_max {
            let mut l = 0;
            loop {
                let mu = lambda.add_scaled(alpha, -l);
                if !(mu.is_positive() && self.sys.is_root(&mu)) {
                    break;
                }
                if !self.in_nilradical(&mu) {
                    return Ok(false);
                }
                l += 1;
            }
        }
        Ok(true)
    }

    pub fn to_ref(&self) -> ContextRef {
        ContextRef {
            system_ref: SystemRef {
                series: self.ambient.series(),
                rank: self.ambient.rank(),
                basis: if self.basis == self.ambient.simple_roots() {
                    None
                } else {
                    Some(self.basis.clone())
                },
            },
            lambda_indices: self.lambda.iter().copied().collect(),
        }
    }

    /// Rebuilds a context from its reference. Every derived set is recomputed.
    pub fn from_ref(r: &ContextRef) -> Result<Self> {
        let series = r
            .system_ref
            .series
            .ok_or_else(|| Error::Schema("system_ref without a series".into()))?;
        let ambient = Arc::new(RootSystem::build(series, r.system_ref.rank)?);
        match &r.system_ref.basis {
            None => Self::new(ambient, &r.lambda_indices),
            Some(basis) => {
                let sys = Arc::new(ambient.subsystem(basis)?);
                Self::assemble(ambient, basis.clone(), sys, &r.lambda_indices)
            }
        }
    }
}

/// Serialized parabolic context: which system, and which `Λ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextRef {
    pub system_ref: SystemRef,
    pub lambda_indices: Vec<usize>,
}

/// A classification entry, optionally narrowed to the subsystem spanned by
/// `basis` (ambient coordinates).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemRef {
    pub series: Option<Series>,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Root>>,
}

/// Embedding of a restricted context into its parent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemMap {
    /// Simple indices of the parent spanning the subsystem, when the
    /// restriction is to a set of simple roots.
    pub psi: Option<Vec<usize>>,
    /// Parent coordinates of the subsystem's simple roots.
    pub basis: Vec<Root>,
}

impl SubsystemMap {
    /// Parent coordinates of a subsystem root.
    pub fn embed(&self, r: &Root) -> Root {
        let rank = self.basis[0].rank();
        let mut out = Root::zero(rank);
        for (b, &c) in self.basis.iter().zip(r.coeffs()) {
            out = out.add_scaled(b, c);
        }
        out
    }

    /// Subsystem coordinates of a parent root, if it lies in the subsystem.
    pub fn project(&self, r: &Root) -> Option<Root> {
        if r.is_negative() {
            return coords_in_basis(&-r, &self.basis).map(|c| -&c);
        }
        coords_in_basis(r, &self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(series: Series, rank: usize, lambda: &[usize]) -> ParabolicContext {
        ParabolicContext::new(Arc::new(RootSystem::build(series, rank).unwrap()), lambda).unwrap()
    }

    fn r(c: &[i32]) -> Root {
        Root::new(c.to_vec())
    }

    #[test]
    fn minimal_parabolic() {
        let c = ctx(Series::A, 3, &[]);
        assert!(c.lambda_plus().is_empty());
        assert_eq!(c.nilradical(), c.system().positive_roots());
    }

    #[test]
    fn g2_long_parabolic_nilradical() {
        let c = ctx(Series::G, 2, &[1]);
        let expected: Vec<Root> = [[1, 0], [1, 1], [2, 1], [3, 1], [3, 2]]
            .iter()
            .map(|x| r(x))
            .collect();
        assert_eq!(c.nilradical(), expected.as_slice());
        assert!(c.is_g2_long_parabolic());
    }

    #[test]
    fn g2_short_parabolic_pivot_candidates() {
        let c = ctx(Series::G, 2, &[0]);
        let beta = r(&[0, 1]);
        let candidates: BTreeSet<Root> = c
            .phi_max()
            .iter()
            .filter(|l| c.in_nilradical(l))
            .filter(|l| c.system().cartan_integer(&beta, l).unwrap() > 0)
            .cloned()
            .collect();
        assert_eq!(candidates, BTreeSet::from([r(&[1, 1]), r(&[3, 2])]));
    }

    #[test]
    fn full_lambda_is_not_parabolic() {
        let sys = Arc::new(RootSystem::build(Series::A, 2).unwrap());
        assert!(matches!(
            ParabolicContext::new(sys, &[0, 1]),
            Err(Error::NotParabolic(_))
        ));
    }

    #[test]
    fn restriction_of_a2() {
        let c = ctx(Series::A, 2, &[]);
        let (sub, map) = c.restrict(&[1]).unwrap();
        assert_eq!(sub.rank(), 1);
        assert!(sub.lambda().is_empty());
        assert_eq!(map.embed(&r(&[1])), r(&[0, 1]));
    }

    #[test]
    fn restriction_of_c3_is_doubly_laced() {
        // Bourbaki C3 with Λ = {a1, a2}; the Greek labeling has α = a3 and
        // β_i = a_{3-i}, so Ψ = {α, β1} is {a2, a3}.
        let c = ctx(Series::C, 3, &[0, 1]);
        let (sub, map) = c.restrict(&[1, 2]).unwrap();
        assert_eq!(sub.system().cartan(), &[vec![2, -2], vec![-1, 2]]);
        assert_eq!(sub.lambda().iter().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(sub.system().positive_roots().len(), 4);
        assert_eq!(map.project(&r(&[0, 2, 1])), Some(r(&[2, 1])));
        assert_eq!(map.project(&r(&[1, 1, 1])), None);
    }

    #[test]
    fn degenerate_restriction() {
        let c = ctx(Series::A, 3, &[0, 1]);
        assert!(matches!(
            c.restrict(&[0, 1]),
            Err(Error::DegenerateRestriction(_))
        ));
        assert!(matches!(
            c.restrict(&[0, 1, 2]),
            Err(Error::DegenerateRestriction(_))
        ));
    }

    #[test]
    fn root_restriction_in_bc() {
        let c = ctx(Series::BC, 2, &[0]);
        let (sub, map) = c.restrict_to_root(&r(&[2, 2])).unwrap();
        assert_eq!(sub.system().positive_roots(), &[r(&[1]), r(&[2])]);
        assert_eq!(map.embed(&r(&[2])), r(&[2, 2]));
        assert_eq!(sub.to_ambient(&r(&[1])), r(&[1, 1]));
    }

    #[test]
    fn transverse_admissibility() {
        let c = ctx(Series::G, 2, &[1]);
        assert!(!c.transverse_slide_admissible(&r(&[1, 0])).unwrap());
        let a1 = ctx(Series::A, 1, &[]);
        assert!(a1.transverse_slide_admissible(&r(&[1])).unwrap());
        assert!(c.transverse_slide_admissible(&r(&[0, 1])).is_err());
    }

    #[test]
    fn context_ref_round_trip() {
        let c = ctx(Series::C, 3, &[0, 1]);
        let (sub, _) = c.restrict(&[1, 2]).unwrap();
        let back = ParabolicContext::from_ref(&sub.to_ref()).unwrap();
        assert_eq!(back, sub);
        assert_eq!(back.nilradical(), sub.nilradical());
    }
}
