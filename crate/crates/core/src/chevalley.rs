//! Structure constants of the split (Chevalley) form of a reduced system.
//!
//! Signs are fixed on extraspecial pairs and propagated with the standard
//! three- and four-root relations. Positive roots are totally ordered by
//! degree, then lexicographically; for each non-simple positive root the
//! extraspecial pair is the special pair with the smallest first entry.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsystem::{Root, RootSystem};

type Q = Ratio<i64>;

/// Squared lengths of roots, from a symmetrization of the Cartan matrix.
///
/// The symmetrizer `d` solves `d_i A_ij = d_j A_ji` and is scaled to
/// coprime positive integers per connected component.
#[derive(Debug, Clone)]
pub struct RootNorms {
    d: Vec<i64>,
    cartan: Vec<Vec<i32>>,
}

impl RootNorms {
    pub fn new(sys: &RootSystem) -> Self {
        let n = sys.rank();
        let mut d: Vec<Option<Q>> = vec![None; n];
        for start in 0..n {
            if d[start].is_some() {
                continue;
            }
            d[start] = Some(Q::one());
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in sys.dynkin_neighbors(i) {
                    if d[j].is_none() {
                        let a_ij = i64::from(sys.cartan()[i][j]);
                        let a_ji = i64::from(sys.cartan()[j][i]);
                        d[j] = Some(d[i].unwrap() * Q::new(a_ij, a_ji));
                        stack.push(j);
                    }
                }
            }
        }
        let d: Vec<Q> = d.into_iter().map(Option::unwrap).collect();
        let lcm = d
            .iter()
            .fold(1i64, |acc, q| num_integer_lcm(acc, *q.denom()));
        let d = d.iter().map(|q| (q * lcm).to_integer()).collect();
        RootNorms {
            d,
            cartan: sys.cartan().to_vec(),
        }
    }

    /// `(x, y)` up to a common positive factor per component.
    pub fn inner(&self, x: &Root, y: &Root) -> i64 {
        let mut s = 0;
        for (i, &xi) in x.coeffs().iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.coeffs().iter().enumerate() {
                s += i64::from(xi) * i64::from(yj) * self.d[i] * i64::from(self.cartan[i][j]);
            }
        }
        s
    }

    pub fn norm(&self, x: &Root) -> i64 {
        self.inner(x, x)
    }
}

fn num_integer_lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Structure constants `N(a, b)` with `[e_a, e_b] = N(a, b) e_{a+b}`,
/// defined for every pair of roots whose sum is a root.
#[derive(Debug, Clone)]
pub struct StructureTable {
    sys: Arc<RootSystem>,
    norms: RootNorms,
    table: HashMap<(Root, Root), i32>,
}

impl StructureTable {
    pub fn build(sys: Arc<RootSystem>) -> Result<Self> {
        if !sys.is_reduced() {
            return Err(Error::Unsupported(format!(
                "structure constants of the non-reduced system {}",
                sys.name()
            )));
        }
        let norms = RootNorms::new(&sys);
        let mut order: Vec<Root> = sys.positive_roots().to_vec();
        order.sort_by_key(|r| (r.degree().unwrap_or(0), r.clone()));
        let rank_of: HashMap<Root, usize> = order
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k))
            .collect();

        let mut builder = Builder {
            sys: &sys,
            norms: &norms,
            rank_of: &rank_of,
            special: HashMap::new(),
        };
        for xi in &order {
            let pairs: Vec<(Root, Root)> = order
                .iter()
                .take_while(|a| rank_of[*a] < rank_of[xi])
                .filter_map(|a| {
                    let b = xi - a;
                    (b.is_positive() && sys.is_root(&b) && rank_of[a] < rank_of[&b])
                        .then(|| (a.clone(), b))
                })
                .collect();
            let Some((a0, b0)) = pairs.first().cloned() else {
                continue;
            };
            let (p, _) = sys.root_string(&a0, &b0)?;
            let n0 = Q::from_integer(i64::from(p + 1));
            builder.special.insert((a0.clone(), b0.clone()), n0);
            let xi_norm = Q::from_integer(norms.norm(xi));
            for (a, b) in pairs.iter().skip(1) {
                let mut sum = Q::zero();
                let b_a0 = b - &a0;
                if sys.is_root(&b_a0) {
                    sum += builder.n(b, &-&a0)? * builder.n(a, &-&b0)?
                        / Q::from_integer(norms.norm(&b_a0));
                }
                let a_a0 = a - &a0;
                if sys.is_root(&a_a0) {
                    sum += builder.n(&-&a0, a)? * builder.n(b, &-&b0)?
                        / Q::from_integer(norms.norm(&a_a0));
                }
                let value = xi_norm / n0 * sum;
                builder.special.insert((a.clone(), b.clone()), value);
            }
        }

        let mut table = HashMap::new();
        let roots: Vec<Root> = sys.roots().collect();
        for a in &roots {
            for b in &roots {
                let s = a + b;
                if s.is_zero() || !sys.is_root(&s) {
                    continue;
                }
                let v = builder.n(a, b)?;
                if !v.is_integer() {
                    return Err(Error::Internal(format!(
                        "N({a}, {b}) = {v} is not an integer"
                    )));
                }
                let v = i32::try_from(v.to_integer())
                    .map_err(|_| Error::Internal("structure constant overflow".into()))?;
                table.insert((a.clone(), b.clone()), v);
            }
        }
        drop(builder);
        Ok(StructureTable { sys, norms, table })
    }

    pub fn system(&self) -> &RootSystem {
        &self.sys
    }

    pub fn norms(&self) -> &RootNorms {
        &self.norms
    }

    /// `N(a, b)`, or `None` when `a + b` is not a root.
    pub fn get(&self, a: &Root, b: &Root) -> Option<i32> {
        self.table.get(&(a.clone(), b.clone())).copied()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Whether the bracket `g_{-alpha} × g_{nu+alpha} → g_nu` is nonzero.
    pub fn check_bracket_nondegenerate(&self, alpha: &Root, nu: &Root) -> Result<bool> {
        let sum = alpha + nu;
        for r in [alpha, nu, &sum] {
            if !(r.is_positive() && self.sys.is_root(r)) {
                return Err(Error::domain(format!("{r} is not a positive root")));
            }
        }
        Ok(self.get(&-alpha, &sum).is_some_and(|n| n != 0))
    }

    /// Every defined constant, sorted by `(a, b)`.
    pub fn dump(&self) -> TableDump {
        let pairs: BTreeMap<(Root, Root), i32> =
            self.table.iter().map(|(k, v)| (k.clone(), *v)).collect();
        TableDump {
            system: self.sys.name(),
            pairs: pairs.into_iter().map(|((a, b), n)| (a, b, n)).collect(),
        }
    }
}

/// Audit dump of a structure table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDump {
    pub system: String,
    pub pairs: Vec<(Root, Root, i32)>,
}

struct Builder<'a> {
    sys: &'a RootSystem,
    norms: &'a RootNorms,
    rank_of: &'a HashMap<Root, usize>,
    special: HashMap<(Root, Root), Q>,
}

impl Builder<'_> {
    fn norm(&self, r: &Root) -> Q {
        Q::from_integer(self.norms.norm(r))
    }

    /// `N(a, b)` from the special pairs computed so far.
    fn n(&self, a: &Root, b: &Root) -> Result<Q> {
        let c = -&(a + b);
        if c.is_zero() || !self.sys.is_root(&c) {
            return Err(Error::Internal(format!(
                "N({a}, {b}) requested for a non-root sum"
            )));
        }
        match (a.is_positive(), b.is_positive()) {
            (true, true) => {
                if self.rank_of[a] < self.rank_of[b] {
                    self.special
                        .get(&(a.clone(), b.clone()))
                        .copied()
                        .ok_or_else(|| {
                            Error::Internal(format!("special pair ({a}, {b}) not yet known"))
                        })
                } else {
                    Ok(-self.n(b, a)?)
                }
            }
            (false, false) => Ok(-self.n(&-a, &-b)?),
            // a + b + c = 0 gives N(a,b)/|c|² = N(b,c)/|a|² = N(c,a)/|b|².
            _ => {
                if c.is_positive() == a.is_positive() {
                    Ok(self.norm(&c) / self.norm(b) * self.n(&c, a)?)
                } else {
                    Ok(self.norm(&c) / self.norm(a) * self.n(b, &c)?)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::Series;

    fn table(series: Series, rank: usize) -> StructureTable {
        StructureTable::build(Arc::new(RootSystem::build(series, rank).unwrap())).unwrap()
    }

    fn r(c: &[i32]) -> Root {
        Root::new(c.to_vec())
    }

    #[test]
    fn a2_constant_has_magnitude_one() {
        let t = table(Series::A, 2);
        assert_eq!(t.get(&r(&[1, 0]), &r(&[0, 1])).unwrap().abs(), 1);
        assert_eq!(t.get(&r(&[1, 0]), &r(&[1, 0])), None);
        assert!(t
            .check_bracket_nondegenerate(&r(&[1, 0]), &r(&[0, 1]))
            .unwrap());
    }

    #[test]
    fn g2_magnitudes() {
        let t = table(Series::G, 2);
        // The (2a+b)-string through a: a - (2a+b) is not a root, so p = 0.
        assert_eq!(t.get(&r(&[2, 1]), &r(&[1, 0])).unwrap().abs(), 3);
        assert_eq!(t.get(&r(&[1, 0]), &r(&[2, 1])).unwrap().abs(), 3);
        assert!(t
            .check_bracket_nondegenerate(&r(&[1, 0]), &r(&[1, 1]))
            .unwrap());
    }

    #[test]
    fn antisymmetry() {
        let t = table(Series::B, 3);
        for ((a, b), n) in &t.table {
            assert_eq!(t.get(b, a), Some(-n));
        }
    }

    #[test]
    fn non_reduced_is_unsupported() {
        let sys = Arc::new(RootSystem::build(Series::BC, 2).unwrap());
        assert!(matches!(
            StructureTable::build(sys),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn nondegeneracy_precondition() {
        let t = table(Series::A, 2);
        assert!(t
            .check_bracket_nondegenerate(&r(&[1, 1]), &r(&[0, 1]))
            .is_err());
    }

    #[test]
    fn norms_of_g2() {
        let sys = RootSystem::build(Series::G, 2).unwrap();
        let n = RootNorms::new(&sys);
        assert_eq!(n.norm(&r(&[0, 1])), 3 * n.norm(&r(&[1, 0])));
        assert_eq!(n.norm(&r(&[3, 2])), n.norm(&r(&[0, 1])));
    }
}
