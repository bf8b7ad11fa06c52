//! Root systems in simple-root coordinates.
//!
//! A root is stored only by its integer coefficients over the simple roots.
//! No inner product is kept: every Cartan integer is recovered from root
//! strings, so all arithmetic stays exact and independent of any choice of
//! normalization.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the number of positive roots accepted during closure.
/// Guards against non-finite-type Cartan matrices.
const MAX_POSITIVE_ROOTS: usize = 4096;

/// Classification letter of a simple root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    BC,
}

impl Series {
    pub const ALL: [Series; 8] = [
        Series::A,
        Series::B,
        Series::C,
        Series::D,
        Series::E,
        Series::F,
        Series::G,
        Series::BC,
    ];

    /// Whether `(self, rank)` names an entry of the classification.
    ///
    /// `C2` and `BC1` are admitted alongside `B2`; the holonomy calculus
    /// distinguishes the two labelings of the rank-two doubly-laced system.
    pub fn admits_rank(self, rank: usize) -> bool {
        match self {
            Series::A | Series::BC => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::A => "A",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
            Series::E => "E",
            Series::F => "F",
            Series::G => "G",
            Series::BC => "BC",
        };
        f.write_str(s)
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            "E" => Ok(Series::E),
            "F" => Ok(Series::F),
            "G" => Ok(Series::G),
            "BC" => Ok(Series::BC),
            other => Err(Error::domain(format!("unknown series `{other}`"))),
        }
    }
}

impl Serialize for Series {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A root, given by its coefficients over the simple roots.
///
/// Ordering is lexicographic on the coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(Vec<i32>);

impl Root {
    pub fn new(coeffs: Vec<i32>) -> Self {
        Root(coeffs)
    }

    /// The `index`-th simple root of a rank-`rank` system.
    pub fn simple(rank: usize, index: usize) -> Self {
        let mut c = vec![0; rank];
        c[index] = 1;
        Root(c)
    }

    pub fn zero(rank: usize) -> Self {
        Root(vec![0; rank])
    }

    pub fn coeffs(&self) -> &[i32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c <= 0)
    }

    /// Index of the simple root this is, if any.
    pub fn simple_index(&self) -> Option<usize> {
        let mut found = None;
        for (i, &c) in self.0.iter().enumerate() {
            match c {
                0 => {}
                1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }

    /// Sum of the coefficients. Only defined for positive roots.
    pub fn degree(&self) -> Result<i32> {
        if !self.is_positive() {
            return Err(Error::domain(format!("degree of non-positive root {self}")));
        }
        Ok(self.0.iter().sum())
    }

    /// Indices of simple roots with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn scale(&self, k: i32) -> Root {
        Root(self.0.iter().map(|c| c * k).collect())
    }

    /// `q` with `self = 2 q`, if the coefficients are all even.
    pub fn halve(&self) -> Option<Root> {
        if self.0.iter().all(|c| c % 2 == 0) {
            Some(Root(self.0.iter().map(|c| c / 2).collect()))
        } else {
            None
        }
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, other: &Root, k: i32) -> Root {
        debug_assert_eq!(self.rank(), other.rank());
        Root(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + k * b)
                .collect(),
        )
    }

    /// If `self = (num/den) * other` with `den > 0`, the ratio in lowest terms.
    pub fn ratio_to(&self, other: &Root) -> Option<(i32, i32)> {
        let pivot = other.0.iter().position(|&c| c != 0)?;
        let (mut num, mut den) = (self.0[pivot], other.0[pivot]);
        if den < 0 {
            num = -num;
            den = -den;
        }
        let proportional = self
            .0
            .iter()
            .zip(&other.0)
            .all(|(&a, &b)| a * other.0[pivot] == b * self.0[pivot]);
        if !proportional {
            return None;
        }
        let g = gcd(num.abs(), den);
        Some((num / g, den / g))
    }
}

impl std::ops::Neg for &Root {
    type Output = Root;
    fn neg(self) -> Root {
        self.scale(-1)
    }
}

impl std::ops::Add for &Root {
    type Output = Root;
    fn add(self, rhs: &Root) -> Root {
        self.add_scaled(rhs, 1)
    }
}

impl std::ops::Sub for &Root {
    type Output = Root;
    fn sub(self, rhs: &Root) -> Root {
        self.add_scaled(rhs, -1)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::format_root(self))
    }
}

fn gcd(a: i32, b: i32) -> i32 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Cartan matrix of a classification entry, Bourbaki numbering.
///
/// `cartan[i][j] = 2<a_i, a_j> / <a_i, a_i>`, so that row `i` gives the
/// Cartan integers of the simple root `a_i` against every other simple root.
/// In `B_r` the last simple root is short, in `C_r` it is long; in `G_2` the
/// first simple root is short; in `F_4` the last two are short.
pub fn cartan_matrix(series: Series, rank: usize) -> Result<Vec<Vec<i32>>> {
    if !series.admits_rank(rank) {
        return Err(Error::Classification {
            series: series.to_string(),
            rank,
        });
    }
    let mut m = vec![vec![0; rank]; rank];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, a_ij: i32, a_ji: i32| {
        m[i][j] = a_ij;
        m[j][i] = a_ji;
    };
    match series {
        Series::A => {
            for i in 1..rank {
                link(i - 1, i, -1, -1);
            }
        }
        Series::B | Series::BC => {
            for i in 1..rank.saturating_sub(1) {
                link(i - 1, i, -1, -1);
            }
            if rank >= 2 {
                link(rank - 2, rank - 1, -1, -2);
            }
        }
        Series::C => {
            for i in 1..rank - 1 {
                link(i - 1, i, -1, -1);
            }
            link(rank - 2, rank - 1, -2, -1);
        }
        Series::D => {
            for i in 1..rank - 1 {
                link(i - 1, i, -1, -1);
            }
            link(rank - 3, rank - 1, -1, -1);
        }
        Series::E => {
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            for i in 3..rank {
                link(i - 1, i, -1, -1);
            }
        }
        Series::F => {
            link(0, 1, -1, -1);
            link(1, 2, -1, -2);
            link(2, 3, -1, -1);
        }
        Series::G => {
            link(0, 1, -3, -1);
        }
    }
    Ok(m)
}

/// A finite root system: Cartan data plus its enumerated positive roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    series: Option<Series>,
    rank: usize,
    cartan: Vec<Vec<i32>>,
    positive_roots: Vec<Root>,
    reduced: bool,
    lookup: HashSet<Root>,
}

impl RootSystem {
    /// Builds the root system of a classification entry.
    pub fn build(series: Series, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(series, rank)?;
        let mut roots = close_under_strings(&cartan)?;
        if series == Series::BC {
            // Doubles of the short roots: the Weyl orbit of the last simple root.
            let short = simple_orbit(&cartan, &roots, &Root::simple(rank, rank - 1));
            roots.extend(short.iter().map(|r| r.scale(2)));
        }
        Ok(Self::assemble(Some(series), cartan, roots))
    }

    /// Builds a reduced root system from an arbitrary finite-type Cartan matrix.
    pub fn from_cartan(cartan: Vec<Vec<i32>>) -> Result<Self> {
        validate_cartan(&cartan)?;
        let roots = close_under_strings(&cartan)?;
        Ok(Self::assemble(None, cartan, roots))
    }

    /// The subsystem spanned by `basis`, a set of roots of `self` with
    /// pairwise disjoint supports. Its positive roots are the positive roots
    /// of `self` lying in the nonnegative integer span of `basis`, written in
    /// the coordinates of `basis`.
    pub fn subsystem(&self, basis: &[Root]) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::domain("empty subsystem basis"));
        }
        let mut seen = BTreeSet::new();
        for b in basis {
            if !self.is_root(b) || !b.is_positive() {
                return Err(Error::domain(format!("{b} is not a positive root")));
            }
            for i in b.support() {
                if !seen.insert(i) {
                    return Err(Error::domain("subsystem basis supports overlap"));
                }
            }
        }
        let k = basis.len();
        let mut cartan = vec![vec![0; k]; k];
        for i in 0..k {
            for j in 0..k {
                cartan[i][j] = self.cartan_integer(&basis[i], &basis[j])?;
            }
        }
        let roots = self
            .positive_roots
            .iter()
            .filter_map(|r| coords_in_basis(r, basis))
            .collect::<BTreeSet<_>>();
        Ok(Self::assemble(None, cartan, roots))
    }

    fn assemble(series: Option<Series>, cartan: Vec<Vec<i32>>, roots: BTreeSet<Root>) -> Self {
        let positive_roots: Vec<Root> = roots.into_iter().collect();
        let lookup: HashSet<Root> = positive_roots.iter().cloned().collect();
        let reduced = !positive_roots.iter().any(|r| lookup.contains(&r.scale(2)));
        RootSystem {
            series,
            rank: cartan.len(),
            cartan,
            positive_roots,
            reduced,
            lookup,
        }
    }

    pub fn series(&self) -> Option<Series> {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    /// Positive roots in lexicographic order.
    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    /// All roots, positive then negative.
    pub fn roots(&self) -> impl Iterator<Item = Root> + '_ {
        self.positive_roots
            .iter()
            .cloned()
            .chain(self.positive_roots.iter().map(|r| -r))
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        (0..self.rank).map(|i| Root::simple(self.rank, i)).collect()
    }

    /// Human-readable type, e.g. `G2`, or `rank-2 subsystem`.
    pub fn name(&self) -> String {
        match self.series {
            Some(s) => format!("{s}{}", self.rank),
            None => format!("rank-{} subsystem", self.rank),
        }
    }

    pub fn is_root(&self, r: &Root) -> bool {
        if r.rank() != self.rank {
            return false;
        }
        if r.is_positive() {
            self.lookup.contains(r)
        } else if r.is_negative() {
            self.lookup.contains(&-r)
        } else {
            false
        }
    }

    fn require_root(&self, r: &Root) -> Result<()> {
        if self.is_root(r) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{r} is not a root of {}",
                self.name()
            )))
        }
    }

    /// Extents `(p, q)` of the `alpha`-string through `lambda`: the largest
    /// `p` with `lambda - p alpha` a root and the largest `q` with
    /// `lambda + q alpha` a root.
    pub fn root_string(&self, alpha: &Root, lambda: &Root) -> Result<(i32, i32)> {
        self.require_root(alpha)?;
        self.require_root(lambda)?;
        if lambda.ratio_to(alpha).is_some() {
            return Err(Error::domain(format!(
                "string of {alpha} through the proportional root {lambda}"
            )));
        }
        let extent = |step: i32| {
            let mut n = 0;
            while self.is_root(&lambda.add_scaled(alpha, step * (n + 1))) {
                n += 1;
            }
            n
        };
        Ok((extent(-1), extent(1)))
    }

    /// The Cartan integer `A_{alpha lambda} = 2<alpha, lambda>/<alpha, alpha>`.
    pub fn cartan_integer(&self, alpha: &Root, lambda: &Root) -> Result<i32> {
        self.require_root(alpha)?;
        self.require_root(lambda)?;
        if let Some((num, den)) = lambda.ratio_to(alpha) {
            if (2 * num) % den != 0 {
                return Err(Error::Internal(format!(
                    "non-integral ratio {num}/{den} between roots"
                )));
            }
            return Ok(2 * num / den);
        }
        let (p, q) = self.root_string(alpha, lambda)?;
        Ok(p - q)
    }

    /// The reflection of `lambda` in the hyperplane orthogonal to `alpha`.
    pub fn weyl_reflect(&self, alpha: &Root, lambda: &Root) -> Result<Root> {
        let a = self.cartan_integer(alpha, lambda)?;
        let image = lambda.add_scaled(alpha, -a);
        if !self.is_root(&image) {
            return Err(Error::Internal(format!(
                "reflection of {lambda} in {alpha} left the root system"
            )));
        }
        Ok(image)
    }

    /// Positive roots in which every simple root occurs.
    pub fn phi_max(&self) -> Vec<Root> {
        self.positive_roots
            .iter()
            .filter(|r| r.coeffs().iter().all(|&c| c >= 1))
            .cloned()
            .collect()
    }

    pub fn dynkin_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                if self.cartan[i][j] != 0 {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    pub fn dynkin_neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.rank)
            .filter(|&j| j != i && self.cartan[i][j] != 0)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.rank];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for j in self.dynkin_neighbors(i) {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Whether the simple root `alpha` has exactly one Dynkin neighbour.
    pub fn is_leaf(&self, alpha: &Root) -> Result<bool> {
        let i = alpha
            .simple_index()
            .filter(|_| alpha.rank() == self.rank)
            .ok_or_else(|| Error::domain(format!("{alpha} is not a simple root")))?;
        Ok(self.dynkin_neighbors(i).len() == 1)
    }

    pub fn to_doc(&self) -> RootSystemDoc {
        RootSystemDoc {
            series: self.series,
            rank: self.rank,
            cartan: self.cartan.clone(),
            positive_roots: self.positive_roots.clone(),
            reduced: self.reduced,
        }
    }

    /// Rebuilds a system from its document, checking it against a fresh
    /// construction.
    pub fn from_doc(doc: &RootSystemDoc) -> Result<Self> {
        let sys = match doc.series {
            Some(series) => Self::build(series, doc.rank)?,
            None => {
                let closure = Self::from_cartan(doc.cartan.clone())?;
                let roots: BTreeSet<Root> = doc.positive_roots.iter().cloned().collect();
                for r in &roots {
                    let ok = closure.lookup.contains(r)
                        || r.halve().is_some_and(|h| closure.lookup.contains(&h));
                    if !ok {
                        return Err(Error::Schema(format!("{r} is not a root")));
                    }
                }
                if !closure.positive_roots.iter().all(|r| roots.contains(r)) {
                    return Err(Error::Schema("root list is not closed".into()));
                }
                Self::assemble(None, doc.cartan.clone(), roots)
            }
        };
        if sys.to_doc() != *doc {
            return Err(Error::Schema(format!(
                "document does not match the constructed {}",
                sys.name()
            )));
        }
        Ok(sys)
    }
}

/// Serialized form of a root system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystemDoc {
    pub series: Option<Series>,
    pub rank: usize,
    pub cartan: Vec<Vec<i32>>,
    pub positive_roots: Vec<Root>,
    pub reduced: bool,
}

impl Serialize for RootSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = RootSystemDoc::deserialize(d)?;
        RootSystem::from_doc(&doc).map_err(serde::de::Error::custom)
    }
}

fn validate_cartan(cartan: &[Vec<i32>]) -> Result<()> {
    let n = cartan.len();
    if n == 0 {
        return Err(Error::domain("empty Cartan matrix"));
    }
    for (i, row) in cartan.iter().enumerate() {
        if row.len() != n {
            return Err(Error::domain("Cartan matrix is not square"));
        }
        for (j, &a) in row.iter().enumerate() {
            let ok = if i == j {
                a == 2
            } else {
                a <= 0 && ((a == 0) == (cartan[j][i] == 0))
            };
            if !ok {
                return Err(Error::domain(format!("bad Cartan entry ({i},{j}) = {a}")));
            }
        }
    }
    Ok(())
}

/// Simple-root Cartan integer `A_{a_i lambda}`, linear in `lambda`.
fn simple_pairing(cartan: &[Vec<i32>], i: usize, lambda: &Root) -> i32 {
    cartan[i]
        .iter()
        .zip(lambda.coeffs())
        .map(|(a, c)| a * c)
        .sum()
}

/// Positive roots of the reduced system with the given Cartan matrix,
/// enumerated height by height: `lambda + a_i` is a root exactly when the
/// unbroken `a_i`-string through `lambda` extends upward, i.e. `p - A > 0`.
fn close_under_strings(cartan: &[Vec<i32>]) -> Result<BTreeSet<Root>> {
    let rank = cartan.len();
    let mut roots: BTreeSet<Root> = (0..rank).map(|i| Root::simple(rank, i)).collect();
    let mut layer: Vec<Root> = roots.iter().cloned().collect();
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for lambda in &layer {
            for i in 0..rank {
                let alpha = Root::simple(rank, i);
                if *lambda == alpha {
                    continue;
                }
                let mut p = 0;
                while roots.contains(&lambda.add_scaled(&alpha, -(p + 1))) {
                    p += 1;
                }
                let q = p - simple_pairing(cartan, i, lambda);
                if q > 0 {
                    next.insert(lambda + &alpha);
                }
            }
        }
        roots.extend(next.iter().cloned());
        if roots.len() > MAX_POSITIVE_ROOTS {
            return Err(Error::domain("Cartan matrix is not of finite type"));
        }
        layer = next.into_iter().collect();
    }
    Ok(roots)
}

/// Positive roots in the Weyl orbit of `start`, via simple reflections.
fn simple_orbit(cartan: &[Vec<i32>], roots: &BTreeSet<Root>, start: &Root) -> BTreeSet<Root> {
    let rank = cartan.len();
    let mut orbit = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(r) = queue.pop_front() {
        for i in 0..rank {
            let image = r.add_scaled(&Root::simple(rank, i), -simple_pairing(cartan, i, &r));
            if image.is_positive() && roots.contains(&image) && orbit.insert(image.clone()) {
                queue.push_back(image);
            }
        }
    }
    orbit
}

/// Coordinates of `r` over a basis with disjoint supports, if `r` lies in its
/// nonnegative integer span.
pub(crate) fn coords_in_basis(r: &Root, basis: &[Root]) -> Option<Root> {
    let mut covered = vec![false; r.rank()];
    let mut coords = Vec::with_capacity(basis.len());
    for b in basis {
        let supp = b.support();
        let first = supp[0];
        if r.coeffs()[first] % b.coeffs()[first] != 0 {
            return None;
        }
        let c = r.coeffs()[first] / b.coeffs()[first];
        for &i in &supp {
            if r.coeffs()[i] != c * b.coeffs()[i] {
                return None;
            }
            covered[i] = true;
        }
        coords.push(c);
    }
    let outside_zero = r
        .coeffs()
        .iter()
        .zip(&covered)
        .all(|(&c, &cov)| cov || c == 0);
    (outside_zero && coords.iter().all(|&c| c >= 0)).then(|| Root::new(coords))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(c: &[i32]) -> Root {
        Root::new(c.to_vec())
    }

    #[test]
    fn rank_one() {
        let a1 = RootSystem::build(Series::A, 1).unwrap();
        assert_eq!(a1.positive_roots(), &[r(&[1])]);
        assert!(a1.is_reduced());
        let bc1 = RootSystem::build(Series::BC, 1).unwrap();
        assert_eq!(bc1.positive_roots(), &[r(&[1]), r(&[2])]);
        assert!(!bc1.is_reduced());
    }

    #[test]
    fn g2_roots_and_cartan_integers() {
        let g2 = RootSystem::build(Series::G, 2).unwrap();
        let expected: Vec<Root> = [[0, 1], [1, 0], [1, 1], [2, 1], [3, 1], [3, 2]]
            .iter()
            .map(|c| r(c))
            .collect();
        assert_eq!(g2.positive_roots(), expected.as_slice());
        let (a, b) = (r(&[1, 0]), r(&[0, 1]));
        assert_eq!(g2.cartan_integer(&a, &a).unwrap(), 2);
        assert_eq!(g2.cartan_integer(&a, &b).unwrap(), -3);
        assert_eq!(g2.cartan_integer(&b, &a).unwrap(), -1);
        assert_eq!(g2.root_string(&a, &b).unwrap(), (0, 3));
        assert_eq!(g2.weyl_reflect(&a, &a).unwrap(), r(&[-1, 0]));
    }

    #[test]
    fn a2_string() {
        let a2 = RootSystem::build(Series::A, 2).unwrap();
        assert_eq!(a2.root_string(&r(&[0, 1]), &r(&[1, 0])).unwrap(), (0, 1));
        assert_eq!(a2.phi_max(), vec![r(&[1, 1])]);
    }

    #[test]
    fn b2_has_four_positive_roots() {
        let b2 = RootSystem::build(Series::B, 2).unwrap();
        assert_eq!(b2.positive_roots().len(), 4);
        assert!(b2.positive_roots().contains(&r(&[1, 2])));
    }

    #[test]
    fn classification_errors() {
        for (s, k) in [
            (Series::G, 3),
            (Series::D, 3),
            (Series::E, 5),
            (Series::B, 1),
        ] {
            assert!(matches!(
                RootSystem::build(s, k),
                Err(Error::Classification { .. })
            ));
        }
        assert!(matches!(
            RootSystem::build(Series::A, 0),
            Err(Error::Classification { .. })
        ));
    }

    #[test]
    fn non_roots_are_domain_errors() {
        let a2 = RootSystem::build(Series::A, 2).unwrap();
        assert!(matches!(
            a2.cartan_integer(&r(&[1, 0]), &r(&[2, 1])),
            Err(Error::Domain(_))
        ));
        assert!(r(&[-1, 0]).degree().is_err());
        assert_eq!(r(&[3, 2]).degree().unwrap(), 5);
    }

    #[test]
    fn leaves() {
        let a1 = RootSystem::build(Series::A, 1).unwrap();
        assert!(!a1.is_leaf(&r(&[1])).unwrap());
        let g2 = RootSystem::build(Series::G, 2).unwrap();
        assert!(g2.is_leaf(&r(&[1, 0])).unwrap());
        assert!(g2.is_leaf(&r(&[0, 1])).unwrap());
        let d4 = RootSystem::build(Series::D, 4).unwrap();
        assert!(!d4.is_leaf(&Root::simple(4, 1)).unwrap());
        assert!(d4.is_leaf(&Root::simple(4, 0)).unwrap());
        assert!(d4.is_leaf(&r(&[1, 1, 0, 0])).is_err());
    }

    #[test]
    fn bc_cartan_integer_of_doubles() {
        let bc2 = RootSystem::build(Series::BC, 2).unwrap();
        let short = r(&[0, 1]);
        assert_eq!(bc2.cartan_integer(&short, &r(&[0, 2])).unwrap(), 4);
        assert_eq!(bc2.cartan_integer(&r(&[0, 2]), &short).unwrap(), 1);
        assert_eq!(bc2.positive_roots().len(), 6);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        for (s, k) in [(Series::G, 2), (Series::BC, 3), (Series::E, 6)] {
            let sys = RootSystem::build(s, k).unwrap();
            let text = serde_json::to_string(&sys).unwrap();
            let back: RootSystem = serde_json::from_str(&text).unwrap();
            assert_eq!(back, sys);
            assert_eq!(serde_json::to_string(&back).unwrap(), text);
        }
    }

    #[test]
    fn tampered_document_is_rejected() {
        let mut doc = RootSystem::build(Series::A, 2).unwrap().to_doc();
        doc.positive_roots.pop();
        assert!(RootSystem::from_doc(&doc).is_err());
    }

    #[test]
    fn subsystem_of_c3() {
        let c3 = RootSystem::build(Series::C, 3).unwrap();
        let sub = c3
            .subsystem(&[Root::simple(3, 1), Root::simple(3, 2)])
            .unwrap();
        assert_eq!(sub.cartan(), &[vec![2, -2], vec![-1, 2]]);
        assert_eq!(sub.positive_roots().len(), 4);
    }
}
