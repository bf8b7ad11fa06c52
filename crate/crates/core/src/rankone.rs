//! The rank-one mechanism in exact arithmetic.
//!
//! For a rank-one model space the chart algebra `n⁺` is abelian or 2-step
//! nilpotent, and `e^v` acts on exponential coordinates by
//! `x ↦ x + ½[v, x] + v`. The fixpoint `x` of `e^v` sends the half-line
//! `[x, ξ)` to `[0, ξ)` when `ξ` is central, so an unbounded sequence `v_k`
//! collapses source segments towards infinity while their images stay put.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub type Vector = Vec<Q>;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn half() -> Q {
    Q::new(BigInt::from(1), BigInt::from(2))
}

/// A nilpotent Lie algebra of step at most two on a fixed basis, with a
/// designated central subspace `z⁺` spanned by the last basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoStepNilpotent {
    name: String,
    dim: usize,
    /// `z⁺` is spanned by the basis vectors `z_start..dim`.
    z_start: usize,
    /// `table[i][j]` is `[e_i, e_j]`.
    table: Vec<Vec<Vector>>,
    /// Start of the `f` block when the basis is labelled `e, f, z`.
    f_start: Option<usize>,
}

impl TwoStepNilpotent {
    /// Builds an algebra from the brackets `[e_i, e_j]` for `i < j`; missing
    /// pairs bracket to zero.
    pub fn from_table(
        name: impl Into<String>,
        dim: usize,
        z_start: usize,
        entries: &[(usize, usize, Vector)],
    ) -> Result<Self> {
        if z_start > dim {
            return Err(Error::domain("central subspace start beyond dimension"));
        }
        let zero = vec![Q::zero(); dim];
        let mut table = vec![vec![zero.clone(); dim]; dim];
        for (i, j, value) in entries {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim || value.len() != dim {
                return Err(Error::domain(format!(
                    "bracket entry ({i}, {j}) out of range"
                )));
            }
            if i == j && value.iter().any(|c| !c.is_zero()) {
                return Err(Error::domain(format!("[e_{i}, e_{i}] must vanish")));
            }
            table[i][j] = value.clone();
            table[j][i] = value.iter().map(|c| -c).collect();
        }
        let alg = TwoStepNilpotent {
            name: name.into(),
            dim,
            z_start,
            table,
            f_start: None,
        };
        alg.validate()?;
        Ok(alg)
    }

    /// Brackets land in `z⁺` and `z⁺` is central, which forces step two.
    fn validate(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let b = &self.table[i][j];
                if b[..self.z_start].iter().any(|c| !c.is_zero()) {
                    return Err(Error::domain(format!("[e_{i}, e_{j}] leaves the center")));
                }
                if (i >= self.z_start || j >= self.z_start) && b.iter().any(|c| !c.is_zero()) {
                    return Err(Error::domain(format!("e_{} is not central", i.max(j))));
                }
            }
        }
        Ok(())
    }

    /// `ℝⁿ` with zero bracket, the chart algebra of the conformal sphere.
    /// Every direction is central, so `z⁺ = n⁺`.
    pub fn abelian(n: usize) -> Self {
        Self::from_table(format!("abelian({n})"), n, 0, &[]).expect("abelian table")
    }

    /// Heisenberg algebra on `e_1..e_n, f_1..f_n, z` with `[e_i, f_i] = z`.
    pub fn heisenberg(n: usize) -> Self {
        let dim = 2 * n + 1;
        let mut z = vec![Q::zero(); dim];
        z[dim - 1] = q(1);
        let entries: Vec<(usize, usize, Vector)> = (0..n).map(|i| (i, n + i, z.clone())).collect();
        let mut alg = Self::from_table(format!("heisenberg({n})"), dim, 2 * n, &entries)
            .expect("heisenberg table");
        alg.f_start = Some(n);
        alg
    }

    /// Quaternionic Heisenberg algebra `ℍⁿ ⊕ Im ℍ`, the chart algebra of
    /// `Sp(1, n+1)`, with `[p, q] = 2 Im(Σ p̄_l q_l)`.
    pub fn quaternionic(n: usize) -> Self {
        let dim = 4 * n + 3;
        let z_start = 4 * n;
        let mut entries = Vec::new();
        for l in 0..n {
            for a in 0..4 {
                for b in a + 1..4 {
                    // conj(e_a) e_b, purely imaginary for a ≠ b.
                    let (sign, unit) = quaternion_product(a, b);
                    let sign = if a == 0 { sign } else { -sign };
                    let mut v = vec![Q::zero(); dim];
                    v[z_start + unit - 1] = q(2 * sign);
                    entries.push((4 * l + a, 4 * l + b, v));
                }
            }
        }
        Self::from_table(format!("quaternionic({n})"), dim, z_start, &entries)
            .expect("quaternionic table")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn center_dim(&self) -> usize {
        self.dim - self.z_start
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().flatten().flatten().all(Zero::is_zero)
    }

    pub fn in_center(&self, v: &[Q]) -> bool {
        v.len() == self.dim && v[..self.z_start].iter().all(Zero::is_zero)
    }

    /// Index of a basis label: `e1`, `f2`, `z`, `z3`, or a plain index.
    pub fn basis_index(&self, label: &str) -> Option<usize> {
        if let Ok(i) = label.parse::<usize>() {
            return (i < self.dim).then_some(i);
        }
        let (head, tail) = label.split_at(1);
        let k: usize = if tail.is_empty() {
            1
        } else {
            tail.parse().ok()?
        };
        let k = k.checked_sub(1)?;
        let e_end = self.f_start.unwrap_or(self.z_start);
        let (i, end) = match (head, self.f_start) {
            ("e", _) => (k, e_end),
            ("f", Some(f)) => (f + k, self.z_start),
            ("z", _) => (self.z_start + k, self.dim),
            _ => return None,
        };
        (i < end).then_some(i)
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = vec![Q::zero(); self.dim];
        v[i] = q(1);
        v
    }

    pub fn bracket(&self, v: &[Q], w: &[Q]) -> Vector {
        let mut out = vec![Q::zero(); self.dim];
        for (i, vi) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, wj) in w.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let prod = vi * wj;
                for (o, b) in out.iter_mut().zip(&self.table[i][j]) {
                    if !b.is_zero() {
                        *o += &prod * b;
                    }
                }
            }
        }
        out
    }

    /// Truncated Baker–Campbell–Hausdorff product `v + w + ½[v, w]`.
    pub fn bch(&self, v: &[Q], w: &[Q]) -> Vector {
        let b = self.bracket(v, w);
        add(&add(v, w), &scale(&b, &half()))
    }
}

/// `e_a e_b = sign · e_unit` for quaternion units `1, i, j, k`.
fn quaternion_product(a: usize, b: usize) -> (i64, usize) {
    const T: [[(i64, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    T[a][b]
}

pub fn add(v: &[Q], w: &[Q]) -> Vector {
    v.iter().zip(w).map(|(a, b)| a + b).collect()
}

pub fn scale(v: &[Q], c: &Q) -> Vector {
    v.iter().map(|a| a * c).collect()
}

/// Sum of absolute values of the coordinates.
pub fn norm_l1(v: &[Q]) -> Q {
    v.iter().fold(Q::zero(), |acc, c| acc + c.abs())
}

/// `e^v · exp(x) = exp(x + ½[v, x] + v)`.
pub fn chart_action(alg: &TwoStepNilpotent, v: &[Q], x: &[Q]) -> Vector {
    let b = alg.bracket(v, x);
    add(&add(x, &scale(&b, &half())), v)
}

/// The unique `x` with `x + ½[v, x] + v = 0`, solved component-wise: the
/// part off the center is `x̄ = -v̄`, and the central part is
/// `x̃ = -ṽ - ½[v̄, x̄]`.
pub fn solve_chart_fixpoint(alg: &TwoStepNilpotent, v: &[Q]) -> Vector {
    let split = |u: &[Q]| -> (Vector, Vector) {
        let lower = u
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i < alg.z_start {
                    c.clone()
                } else {
                    Q::zero()
                }
            })
            .collect();
        let upper = u
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i >= alg.z_start {
                    c.clone()
                } else {
                    Q::zero()
                }
            })
            .collect();
        (lower, upper)
    };
    let (v_bar, v_tilde) = split(v);
    let x_bar: Vector = v_bar.iter().map(|c| -c).collect();
    let corr = alg.bracket(&v_bar, &x_bar);
    let x_tilde: Vector = v_tilde
        .iter()
        .zip(&corr)
        .map(|(a, b)| -a - b * half())
        .collect();
    add(&x_bar, &x_tilde)
}

/// The half-line `{base + t·direction | t ≥ 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfLine {
    pub base: Vector,
    pub direction: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessEntry {
    pub k: String,
    pub v: Vector,
    pub x: Vector,
    pub norm_x: Q,
    pub source: HalfLine,
    pub image: HalfLine,
}

/// Source half-lines `[x_k, ξ)` running off to infinity whose images under
/// `e^{v_k}` are all exactly `[0, ξ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub model: String,
    pub direction: Vector,
    pub entries: Vec<WitnessEntry>,
    /// `|x_k|` strictly increases along the prefix.
    pub diverging: bool,
    pub notes: Vec<String>,
}

impl Witness {
    /// Whether every image is exactly `[0, ξ)`.
    pub fn images_constant(&self) -> bool {
        let zero = vec![Q::zero(); self.direction.len()];
        self.entries
            .iter()
            .all(|e| e.image.base == zero && e.image.direction == self.direction)
    }

    pub fn to_doc(&self) -> WitnessDoc {
        WitnessDoc {
            schema_version: 1,
            model: self.model.clone(),
            direction: strings(&self.direction),
            diverging: self.diverging,
            images_constant: self.images_constant(),
            entries: self
                .entries
                .iter()
                .map(|e| WitnessEntryDoc {
                    k: e.k.clone(),
                    v_k: strings(&e.v),
                    x_k: strings(&e.x),
                    norm_x_k: e.norm_x.to_string(),
                    source_halfline: HalfLineDoc::from(&e.source),
                    image_halfline: HalfLineDoc::from(&e.image),
                })
                .collect(),
            notes: self.notes.clone(),
        }
    }
}

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Serialized witness; rationals are written as `p/q` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub schema_version: u32,
    pub model: String,
    pub direction: Vec<String>,
    pub diverging: bool,
    pub images_constant: bool,
    pub entries: Vec<WitnessEntryDoc>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntryDoc {
    pub k: String,
    pub v_k: Vec<String>,
    pub x_k: Vec<String>,
    pub norm_x_k: String,
    pub source_halfline: HalfLineDoc,
    pub image_halfline: HalfLineDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfLineDoc {
    pub base: Vec<String>,
    pub direction: Vec<String>,
}

impl From<&HalfLine> for HalfLineDoc {
    fn from(h: &HalfLine) -> Self {
        HalfLineDoc {
            base: strings(&h.base),
            direction: strings(&h.direction),
        }
    }
}

/// Whether `a` is a positive multiple of `b`.
fn positively_proportional(a: &[Q], b: &[Q]) -> bool {
    let (na, nb) = (norm_l1(a), norm_l1(b));
    if na.is_zero() || nb.is_zero() {
        return false;
    }
    a.iter().zip(b).all(|(x, y)| x / &na == y / &nb)
}

/// Builds the witness for `v_seq`, labelled by `labels` (e.g. the values
/// of `k`), along the central direction `xi`.
pub fn nonequicontinuity_witness(
    alg: &TwoStepNilpotent,
    labels: &[String],
    v_seq: &[Vector],
    xi: &[Q],
) -> Result<Witness> {
    if xi.len() != alg.dim() || xi.iter().all(Zero::is_zero) {
        return Err(Error::domain("direction must be a nonzero vector of n⁺"));
    }
    if !alg.in_center(xi) {
        return Err(Error::domain("direction is not in z⁺"));
    }
    if labels.len() != v_seq.len() {
        return Err(Error::domain("one label per term is required"));
    }
    let mut entries = Vec::with_capacity(v_seq.len());
    for (k, v) in labels.iter().zip(v_seq) {
        if v.len() != alg.dim() {
            return Err(Error::domain(format!("v_{k} has the wrong dimension")));
        }
        let x = solve_chart_fixpoint(alg, v);
        let base = chart_action(alg, v, &x);
        let tip = chart_action(alg, v, &add(&x, xi));
        let direction: Vector = tip.iter().zip(&base).map(|(a, b)| a - b).collect();
        entries.push(WitnessEntry {
            k: k.clone(),
            v: v.clone(),
            norm_x: norm_l1(&x),
            source: HalfLine {
                base: x.clone(),
                direction: xi.to_vec(),
            },
            image: HalfLine { base, direction },
            x,
        });
    }
    if let Some(last) = entries.last() {
        let minus_xi: Vector = xi.iter().map(|c| -c).collect();
        if positively_proportional(&last.x, &minus_xi) {
            return Err(Error::domain(
                "degenerate direction: ξ is -ξ_∞ on the supplied prefix",
            ));
        }
    }
    let diverging = entries.windows(2).all(|w| w[0].norm_x < w[1].norm_x);
    Ok(Witness {
        model: alg.name().to_string(),
        direction: xi.to_vec(),
        entries,
        diverging,
        notes: vec![
            "the a_k factor is not modeled: it acts linearly and preserves z⁺ directions".into(),
            "ξ_∞ is approximated by the direction of the last x_k of the finite prefix".into(),
        ],
    })
}

/// Parses `3`, `-1/2` or `0.25` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Q> {
    let t = text.trim();
    if let Some((int, frac)) = t.split_once('.') {
        let digits = frac.len() as u32;
        let whole = BigInt::from_str(&format!("{int}{frac}"))
            .map_err(|_| Error::domain(format!("bad number `{t}`")))?;
        return Ok(Q::new(whole, BigInt::from(10).pow(digits)));
    }
    Q::from_str(t).map_err(|_| Error::domain(format!("bad number `{t}`")))
}

impl fmt::Display for HalfLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[({}), ({}))",
            strings(&self.base).join(", "),
            strings(&self.direction).join(", ")
        )
    }
}
