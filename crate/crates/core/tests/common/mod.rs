//! Oracles shared by the integration tests. They only read the Cartan
//! matrix from the library and recompute everything else their own way.

#![allow(dead_code)]

use std::collections::BTreeSet;

use liecert::rootsystem::cartan_matrix;
use liecert::{Root, Series};

/// Classification count of positive roots.
pub fn expected_positive_count(series: Series, rank: usize) -> usize {
    let r = rank;
    match series {
        Series::A => r * (r + 1) / 2,
        Series::B | Series::C => r * r,
        Series::D => r * (r - 1),
        Series::BC => r * r + r,
        Series::E => match r {
            6 => 36,
            7 => 63,
            _ => 120,
        },
        Series::F => 24,
        Series::G => 6,
    }
}

pub fn systems_up_to(max_rank: usize) -> Vec<(Series, usize)> {
    let mut out = Vec::new();
    for s in Series::ALL {
        for r in 1..=max_rank {
            if s.admits_rank(r) {
                out.push((s, r));
            }
        }
    }
    out
}

/// `<x, α_i^∨>` for a vector in simple-root coordinates.
fn pairing(cartan: &[Vec<i32>], x: &[i32], i: usize) -> i32 {
    x.iter().enumerate().map(|(j, &c)| c * cartan[i][j]).sum()
}

/// Roots as the Weyl orbit of the simple roots under simple reflections,
/// plus doubles of the short-root orbit of the last simple root for `BC`.
pub fn orbit_roots(series: Series, rank: usize) -> BTreeSet<Vec<i32>> {
    let base = if series == Series::BC {
        Series::B
    } else {
        series
    };
    let cartan = if base == Series::B && rank == 1 {
        vec![vec![2]]
    } else {
        cartan_matrix(base, rank).unwrap()
    };
    let orbit = |seeds: Vec<Vec<i32>>| {
        let mut seen: BTreeSet<Vec<i32>> = seeds.iter().cloned().collect();
        let mut queue = seeds;
        while let Some(x) = queue.pop() {
            for i in 0..rank {
                let a = pairing(&cartan, &x, i);
                let mut y = x.clone();
                y[i] -= a;
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        seen
    };
    let simple = |i: usize| {
        let mut v = vec![0; rank];
        v[i] = 1;
        v
    };
    let mut roots = orbit((0..rank).map(simple).collect());
    if series == Series::BC {
        let short = orbit(vec![simple(rank - 1)]);
        roots.extend(short.iter().map(|v| v.iter().map(|c| 2 * c).collect()));
    }
    roots
}

pub fn orbit_positive(series: Series, rank: usize) -> BTreeSet<Vec<i32>> {
    orbit_roots(series, rank)
        .into_iter()
        .filter(|v| v.iter().all(|&c| c >= 0))
        .collect()
}

/// A symmetrized bilinear form `(x, y) = Σ x_i d_i A_ij y_j` with
/// `d_i A_ij` symmetric, found by walking the Dynkin graph.
pub struct Form {
    d: Vec<i64>,
    cartan: Vec<Vec<i32>>,
}

impl Form {
    pub fn new(cartan: &[Vec<i32>]) -> Self {
        let n = cartan.len();
        // d_j / d_i = A_ij / A_ji along edges; a seed of 6^6 keeps every
        // ratio met in a simple system integral.
        let mut d: Vec<Option<i64>> = vec![None; n];
        for s in 0..n {
            if d[s].is_some() {
                continue;
            }
            d[s] = Some(6i64.pow(6));
            let mut stack = vec![s];
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if i != j && cartan[i][j] != 0 && d[j].is_none() {
                        let v = d[i].unwrap() * i64::from(cartan[i][j]) / i64::from(cartan[j][i]);
                        d[j] = Some(v);
                        stack.push(j);
                    }
                }
            }
        }
        Form {
            d: d.into_iter().map(Option::unwrap).collect(),
            cartan: cartan.to_vec(),
        }
    }

    pub fn inner(&self, x: &[i32], y: &[i32]) -> i64 {
        let mut s = 0;
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                s += i64::from(xi) * self.d[i] * i64::from(self.cartan[i][j]) * i64::from(yj);
            }
        }
        s
    }
}

/// Simple indices adjacent to `i` in the Dynkin graph.
pub fn degree_in_dynkin(cartan: &[Vec<i32>], i: usize) -> usize {
    (0..cartan.len())
        .filter(|&j| j != i && cartan[i][j] != 0)
        .count()
}

pub fn root(c: &[i32]) -> Root {
    Root::new(c.to_vec())
}

/// Greek labels for the doubly-laced classical series: `α` is the last
/// simple root and `β_i` the `i`-th one counted back from it.
pub fn classical_phi_max(series: Series, rank: usize) -> BTreeSet<Vec<i32>> {
    let r = rank;
    let alpha = |v: &mut Vec<i32>, k: i32| v[r - 1] += k;
    let beta = |v: &mut Vec<i32>, i: usize, k: i32| v[r - 1 - i] += k;
    let mut lambda0 = vec![0; r];
    alpha(&mut lambda0, 1);
    for i in 1..r {
        beta(&mut lambda0, i, 1);
    }
    let mut out = BTreeSet::new();
    out.insert(lambda0.clone());
    match series {
        Series::C => {
            for i in 1..r {
                let mut l = lambda0.clone();
                for j in 1..=i {
                    beta(&mut l, j, 1);
                }
                out.insert(l);
            }
        }
        Series::B | Series::BC => {
            let mut lambda1 = lambda0.clone();
            alpha(&mut lambda1, 1);
            out.insert(lambda1.clone());
            for i in 2..r {
                let mut l = lambda1.clone();
                for j in 1..i {
                    beta(&mut l, j, 1);
                }
                out.insert(l);
            }
            if series == Series::BC {
                out.insert(lambda0.iter().map(|c| 2 * c).collect());
            }
        }
        _ => unreachable!("closed forms exist for B, C and BC only"),
    }
    out
}
