mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use liecert::notation::{format_root, parse_root};
use liecert::{ParabolicContext, Root, RootSystem, Series};
use proptest::prelude::*;

#[test]
fn closure_matches_weyl_orbits_and_classification() {
    for (s, r) in systems_up_to(8) {
        let sys = RootSystem::build(s, r).unwrap();
        let got: BTreeSet<Vec<i32>> = sys
            .positive_roots()
            .iter()
            .map(|x| x.coeffs().to_vec())
            .collect();
        assert_eq!(got, orbit_positive(s, r), "{s}{r}");
        assert_eq!(got.len(), expected_positive_count(s, r), "{s}{r}");
    }
}

/// Cartan integers, strings and reflections against the symmetrized form,
/// over all pairs of roots of every system of rank at most `max_rank`.
pub fn weyl_suite(max_rank: usize) {
    for (s, r) in systems_up_to(max_rank) {
        let sys = RootSystem::build(s, r).unwrap();
        let form = Form::new(sys.cartan());
        let roots: Vec<Root> = sys.roots().collect();
        for a in &roots {
            let aa = form.inner(a.coeffs(), a.coeffs());
            for l in &roots {
                let al = form.inner(a.coeffs(), l.coeffs());
                assert_eq!((2 * al) % aa, 0, "{s}{r}: non-integral A({a}, {l})");
                let expected = (2 * al / aa) as i32;
                assert_eq!(
                    sys.cartan_integer(a, l).unwrap(),
                    expected,
                    "{s}{r}: A({a}, {l})"
                );
                if l.ratio_to(a).is_none() {
                    let (p, q) = sys.root_string(a, l).unwrap();
                    assert_eq!(p - q, expected, "{s}{r}: string of {a} through {l}");
                }
                let img = sys.weyl_reflect(a, l).unwrap();
                assert_eq!(sys.weyl_reflect(a, &img).unwrap(), *l);
            }
        }
        for i in 0..r {
            let a = Root::simple(r, i);
            let fixed_line = |x: &Root| x.ratio_to(&a).is_some();
            let before: BTreeSet<Root> = sys
                .positive_roots()
                .iter()
                .filter(|x| !fixed_line(x))
                .cloned()
                .collect();
            let after: BTreeSet<Root> = before
                .iter()
                .map(|x| sys.weyl_reflect(&a, x).unwrap())
                .collect();
            assert_eq!(before, after, "{s}{r}: reflection in {a}");
        }
    }
}

#[test]
fn weyl_suite_up_to_rank_six() {
    weyl_suite(6);
}

#[test]
fn leaf_lemma_holds_for_maximal_parabolics() {
    let mut hits = 0;
    for (s, r) in systems_up_to(8) {
        if r < 2 {
            continue;
        }
        let sys = Arc::new(RootSystem::build(s, r).unwrap());
        for alpha in 0..r {
            let lambda: Vec<usize> = (0..r).filter(|&i| i != alpha).collect();
            let ctx = ParabolicContext::new(sys.clone(), &lambda).unwrap();
            let witnessed = ctx.phi_max().iter().any(|l| {
                let m = l.coeffs()[alpha];
                m >= 1 && ctx.in_lambda_plus(&l.add_scaled(&Root::simple(r, alpha), -m))
            });
            if witnessed {
                hits += 1;
                assert_eq!(
                    degree_in_dynkin(sys.cartan(), alpha),
                    1,
                    "{s}{r} at {alpha}"
                );
                assert!(sys.is_leaf(&Root::simple(r, alpha)).unwrap());
            }
        }
    }
    assert!(hits > 0);
}

#[test]
fn g2_phi_max() {
    let sys = RootSystem::build(Series::G, 2).unwrap();
    let got: BTreeSet<Root> = sys.phi_max().into_iter().collect();
    let want: BTreeSet<Root> = [[1, 1], [2, 1], [3, 1], [3, 2]]
        .iter()
        .map(|c| root(c))
        .collect();
    assert_eq!(got, want);
}

#[test]
fn classical_phi_max_closed_forms() {
    for s in [Series::B, Series::C, Series::BC] {
        for r in 2..=6 {
            let sys = RootSystem::build(s, r).unwrap();
            let got: BTreeSet<Vec<i32>> =
                sys.phi_max().iter().map(|x| x.coeffs().to_vec()).collect();
            assert_eq!(got, classical_phi_max(s, r), "{s}{r}");
        }
    }
}

#[test]
fn json_round_trip_for_all_systems() {
    for (s, r) in systems_up_to(8) {
        let sys = RootSystem::build(s, r).unwrap();
        let text = serde_json::to_string(&sys).unwrap();
        let back: RootSystem = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

fn system_and_root() -> impl Strategy<Value = (Series, usize, Root)> {
    let systems = systems_up_to(6);
    (0..systems.len()).prop_flat_map(move |k| {
        let (s, r) = systems[k];
        let sys = RootSystem::build(s, r).unwrap();
        let roots: Vec<Root> = sys.roots().collect();
        (Just(s), Just(r), proptest::sample::select(roots))
    })
}

proptest! {
    #[test]
    fn notation_round_trips((s, r, x) in system_and_root()) {
        let sys = RootSystem::build(s, r).unwrap();
        prop_assert_eq!(parse_root(&sys, &format_root(&x)).unwrap(), x);
    }

    #[test]
    fn negation_is_a_symmetry((s, r, x) in system_and_root()) {
        let sys = RootSystem::build(s, r).unwrap();
        prop_assert!(sys.is_root(&-&x));
        prop_assert_eq!(x.is_positive(), (-&x).is_negative());
    }
}
