mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::systems_up_to;
use liecert::{ParabolicContext, Root, RootSystem};

fn subsets(rank: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1 << rank) - 1).map(move |mask| (0..rank).filter(|i| mask & (1 << i) != 0).collect())
}

#[test]
fn levi_reflections_permute_the_nilradical() {
    for (s, r) in systems_up_to(6) {
        let sys = Arc::new(RootSystem::build(s, r).unwrap());
        for lambda in subsets(r) {
            let ctx = ParabolicContext::new(sys.clone(), &lambda).unwrap();
            let nil: BTreeSet<Root> = ctx.nilradical().iter().cloned().collect();
            for a in ctx.lambda_plus() {
                let image: BTreeSet<Root> = nil
                    .iter()
                    .map(|x| sys.weyl_reflect(a, x).unwrap())
                    .collect();
                assert_eq!(image, nil, "{s}{r} Λ={lambda:?} reflection in {a}");
            }
        }
    }
}

#[test]
fn nilradical_is_an_ideal() {
    for (s, r) in systems_up_to(4) {
        let sys = Arc::new(RootSystem::build(s, r).unwrap());
        for lambda in subsets(r) {
            let ctx = ParabolicContext::new(sys.clone(), &lambda).unwrap();
            for n in ctx.nilradical() {
                for x in sys.positive_roots() {
                    let sum = n + x;
                    if sys.is_root(&sum) {
                        assert!(ctx.in_nilradical(&sum), "{s}{r} Λ={lambda:?}: {n} + {x}");
                    }
                }
            }
        }
    }
}

#[test]
fn restrictions_land_on_positive_supported_roots() {
    for (s, r) in systems_up_to(5) {
        let sys = Arc::new(RootSystem::build(s, r).unwrap());
        let ctx = ParabolicContext::new(sys.clone(), &[]).unwrap();
        for psi in subsets(r).filter(|p| !p.is_empty()) {
            let Ok((sub, map)) = ctx.restrict(&psi) else {
                continue;
            };
            for l in sub.phi_max() {
                let up = map.embed(l);
                assert!(sys.is_root(&up));
                for (i, &c) in up.coeffs().iter().enumerate() {
                    assert_eq!(c > 0, psi.contains(&i), "{s}{r} Ψ={psi:?}: {up}");
                }
            }
        }
    }
}
