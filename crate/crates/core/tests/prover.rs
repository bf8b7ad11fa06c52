use std::path::PathBuf;

use liecert::holonomy::{clause, AdmissibleOp, BoundednessStatus, Direction, HolonomyDescriptor};
use liecert::prover::{
    self, prove, rule, verify_certificate, Certificate, Derivation, Problem, SearchOptions,
    SweepConfig, TerminalJudgment,
};
use liecert::{Root, Series};

fn r(c: &[i32]) -> Root {
    Root::new(c.to_vec())
}

fn problem(series: Series, rank: usize, lambda: &[usize], er: &[&[i32]]) -> Problem {
    Problem::new(
        series,
        rank,
        lambda.to_vec(),
        er.iter().map(|c| r(c)).collect(),
    )
}

fn at_goal() -> SearchOptions {
    SearchOptions {
        stop_at_goal: true,
        ..SearchOptions::default()
    }
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compares with the stored certificate; `LIECERT_BLESS=1` rewrites it.
fn check_golden(name: &str, cert: &Certificate) {
    let path = golden_path(name);
    let json = cert.to_json();
    if std::env::var_os("LIECERT_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &json).unwrap();
    }
    let stored =
        std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(json, stored, "{name} drifted from the golden certificate");
}

fn goals(tree: &Derivation) -> Vec<Root> {
    tree.leaves()
        .into_iter()
        .map(|l| match l {
            Derivation::Leaf {
                judgment: TerminalJudgment::GoalOutsidePhiMax { root },
                ..
            } => root.clone(),
            other => panic!("unexpected leaf {other:?}"),
        })
        .collect()
}

#[test]
fn golden_c2() {
    let cert = prove(
        &problem(Series::C, 2, &[0], &[&[1, 1], &[2, 1]]),
        &at_goal(),
    )
    .unwrap();
    assert_eq!(cert.tree.ops(), [&AdmissibleOp::Weyl { pivot: r(&[1, 0]) }]);
    assert_eq!(goals(&cert.tree), [r(&[0, 1])]);
    assert!(verify_certificate(&cert).valid);
    check_golden("c2_beta.json", &cert);
}

#[test]
fn golden_b2() {
    let cert = prove(&problem(Series::B, 2, &[0], &[&[1, 2]]), &at_goal()).unwrap();
    assert_eq!(
        cert.tree.ops(),
        [&AdmissibleOp::RestrictToRoot { root: r(&[1, 2]) }]
    );
    let leaves = cert.tree.leaves();
    assert!(matches!(
        leaves[..],
        [Derivation::Leaf {
            judgment: TerminalJudgment::RankOneUnbounded,
            ..
        }]
    ));
    assert!(verify_certificate(&cert).valid);
    check_golden("b2_beta.json", &cert);
}

#[test]
fn golden_g2_short_parabolic() {
    let cert = prove(&problem(Series::G, 2, &[0], &[&[1, 1]]), &at_goal()).unwrap();
    let a = r(&[1, 0]);
    let expected = [
        AdmissibleOp::SignSplit { alpha: a.clone() },
        AdmissibleOp::VerticalSlide {
            alpha: a.clone(),
            direction: Direction::Up,
            target: r(&[0, 1]),
        },
        AdmissibleOp::VerticalSlide {
            alpha: a.clone(),
            direction: Direction::Down,
            target: r(&[2, 1]),
        },
        AdmissibleOp::VerticalSlide {
            alpha: a.clone(),
            direction: Direction::Down,
            target: r(&[3, 1]),
        },
        AdmissibleOp::Weyl { pivot: a },
    ];
    let ops: Vec<AdmissibleOp> = cert.tree.ops().into_iter().cloned().collect();
    assert_eq!(ops, expected);
    assert_eq!(goals(&cert.tree), [r(&[0, 1]), r(&[0, 1])]);
    assert!(verify_certificate(&cert).valid);
    check_golden("g2_alpha.json", &cert);
}

#[test]
fn golden_g2_long_parabolic() {
    for (lambda, file) in [(&[2, 1], "g2_beta.json"), (&[3, 1], "g2_beta_3a_b.json")] {
        let cert = prove(&problem(Series::G, 2, &[1], &[lambda]), &at_goal()).unwrap();
        let ops: Vec<AdmissibleOp> = cert.tree.ops().into_iter().cloned().collect();
        assert_eq!(
            ops,
            [
                AdmissibleOp::LeviSlide {
                    alpha: r(&[1, 0]),
                    targets: vec![r(&[1, 0]), r(&[1, 1])],
                },
                AdmissibleOp::Weyl { pivot: r(&[0, 1]) },
            ]
        );
        assert_eq!(goals(&cert.tree), [r(&[1, 0]), r(&[1, 0])]);
        assert!(verify_certificate(&cert).valid);
        check_golden(file, &cert);
    }
}

#[test]
fn rank_one_is_an_immediate_base_case() {
    for series in [Series::A, Series::BC] {
        let cert = prove(&problem(series, 1, &[], &[&[1]]), &SearchOptions::default()).unwrap();
        assert_eq!(cert.tree.node_count(), 1);
        assert!(matches!(
            cert.tree,
            Derivation::Leaf {
                judgment: TerminalJudgment::RankOneUnbounded,
                ..
            }
        ));
    }
}

#[test]
fn full_mode_recurses_to_rank_one() {
    let cert = prove(
        &problem(Series::C, 2, &[0], &[&[1, 1], &[2, 1]]),
        &SearchOptions::default(),
    )
    .unwrap();
    let kinds: Vec<&str> = cert.tree.ops().iter().map(|o| o.kind()).collect();
    assert_eq!(kinds, ["weyl", "restrict"]);
    assert!(cert.tree.leaves().iter().all(|l| matches!(
        l,
        Derivation::Leaf {
            judgment: TerminalJudgment::RankOneUnbounded,
            ..
        }
    )));
    assert!(verify_certificate(&cert).valid);
    assert!(cert
        .ledger
        .iter()
        .any(|e| e.name == "nonequicontinuous-rank-one"));
}

#[test]
fn certificates_round_trip_byte_identically() {
    let p = problem(Series::F, 4, &[1, 2], &[&[1, 2, 3, 2]]);
    let a = prove(&p, &SearchOptions::default()).unwrap();
    let b = prove(&p, &SearchOptions::default()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let back = Certificate::from_json(&a.to_json()).unwrap();
    assert_eq!(back, a);
    assert!(verify_certificate(&back).valid);
}

fn first_step_mut<'a>(tree: &'a mut Derivation, kind: &str) -> Option<&'a mut Derivation> {
    if matches!(tree, Derivation::Step { op, .. } if op.kind() == kind) {
        return Some(tree);
    }
    match tree {
        Derivation::Step { children, .. } => {
            children.iter_mut().find_map(|c| first_step_mut(c, kind))
        }
        Derivation::Leaf { .. } => None,
    }
}

#[test]
fn tampered_pivot_is_rejected() {
    let mut cert = prove(
        &problem(Series::C, 2, &[0], &[&[1, 1], &[2, 1]]),
        &at_goal(),
    )
    .unwrap();
    if let Some(Derivation::Step { op, .. }) = first_step_mut(&mut cert.tree, "weyl") {
        *op = AdmissibleOp::Weyl { pivot: r(&[0, 1]) };
    }
    let v = verify_certificate(&cert);
    assert!(!v.valid);
    assert_eq!(v.failure.unwrap().clause, clause::PIVOT_NOT_IN_LEVI);
}

#[test]
fn goal_on_maybe_is_rejected() {
    // After the Levi slide, the a+b branch only knows a as Maybe. Claiming
    // the goal there, before the reflection, must fail.
    let mut cert = prove(&problem(Series::G, 2, &[1], &[&[2, 1]]), &at_goal()).unwrap();
    let Derivation::Step { children, .. } = &mut cert.tree else {
        panic!("expected a step")
    };
    let descriptor = children[1].descriptor().clone();
    let d = HolonomyDescriptor::from_doc(&descriptor).unwrap();
    assert_eq!(d.status(&r(&[1, 0])), Some(BoundednessStatus::Maybe));
    children[1] = Derivation::Leaf {
        descriptor,
        judgment: TerminalJudgment::GoalOutsidePhiMax { root: r(&[1, 0]) },
    };
    let v = verify_certificate(&cert);
    assert!(!v.valid);
    assert_eq!(v.failure.unwrap().clause, prover::verify_clause::CERTAINTY);
}

#[test]
fn broken_branch_is_rejected() {
    let mut cert = prove(&problem(Series::G, 2, &[0], &[&[1, 1]]), &at_goal()).unwrap();
    if let Some(Derivation::Step { children, .. }) = first_step_mut(&mut cert.tree, "sign_split") {
        children.pop();
    }
    let v = verify_certificate(&cert);
    assert_eq!(
        v.failure.unwrap().clause,
        prover::verify_clause::BRANCH_COUNT
    );
}

#[test]
fn edited_child_descriptor_is_rejected() {
    let mut cert = prove(&problem(Series::G, 2, &[0], &[&[1, 1]]), &at_goal()).unwrap();
    if let Some(Derivation::Step { children, .. }) = first_step_mut(&mut cert.tree, "sign_split") {
        let doc = match &mut children[0] {
            Derivation::Step { descriptor, .. } | Derivation::Leaf { descriptor, .. } => descriptor,
        };
        doc.signs.clear();
    }
    let v = verify_certificate(&cert);
    assert_eq!(
        v.failure.unwrap().clause,
        prover::verify_clause::DESCRIPTOR_MISMATCH
    );
}

/// The standard parabolic for the doubly-laced classical series: `Λ` all
/// simple roots but the last one.
#[test]
fn playbook_alone_handles_the_classical_doubly_laced_cases() {
    let opts = SearchOptions {
        playbook_only: true,
        ..SearchOptions::default()
    };
    for series in [Series::B, Series::C, Series::BC] {
        for rank in 2..=6 {
            let lambda: Vec<usize> = (0..rank - 1).collect();
            for p in prover::instances(series, rank, 1).unwrap() {
                if p.lambda != lambda {
                    continue;
                }
                let cert =
                    prove(&p, &opts).unwrap_or_else(|e| panic!("{series}{rank} {:?}: {e}", p.er));
                assert!(!cert.tree.uses_rule(rule::FALLBACK));
                assert!(verify_certificate(&cert).valid);
            }
        }
    }
}

fn min_unbounded_degree(doc: &liecert::holonomy::DescriptorDoc) -> i32 {
    doc.status
        .iter()
        .filter(|e| e.status == BoundednessStatus::Unbounded)
        .map(|e| e.root.degree().unwrap())
        .min()
        .unwrap()
}

/// Along every branch, consecutive playbook iterations within one context
/// strictly lower the minimal degree of the certain essential range.
fn check_monotone(node: &Derivation, last: Option<(usize, i32)>) {
    let doc = node.descriptor();
    let rank = doc.status[0].root.rank();
    let mut last = last.filter(|(r, _)| *r == rank);
    if let Derivation::Step { rule: Some(rl), .. } = node {
        let m = min_unbounded_degree(doc);
        if let Some((_, prev)) = last {
            assert!(m < prev, "degree {m} after {prev} at {rl}");
        }
        last = Some((rank, m));
    }
    if let Derivation::Leaf { .. } = node {
        if let Some((_, prev)) = last {
            assert!(min_unbounded_degree(doc) < prev || rank == 1);
        }
    }
    for c in node.children() {
        check_monotone(c, last);
    }
}

#[test]
fn playbook_iterations_lower_the_degree() {
    let mut config = SweepConfig::new(4);
    config.series = Series::ALL.to_vec();
    for series in config.series.clone() {
        for rank in 1..=4 {
            if !series.admits_rank(rank) {
                continue;
            }
            for p in prover::instances(series, rank, 1).unwrap() {
                let cert = prove(&p, &SearchOptions::default()).unwrap();
                check_monotone(&cert.tree, None);
            }
        }
    }
}

#[test]
fn rank_one_sweep_terminates_immediately() {
    let mut config = SweepConfig::new(1);
    config.series = Series::ALL.to_vec();
    let report = prover::sweep(&config).unwrap();
    assert_eq!(report.failures, 0);
    assert!(!report.instances.is_empty());
    assert!(report.instances.iter().all(|i| i.nodes == 1));
}

#[test]
fn g2_sweep_covers_both_parabolics() {
    let mut config = SweepConfig::new(2);
    config.series = vec![Series::G];
    let report = prover::sweep(&config).unwrap();
    assert_eq!(report.failures, 0);
    let lambdas: std::collections::BTreeSet<Vec<usize>> = report
        .instances
        .iter()
        .filter(|i| i.problem.lambda.len() == 1)
        .map(|i| i.problem.lambda.clone())
        .collect();
    assert_eq!(lambdas.len(), 2);
    let long_parabolic = report
        .instances
        .iter()
        .filter(|i| i.problem.lambda == [1])
        .count();
    assert_eq!(long_parabolic, 4);
}

#[test]
fn pair_essential_ranges_also_close() {
    let mut config = SweepConfig::new(3);
    config.er_size_cap = 2;
    let report = prover::sweep(&config).unwrap();
    assert_eq!(report.failures, 0, "{}", report.table());
}
