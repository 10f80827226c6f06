use mllnet::denm::{check_denm, translate};
use mllnet::dr::check_all_switchings;
use mllnet::format::{parse_structure, to_json, ReadOptions};
use mllnet::linear::{check_linear, LinearOptions};
use mllnet::report::{Reason, Verdict};
use mllnet::rewrite::{algorithm_a, RewriteOptions, Schedule, Start};
use mllnet::ProofStructure;

fn load(text: &str) -> ProofStructure {
    parse_structure(text, ReadOptions::default()).unwrap()
}

fn all() -> [(&'static str, ProofStructure); 4] {
    [
        ("theta0", load(include_str!("fixtures/theta0.json"))),
        ("theta1", load(include_str!("fixtures/theta1.json"))),
        ("theta2", load(include_str!("fixtures/theta2.json"))),
        ("theta3", load(include_str!("fixtures/theta3.json"))),
    ]
}

#[test]
fn every_checker_matches_the_oracle() {
    for (name, ps) in all() {
        let expect = Verdict::from_bool(check_all_switchings(&ps, 20).unwrap());
        assert_eq!(check_denm(&ps).verdict, expect, "{name}");
        assert_eq!(
            check_linear(&ps, LinearOptions::default()).verdict,
            expect,
            "{name}"
        );
        let tree = translate(&ps).unwrap();
        for n in tree.labeled_nodes() {
            for schedule in [Schedule::ElimFirst, Schedule::JumpFirst] {
                let opts = RewriteOptions {
                    start: Start::Node(n),
                    schedule,
                };
                assert_eq!(algorithm_a(&ps, opts).verdict, expect, "{name} from {n}");
            }
            let opts = LinearOptions {
                start: Start::Node(n),
                instrument: true,
                ..LinearOptions::default()
            };
            let r = check_linear(&ps, opts);
            assert_eq!(r.verdict, expect, "{name} from {n}");
            assert!(r.defects.is_empty(), "{name}: {:?}", r.defects);
        }
    }
}

#[test]
fn only_theta1_is_a_net() {
    let yes: Vec<&str> = all()
        .into_iter()
        .filter(|(_, ps)| check_denm(ps).verdict.is_yes())
        .map(|(n, _)| n)
        .collect();
    assert_eq!(yes, ["theta1"]);
}

#[test]
fn theta0_is_consistent_but_cyclic() {
    let [(_, ps), ..] = all();
    let tree = translate(&ps).unwrap();
    assert!(tree.consistent());
    assert!(!tree.acyclic());
    assert!(matches!(check_denm(&ps).reason, Reason::Cyclic(_)));
}

#[test]
fn fixtures_round_trip() {
    for (name, ps) in all() {
        let again = load(&to_json(&ps));
        assert_eq!(to_json(&again), to_json(&ps), "{name}");
    }
}
