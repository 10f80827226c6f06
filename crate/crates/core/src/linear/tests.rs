use std::collections::VecDeque;

use proptest::prelude::*;

use super::*;
use crate::denm::check_denm;
use crate::dr::check_all_switchings;
use crate::families::Family;
use crate::generate::{mutate, random_proof};
use crate::rewrite::{algorithm_a, RewriteOptions};
use crate::sequent::SequentProof;
use crate::structure::StructureBuilder;

fn instrumented() -> LinearOptions {
    LinearOptions {
        instrument: true,
        ..LinearOptions::default()
    }
}

fn corpus(count: u64, max_budget: usize) -> Vec<ProofStructure> {
    let mut out = Vec::new();
    for seed in 0..count {
        let net = random_proof(3 + (seed as usize % max_budget), seed).build_net();
        if let Ok(m) = mutate(&net, seed ^ 0xb0b) {
            out.push(m);
        }
        out.push(net);
    }
    out
}

fn tensor_curl() -> ProofStructure {
    let mut b = StructureBuilder::new();
    let (n, p) = b.axiom();
    b.tensor(p, n);
    b.finish().unwrap()
}

#[test]
fn single_axiom_is_accepted_without_work() {
    let r = check_linear(&SequentProof::axiom().build_net(), instrumented());
    assert_eq!(r.verdict, Verdict::Yes);
    assert_eq!(r.counters.eliminations, 0);
    assert_eq!(r.counters.elimination_trials, 0);
    assert_eq!(r.measure[0], (1, 0));
    assert_eq!(r.steps, vec![RewriteStep::Done]);
}

#[test]
fn curl_and_tensor_curl() {
    let r = check_linear(&Family::ParChain.build(1), instrumented());
    assert_eq!(r.verdict, Verdict::Yes);
    assert_eq!(r.counters.eliminations, 1);
    assert!(r.defects.is_empty());
    assert_eq!(
        check_linear(&tensor_curl(), instrumented()).verdict,
        Verdict::No
    );
}

#[test]
fn initial_queues_follow_the_tree() {
    let ps = Family::ParChain.build(2);
    let tree = translate(&ps).unwrap();
    let run = Run::new(
        &tree,
        tree.labeled_nodes().next().unwrap(),
        LinearOptions::default(),
        None,
    );
    let drain = |q: Queue| {
        let mut cells = run.cells.clone();
        let mut q = q;
        std::iter::from_fn(move || cells.pop(&mut q).map(|(v, _)| v)).collect::<Vec<_>>()
    };
    for (id, node) in tree.nodes() {
        if let TreeNode::Par { par, up, down } = node {
            if let Some(d) = down {
                assert!(drain(run.states[d.index()].down).contains(&par.0), "{id}");
            }
            assert!(drain(run.states[up.unwrap().index()].up).contains(&par.0));
        }
    }
    for n in tree.labeled_nodes() {
        let st = &run.states[n.index()];
        let rights: Vec<u32> = tree
            .labels(n)
            .iter()
            .filter_map(|l| matches!(l, PremiseLabel::Right(_)).then_some(l.par().0))
            .collect();
        assert_eq!(drain(st.right), rights);
        assert_eq!(st.sets, [NIL; 4]);
        let labeled: Vec<u32> = tree
            .neighbors(n)
            .into_iter()
            .filter(|&w| tree.node(w).is_some_and(TreeNode::is_labeled))
            .map(|w| w.0)
            .collect();
        assert_eq!(drain(st.labeled), labeled);
    }
}

#[test]
fn agrees_with_reference_and_oracle() {
    let (mut yes, mut no) = (0, 0);
    for ps in corpus(600, 40) {
        let r = check_linear(&ps, instrumented());
        let d = check_denm(&ps);
        assert_eq!(r.verdict, d.verdict, "{:?} vs {:?}", r.reason, d.reason);
        assert!(r.defects.is_empty(), "{:?}", r.defects);
        if let Ok(o) = check_all_switchings(&ps, 16) {
            assert_eq!(r.verdict.is_yes(), o);
        }
        if r.verdict.is_yes() {
            yes += 1;
            assert_eq!(r.counters.eliminations, ps.num_pars() as u64);
        } else {
            no += 1;
        }
    }
    assert!(yes > 300 && no > 300, "yes {yes} no {no}");
}

#[test]
fn measure_strictly_decreases() {
    for ps in corpus(200, 30) {
        let r = check_linear(&ps, instrumented());
        if r.measure.is_empty() {
            continue;
        }
        // the last entry is the halting step, which need not decrease
        let body = &r.measure[..r.measure.len() - 1];
        assert!(body.windows(2).all(|w| w[1] < w[0]), "{:?}", r.measure);
    }
}

#[test]
fn every_start_gives_the_same_verdict() {
    for ps in corpus(120, 20) {
        let Ok(t) = translate(&ps) else {
            continue;
        };
        let expect = check_denm(&ps).verdict;
        for n in t.labeled_nodes() {
            let r = check_linear(
                &ps,
                LinearOptions {
                    start: Start::Node(n),
                    ..instrumented()
                },
            );
            assert_eq!(r.verdict, expect, "start {n}");
            assert!(r.defects.is_empty(), "start {n}: {:?}", r.defects);
        }
    }
}

#[test]
fn early_cycle_detection_keeps_verdicts() {
    let mut early = 0;
    for ps in corpus(400, 30) {
        let plain = check_linear(&ps, LinearOptions::default());
        let r = check_linear(
            &ps,
            LinearOptions {
                early_cycle_detection: true,
                ..LinearOptions::default()
            },
        );
        assert_eq!(r.verdict, plain.verdict);
        if matches!(r.reason, Reason::RepeatedJump(_)) {
            early += 1;
            assert!(r.steps.len() <= plain.steps.len());
        }
    }
    assert!(early > 0);
}

#[test]
fn two_trials_per_par_without_revival() {
    for ps in corpus(300, 40) {
        let r = check_linear(&ps, LinearOptions::default());
        if r.verdict.is_yes() && r.counters.revivals == 0 {
            assert_eq!(r.counters.elimination_trials, 2 * ps.num_pars() as u64);
        }
    }
}

#[test]
fn figure19_family_costs_four_trials_per_level() {
    for k in 1..=20 {
        let r = check_linear(&Family::Figure19.build(k), instrumented());
        assert_eq!(r.verdict, Verdict::Yes);
        assert_eq!(r.counters.elimination_trials, 4 * k as u64);
        assert!(r.defects.is_empty());
    }
}

#[test]
fn figure21_family_needs_revival() {
    for k in 1..=6 {
        let ps = Family::Figure21.build(k);
        let r = check_linear(&ps, instrumented());
        assert_eq!(r.verdict, Verdict::Yes);
        assert!(r.counters.revivals >= 1);
        assert!(r.defects.is_empty());
        let off = check_linear(
            &ps,
            LinearOptions {
                disable_revival: true,
                ..LinearOptions::default()
            },
        );
        assert!(
            matches!(off.reason, Reason::Deadlock { .. }),
            "{:?}",
            off.reason
        );
    }
}

#[test]
fn agrees_with_rewriting() {
    for ps in corpus(200, 30) {
        let a = algorithm_a(&ps, RewriteOptions::default());
        assert_eq!(
            check_linear(&ps, LinearOptions::default()).verdict,
            a.verdict
        );
    }
}

#[test]
fn trace_events_match_report() {
    let (r, ev) = trace_linear(&Family::Figure21.build(1), LinearOptions::default());
    assert_eq!(ev.last(), Some(&Event::Accept));
    let revives = ev
        .iter()
        .filter(|e| matches!(e, Event::Revive { .. }))
        .count();
    assert_eq!(revives as u64, r.counters.revivals);
    let elims = ev
        .iter()
        .filter(|e| matches!(e, Event::Eliminate { .. }))
        .count();
    assert_eq!(elims as u64, r.counters.eliminations);
    assert_eq!(Event::Fail(Element::Right(ParId(2))).to_string(), "fail r3");
    assert_eq!(
        Event::Jump {
            par: ParId(0),
            to: NodeId(2)
        }
        .to_string(),
        "jump ⅋1 to n2"
    );
}

#[test]
fn total_ops_stay_linear() {
    for f in Family::ALL {
        for k in [64, 512] {
            let ps = f.build(k);
            let r = check_linear(&ps, LinearOptions::default());
            assert_eq!(r.verdict, Verdict::Yes);
            assert!(
                r.counters.total_ops() <= 16 * ps.num_links() as u64,
                "{f} {k}"
            );
        }
    }
}

#[test]
fn dsu_links_classes() {
    let mut d = Dsu::with_len(4);
    let r = d.link(0, 1);
    let r = d.link(r, 2);
    assert_eq!(d.find(2), r);
    assert_eq!(d.find(0), d.find(1));
    assert_ne!(d.find(3), r);
    let x = d.push();
    assert_eq!(d.find(x), x);
}

proptest! {
    #[test]
    fn queues_behave_like_deques(ops in prop::collection::vec((0u8..4, 0usize..3, any::<u16>()), 0..200)) {
        let mut cells = Cells::default();
        let mut qs = [Queue::EMPTY; 3];
        let mut model: [VecDeque<u32>; 3] = Default::default();
        for (op, i, v) in ops {
            let j = (i + 1) % 3;
            match op {
                0 | 1 => {
                    cells.push(&mut qs[i], v as u32, false);
                    model[i].push_back(v as u32);
                }
                2 => {
                    prop_assert_eq!(cells.pop(&mut qs[i]).map(|x| x.0), model[i].pop_front());
                }
                _ => {
                    let other = std::mem::replace(&mut qs[j], Queue::EMPTY);
                    cells.append(&mut qs[i], other);
                    let moved: Vec<u32> = model[j].drain(..).collect();
                    model[i].extend(moved);
                }
            }
            for k in 0..3 {
                prop_assert_eq!(qs[k].is_empty(), model[k].is_empty());
            }
        }
    }
}
