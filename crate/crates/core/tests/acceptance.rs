//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when
//! any criterion fails. Run with `cargo test -p mllnet --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use mllnet::bench::{bench_instance, loglog_slope, BenchRecord};
use mllnet::denm::{check_denm, full_label_set, translate, DeNMTree, PremiseLabel};
use mllnet::difftest::{difftest, DiffConfig};
use mllnet::dr::check_all_switchings;
use mllnet::families::Family;
use mllnet::format::{parse_structure, ReadOptions};
use mllnet::generate::{mutate, random_proof};
use mllnet::linear::{check_linear, LinearOptions};
use mllnet::report::{Defect, Reason, RewriteStep, Verdict};
use mllnet::rewrite::{algorithm_a, ActiveTree, RewriteOptions, Schedule, Start, StepOutcome};
use mllnet::{ParId, ProofStructure};

// Pinned thresholds.
const AGREEMENT_INSTANCES: usize = 1000;
const AGREEMENT_MIN_LINKS: usize = 5;
const AGREEMENT_MAX_LINKS: usize = 200;
const AGREEMENT_SECONDS: f64 = 120.0;
const ORACLE_PAR_BUDGET: usize = 20;
const FIG19_K_MAX: usize = 64;
const QUADRATIC_C: f64 = 1.0;
const SCALING_EXPONENTS: std::ops::RangeInclusive<u32> = 8..=15;
const MAX_SLOPE: f64 = 1.15;
const MAX_TIME_PER_LINK_RATIO: f64 = 3.0;
const TIMING_REPS: usize = 5;
const PRESERVATION_STRUCTURES: usize = 200;
const PRESERVATION_MAX_LINKS: usize = 40;
const PRESERVATION_CYCLIC: usize = 20;
const INVARIANCE_STRUCTURES: usize = 100;
const INVARIANCE_MAX_LINKS: usize = 30;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fixture(name: &str) -> ProofStructure {
    let text = match name {
        "theta0" => include_str!("fixtures/theta0.json"),
        "theta1" => include_str!("fixtures/theta1.json"),
        "theta2" => include_str!("fixtures/theta2.json"),
        "theta3" => include_str!("fixtures/theta3.json"),
        _ => unreachable!(),
    };
    parse_structure(text, ReadOptions::default()).expect("fixture parses")
}

fn instrumented() -> LinearOptions {
    LinearOptions {
        instrument: true,
        ..LinearOptions::default()
    }
}

/// Criterion 1; also returns the defects of its instrumented linear runs.
fn agreement() -> (Outcome, Vec<Defect>) {
    let t = Instant::now();
    let cfg = DiffConfig {
        // a few nets are too small to mutate
        count: AGREEMENT_INSTANCES + 50,
        min_links: AGREEMENT_MIN_LINKS,
        max_links: AGREEMENT_MAX_LINKS,
        seed: 2024,
        par_budget: ORACLE_PAR_BUDGET,
        instrument: true,
        dump_dir: None,
    };
    let s = difftest(&cfg).expect("no dump directory, no io");
    let secs = t.elapsed().as_secs_f64();
    let pass = s.disagreements.is_empty()
        && s.nets >= AGREEMENT_INSTANCES
        && s.mutants >= AGREEMENT_INSTANCES
        && s.min_links >= AGREEMENT_MIN_LINKS
        && s.max_links <= AGREEMENT_MAX_LINKS
        && secs < AGREEMENT_SECONDS;
    let detail = format!(
        "{} nets + {} mutants, links {}..{}, oracle on {}, {} disagreements, {:.1}s",
        s.nets,
        s.mutants,
        s.min_links,
        s.max_links,
        s.oracle_runs,
        s.disagreements.len(),
        secs
    );
    (
        outcome(pass, detail),
        s.defects.into_iter().map(|(_, d)| d).collect(),
    )
}

/// Criterion 2; also returns the defects of its instrumented linear runs.
fn figure19_walkthrough() -> (Outcome, Vec<Defect>) {
    let mut defects = Vec::new();
    let mut off = Vec::new();
    let mut min_ratio = f64::INFINITY;
    for k in 1..=FIG19_K_MAX {
        let ps = Family::Figure19.build(k);
        let b = check_linear(&ps, instrumented());
        defects.extend(b.defects);
        if b.verdict != Verdict::Yes || b.counters.elimination_trials != 4 * k as u64 {
            off.push((k, b.counters.elimination_trials));
        }
        let a = algorithm_a(&ps, RewriteOptions::default());
        min_ratio = min_ratio.min(a.counters.elimination_trials as f64 / (k * k) as f64);
    }
    let pass = off.is_empty() && min_ratio >= QUADRATIC_C;
    let detail = format!(
        "linear trials = 4k for k in 1..={FIG19_K_MAX} except {off:?}; naive trials / k^2 >= {min_ratio:.2}"
    );
    (outcome(pass, detail), defects)
}

fn linearity() -> Outcome {
    let ks: Vec<usize> = SCALING_EXPONENTS.map(|e| 1usize << e).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for f in Family::ALL {
        let recs: Vec<BenchRecord> = ks
            .iter()
            .map(|&k| bench_instance(f, k, TIMING_REPS).expect("family members are nets"))
            .collect();
        let pts: Vec<(f64, f64)> = recs
            .iter()
            .map(|r| (r.links as f64, r.total_ops as f64))
            .collect();
        let slope = loglog_slope(&pts);
        let per_link = |k: usize| {
            let r = recs.iter().find(|r| r.k == k).expect("k swept");
            r.time_ns as f64 / r.links as f64
        };
        let ratio = per_link(1 << 15) / per_link(1 << 10);
        pass &= slope <= MAX_SLOPE && ratio <= MAX_TIME_PER_LINK_RATIO;
        parts.push(format!("{f} slope {slope:.3} time ratio {ratio:.2}"));
    }
    outcome(pass, parts.join("; "))
}

fn measure(defects: &[Defect]) -> Outcome {
    let violations = defects
        .iter()
        .filter(|d| matches!(d, Defect::MeasureNotDecreasing { .. }))
        .count();
    let other = defects.len() - violations;
    outcome(
        violations == 0 && other == 0,
        format!("{violations} measure violations, {other} other defects"),
    )
}

fn corpus(count: usize, max_links: usize, seed: u64) -> Vec<ProofStructure> {
    let mut out = Vec::new();
    let mut s = seed;
    while out.len() < count {
        s += 1;
        let net = random_proof(2 + (s as usize % (max_links / 2 - 1)), s).build_net();
        if net.num_links() > max_links {
            continue;
        }
        if s.is_multiple_of(2) {
            out.push(net);
        } else if let Ok(m) = mutate(&net, s) {
            if translate(&m).is_ok() {
                out.push(m);
            }
        }
    }
    out
}

/// Mutants that are consistent but cyclic; rare in the plain corpus.
fn cyclic_corpus(count: usize, max_links: usize, seed: u64) -> Vec<ProofStructure> {
    let mut out = vec![fixture("theta0")];
    let mut s = seed;
    while out.len() < count {
        s += 1;
        let net = random_proof(2 + (s as usize % (max_links / 2 - 1)), s).build_net();
        if let Ok(m) = mutate(&net, s) {
            if m.num_links() <= max_links && matches!(check_denm(&m).reason, Reason::Cyclic(_)) {
                out.push(m);
            }
        }
    }
    out
}

fn tree_state(t: &DeNMTree) -> (bool, bool) {
    (t.consistent(), t.acyclic())
}

fn preservation() -> Outcome {
    let mut steps = 0;
    let mut violations = Vec::new();
    let mut seen = [0usize; 3];
    let mut structures = corpus(PRESERVATION_STRUCTURES, PRESERVATION_MAX_LINKS, 7000);
    structures.extend(cyclic_corpus(
        PRESERVATION_CYCLIC,
        PRESERVATION_MAX_LINKS,
        7000,
    ));
    for (i, ps) in structures.iter().enumerate() {
        let Ok(tree) = translate(ps) else {
            continue;
        };
        for schedule in [Schedule::ElimFirst, Schedule::JumpFirst] {
            let start = tree.labeled_nodes().next().expect("labeled node");
            let mut run = ActiveTree::new(tree.clone(), start).expect("labeled start");
            let mut trials = 0;
            loop {
                let (cons, acyc) = tree_state(run.tree());
                seen[usize::from(!cons) + 2 * usize::from(cons && !acyc)] += 1;
                match run
                    .step(schedule, &mut trials)
                    .expect("scheduled rules apply")
                {
                    StepOutcome::Applied(_) => {}
                    _ => break,
                }
                steps += 1;
                let (c2, a2) = tree_state(run.tree());
                let ok_a = !(cons && acyc) || (c2 && a2);
                let ok_b = cons || !c2;
                let ok_c = !(cons && !acyc) || !a2;
                if !(ok_a && ok_b && ok_c) {
                    violations.push(i);
                }
            }
        }
    }
    // every clause must have been exercised
    outcome(
        violations.is_empty() && seen.iter().all(|&n| n > 0),
        format!(
            "{} structures, {steps} steps, states (ok, inconsistent, cyclic) {seen:?}, {} violations",
            structures.len(),
            violations.len()
        ),
    )
}

fn start_invariance() -> Outcome {
    let mut runs = 0;
    let mut bad = 0;
    for ps in corpus(INVARIANCE_STRUCTURES, INVARIANCE_MAX_LINKS, 9000) {
        let Ok(tree) = translate(&ps) else {
            continue;
        };
        let expect = check_denm(&ps).verdict;
        for n in tree.labeled_nodes() {
            for schedule in [Schedule::ElimFirst, Schedule::JumpFirst] {
                let r = algorithm_a(
                    &ps,
                    RewriteOptions {
                        start: Start::Node(n),
                        schedule,
                    },
                );
                runs += 1;
                bad += usize::from(r.verdict != expect);
            }
        }
    }
    outcome(
        bad == 0,
        format!("{runs} runs over every start node, {bad} differing verdicts"),
    )
}

fn revival() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for k in 1..=8 {
        let ps = Family::Figure21.build(k);
        let on = check_linear(&ps, LinearOptions::default());
        let off = check_linear(
            &ps,
            LinearOptions {
                disable_revival: true,
                ..LinearOptions::default()
            },
        );
        let ok = on.verdict == Verdict::Yes
            && on.counters.revivals > 0
            && matches!(off.reason, Reason::Deadlock { .. });
        pass &= ok;
        if k == 1 || !ok {
            parts.push(format!(
                "k={k}: {} with {} revival(s), without revival {}",
                on.verdict, on.counters.revivals, off.reason
            ));
        }
    }
    parts.insert(
        0,
        format!("k in 1..=8 all {}", if pass { "ok" } else { "checked" }),
    );
    outcome(pass, parts.join("; "))
}

fn fixtures() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    // the first fixture reduces to one node carrying all eight labels
    let t1 = fixture("theta1");
    let tree = translate(&t1).expect("net translates");
    let start = tree.labeled_nodes().next().expect("labeled node");
    let mut run = ActiveTree::new(tree, start).expect("labeled start");
    let mut trials = 0;
    while let StepOutcome::Applied(_) = run
        .step(Schedule::ElimFirst, &mut trials)
        .expect("rules apply")
    {}
    let last = run.active();
    let labels = run.tree().labels(last).to_vec();
    let full: Vec<PremiseLabel> = full_label_set(&t1).into_iter().collect();
    let ok1 = run.tree().num_nodes() == 1 && labels.len() == 8 && labels == full;
    pass &= ok1;
    notes.push(format!("theta1 terminal labels {}", labels.len()));

    // the second is rejected by every checker from every start
    let t2 = fixture("theta2");
    let tree = translate(&t2).expect("tree translates");
    let ok2 = check_all_switchings(&t2, ORACLE_PAR_BUDGET) == Ok(false)
        && check_denm(&t2).verdict == Verdict::No
        && check_linear(&t2, LinearOptions::default()).verdict == Verdict::No
        && tree.labeled_nodes().all(|n| {
            algorithm_a(
                &t2,
                RewriteOptions {
                    start: Start::Node(n),
                    ..RewriteOptions::default()
                },
            )
            .verdict
                == Verdict::No
        });
    pass &= ok2;
    notes.push(format!("theta2 rejected {ok2}"));

    // the third: from the node labeled {r2}, one jump, two unions, deadlock
    let t3 = fixture("theta3");
    let tree = translate(&t3).expect("tree translates");
    let r2 = tree
        .labeled_nodes()
        .find(|&n| tree.labels(n) == [PremiseLabel::Right(ParId(1))]);
    let ok3 = match r2 {
        Some(n) => {
            let b = check_linear(
                &t3,
                LinearOptions {
                    start: Start::Node(n),
                    ..LinearOptions::default()
                },
            );
            notes.push(format!(
                "theta3 trace {}",
                b.steps
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            matches!(
                b.steps.as_slice(),
                [
                    RewriteStep::LocalJump(ParId(0)),
                    RewriteStep::Union(_),
                    RewriteStep::Union(_),
                    RewriteStep::Stuck
                ]
            ) && matches!(b.reason, Reason::Deadlock { .. })
                && check_all_switchings(&t3, ORACLE_PAR_BUDGET) == Ok(false)
        }
        None => false,
    };
    pass &= ok3;
    outcome(pass, notes.join("; "))
}

fn report(n: usize, name: &str, o: &Outcome) -> bool {
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!("criterion {n} {tag} {name}: {}", o.detail);
    o.pass
}

fn main() -> ExitCode {
    let (c1, mut defects) = agreement();
    let mut passed = vec![report(1, "cross-checker agreement", &c1)];
    let (c2, d2) = figure19_walkthrough();
    passed.push(report(2, "figure19 walkthrough", &c2));
    defects.extend(d2);
    passed.push(report(3, "linearity", &linearity()));
    passed.push(report(4, "termination measure", &measure(&defects)));
    passed.push(report(5, "preservation", &preservation()));
    passed.push(report(6, "start-node invariance", &start_invariance()));
    passed.push(report(7, "revival necessity", &revival()));
    passed.push(report(8, "fixtures", &fixtures()));
    let failed = passed.iter().filter(|&&p| !p).count();
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
