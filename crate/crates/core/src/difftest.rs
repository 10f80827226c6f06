//! Differential testing: all checkers on random nets and their mutants.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::denm::check_denm;
use crate::dr::check_all_switchings;
use crate::format::to_json;
use crate::generate::{mutate, random_proof};
use crate::linear::{check_linear, LinearOptions};
use crate::report::{Defect, Verdict};
use crate::rewrite::{algorithm_a, RewriteOptions};
use crate::structure::ProofStructure;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffConfig {
    /// Nets to generate; each also yields one mutant.
    pub count: usize,
    pub min_links: usize,
    pub max_links: usize,
    pub seed: u64,
    /// The switching oracle is skipped above this many par links.
    pub par_budget: usize,
    /// Check the measure and run invariant of every linear run.
    pub instrument: bool,
    /// Where disagreeing instances are written.
    pub dump_dir: Option<PathBuf>,
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig {
            count: 1000,
            min_links: 5,
            max_links: 200,
            seed: 42,
            par_budget: crate::dr::DEFAULT_PAR_BUDGET,
            instrument: true,
            dump_dir: None,
        }
    }
}

/// Verdicts on one instance, in the order oracle, reference, rewriting,
/// linear. The oracle entry is `None` when skipped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdicts {
    pub oracle: Option<Verdict>,
    pub denm: Verdict,
    pub rewrite: Verdict,
    pub linear: Verdict,
}

impl Verdicts {
    pub fn agree(&self) -> bool {
        self.oracle.is_none_or(|o| o == self.denm)
            && self.denm == self.rewrite
            && self.rewrite == self.linear
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub index: usize,
    pub mutant: bool,
    pub verdicts: Verdicts,
    pub dumped: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffSummary {
    pub nets: usize,
    pub mutants: usize,
    pub oracle_runs: usize,
    pub yes: usize,
    pub no: usize,
    pub min_links: usize,
    pub max_links: usize,
    pub disagreements: Vec<Disagreement>,
    /// Defects reported by instrumented linear runs.
    pub defects: Vec<(usize, Defect)>,
}

impl DiffSummary {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.defects.is_empty()
    }
}

/// Runs every checker on one structure.
pub fn verdicts(
    ps: &ProofStructure,
    par_budget: usize,
    linear: LinearOptions,
) -> (Verdicts, Vec<Defect>) {
    let oracle = check_all_switchings(ps, par_budget)
        .ok()
        .map(Verdict::from_bool);
    let b = check_linear(ps, linear);
    let v = Verdicts {
        oracle,
        denm: check_denm(ps).verdict,
        rewrite: algorithm_a(ps, RewriteOptions::default()).verdict,
        linear: b.verdict,
    };
    (v, b.defects)
}

/// Generates `count` nets and their mutants and compares all checkers.
pub fn difftest(cfg: &DiffConfig) -> io::Result<DiffSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let lo = cfg.min_links.max(1);
    let hi = (cfg.max_links / 2).max(lo);
    let opts = LinearOptions {
        instrument: cfg.instrument,
        ..LinearOptions::default()
    };
    let mut sum = DiffSummary {
        min_links: usize::MAX,
        ..DiffSummary::default()
    };
    for i in 0..cfg.count {
        let budget = rng.gen_range(lo..=hi);
        let net = random_proof(budget, rng.gen()).build_net();
        let mutant = mutate(&net, rng.gen()).ok();
        for (ps, is_mutant) in std::iter::once((net, false)).chain(mutant.map(|m| (m, true))) {
            if is_mutant {
                sum.mutants += 1;
            } else {
                sum.nets += 1;
            }
            sum.min_links = sum.min_links.min(ps.num_links());
            sum.max_links = sum.max_links.max(ps.num_links());
            let (v, defects) = verdicts(&ps, cfg.par_budget, opts);
            sum.oracle_runs += usize::from(v.oracle.is_some());
            if v.denm.is_yes() {
                sum.yes += 1;
            } else {
                sum.no += 1;
            }
            sum.defects.extend(defects.into_iter().map(|d| (i, d)));
            if !v.agree() {
                let dumped = match &cfg.dump_dir {
                    Some(dir) => Some(dump(dir, i, is_mutant, &ps)?),
                    None => None,
                };
                sum.disagreements.push(Disagreement {
                    index: i,
                    mutant: is_mutant,
                    verdicts: v,
                    dumped,
                });
            }
        }
    }
    if sum.min_links == usize::MAX {
        sum.min_links = 0;
    }
    Ok(sum)
}

fn dump(dir: &Path, index: usize, mutant: bool, ps: &ProofStructure) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let kind = if mutant { "mutant" } else { "net" };
    let path = dir.join(format!("disagreement-{index}-{kind}.json"));
    fs::write(&path, to_json(ps))?;
    Ok(path)
}
