use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use mllnet::bench::{run_bench, write_csv};
use mllnet::denm::{check_denm, translate, NodeId};
use mllnet::difftest::{difftest, DiffConfig};
use mllnet::dr::{check_all_switchings, DEFAULT_PAR_BUDGET};
use mllnet::families::Family;
use mllnet::format::{parse_structure, to_json, ReadOptions};
use mllnet::generate::random_proof;
use mllnet::linear::{check_linear, trace_linear, LinearOptions};
use mllnet::report::{CheckReport, Reason};
use mllnet::rewrite::{algorithm_a, RewriteOptions, Schedule, Start};
use mllnet::ProofStructure;

#[derive(Parser)]
#[command(
    name = "mllnet",
    version,
    about = "Check, generate and benchmark MLL proof structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algo {
    /// All switchings (exponential)
    Dr,
    /// Extreme-left tree, consistency and dependency acyclicity
    Denm,
    /// Tree rewriting
    A,
    /// Queue strategy (linear)
    B,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TraceAlgo {
    A,
    B,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a structure file is a proof net. Exit 0 = yes, 1 = no, 2 = bad input.
    Check {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "b")]
        algo: Algo,
        /// Print counters as key=value lines.
        #[arg(long)]
        stats: bool,
        /// Accept any atom name and erase it.
        #[arg(long)]
        erase_atoms: bool,
        /// Largest number of par links the switching oracle accepts.
        #[arg(long, default_value_t = DEFAULT_PAR_BUDGET)]
        par_budget: usize,
    },
    /// Write a family member (or a random net) as a structure file.
    Gen {
        /// parChain, tensorFan, curlMix, figure19-analog, figure21-analog or random.
        family: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Only used by `random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the linear checker on families for k = k-min, 2 k-min, ..., k-max and write CSV.
    Bench {
        /// Comma-separated family names; all when absent.
        #[arg(long, value_delimiter = ',')]
        families: Vec<String>,
        #[arg(long, default_value_t = 256)]
        k_min: usize,
        #[arg(long, default_value_t = 32768)]
        k_max: usize,
        /// Timed repetitions per instance (the fastest is kept).
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the translated tree and the steps of a run.
    Trace {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "b")]
        algo: TraceAlgo,
        /// Starting labeled node id; the lowest when absent.
        #[arg(long)]
        start: Option<u32>,
        /// Rule priority for `a`: jump, union, elimination.
        #[arg(long)]
        jump_first: bool,
        #[arg(long)]
        erase_atoms: bool,
    },
    /// Compare all checkers on random nets and their mutants.
    Difftest {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 200)]
        max_links: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Directory for disagreeing instances.
        #[arg(long, default_value = "difftest-failures")]
        dump_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check {
            path,
            algo,
            stats,
            erase_atoms,
            par_budget,
        } => check(&path, algo, stats, erase_atoms, par_budget),
        Command::Gen {
            family,
            k,
            seed,
            out,
        } => gen(&family, k, seed, out.as_deref()).map(|_| ExitCode::SUCCESS),
        Command::Bench {
            families,
            k_min,
            k_max,
            reps,
            out,
        } => bench(&families, k_min, k_max, reps, out.as_deref()).map(|_| ExitCode::SUCCESS),
        Command::Trace {
            path,
            algo,
            start,
            jump_first,
            erase_atoms,
        } => trace(&path, algo, start, jump_first, erase_atoms),
        Command::Difftest {
            count,
            max_links,
            seed,
            dump_dir,
        } => run_difftest(count, max_links, seed, dump_dir),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path, erase_atoms: bool) -> Result<ProofStructure> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let opts = ReadOptions {
        erase_atom_names: erase_atoms,
    };
    parse_structure(&text, opts).map_err(|e| match e.line() {
        Some(line) => anyhow::anyhow!("{}:{line}: {e}", path.display()),
        None => anyhow::anyhow!("{}: {e}", path.display()),
    })
}

fn verdict_code(report: &CheckReport) -> ExitCode {
    if report.verdict.is_yes() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn check(
    path: &Path,
    algo: Algo,
    stats: bool,
    erase_atoms: bool,
    par_budget: usize,
) -> Result<ExitCode> {
    let ps = load(path, erase_atoms)?;
    let report = match algo {
        Algo::Dr => {
            let ok = check_all_switchings(&ps, par_budget)?;
            if ok {
                CheckReport::yes()
            } else {
                CheckReport::no(Reason::SwitchingNotATree)
            }
        }
        Algo::Denm => check_denm(&ps),
        Algo::A => algorithm_a(&ps, RewriteOptions::default()),
        Algo::B => check_linear(&ps, LinearOptions::default()),
    };
    let mut out = io::stdout().lock();
    writeln!(out, "{}", report.verdict)?;
    if !report.verdict.is_yes() {
        writeln!(out, "reason: {}", report.reason)?;
    }
    if stats {
        write!(out, "{}", report.counters.to_kv())?;
    }
    Ok(verdict_code(&report))
}

fn gen(family: &str, k: usize, seed: u64, out: Option<&Path>) -> Result<()> {
    let ps = if family == "random" {
        random_proof(k.max(1), seed).build_net()
    } else {
        family.parse::<Family>()?.build(k)
    };
    let json = to_json(&ps);
    match out {
        Some(p) => fs::write(p, json).with_context(|| format!("cannot write {}", p.display()))?,
        None => print!("{json}"),
    }
    eprintln!("links: {}", ps.num_links());
    Ok(())
}

fn bench(
    names: &[String],
    k_min: usize,
    k_max: usize,
    reps: usize,
    out: Option<&Path>,
) -> Result<()> {
    let families: Vec<Family> = if names.is_empty() {
        Family::ALL.to_vec()
    } else {
        names.iter().map(|n| n.parse()).collect::<Result<_, _>>()?
    };
    if k_min == 0 || k_min > k_max {
        bail!("need 0 < k-min <= k-max");
    }
    let ks: Vec<usize> = std::iter::successors(Some(k_min), |&k| Some(k * 2))
        .take_while(|&k| k <= k_max)
        .collect();
    let records = run_bench(&families, &ks, reps)?;
    match out {
        Some(p) => write_csv(
            &records,
            fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )?,
        None => write_csv(&records, io::stdout().lock())?,
    }
    Ok(())
}

fn trace(
    path: &Path,
    algo: TraceAlgo,
    start: Option<u32>,
    jump_first: bool,
    erase_atoms: bool,
) -> Result<ExitCode> {
    let ps = load(path, erase_atoms)?;
    let mut out = io::stdout().lock();
    let tree = match translate(&ps) {
        Ok(t) => t,
        Err(e) => {
            writeln!(out, "no\nreason: {e}")?;
            return Ok(ExitCode::from(1));
        }
    };
    write!(out, "{}", tree.to_text())?;
    let start = match start {
        Some(n) if tree.node(NodeId(n)).is_some_and(|t| t.is_labeled()) => Start::Node(NodeId(n)),
        Some(n) => bail!("n{n} is not a labeled node"),
        None => Start::First,
    };
    let report = match algo {
        TraceAlgo::A => {
            let schedule = if jump_first {
                Schedule::JumpFirst
            } else {
                Schedule::ElimFirst
            };
            let r = algorithm_a(&ps, RewriteOptions { start, schedule });
            for s in &r.steps {
                writeln!(out, "{s}")?;
            }
            r
        }
        TraceAlgo::B => {
            let opts = LinearOptions {
                start,
                instrument: true,
                ..LinearOptions::default()
            };
            let (r, events) = trace_linear(&ps, opts);
            writeln!(out, "measure {:?}", r.measure[0])?;
            for (e, m) in events.iter().zip(&r.measure[1..]) {
                writeln!(out, "{e}  measure {m:?}")?;
            }
            for d in &r.defects {
                writeln!(out, "defect: {d:?}")?;
            }
            r
        }
    };
    writeln!(out, "{}", report.verdict)?;
    if !report.verdict.is_yes() {
        writeln!(out, "reason: {}", report.reason)?;
    }
    Ok(verdict_code(&report))
}

fn run_difftest(count: usize, max_links: usize, seed: u64, dump_dir: PathBuf) -> Result<ExitCode> {
    let cfg = DiffConfig {
        count,
        max_links,
        seed,
        dump_dir: Some(dump_dir),
        ..DiffConfig::default()
    };
    let s = difftest(&cfg)?;
    println!(
        "instances {} (nets {}, mutants {}), links {}..{}, oracle runs {}, yes {}, no {}",
        s.nets + s.mutants,
        s.nets,
        s.mutants,
        s.min_links,
        s.max_links,
        s.oracle_runs,
        s.yes,
        s.no
    );
    for d in &s.disagreements {
        println!("disagreement at {} ({:?})", d.index, d.verdicts);
        if let Some(p) = &d.dumped {
            println!("  written to {}", p.display());
        }
    }
    for (i, d) in &s.defects {
        println!("defect at {i}: {d:?}");
    }
    println!("disagreements {}", s.disagreements.len());
    Ok(if s.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
