//! Verdicts, failure reasons and instrumentation shared by the checkers.

use std::fmt;

use serde::Serialize;

use crate::denm::{NodeId, NotATree, Undefined};
use crate::structure::ParId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
        })
    }
}

/// Why a checker answered the way it did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    Accepted,
    /// Some switching graph is not a tree (all-switchings oracle).
    SwitchingNotATree,
    /// The extreme-left switching graph is not a tree.
    NotATree(NotATree),
    /// The translation into a labeled tree is undefined.
    Undefined(Undefined),
    Inconsistent(ParId),
    /// A cycle of the par dependency digraph.
    Cyclic(Vec<ParId>),
    /// Rewriting attempted a second local jump over this par link.
    RepeatedJump(ParId),
    /// No rule applies and the tree is not a single fully labeled node.
    Stuck {
        nodes: usize,
    },
    /// Queue strategy ran out of work on a tree of this many nodes.
    Deadlock {
        nodes: usize,
    },
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Accepted => f.write_str("accepted"),
            Reason::SwitchingNotATree => f.write_str("some switching graph is not a tree"),
            Reason::NotATree(w) => write!(f, "extreme-left graph is not a tree: {w}"),
            Reason::Undefined(u) => write!(f, "translation undefined: {u}"),
            Reason::Inconsistent(p) => write!(f, "{p} is inconsistent"),
            Reason::Cyclic(c) => {
                f.write_str("dependency cycle")?;
                for p in c {
                    write!(f, " {p}")?;
                }
                Ok(())
            }
            Reason::RepeatedJump(p) => write!(f, "second local jump over {p}"),
            Reason::Stuck { nodes } => write!(f, "stuck with {nodes} nodes"),
            Reason::Deadlock { nodes } => write!(f, "deadlock with {nodes} nodes"),
        }
    }
}

/// One rewrite in a run, as recorded in traces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RewriteStep {
    ParElim(ParId),
    /// The node merged into the active node.
    Union(NodeId),
    LocalJump(ParId),
    Stuck,
    Done,
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewriteStep::ParElim(p) => write!(f, "elim {p}"),
            RewriteStep::Union(n) => write!(f, "union {n}"),
            RewriteStep::LocalJump(p) => write!(f, "jump {p}"),
            RewriteStep::Stuck => f.write_str("stuck"),
            RewriteStep::Done => f.write_str("done"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub eliminations: u64,
    pub unions: u64,
    pub jumps: u64,
    pub elimination_trials: u64,
    pub revivals: u64,
    pub peak_nodes: u64,
    pub queue_ops: u64,
    pub find_ops: u64,
    pub union_ops: u64,
}

impl Counters {
    /// Queue operations plus union-find operations.
    pub fn total_ops(&self) -> u64 {
        self.queue_ops + self.find_ops + self.union_ops
    }

    /// `key=value` lines, one per counter.
    pub fn to_kv(&self) -> String {
        let rows = [
            ("eliminations", self.eliminations),
            ("unions", self.unions),
            ("jumps", self.jumps),
            ("elimination_trials", self.elimination_trials),
            ("revivals", self.revivals),
            ("peak_nodes", self.peak_nodes),
            ("queue_ops", self.queue_ops),
            ("find_ops", self.find_ops),
            ("union_ops", self.union_ops),
            ("total_ops", self.total_ops()),
        ];
        rows.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

/// Problems an instrumented run found in its own bookkeeping. Any entry
/// here is a bug or a counterexample to a claimed invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    /// The termination measure did not strictly decrease at this step.
    MeasureNotDecreasing {
        step: u64,
        before: (u64, u64),
        after: (u64, u64),
    },
    /// A live par link was neither pending in an up queue nor had its right
    /// label pending in a right queue.
    InvariantBroken { step: u64, par: ParId },
    /// An element was revived more than once.
    RepeatedRevival { par: ParId, right_label: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub reason: Reason,
    pub counters: Counters,
    /// Rewrite steps, when the checker rewrites.
    pub steps: Vec<RewriteStep>,
    /// `(m, n)` termination measure after each step of instrumented runs.
    pub measure: Vec<(u64, u64)>,
    pub defects: Vec<Defect>,
}

impl CheckReport {
    pub fn new(verdict: Verdict, reason: Reason) -> Self {
        CheckReport {
            verdict,
            reason,
            counters: Counters::default(),
            steps: Vec::new(),
            measure: Vec::new(),
            defects: Vec::new(),
        }
    }

    pub fn yes() -> Self {
        Self::new(Verdict::Yes, Reason::Accepted)
    }

    pub fn no(reason: Reason) -> Self {
        Self::new(Verdict::No, reason)
    }
}
