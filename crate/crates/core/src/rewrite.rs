//! Rewriting labeled trees with par elimination, union and local jump, and
//! the checker built on it.
//!
//! Rules always fire at the active node:
//!
//! * par elimination removes a par node hanging above the active node by
//!   its up port when the active node carries both of its labels,
//! * union merges an adjacent labeled node into the active node,
//! * local jump moves activity from below a par node to the node carrying
//!   its right label.
//!
//! A run accepts when it gets stuck on a single isolated node carrying
//! every label, and rejects on a second jump over the same par link.

use thiserror::Error;

use crate::denm::{
    full_label_set, translate, DeNMTree, NodeId, PremiseLabel, TranslateError, TreeNode,
};
use crate::report::{CheckReport, Counters, Reason, RewriteStep, Verdict};
use crate::structure::{ParId, ProofStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("rule does not apply: {0}")]
    PreconditionViolated(&'static str),
    #[error("no node carries the right label of {0}")]
    MissingRightLabel(ParId),
    #[error("{0} was already the target of a local jump")]
    RepeatedJump(ParId),
}

/// Order in which enabled rules are preferred at the active node. Ties go
/// to the lowest node id.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// Elimination, then union, then local jump. Every up-attached par node
    /// is tested before a union, which is the naive quadratic behavior.
    #[default]
    ElimFirst,
    /// Local jump, then union, then elimination; the priority of the
    /// queue-based checker.
    JumpFirst,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Start {
    /// The lowest-numbered labeled node.
    #[default]
    First,
    Node(NodeId),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RewriteOptions {
    pub start: Start,
    pub schedule: Schedule,
}

/// A tree plus its active node and the par links jumped over so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveTree {
    tree: DeNMTree,
    active: NodeId,
    jumped: Vec<bool>,
}

/// Result of one scheduled step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Applied(RewriteStep),
    /// No rule applies.
    Stuck,
    /// The only enabled rule is a second jump over this par link.
    RepeatedJump(ParId),
}

impl ActiveTree {
    pub fn new(tree: DeNMTree, active: NodeId) -> Result<Self, RewriteError> {
        if !tree.node(active).is_some_and(TreeNode::is_labeled) {
            return Err(RewriteError::PreconditionViolated(
                "active node must be a labeled node",
            ));
        }
        let jumped = vec![false; tree.num_pars()];
        Ok(ActiveTree {
            tree,
            active,
            jumped,
        })
    }

    pub fn tree(&self) -> &DeNMTree {
        &self.tree
    }

    pub fn active(&self) -> NodeId {
        self.active
    }

    pub fn jumped(&self, par: ParId) -> bool {
        self.jumped[par.index()]
    }

    fn active_neighbors(&self) -> Vec<NodeId> {
        let mut v = self.tree.neighbors(self.active);
        v.sort();
        v
    }

    fn has_labels(&self, par: ParId) -> bool {
        let labels = self.tree.labels(self.active);
        labels.contains(&PremiseLabel::Left(par)) && labels.contains(&PremiseLabel::Right(par))
    }

    fn par_ports(&self, par: ParId) -> Option<(NodeId, Option<NodeId>, Option<NodeId>)> {
        let pn = self.tree.par_node(par)?;
        match self.tree.node(pn) {
            Some(TreeNode::Par { up, down, .. }) => Some((pn, *up, *down)),
            _ => None,
        }
    }

    pub fn par_eliminate(&mut self, par: ParId) -> Result<(), RewriteError> {
        let (pn, up, down) = self
            .par_ports(par)
            .ok_or(RewriteError::PreconditionViolated("par node not present"))?;
        if up != Some(self.active) {
            return Err(RewriteError::PreconditionViolated(
                "par node is not above the active node",
            ));
        }
        if !self.has_labels(par) {
            return Err(RewriteError::PreconditionViolated(
                "active node lacks a label of the par link",
            ));
        }
        let a = self.active;
        self.tree.remove(pn);
        if let Some(TreeNode::Labeled { neighbors, .. }) = self.tree.node_mut(a) {
            neighbors.retain(|&x| x != pn);
            if let Some(d) = down {
                neighbors.push(d);
            }
        }
        if let Some(d) = down {
            replace_neighbor(&mut self.tree, d, pn, a);
        }
        Ok(())
    }

    pub fn union(&mut self, other: NodeId) -> Result<(), RewriteError> {
        let a = self.active;
        if other == a || !self.tree.neighbors(a).contains(&other) {
            return Err(RewriteError::PreconditionViolated(
                "node is not adjacent to the active node",
            ));
        }
        if !self.tree.node(other).is_some_and(TreeNode::is_labeled) {
            return Err(RewriteError::PreconditionViolated(
                "only labeled nodes can be merged",
            ));
        }
        let Some(TreeNode::Labeled { labels, neighbors }) = self.tree.remove(other) else {
            unreachable!("checked above")
        };
        for &w in &neighbors {
            if w != a {
                replace_neighbor(&mut self.tree, w, other, a);
            }
        }
        if let Some(TreeNode::Labeled {
            labels: mine,
            neighbors: adj,
        }) = self.tree.node_mut(a)
        {
            mine.extend(labels);
            mine.sort();
            mine.dedup();
            adj.retain(|&x| x != other);
            adj.extend(neighbors.into_iter().filter(|&w| w != a));
        }
        Ok(())
    }

    pub fn local_jump(&mut self, par: ParId) -> Result<(), RewriteError> {
        let (_, _, down) = self
            .par_ports(par)
            .ok_or(RewriteError::PreconditionViolated("par node not present"))?;
        if down != Some(self.active) {
            return Err(RewriteError::PreconditionViolated(
                "par node is not below the active node",
            ));
        }
        if self.jumped[par.index()] {
            return Err(RewriteError::RepeatedJump(par));
        }
        let target = self
            .tree
            .home(PremiseLabel::Right(par))
            .ok_or(RewriteError::MissingRightLabel(par))?;
        self.jumped[par.index()] = true;
        self.active = target;
        Ok(())
    }

    /// Applies the preferred enabled rule. Elimination candidates tested
    /// along the way are added to `trials`.
    pub fn step(
        &mut self,
        schedule: Schedule,
        trials: &mut u64,
    ) -> Result<StepOutcome, RewriteError> {
        let neighbors = self.active_neighbors();
        let a = self.active;
        let mut elim = None;
        let mut merge = None;
        let mut jump = None;
        let scan_elims = |this: &Self, trials: &mut u64| {
            for &w in &neighbors {
                if let Some(TreeNode::Par {
                    par, up: Some(u), ..
                }) = this.tree.node(w)
                {
                    if *u == a {
                        *trials += 1;
                        if this.has_labels(*par) {
                            return Some(*par);
                        }
                    }
                }
            }
            None
        };
        for &w in &neighbors {
            match self.tree.node(w) {
                Some(TreeNode::Labeled { .. }) if merge.is_none() => merge = Some(w),
                Some(TreeNode::Par {
                    par, down: Some(d), ..
                }) if *d == a && jump.is_none() => jump = Some(*par),
                _ => {}
            }
        }
        let choice = match schedule {
            Schedule::ElimFirst => {
                elim = scan_elims(self, trials);
                elim.map(RewriteStep::ParElim)
                    .or(merge.map(RewriteStep::Union))
                    .or(jump.map(RewriteStep::LocalJump))
            }
            Schedule::JumpFirst => {
                if jump.is_none() && merge.is_none() {
                    elim = scan_elims(self, trials);
                }
                jump.map(RewriteStep::LocalJump)
                    .or(merge.map(RewriteStep::Union))
                    .or(elim.map(RewriteStep::ParElim))
            }
        };
        let Some(step) = choice else {
            return Ok(StepOutcome::Stuck);
        };
        match step {
            RewriteStep::ParElim(p) => self.par_eliminate(p)?,
            RewriteStep::Union(n) => self.union(n)?,
            RewriteStep::LocalJump(p) => match self.local_jump(p) {
                Err(RewriteError::RepeatedJump(p)) => return Ok(StepOutcome::RepeatedJump(p)),
                r => r?,
            },
            RewriteStep::Stuck | RewriteStep::Done => unreachable!("not a rule"),
        }
        Ok(StepOutcome::Applied(step))
    }
}

fn replace_neighbor(tree: &mut DeNMTree, at: NodeId, old: NodeId, new: NodeId) {
    match tree.node_mut(at) {
        Some(TreeNode::Labeled { neighbors, .. }) => {
            for x in neighbors.iter_mut() {
                if *x == old {
                    *x = new;
                }
            }
        }
        Some(TreeNode::Par { up, down, .. }) => {
            if *up == Some(old) {
                *up = Some(new);
            }
            if *down == Some(old) {
                *down = Some(new);
            }
        }
        None => {}
    }
}

/// Rewrites a translated structure until no rule applies.
pub fn algorithm_a(ps: &ProofStructure, opts: RewriteOptions) -> CheckReport {
    let tree = match translate(ps) {
        Ok(t) => t,
        Err(TranslateError::NotATree(w)) => return CheckReport::no(Reason::NotATree(w)),
        Err(TranslateError::Undefined(u)) => return CheckReport::no(Reason::Undefined(u)),
    };
    let start = match opts.start {
        Start::First => tree
            .labeled_nodes()
            .next()
            .expect("a tree has a labeled node"),
        Start::Node(n) => n,
    };
    let mut run = match ActiveTree::new(tree, start) {
        Ok(r) => r,
        Err(_) => panic!("start node {start} is not a labeled node"),
    };
    let full: Vec<PremiseLabel> = full_label_set(ps).into_iter().collect();
    let mut counters = Counters {
        peak_nodes: run.tree.num_nodes() as u64,
        ..Counters::default()
    };
    let mut steps = Vec::new();
    let reason = loop {
        let outcome = run
            .step(opts.schedule, &mut counters.elimination_trials)
            .expect("scheduled rules satisfy their preconditions");
        match outcome {
            StepOutcome::Applied(step) => {
                match step {
                    RewriteStep::ParElim(_) => counters.eliminations += 1,
                    RewriteStep::Union(_) => counters.unions += 1,
                    RewriteStep::LocalJump(_) => counters.jumps += 1,
                    _ => {}
                }
                steps.push(step);
            }
            StepOutcome::RepeatedJump(p) => break Reason::RepeatedJump(p),
            StepOutcome::Stuck => {
                let nodes = run.tree.num_nodes();
                let a = run.active;
                let done = nodes == 1
                    && run.tree.node(a).map(TreeNode::degree) == Some(0)
                    && run.tree.labels(a) == full.as_slice();
                if done {
                    steps.push(RewriteStep::Done);
                    break Reason::Accepted;
                }
                steps.push(RewriteStep::Stuck);
                break Reason::Stuck { nodes };
            }
        }
    };
    let verdict = if reason == Reason::Accepted {
        Verdict::Yes
    } else {
        Verdict::No
    };
    let mut report = CheckReport::new(verdict, reason);
    report.counters = counters;
    report.steps = steps;
    report
}
