//! The queue-driven strategy over labeled trees.
//!
//! Every labeled node owns four queues (pars below it, adjacent labeled
//! nodes, right labels to try, pars above it to try) and four union-find
//! partitions (right labels and pars already tried here, and the same two
//! accumulated along local jumps). Unions concatenate queues and union
//! partitions in constant time, so each par is tried a bounded number of
//! times and the run is linear up to the inverse-Ackermann factor of the
//! union-find.
//!
//! Queues are singly linked cells in one arena. Partition members are
//! insertion tokens: re-inserting an element mints a fresh token, and
//! membership asks whether the element's latest token lies in the
//! partition.

use std::fmt;

use crate::denm::{translate, DeNMTree, NodeId, PremiseLabel, TranslateError, TreeNode};
use crate::report::{CheckReport, Counters, Defect, Reason, RewriteStep, Verdict};
use crate::rewrite::Start;
use crate::structure::{ParId, ProofStructure};

const NIL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LinearOptions {
    pub start: Start,
    /// Skip the revival branch; tried elements are only ever moved to the
    /// tried sets. Nets that need revival then deadlock.
    pub disable_revival: bool,
    /// Reject as soon as a live par link that was already jumped over sits
    /// below the active node again.
    pub early_cycle_detection: bool,
    /// Record the termination measure and check the run invariant after
    /// every step. Quadratic; meant for tests.
    pub instrument: bool,
}

/// Something tried for elimination: a par link attached above the active
/// node, or the right premise label of a par link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Up(ParId),
    Right(ParId),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Up(p) => write!(f, "{p}"),
            Element::Right(p) => write!(f, "{}", PremiseLabel::Right(*p)),
        }
    }
}

/// One step of a run, for traces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    Jump {
        par: ParId,
        to: NodeId,
    },
    Union {
        absorbed: NodeId,
    },
    Eliminate {
        par: ParId,
        by: Element,
    },
    /// The trial failed and the element went to the tried sets.
    Fail(Element),
    /// The trial failed and the matching half was sent back to the queue of
    /// the node where it had been tried.
    Revive {
        tried: Element,
        revived: Element,
        into: NodeId,
    },
    /// A queue entry for an eliminated par link was dropped.
    Drop(Element),
    Accept,
    Deadlock,
    RepeatedJump(ParId),
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Jump { par, to } => write!(f, "jump {par} to {to}"),
            Event::Union { absorbed } => write!(f, "union {absorbed}"),
            Event::Eliminate { par, by } => write!(f, "elim {par} on {by}"),
            Event::Fail(e) => write!(f, "fail {e}"),
            Event::Revive {
                tried,
                revived,
                into,
            } => {
                write!(f, "fail {tried}, revive {revived} into {into}")
            }
            Event::Drop(e) => write!(f, "drop {e}"),
            Event::Accept => f.write_str("yes"),
            Event::Deadlock => f.write_str("deadlock"),
            Event::RepeatedJump(p) => write!(f, "second jump over {p}"),
        }
    }
}

/// Union by rank with path halving. Operation counts go to the caller.
#[derive(Clone, Debug, Default)]
struct Dsu {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl Dsu {
    fn with_len(n: usize) -> Self {
        Dsu {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    fn push(&mut self) -> u32 {
        let x = self.parent.len() as u32;
        self.parent.push(x);
        self.rank.push(0);
        x
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Joins the classes of two roots and returns the new root.
    fn link(&mut self, a: u32, b: u32) -> u32 {
        if a == b {
            return a;
        }
        let (ra, rb) = (self.rank[a as usize], self.rank[b as usize]);
        if ra < rb {
            self.parent[a as usize] = b;
            b
        } else {
            self.parent[b as usize] = a;
            if ra == rb {
                self.rank[a as usize] += 1;
            }
            a
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Queue {
    head: u32,
    tail: u32,
}

impl Queue {
    const EMPTY: Queue = Queue {
        head: NIL,
        tail: NIL,
    };

    fn is_empty(&self) -> bool {
        self.head == NIL
    }
}

/// Arena of queue cells.
#[derive(Clone, Debug, Default)]
struct Cells {
    val: Vec<u32>,
    revived: Vec<bool>,
    next: Vec<u32>,
}

impl Cells {
    fn push(&mut self, q: &mut Queue, val: u32, revived: bool) {
        let c = self.val.len() as u32;
        self.val.push(val);
        self.revived.push(revived);
        self.next.push(NIL);
        if q.tail == NIL {
            q.head = c;
        } else {
            self.next[q.tail as usize] = c;
        }
        q.tail = c;
    }

    fn pop(&mut self, q: &mut Queue) -> Option<(u32, bool)> {
        if q.head == NIL {
            return None;
        }
        let c = q.head as usize;
        q.head = self.next[c];
        if q.head == NIL {
            q.tail = NIL;
        }
        Some((self.val[c], self.revived[c]))
    }

    fn append(&mut self, q: &mut Queue, other: Queue) {
        if other.head == NIL {
            return;
        }
        if q.tail == NIL {
            *q = other;
        } else {
            self.next[q.tail as usize] = other.head;
            q.tail = other.tail;
        }
    }
}

// partition kinds
const S_UP: usize = 0;
const S_RIGHT: usize = 1;
const SU_UP: usize = 2;
const SU_RIGHT: usize = 3;

#[derive(Clone, Copy, Debug)]
struct NodeState {
    down: Queue,
    labeled: Queue,
    right: Queue,
    up: Queue,
    /// Par links jumped over from this node; only kept for early cycle
    /// detection.
    jumped_out: Queue,
    /// One token of each partition, or `NIL` when empty.
    sets: [u32; 4],
}

impl NodeState {
    const EMPTY: NodeState = NodeState {
        down: Queue::EMPTY,
        labeled: Queue::EMPTY,
        right: Queue::EMPTY,
        up: Queue::EMPTY,
        jumped_out: Queue::EMPTY,
        sets: [NIL; 4],
    };
}

enum Flow {
    Continue,
    Halt(Reason),
}

struct Run<'e> {
    opts: LinearOptions,
    num_pars: usize,
    par_down: Vec<u32>,
    right_home: Vec<u32>,
    /// Merge map over node ids; `live[root]` is the node integrating the class.
    merge: Dsu,
    live: Vec<u32>,
    states: Vec<NodeState>,
    cells: Cells,
    tokens: Dsu,
    token_origin: Vec<u32>,
    /// Latest token of each par link, per partition kind.
    latest: [Vec<u32>; 4],
    alive: Vec<bool>,
    jumped: Vec<bool>,
    pending_up: Vec<u32>,
    pending_right: Vec<u32>,
    revivals_up: Vec<u32>,
    revivals_right: Vec<u32>,
    live_nodes: u64,
    unjumped: u64,
    // pending initial and revived entries of the up and right queues
    m3: u64,
    m4: u64,
    n1: u64,
    n2: u64,
    active: u32,
    counters: Counters,
    steps: Vec<RewriteStep>,
    defects: Vec<Defect>,
    events: Option<&'e mut Vec<Event>>,
}

impl<'e> Run<'e> {
    fn new(
        tree: &DeNMTree,
        start: NodeId,
        opts: LinearOptions,
        events: Option<&'e mut Vec<Event>>,
    ) -> Self {
        let cap = tree.capacity();
        let np = tree.num_pars();
        let mut par_down = vec![NIL; np];
        let mut par_up = vec![NIL; np];
        let mut right_home = vec![NIL; np];
        let mut states = vec![NodeState::EMPTY; cap];
        let mut cells = Cells::default();
        let mut counters = Counters {
            peak_nodes: tree.num_nodes() as u64,
            ..Counters::default()
        };
        let mut pending_right = vec![0; np];
        let mut pending_up = vec![0; np];
        let mut m4 = 0;
        for (id, node) in tree.nodes() {
            match node {
                TreeNode::Labeled { labels, neighbors } => {
                    let st = &mut states[id.index()];
                    for &w in neighbors {
                        if tree.node(w).is_some_and(TreeNode::is_labeled) {
                            cells.push(&mut st.labeled, w.0, false);
                            counters.queue_ops += 1;
                        }
                    }
                    for &l in labels {
                        if let PremiseLabel::Right(p) = l {
                            right_home[p.index()] = id.0;
                            cells.push(&mut st.right, p.0, false);
                            counters.queue_ops += 1;
                            pending_right[p.index()] += 1;
                            m4 += 1;
                        }
                    }
                }
                TreeNode::Par { par, up, down } => {
                    par_up[par.index()] = up.map_or(NIL, |n| n.0);
                    par_down[par.index()] = down.map_or(NIL, |n| n.0);
                }
            }
        }
        let mut m3 = 0;
        for p in 0..np {
            if par_down[p] != NIL {
                cells.push(&mut states[par_down[p] as usize].down, p as u32, false);
                counters.queue_ops += 1;
            }
            if par_up[p] != NIL {
                cells.push(&mut states[par_up[p] as usize].up, p as u32, false);
                counters.queue_ops += 1;
                pending_up[p] += 1;
                m3 += 1;
            }
        }
        Run {
            opts,
            num_pars: np,
            par_down,
            right_home,
            merge: Dsu::with_len(cap),
            live: (0..cap as u32).collect(),
            states,
            cells,
            tokens: Dsu::default(),
            token_origin: Vec::new(),
            latest: std::array::from_fn(|_| vec![NIL; np]),
            alive: vec![true; np],
            jumped: vec![false; np],
            pending_up,
            pending_right,
            revivals_up: vec![0; np],
            revivals_right: vec![0; np],
            live_nodes: tree.num_nodes() as u64,
            unjumped: np as u64,
            m3,
            m4,
            n1: 0,
            n2: 0,
            active: start.0,
            counters,
            steps: Vec::new(),
            defects: Vec::new(),
            events,
        }
    }

    fn event(&mut self, e: Event) {
        if let Some(ev) = self.events.as_deref_mut() {
            ev.push(e);
        }
    }

    fn measure(&self) -> (u64, u64) {
        (
            self.live_nodes + self.unjumped + self.m3 + self.m4,
            self.n1 + self.n2,
        )
    }

    fn resolve(&mut self, n: u32) -> u32 {
        self.counters.find_ops += 1;
        let r = self.merge.find(n);
        self.live[r as usize]
    }

    fn st(&mut self, n: u32) -> &mut NodeState {
        &mut self.states[n as usize]
    }

    fn pop(&mut self, n: u32, pick: fn(&mut NodeState) -> &mut Queue) -> Option<(u32, bool)> {
        let mut q = *pick(&mut self.states[n as usize]);
        let r = self.cells.pop(&mut q);
        *pick(&mut self.states[n as usize]) = q;
        if r.is_some() {
            self.counters.queue_ops += 1;
        }
        r
    }

    fn push(&mut self, n: u32, pick: fn(&mut NodeState) -> &mut Queue, val: u32, revived: bool) {
        let mut q = *pick(&mut self.states[n as usize]);
        self.cells.push(&mut q, val, revived);
        *pick(&mut self.states[n as usize]) = q;
        self.counters.queue_ops += 1;
    }

    /// Union of two partitions given by tokens (either may be `NIL`).
    fn join(&mut self, a: u32, b: u32) -> u32 {
        match (a, b) {
            (NIL, x) | (x, NIL) => x,
            _ => {
                self.counters.find_ops += 2;
                let (ra, rb) = (self.tokens.find(a), self.tokens.find(b));
                self.counters.union_ops += 1;
                self.tokens.link(ra, rb)
            }
        }
    }

    /// Inserts par link `p` into partition `kind` of the active node.
    fn insert(&mut self, kind: usize, p: u32) {
        let t = self.tokens.push();
        self.token_origin.push(self.active);
        self.latest[kind][p as usize] = t;
        let a = self.active;
        let s = self.st(a).sets[kind];
        let j = self.join(s, t);
        self.st(a).sets[kind] = j;
    }

    /// Whether the latest token of `p` lies in partition `kind` of the
    /// active node; returns that token.
    fn member(&mut self, kind: usize, p: u32) -> Option<u32> {
        let t = self.latest[kind][p as usize];
        let s = self.states[self.active as usize].sets[kind];
        if t == NIL || s == NIL {
            return None;
        }
        self.counters.find_ops += 2;
        (self.tokens.find(t) == self.tokens.find(s)).then_some(t)
    }

    fn run(&mut self) -> Reason {
        loop {
            if let Flow::Halt(reason) = self.step() {
                return reason;
            }
        }
    }

    /// Like `run`, recording the measure after each step and checking that
    /// it decreases and that every live par link is still pending somewhere.
    fn run_recording(&mut self, measure: &mut Vec<(u64, u64)>) -> Reason {
        let mut before = self.measure();
        measure.push(before);
        self.check_invariant(0);
        let mut step = 0u64;
        loop {
            let flow = self.step();
            step += 1;
            let after = self.measure();
            measure.push(after);
            match flow {
                Flow::Continue => {
                    if after >= before {
                        self.defects.push(Defect::MeasureNotDecreasing {
                            step,
                            before,
                            after,
                        });
                    }
                    self.check_invariant(step);
                }
                Flow::Halt(reason) => return reason,
            }
            before = after;
        }
    }

    fn check_invariant(&mut self, step: u64) {
        for p in 0..self.num_pars {
            if self.alive[p] && self.pending_up[p] == 0 && self.pending_right[p] == 0 {
                self.defects.push(Defect::InvariantBroken {
                    step,
                    par: ParId(p as u32),
                });
            }
        }
    }

    fn step(&mut self) -> Flow {
        let a = self.active;
        // pars below the active node: local jump
        while let Some((p, _)) = self.pop(a, |s| &mut s.down) {
            if !self.alive[p as usize] {
                continue;
            }
            let to = self.resolve(self.right_home[p as usize]);
            self.jumped[p as usize] = true;
            self.unjumped -= 1;
            let moved = self.states[a as usize].sets;
            for kind in [SU_UP, SU_RIGHT] {
                let j = self.join(self.states[to as usize].sets[kind], moved[kind]);
                self.st(to).sets[kind] = j;
                if to != a {
                    self.st(a).sets[kind] = NIL;
                }
            }
            if self.opts.early_cycle_detection {
                self.push(a, |s| &mut s.jumped_out, p, false);
            }
            self.active = to;
            self.counters.jumps += 1;
            self.steps.push(RewriteStep::LocalJump(ParId(p)));
            self.event(Event::Jump {
                par: ParId(p),
                to: NodeId(to),
            });
            if let Some(q) = self.rejump(to) {
                return Flow::Halt(Reason::RepeatedJump(q));
            }
            return Flow::Continue;
        }
        // adjacent labeled nodes: union
        while let Some((n, _)) = self.pop(a, |s| &mut s.labeled) {
            let b = self.resolve(n);
            if b == a {
                continue;
            }
            self.absorb(b);
            self.counters.unions += 1;
            self.steps.push(RewriteStep::Union(NodeId(b)));
            self.event(Event::Union {
                absorbed: NodeId(b),
            });
            if let Some(q) = self.rejump(a) {
                return Flow::Halt(Reason::RepeatedJump(q));
            }
            return Flow::Continue;
        }
        if self.live_nodes == 1 {
            self.steps.push(RewriteStep::Done);
            self.event(Event::Accept);
            return Flow::Halt(Reason::Accepted);
        }
        if let Some((p, revived)) = self.pop(a, |s| &mut s.right) {
            self.pending_right[p as usize] -= 1;
            if revived {
                self.n2 -= 1;
            } else {
                self.m4 -= 1;
            }
            self.try_element(Element::Right(ParId(p)));
            return Flow::Continue;
        }
        if let Some((p, revived)) = self.pop(a, |s| &mut s.up) {
            self.pending_up[p as usize] -= 1;
            if revived {
                self.n1 -= 1;
            } else {
                self.m3 -= 1;
            }
            self.try_element(Element::Up(ParId(p)));
            return Flow::Continue;
        }
        self.steps.push(RewriteStep::Stuck);
        self.event(Event::Deadlock);
        Flow::Halt(Reason::Deadlock {
            nodes: self.live_nodes as usize,
        })
    }

    /// Trial of an element dequeued at the active node.
    fn try_element(&mut self, e: Element) {
        let (p, mine, partner_tried, partner_merged) = match e {
            Element::Right(p) => (p, (S_RIGHT, SU_RIGHT), S_UP, SU_UP),
            Element::Up(p) => (p, (S_UP, SU_UP), S_RIGHT, SU_RIGHT),
        };
        let i = p.0;
        if !self.alive[p.index()] {
            self.event(Event::Drop(e));
            return;
        }
        self.counters.elimination_trials += 1;
        if self.member(partner_tried, i).is_some() {
            self.eliminate(p, e);
            return;
        }
        let revive_at = if self.opts.disable_revival {
            None
        } else {
            self.member(partner_merged, i)
        };
        self.insert(mine.0, i);
        self.insert(mine.1, i);
        let Some(token) = revive_at else {
            self.event(Event::Fail(e));
            return;
        };
        let into = self.resolve(self.token_origin[token as usize]);
        self.counters.revivals += 1;
        let revived = match e {
            Element::Right(_) => {
                self.push(into, |s| &mut s.up, i, true);
                self.pending_up[p.index()] += 1;
                self.n1 += 1;
                self.revivals_up[p.index()] += 1;
                if self.revivals_up[p.index()] == 2 {
                    self.defects.push(Defect::RepeatedRevival {
                        par: p,
                        right_label: false,
                    });
                }
                Element::Up(p)
            }
            Element::Up(_) => {
                self.push(into, |s| &mut s.right, i, true);
                self.pending_right[p.index()] += 1;
                self.n2 += 1;
                self.revivals_right[p.index()] += 1;
                if self.revivals_right[p.index()] == 2 {
                    self.defects.push(Defect::RepeatedRevival {
                        par: p,
                        right_label: true,
                    });
                }
                Element::Right(p)
            }
        };
        self.event(Event::Revive {
            tried: e,
            revived,
            into: NodeId(into),
        });
    }

    fn eliminate(&mut self, p: ParId, by: Element) {
        self.alive[p.index()] = false;
        self.live_nodes -= 1;
        if !self.jumped[p.index()] {
            self.unjumped -= 1;
        }
        let d = self.par_down[p.index()];
        if d != NIL {
            let a = self.active;
            self.push(a, |s| &mut s.labeled, d, false);
        }
        self.counters.eliminations += 1;
        self.steps.push(RewriteStep::ParElim(p));
        self.event(Event::Eliminate { par: p, by });
    }

    /// Merges live node `b` into the active node.
    fn absorb(&mut self, b: u32) {
        let a = self.active;
        self.counters.find_ops += 2;
        let (ra, rb) = (self.merge.find(a), self.merge.find(b));
        self.counters.union_ops += 1;
        let r = self.merge.link(ra, rb);
        self.live[r as usize] = a;
        let other = std::mem::replace(&mut self.states[b as usize], NodeState::EMPTY);
        let mut mine = self.states[a as usize];
        for (q, o) in [
            (&mut mine.down, other.down),
            (&mut mine.labeled, other.labeled),
            (&mut mine.right, other.right),
            (&mut mine.up, other.up),
            (&mut mine.jumped_out, other.jumped_out),
        ] {
            if !o.is_empty() {
                self.cells.append(q, o);
                self.counters.queue_ops += 1;
            }
        }
        for kind in 0..4 {
            mine.sets[kind] = self.join(mine.sets[kind], other.sets[kind]);
        }
        self.states[a as usize] = mine;
        self.live_nodes -= 1;
    }

    /// With early cycle detection, a live par link already jumped over from
    /// a node now integrated into `n`. Dead entries are dropped for good.
    fn rejump(&mut self, n: u32) -> Option<ParId> {
        if !self.opts.early_cycle_detection {
            return None;
        }
        let mut q = self.states[n as usize].jumped_out;
        let found = loop {
            if q.head == NIL {
                break None;
            }
            let p = self.cells.val[q.head as usize];
            if self.alive[p as usize] {
                break Some(ParId(p));
            }
            self.cells.pop(&mut q);
            self.counters.queue_ops += 1;
        };
        self.states[n as usize].jumped_out = q;
        if let Some(p) = found {
            self.event(Event::RepeatedJump(p));
        }
        found
    }
}

fn run_linear(
    ps: &ProofStructure,
    opts: LinearOptions,
    events: Option<&mut Vec<Event>>,
) -> CheckReport {
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
        Start::Node(n) => {
            assert!(
                tree.node(n).is_some_and(TreeNode::is_labeled),
                "start node {n} is not a labeled node"
            );
            n
        }
    };
    let mut run = Run::new(&tree, start, opts, events);
    let mut measure = Vec::new();
    let reason = if opts.instrument {
        run.run_recording(&mut measure)
    } else {
        run.run()
    };
    let verdict = Verdict::from_bool(reason == Reason::Accepted);
    CheckReport {
        verdict,
        reason,
        counters: run.counters,
        steps: run.steps,
        measure,
        defects: run.defects,
    }
}

/// Runs the linear strategy on a structure.
pub fn check_linear(ps: &ProofStructure, opts: LinearOptions) -> CheckReport {
    run_linear(ps, opts, None)
}

/// Like [`check_linear`], also returning every step of the run.
pub fn trace_linear(ps: &ProofStructure, opts: LinearOptions) -> (CheckReport, Vec<Event>) {
    let mut events = Vec::new();
    let report = run_linear(ps, opts, Some(&mut events));
    (report, events)
}

#[cfg(test)]
mod tests;
