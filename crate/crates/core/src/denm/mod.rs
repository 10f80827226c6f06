//! The extreme-left criterion: tree check, par consistency and the par
//! dependency digraph, plus the labeled-tree translation used by the
//! rewriting checkers.
//!
//! A structure is a net iff its extreme-left switching graph is a tree,
//! every par link is consistent in it, and the dependency digraph is
//! acyclic. [`check_denm`] is the reference implementation of that test.

use std::collections::BTreeSet;
use std::fmt;

use crate::dr::{dr_graph, extreme_left, DrGraph};
use crate::report::{CheckReport, Reason};
use crate::structure::{OccId, ParId, ProofStructure};

mod tree;

pub use tree::{
    translate, DeNMTree, NodeId, PremiseLabel, TranslateError, TreeNode, Undefined,
    UndefinedPattern,
};

/// Witness that the extreme-left graph is not a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotATree {
    /// Occurrences around a cycle, in order.
    Cycle(Vec<OccId>),
    /// Two occurrences with no path between them.
    Disconnected(OccId, OccId),
}

impl fmt::Display for NotATree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotATree::Cycle(c) => {
                f.write_str("cycle")?;
                for o in c {
                    write!(f, " {o}")?;
                }
                Ok(())
            }
            NotATree::Disconnected(a, b) => write!(f, "{a} and {b} are disconnected"),
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// The extreme-left switching graph, or a witness that it is not a tree.
pub fn extreme_left_tree_check(ps: &ProofStructure) -> Result<DrGraph, NotATree> {
    let g = dr_graph(ps, &extreme_left(ps)).expect("extreme-left switching is total");
    let n = g.nodes;
    let occ = |s: usize| ps.occurrences()[s].id;
    let mut parent: Vec<usize> = (0..n).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in &g.edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            let cycle = forest_path(&adj, a, b).into_iter().map(occ).collect();
            return Err(NotATree::Cycle(cycle));
        }
        parent[ra] = rb;
        adj[a].push(b);
        adj[b].push(a);
    }
    let r0 = find(&mut parent, 0);
    if let Some(s) = (1..n).find(|&s| find(&mut parent, s) != r0) {
        return Err(NotATree::Disconnected(occ(0), occ(s)));
    }
    Ok(g)
}

/// Path between two vertices of a forest, endpoints included.
fn forest_path(adj: &[Vec<usize>], a: usize, b: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    prev[a] = a;
    let mut stack = vec![a];
    while let Some(v) = stack.pop() {
        if v == b {
            break;
        }
        for &w in &adj[v] {
            if prev[w] == usize::MAX {
                prev[w] = v;
                stack.push(w);
            }
        }
    }
    let mut path = vec![b];
    let mut x = b;
    while x != a {
        x = prev[x];
        path.push(x);
    }
    path.reverse();
    path
}

/// The extreme-left tree rooted at slot 0, with ancestor tables.
struct RootedTree {
    parent: Vec<u32>,
    depth: Vec<u32>,
    tin: Vec<u32>,
    tout: Vec<u32>,
    /// `lift[k * n + v]` is the `2^k`-th ancestor of `v` (the root maps to itself).
    lift: Vec<u32>,
    levels: usize,
    /// Nearest ancestor-or-self that is a par conclusion.
    par_above: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl RootedTree {
    fn new(ps: &ProofStructure, g: &DrGraph) -> Self {
        let n = g.nodes;
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(a, b) in &g.edges {
            adj[a].push(b as u32);
            adj[b].push(a as u32);
        }
        let mut is_par_concl = vec![false; n];
        for p in ps.pars() {
            is_par_concl[ps.par_slots(p).2] = true;
        }
        let mut parent = vec![NONE; n];
        let mut depth = vec![0u32; n];
        let mut tin = vec![0u32; n];
        let mut tout = vec![0u32; n];
        let mut par_above = vec![NONE; n];
        let mut clock = 0u32;
        // (vertex, next neighbor index)
        let mut stack: Vec<(u32, usize)> = vec![(0, 0)];
        parent[0] = 0;
        tin[0] = 0;
        par_above[0] = if is_par_concl[0] { 0 } else { NONE };
        while let Some(top) = stack.last_mut() {
            let v = top.0 as usize;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1] as usize;
                top.1 += 1;
                if parent[w] == NONE {
                    parent[w] = v as u32;
                    depth[w] = depth[v] + 1;
                    clock += 1;
                    tin[w] = clock;
                    par_above[w] = if is_par_concl[w] {
                        w as u32
                    } else {
                        par_above[v]
                    };
                    stack.push((w as u32, 0));
                }
            } else {
                tout[v] = clock;
                stack.pop();
            }
        }
        let max_depth = depth.iter().copied().max().unwrap_or(0) as usize;
        let mut levels = 1;
        while (1usize << levels) <= max_depth {
            levels += 1;
        }
        let mut lift = Vec::with_capacity(levels * n);
        lift.extend_from_slice(&parent);
        for k in 1..levels {
            for v in 0..n {
                let mid = lift[(k - 1) * n + v] as usize;
                let up = lift[(k - 1) * n + mid];
                lift.push(up);
            }
        }
        RootedTree {
            parent,
            depth,
            tin,
            tout,
            lift,
            levels,
            par_above,
        }
    }

    fn n(&self) -> usize {
        self.parent.len()
    }

    /// `a` is an ancestor of `b` or equal to it.
    fn is_anc(&self, a: usize, b: usize) -> bool {
        self.tin[a] <= self.tin[b] && self.tout[b] <= self.tout[a]
    }

    fn lca(&self, a: usize, b: usize) -> usize {
        if self.is_anc(a, b) {
            return a;
        }
        if self.is_anc(b, a) {
            return b;
        }
        let n = self.n();
        let mut x = a;
        for k in (0..self.levels).rev() {
            let y = self.lift[k * n + x] as usize;
            if !self.is_anc(y, b) {
                x = y;
            }
        }
        self.parent[x] as usize
    }

    fn on_path(&self, c: usize, a: usize, b: usize) -> bool {
        let l = self.lca(a, b);
        self.is_anc(l, c) && (self.is_anc(c, a) || self.is_anc(c, b))
    }

    /// Par conclusions on the path between `a` and `b`.
    fn pars_on_path(&self, a: usize, b: usize, out: &mut Vec<usize>) {
        let l = self.lca(a, b);
        let dl = self.depth[l];
        for start in [a, b] {
            let mut x = self.par_above[start];
            while x != NONE && self.depth[x as usize] > dl {
                out.push(x as usize);
                let p = self.parent[x as usize] as usize;
                x = self.par_above[p];
            }
        }
        if self.par_above[l] == l as u32 {
            out.push(l);
        }
    }
}

/// The extreme-left path between the premises of `par` avoids its conclusion.
pub fn consistent(ps: &ProofStructure, par: ParId) -> Result<bool, NotATree> {
    let g = extreme_left_tree_check(ps)?;
    let t = RootedTree::new(ps, &g);
    let (l, r, c) = ps.par_slots(par);
    Ok(!t.on_path(c, l, r))
}

/// Dependency digraph over par links: an arc `(a, b)` whenever the
/// conclusion of `a` lies on the extreme-left path between the premises of
/// `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParDigraph {
    pub vertices: usize,
    pub arcs: Vec<(ParId, ParId)>,
}

impl ParDigraph {
    pub fn new(vertices: usize, arcs: Vec<(ParId, ParId)>) -> Self {
        ParDigraph { vertices, arcs }
    }

    /// Some directed cycle, listed in arc order.
    pub fn find_cycle(&self) -> Option<Vec<ParId>> {
        let n = self.vertices;
        let mut out: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(a, b) in &self.arcs {
            out[a.index()].push(b.0);
        }
        // 0 = new, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for s in 0..n {
            if state[s] != 0 {
                continue;
            }
            state[s] = 1;
            stack.push((s, 0));
            while let Some(top) = stack.last_mut() {
                let v = top.0;
                if top.1 < out[v].len() {
                    let w = out[v][top.1] as usize;
                    top.1 += 1;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            stack.push((w, 0));
                        }
                        1 => {
                            let from = stack.iter().position(|&(x, _)| x == w).expect("on stack");
                            return Some(
                                stack[from..]
                                    .iter()
                                    .map(|&(x, _)| ParId(x as u32))
                                    .collect(),
                            );
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
        None
    }
}

fn digraph_of(ps: &ProofStructure, t: &RootedTree) -> ParDigraph {
    let mut par_at = vec![NONE; t.n()];
    for p in ps.pars() {
        par_at[ps.par_slots(p).2] = p.0;
    }
    let mut arcs = Vec::new();
    let mut on_path = Vec::new();
    for b in ps.pars() {
        let (l, r, _) = ps.par_slots(b);
        on_path.clear();
        t.pars_on_path(l, r, &mut on_path);
        for &c in &on_path {
            let a = ParId(par_at[c]);
            if a != b {
                arcs.push((a, b));
            }
        }
    }
    ParDigraph::new(ps.num_pars(), arcs)
}

/// Dependency digraph of a structure whose extreme-left graph is a tree.
pub fn build_digraph(ps: &ProofStructure) -> Result<ParDigraph, NotATree> {
    let g = extreme_left_tree_check(ps)?;
    Ok(digraph_of(ps, &RootedTree::new(ps, &g)))
}

/// Reference checker: tree, consistency, then acyclicity.
pub fn check_denm(ps: &ProofStructure) -> CheckReport {
    let g = match extreme_left_tree_check(ps) {
        Ok(g) => g,
        Err(w) => return CheckReport::no(Reason::NotATree(w)),
    };
    let t = RootedTree::new(ps, &g);
    for p in ps.pars() {
        let (l, r, c) = ps.par_slots(p);
        if t.on_path(c, l, r) {
            return CheckReport::no(Reason::Inconsistent(p));
        }
    }
    match digraph_of(ps, &t).find_cycle() {
        Some(cycle) => CheckReport::no(Reason::Cyclic(cycle)),
        None => CheckReport::yes(),
    }
}

/// `l_L` and `r_L` for every par link `L`.
pub fn full_label_set(ps: &ProofStructure) -> BTreeSet<PremiseLabel> {
    ps.pars()
        .flat_map(|p| [PremiseLabel::Left(p), PremiseLabel::Right(p)])
        .collect()
}
