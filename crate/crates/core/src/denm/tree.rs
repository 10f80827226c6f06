//! Labeled trees and the translation from proof structures.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;
use std::fmt::Write as _;

use crate::structure::{Link, LinkId, ParId, ProofStructure, Side, Use};

use super::NotATree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// `l_L` or `r_L`: this node stands for the left or right premise of `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PremiseLabel {
    Left(ParId),
    Right(ParId),
}

impl PremiseLabel {
    pub fn par(self) -> ParId {
        match self {
            PremiseLabel::Left(p) | PremiseLabel::Right(p) => p,
        }
    }

    pub fn side(self) -> Side {
        match self {
            PremiseLabel::Left(_) => Side::Left,
            PremiseLabel::Right(_) => Side::Right,
        }
    }

    fn key(self) -> (ParId, Side) {
        (self.par(), self.side())
    }
}

// l1 < r1 < l2 < ...
impl Ord for PremiseLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for PremiseLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PremiseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PremiseLabel::Left(p) => write!(f, "l{}", p.0 + 1),
            PremiseLabel::Right(p) => write!(f, "r{}", p.0 + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeNode {
    Labeled {
        /// Sorted, no duplicates.
        labels: Vec<PremiseLabel>,
        neighbors: Vec<NodeId>,
    },
    Par {
        par: ParId,
        up: Option<NodeId>,
        down: Option<NodeId>,
    },
}

impl TreeNode {
    pub fn is_labeled(&self) -> bool {
        matches!(self, TreeNode::Labeled { .. })
    }

    pub fn degree(&self) -> usize {
        match self {
            TreeNode::Labeled { neighbors, .. } => neighbors.len(),
            TreeNode::Par { up, down, .. } => up.is_some() as usize + down.is_some() as usize,
        }
    }
}

/// A tree of labeled nodes and par nodes. Removed nodes leave a `None`
/// hole so ids stay stable across rewriting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeNMTree {
    nodes: Vec<Option<TreeNode>>,
    num_pars: usize,
}

/// Why the translation is undefined for a structure whose extreme-left
/// graph is a tree. Each pattern is a non-net: some switching cuts the
/// axiom off from the rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UndefinedPattern {
    /// Both conclusions are premises of (different) par links.
    BothParPremises,
    /// One conclusion is a right par premise or a conclusion of the
    /// structure; the other is a premise of a par link.
    OpenEndAndParPremise,
    /// Neither conclusion is consumed by a tensor or par link.
    NoConsumer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, thiserror::Error)]
#[error("axiom {link}: {pattern:?}")]
pub struct Undefined {
    pub link: LinkId,
    pub pattern: UndefinedPattern,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("extreme-left graph is not a tree: {0}")]
    NotATree(NotATree),
    #[error("translation undefined: {0}")]
    Undefined(Undefined),
}

fn label_for(u: Use) -> Option<PremiseLabel> {
    match u {
        Use::ParPremise(p, Side::Left) => Some(PremiseLabel::Left(p)),
        Use::ParPremise(p, Side::Right) => Some(PremiseLabel::Right(p)),
        _ => None,
    }
}

/// Right par premise or conclusion of the structure: no extreme-left edge
/// leaves the occurrence downwards.
fn open_end(u: Use) -> bool {
    matches!(u, Use::Conclusion | Use::ParPremise(_, Side::Right))
}

struct Builder {
    nodes: Vec<TreeNode>,
}

impl Builder {
    fn labeled(&mut self, labels: Vec<PremiseLabel>) -> NodeId {
        self.push(TreeNode::Labeled {
            labels,
            neighbors: Vec::new(),
        })
    }

    fn push(&mut self, node: TreeNode) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node);
        id
    }

    /// Joins labeled node `a` with `b`, which is either labeled or a par
    /// node attached through the given port.
    fn join(&mut self, a: NodeId, b: NodeId, par_port_up: bool) {
        if let TreeNode::Labeled { neighbors, .. } = &mut self.nodes[a.index()] {
            neighbors.push(b);
        }
        match &mut self.nodes[b.index()] {
            TreeNode::Labeled { neighbors, .. } => neighbors.push(a),
            TreeNode::Par { up, down, .. } => {
                if par_port_up {
                    *up = Some(a);
                } else {
                    *down = Some(a);
                }
            }
        }
    }
}

/// Translates a structure whose extreme-left graph is a tree.
///
/// Nodes are numbered in link order; a par link creates its par node
/// before the labeled node (if any) hanging below it.
pub fn translate(ps: &ProofStructure) -> Result<DeNMTree, TranslateError> {
    super::extreme_left_tree_check(ps).map_err(TranslateError::NotATree)?;
    let tree = translate_unchecked(ps).map_err(TranslateError::Undefined)?;
    debug_assert!(tree.is_tree());
    Ok(tree)
}

/// Translation without the tree precondition; may yield a forest.
pub(crate) fn translate_unchecked(ps: &ProofStructure) -> Result<DeNMTree, Undefined> {
    let num_pars = ps.num_pars();
    if ps.num_links() == 1 {
        return Ok(DeNMTree {
            nodes: vec![Some(TreeNode::Labeled {
                labels: Vec::new(),
                neighbors: Vec::new(),
            })],
            num_pars,
        });
    }
    let mut b = Builder {
        nodes: Vec::with_capacity(ps.num_links() + num_pars),
    };
    // The node an occurrence is attached through.
    let mut rep = vec![NodeId(u32::MAX); ps.num_occurrences()];
    let mut par_nodes = Vec::with_capacity(num_pars);

    for (i, link) in ps.dense_links().iter().enumerate() {
        match *link {
            Link::Id { neg, pos } => {
                let (un, up) = (ps.usage(neg), ps.usage(pos));
                let labels = id_labels(un, up).map_err(|pattern| Undefined {
                    link: LinkId(i as u32),
                    pattern,
                })?;
                let n = b.labeled(labels);
                rep[neg] = n;
                rep[pos] = n;
            }
            Link::Tensor { concl, .. } => {
                let labels = label_for(ps.usage(concl)).into_iter().collect();
                rep[concl] = b.labeled(labels);
            }
            Link::Par { concl, .. } => {
                let par = ps
                    .par_id(LinkId(i as u32))
                    .expect("par link has an ordinal");
                let pn = b.push(TreeNode::Par {
                    par,
                    up: None,
                    down: None,
                });
                par_nodes.push(pn);
                rep[concl] = match label_for(ps.usage(concl)) {
                    Some(l) => b.labeled(vec![l]),
                    None => pn,
                };
            }
        }
    }

    for (i, link) in ps.dense_links().iter().enumerate() {
        match *link {
            Link::Id { .. } => {}
            Link::Tensor { left, right, concl } => {
                let t = rep[concl];
                b.join(t, rep[left], false);
                b.join(t, rep[right], false);
            }
            Link::Par { left, concl, .. } => {
                let par = ps
                    .par_id(LinkId(i as u32))
                    .expect("par link has an ordinal");
                let pn = par_nodes[par.index()];
                b.join(rep[left], pn, true);
                if rep[concl] != pn {
                    b.join(rep[concl], pn, false);
                }
            }
        }
    }

    Ok(DeNMTree {
        nodes: b.nodes.into_iter().map(Some).collect(),
        num_pars,
    })
}

fn id_labels(un: Use, up: Use) -> Result<Vec<PremiseLabel>, UndefinedPattern> {
    use UndefinedPattern::*;
    if let (Use::ParPremise(a, sa), Use::ParPremise(b, sb)) = (un, up) {
        if a == b {
            // A curl: both premises of one par link.
            debug_assert_ne!(sa, sb);
            let mut l = vec![PremiseLabel::Left(a), PremiseLabel::Right(a)];
            l.sort();
            return Ok(l);
        }
    }
    let (open, other) = if open_end(un) {
        (Some(un), up)
    } else if open_end(up) {
        (Some(up), un)
    } else {
        (None, un)
    };
    match open {
        Some(open) => match other {
            Use::TensorPremise(..) => Ok(label_for(open).into_iter().collect()),
            Use::ParPremise(..) => Err(OpenEndAndParPremise),
            Use::Conclusion => Err(NoConsumer),
        },
        None => match (un, up) {
            (Use::ParPremise(..), Use::ParPremise(..)) => Err(BothParPremises),
            _ => Ok(label_for(un).or(label_for(up)).into_iter().collect()),
        },
    }
}

impl DeNMTree {
    /// Builds a tree from raw nodes, for tests and rewritten snapshots.
    pub fn from_nodes(nodes: Vec<Option<TreeNode>>, num_pars: usize) -> Self {
        DeNMTree { nodes, num_pars }
    }

    pub(crate) fn node_mut(&mut self, id: NodeId) -> Option<&mut TreeNode> {
        self.nodes.get_mut(id.index()).and_then(Option::as_mut)
    }

    pub(crate) fn remove(&mut self, id: NodeId) -> Option<TreeNode> {
        self.nodes.get_mut(id.index()).and_then(Option::take)
    }

    /// Par links of the source structure, present or eliminated.
    pub fn num_pars(&self) -> usize {
        self.num_pars
    }

    /// Upper bound on node ids (removed nodes included).
    pub fn capacity(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, id: NodeId) -> Option<&TreeNode> {
        self.nodes.get(id.index()).and_then(Option::as_ref)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &TreeNode)> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.as_ref().map(|n| (NodeId(i as u32), n)))
    }

    pub fn labeled_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes().filter(|(_, n)| n.is_labeled()).map(|(i, _)| i)
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes().count()
    }

    pub fn labels(&self, id: NodeId) -> &[PremiseLabel] {
        match self.node(id) {
            Some(TreeNode::Labeled { labels, .. }) => labels,
            _ => &[],
        }
    }

    pub fn neighbors(&self, id: NodeId) -> Vec<NodeId> {
        match self.node(id) {
            Some(TreeNode::Labeled { neighbors, .. }) => neighbors.clone(),
            Some(TreeNode::Par { up, down, .. }) => up.iter().chain(down.iter()).copied().collect(),
            None => Vec::new(),
        }
    }

    /// The par node of `par`, if it has not been eliminated.
    pub fn par_node(&self, par: ParId) -> Option<NodeId> {
        self.nodes()
            .find(|(_, n)| matches!(n, TreeNode::Par { par: p, .. } if *p == par))
            .map(|(i, _)| i)
    }

    /// The labeled node carrying `label`.
    pub fn home(&self, label: PremiseLabel) -> Option<NodeId> {
        self.nodes()
            .find(|(_, n)| matches!(n, TreeNode::Labeled { labels, .. } if labels.contains(&label)))
            .map(|(i, _)| i)
    }

    /// Undirected edges, each once, smaller id first.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut e: Vec<(NodeId, NodeId)> = self
            .nodes()
            .flat_map(|(i, _)| {
                self.neighbors(i)
                    .into_iter()
                    .filter(move |&j| i < j)
                    .map(move |j| (i, j))
            })
            .collect();
        e.sort();
        e
    }

    /// Connected and acyclic, with symmetric adjacency.
    pub fn is_tree(&self) -> bool {
        let live: Vec<NodeId> = self.nodes().map(|(i, _)| i).collect();
        if live.is_empty() {
            return false;
        }
        for &i in &live {
            for j in self.neighbors(i) {
                if !self.neighbors(j).contains(&i) {
                    return false;
                }
            }
        }
        if self.edges().len() + 1 != live.len() {
            return false;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([live[0]]);
        seen[live[0].index()] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == live.len()
    }

    /// Nodes on the unique path between two nodes, endpoints included.
    pub fn path(&self, from: NodeId, to: NodeId) -> Option<Vec<NodeId>> {
        let mut prev = vec![None; self.nodes.len()];
        let mut queue = VecDeque::from([from]);
        prev[from.index()] = Some(from);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = vec![to];
                let mut x = to;
                while x != from {
                    x = prev[x.index()].expect("visited");
                    path.push(x);
                }
                path.reverse();
                return Some(path);
            }
            for w in self.neighbors(v) {
                if prev[w.index()].is_none() {
                    prev[w.index()] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        None
    }

    fn label_path(&self, par: ParId) -> Option<Vec<NodeId>> {
        let l = self.home(PremiseLabel::Left(par))?;
        let r = self.home(PremiseLabel::Right(par))?;
        self.path(l, r)
    }

    /// Tree-level consistency of a par node still present in the tree: the
    /// path between the homes of its two labels avoids it.
    pub fn par_consistent(&self, par: ParId) -> Option<bool> {
        let pn = self.par_node(par)?;
        let path = self.label_path(par)?;
        Some(!path.contains(&pn))
    }

    /// Every present par node is consistent.
    pub fn consistent(&self) -> bool {
        self.present_pars()
            .into_iter()
            .all(|p| self.par_consistent(p) == Some(true))
    }

    fn present_pars(&self) -> Vec<ParId> {
        self.nodes()
            .filter_map(|(_, n)| match n {
                TreeNode::Par { par, .. } => Some(*par),
                _ => None,
            })
            .collect()
    }

    /// Dependency arcs `(a, b)` between present par nodes: the par node of
    /// `a` lies on the label path of `b`.
    pub fn arcs(&self) -> Vec<(ParId, ParId)> {
        let pars = self.present_pars();
        let mut par_at = vec![None; self.nodes.len()];
        for &p in &pars {
            par_at[self.par_node(p).expect("present").index()] = Some(p);
        }
        let mut arcs = Vec::new();
        for &b in &pars {
            for n in self.label_path(b).unwrap_or_default() {
                if let Some(a) = par_at[n.index()] {
                    if a != b {
                        arcs.push((a, b));
                    }
                }
            }
        }
        arcs
    }

    /// The dependency digraph between present par nodes has no cycle.
    pub fn acyclic(&self) -> bool {
        super::ParDigraph::new(self.num_pars, self.arcs())
            .find_cycle()
            .is_none()
    }

    /// Node list, then edge list, one item per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, n) in self.nodes() {
            match n {
                TreeNode::Labeled { labels, .. } => {
                    let l: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
                    let _ = writeln!(s, "{i} labeled {{{}}}", l.join(", "));
                }
                TreeNode::Par { par, up, down } => {
                    let port = |p: &Option<NodeId>| p.map_or("-".to_string(), |n| n.to_string());
                    let _ = writeln!(s, "{i} par {par} up {} down {}", port(up), port(down));
                }
            }
        }
        for (a, b) in self.edges() {
            let _ = writeln!(s, "edge {a} {b}");
        }
        s
    }
}
