//! Switchings, switching graphs and the all-switchings oracle.
//!
//! A switching picks one premise of every par link. Its graph has the
//! occurrences as vertices and these edges:
//!
//! * axiom: negative conclusion to positive conclusion,
//! * tensor: conclusion to each premise,
//! * par: conclusion to the selected premise only.
//!
//! A structure is a net iff every switching graph is a tree. Checking that
//! directly costs `2^pars` graph checks, so [`check_all_switchings`] refuses
//! structures above a par budget.

use thiserror::Error;

use crate::structure::{Link, ParId, ProofStructure, Side};

/// Default limit on par links for [`check_all_switchings`].
pub const DEFAULT_PAR_BUDGET: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Switching {
    choice: Vec<Side>,
}

impl Switching {
    pub fn new(choice: Vec<Side>) -> Self {
        Switching { choice }
    }

    pub fn get(&self, par: ParId) -> Option<Side> {
        self.choice.get(par.index()).copied()
    }

    pub fn len(&self) -> usize {
        self.choice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choice.is_empty()
    }

    pub fn choices(&self) -> &[Side] {
        &self.choice
    }
}

/// The switching that selects every left premise.
pub fn extreme_left(ps: &ProofStructure) -> Switching {
    Switching::new(vec![Side::Left; ps.num_pars()])
}

/// An undirected graph over occurrence slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DrError {
    #[error("switching covers {got} par links, structure has {expected}")]
    PartialSwitching { expected: usize, got: usize },
    #[error("{pars} par links exceed the exhaustive budget of {budget}")]
    TooManyPars { pars: usize, budget: usize },
}

pub fn dr_graph(ps: &ProofStructure, sw: &Switching) -> Result<DrGraph, DrError> {
    if sw.len() != ps.num_pars() {
        return Err(DrError::PartialSwitching {
            expected: ps.num_pars(),
            got: sw.len(),
        });
    }
    let mut edges = Vec::with_capacity(ps.num_links() * 2);
    let mut par = 0;
    for link in ps.dense_links() {
        match *link {
            Link::Id { neg, pos } => edges.push((neg, pos)),
            Link::Tensor { left, right, concl } => {
                edges.push((concl, left));
                edges.push((concl, right));
            }
            Link::Par { left, right, concl } => {
                let chosen = match sw.choice[par] {
                    Side::Left => left,
                    Side::Right => right,
                };
                edges.push((concl, chosen));
                par += 1;
            }
        }
    }
    Ok(DrGraph {
        nodes: ps.num_occurrences(),
        edges,
    })
}

/// Connected and acyclic.
pub fn is_tree(g: &DrGraph) -> bool {
    if g.nodes == 0 || g.edges.len() != g.nodes - 1 {
        return false;
    }
    let mut parent: Vec<usize> = (0..g.nodes).collect();
    g.edges.iter().all(|&(a, b)| link_roots(&mut parent, a, b))
}

fn root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Joins the classes of `a` and `b`; false if they were already joined.
fn link_roots(parent: &mut [usize], a: usize, b: usize) -> bool {
    let (ra, rb) = (root(parent, a), root(parent, b));
    if ra == rb {
        return false;
    }
    parent[ra] = rb;
    true
}

/// True iff every switching graph of `ps` is a tree.
///
/// The axiom and tensor edges are shared by all switchings, so they are
/// contracted once; each switching then only adds one edge per par link
/// between contracted components.
pub fn check_all_switchings(ps: &ProofStructure, par_budget: usize) -> Result<bool, DrError> {
    let m = ps.num_pars();
    if m > par_budget {
        return Err(DrError::TooManyPars {
            pars: m,
            budget: par_budget,
        });
    }
    let n = ps.num_occurrences();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut fixed = 0usize;
    let mut par_ends = Vec::with_capacity(m);
    for link in ps.dense_links() {
        match *link {
            Link::Id { neg, pos } => {
                fixed += 1;
                if !link_roots(&mut parent, neg, pos) {
                    return Ok(false);
                }
            }
            Link::Tensor { left, right, concl } => {
                fixed += 2;
                if !link_roots(&mut parent, concl, left) || !link_roots(&mut parent, concl, right) {
                    return Ok(false);
                }
            }
            Link::Par { left, right, concl } => par_ends.push((concl, left, right)),
        }
    }
    if fixed + m + 1 != n {
        return Ok(false);
    }

    // Renumber the contracted components 0..=m.
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        let r = root(&mut parent, s);
        if comp[r] == usize::MAX {
            comp[r] = next;
            next += 1;
        }
        comp[s] = comp[r];
    }
    debug_assert_eq!(next, m + 1);
    let ends: Vec<(usize, usize, usize)> = par_ends
        .iter()
        .map(|&(c, l, r)| (comp[c], comp[l], comp[r]))
        .collect();

    let mut uf = vec![0usize; m + 1];
    for mask in 0u64..(1u64 << m) {
        for (i, p) in uf.iter_mut().enumerate() {
            *p = i;
        }
        for (bit, &(c, l, r)) in ends.iter().enumerate() {
            let other = if mask >> bit & 1 == 0 { l } else { r };
            if !link_roots(&mut uf, c, other) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
