//! Links, proof structures and their well-formedness conditions.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;

/// Identifier of a formula occurrence, as it appears in input files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccId(pub u32);

impl fmt::Display for OccId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Position of a link in [`ProofStructure::links`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkId(pub u32);

impl LinkId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "link{}", self.0)
    }
}

/// Ordinal of a par link among the par links of a structure, in link order.
/// Displayed 1-based, so the first par link prints as `⅋1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParId(pub u32);

impl ParId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ParId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⅋{}", self.0 + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub id: OccId,
    pub formula: Formula,
}

/// An MLL link. `O` names occurrences: [`OccId`] at the API surface, dense
/// slot indices inside the checkers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Link<O = OccId> {
    Id { neg: O, pos: O },
    Tensor { left: O, right: O, concl: O },
    Par { left: O, right: O, concl: O },
}

impl<O: Copy> Link<O> {
    pub fn premises(&self) -> Vec<(O, Side)> {
        match *self {
            Link::Id { .. } => Vec::new(),
            Link::Tensor { left, right, .. } | Link::Par { left, right, .. } => {
                vec![(left, Side::Left), (right, Side::Right)]
            }
        }
    }

    pub fn conclusions(&self) -> Vec<O> {
        match *self {
            Link::Id { neg, pos } => vec![neg, pos],
            Link::Tensor { concl, .. } | Link::Par { concl, .. } => vec![concl],
        }
    }

    pub fn map<P>(&self, mut f: impl FnMut(O) -> P) -> Link<P> {
        match *self {
            Link::Id { neg, pos } => Link::Id {
                neg: f(neg),
                pos: f(pos),
            },
            Link::Tensor { left, right, concl } => Link::Tensor {
                left: f(left),
                right: f(right),
                concl: f(concl),
            },
            Link::Par { left, right, concl } => Link::Par {
                left: f(left),
                right: f(right),
                concl: f(concl),
            },
        }
    }

    pub fn kind(&self) -> LinkKind {
        match self {
            Link::Id { .. } => LinkKind::Id,
            Link::Tensor { .. } => LinkKind::Tensor,
            Link::Par { .. } => LinkKind::Par,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkKind {
    Id,
    Tensor,
    Par,
}

/// Which premise of a binary link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// How an occurrence is used below the link that produces it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Use {
    /// A conclusion of the whole structure.
    Conclusion,
    TensorPremise(LinkId, Side),
    ParPremise(ParId, Side),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("structure has no links")]
    Empty,
    #[error("occurrence id {0} declared twice")]
    DuplicateId(OccId),
    #[error("{link} refers to undeclared occurrence {occ}")]
    UnknownOccurrence { link: LinkId, occ: OccId },
    #[error("{link} uses {occ} twice")]
    RepeatedInLink { link: LinkId, occ: OccId },
    #[error("premise {occ} of {link} is not the conclusion of any link")]
    DanglingPremise { link: LinkId, occ: OccId },
    #[error("occurrence {occ} is a premise of both {first} and {second}")]
    DoubleUsePremise {
        occ: OccId,
        first: LinkId,
        second: LinkId,
    },
    #[error("occurrence {occ} is a conclusion of both {first} and {second}")]
    DoubleConclusion {
        occ: OccId,
        first: LinkId,
        second: LinkId,
    },
    #[error("occurrence {0} is not the conclusion of any link")]
    Orphan(OccId),
    #[error("formulas around {link} do not match its kind")]
    FormulaMismatch { link: LinkId },
}

/// A validated proof structure.
///
/// Besides the declared occurrences and links it keeps dense lookup tables
/// (occurrence slots, producers, consumers, par ordinals) that the checkers
/// share.
#[derive(Clone, Debug)]
pub struct ProofStructure {
    occurrences: Vec<Occurrence>,
    links: Vec<Link>,
    slots: HashMap<OccId, usize>,
    dense: Vec<Link<usize>>,
    producer: Vec<LinkId>,
    uses: Vec<Use>,
    pars: Vec<LinkId>,
    par_of: Vec<Option<ParId>>,
}

impl ProofStructure {
    /// Checks the wiring and formula conditions and builds the lookup tables.
    pub fn validate(
        occurrences: Vec<Occurrence>,
        links: Vec<Link>,
    ) -> Result<ProofStructure, ValidationError> {
        if links.is_empty() {
            return Err(ValidationError::Empty);
        }
        let mut slots = HashMap::with_capacity(occurrences.len());
        for (i, occ) in occurrences.iter().enumerate() {
            if slots.insert(occ.id, i).is_some() {
                return Err(ValidationError::DuplicateId(occ.id));
            }
        }

        let mut dense = Vec::with_capacity(links.len());
        for (i, link) in links.iter().enumerate() {
            let lid = LinkId(i as u32);
            let mut seen: Vec<OccId> = Vec::with_capacity(3);
            let mut missing = None;
            let d = link.map(|o| {
                if seen.contains(&o) && missing.is_none() {
                    missing = Some(Err(o));
                }
                seen.push(o);
                match slots.get(&o) {
                    Some(&s) => s,
                    None => {
                        if missing.is_none() {
                            missing = Some(Ok(o));
                        }
                        usize::MAX
                    }
                }
            });
            match missing {
                Some(Ok(occ)) => return Err(ValidationError::UnknownOccurrence { link: lid, occ }),
                Some(Err(occ)) => return Err(ValidationError::RepeatedInLink { link: lid, occ }),
                None => {}
            }
            dense.push(d);
        }

        let n = occurrences.len();
        let mut producer: Vec<Option<LinkId>> = vec![None; n];
        for (i, link) in dense.iter().enumerate() {
            for c in link.conclusions() {
                if let Some(first) = producer[c] {
                    return Err(ValidationError::DoubleConclusion {
                        occ: occurrences[c].id,
                        first,
                        second: LinkId(i as u32),
                    });
                }
                producer[c] = Some(LinkId(i as u32));
            }
        }

        let mut pars = Vec::new();
        let mut par_of = vec![None; dense.len()];
        for (i, link) in dense.iter().enumerate() {
            if let Link::Par { .. } = link {
                par_of[i] = Some(ParId(pars.len() as u32));
                pars.push(LinkId(i as u32));
            }
        }

        let mut uses = vec![Use::Conclusion; n];
        let mut consumer: Vec<Option<LinkId>> = vec![None; n];
        for (i, link) in dense.iter().enumerate() {
            let lid = LinkId(i as u32);
            for (p, side) in link.premises() {
                if producer[p].is_none() {
                    return Err(ValidationError::DanglingPremise {
                        link: lid,
                        occ: occurrences[p].id,
                    });
                }
                if let Some(first) = consumer[p] {
                    return Err(ValidationError::DoubleUsePremise {
                        occ: occurrences[p].id,
                        first,
                        second: lid,
                    });
                }
                consumer[p] = Some(lid);
                uses[p] = match link {
                    Link::Par { .. } => Use::ParPremise(par_of[i].expect("par ordinal"), side),
                    _ => Use::TensorPremise(lid, side),
                };
            }
        }

        for (i, link) in dense.iter().enumerate() {
            let f = |s: usize| &occurrences[s].formula;
            let ok = match *link {
                Link::Id { neg, pos } => *f(neg) == Formula::Neg && *f(pos) == Formula::Pos,
                Link::Tensor { left, right, concl } => match f(concl) {
                    Formula::Tensor(a, b) => **a == *f(left) && **b == *f(right),
                    _ => false,
                },
                Link::Par { left, right, concl } => match f(concl) {
                    Formula::Par(a, b) => **a == *f(left) && **b == *f(right),
                    _ => false,
                },
            };
            if !ok {
                return Err(ValidationError::FormulaMismatch {
                    link: LinkId(i as u32),
                });
            }
        }

        let producer = producer
            .into_iter()
            .enumerate()
            .map(|(s, p)| p.ok_or(ValidationError::Orphan(occurrences[s].id)))
            .collect::<Result<Vec<_>, _>>()?;

        Ok(ProofStructure {
            occurrences,
            links,
            slots,
            dense,
            producer,
            uses,
            pars,
            par_of,
        })
    }

    pub fn occurrences(&self) -> &[Occurrence] {
        &self.occurrences
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id.index()]
    }

    pub fn occurrence(&self, id: OccId) -> Option<&Occurrence> {
        self.slots.get(&id).map(|&s| &self.occurrences[s])
    }

    /// Occurrences that are premises of no link, in declaration order.
    pub fn conclusions(&self) -> Vec<&Occurrence> {
        self.uses
            .iter()
            .enumerate()
            .filter(|(_, u)| **u == Use::Conclusion)
            .map(|(s, _)| &self.occurrences[s])
            .collect()
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    pub fn num_occurrences(&self) -> usize {
        self.occurrences.len()
    }

    pub fn num_pars(&self) -> usize {
        self.pars.len()
    }

    pub fn count(&self, kind: LinkKind) -> usize {
        self.links.iter().filter(|l| l.kind() == kind).count()
    }

    // Dense views used by the checkers. Slots index `occurrences()`.

    pub fn slot(&self, id: OccId) -> Option<usize> {
        self.slots.get(&id).copied()
    }

    pub fn dense_links(&self) -> &[Link<usize>] {
        &self.dense
    }

    pub fn producer(&self, slot: usize) -> LinkId {
        self.producer[slot]
    }

    pub fn usage(&self, slot: usize) -> Use {
        self.uses[slot]
    }

    pub fn par_link(&self, par: ParId) -> LinkId {
        self.pars[par.index()]
    }

    pub fn par_id(&self, link: LinkId) -> Option<ParId> {
        self.par_of[link.index()]
    }

    pub fn pars(&self) -> impl Iterator<Item = ParId> {
        (0..self.pars.len() as u32).map(ParId)
    }

    /// `(left, right, conclusion)` slots of a par link.
    pub fn par_slots(&self, par: ParId) -> (usize, usize, usize) {
        match self.dense[self.pars[par.index()].index()] {
            Link::Par { left, right, concl } => (left, right, concl),
            _ => unreachable!("par table points at a non-par link"),
        }
    }

    /// Returns the occurrences and links, e.g. to edit and re-validate.
    pub fn into_parts(self) -> (Vec<Occurrence>, Vec<Link>) {
        (self.occurrences, self.links)
    }
}

/// Builds structures link by link, numbering occurrences from zero and
/// deriving every formula from the link that produces it.
#[derive(Default, Clone, Debug)]
pub struct StructureBuilder {
    occurrences: Vec<Occurrence>,
    links: Vec<Link>,
}

impl StructureBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh(&mut self, formula: Formula) -> OccId {
        let id = OccId(self.occurrences.len() as u32);
        self.occurrences.push(Occurrence { id, formula });
        id
    }

    fn formula(&self, id: OccId) -> Formula {
        self.occurrences[id.0 as usize].formula.clone()
    }

    /// Adds an axiom link; returns `(negative, positive)`.
    pub fn axiom(&mut self) -> (OccId, OccId) {
        let neg = self.fresh(Formula::Neg);
        let pos = self.fresh(Formula::Pos);
        self.links.push(Link::Id { neg, pos });
        (neg, pos)
    }

    pub fn tensor(&mut self, left: OccId, right: OccId) -> OccId {
        let concl = self.fresh(Formula::tensor(self.formula(left), self.formula(right)));
        self.links.push(Link::Tensor { left, right, concl });
        concl
    }

    pub fn par(&mut self, left: OccId, right: OccId) -> OccId {
        let concl = self.fresh(Formula::par(self.formula(left), self.formula(right)));
        self.links.push(Link::Par { left, right, concl });
        concl
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    pub fn finish(self) -> Result<ProofStructure, ValidationError> {
        ProofStructure::validate(self.occurrences, self.links)
    }
}
