//! Sequent-calculus derivations and their translation into proof nets.
//!
//! A derivation only records *positions*: which formula of a premise
//! sequent each rule consumes. End sequents are ordered lists with the
//! convention
//!
//! * axiom: `~p, p`
//! * tensor: rest of the left premise, rest of the right premise, `A * B`
//! * par: rest of the premise, `A # B`

use thiserror::Error;

use crate::formula::Formula;
use crate::structure::{OccId, ProofStructure, StructureBuilder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequentProof {
    Axiom,
    Tensor {
        left: Box<SequentProof>,
        left_pos: usize,
        right: Box<SequentProof>,
        right_pos: usize,
    },
    Par {
        premise: Box<SequentProof>,
        left_pos: usize,
        right_pos: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("position {pos} out of range for a sequent of {len} formulas")]
    OutOfRange { pos: usize, len: usize },
    #[error("par rule needs two distinct positions, got {0} twice")]
    SamePosition(usize),
}

impl SequentProof {
    pub fn axiom() -> Self {
        SequentProof::Axiom
    }

    pub fn tensor(
        left: SequentProof,
        left_pos: usize,
        right: SequentProof,
        right_pos: usize,
    ) -> Result<Self, RuleError> {
        check_pos(left_pos, left.arity())?;
        check_pos(right_pos, right.arity())?;
        Ok(SequentProof::Tensor {
            left: Box::new(left),
            left_pos,
            right: Box::new(right),
            right_pos,
        })
    }

    pub fn par(
        premise: SequentProof,
        left_pos: usize,
        right_pos: usize,
    ) -> Result<Self, RuleError> {
        check_pos(left_pos, premise.arity())?;
        check_pos(right_pos, premise.arity())?;
        if left_pos == right_pos {
            return Err(RuleError::SamePosition(left_pos));
        }
        Ok(SequentProof::Par {
            premise: Box::new(premise),
            left_pos,
            right_pos,
        })
    }

    /// Number of formulas in the end sequent.
    pub fn arity(&self) -> usize {
        match self {
            SequentProof::Axiom => 2,
            SequentProof::Tensor { left, right, .. } => left.arity() + right.arity() - 1,
            SequentProof::Par { premise, .. } => premise.arity() - 1,
        }
    }

    /// Number of rule applications, which is the link count of the net.
    pub fn rules(&self) -> usize {
        match self {
            SequentProof::Axiom => 1,
            SequentProof::Tensor { left, right, .. } => 1 + left.rules() + right.rules(),
            SequentProof::Par { premise, .. } => 1 + premise.rules(),
        }
    }

    pub fn end_sequent(&self) -> Vec<Formula> {
        match self {
            SequentProof::Axiom => vec![Formula::Neg, Formula::Pos],
            SequentProof::Tensor {
                left,
                left_pos,
                right,
                right_pos,
            } => {
                let mut l = left.end_sequent();
                let mut r = right.end_sequent();
                let a = l.remove(*left_pos);
                let b = r.remove(*right_pos);
                l.extend(r);
                l.push(Formula::tensor(a, b));
                l
            }
            SequentProof::Par {
                premise,
                left_pos,
                right_pos,
            } => {
                let mut s = premise.end_sequent();
                let (a, b) = take_two(&mut s, *left_pos, *right_pos);
                s.push(Formula::par(a, b));
                s
            }
        }
    }

    /// Translates the derivation into its proof net. The conclusions of the
    /// result are the end sequent, in order.
    pub fn build_net(&self) -> ProofStructure {
        let mut b = StructureBuilder::new();
        self.emit(&mut b);
        b.finish()
            .expect("a derivation always translates to a well-formed structure")
    }

    fn emit(&self, b: &mut StructureBuilder) -> Vec<OccId> {
        match self {
            SequentProof::Axiom => {
                let (neg, pos) = b.axiom();
                vec![neg, pos]
            }
            SequentProof::Tensor {
                left,
                left_pos,
                right,
                right_pos,
            } => {
                let mut l = left.emit(b);
                let mut r = right.emit(b);
                let a = l.remove(*left_pos);
                let c = r.remove(*right_pos);
                let concl = b.tensor(a, c);
                l.extend(r);
                l.push(concl);
                l
            }
            SequentProof::Par {
                premise,
                left_pos,
                right_pos,
            } => {
                let mut s = premise.emit(b);
                let (a, c) = take_two(&mut s, *left_pos, *right_pos);
                let concl = b.par(a, c);
                s.push(concl);
                s
            }
        }
    }
}

fn check_pos(pos: usize, len: usize) -> Result<(), RuleError> {
    if pos < len {
        Ok(())
    } else {
        Err(RuleError::OutOfRange { pos, len })
    }
}

/// Removes the items at two distinct positions, returning them in argument order.
fn take_two<T>(v: &mut Vec<T>, i: usize, j: usize) -> (T, T) {
    if i > j {
        let a = v.remove(i);
        let b = v.remove(j);
        (a, b)
    } else {
        let b = v.remove(j);
        let a = v.remove(i);
        (a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::LinkKind;

    fn conclusion_strings(ps: &ProofStructure) -> Vec<String> {
        ps.conclusions()
            .iter()
            .map(|o| o.formula.to_string())
            .collect()
    }

    #[test]
    fn axiom_alone() {
        let net = SequentProof::axiom().build_net();
        assert_eq!(net.num_links(), 1);
        assert_eq!(conclusion_strings(&net), vec!["~p", "p"]);
    }

    #[test]
    fn curl() {
        let proof = SequentProof::par(SequentProof::axiom(), 0, 1).unwrap();
        let net = proof.build_net();
        assert_eq!(conclusion_strings(&net), vec!["(~p # p)"]);
        assert_eq!(
            proof.end_sequent(),
            vec![Formula::parse("(~p # p)").unwrap()]
        );
    }

    #[test]
    fn tensor_then_par() {
        // two axioms; tensor p (first) with ~p (second); par ~p (first) with p (second)
        let t = SequentProof::tensor(SequentProof::axiom(), 1, SequentProof::axiom(), 0).unwrap();
        assert_eq!(t.end_sequent().len(), 3);
        let proof = SequentProof::par(t, 0, 1).unwrap();
        let net = proof.build_net();
        let mut got = conclusion_strings(&net);
        got.sort();
        assert_eq!(got, vec!["(p * ~p)", "(~p # p)"]);
        assert_eq!(net.count(LinkKind::Id), 2);
        assert_eq!(proof.rules(), net.num_links());
    }

    #[test]
    fn rule_errors() {
        assert_eq!(
            SequentProof::par(SequentProof::axiom(), 0, 0),
            Err(RuleError::SamePosition(0))
        );
        assert_eq!(
            SequentProof::par(SequentProof::axiom(), 0, 2),
            Err(RuleError::OutOfRange { pos: 2, len: 2 })
        );
        assert!(SequentProof::tensor(SequentProof::axiom(), 3, SequentProof::axiom(), 0).is_err());
    }

    #[test]
    fn take_two_keeps_argument_order() {
        let mut v = vec![10, 11, 12, 13];
        assert_eq!(take_two(&mut v, 3, 1), (13, 11));
        assert_eq!(v, vec![10, 12]);
    }
}
