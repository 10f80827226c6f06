//! Seeded generators: random derivations (always nets) and axiom re-pairing
//! mutants (always well-formed, usually not nets).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::sequent::SequentProof;
use crate::structure::{Link, ProofStructure};

const AXIOM_WEIGHT: f64 = 0.4;
const TENSOR_WEIGHT: f64 = 0.3;

/// Grows a random derivation whose net has between `links_budget` and
/// `2 * links_budget` links. Deterministic in `seed`.
///
/// A pool of partial derivations is grown by drawing axiom, tensor or par
/// with weights 0.4 / 0.3 / 0.3 (falling back to an axiom when the drawn rule
/// has no candidates); once the budget is reached the pool is closed off with
/// tensors.
pub fn random_proof(links_budget: usize, seed: u64) -> SequentProof {
    let budget = links_budget.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<SequentProof> = Vec::new();
    let mut links = 0usize;

    while links < budget {
        let roll: f64 = rng.gen();
        if (AXIOM_WEIGHT..AXIOM_WEIGHT + TENSOR_WEIGHT).contains(&roll) && pool.len() >= 2 {
            let i = rng.gen_range(0..pool.len());
            let left = pool.swap_remove(i);
            let j = rng.gen_range(0..pool.len());
            let right = pool.swap_remove(j);
            let lp = rng.gen_range(0..left.arity());
            let rp = rng.gen_range(0..right.arity());
            pool.push(SequentProof::tensor(left, lp, right, rp).expect("positions in range"));
        } else if roll >= AXIOM_WEIGHT + TENSOR_WEIGHT && pool.iter().any(|p| p.arity() >= 2) {
            let candidates: Vec<usize> =
                (0..pool.len()).filter(|&i| pool[i].arity() >= 2).collect();
            let i = candidates[rng.gen_range(0..candidates.len())];
            let premise = pool.swap_remove(i);
            let n = premise.arity();
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            pool.push(SequentProof::par(premise, a, b).expect("distinct positions in range"));
        } else {
            pool.push(SequentProof::axiom());
        }
        links += 1;
    }

    while pool.len() > 1 {
        let right = pool.pop().expect("len > 1");
        let left = pool.pop().expect("len > 1");
        let lp = rng.gen_range(0..left.arity());
        let rp = rng.gen_range(0..right.arity());
        pool.push(SequentProof::tensor(left, lp, right, rp).expect("positions in range"));
    }
    pool.pop().expect("budget >= 1 leaves one derivation")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutateError {
    #[error("need at least two axiom links to re-pair, found {0}")]
    TooSmall(usize),
}

/// Swaps the positive conclusions of two randomly chosen axiom links.
/// Formulas are untouched, so the result is always a valid structure.
pub fn mutate(ps: &ProofStructure, seed: u64) -> Result<ProofStructure, MutateError> {
    let axioms: Vec<usize> = ps
        .links()
        .iter()
        .enumerate()
        .filter(|(_, l)| matches!(l, Link::Id { .. }))
        .map(|(i, _)| i)
        .collect();
    if axioms.len() < 2 {
        return Err(MutateError::TooSmall(axioms.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let i = rng.gen_range(0..axioms.len());
    let mut j = rng.gen_range(0..axioms.len() - 1);
    if j >= i {
        j += 1;
    }
    let (a, b) = (axioms[i], axioms[j]);

    let (occurrences, mut links) = ps.clone().into_parts();
    let (Link::Id { pos: pa, .. }, Link::Id { pos: pb, .. }) = (links[a], links[b]) else {
        unreachable!("indices select axiom links")
    };
    if let Link::Id { pos, .. } = &mut links[a] {
        *pos = pb;
    }
    if let Link::Id { pos, .. } = &mut links[b] {
        *pos = pa;
    }
    Ok(ProofStructure::validate(occurrences, links)
        .expect("re-pairing axioms keeps the structure valid"))
}
