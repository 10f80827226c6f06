//! Parametric benchmark families. Every family yields a net for all
//! `k >= 1` with a number of links linear in `k`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::structure::{OccId, ProofStructure, StructureBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `x1⊥ ⅋ (x2⊥ ⅋ ... (xk⊥ ⅋ (x1 ⊗ ... ⊗ xk)))`; `k = 1` is the curl.
    ParChain,
    /// A balanced tensor tree over `k` curls.
    TensorFan,
    /// Curls and two-axiom blocks alternately folded into one conclusion.
    CurlMix,
    /// Two pars per level hanging off one long tensor, nested so that the
    /// naive schedule retries every pending par before each union.
    Figure19,
    /// `k` copies of a gadget that the queue strategy only accepts with
    /// revival, joined by tensors.
    Figure21,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::ParChain,
        Family::TensorFan,
        Family::CurlMix,
        Family::Figure19,
        Family::Figure21,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::ParChain => "parChain",
            Family::TensorFan => "tensorFan",
            Family::CurlMix => "curlMix",
            Family::Figure19 => "figure19-analog",
            Family::Figure21 => "figure21-analog",
        }
    }

    /// The family member of size `k` (at least 1).
    pub fn build(self, k: usize) -> ProofStructure {
        let k = k.max(1);
        let mut b = StructureBuilder::new();
        match self {
            Family::ParChain => par_chain(&mut b, k),
            Family::TensorFan => tensor_fan(&mut b, k),
            Family::CurlMix => curl_mix(&mut b, k),
            Family::Figure19 => figure19(&mut b, k),
            Family::Figure21 => figure21(&mut b, k),
        }
        b.finish().expect("families are well formed")
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown family `{0}`")]
pub struct UnknownFamily(pub String);

impl FromStr for Family {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| UnknownFamily(s.to_string()))
    }
}

/// Right-nested tensor over `xs` (non-empty).
fn tensor_right(b: &mut StructureBuilder, xs: &[OccId]) -> OccId {
    let mut acc = *xs.last().expect("non-empty");
    for &x in xs[..xs.len() - 1].iter().rev() {
        acc = b.tensor(x, acc);
    }
    acc
}

/// Right-nested par over `xs` followed by `last`.
fn par_right(b: &mut StructureBuilder, xs: &[OccId], last: OccId) -> OccId {
    let mut acc = last;
    for &x in xs.iter().rev() {
        acc = b.par(x, acc);
    }
    acc
}

fn par_chain(b: &mut StructureBuilder, k: usize) {
    let (negs, poss): (Vec<_>, Vec<_>) = (0..k).map(|_| b.axiom()).unzip();
    let t = tensor_right(b, &poss);
    par_right(b, &negs, t);
}

fn tensor_fan(b: &mut StructureBuilder, k: usize) {
    let mut layer: Vec<OccId> = (0..k)
        .map(|_| {
            let (n, p) = b.axiom();
            b.par(n, p)
        })
        .collect();
    while layer.len() > 1 {
        let mut next = Vec::with_capacity(layer.len().div_ceil(2));
        for pair in layer.chunks(2) {
            next.push(match *pair {
                [x, y] => b.tensor(x, y),
                [x] => x,
                _ => unreachable!(),
            });
        }
        layer = next;
    }
}

fn curl_mix(b: &mut StructureBuilder, k: usize) {
    let (n, p) = b.axiom();
    let mut acc = b.par(n, p);
    for i in 1..k {
        if i % 2 == 1 {
            let (n, p) = b.axiom();
            let c = b.par(n, p);
            acc = b.tensor(acc, c);
        } else {
            // ⊢ x⊥ ⅋ y⊥, x ⊗ y, folded in by a tensor and a par
            let (xn, xp) = b.axiom();
            let (yn, yp) = b.axiom();
            let t = b.tensor(xp, yp);
            let q = b.par(xn, yn);
            let u = b.tensor(acc, t);
            acc = b.par(q, u);
        }
    }
}

fn figure19(b: &mut StructureBuilder, k: usize) {
    let xs: Vec<(OccId, OccId)> = (0..k).map(|_| b.axiom()).collect();
    let qs: Vec<(OccId, OccId)> = (0..k).map(|_| b.axiom()).collect();
    let spine: Vec<OccId> = xs
        .iter()
        .map(|&(_, p)| p)
        .chain(qs.iter().map(|&(n, _)| n))
        .collect();
    let t = tensor_right(b, &spine);
    let pars: Vec<OccId> = (0..k).map(|i| b.par(xs[i].0, qs[i].1)).collect();
    par_right(b, &pars, t);
}

/// One gadget; returns its conclusions. The axiom created first becomes
/// the lowest labeled node, where the default run starts.
fn figure21_gadget(b: &mut StructureBuilder) -> (OccId, OccId) {
    let (vn, vp) = b.axiom();
    let (xn, xp) = b.axiom();
    let (yn, yp) = b.axiom();
    let t1 = b.tensor(xp, yp);
    let p1 = b.par(xn, t1);
    let (un, up) = b.axiom();
    let t2 = b.tensor(up, vn);
    let p2 = b.par(un, t2);
    let t3 = b.tensor(p1, p2);
    let p3 = b.par(vp, yn);
    (t3, p3)
}

fn figure21(b: &mut StructureBuilder, k: usize) {
    let (mut acc, mut side) = figure21_gadget(b);
    for _ in 1..k {
        let (t, p) = figure21_gadget(b);
        acc = b.tensor(acc, t);
        side = b.par(side, p);
    }
    let _ = (acc, side);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dr::check_all_switchings;
    use crate::format::to_json;
    use crate::structure::LinkKind;

    #[test]
    fn names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>(), Ok(f));
        }
        assert!("figure19".parse::<Family>().is_err());
    }

    #[test]
    fn small_members_are_nets() {
        for f in Family::ALL {
            for k in 1..=4 {
                let ps = f.build(k);
                assert_eq!(check_all_switchings(&ps, 20), Ok(true), "{f} k={k}");
            }
        }
    }

    #[test]
    fn link_counts_are_linear() {
        assert_eq!(Family::ParChain.build(1).num_links(), 2);
        for k in [1, 5, 64] {
            assert_eq!(Family::ParChain.build(k).num_links(), 3 * k - 1);
            assert_eq!(Family::TensorFan.build(k).num_links(), 3 * k - 1);
            assert_eq!(Family::Figure19.build(k).count(LinkKind::Par), 2 * k);
            assert_eq!(Family::Figure19.build(k).num_links(), 6 * k - 1);
            assert_eq!(Family::Figure21.build(k).num_links(), 12 * k - 2);
        }
    }

    #[test]
    fn build_is_deterministic() {
        for f in Family::ALL {
            assert_eq!(to_json(&f.build(7)), to_json(&f.build(7)));
        }
    }
}
