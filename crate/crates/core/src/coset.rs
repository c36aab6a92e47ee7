//! Left cosets, coset spaces and product sets.

use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::subgroup::{intersect_all, Subgroup};

/// `x·S` for an element set `S`.
pub fn translate(g: &FiniteGroup, x: usize, set: &BitSet) -> BitSet {
    let mut out = BitSet::new(g.order());
    for s in set {
        out.insert(g.mul(x, s));
    }
    out
}

/// A left coset `xH`, identified by its smallest element.
#[derive(Clone, PartialEq, Eq)]
pub struct LeftCoset {
    subgroup: Subgroup,
    rep: usize,
    elements: BitSet,
}

impl fmt::Debug for LeftCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.rep, self.elements)
    }
}

impl LeftCoset {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Canonical representative: the minimum element id of the coset.
    pub fn rep(&self) -> usize {
        self.rep
    }

    pub fn bits(&self) -> &BitSet {
        &self.elements
    }

    pub fn elements(&self) -> Vec<usize> {
        self.elements.to_vec()
    }

    pub fn len(&self) -> usize {
        self.subgroup.order()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.contains(x)
    }

    pub fn is_disjoint(&self, other: &LeftCoset) -> bool {
        self.elements.is_disjoint(&other.elements)
    }
}

/// `xH` with its canonical representative.
pub fn coset_of(x: usize, h: &Subgroup) -> Result<LeftCoset> {
    let g = h.parent();
    g.check_element(x)?;
    let elements = translate(g, x, h.bits());
    let rep = elements.first().expect("cosets are non-empty");
    Ok(LeftCoset {
        subgroup: h.clone(),
        rep,
        elements,
    })
}

/// The partition `G/H`, with a lookup from element to coset number.
///
/// Cosets are numbered in increasing order of their representatives.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    subgroup: Subgroup,
    cosets: Vec<BitSet>,
    reps: Vec<usize>,
    coset_of: Vec<u32>,
}

impl CosetSpace {
    pub fn new(h: &Subgroup) -> Self {
        let g = h.parent();
        let n = g.order();
        let mut coset_of = vec![u32::MAX; n];
        let mut cosets = Vec::with_capacity(h.index());
        let mut reps = Vec::with_capacity(h.index());
        for x in 0..n {
            if coset_of[x] != u32::MAX {
                continue;
            }
            // x is the smallest element not yet covered, hence the minimum
            // of its own coset.
            let bits = translate(g, x, h.bits());
            for y in &bits {
                coset_of[y] = cosets.len() as u32;
            }
            reps.push(x);
            cosets.push(bits);
        }
        CosetSpace {
            subgroup: h.clone(),
            cosets,
            reps,
            coset_of,
        }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// `[G:H]`.
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn coset(&self, i: usize) -> &BitSet {
        &self.cosets[i]
    }

    pub fn cosets(&self) -> &[BitSet] {
        &self.cosets
    }

    pub fn rep(&self, i: usize) -> usize {
        self.reps[i]
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    /// Number of the coset containing `x`.
    #[inline]
    pub fn index_of(&self, x: usize) -> usize {
        self.coset_of[x] as usize
    }

    pub fn left_coset(&self, i: usize) -> LeftCoset {
        LeftCoset {
            subgroup: self.subgroup.clone(),
            rep: self.reps[i],
            elements: self.cosets[i].clone(),
        }
    }
}

/// `G/H` sorted by representative: `[G:H]` pairwise disjoint cosets
/// covering `G`.
pub fn left_cosets(h: &Subgroup) -> Vec<LeftCoset> {
    let space = CosetSpace::new(h);
    (0..space.len()).map(|i| space.left_coset(i)).collect()
}

/// The set `HK = {hk}`, which is a subgroup exactly when `HK = KH`.
#[derive(Clone, Debug)]
pub struct ProductSet {
    elements: BitSet,
    left: Subgroup,
    right: Subgroup,
    is_subgroup: bool,
}

impl ProductSet {
    pub fn bits(&self) -> &BitSet {
        &self.elements
    }

    pub fn elements(&self) -> Vec<usize> {
        self.elements.to_vec()
    }

    pub fn len(&self) -> usize {
        self.elements.count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn left_factor(&self) -> &Subgroup {
        &self.left
    }

    pub fn right_factor(&self) -> &Subgroup {
        &self.right
    }

    pub fn is_subgroup(&self) -> bool {
        self.is_subgroup
    }

    /// The product as a [`Subgroup`]; fails unless [`Self::is_subgroup`].
    pub fn promote(&self) -> Result<Subgroup> {
        if !self.is_subgroup {
            return Err(Error::NotASubgroup(format!(
                "product set of size {} is not closed",
                self.len()
            )));
        }
        Ok(Subgroup::from_bits_unchecked(
            self.left.parent().clone(),
            self.elements.clone(),
        ))
    }
}

/// Raw element set `{ab : a ∈ A, b ∈ B}`.
pub fn product_bits(g: &FiniteGroup, a: &BitSet, b: &BitSet) -> BitSet {
    let mut out = BitSet::new(g.order());
    for x in a {
        for y in b {
            out.insert(g.mul(x, y));
        }
    }
    out
}

/// Whether an element set is closed under the group operation.
pub fn is_closed(g: &FiniteGroup, set: &BitSet) -> bool {
    set.iter()
        .all(|a| set.iter().all(|b| set.contains(g.mul(a, b))))
}

/// `HK`, with subgroup-ness decided by a closure check and cross-checked
/// against `HK = KH`.
pub fn product_set(h: &Subgroup, k: &Subgroup) -> Result<ProductSet> {
    h.check_parent(k)?;
    let g = h.parent();
    let hk = product_bits(g, h.bits(), k.bits());
    let closed = is_closed(g, &hk);
    let commutes = hk == product_bits(g, k.bits(), h.bits());
    if closed != commutes {
        return Err(Error::Inconsistent(format!(
            "HK closed = {closed} but HK = KH is {commutes}"
        )));
    }
    Ok(ProductSet {
        elements: hk,
        left: h.clone(),
        right: k.clone(),
        is_subgroup: closed,
    })
}

/// `|HK| = |H|·|K| / |H ∩ K|`, from a single word-level intersection count.
pub fn product_size(h: &Subgroup, k: &Subgroup) -> Result<usize> {
    h.check_parent(k)?;
    Ok(h.order() * k.order() / h.bits().intersection_count(k.bits()))
}

/// Number of distinct left cosets of `K` making up `HK`, counted directly.
pub fn cosets_of_k_in_product(h: &Subgroup, k: &Subgroup) -> Result<usize> {
    h.check_parent(k)?;
    let g = h.parent();
    let space = CosetSpace::new(k);
    let mut hit = BitSet::new(space.len());
    for x in &product_bits(g, h.bits(), k.bits()) {
        hit.insert(space.index_of(x));
    }
    Ok(hit.count())
}

/// Whether some cosets `xH` and `yK` are disjoint, decided by `|HK| < |G|`.
pub fn disjointable(h: &Subgroup, k: &Subgroup) -> Result<bool> {
    Ok(product_size(h, k)? < h.parent().order())
}

/// Reference scan over every pair of coset representatives for a disjoint
/// pair `xH ∩ yK = ∅`. Quadratic in the indices; kept as an oracle for
/// [`disjointable`].
pub fn has_disjoint_coset_pair(h: &Subgroup, k: &Subgroup) -> Result<bool> {
    h.check_parent(k)?;
    let hs = CosetSpace::new(h);
    let ks = CosetSpace::new(k);
    Ok(hs
        .cosets()
        .iter()
        .any(|a| ks.cosets().iter().any(|b| a.is_disjoint(b))))
}

/// `C₁ ∩ … ∩ Cₘ`. When non-empty this is a single left coset of
/// `H₁ ∩ … ∩ Hₘ`.
pub fn coset_meet(cosets: &[LeftCoset]) -> Result<Option<LeftCoset>> {
    let (first, rest) = cosets.split_first().ok_or(Error::EmptyList)?;
    let mut bits = first.elements.clone();
    for c in rest {
        first.subgroup.check_parent(&c.subgroup)?;
        bits.intersect_with(&c.elements);
    }
    let Some(rep) = bits.first() else {
        return Ok(None);
    };
    let subgroups: Vec<&Subgroup> = cosets.iter().map(|c| &c.subgroup).collect();
    Ok(Some(LeftCoset {
        subgroup: intersect_all(&subgroups)?,
        rep,
        elements: bits,
    }))
}

/// Number of cosets `C ∈ G/H` meeting `K`, by direct scan.
pub fn touching_count(h: &Subgroup, k: &Subgroup) -> Result<usize> {
    h.check_parent(k)?;
    Ok(CosetSpace::new(h)
        .cosets()
        .iter()
        .filter(|c| c.intersects(k.bits()))
        .count())
}
