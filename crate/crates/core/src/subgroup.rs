//! Subgroups as element bitsets, and enumeration of the full subgroup lattice.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Default cap for [`enumerate_subgroups`].
pub const DEFAULT_SUBGROUP_CAP: usize = 10_000;

/// A subgroup of a shared parent group.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: BitSet,
    order: usize,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.elements)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        same_parent(&self.parent, &other.parent) && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

/// Lattice order: by order, then lexicographically by element list.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn same_parent(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Subgroup {
    /// Wraps a set already known to be a subgroup.
    pub(crate) fn from_bits_unchecked(parent: Arc<FiniteGroup>, elements: BitSet) -> Self {
        debug_assert_eq!(elements.universe(), parent.order());
        let order = elements.count();
        Subgroup {
            parent,
            elements,
            order,
        }
    }

    /// Validates that `elements` is non-empty and closed under the group
    /// operation and inverses.
    pub fn from_bits(parent: Arc<FiniteGroup>, elements: BitSet) -> Result<Self> {
        if elements.universe() != parent.order() {
            return Err(Error::NotASubgroup(
                "universe does not match parent order".into(),
            ));
        }
        if !elements.contains(parent.identity()) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        for a in &elements {
            if !elements.contains(parent.inv(a)) {
                return Err(Error::NotASubgroup(format!("missing inverse of {a}")));
            }
            for b in &elements {
                if !elements.contains(parent.mul(a, b)) {
                    return Err(Error::NotASubgroup(format!("not closed: {a}·{b}")));
                }
            }
        }
        Ok(Self::from_bits_unchecked(parent, elements))
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(
        parent: Arc<FiniteGroup>,
        ids: I,
    ) -> Result<Self> {
        let n = parent.order();
        let mut bits = BitSet::new(n);
        for id in ids {
            parent.check_element(id)?;
            bits.insert(id);
        }
        Self::from_bits(parent, bits)
    }

    /// `⟨gens⟩`.
    pub fn generated_by(parent: Arc<FiniteGroup>, gens: &[usize]) -> Result<Self> {
        for &g in gens {
            parent.check_element(g)?;
        }
        let bits = close(&parent, &[], gens);
        Ok(Self::from_bits_unchecked(parent, bits))
    }

    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let bits = BitSet::full(parent.order());
        Self::from_bits_unchecked(parent, bits)
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        let bits = BitSet::from_ids(parent.order(), [parent.identity()]);
        Self::from_bits_unchecked(parent, bits)
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn bits(&self) -> &BitSet {
        &self.elements
    }

    /// Members in ascending id order.
    pub fn elements(&self) -> Vec<usize> {
        self.elements.to_vec()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.elements.contains(x)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// `[G:H]`.
    #[inline]
    pub fn index(&self) -> usize {
        self.parent.order() / self.order
    }

    pub fn is_whole(&self) -> bool {
        self.order == self.parent.order()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.is_subset(&other.elements)
    }

    pub(crate) fn check_parent(&self, other: &Subgroup) -> Result<()> {
        if same_parent(&self.parent, &other.parent) {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }
}

/// `H ∩ K`. Its index is a common multiple of both input indices.
pub fn intersect(h: &Subgroup, k: &Subgroup) -> Result<Subgroup> {
    h.check_parent(k)?;
    Ok(Subgroup::from_bits_unchecked(
        h.parent.clone(),
        h.elements.intersection(&k.elements),
    ))
}

/// Intersection of any non-empty list of subgroups.
pub fn intersect_all(subgroups: &[&Subgroup]) -> Result<Subgroup> {
    let (first, rest) = subgroups.split_first().ok_or(Error::EmptyList)?;
    let mut bits = first.elements.clone();
    for s in rest {
        first.check_parent(s)?;
        bits.intersect_with(&s.elements);
    }
    Ok(Subgroup::from_bits_unchecked(first.parent.clone(), bits))
}

/// The subgroup generated by `base ∪ extra`. In a finite group the
/// multiplicative closure already contains all inverses.
fn close(g: &FiniteGroup, base: &[usize], extra: &[usize]) -> BitSet {
    let gens: Vec<usize> = base.iter().chain(extra).copied().collect();
    let mut bits = BitSet::from_ids(g.order(), [g.identity()]);
    let mut queue = vec![g.identity()];
    while let Some(x) = queue.pop() {
        for &s in &gens {
            let y = g.mul(x, s);
            if bits.insert(y) {
                queue.push(y);
            }
        }
    }
    bits
}

/// Every subgroup of `g`, each exactly once, sorted by order and then by
/// element list.
///
/// Starts from the cyclic subgroups and repeatedly forms `⟨H ∪ {x}⟩` for
/// every known `H` and every `x ∉ H` until no new subgroup appears. Only one
/// `x` per left coset `xH` is tried, since `⟨H, xh⟩ = ⟨H, x⟩`.
pub fn enumerate_subgroups(g: &Arc<FiniteGroup>, cap: usize) -> Result<Vec<Subgroup>> {
    let n = g.order();
    // (elements, generators) pairs; generators keep closures cheap.
    let mut found: Vec<(BitSet, Vec<usize>)> = Vec::new();
    let mut seen: HashSet<BitSet> = HashSet::new();

    let mut push =
        |bits: BitSet, gens: Vec<usize>, found: &mut Vec<(BitSet, Vec<usize>)>| -> Result<()> {
            if seen.insert(bits.clone()) {
                if found.len() == cap {
                    return Err(Error::SubgroupCountCapExceeded { cap });
                }
                found.push((bits, gens));
            }
            Ok(())
        };

    for x in 0..n {
        let gens = if x == g.identity() { vec![] } else { vec![x] };
        push(close(g, &[], &gens), gens, &mut found)?;
    }

    let mut next = 0;
    while next < found.len() {
        let (bits, gens) = found[next].clone();
        let mut covered = bits.clone();
        for x in 0..n {
            if covered.contains(x) {
                continue;
            }
            for h in &bits {
                covered.insert(g.mul(x, h));
            }
            let joined = close(g, &gens, &[x]);
            let mut new_gens = gens.clone();
            new_gens.push(x);
            push(joined, new_gens, &mut found)?;
        }
        next += 1;
    }

    let mut subgroups: Vec<Subgroup> = found
        .into_iter()
        .map(|(bits, _)| Subgroup::from_bits_unchecked(g.clone(), bits))
        .collect();
    subgroups.sort();
    Ok(subgroups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{load_group, GroupSpec, DEFAULT_ORDER_CAP};
    use std::collections::BTreeSet;

    fn named(name: &str) -> Arc<FiniteGroup> {
        Arc::new(load_group(&GroupSpec::named(name), DEFAULT_ORDER_CAP).unwrap())
    }

    /// Oracle: close every subset of size <= `max_gens` by naive fixed-point
    /// iteration over all pairwise products.
    fn brute_force_subgroups(g: &FiniteGroup, max_gens: usize) -> BTreeSet<Vec<usize>> {
        fn naive_close(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
            let mut set: BTreeSet<usize> = gens.iter().copied().collect();
            set.insert(g.identity());
            loop {
                let products: Vec<usize> = set
                    .iter()
                    .flat_map(|&a| set.iter().map(move |&b| g.mul(a, b)))
                    .collect();
                let before = set.len();
                set.extend(products);
                if set.len() == before {
                    return set.into_iter().collect();
                }
            }
        }
        fn rec(
            g: &FiniteGroup,
            start: usize,
            left: usize,
            cur: &mut Vec<usize>,
            out: &mut BTreeSet<Vec<usize>>,
        ) {
            out.insert(naive_close(g, cur));
            if left == 0 {
                return;
            }
            for x in start..g.order() {
                cur.push(x);
                rec(g, x + 1, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = BTreeSet::new();
        rec(g, 0, max_gens, &mut vec![], &mut out);
        out
    }

    #[test]
    fn c6_lattice() {
        let g = named("C6");
        let subs = enumerate_subgroups(&g, DEFAULT_SUBGROUP_CAP).unwrap();
        let lists: Vec<Vec<usize>> = subs.iter().map(Subgroup::elements).collect();
        assert_eq!(
            lists,
            vec![vec![0], vec![0, 3], vec![0, 2, 4], vec![0, 1, 2, 3, 4, 5]]
        );
        assert_eq!(brute_force_subgroups(&g, 3).len(), 4);
    }

    #[test]
    fn s3_and_s4_counts_match_oracle() {
        let s3 = named("S3");
        let subs = enumerate_subgroups(&s3, DEFAULT_SUBGROUP_CAP).unwrap();
        let orders: Vec<usize> = subs.iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
        assert_eq!(brute_force_subgroups(&s3, 3).len(), 6);

        let s4 = named("S4");
        let oracle = brute_force_subgroups(&s4, 3);
        assert_eq!(oracle.len(), 30);
        let subs = enumerate_subgroups(&s4, DEFAULT_SUBGROUP_CAP).unwrap();
        let ours: BTreeSet<Vec<usize>> = subs.iter().map(Subgroup::elements).collect();
        assert_eq!(ours, oracle);
    }

    #[test]
    fn lagrange_and_sorting() {
        let g = named("D6");
        let subs = enumerate_subgroups(&g, DEFAULT_SUBGROUP_CAP).unwrap();
        for w in subs.windows(2) {
            assert!(w[0] < w[1]);
        }
        for s in &subs {
            assert_eq!(g.order() % s.order(), 0);
            assert_eq!(s.index() * s.order(), g.order());
        }
    }

    #[test]
    fn subgroup_cap() {
        let g = named("S4");
        assert!(matches!(
            enumerate_subgroups(&g, 29),
            Err(Error::SubgroupCountCapExceeded { cap: 29 })
        ));
    }

    #[test]
    fn intersections() {
        let c6 = named("C6");
        let h = Subgroup::from_elements(c6.clone(), [0, 3]).unwrap();
        let k = Subgroup::from_elements(c6.clone(), [0, 2, 4]).unwrap();
        let hk = intersect(&h, &k).unwrap();
        assert_eq!(hk.elements(), vec![0]);
        assert_eq!(hk.index(), 6);
        assert_eq!(intersect(&h, &h).unwrap(), h);

        let c12 = named("C12");
        let a = Subgroup::from_elements(c12.clone(), [0, 4, 8]).unwrap();
        let b = Subgroup::from_elements(c12.clone(), [0, 6]).unwrap();
        let ab = intersect(&a, &b).unwrap();
        assert_eq!(ab.elements(), vec![0]);
        assert_eq!(ab.index(), 12);

        let other = named("C6");
        let foreign = Subgroup::from_elements(named("C4"), [0, 2]).unwrap();
        assert!(matches!(
            intersect(&h, &foreign),
            Err(Error::ParentMismatch)
        ));
        // Structurally equal parents are the same group.
        let h2 = Subgroup::from_elements(other, [0, 3]).unwrap();
        assert_eq!(intersect(&h, &h2).unwrap(), h);
    }

    #[test]
    fn rejects_non_subgroups() {
        let c6 = named("C6");
        assert!(Subgroup::from_elements(c6.clone(), [0, 1]).is_err());
        assert!(Subgroup::from_elements(c6.clone(), [3]).is_err());
        assert!(matches!(
            Subgroup::from_elements(c6, [0, 9]),
            Err(Error::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn generated_subgroups() {
        let s4 = named("S4");
        let all = Subgroup::generated_by(s4.clone(), &(0..24).collect::<Vec<_>>()).unwrap();
        assert!(all.is_whole());
        assert_eq!(Subgroup::generated_by(s4.clone(), &[]).unwrap().order(), 1);
    }
}
