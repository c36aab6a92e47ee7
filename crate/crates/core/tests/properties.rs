//! Randomized invariants over catalog groups.

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use cosetlab::coset::{coset_of, left_cosets, product_set, translate, CosetSpace};
use cosetlab::{catalog, enumerate_subgroups, intersect, FiniteGroup, Subgroup};

type Entry = (Arc<FiniteGroup>, Vec<Subgroup>);

fn groups() -> &'static Vec<Entry> {
    static GROUPS: OnceLock<Vec<Entry>> = OnceLock::new();
    GROUPS.get_or_init(|| {
        catalog::groups_up_to(24)
            .into_iter()
            .map(|g| {
                let g = Arc::new(g);
                let l = enumerate_subgroups(&g, 10_000).unwrap();
                (g, l)
            })
            .collect()
    })
}

fn pick() -> impl Strategy<Value = (usize, usize, usize, usize, usize)> {
    (
        0..groups().len(),
        any::<usize>(),
        any::<usize>(),
        any::<usize>(),
        any::<usize>(),
    )
}

proptest! {
    #[test]
    fn cosets_partition_the_group((gi, hi, _, x, _) in pick()) {
        let (g, l) = &groups()[gi];
        let h = &l[hi % l.len()];
        let cosets = left_cosets(h);
        prop_assert_eq!(cosets.len() * h.order(), g.order());
        let total: usize = cosets.iter().map(|c| c.len()).sum();
        prop_assert_eq!(total, g.order());
        let x = x % g.order();
        let c = coset_of(x, h).unwrap();
        prop_assert!(c.contains(x));
        prop_assert_eq!(CosetSpace::new(h).index_of(x), CosetSpace::new(h).index_of(c.rep()));
    }

    #[test]
    fn product_size_formula((gi, hi, ki, _, _) in pick()) {
        let (_, l) = &groups()[gi];
        let (h, k) = (&l[hi % l.len()], &l[ki % l.len()]);
        let p = product_set(h, k).unwrap();
        let hk = intersect(h, k).unwrap();
        prop_assert_eq!(p.len() * hk.order(), h.order() * k.order());
    }

    #[test]
    fn disjointness_is_translation_invariant((gi, hi, ki, x, a) in pick()) {
        let (g, l) = &groups()[gi];
        let n = g.order();
        let (h, k) = (&l[hi % l.len()], &l[ki % l.len()]);
        let (x, y, a) = (x % n, (x / n) % n, a % n);
        let xh = translate(g, x, h.bits());
        let yk = translate(g, y, k.bits());
        let axh = translate(g, a, &xh);
        let ayk = translate(g, a, &yk);
        prop_assert_eq!(xh.is_disjoint(&yk), axh.is_disjoint(&ayk));
    }

    #[test]
    fn inverse_and_identity_laws((gi, x, y, _, _) in pick()) {
        let (g, _) = &groups()[gi];
        let n = g.order();
        let (x, y) = (x % n, y % n);
        prop_assert_eq!(g.mul(x, g.inv(x)), g.identity());
        prop_assert_eq!(g.mul(g.identity(), x), x);
        prop_assert_eq!(g.inv(g.mul(x, y)), g.mul(g.inv(y), g.inv(x)));
    }
}
