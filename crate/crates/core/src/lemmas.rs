//! Property suite for the coset lemmas and counting identities.
//!
//! Every check compares two independently computed quantities. Groups up to
//! [`LemmaConfig::exhaustive_max_order`] are checked over all ordered
//! subgroup pairs, all subgroup triples (as multisets) and all nested
//! quadruples; larger groups are checked on seeded random samples.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::coset::{
    coset_meet, cosets_of_k_in_product, disjointable, has_disjoint_coset_pair, product_bits,
    product_set, touching_count, translate, CosetSpace,
};
use crate::counting::{
    check_triple_inequalities, closed_form_census, enumerate_census, gcd, strict_upper_for_gcd,
    DEFAULT_CENSUS_CAP,
};
use crate::error::Result;
use crate::group::FiniteGroup;
use crate::subgroup::{intersect, intersect_all, Subgroup};

/// Identifiers of the checked statements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    /// `HK` is a subgroup iff `HK = KH`.
    #[serde(rename = "L2.1.i")]
    ProductSubgroup,
    /// `HK` is a union of `[H : H∩K]` left cosets of `K`.
    #[serde(rename = "L2.1.ii")]
    ProductCosetCount,
    /// Coprime indices force `HK = G`.
    #[serde(rename = "L2.1.iii")]
    CoprimeProduct,
    /// `HK = G` iff every `xH` meets every `yK`.
    #[serde(rename = "L2.1.iv")]
    Disjointability,
    /// Disjoint `xH`, `yK` with `HK = KH` give disjoint `xHK`, `yHK`.
    #[serde(rename = "L2.1.v")]
    ProductCosetDisjointness,
    /// Meeting coset tuples correspond to cosets of the intersection.
    #[serde(rename = "L3.2")]
    MeetBijection,
    /// `[K : H∩K]` cosets of `H` meet `K`.
    #[serde(rename = "L3.3")]
    TouchingCount,
    /// Sub-coset disjointness for nested pairs with equal intersections.
    #[serde(rename = "R3.1")]
    SubCosetDisjointness,
    /// `[Gi∩Gj : Gi∩Gj∩Gk] <= [Gi : Gi∩Gk]` and `r_ijk <= r_ij·r_ik`.
    #[serde(rename = "E3.1")]
    PivotInequality,
    /// Census identities and the strict bound on `r_ijk`.
    #[serde(rename = "E3.2")]
    CensusBound,
    /// `[G : Gi∩Gj]` divides `[G : Gi∩Gj∩Gk]`.
    #[serde(rename = "E3.4")]
    IndexDivisibility,
}

impl LemmaId {
    pub const ALL: [LemmaId; 11] = [
        LemmaId::ProductSubgroup,
        LemmaId::ProductCosetCount,
        LemmaId::CoprimeProduct,
        LemmaId::Disjointability,
        LemmaId::ProductCosetDisjointness,
        LemmaId::MeetBijection,
        LemmaId::TouchingCount,
        LemmaId::SubCosetDisjointness,
        LemmaId::PivotInequality,
        LemmaId::CensusBound,
        LemmaId::IndexDivisibility,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::ProductSubgroup => "L2.1.i",
            LemmaId::ProductCosetCount => "L2.1.ii",
            LemmaId::CoprimeProduct => "L2.1.iii",
            LemmaId::Disjointability => "L2.1.iv",
            LemmaId::ProductCosetDisjointness => "L2.1.v",
            LemmaId::MeetBijection => "L3.2",
            LemmaId::TouchingCount => "L3.3",
            LemmaId::SubCosetDisjointness => "R3.1",
            LemmaId::PivotInequality => "E3.1",
            LemmaId::CensusBound => "E3.2",
            LemmaId::IndexDivisibility => "E3.4",
        }
    }
}

impl std::fmt::Display for LemmaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct LemmaConfig {
    /// Groups up to this order are checked exhaustively.
    pub exhaustive_max_order: usize,
    /// Samples per family (pairs, triples, quadruples) above that order.
    pub samples: usize,
    pub seed: u64,
    pub census_cap: u64,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        LemmaConfig {
            exhaustive_max_order: 24,
            samples: 10_000,
            seed: 0,
            census_cap: DEFAULT_CENSUS_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaTally {
    pub id: LemmaId,
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    /// Instances that could not be checked (census above its cap).
    pub skipped: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteExecution {
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaSummary {
    pub group: String,
    pub order: usize,
    pub mode: SuiteMode,
    pub seed: u64,
    pub subgroup_count: usize,
    pub pairs: u64,
    pub triples: u64,
    pub quadruples: u64,
    pub lemmas: Vec<LemmaTally>,
    /// Triples whose pairwise-meeting count exceeds the all-meet count.
    pub strict_triple_excess: u64,
    /// The first few failures, for debugging.
    pub failures: Vec<String>,
    pub execution: SuiteExecution,
}

impl LemmaSummary {
    pub fn total_failures(&self) -> u64 {
        self.lemmas.iter().map(|t| t.failed).sum()
    }

    pub fn tally(&self, id: LemmaId) -> &LemmaTally {
        self.lemmas
            .iter()
            .find(|t| t.id == id)
            .expect("every lemma id has a tally")
    }
}

const MAX_RECORDED_FAILURES: usize = 20;

struct Tallies {
    counts: BTreeMap<LemmaId, LemmaTally>,
    failures: Vec<String>,
    strict_triple_excess: u64,
}

impl Tallies {
    fn new() -> Self {
        Tallies {
            counts: LemmaId::ALL
                .iter()
                .map(|&id| {
                    (
                        id,
                        LemmaTally {
                            id,
                            checked: 0,
                            passed: 0,
                            failed: 0,
                            skipped: 0,
                        },
                    )
                })
                .collect(),
            failures: Vec::new(),
            strict_triple_excess: 0,
        }
    }

    fn record(&mut self, id: LemmaId, ok: bool, context: impl FnOnce() -> String) {
        let t = self.counts.get_mut(&id).unwrap();
        t.checked += 1;
        if ok {
            t.passed += 1;
        } else {
            t.failed += 1;
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(format!("{id}: {}", context()));
            }
        }
    }

    /// Records the outcome of a fallible check; an error counts as failure.
    fn record_result(&mut self, id: LemmaId, res: Result<bool>, context: impl FnOnce() -> String) {
        match res {
            Ok(ok) => self.record(id, ok, context),
            Err(e) => self.record(id, false, || format!("{} ({e})", context())),
        }
    }

    fn skip(&mut self, id: LemmaId) {
        self.counts.get_mut(&id).unwrap().skipped += 1;
    }
}

fn describe(subs: &[&Subgroup]) -> String {
    let parts: Vec<String> = subs.iter().map(|s| format!("{:?}", s.elements())).collect();
    parts.join(" / ")
}

/// Runs every pair-level check on the ordered pair `(h, k)`.
fn check_pair(t: &mut Tallies, h: &Subgroup, k: &Subgroup) {
    let g = h.parent();
    let n = g.order();
    let ctx = || describe(&[h, k]);

    // (i): closure of HK against HK = KH, both computed here.
    t.record_result(
        LemmaId::ProductSubgroup,
        product_set(h, k).map(|p| {
            let kh = product_bits(g, k.bits(), h.bits());
            let promoted = Subgroup::from_bits(g.clone(), p.bits().clone()).is_ok();
            p.is_subgroup() == (p.bits() == &kh) && promoted == p.is_subgroup()
        }),
        ctx,
    );

    let hk = intersect(h, k).expect("same parent");
    let expected_cosets = h.order() / hk.order();
    t.record_result(
        LemmaId::ProductCosetCount,
        cosets_of_k_in_product(h, k).and_then(|c| {
            let size = product_set(h, k)?.len();
            Ok(c == expected_cosets && size == h.order() * k.order() / hk.order())
        }),
        ctx,
    );

    if gcd(h.index() as u64, k.index() as u64) == 1 {
        t.record(
            LemmaId::CoprimeProduct,
            product_bits(g, h.bits(), k.bits()).count() == n,
            ctx,
        );
    }

    t.record_result(
        LemmaId::Disjointability,
        disjointable(h, k).and_then(|d| Ok(d == has_disjoint_coset_pair(h, k)?)),
        ctx,
    );

    let hk_set = product_bits(g, h.bits(), k.bits());
    if hk_set == product_bits(g, k.bits(), h.bits()) {
        let hs = CosetSpace::new(h);
        let ks = CosetSpace::new(k);
        let mut ok = true;
        for (xc, &x) in hs.cosets().iter().zip(hs.reps()) {
            let x_hk = translate(g, x, &hk_set);
            for (yc, &y) in ks.cosets().iter().zip(ks.reps()) {
                if xc.is_disjoint(yc) && x_hk.intersects(&translate(g, y, &hk_set)) {
                    ok = false;
                }
            }
        }
        t.record(LemmaId::ProductCosetDisjointness, ok, ctx);
    }

    t.record_result(LemmaId::MeetBijection, meet_bijection_pair(h, k), ctx);

    t.record_result(
        LemmaId::TouchingCount,
        touching_count(h, k).map(|c| c == k.order() / hk.order()),
        ctx,
    );
}

/// Coset pairs with non-empty meet: each meet must be a coset of `H ∩ K`,
/// no two pairs may share a meet, and their number must be `[G : H∩K]`.
fn meet_bijection_pair(h: &Subgroup, k: &Subgroup) -> Result<bool> {
    let g = h.parent();
    let hk = intersect(h, k)?;
    let hs = CosetSpace::new(h);
    let ks = CosetSpace::new(k);
    let target = CosetSpace::new(&hk);
    let mut hit = BitSet::new(target.len());
    let mut meeting = 0usize;
    for a in 0..hs.len() {
        for b in 0..ks.len() {
            let meet = hs.coset(a).intersection(ks.coset(b));
            let Some(x) = meet.first() else { continue };
            meeting += 1;
            let c = target.index_of(x);
            if target.coset(c) != &meet || !hit.insert(c) {
                return Ok(false);
            }
        }
    }
    // Spot-check the public operation against the same meet.
    let first = [
        crate::coset::coset_of(g.identity(), h)?,
        crate::coset::coset_of(g.identity(), k)?,
    ];
    let via_op = coset_meet(&first)?.map(|c| c.bits().clone());
    Ok(meeting == hk.index()
        && via_op.as_ref() == Some(target.coset(target.index_of(g.identity()))))
}

/// Runs every triple-level check on `(gi, gj, gk)`.
fn check_triple(t: &mut Tallies, gi: &Subgroup, gj: &Subgroup, gk: &Subgroup, census_cap: u64) {
    let ctx = || describe(&[gi, gj, gk]);

    let diag = match check_triple_inequalities(gi, gj, gk) {
        Ok(d) => d,
        Err(e) => {
            let msg = format!("{} ({e})", ctx());
            for id in [
                LemmaId::PivotInequality,
                LemmaId::IndexDivisibility,
                LemmaId::CensusBound,
            ] {
                t.record(id, false, || msg.clone());
            }
            return;
        }
    };
    t.record(
        LemmaId::PivotInequality,
        diag.pivot_checks.iter().all(|c| c.holds)
            && diag.r_product_holds.is_none_or(|h| h.iter().all(|&b| b)),
        ctx,
    );
    t.record(
        LemmaId::IndexDivisibility,
        diag.divisibility_holds.iter().all(|&b| b)
            && diag
                .gcd_hypothesis
                .as_ref()
                .is_none_or(|h| h.holds.iter().all(|&b| b)),
        ctx,
    );

    let closed = match closed_form_census(gi, gj, gk) {
        Ok(c) => c,
        Err(e) => {
            t.record(LemmaId::CensusBound, false, || format!("{} ({e})", ctx()));
            return;
        }
    };
    if closed.total > census_cap {
        t.skip(LemmaId::CensusBound);
        t.skip(LemmaId::MeetBijection);
        return;
    }
    let e = match enumerate_census(gi, gj, gk) {
        Ok(e) => e,
        Err(err) => {
            t.record(LemmaId::CensusBound, false, || format!("{} ({err})", ctx()));
            return;
        }
    };

    // Meeting triples are counted by [G : Gi∩Gj∩Gk].
    let triple_index = intersect_all(&[gi, gj, gk]).expect("same parent").index() as u64;
    t.record(LemmaId::MeetBijection, e.meet_all == triple_index, ctx);

    if e.s_triple > e.meet_all {
        t.strict_triple_excess += 1;
    }
    let sum = |xs: [u64; 3]| xs.iter().map(|&x| x as i128).sum::<i128>();
    let inclusion_exclusion =
        e.total as i128 - sum(e.s_pair) + sum(e.s_pair_pair) - e.s_triple as i128;
    let upper = e.total as i128 - sum(e.s_pair) + sum(e.s_pair_pair) - e.meet_all as i128;
    let mut ok = e.total == closed.total
        && e.s_pair == closed.s_pair
        && e.s_pair_pair == closed.s_pair_pair
        && e.meet_all == closed.meet_all
        && e.s_triple >= e.meet_all
        && inclusion_exclusion == e.n_disjoint as i128
        && e.n_disjoint as i128 <= upper;
    if let Some(h) = &diag.gcd_hypothesis {
        if e.n_disjoint > 0 {
            let [a, b, c] = diag.r_pairs;
            ok &= (diag.r_triple as i64) < strict_upper_for_gcd(h.d, a, b, c);
        }
    }
    t.record(LemmaId::CensusBound, ok, || {
        format!("{} closed {closed:?} enumerated {e:?}", ctx())
    });
}

/// Checks nested quadruples `H₁ ≤ G₁`, `H₂ ≤ G₂` with `H₁ ∩ H₂ = G₁ ∩ G₂`:
/// for distinct cosets `aH₁ ≠ ãH₁` inside one coset of `G₁`, and every
/// choice of `ã`, `aH₁ ∩ ãH₂ = ∅`.
fn check_quadruple(t: &mut Tallies, g1: &Subgroup, g2: &Subgroup, h1: &Subgroup, h2: &Subgroup) {
    let g = g1.parent();
    let h1_space = CosetSpace::new(h1);
    let g1_space = CosetSpace::new(g1);
    let mut ok = true;
    'outer: for (a, a_coset) in h1_space.cosets().iter().enumerate() {
        let block = g1_space.coset(g1_space.index_of(h1_space.rep(a)));
        for other in block {
            if h1_space.index_of(other) == a {
                continue;
            }
            if a_coset.intersects(&translate(g, other, h2.bits())) {
                ok = false;
                break 'outer;
            }
        }
    }
    t.record(LemmaId::SubCosetDisjointness, ok, || {
        describe(&[g1, g2, h1, h2])
    });
}

/// Subgroups of `within` containing `floor`.
fn between<'a>(lattice: &'a [Subgroup], floor: &Subgroup, within: &Subgroup) -> Vec<&'a Subgroup> {
    lattice
        .iter()
        .filter(|s| floor.is_subgroup_of(s) && s.is_subgroup_of(within))
        .collect()
}

/// Runs the suite on one group.
pub fn run_lemma_suite(
    g: &Arc<FiniteGroup>,
    lattice: &[Subgroup],
    config: &LemmaConfig,
) -> Result<LemmaSummary> {
    let started = Instant::now();
    let mut t = Tallies::new();
    let m = lattice.len();
    let (mut pairs, mut triples, mut quadruples) = (0u64, 0u64, 0u64);

    let mode = if g.order() <= config.exhaustive_max_order {
        SuiteMode::Exhaustive
    } else {
        SuiteMode::Sampled
    };

    match mode {
        SuiteMode::Exhaustive => {
            for h in lattice {
                for k in lattice {
                    check_pair(&mut t, h, k);
                    pairs += 1;
                }
            }
            for i in 0..m {
                for j in i..m {
                    for k in j..m {
                        check_triple(
                            &mut t,
                            &lattice[i],
                            &lattice[j],
                            &lattice[k],
                            config.census_cap,
                        );
                        triples += 1;
                    }
                }
            }
            for g1 in lattice {
                for g2 in lattice {
                    let floor = intersect(g1, g2)?;
                    let ones = between(lattice, &floor, g1);
                    let twos = between(lattice, &floor, g2);
                    for h1 in &ones {
                        for h2 in &twos {
                            check_quadruple(&mut t, g1, g2, h1, h2);
                            quadruples += 1;
                        }
                    }
                }
            }
        }
        SuiteMode::Sampled => {
            log::info!(
                "sampling {} pairs, triples and quadruples on {} (seed {})",
                config.samples,
                g.label(),
                config.seed
            );
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            for _ in 0..config.samples {
                let (a, b) = (rng.random_range(0..m), rng.random_range(0..m));
                check_pair(&mut t, &lattice[a], &lattice[b]);
                pairs += 1;
            }
            for _ in 0..config.samples {
                let (a, b, c) = (
                    rng.random_range(0..m),
                    rng.random_range(0..m),
                    rng.random_range(0..m),
                );
                check_triple(
                    &mut t,
                    &lattice[a],
                    &lattice[b],
                    &lattice[c],
                    config.census_cap,
                );
                triples += 1;
            }
            for _ in 0..config.samples {
                let (g1, g2) = (
                    &lattice[rng.random_range(0..m)],
                    &lattice[rng.random_range(0..m)],
                );
                let floor = intersect(g1, g2)?;
                let ones = between(lattice, &floor, g1);
                let twos = between(lattice, &floor, g2);
                let h1 = ones[rng.random_range(0..ones.len())];
                let h2 = twos[rng.random_range(0..twos.len())];
                check_quadruple(&mut t, g1, g2, h1, h2);
                quadruples += 1;
            }
        }
    }

    Ok(LemmaSummary {
        group: g.label().to_string(),
        order: g.order(),
        mode,
        seed: config.seed,
        subgroup_count: m,
        pairs,
        triples,
        quadruples,
        lemmas: t.counts.into_values().collect(),
        strict_triple_excess: t.strict_triple_excess,
        failures: t.failures,
        execution: SuiteExecution {
            elapsed_ms: started.elapsed().as_millis() as u64,
        },
    })
}
