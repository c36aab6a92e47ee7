//! Exhaustive search for `k` pairwise disjoint left cosets `a₁G₁, …, aₖGₖ`
//! whose indices pairwise have gcd below `k`.
//!
//! Such a family would be a counterexample to the gcd conjecture for
//! disjoint cosets. It cannot exist for `k <= 4`; for larger `k` the
//! question is open and the search only produces evidence.
//!
//! The search is pruned in two stages. Pairs of subgroups with gcd below
//! `k` must also be *disjointable* (`|HK| < |G|`), otherwise every coset of
//! one meets every coset of the other. Multisets of `k` subgroups in which
//! every pair passes both tests are the candidate cliques; only those are
//! searched, by backtracking over coset choices with the first coset pinned
//! to the subgroup itself.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::coset::{disjointable, CosetSpace};
use crate::counting::gcd;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::subgroup::{enumerate_subgroups, Subgroup, DEFAULT_SUBGROUP_CAP};

pub const DEFAULT_CLIQUE_CAP: usize = 1_000_000;
pub const K_RANGE: std::ops::RangeInclusive<usize> = 2..=6;

/// Largest `k` for which a violation is impossible.
pub const PROVEN_MAX_K: usize = 4;

pub const OPEN_CASE_NOTE: &str = "conjecture open — absence of violations is evidence, not proof";

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub clique_cap: usize,
    pub subgroup_cap: usize,
    /// Worker threads; results do not depend on this.
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            clique_cap: DEFAULT_CLIQUE_CAP,
            subgroup_cap: DEFAULT_SUBGROUP_CAP,
            jobs: 1,
        }
    }
}

/// Index gcd and disjointability of one unordered subgroup pair, by
/// position in the lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairStats {
    pub left: usize,
    pub right: usize,
    pub gcd_index: u64,
    pub disjointable: bool,
}

/// All unordered pairs `left <= right` of the lattice.
pub fn pair_table(lattice: &[Subgroup]) -> Result<Vec<PairStats>> {
    let mut out = Vec::with_capacity(lattice.len() * (lattice.len() + 1) / 2);
    for (i, h) in lattice.iter().enumerate() {
        for (j, k) in lattice.iter().enumerate().skip(i) {
            out.push(PairStats {
                left: i,
                right: j,
                gcd_index: gcd(h.index() as u64, k.index() as u64),
                disjointable: disjointable(h, k)?,
            });
        }
    }
    Ok(out)
}

fn check_k(k: usize) -> Result<()> {
    if K_RANGE.contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidK(k))
    }
}

/// Every size-`k` multiset of lattice positions, as a non-decreasing list,
/// in which each pair has index gcd below `k` and is disjointable.
pub fn candidate_cliques(
    lattice_len: usize,
    pairs: &[PairStats],
    k: usize,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    check_k(k)?;
    let mut compatible = vec![vec![false; lattice_len]; lattice_len];
    for p in pairs {
        let ok = p.gcd_index < k as u64 && p.disjointable;
        compatible[p.left][p.right] = ok;
        compatible[p.right][p.left] = ok;
    }
    // Only subgroups compatible with something can take part.
    let usable: Vec<usize> = (0..lattice_len)
        .filter(|&i| compatible[i].iter().any(|&c| c))
        .collect();

    fn extend(
        usable: &[usize],
        compatible: &[Vec<bool>],
        from: usize,
        k: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        if cur.len() == k {
            if out.len() == cap {
                return Err(Error::CliqueCapExceeded { cap });
            }
            out.push(cur.clone());
            return Ok(());
        }
        for (pos, &x) in usable.iter().enumerate().skip(from) {
            if cur.iter().all(|&y| compatible[x][y]) {
                cur.push(x);
                extend(usable, compatible, pos, k, cur, out, cap)?;
                cur.pop();
            }
        }
        Ok(())
    }

    let mut out = Vec::new();
    extend(
        &usable,
        &compatible,
        0,
        k,
        &mut Vec::with_capacity(k),
        &mut out,
        cap,
    )?;
    Ok(out)
}

/// A family of `k` pairwise disjoint cosets with every index gcd below `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Violation {
    pub k: usize,
    /// Element lists of `G₁, …, Gₖ`.
    pub subgroups: Vec<Vec<usize>>,
    /// Lattice positions of the subgroups, when known.
    pub lattice_ids: Option<Vec<usize>>,
    /// Representatives `a₁, …, aₖ`.
    pub reps: Vec<usize>,
    pub gcd_matrix: Vec<Vec<u64>>,
}

impl Violation {
    /// Replays the witness against `g`: the cosets must be pairwise disjoint
    /// and every off-diagonal gcd must be below `k`.
    pub fn verify(&self, g: &Arc<FiniteGroup>) -> Result<bool> {
        let subs: Vec<Subgroup> = self
            .subgroups
            .iter()
            .map(|s| Subgroup::from_elements(g.clone(), s.iter().copied()))
            .collect::<Result<_>>()?;
        let cosets: Vec<BitSet> = subs
            .iter()
            .zip(&self.reps)
            .map(|(s, &a)| crate::coset::translate(g, a, s.bits()))
            .collect();
        let k = self.k as u64;
        for i in 0..subs.len() {
            for j in i + 1..subs.len() {
                let d = gcd(subs[i].index() as u64, subs[j].index() as u64);
                if d >= k || d != self.gcd_matrix[i][j] || cosets[i].intersects(&cosets[j]) {
                    return Ok(false);
                }
            }
        }
        Ok(subs.len() == self.k)
    }
}

fn gcd_matrix(subgroups: &[&Subgroup]) -> Vec<Vec<u64>> {
    subgroups
        .iter()
        .map(|a| {
            subgroups
                .iter()
                .map(|b| gcd(a.index() as u64, b.index() as u64))
                .collect()
        })
        .collect()
}

/// Backtracking core. Returns the chosen coset number per slot and the
/// number of coset placements tried.
fn search_spaces(spaces: &[&CosetSpace]) -> (Option<Vec<usize>>, u64) {
    let m = spaces.len();
    if m == 0 {
        return (None, 0);
    }
    // Fewest cosets first; ties keep the input order.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&s| spaces[s].len());

    let identity = spaces[order[0]].subgroup().parent().identity();
    let pinned = spaces[order[0]].index_of(identity);

    struct State<'a> {
        spaces: Vec<&'a CosetSpace>,
        same_as_prev: Vec<bool>,
        chosen: Vec<usize>,
        nodes: u64,
    }

    fn place(st: &mut State<'_>, depth: usize) -> bool {
        if depth == st.spaces.len() {
            return true;
        }
        let space = st.spaces[depth];
        // Equal subgroups in adjacent unpinned slots are interchangeable, so
        // their coset numbers are taken in increasing order.
        let start = if depth > 1 && st.same_as_prev[depth] {
            st.chosen[depth - 1] + 1
        } else {
            0
        };
        for c in start..space.len() {
            st.nodes += 1;
            let bits = space.coset(c);
            let clash = (0..depth).any(|d| st.spaces[d].coset(st.chosen[d]).intersects(bits));
            if clash {
                continue;
            }
            st.chosen.push(c);
            if place(st, depth + 1) {
                return true;
            }
            st.chosen.pop();
        }
        false
    }

    let ordered: Vec<&CosetSpace> = order.iter().map(|&s| spaces[s]).collect();
    let same_as_prev = (0..m)
        .map(|d| d > 0 && ordered[d].subgroup() == ordered[d - 1].subgroup())
        .collect();
    let mut st = State {
        spaces: ordered,
        same_as_prev,
        chosen: vec![pinned],
        nodes: 1,
    };
    if place(&mut st, 1) {
        let mut by_slot = vec![0; m];
        for (d, &slot) in order.iter().enumerate() {
            by_slot[slot] = st.chosen[d];
        }
        (Some(by_slot), st.nodes)
    } else {
        (None, st.nodes)
    }
}

fn witness(
    k: usize,
    subgroups: &[&Subgroup],
    spaces: &[&CosetSpace],
    chosen: &[usize],
) -> Violation {
    Violation {
        k,
        subgroups: subgroups.iter().map(|s| s.elements()).collect(),
        lattice_ids: None,
        reps: spaces.iter().zip(chosen).map(|(s, &c)| s.rep(c)).collect(),
        gcd_matrix: gcd_matrix(subgroups),
    }
}

/// Looks for pairwise disjoint cosets `a₁G₁, …, aₘGₘ` of the given
/// subgroups (repeats allowed) and returns the family as a witness.
///
/// The gcd condition is not checked here; use [`Violation::verify`] to tell
/// a real counterexample from a family whose gcds are too large.
pub fn search_disjoint_tuple(subgroups: &[&Subgroup]) -> Result<Option<Violation>> {
    if let Some((first, rest)) = subgroups.split_first() {
        for s in rest {
            first.check_parent(s)?;
        }
    }
    let spaces: Vec<CosetSpace> = subgroups.iter().map(|s| CosetSpace::new(s)).collect();
    let refs: Vec<&CosetSpace> = spaces.iter().collect();
    let (found, _) = search_spaces(&refs);
    Ok(found.map(|chosen| witness(subgroups.len(), subgroups, &refs, &chosen)))
}

/// Overall result of one sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// `k <= 4` and nothing was found, as the theorem requires.
    Confirmed,
    /// `k <= 4` and a violation was found: the implementation is wrong.
    ImplementationBug,
    /// `k >= 5`, nothing found.
    NoViolationsFound,
    /// `k >= 5`, violations found.
    ViolationsFound,
}

/// Wall-clock and environment details, excluded from determinism checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Execution {
    pub elapsed_ms: u64,
    pub jobs: usize,
    pub cache: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub group: String,
    pub order: usize,
    pub k: usize,
    pub subgroup_count: usize,
    pub candidate_cliques: u64,
    pub coset_tuples_examined: u64,
    pub violations: Vec<Violation>,
    pub outcome: Outcome,
    pub note: Option<String>,
    pub execution: Execution,
}

impl VerificationReport {
    /// True when no violations were found.
    pub fn confirmed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Enumerates the lattice and runs [`verify_with_lattice`].
pub fn verify_group(
    g: &Arc<FiniteGroup>,
    k: usize,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    check_k(k)?;
    let lattice = enumerate_subgroups(g, opts.subgroup_cap)?;
    verify_with_lattice(g, &lattice, k, opts)
}

/// Searches every candidate clique of `lattice` for `k` pairwise disjoint
/// cosets. Cliques are split across `opts.jobs` workers and merged in
/// clique order.
pub fn verify_with_lattice(
    g: &Arc<FiniteGroup>,
    lattice: &[Subgroup],
    k: usize,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    check_k(k)?;
    let started = Instant::now();
    let pairs = pair_table(lattice)?;
    let cliques = candidate_cliques(lattice.len(), &pairs, k, opts.clique_cap)?;

    let mut used = vec![false; lattice.len()];
    cliques.iter().flatten().for_each(|&i| used[i] = true);
    let spaces: Vec<Option<CosetSpace>> = lattice
        .iter()
        .zip(&used)
        .map(|(s, &u)| u.then(|| CosetSpace::new(s)))
        .collect();

    let search = |clique: &Vec<usize>| -> (Option<Violation>, u64) {
        let refs: Vec<&CosetSpace> = clique
            .iter()
            .map(|&i| spaces[i].as_ref().unwrap())
            .collect();
        let (found, nodes) = search_spaces(&refs);
        let violation = found.map(|chosen| {
            let subs: Vec<&Subgroup> = clique.iter().map(|&i| &lattice[i]).collect();
            let mut v = witness(k, &subs, &refs, &chosen);
            v.lattice_ids = Some(clique.clone());
            v
        });
        (violation, nodes)
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Inconsistent(format!("worker pool: {e}")))?;
    let results: Vec<(Option<Violation>, u64)> =
        pool.install(|| cliques.par_iter().map(search).collect());

    let coset_tuples_examined = results.iter().map(|(_, n)| n).sum();
    let mut violations = Vec::new();
    for v in results.into_iter().filter_map(|(v, _)| v) {
        if v.verify(g)? {
            violations.push(v);
        } else {
            return Err(Error::Inconsistent(format!(
                "search produced an invalid witness {v:?}"
            )));
        }
    }

    let proven = k <= PROVEN_MAX_K;
    let outcome = match (proven, violations.is_empty()) {
        (true, true) => Outcome::Confirmed,
        (true, false) => Outcome::ImplementationBug,
        (false, true) => Outcome::NoViolationsFound,
        (false, false) => Outcome::ViolationsFound,
    };
    if outcome == Outcome::ImplementationBug {
        log::error!(
            "{} violation(s) for k = {k} on {}: this contradicts a theorem and indicates a bug",
            violations.len(),
            g.label()
        );
    }
    Ok(VerificationReport {
        group: g.label().to_string(),
        order: g.order(),
        k,
        subgroup_count: lattice.len(),
        candidate_cliques: cliques.len() as u64,
        coset_tuples_examined,
        violations,
        outcome,
        note: (!proven).then(|| OPEN_CASE_NOTE.to_string()),
        execution: Execution {
            elapsed_ms: started.elapsed().as_millis() as u64,
            jobs: opts.jobs.max(1),
            cache: None,
        },
    })
}
