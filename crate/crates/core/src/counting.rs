//! Counting over triples of coset spaces.
//!
//! For subgroups `Gi, Gj, Gk` the census looks at the set `S` of all coset
//! triples `(Ci, Cj, Ck)`, the subsets `S_ab` where `Ca` meets `Cb`, and the
//! number of pairwise disjoint triples. Each count is obtained twice: by
//! enumeration and from index formulas. The r-value of a subgroup tuple is
//! `[G : ⋂ Gi] / lcm([G : Gi])`, always a positive integer.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::coset::CosetSpace;
use crate::error::{Error, Result};
use crate::subgroup::{intersect_all, Subgroup};

/// Default limit on `|S|` for the enumerated census.
pub const DEFAULT_CENSUS_CAP: u64 = 1_000_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn index(s: &Subgroup) -> u64 {
    s.index() as u64
}

/// `[G : ⋂ subgroups]` for a non-empty list.
pub fn intersection_index(subgroups: &[&Subgroup]) -> Result<u64> {
    Ok(intersect_all(subgroups)?.index() as u64)
}

/// Normalized intersection index of two or three subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RValue {
    pub indices: Vec<u64>,
    pub intersection_index: u64,
    pub lcm_index: u64,
    pub r: u64,
}

pub fn r_value(subgroups: &[&Subgroup]) -> Result<RValue> {
    if !(2..=3).contains(&subgroups.len()) {
        return Err(Error::Arity(subgroups.len()));
    }
    let indices: Vec<u64> = subgroups.iter().map(|s| index(s)).collect();
    let lcm_index = indices.iter().copied().fold(1, lcm);
    let intersection_index = intersection_index(subgroups)?;
    if intersection_index % lcm_index != 0 {
        return Err(Error::Inconsistent(format!(
            "intersection index {intersection_index} not divisible by lcm {lcm_index}"
        )));
    }
    Ok(RValue {
        indices,
        intersection_index,
        lcm_index,
        r: intersection_index / lcm_index,
    })
}

/// Census of coset triples for `(Gi, Gj, Gk)`.
///
/// Pair slots are ordered `ij, ik, jk`; the pair-of-pairs slots are
/// `S_ij ∩ S_ik`, `S_ij ∩ S_jk`, `S_ik ∩ S_jk`. `total`, `s_pair`,
/// `s_pair_pair` and `meet_all` come from the index formulas (and were
/// matched against enumeration when `enumerated` is set). `s_triple` and
/// `n_disjoint` have no closed form and are only known from enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleCensus {
    pub indices: [u64; 3],
    pub total: u64,
    pub s_pair: [u64; 3],
    pub s_pair_pair: [u64; 3],
    pub meet_all: u64,
    pub s_triple: Option<u64>,
    pub n_disjoint: Option<u64>,
    pub enumerated: bool,
}

impl TripleCensus {
    /// `|S| − Σ|S_ab| + Σ|S_ab ∩ S_ac| − |S_ij ∩ S_ik ∩ S_jk|`.
    pub fn inclusion_exclusion(&self) -> Option<i128> {
        let s_triple = self.s_triple? as i128;
        let sum = |xs: &[u64; 3]| xs.iter().map(|&x| x as i128).sum::<i128>();
        Some(self.total as i128 - sum(&self.s_pair) + sum(&self.s_pair_pair) - s_triple)
    }
}

/// Counts from the index formulas alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormCensus {
    pub total: u64,
    pub s_pair: [u64; 3],
    pub s_pair_pair: [u64; 3],
    pub meet_all: u64,
}

/// Counts from walking every coset triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedCensus {
    pub total: u64,
    pub s_pair: [u64; 3],
    pub s_pair_pair: [u64; 3],
    pub s_triple: u64,
    pub meet_all: u64,
    pub n_disjoint: u64,
}

fn checked(a: u64, b: u64, what: &'static str) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::Overflow(what))
}

pub fn closed_form_census(gi: &Subgroup, gj: &Subgroup, gk: &Subgroup) -> Result<ClosedFormCensus> {
    let [ii, ij, ik] = [index(gi), index(gj), index(gk)];
    let p_ij = intersection_index(&[gi, gj])?;
    let p_ik = intersection_index(&[gi, gk])?;
    let p_jk = intersection_index(&[gj, gk])?;
    Ok(ClosedFormCensus {
        total: checked(checked(ii, ij, "|S|")?, ik, "|S|")?,
        s_pair: [
            checked(p_ij, ik, "|S_ij|")?,
            checked(p_ik, ij, "|S_ik|")?,
            checked(p_jk, ii, "|S_jk|")?,
        ],
        s_pair_pair: [
            checked(p_ij, p_ik, "|S_ij ∩ S_ik|")? / ii,
            checked(p_ij, p_jk, "|S_ij ∩ S_jk|")? / ij,
            checked(p_ik, p_jk, "|S_ik ∩ S_jk|")? / ik,
        ],
        meet_all: intersection_index(&[gi, gj, gk])?,
    })
}

/// `rows[a]` = cosets of `to` meeting coset `a` of `from`.
fn meet_rows(from: &CosetSpace, to: &CosetSpace) -> Vec<BitSet> {
    from.cosets()
        .iter()
        .map(|c| BitSet::from_ids(to.len(), c.iter().map(|x| to.index_of(x))))
        .collect()
}

/// Walks every `(Ci, Cj)` pair and handles the `Ck` coordinate with word
/// operations on the meet rows.
pub fn enumerate_census(gi: &Subgroup, gj: &Subgroup, gk: &Subgroup) -> Result<EnumeratedCensus> {
    gi.check_parent(gj)?;
    gi.check_parent(gk)?;
    let (si, sj, sk) = (
        CosetSpace::new(gi),
        CosetSpace::new(gj),
        CosetSpace::new(gk),
    );
    let m_ij = meet_rows(&si, &sj);
    let m_ik = meet_rows(&si, &sk);
    let m_jk = meet_rows(&sj, &sk);
    let ck = sk.len() as u64;

    let mut e = EnumeratedCensus {
        total: 0,
        s_pair: [0; 3],
        s_pair_pair: [0; 3],
        s_triple: 0,
        meet_all: 0,
        n_disjoint: 0,
    };
    for (a, ci) in si.cosets().iter().enumerate() {
        let row_a = &m_ik[a];
        let na = row_a.count() as u64;
        for (b, cj) in sj.cosets().iter().enumerate() {
            let row_b = &m_jk[b];
            let nb = row_b.count() as u64;
            let both = row_a.intersection_count(row_b) as u64;
            let either = na + nb - both;
            e.total += ck;
            e.s_pair[1] += na;
            e.s_pair[2] += nb;
            e.s_pair_pair[2] += both;
            if m_ij[a].contains(b) {
                e.s_pair[0] += ck;
                e.s_pair_pair[0] += na;
                e.s_pair_pair[1] += nb;
                e.s_triple += both;
                let mut third = BitSet::new(sk.len());
                for x in &ci.intersection(cj) {
                    third.insert(sk.index_of(x));
                }
                e.meet_all += third.count() as u64;
            } else {
                e.n_disjoint += ck - either;
            }
        }
    }
    Ok(e)
}

/// Closed forms, cross-checked against enumeration when `|S| <= cap`.
/// Above the cap the enumerated fields are left empty and `enumerated` is
/// false; a disagreement between the two routes is an error.
pub fn census(gi: &Subgroup, gj: &Subgroup, gk: &Subgroup, cap: u64) -> Result<TripleCensus> {
    gi.check_parent(gj)?;
    gi.check_parent(gk)?;
    let closed = closed_form_census(gi, gj, gk)?;
    let mut out = TripleCensus {
        indices: [index(gi), index(gj), index(gk)],
        total: closed.total,
        s_pair: closed.s_pair,
        s_pair_pair: closed.s_pair_pair,
        meet_all: closed.meet_all,
        s_triple: None,
        n_disjoint: None,
        enumerated: false,
    };
    if closed.total > cap {
        log::debug!(
            "census of {} triples exceeds cap {cap}; enumeration skipped",
            closed.total
        );
        return Ok(out);
    }
    let e = enumerate_census(gi, gj, gk)?;
    if (e.total, e.s_pair, e.s_pair_pair, e.meet_all)
        != (
            closed.total,
            closed.s_pair,
            closed.s_pair_pair,
            closed.meet_all,
        )
    {
        return Err(Error::Inconsistent(format!(
            "census mismatch: enumerated {e:?}, closed form {closed:?}"
        )));
    }
    out.s_triple = Some(e.s_triple);
    out.n_disjoint = Some(e.n_disjoint);
    out.enumerated = true;
    Ok(out)
}

/// Strict upper bound on `r_ijk` implied by a positive number of pairwise
/// disjoint triples when every index is `3q` with coprime `q`:
/// `9 − 3(r_ij + r_ik + r_jk) + (r_ij·r_ik + r_ij·r_jk + r_ik·r_jk)`.
pub fn rijk_strict_upper(r_ij: u64, r_ik: u64, r_jk: u64) -> i64 {
    strict_upper_for_gcd(3, r_ij, r_ik, r_jk)
}

/// The same bound when all pairwise index gcds equal `d`:
/// `d² − d(r_ij + r_ik + r_jk) + (r_ij·r_ik + r_ij·r_jk + r_ik·r_jk)`.
pub fn strict_upper_for_gcd(d: u64, r_ij: u64, r_ik: u64, r_jk: u64) -> i64 {
    let [d, a, b, c] = [d, r_ij, r_ik, r_jk].map(|x| x as i64);
    d * d - d * (a + b + c) + (a * b + a * c + b * c)
}

/// `[Gp ∩ Ga : Gp ∩ Ga ∩ Gb] <= [Gp : Gp ∩ Gb]` for one ordered choice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PivotCheck {
    /// Positions `(p, a, b)` within the triple.
    pub slots: [usize; 3],
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

/// `r_ab | q_c · r_abc`, only meaningful when all pairwise gcds are equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GcdHypothesisCheck {
    pub d: u64,
    pub q: [u64; 3],
    /// Pair order `ij, ik, jk` against third slots `k, j, i`.
    pub holds: [bool; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleDiagnostics {
    /// `r_ij, r_ik, r_jk`.
    pub r_pairs: [u64; 3],
    pub r_triple: u64,
    pub pivot_checks: Vec<PivotCheck>,
    /// `r_ijk <= r_pa · r_pb` for pivots `i, j, k`; only evaluated when all
    /// pairwise index gcds are equal.
    pub r_product_holds: Option<[bool; 3]>,
    /// `[G : Ga ∩ Gb]` divides `[G : Gi ∩ Gj ∩ Gk]`, pairs `ij, ik, jk`.
    pub divisibility_holds: [bool; 3],
    pub gcd_hypothesis: Option<GcdHypothesisCheck>,
}

impl TripleDiagnostics {
    pub fn all_pass(&self) -> bool {
        self.pivot_checks.iter().all(|c| c.holds)
            && self.r_product_holds.is_none_or(|h| h.iter().all(|&b| b))
            && self.divisibility_holds.iter().all(|&b| b)
            && self
                .gcd_hypothesis
                .as_ref()
                .is_none_or(|h| h.holds.iter().all(|&b| b))
    }
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn pair_slot(a: usize, b: usize) -> usize {
    match (a.min(b), a.max(b)) {
        (0, 1) => 0,
        (0, 2) => 1,
        _ => 2,
    }
}

/// Evaluates the pivot inequality, r-value product bound and
/// divisibility facts on one triple.
pub fn check_triple_inequalities(
    gi: &Subgroup,
    gj: &Subgroup,
    gk: &Subgroup,
) -> Result<TripleDiagnostics> {
    gi.check_parent(gj)?;
    gi.check_parent(gk)?;
    let g = [gi, gj, gk];
    let triple = intersect_all(&g)?;
    let pair_int: Vec<Subgroup> = PAIRS
        .iter()
        .map(|&(a, b)| intersect_all(&[g[a], g[b]]))
        .collect::<Result<_>>()?;

    let mut pivot_checks = Vec::with_capacity(6);
    for p in 0..3 {
        for a in 0..3 {
            if a == p {
                continue;
            }
            let b = 3 - p - a;
            let lhs = (pair_int[pair_slot(p, a)].order() / triple.order()) as u64;
            let rhs = (g[p].order() / pair_int[pair_slot(p, b)].order()) as u64;
            pivot_checks.push(PivotCheck {
                slots: [p, a, b],
                lhs,
                rhs,
                holds: lhs <= rhs,
            });
        }
    }

    let r_pairs: Vec<u64> = PAIRS
        .iter()
        .map(|&(a, b)| r_value(&[g[a], g[b]]).map(|r| r.r))
        .collect::<Result<_>>()?;
    let r_pairs = [r_pairs[0], r_pairs[1], r_pairs[2]];
    let r_triple = r_value(&g)?.r;
    let triple_index = triple.index() as u64;
    let divisibility_holds =
        [0, 1, 2].map(|s| triple_index.is_multiple_of(pair_int[s].index() as u64));

    let indices = g.map(index);
    let gcds = PAIRS.map(|(a, b)| gcd(indices[a], indices[b]));
    let gcd_hypothesis = (gcds[0] == gcds[1] && gcds[1] == gcds[2]).then(|| {
        let d = gcds[0];
        let q = indices.map(|i| i / d);
        let thirds = [2, 1, 0];
        let holds = [0, 1, 2].map(|s| (q[thirds[s]] * r_triple) % r_pairs[s] == 0);
        GcdHypothesisCheck { d, q, holds }
    });

    // The r-value form of the pivot bound follows from the index form only
    // when all pairwise gcds agree (then the cofactors are pairwise coprime
    // and the lcm normalization cancels); elsewhere it can fail.
    let r_product_holds = gcd_hypothesis.is_some().then(|| {
        [0, 1, 2].map(|p| {
            let [a, b] = match p {
                0 => [1, 2],
                1 => [0, 2],
                _ => [0, 1],
            };
            r_triple <= r_pairs[pair_slot(p, a)] * r_pairs[pair_slot(p, b)]
        })
    });

    Ok(TripleDiagnostics {
        r_pairs,
        r_triple,
        pivot_checks,
        r_product_holds,
        divisibility_holds,
        gcd_hypothesis,
    })
}
