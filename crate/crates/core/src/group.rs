//! Finite groups materialized as full multiplication tables.
//!
//! Elements are dense ids `0..n`. A group is built once from a [`GroupSpec`]
//! (an explicit Cayley table, permutation generators, a named family, or a
//! direct product) and is immutable afterwards.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Format tag carried by group spec files.
pub const GROUPSPEC_FORMAT: &str = "groupspec-v1";

/// Above this order the associativity check samples triples instead of
/// testing all of them.
pub const EXHAUSTIVE_ASSOCIATIVITY_MAX: usize = 256;

/// Default cap on the order of any materialized group (the order of S7).
pub const DEFAULT_ORDER_CAP: usize = 5040;

/// Description of a group to be materialized.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    /// Explicit multiplication table; `table[a][b]` is the product `a·b`.
    Cayley {
        order: usize,
        table: Vec<Vec<usize>>,
    },
    /// Closure of permutations given as 0-based one-line image arrays.
    Perm {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    /// `C<n>`, `D<n>` (order 2n), `S<n>`, `A<n>` (n <= 7) or `Q8`.
    Named { name: String },
    /// Direct product of at least two factors.
    Product { factors: Vec<GroupSpec> },
}

impl GroupSpec {
    pub fn named(name: impl Into<String>) -> Self {
        GroupSpec::Named { name: name.into() }
    }

    /// Parses a `groupspec-v1` document. The top-level `format` key is
    /// optional, but must carry the right tag when present.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut value: serde_json::Value = serde_json::from_str(text)?;
        if let Some(obj) = value.as_object_mut() {
            if let Some(tag) = obj.remove("format") {
                if tag != GROUPSPEC_FORMAT {
                    return Err(Error::InvalidSpec(format!(
                        "unsupported format tag {tag}, expected {GROUPSPEC_FORMAT:?}"
                    )));
                }
            }
        }
        Ok(serde_json::from_value(value)?)
    }

    /// Canonical JSON: format tag included, sorted keys, no whitespace.
    pub fn to_canonical_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("group spec serializes");
        if let Some(obj) = value.as_object_mut() {
            obj.insert("format".into(), GROUPSPEC_FORMAT.into());
        }
        // serde_json's default map is ordered, so keys come out sorted.
        value.to_string()
    }

    /// Display label: the family name, `A×B` for products.
    pub fn label(&self) -> String {
        match self {
            GroupSpec::Cayley { order, .. } => format!("cayley({order})"),
            GroupSpec::Perm { degree, .. } => format!("perm(degree {degree})"),
            GroupSpec::Named { name } => name.clone(),
            GroupSpec::Product { factors } => factors
                .iter()
                .map(GroupSpec::label)
                .collect::<Vec<_>>()
                .join("×"),
        }
    }

    /// Structural checks that do not require materializing the group.
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Cayley { order, table } => {
                if *order == 0 {
                    return Err(Error::InvalidSpec("cayley order must be positive".into()));
                }
                if table.len() != *order || table.iter().any(|row| row.len() != *order) {
                    return Err(Error::InvalidSpec(format!(
                        "cayley table must be {order}×{order}"
                    )));
                }
                Ok(())
            }
            GroupSpec::Perm { degree, generators } => {
                if *degree == 0 {
                    return Err(Error::InvalidSpec("perm degree must be positive".into()));
                }
                for (i, g) in generators.iter().enumerate() {
                    if !is_permutation(g, *degree) {
                        return Err(Error::InvalidSpec(format!(
                            "generator {i} is not a permutation of 0..{degree}"
                        )));
                    }
                }
                Ok(())
            }
            GroupSpec::Named { .. } => Ok(()),
            GroupSpec::Product { factors } => {
                if factors.len() < 2 {
                    return Err(Error::InvalidSpec(
                        "a product needs at least two factors".into(),
                    ));
                }
                factors.iter().try_for_each(GroupSpec::validate)
            }
        }
    }
}

fn is_permutation(images: &[usize], degree: usize) -> bool {
    if images.len() != degree {
        return false;
    }
    let mut seen = vec![false; degree];
    images
        .iter()
        .all(|&x| x < degree && !std::mem::replace(&mut seen[x], true))
}

/// A finite group over element ids `0..n`, backed by its Cayley table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    mul: Vec<u32>,
    identity: usize,
    inv: Vec<u32>,
    label: String,
    spec: GroupSpec,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.n)
            .finish_non_exhaustive()
    }
}

impl FiniteGroup {
    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The spec this group was materialized from.
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Row `a` of the multiplication table: `b ↦ a·b`.
    pub fn row(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.mul[a * self.n..(a + 1) * self.n]
            .iter()
            .map(|&x| x as usize)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn check_element(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                id: x,
                order: self.n,
            })
        }
    }

    /// Re-checks every group axiom. Associativity is exhaustive up to
    /// [`EXHAUSTIVE_ASSOCIATIVITY_MAX`] and uses `10·n²` triples drawn with
    /// a fixed seed above it.
    pub fn validate(&self) -> Result<()> {
        check_axioms(self.n, &self.mul, self.identity, &self.inv)
    }

    /// Builds a group from a flat row-major table, locating the identity by
    /// scan and deriving inverses. Runs [`FiniteGroup::validate`].
    pub fn from_table(n: usize, mul: Vec<u32>, label: String, spec: GroupSpec) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if mul.len() != n * n {
            return Err(Error::NotAGroup(format!("table has {} entries", mul.len())));
        }
        check_latin_square(n, &mul)?;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e * n + x] as usize == x && mul[x * n + e] as usize == x))
            .ok_or_else(|| Error::NotAGroup("no two-sided identity".into()))?;
        let inv = inverses(n, &mul, identity)?;
        check_axioms(n, &mul, identity, &inv)?;
        Ok(FiniteGroup {
            n,
            mul,
            identity,
            inv,
            label,
            spec,
        })
    }

    /// Builds a group whose table is correct by construction (permutation
    /// closure, named families, products). Only inverses are derived.
    fn from_trusted_table(
        n: usize,
        mul: Vec<u32>,
        identity: usize,
        label: String,
        spec: GroupSpec,
    ) -> Self {
        let inv = inverses(n, &mul, identity).expect("constructed table is a group");
        FiniteGroup {
            n,
            mul,
            identity,
            inv,
            label,
            spec,
        }
    }
}

fn check_latin_square(n: usize, mul: &[u32]) -> Result<()> {
    let mut seen = vec![0usize; n];
    for a in 0..n {
        for b in 0..n {
            let x = mul[a * n + b] as usize;
            if x >= n {
                return Err(Error::NotAGroup(format!(
                    "entry {a}·{b} = {x} out of range"
                )));
            }
            if seen[x] == 2 * a + 1 {
                return Err(Error::NotAGroup(format!("row {a} repeats {x}")));
            }
            seen[x] = 2 * a + 1;
        }
    }
    seen.iter_mut().for_each(|s| *s = 0);
    for b in 0..n {
        for a in 0..n {
            let x = mul[a * n + b] as usize;
            if seen[x] == b + 1 {
                return Err(Error::NotAGroup(format!("column {b} repeats {x}")));
            }
            seen[x] = b + 1;
        }
    }
    Ok(())
}

fn inverses(n: usize, mul: &[u32], identity: usize) -> Result<Vec<u32>> {
    (0..n)
        .map(|a| {
            (0..n)
                .find(|&b| mul[a * n + b] as usize == identity)
                .map(|b| b as u32)
                .ok_or_else(|| Error::NotAGroup(format!("{a} has no right inverse")))
        })
        .collect()
}

fn check_axioms(n: usize, mul: &[u32], identity: usize, inv: &[u32]) -> Result<()> {
    let m = |a: usize, b: usize| mul[a * n + b] as usize;
    for (x, &y) in inv.iter().enumerate() {
        if m(identity, x) != x || m(x, identity) != x {
            return Err(Error::NotAGroup(format!(
                "{identity} is not an identity for {x}"
            )));
        }
        let y = y as usize;
        if m(x, y) != identity || m(y, x) != identity {
            return Err(Error::NotAGroup(format!(
                "{y} is not a two-sided inverse of {x}"
            )));
        }
    }
    let non_assoc =
        |a: usize, b: usize, c: usize| Error::NotAGroup(format!("({a}·{b})·{c} != {a}·({b}·{c})"));
    if n <= EXHAUSTIVE_ASSOCIATIVITY_MAX {
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(non_assoc(a, b, c));
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        log::debug!("sampling {} associativity triples (seed 0)", 10 * n * n);
        for _ in 0..10 * n * n {
            let (a, b, c) = (
                rng.random_range(0..n),
                rng.random_range(0..n),
                rng.random_range(0..n),
            );
            if m(m(a, b), c) != m(a, m(b, c)) {
                return Err(non_assoc(a, b, c));
            }
        }
    }
    Ok(())
}

/// Materializes `spec`, refusing anything larger than `order_cap`.
pub fn load_group(spec: &GroupSpec, order_cap: usize) -> Result<FiniteGroup> {
    spec.validate()?;
    match spec {
        GroupSpec::Cayley { order, table } => {
            if *order > order_cap {
                return Err(Error::OrderCapExceeded { cap: order_cap });
            }
            let mut flat = Vec::with_capacity(order * order);
            for row in table {
                for &x in row {
                    if x >= *order {
                        return Err(Error::NotAGroup(format!("entry {x} out of range")));
                    }
                    flat.push(x as u32);
                }
            }
            FiniteGroup::from_table(*order, flat, spec.label(), spec.clone())
        }
        GroupSpec::Perm { degree, generators } => perm_closure(
            *degree,
            generators,
            order_cap,
            format!("perm(degree {degree})"),
            spec.clone(),
        ),
        GroupSpec::Named { name } => named_group(name, order_cap),
        GroupSpec::Product { factors } => {
            let mut acc = load_group(&factors[0], order_cap)?;
            for factor in &factors[1..] {
                let next = load_group(factor, order_cap)?;
                acc = direct_product(&acc, &next, order_cap)?;
            }
            acc.spec = spec.clone();
            acc.label = spec.label();
            Ok(acc)
        }
    }
}

/// Componentwise product; the pair `(i, j)` gets id `i·|b| + j`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup, order_cap: usize) -> Result<FiniteGroup> {
    let n =
        a.n.checked_mul(b.n)
            .filter(|&n| n <= order_cap)
            .ok_or(Error::OrderCapExceeded { cap: order_cap })?;
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        let (xa, xb) = (x / b.n, x % b.n);
        for y in 0..n {
            let (ya, yb) = (y / b.n, y % b.n);
            mul.push((a.mul(xa, ya) * b.n + b.mul(xb, yb)) as u32);
        }
    }
    let identity = a.identity * b.n + b.identity;
    let spec = GroupSpec::Product {
        factors: vec![a.spec.clone(), b.spec.clone()],
    };
    Ok(FiniteGroup::from_trusted_table(
        n,
        mul,
        identity,
        spec.label(),
        spec,
    ))
}

/// Closes `generators` under composition, where `(p·q)[x] = p[q[x]]`.
/// Elements are numbered in lexicographic order of their image arrays, so
/// the identity permutation is element 0.
fn perm_closure(
    degree: usize,
    generators: &[Vec<usize>],
    order_cap: usize,
    label: String,
    spec: GroupSpec,
) -> Result<FiniteGroup> {
    let compose = |p: &[u32], q: &[u32]| -> Vec<u32> { q.iter().map(|&x| p[x as usize]).collect() };
    let gens: Vec<Vec<u32>> = generators
        .iter()
        .map(|g| g.iter().map(|&x| x as u32).collect())
        .collect();
    let identity: Vec<u32> = (0..degree as u32).collect();

    let mut elements = vec![identity.clone()];
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::from([(identity, 0)]);
    let mut next = 0;
    while next < elements.len() {
        for g in &gens {
            let p = compose(&elements[next], g);
            if !seen.contains_key(&p) {
                if elements.len() == order_cap {
                    return Err(Error::OrderCapExceeded { cap: order_cap });
                }
                seen.insert(p.clone(), elements.len());
                elements.push(p);
            }
        }
        next += 1;
    }

    elements.sort_unstable();
    let index: HashMap<&[u32], usize> = elements
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let n = elements.len();
    let mut mul = Vec::with_capacity(n * n);
    for p in &elements {
        for q in &elements {
            mul.push(index[compose(p, q).as_slice()] as u32);
        }
    }
    Ok(FiniteGroup::from_trusted_table(n, mul, 0, label, spec))
}

/// Largest `n` accepted for `S<n>` and `A<n>`.
pub const MAX_SYMMETRIC_DEGREE: usize = 7;

fn named_group(name: &str, order_cap: usize) -> Result<FiniteGroup> {
    let unknown = || Error::UnknownFamily(name.to_string());
    let spec = GroupSpec::named(name);
    if name == "Q8" {
        return capped(8, order_cap).map(|_| quaternion(spec));
    }
    let (family, digits) = name.split_at(name.char_indices().nth(1).map_or(name.len(), |(i, _)| i));
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return Err(unknown());
    }
    let n: usize = digits.parse().map_err(|_| unknown())?;
    match family {
        "C" => {
            capped(n, order_cap)?;
            let mul = (0..n)
                .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
                .collect();
            Ok(FiniteGroup::from_trusted_table(
                n,
                mul,
                0,
                name.to_string(),
                spec,
            ))
        }
        "D" => {
            capped(2 * n, order_cap)?;
            Ok(dihedral(n, spec))
        }
        "S" | "A" => {
            if n > MAX_SYMMETRIC_DEGREE {
                return Err(unknown());
            }
            let order = (1..=n).product::<usize>();
            capped(
                if family == "A" && n >= 2 {
                    order / 2
                } else {
                    order
                },
                order_cap,
            )?;
            let generators = if family == "S" {
                symmetric_generators(n)
            } else {
                alternating_generators(n)
            };
            perm_closure(n, &generators, order_cap, name.to_string(), spec)
        }
        _ => Err(unknown()),
    }
}

fn capped(order: usize, cap: usize) -> Result<()> {
    if order > cap {
        Err(Error::OrderCapExceeded { cap })
    } else {
        Ok(())
    }
}

fn symmetric_generators(n: usize) -> Vec<Vec<usize>> {
    if n < 2 {
        return vec![];
    }
    let cycle = (0..n).map(|i| (i + 1) % n).collect();
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    vec![cycle, swap]
}

/// The 3-cycles `(0 1 i)` generate `A<n>`.
fn alternating_generators(n: usize) -> Vec<Vec<usize>> {
    (2..n)
        .map(|i| {
            let mut p: Vec<usize> = (0..n).collect();
            p[0] = 1;
            p[1] = i;
            p[i] = 0;
            p
        })
        .collect()
}

/// `r^i s^j` has id `j·n + i`, with `s r s = r⁻¹`.
fn dihedral(n: usize, spec: GroupSpec) -> FiniteGroup {
    let order = 2 * n;
    let mut mul = Vec::with_capacity(order * order);
    for x in 0..order {
        let (i1, j1) = (x % n, x / n);
        for y in 0..order {
            let (i2, j2) = (y % n, y / n);
            let i = if j1 == 0 {
                (i1 + i2) % n
            } else {
                (i1 + n - i2) % n
            };
            mul.push(((j1 ^ j2) * n + i) as u32);
        }
    }
    let label = format!("D{n}");
    FiniteGroup::from_trusted_table(order, mul, 0, label, spec)
}

/// `±1, ±i, ±j, ±k` with id `4·sign + unit`, units ordered `1, i, j, k`.
fn quaternion(spec: GroupSpec) -> FiniteGroup {
    // (negate, unit) for unit·unit
    const UNITS: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mut mul = Vec::with_capacity(64);
    for x in 0..8 {
        for y in 0..8 {
            let (s, u) = UNITS[x % 4][y % 4];
            mul.push((((x / 4) ^ (y / 4) ^ s) * 4 + u) as u32);
        }
    }
    FiniteGroup::from_trusted_table(8, mul, 0, "Q8".into(), spec)
}
