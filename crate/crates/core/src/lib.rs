//! Coset algebra over small finite groups, and an exhaustive verifier for
//! the disjoint-coset gcd conjecture.
//!
//! Groups are materialized as full Cayley tables over dense element ids, and
//! every element set (subgroup, coset, product set) is a [`BitSet`]. On top of
//! that the crate provides:
//!
//! - [`group`] and [`subgroup`]: loading groups from specs and enumerating
//!   subgroup lattices;
//! - [`coset`]: left cosets, product sets `HK`, disjointability and coset
//!   meets;
//! - [`counting`]: r-values, the coset-triple census and the arithmetic
//!   bounds built on it;
//! - [`verifier`]: the search for `k` pairwise disjoint cosets whose index
//!   gcds are all below `k`;
//! - [`lemmas`], [`report`] and [`cache`]: the property suite, report
//!   documents and the on-disk lattice cache behind the `cosetlab` CLI.
//!
//! ```
//! use std::sync::Arc;
//! use cosetlab::{catalog, verifier};
//!
//! let s4 = Arc::new(catalog::load("S4").unwrap());
//! let report = verifier::verify_group(&s4, 4, &verifier::VerifyOptions::default()).unwrap();
//! assert!(report.violations.is_empty());
//! ```

pub mod bitset;
pub mod cache;
pub mod catalog;
pub mod coset;
pub mod counting;
pub mod error;
pub mod group;
pub mod lemmas;
pub mod report;
pub mod subgroup;
pub mod verifier;

pub use bitset::BitSet;
pub use coset::{
    coset_meet, coset_of, cosets_of_k_in_product, disjointable, left_cosets, product_set,
    touching_count, CosetSpace, LeftCoset, ProductSet,
};
pub use counting::{
    census, check_triple_inequalities, r_value, rijk_strict_upper, RValue, TripleCensus,
};
pub use error::{Error, Result};
pub use group::{direct_product, load_group, FiniteGroup, GroupSpec};
pub use subgroup::{enumerate_subgroups, intersect, Subgroup};
pub use verifier::{verify_group, VerificationReport, Violation};

/// The guide chapters, compiled as doc-tests so their snippets stay in sync
/// with the library.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    pub mod groups {}
    #[doc = include_str!("../../../book/src/cosets.md")]
    pub mod cosets {}
    #[doc = include_str!("../../../book/src/counting.md")]
    pub mod counting {}
    #[doc = include_str!("../../../book/src/verifier.md")]
    pub mod verifier {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
