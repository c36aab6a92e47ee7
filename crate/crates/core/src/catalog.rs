//! Built-in groups, constructed from code.

use crate::error::{Error, Result};
use crate::group::{load_group, FiniteGroup, GroupSpec, DEFAULT_ORDER_CAP};

/// Names of the built-in groups, in listing order.
pub fn names() -> Vec<String> {
    let mut names: Vec<String> = (2..=24).map(|n| format!("C{n}")).collect();
    names.extend((3..=12).map(|n| format!("D{n}")));
    names.extend(["S3", "S4", "S5", "A4", "A5", "Q8"].map(String::from));
    names.extend(["C2×C2", "C2×C2×C2", "C6×C2", "S3×C2"].map(String::from));
    names
}

/// Spec for a group name: a family name such as `S4`, or factors joined by
/// `×` or `x` such as `C6xC2`.
pub fn spec_for(name: &str) -> Result<GroupSpec> {
    let factors: Vec<&str> = name.split(['×', 'x']).collect();
    if factors.iter().any(|f| f.is_empty()) {
        return Err(Error::UnknownFamily(name.to_string()));
    }
    Ok(match factors.as_slice() {
        [single] => GroupSpec::named(*single),
        many => GroupSpec::Product {
            factors: many.iter().map(|f| GroupSpec::named(*f)).collect(),
        },
    })
}

/// Loads a group by name with the default order cap.
pub fn load(name: &str) -> Result<FiniteGroup> {
    load_group(&spec_for(name)?, DEFAULT_ORDER_CAP)
}

/// All catalog groups of order at most `max_order`.
pub fn groups_up_to(max_order: usize) -> Vec<FiniteGroup> {
    names()
        .iter()
        .map(|name| load(name).expect("catalog groups load"))
        .filter(|g| g.order() <= max_order)
        .collect()
}
