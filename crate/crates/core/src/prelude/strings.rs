//! Case-aware string comparisons. Case mapping is ASCII only.

use std::cmp::Ordering;

fn case_order(a: &str, b: &str, upper_first: bool) -> Ordering {
    let la = a.to_ascii_lowercase();
    let lb = b.to_ascii_lowercase();
    match la.cmp(&lb) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.chars().zip(b.chars()) {
        if x != y {
            let x_first = x.is_ascii_uppercase() == upper_first;
            return if x_first { Ordering::Less } else { Ordering::Greater };
        }
    }
    Ordering::Equal
}

/// `a` sorts at or before `b`, ignoring case, upper case first on ties.
pub fn upper_first(a: &str, b: &str) -> bool {
    case_order(a, b, true) != Ordering::Greater
}

/// `a` sorts at or before `b`, ignoring case, lower case first on ties.
pub fn lower_first(a: &str, b: &str) -> bool {
    case_order(a, b, false) != Ordering::Greater
}

fn starts_upper(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

fn starts_lower(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_lowercase())
}

/// Words starting with an upper-case letter sort before all others.
pub fn first_upper(a: &str, b: &str) -> bool {
    match (starts_upper(a), starts_upper(b)) {
        (true, false) => true,
        (false, true) => false,
        _ => upper_first(a, b),
    }
}

/// Words starting with a lower-case letter sort before all others.
pub fn first_lower(a: &str, b: &str) -> bool {
    match (starts_lower(a), starts_lower(b)) {
        (true, false) => true,
        (false, true) => false,
        _ => lower_first(a, b),
    }
}
