//! Node labels and the order used for every rendering comparison.
//!
//! Labels compare in "natural" order: maximal runs of ASCII digits compare by
//! numeric value, everything else bytewise. `c6 < c10`, `a < b`, `e2 < e10`.
//! When two labels are equal under that rule (e.g. `c06` vs `c6`) the raw bytes
//! break the tie, so the order is total and agrees with string equality.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Characters that carry structure in tagging and code renderings.
pub const RESERVED: [char; 5] = ['(', ')', ',', '+', '-'];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LabelError {
    #[error("label is empty")]
    Empty,
    #[error("label {0:?} contains {1:?}, which is not allowed")]
    BadChar(String, char),
}

/// A condition or event name.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Label(String);

impl TryFrom<String> for Label {
    type Error = LabelError;
    fn try_from(s: String) -> Result<Self, LabelError> {
        Label::new(s)
    }
}

impl From<Label> for String {
    fn from(l: Label) -> String {
        l.0
    }
}

impl Label {
    /// Builds a label after checking the alphabet restriction.
    pub fn new(s: impl Into<String>) -> Result<Self, LabelError> {
        let s = s.into();
        check_label(&s)?;
        Ok(Label(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Nonempty, printable ASCII, none of [`RESERVED`].
pub fn check_label(s: &str) -> Result<(), LabelError> {
    if s.is_empty() {
        return Err(LabelError::Empty);
    }
    for ch in s.chars() {
        if !(' '..='~').contains(&ch) || RESERVED.contains(&ch) {
            return Err(LabelError::BadChar(s.to_string(), ch));
        }
    }
    Ok(())
}

/// Natural order with a bytewise tiebreak.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (x, y) = (a.as_bytes(), b.as_bytes());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        if x[i].is_ascii_digit() && y[j].is_ascii_digit() {
            let si = i;
            while i < x.len() && x[i].is_ascii_digit() {
                i += 1;
            }
            let sj = j;
            while j < y.len() && y[j].is_ascii_digit() {
                j += 1;
            }
            let na = strip_zeros(&x[si..i]);
            let nb = strip_zeros(&y[sj..j]);
            let ord = na.len().cmp(&nb.len()).then_with(|| na.cmp(nb));
            if ord != Ordering::Equal {
                return ord;
            }
        } else {
            let ord = x[i].cmp(&y[j]);
            if ord != Ordering::Equal {
                return ord;
            }
            i += 1;
            j += 1;
        }
    }
    (x.len() - i)
        .cmp(&(y.len() - j))
        .then_with(|| x.cmp(y))
}

fn strip_zeros(d: &[u8]) -> &[u8] {
    let k = d.iter().take_while(|&&c| c == b'0').count();
    &d[k..]
}

/// Letter-style name for pool index `i`: `a..z`, then `a1..z1`, `a2..`.
pub(crate) fn pool_name(i: usize, upper: bool) -> String {
    let base = if upper { b'A' } else { b'a' };
    let letter = (base + (i % 26) as u8) as char;
    match i / 26 {
        0 => letter.to_string(),
        k => format!("{letter}{k}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_compare_numerically() {
        assert_eq!(natural_cmp("c6", "c10"), Ordering::Less);
        assert_eq!(natural_cmp("c10", "c9"), Ordering::Greater);
        assert_eq!(natural_cmp("e1", "e3"), Ordering::Less);
        assert_eq!(natural_cmp("a", "b"), Ordering::Less);
        assert_eq!(natural_cmp("c", "c1"), Ordering::Less);
        assert_eq!(natural_cmp("x", "x"), Ordering::Equal);
    }

    #[test]
    fn leading_zeros_tiebreak_bytewise() {
        assert_ne!(natural_cmp("c06", "c6"), Ordering::Equal);
        assert_eq!(natural_cmp("c06", "c6"), natural_cmp("c6", "c06").reverse());
    }

    #[test]
    fn alphabet() {
        assert!(check_label("c12").is_ok());
        assert!(check_label("front wheel").is_ok());
        assert_eq!(check_label(""), Err(LabelError::Empty));
        for bad in ["a(b", "a)b", "a,b", "a+b", "a-b", "é"] {
            assert!(check_label(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn pool_names() {
        assert_eq!(pool_name(0, false), "a");
        assert_eq!(pool_name(25, false), "z");
        assert_eq!(pool_name(26, false), "a1");
        assert_eq!(pool_name(3, true), "D");
    }

    proptest::proptest! {
        #[test]
        fn natural_order_is_total(a in "[a-c0-9]{0,5}", b in "[a-c0-9]{0,5}", c in "[a-c0-9]{0,5}") {
            let ab = natural_cmp(&a, &b);
            proptest::prop_assert_eq!(ab, natural_cmp(&b, &a).reverse());
            proptest::prop_assert_eq!(ab == Ordering::Equal, a == b);
            if ab != Ordering::Greater && natural_cmp(&b, &c) != Ordering::Greater {
                proptest::prop_assert_ne!(natural_cmp(&a, &c), Ordering::Greater);
            }
        }
    }
}
