//! The numerator/denominator mediant table over `[0, 1]`.
//!
//! Row 1 is `0/1, 1/1`. Row `k` keeps row `k-1` at its odd positions and
//! inserts the mediant of each adjacent pair at the even positions, so row
//! `k` has `2^(k-1) + 1` entries.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of entries [`farey_row`] will build.
pub const DEFAULT_ROW_CAP: u64 = (1 << 20) + 1;
/// Default cap on the row depth [`locate`] will descend to.
pub const DEFAULT_DEPTH_CAP: u64 = 1_000_000;

/// Row `k` (from 1) and position `l` (from 1) in the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FareyIndex {
    pub k: u64,
    pub l: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FareyEntry {
    pub top: u64,
    pub bottom: u64,
}

impl FareyEntry {
    pub const fn new(top: u64, bottom: u64) -> Self {
        FareyEntry { top, bottom }
    }

    fn mediant(self, other: FareyEntry) -> FareyEntry {
        FareyEntry::new(self.top + other.top, self.bottom + other.bottom)
    }

    /// Compare as fractions.
    fn cmp_value(self, top: u64, bottom: u64) -> std::cmp::Ordering {
        (u128::from(self.top) * u128::from(bottom)).cmp(&(u128::from(top) * u128::from(self.bottom)))
    }
}

impl fmt::Display for FareyEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.top, self.bottom)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FareyLimits {
    pub row_cap: u64,
    pub depth_cap: u64,
}

impl Default for FareyLimits {
    fn default() -> Self {
        FareyLimits {
            row_cap: DEFAULT_ROW_CAP,
            depth_cap: DEFAULT_DEPTH_CAP,
        }
    }
}

pub fn farey_row(k: u64) -> Result<Vec<FareyEntry>> {
    farey_row_with(k, &FareyLimits::default())
}

pub fn farey_row_with(k: u64, limits: &FareyLimits) -> Result<Vec<FareyEntry>> {
    if k == 0 {
        return Err(Error::domain("farey rows start at k = 1"));
    }
    let len = 1u64
        .checked_shl((k - 1) as u32)
        .filter(|_| k - 1 < 64)
        .and_then(|p| p.checked_add(1))
        .filter(|&n| n <= limits.row_cap)
        .ok_or_else(|| Error::Resource(format!("farey row {k} exceeds the {} entry cap", limits.row_cap)))?;
    let mut row = vec![FareyEntry::new(0, 1), FareyEntry::new(1, 1)];
    for _ in 1..k {
        let mut next = Vec::with_capacity(2 * row.len() - 1);
        for pair in row.windows(2) {
            next.push(pair[0]);
            next.push(pair[0].mediant(pair[1]));
        }
        next.push(*row.last().expect("non-empty row"));
        row = next;
    }
    debug_assert_eq!(row.len() as u64, len);
    Ok(row)
}

pub fn locate(p: u64, q: u64) -> Result<FareyIndex> {
    locate_with(p, q, &FareyLimits::default())
}

/// Smallest `(k, l)` whose entry is `p/q`, found by descending the mediant
/// tree between the current pair of neighbours.
pub fn locate_with(p: u64, q: u64, limits: &FareyLimits) -> Result<FareyIndex> {
    if q == 0 || p > q {
        return Err(Error::domain(format!("{p}/{q} is not in [0, 1]")));
    }
    if gcd(p, q) != 1 {
        return Err(Error::domain(format!("{p}/{q} is not reduced")));
    }
    match (p, q) {
        (0, 1) => return Ok(FareyIndex { k: 1, l: 1 }),
        (1, 1) => return Ok(FareyIndex { k: 1, l: 2 }),
        _ => {}
    }
    let mut left = FareyEntry::new(0, 1);
    let mut right = FareyEntry::new(1, 1);
    // position of `left` in the previous row; positions double each row
    let mut left_pos: u64 = 1;
    let mut k: u64 = 1;
    loop {
        k += 1;
        if k > limits.depth_cap {
            return Err(Error::Resource(format!(
                "{p}/{q} lies deeper than row {}",
                limits.depth_cap
            )));
        }
        let m = left.mediant(right);
        let pos = left_pos
            .checked_mul(2)
            .ok_or_else(|| Error::Resource(format!("position of {p}/{q} overflows 64 bits")))?;
        match m.cmp_value(p, q) {
            std::cmp::Ordering::Equal => return Ok(FareyIndex { k, l: pos }),
            std::cmp::Ordering::Greater => {
                right = m;
                left_pos = pos - 1;
            }
            std::cmp::Ordering::Less => {
                left = m;
                left_pos = pos;
            }
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(t: u64, b: u64) -> FareyEntry {
        FareyEntry::new(t, b)
    }

    #[test]
    fn first_rows() {
        assert_eq!(farey_row(1).unwrap(), vec![e(0, 1), e(1, 1)]);
        assert_eq!(farey_row(2).unwrap(), vec![e(0, 1), e(1, 2), e(1, 1)]);
        assert_eq!(farey_row(3).unwrap(), vec![e(0, 1), e(1, 3), e(1, 2), e(2, 3), e(1, 1)]);
        assert!(farey_row(0).is_err());
    }

    #[test]
    fn row_cap() {
        let limits = FareyLimits {
            row_cap: 9,
            depth_cap: 10,
        };
        assert_eq!(farey_row_with(4, &limits).unwrap().len(), 9);
        assert!(matches!(farey_row_with(5, &limits), Err(Error::Resource(_))));
        assert!(matches!(farey_row(22), Err(Error::Resource(_))));
        assert!(matches!(farey_row(200), Err(Error::Resource(_))));
    }

    #[test]
    fn locate_examples() {
        assert_eq!(locate(1, 1).unwrap(), FareyIndex { k: 1, l: 2 });
        assert_eq!(locate(0, 1).unwrap(), FareyIndex { k: 1, l: 1 });
        assert_eq!(locate(1, 2).unwrap(), FareyIndex { k: 2, l: 2 });
        assert_eq!(locate(3, 4).unwrap(), FareyIndex { k: 4, l: 8 });
        assert_eq!(locate(1, 5).unwrap(), FareyIndex { k: 5, l: 2 });
    }

    #[test]
    fn locate_rejects_bad_input() {
        assert!(matches!(locate(2, 4), Err(Error::Domain(_))));
        assert!(matches!(locate(3, 2), Err(Error::Domain(_))));
        assert!(matches!(locate(1, 0), Err(Error::Domain(_))));
        let limits = FareyLimits {
            row_cap: DEFAULT_ROW_CAP,
            depth_cap: 50,
        };
        assert!(matches!(locate_with(1, 100, &limits), Err(Error::Resource(_))));
        // 1/q sits at row q, far beyond anything enumerable
        assert_eq!(locate(1, 60).unwrap().k, 60);
    }
}
