//! Weak compositions `E_{l,m}`: ordered `l`-tuples of nonnegative integers
//! summing to `m`. These index every basis in the crate.
//!
//! The fixed total order is colexicographic: compare the last parts first,
//! smaller first. For `l = 2, m = 2` this gives `(2,0), (1,1), (0,2)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Precondition("a composition needs at least one part".into()));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] { &self.parts }

    pub fn len(&self) -> usize { self.parts.len() }

    pub fn is_empty(&self) -> bool { self.parts.is_empty() }

    pub fn total(&self) -> u32 { self.parts.iter().sum() }

    /// Positions (arc indices) of the points, one entry per point, ascending.
    pub fn point_positions(&self) -> Vec<usize> {
        self.parts.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect()
    }

    pub fn from_positions(len: usize, positions: &[usize]) -> Result<Self> {
        let mut parts = vec![0u32; len];
        for &p in positions {
            *parts.get_mut(p).ok_or_else(|| Error::OutOfRange(format!("arc {p} of {len}")))? += 1;
        }
        Self::new(parts)
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts.len().cmp(&other.parts.len()).then_with(|| self.parts.iter().rev().cmp(other.parts.iter().rev()))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> { Some(self.cmp(other)) }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.parts.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
    }
}

/// `C(n, k)`; saturates rather than overflowing for absurd arguments.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// `|E_{l,m}| = C(m + l - 1, m)`.
pub fn count_compositions(l: usize, m: u32) -> u64 {
    if l == 0 {
        return u64::from(m == 0);
    }
    binomial(m as u64 + l as u64 - 1, m as u64)
}

/// All of `E_{l,m}` in colex order.
pub fn enumerate_compositions(l: usize, m: u32) -> Result<Vec<Composition>> {
    if l == 0 {
        return Err(Error::Precondition("compositions need l >= 1 parts".into()));
    }
    let mut out = Vec::with_capacity(count_compositions(l, m) as usize);
    let mut parts = vec![0u32; l];
    fill(&mut parts, l - 1, m, &mut out);
    Ok(out)
}

// Colex: the last part varies slowest, so recurse from the right.
fn fill(parts: &mut [u32], idx: usize, remaining: u32, out: &mut Vec<Composition>) {
    if idx == 0 {
        parts[0] = remaining;
        out.push(Composition { parts: parts.to_vec() });
        return;
    }
    for v in 0..=remaining {
        parts[idx] = v;
        fill(parts, idx - 1, remaining - v, out);
    }
    parts[idx] = 0;
}

/// Position of `e` in [`enumerate_compositions`]`(e.len(), e.total())`.
pub fn rank(e: &Composition) -> u64 {
    let mut remaining = e.total();
    let mut r = 0u64;
    for j in (1..e.len()).rev() {
        for v in 0..e.parts[j] {
            // compositions of remaining - v into the first j parts
            r += count_compositions(j, remaining - v);
        }
        remaining -= e.parts[j];
    }
    r
}

pub fn unrank(index: u64, l: usize, m: u32) -> Result<Composition> {
    if l == 0 {
        return Err(Error::Precondition("compositions need l >= 1 parts".into()));
    }
    let total = count_compositions(l, m);
    if index >= total {
        return Err(Error::OutOfRange(format!("index {index} >= |E_({l},{m})| = {total}")));
    }
    let mut parts = vec![0u32; l];
    let mut remaining = m;
    let mut idx = index;
    for j in (1..l).rev() {
        let mut v = 0;
        loop {
            let block = count_compositions(j, remaining - v);
            if idx < block {
                break;
            }
            idx -= block;
            v += 1;
        }
        parts[j] = v;
        remaining -= v;
    }
    parts[0] = remaining;
    Ok(Composition { parts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: &[u32]) -> Composition { Composition::new(p.to_vec()).unwrap() }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_compositions(2, 2).unwrap(), vec![c(&[2, 0]), c(&[1, 1]), c(&[0, 2])]);
        assert_eq!(enumerate_compositions(1, 5).unwrap(), vec![c(&[5])]);
        assert_eq!(enumerate_compositions(3, 2).unwrap().len(), 6);
        assert_eq!(
            enumerate_compositions(3, 2).unwrap(),
            vec![c(&[2, 0, 0]), c(&[1, 1, 0]), c(&[0, 2, 0]), c(&[1, 0, 1]), c(&[0, 1, 1]), c(&[0, 0, 2])]
        );
        assert_eq!(enumerate_compositions(3, 0).unwrap(), vec![c(&[0, 0, 0])]);
        assert!(enumerate_compositions(0, 1).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&c(&[2, 0])), 0);
        assert_eq!(unrank(2, 2, 2).unwrap(), c(&[0, 2]));
        for i in 0..20 {
            assert_eq!(rank(&unrank(i, 4, 3).unwrap()), i);
        }
        assert!(matches!(unrank(20, 4, 3), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn order_matches_enumeration() {
        for l in 1..=5 {
            for m in 0..=5 {
                let all = enumerate_compositions(l, m).unwrap();
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                for (i, e) in all.iter().enumerate() {
                    assert_eq!(rank(e), i as u64);
                    assert_eq!(&unrank(i as u64, l, m).unwrap(), e);
                }
            }
        }
    }

    #[test]
    fn positions_round_trip() {
        let e = c(&[2, 0, 1]);
        assert_eq!(e.point_positions(), vec![0, 0, 2]);
        assert_eq!(Composition::from_positions(3, &[2, 0, 0]).unwrap(), e);
        assert_eq!(e.to_string(), "[2,0,1]");
    }
}
