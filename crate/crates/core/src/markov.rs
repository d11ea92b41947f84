//! Markov triples: solutions of `a^2 + b^2 + c^2 = 3abc` in positive integers.
//!
//! Every solution is reached from `(1, 1, 1)` by mutations
//! `(a, b, c) -> (a, b, 3ab - c)`, and the mutation graph is a tree in which
//! each vertex has degree 3. Mutating the largest entry of a triple other
//! than `(1, 1, 1)` or `(1, 1, 2)` strictly decreases it, so the tree can be
//! walked downwards to the root and enumerated breadth-first under a bound.
//!
//! Positions are 0-based throughout the library API.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::int;

/// `a^2 + b^2 + c^2 == 3abc`, with all entries positive.
pub fn is_markov(a: &BigInt, b: &BigInt, c: &BigInt) -> bool {
    if !(a.is_positive() && b.is_positive() && c.is_positive()) {
        return false;
    }
    a * a + b * b + c * c == int(3) * a * b * c
}

/// Replaces the entry at `pos` by `3 * (product of the other two) - entry`.
///
/// Positional: the result is not re-sorted.
pub fn mutate_entries(entries: &[BigInt; 3], pos: usize) -> Result<[BigInt; 3]> {
    let (j, k) = others(pos)?;
    let mut out = entries.clone();
    out[pos] = int(3) * &entries[j] * &entries[k] - &entries[pos];
    Ok(out)
}

/// The two positions other than `pos`, in increasing order.
pub fn others(pos: usize) -> Result<(usize, usize)> {
    match pos {
        0 => Ok((1, 2)),
        1 => Ok((0, 2)),
        2 => Ok((0, 1)),
        _ => Err(Error::BadPosition(pos)),
    }
}

/// A Markov triple, stored sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TripleRepr", into = "TripleRepr")]
pub struct MarkovTriple {
    entries: [BigInt; 3],
}

#[derive(Serialize, Deserialize)]
struct TripleRepr(#[serde(with = "crate::serial::dec_seq")] [BigInt; 3]);

impl TryFrom<TripleRepr> for MarkovTriple {
    type Error = Error;
    fn try_from(r: TripleRepr) -> Result<Self> {
        let [a, b, c] = r.0;
        MarkovTriple::new(a, b, c)
    }
}

impl From<MarkovTriple> for TripleRepr {
    fn from(t: MarkovTriple) -> Self {
        TripleRepr(t.entries)
    }
}

impl MarkovTriple {
    /// Validates the Markov equation and the arithmetic properties
    /// (pairwise coprime, no entry divisible by 3), then sorts.
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if !is_markov(&a, &b, &c) {
            return Err(Error::NotMarkov(a, b, c));
        }
        let mut entries = [a, b, c];
        entries.sort();
        let t = Self { entries };
        if !t.arithmetic_properties_hold() {
            let [a, b, c] = t.entries;
            return Err(Error::MarkovArithmetic(a, b, c));
        }
        Ok(t)
    }

    pub fn from_entries(entries: [BigInt; 3]) -> Result<Self> {
        let [a, b, c] = entries;
        Self::new(a, b, c)
    }

    pub fn from_u64(a: u64, b: u64, c: u64) -> Result<Self> {
        Self::new(int(a), int(b), int(c))
    }

    pub fn root() -> Self {
        Self { entries: [int(1), int(1), int(1)] }
    }

    pub fn entries(&self) -> &[BigInt; 3] {
        &self.entries
    }

    pub fn get(&self, pos: usize) -> Result<&BigInt> {
        self.entries.get(pos).ok_or(Error::BadPosition(pos))
    }

    pub fn largest(&self) -> &BigInt {
        &self.entries[2]
    }

    pub fn is_root(&self) -> bool {
        self.entries.iter().all(One::is_one)
    }

    /// Position of `value`, if present (the last one when repeated).
    pub fn position_of(&self, value: &BigInt) -> Option<usize> {
        self.entries.iter().rposition(|e| e == value)
    }

    /// Pairwise coprime and no entry divisible by 3.
    pub fn arithmetic_properties_hold(&self) -> bool {
        let [a, b, c] = &self.entries;
        let three = int(3);
        a.gcd(b).is_one()
            && a.gcd(c).is_one()
            && b.gcd(c).is_one()
            && self.entries.iter().all(|e| !e.is_multiple_of(&three))
    }

    /// Raw positional mutation, without re-sorting.
    pub fn mutate_raw(&self, pos: usize) -> Result<[BigInt; 3]> {
        mutate_entries(&self.entries, pos)
    }

    /// Mutation at `pos`, re-canonicalized.
    pub fn mutate(&self, pos: usize) -> Result<Self> {
        let mut entries = self.mutate_raw(pos)?;
        entries.sort();
        Ok(Self { entries })
    }

    /// The neighbours of this triple in the mutation tree (with repeats
    /// collapsed), in position order.
    pub fn neighbours(&self) -> Vec<Self> {
        let mut out: Vec<Self> = Vec::with_capacity(3);
        for pos in 0..3 {
            let n = self.mutate(pos).expect("position in range");
            if !out.contains(&n) {
                out.push(n);
            }
        }
        out
    }
}

impl Ord for MarkovTriple {
    /// Orders by largest entry first, then the middle, then the smallest.
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries.iter().rev().cmp(other.entries.iter().rev())
    }
}

impl PartialOrd for MarkovTriple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.entries;
        write!(f, "({a}, {b}, {c})")
    }
}

/// All canonical Markov triples with largest entry at most `max_entry`,
/// sorted by [`MarkovTriple`]'s ordering.
pub fn enumerate(max_entry: &BigInt) -> Vec<MarkovTriple> {
    let mut found = BTreeSet::new();
    if max_entry < &BigInt::one() {
        return Vec::new();
    }
    let mut seen: HashSet<MarkovTriple> = HashSet::new();
    let mut queue = VecDeque::from([MarkovTriple::root()]);
    seen.insert(MarkovTriple::root());
    while let Some(t) = queue.pop_front() {
        for n in t.neighbours() {
            if n.largest() <= max_entry && seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
        found.insert(t);
    }
    found.into_iter().collect()
}

/// One step of the walk down the mutation tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentStep {
    pub from: MarkovTriple,
    /// Position (in `from`) of the entry that was mutated.
    pub position: usize,
    /// The positional result, before re-sorting.
    #[serde(with = "crate::serial::dec_seq")]
    pub raw: [BigInt; 3],
    pub to: MarkovTriple,
}

/// Mutates at the largest entry until `(1, 1, 1)` is reached.
pub fn descend(t: &MarkovTriple) -> Vec<DescentStep> {
    let mut steps = Vec::new();
    let mut cur = t.clone();
    while !cur.is_root() {
        let raw = cur.mutate_raw(2).expect("position in range");
        let to = cur.mutate(2).expect("position in range");
        assert!(to.largest() < cur.largest(), "descent did not decrease the maximum");
        steps.push(DescentStep { from: cur, position: 2, raw, to: to.clone() });
        cur = to;
    }
    steps
}

/// [`descend`] for unvalidated input.
pub fn descend_entries(entries: &[BigInt; 3]) -> Result<Vec<DescentStep>> {
    let t = MarkovTriple::from_entries(entries.clone())?;
    Ok(descend(&t))
}

/// The unique neighbour with a smaller maximum, or `None` at the root.
pub fn parent(t: &MarkovTriple) -> Option<MarkovTriple> {
    let smaller: Vec<_> = t.neighbours().into_iter().filter(|n| n.largest() < t.largest()).collect();
    match smaller.as_slice() {
        [] => None,
        [p] => Some(p.clone()),
        _ => panic!("triple {t} has several neighbours with smaller maximum"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: u64, b: u64, c: u64) -> MarkovTriple {
        MarkovTriple::from_u64(a, b, c).unwrap()
    }

    #[test]
    fn is_markov_examples() {
        assert!(is_markov(&int(1), &int(1), &int(1)));
        assert!(is_markov(&int(1), &int(1), &int(2)));
        assert!(!is_markov(&int(1), &int(2), &int(3)));
        assert!(!is_markov(&int(0), &int(0), &int(0)));
    }

    #[test]
    fn new_sorts_and_validates() {
        assert_eq!(t(5, 1, 2).entries(), &[int(1), int(2), int(5)]);
        assert!(matches!(MarkovTriple::from_u64(1, 2, 3), Err(Error::NotMarkov(..))));
    }

    #[test]
    fn mutate_examples() {
        assert_eq!(MarkovTriple::root().mutate(2).unwrap(), t(1, 1, 2));
        assert_eq!(t(1, 2, 5).mutate_raw(0).unwrap(), [int(29), int(2), int(5)]);
        assert_eq!(t(1, 2, 5).mutate(0).unwrap(), t(2, 5, 29));
        assert!(matches!(t(1, 2, 5).mutate(3), Err(Error::BadPosition(3))));
    }

    #[test]
    fn mutation_is_an_involution() {
        for tr in enumerate(&int(100_000)) {
            for p in 0..3 {
                let once = tr.mutate_raw(p).unwrap();
                let twice = mutate_entries(&once, p).unwrap();
                assert_eq!(&twice, tr.entries());
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate(&int(1)), vec![t(1, 1, 1)]);
        assert_eq!(enumerate(&int(2)), vec![t(1, 1, 1), t(1, 1, 2)]);
        assert_eq!(enumerate(&int(5)), vec![t(1, 1, 1), t(1, 1, 2), t(1, 2, 5)]);
        assert!(enumerate(&int(0)).is_empty());
    }

    #[test]
    fn descend_examples() {
        assert!(descend(&MarkovTriple::root()).is_empty());
        let steps = descend(&t(1, 2, 5));
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0].raw, [int(1), int(2), int(1)]);
        assert_eq!(steps[1].to, MarkovTriple::root());
        let steps = descend(&t(2, 5, 29));
        assert_eq!(steps.len(), 3);
        assert_eq!(steps[0].raw, [int(2), int(5), int(1)]);
        assert_eq!(steps.last().unwrap().to, MarkovTriple::root());
    }

    #[test]
    fn descend_entries_rejects_non_markov() {
        assert!(descend_entries(&[int(1), int(2), int(3)]).is_err());
    }

    #[test]
    fn parent_is_unique() {
        assert_eq!(parent(&MarkovTriple::root()), None);
        assert_eq!(parent(&t(1, 1, 2)), Some(MarkovTriple::root()));
        assert_eq!(parent(&t(2, 5, 29)), Some(t(1, 2, 5)));
    }

    #[test]
    fn ordering_is_by_maximum() {
        assert!(t(1, 13, 34) < t(2, 5, 29).mutate(0).unwrap());
        assert!(t(2, 5, 29) < t(1, 13, 34));
    }

    #[test]
    fn serde_round_trip_and_validation() {
        let tr = t(2, 5, 29);
        let json = serde_json::to_string(&tr).unwrap();
        assert_eq!(json, r#"["2","5","29"]"#);
        assert_eq!(serde_json::from_str::<MarkovTriple>(&json).unwrap(), tr);
        assert!(serde_json::from_str::<MarkovTriple>(r#"["1","2","3"]"#).is_err());
    }
}
