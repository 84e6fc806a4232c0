//! The online free-list allocator for sized interval requests.
//!
//! Free space is kept as disjoint aligned intervals of pairwise distinct
//! sizes, at most one per size exponent. A request for measure `2^-e` is
//! served from the exact entry when one exists; otherwise the smallest
//! strictly larger entry is split repeatedly, always descending into the
//! left half and returning the shed right halves to the list. Minimality of
//! the split entry keeps the distinct-size invariant. A request fails only
//! when the total requested measure would exceed the space the allocator
//! started with.

use std::collections::BTreeMap;

use crate::dyadic::{DyadicAmount, DyadicInterval};
use crate::error::{Error, Result};

/// Seller inventory: at most one free interval per size exponent.
#[derive(Clone, Debug, Default)]
pub struct FreeList {
    entries: BTreeMap<u32, DyadicInterval>,
    free: DyadicAmount,
}

impl FreeList {
    /// An allocator owning exactly `root`.
    pub fn new(root: DyadicInterval) -> Self {
        let mut fl = FreeList::empty();
        fl.insert(root);
        fl
    }

    pub(crate) fn empty() -> Self {
        FreeList { entries: BTreeMap::new(), free: DyadicAmount::zero() }
    }

    /// Serves a request of measure `2^-e`, or fails with a kraft violation
    /// when no entry of at least that measure remains.
    pub fn allocate(&mut self, e: u32) -> Result<DyadicInterval> {
        self.take(e).ok_or(Error::KraftViolation)
    }

    /// Non-failing variant of [`allocate`](Self::allocate) used by the
    /// hierarchical allocator for case selection.
    pub(crate) fn take(&mut self, e: u32) -> Option<DyadicInterval> {
        if let Some(exact) = self.entries.remove(&e) {
            self.free -= &DyadicAmount::pow2_neg(e);
            return Some(exact);
        }
        // Minimal strictly larger entry = largest exponent below e.
        let &k = self.entries.range(..e).next_back()?.0;
        let larger = self.entries.remove(&k).unwrap();
        let (piece, rights) = larger.split_to_depth(e);
        for r in rights {
            let prev = self.entries.insert(r.depth(), r);
            debug_assert!(prev.is_none());
        }
        self.free -= &DyadicAmount::pow2_neg(e);
        Some(piece)
    }

    /// Adds an interval; the caller guarantees its exponent is vacant and the
    /// interval is disjoint from every entry.
    pub(crate) fn insert(&mut self, iv: DyadicInterval) {
        self.free += &iv.measure();
        let prev = self.entries.insert(iv.depth(), iv);
        assert!(prev.is_none(), "free list already has an entry of that size");
    }

    /// Exact total measure of the entries (maintained incrementally).
    pub fn free_measure(&self) -> &DyadicAmount {
        &self.free
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &DyadicInterval> {
        self.entries.values()
    }

    /// Recomputes the cached measure and checks disjointness; `Err` carries
    /// the first counterexample. Used by audits.
    pub fn check(&self) -> std::result::Result<(), String> {
        let mut total = DyadicAmount::zero();
        for iv in self.entries.values() {
            total += &iv.measure();
        }
        if total != self.free {
            return Err(format!("cached free measure {} != recomputed {}", self.free, total));
        }
        let mut sorted: Vec<&DyadicInterval> = self.entries.values().collect();
        sorted.sort();
        for pair in sorted.windows(2) {
            if pair[0].is_prefix_of(pair[1]) {
                return Err(format!("free entries {} and {} overlap", pair[0], pair[1]));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::SplitMix64;

    fn iv(s: &str) -> DyadicInterval {
        DyadicInterval::from_bits(s).unwrap()
    }

    fn amt(numer: u64, denom_exp: u32) -> DyadicAmount {
        DyadicAmount::from_ratio(numer, denom_exp)
    }

    #[test]
    fn new_allocator_examples() {
        assert_eq!(*FreeList::new(DyadicInterval::root()).free_measure(), DyadicAmount::one());
        assert_eq!(*FreeList::new(iv("1")).free_measure(), amt(1, 1));
        assert_eq!(*FreeList::new(iv("01")).free_measure(), amt(1, 2));
    }

    #[test]
    fn allocate_single_split_prefers_left() {
        let mut fl = FreeList::new(DyadicInterval::root());
        assert_eq!(fl.allocate(1).unwrap(), iv("0"));
        assert_eq!(fl.iter().collect::<Vec<_>>(), vec![&iv("1")]);
    }

    #[test]
    fn allocate_decreasing_sizes() {
        let mut fl = FreeList::new(DyadicInterval::root());
        let got: Vec<_> = [1, 2, 3].iter().map(|&e| fl.allocate(e).unwrap()).collect();
        assert_eq!(got, vec![iv("0"), iv("10"), iv("110")]);
        assert_eq!(*fl.free_measure(), amt(1, 3));
    }

    #[test]
    fn allocate_exact_entry_reused() {
        let mut fl = FreeList::new(DyadicInterval::root());
        let got: Vec<_> = [2, 2, 1].iter().map(|&e| fl.allocate(e).unwrap()).collect();
        assert_eq!(got, vec![iv("00"), iv("01"), iv("1")]);
    }

    #[test]
    fn overcommit_is_a_kraft_violation() {
        let mut fl = FreeList::new(DyadicInterval::root());
        fl.allocate(1).unwrap();
        fl.allocate(1).unwrap();
        assert!(matches!(fl.allocate(1), Err(Error::KraftViolation)));
    }

    #[test]
    fn free_measure_tracks_allocations() {
        let mut fl = FreeList::new(DyadicInterval::root());
        assert_eq!(*fl.free_measure(), DyadicAmount::one());
        fl.allocate(1).unwrap();
        assert_eq!(*fl.free_measure(), amt(1, 1));
        fl.allocate(2).unwrap();
        fl.allocate(3).unwrap();
        assert_eq!(*fl.free_measure(), amt(1, 3));
    }

    /// allocate(e) succeeds exactly when the remaining free measure covers
    /// it, and results of a run are pairwise disjoint with requested sizes.
    #[test]
    fn random_streams_match_kraft_budget() {
        let mut rng = SplitMix64::new(41);
        for _ in 0..300 {
            let mut fl = FreeList::new(DyadicInterval::root());
            let mut allocated = Vec::new();
            for _ in 0..60 {
                let e = (rng.next_u64() % 6 + 1) as u32;
                let fits = *fl.free_measure() >= DyadicAmount::pow2_neg(e);
                match fl.allocate(e) {
                    Ok(x) => {
                        assert!(fits);
                        assert_eq!(x.depth(), e);
                        allocated.push(x);
                    }
                    Err(Error::KraftViolation) => assert!(!fits),
                    Err(other) => panic!("unexpected error {other}"),
                }
                fl.check().unwrap();
            }
            allocated.sort();
            for pair in allocated.windows(2) {
                assert!(pair[0].is_disjoint_from(&pair[1]));
            }
        }
    }

    #[test]
    fn identical_streams_identical_outputs() {
        let labels: Vec<u32> = vec![3, 1, 4, 4, 2, 5, 5];
        let run = || {
            let mut fl = FreeList::new(DyadicInterval::root());
            labels.iter().map(|&e| fl.allocate(e).unwrap().to_string()).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }
}
