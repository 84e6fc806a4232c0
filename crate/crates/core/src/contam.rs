//! Contaminated space: a growing union of aligned intervals with exact
//! full-containment queries, plus the insurance ledger that reimburses
//! buyers for intervals that were already fully contaminated when bought.

use crate::dyadic::{DyadicAmount, DyadicInterval};

#[derive(Clone, Debug, Default)]
struct TrieNode {
    covered: bool,
    kids: [Option<Box<TrieNode>>; 2],
}

impl TrieNode {
    fn covered_measure(&self, depth: u32, acc: &mut DyadicAmount) {
        if self.covered {
            *acc += &DyadicAmount::pow2_neg(depth);
            return;
        }
        for kid in self.kids.iter().flatten() {
            kid.covered_measure(depth + 1, acc);
        }
    }
}

/// A canonical binary trie over interval bit strings. A node is marked when
/// its whole interval is contaminated; no marked node has a marked ancestor,
/// and two marked siblings are always merged into their parent. Canonical
/// form makes "is this interval fully covered" a single root-to-node walk.
#[derive(Clone, Debug)]
pub struct ContaminationSet {
    root: TrieNode,
    measure: DyadicAmount,
}

impl Default for ContaminationSet {
    fn default() -> Self {
        Self::new()
    }
}

impl ContaminationSet {
    pub fn new() -> Self {
        ContaminationSet { root: TrieNode::default(), measure: DyadicAmount::zero() }
    }

    /// Grows the covered region by `iv`. Subsets of already-covered space are
    /// absorbed; covered descendants are replaced; sibling pairs merge upward.
    pub fn contaminate(&mut self, iv: &DyadicInterval) {
        let mut gained = DyadicAmount::zero();
        Self::insert(&mut self.root, iv.as_bits(), 0, &mut gained);
        self.measure += &gained;
    }

    /// Returns whether the node ended up covered.
    fn insert(node: &mut TrieNode, bits: &[u8], depth: u32, gained: &mut DyadicAmount) -> bool {
        if node.covered {
            return true;
        }
        if bits.is_empty() {
            let mut absorbed = DyadicAmount::zero();
            node.covered_measure(depth, &mut absorbed);
            *gained += &DyadicAmount::pow2_neg(depth).checked_sub(&absorbed).expect("subset measure");
            node.covered = true;
            node.kids = [None, None];
            return true;
        }
        let kid = node.kids[bits[0] as usize].get_or_insert_with(Default::default);
        if Self::insert(kid, &bits[1..], depth + 1, gained) {
            let both = node
                .kids
                .iter()
                .all(|k| k.as_ref().map_or(false, |k| k.covered));
            if both {
                node.covered = true;
                node.kids = [None, None];
            }
        }
        node.covered
    }

    /// True iff `iv` lies entirely inside the covered region, i.e. some
    /// ancestor-or-self node on its path is marked.
    pub fn fully_contaminated(&self, iv: &DyadicInterval) -> bool {
        let mut node = &self.root;
        if node.covered {
            return true;
        }
        for &b in iv.as_bits() {
            node = match &node.kids[b as usize] {
                Some(kid) => kid,
                None => return false,
            };
            if node.covered {
                return true;
            }
        }
        false
    }

    /// Exact measure of the covered region (maintained incrementally).
    pub fn measure(&self) -> &DyadicAmount {
        &self.measure
    }

    pub fn is_empty(&self) -> bool {
        self.measure.is_zero()
    }

    /// Recomputes the measure from the trie; audits compare it to the cache.
    pub fn recompute_measure(&self) -> DyadicAmount {
        let mut acc = DyadicAmount::zero();
        self.root.covered_measure(0, &mut acc);
        acc
    }
}

/// Record of burned (reimbursed) intervals. Burned intervals were fully
/// contaminated at the moment of sale, are pairwise disjoint, and never
/// return to circulation.
#[derive(Clone, Debug, Default)]
pub struct InsuranceLedger {
    burned: Vec<DyadicInterval>,
    payouts: DyadicAmount,
}

impl InsuranceLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn record_burn(&mut self, iv: DyadicInterval) {
        self.payouts += &iv.measure();
        self.burned.push(iv);
    }

    pub fn burned(&self) -> &[DyadicInterval] {
        &self.burned
    }

    /// Total reimbursed, always equal to the sum of burned measures.
    pub fn payouts(&self) -> &DyadicAmount {
        &self.payouts
    }

    /// Checks pairwise disjointness of burns and the payout sum.
    pub fn check(&self) -> std::result::Result<(), String> {
        let mut total = DyadicAmount::zero();
        for iv in &self.burned {
            total += &iv.measure();
        }
        if total != self.payouts {
            return Err(format!("payouts {} != sum of burned measures {}", self.payouts, total));
        }
        let mut sorted: Vec<&DyadicInterval> = self.burned.iter().collect();
        sorted.sort();
        for pair in sorted.windows(2) {
            if pair[0].is_prefix_of(pair[1]) {
                return Err(format!("burned intervals {} and {} overlap", pair[0], pair[1]));
            }
        }
        Ok(())
    }
}
