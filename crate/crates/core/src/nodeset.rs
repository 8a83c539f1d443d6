//! Fixed-width bitset over 1-indexed node ids.

use std::fmt;

/// Largest node id a [`NodeSet`] can hold.
pub const MAX_NODES: usize = 127;

/// A set of node ids in `1..=MAX_NODES`, stored as a single 128-bit word.
///
/// Bit `v` represents node `v`; bit 0 is never set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct NodeSet(u128);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    #[inline]
    pub fn from_bits(bits: u128) -> Self {
        NodeSet(bits & !1)
    }

    #[inline]
    pub fn bits(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        debug_assert!((1..=MAX_NODES).contains(&v));
        NodeSet(1u128 << v)
    }

    /// All ids `1..=n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_NODES, "node count {n} exceeds {MAX_NODES}");
        if n == 0 {
            return NodeSet::EMPTY;
        }
        NodeSet((u128::MAX >> (127 - n)) & !1)
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v <= MAX_NODES && self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u128 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u128 << v);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn intersects(self, other: NodeSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest id in the set.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Ids in ascending order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// The `i`-th smallest id (0-based).
    pub fn nth(self, i: usize) -> Option<usize> {
        self.iter().nth(i)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = NodeSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<'a> FromIterator<&'a usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = &'a usize>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
    }
}

impl IntoIterator for NodeSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

pub struct Iter(u128);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_iter() {
        assert_eq!(NodeSet::full(0), NodeSet::EMPTY);
        assert_eq!(NodeSet::full(3).to_vec(), vec![1, 2, 3]);
        assert_eq!(NodeSet::full(MAX_NODES).len(), MAX_NODES);
        assert!(!NodeSet::full(MAX_NODES).contains(0));
    }

    #[test]
    fn set_algebra() {
        let a: NodeSet = [1, 2, 5].iter().collect();
        let b: NodeSet = [2, 7].iter().collect();
        assert_eq!(a.union(b).to_vec(), vec![1, 2, 5, 7]);
        assert_eq!(a.intersection(b).to_vec(), vec![2]);
        assert_eq!(a.difference(b).to_vec(), vec![1, 5]);
        assert_eq!(a.first(), Some(1));
        assert_eq!(a.nth(2), Some(5));
        assert!(!a.contains(200));
    }
}
