use std::fmt;

use crate::error::{Error, Result};
use crate::seq::BinSeq;

/// A nonempty finite set of canonical sequences: one point of a
/// decomposition space. Elements are stored sorted lexicographically by
/// unrolled bits, with duplicates removed, so equal fibers compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fiber {
    elements: Vec<BinSeq>,
}

impl Fiber {
    pub fn new(mut elements: Vec<BinSeq>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyFiber);
        }
        elements.sort();
        elements.dedup();
        Ok(Fiber { elements })
    }

    pub fn singleton(element: BinSeq) -> Self {
        Fiber { elements: vec![element] }
    }

    pub fn elements(&self) -> &[BinSeq] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: &BinSeq) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// True when the two fibers share no sequence.
    pub fn disjoint_from(&self, other: &Fiber) -> bool {
        self.elements.iter().all(|e| !other.contains(e))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BinSeq> {
        self.elements.iter()
    }
}

impl fmt::Debug for Fiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.elements).finish()
    }
}

impl fmt::Display for Fiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.elements.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl<'a> IntoIterator for &'a Fiber {
    type Item = &'a BinSeq;
    type IntoIter = std::slice::Iter<'a, BinSeq>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::seq;

    #[test]
    fn sorts_and_dedups() {
        let f = Fiber::new(vec![seq("1(0)"), seq("0(1)"), seq("01(01)"), seq("(01)")]).unwrap();
        assert_eq!(f.elements(), &[seq("(01)"), seq("0(1)"), seq("1(0)")]);
        assert_eq!(f.len(), 3);
        assert!(Fiber::new(vec![]).is_err());
    }

    #[test]
    fn set_operations() {
        let f = Fiber::new(vec![seq("0(1)"), seq("1(0)")]).unwrap();
        assert!(f.contains(&seq("1(0)")));
        assert!(!f.contains(&seq("(1)")));
        let g = Fiber::singleton(seq("(1)"));
        assert!(f.disjoint_from(&g));
        let h = Fiber::new(vec![seq("1(0)")]).unwrap();
        assert!(!f.disjoint_from(&h));
    }

    #[test]
    fn display_lists_sorted_notation() {
        let f = Fiber::new(vec![seq("1(0)"), seq("0(1)")]).unwrap();
        assert_eq!(f.to_string(), "{0(1), 1(0)}");
    }
}
