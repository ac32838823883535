//! Constant-time set structures over a bounded universe `0..capacity`.

use crate::error::IndexOutOfRange;

const ABSENT: usize = usize::MAX;

/// Sparse set: members are packed in `dense`, `pos[e]` is the slot of `e`.
///
/// Insert, remove, contains and pick are all `O(1)`. Removal moves the last
/// member into the freed slot. `pick` returns the most recently placed member.
#[derive(Debug, Clone)]
pub struct SparseIndexSet {
    dense: Vec<usize>,
    pos: Vec<usize>,
}

impl SparseIndexSet {
    pub fn new(capacity: usize) -> Self {
        Self {
            dense: Vec::with_capacity(capacity),
            pos: vec![ABSENT; capacity],
        }
    }

    pub fn capacity(&self) -> usize {
        self.pos.len()
    }

    pub fn len(&self) -> usize {
        self.dense.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dense.is_empty()
    }

    /// Returns `false` for elements outside the universe.
    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        self.pos.get(e).is_some_and(|&p| p != ABSENT)
    }

    /// Inserts `e`; a present element is left alone. Returns whether the set changed.
    pub fn try_insert(&mut self, e: usize) -> Result<bool, IndexOutOfRange> {
        match self.pos.get(e) {
            None => Err(self.out_of_range(e)),
            Some(&p) if p != ABSENT => Ok(false),
            Some(_) => {
                self.pos[e] = self.dense.len();
                self.dense.push(e);
                Ok(true)
            }
        }
    }

    /// Removes `e`; an absent element is left alone. Returns whether the set changed.
    pub fn try_remove(&mut self, e: usize) -> Result<bool, IndexOutOfRange> {
        let p = match self.pos.get(e) {
            None => return Err(self.out_of_range(e)),
            Some(&p) if p == ABSENT => return Ok(false),
            Some(&p) => p,
        };
        let last = self.dense.pop().expect("member implies non-empty");
        if last != e {
            self.dense[p] = last;
            self.pos[last] = p;
        }
        self.pos[e] = ABSENT;
        Ok(true)
    }

    /// # Panics
    ///
    /// Panics if `e >= capacity`.
    #[inline]
    pub fn insert(&mut self, e: usize) -> bool {
        self.try_insert(e).unwrap_or_else(|err| panic!("{err}"))
    }

    /// # Panics
    ///
    /// Panics if `e >= capacity`.
    #[inline]
    pub fn remove(&mut self, e: usize) -> bool {
        self.try_remove(e).unwrap_or_else(|err| panic!("{err}"))
    }

    /// Last member in dense order, without removing it.
    #[inline]
    pub fn pick(&self) -> Option<usize> {
        self.dense.last().copied()
    }

    /// Members in dense order.
    pub fn as_slice(&self) -> &[usize] {
        &self.dense
    }

    pub fn clear(&mut self) {
        for &e in &self.dense {
            self.pos[e] = ABSENT;
        }
        self.dense.clear();
    }

    fn out_of_range(&self, e: usize) -> IndexOutOfRange {
        IndexOutOfRange {
            element: e,
            capacity: self.pos.len(),
        }
    }
}

/// Boolean membership over `0..len` with a running count of set flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipFlags {
    flags: Vec<bool>,
    count: usize,
}

impl MembershipFlags {
    pub fn new(len: usize) -> Self {
        Self {
            flags: vec![false; len],
            count: 0,
        }
    }

    /// Flags `0..members` set, the rest of `0..len` clear.
    pub fn full(len: usize, members: usize) -> Self {
        assert!(members <= len);
        let mut flags = vec![false; len];
        flags[..members].fill(true);
        Self {
            flags,
            count: members,
        }
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        self.flags.get(e).copied().unwrap_or(false)
    }

    #[inline]
    pub fn insert(&mut self, e: usize) -> bool {
        let was = std::mem::replace(&mut self.flags[e], true);
        self.count += usize::from(!was);
        !was
    }

    #[inline]
    pub fn remove(&mut self, e: usize) -> bool {
        let was = std::mem::replace(&mut self.flags[e], false);
        self.count -= usize::from(was);
        was
    }

    /// Set indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| f.then_some(i))
    }
}
