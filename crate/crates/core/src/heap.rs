//! Indexed 4-ary min-heap over vertex ids with decrease-key.
//!
//! Holds at most one entry per vertex, so it stays `O(n)` where a lazy
//! binary heap grows to `O(m)`. Keys are finite lengths; ties pop the
//! smaller vertex id first.
//!
//! Heap positions live in a caller-owned per-vertex slice.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::cost::Weight;

const ARITY: usize = 4;
pub(crate) const ABSENT: u32 = u32::MAX;
/// "No edge chosen yet" in compact per-vertex edge arrays.
pub(crate) const NO_EDGE: u32 = u32::MAX;

/// Per-vertex storage for the heap position.
pub(crate) trait Slot {
    fn heap_pos(&self) -> u32;
    fn set_heap_pos(&mut self, p: u32);
}

impl Slot for u32 {
    #[inline]
    fn heap_pos(&self) -> u32 {
        *self
    }
    #[inline]
    fn set_heap_pos(&mut self, p: u32) {
        *self = p;
    }
}

pub(crate) struct VertexHeap<W> {
    entries: Vec<(W, u32)>,
}

impl<W: Weight> VertexHeap<W> {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n < ABSENT as usize, "too many vertices");
        VertexHeap {
            entries: Vec::new(),
        }
    }

    #[inline]
    fn less(a: &(W, u32), b: &(W, u32)) -> bool {
        a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).is_lt()
    }

    /// Inserts `x` or lowers its key; a higher key is ignored.
    pub(crate) fn push_or_decrease<S: Slot>(&mut self, slots: &mut [S], x: usize, key: W) {
        let i = match slots[x].heap_pos() {
            ABSENT => {
                self.entries.push((key, x as u32));
                self.entries.len() - 1
            }
            p => {
                let p = p as usize;
                if key.total_cmp(&self.entries[p].0).is_ge() {
                    return;
                }
                self.entries[p].0 = key;
                p
            }
        };
        self.sift_up(slots, i);
    }

    pub(crate) fn pop<S: Slot>(&mut self, slots: &mut [S]) -> Option<(W, usize)> {
        let last = self.entries.pop()?;
        let top = if self.entries.is_empty() {
            last
        } else {
            std::mem::replace(&mut self.entries[0], last)
        };
        slots[top.1 as usize].set_heap_pos(ABSENT);
        if !self.entries.is_empty() {
            self.sift_down(slots, 0);
        }
        Some((top.0, top.1 as usize))
    }

    fn sift_up<S: Slot>(&mut self, slots: &mut [S], mut i: usize) {
        let item = self.entries[i];
        while i > 0 {
            let parent = (i - 1) / ARITY;
            if !Self::less(&item, &self.entries[parent]) {
                break;
            }
            self.entries[i] = self.entries[parent];
            slots[self.entries[i].1 as usize].set_heap_pos(i as u32);
            i = parent;
        }
        self.entries[i] = item;
        slots[item.1 as usize].set_heap_pos(i as u32);
    }

    fn sift_down<S: Slot>(&mut self, slots: &mut [S], mut i: usize) {
        let item = self.entries[i];
        let len = self.entries.len();
        loop {
            let first = ARITY * i + 1;
            if first >= len {
                break;
            }
            let mut best = first;
            for c in first + 1..(first + ARITY).min(len) {
                if Self::less(&self.entries[c], &self.entries[best]) {
                    best = c;
                }
            }
            if !Self::less(&self.entries[best], &item) {
                break;
            }
            self.entries[i] = self.entries[best];
            slots[self.entries[i].1 as usize].set_heap_pos(i as u32);
            i = best;
        }
        self.entries[i] = item;
        slots[item.1 as usize].set_heap_pos(i as u32);
    }
}

/// Monotone priority queue over `u64` keys (a radix heap).
///
/// Every pushed key must be at least the last popped one, which holds for
/// label-setting where a new label is never below the label just settled.
/// Bucket `i > 0` holds keys whose highest bit differing from `last` is
/// bit `i - 1`; refilling moves each entry to a strictly lower bucket, so
/// an entry moves at most 64 times and all accesses are sequential.
/// There is no decrease-key: callers push again and skip stale pops.
/// Equal keys pop in increasing id order.
pub(crate) struct RadixHeap {
    last: u64,
    /// Ids whose key equals `last`, smallest first.
    current: BinaryHeap<Reverse<u32>>,
    buckets: [Vec<(u64, u32)>; 64],
    len: usize,
}

impl RadixHeap {
    pub(crate) fn new() -> Self {
        RadixHeap {
            last: 0,
            current: BinaryHeap::new(),
            buckets: std::array::from_fn(|_| Vec::new()),
            len: 0,
        }
    }

    #[inline]
    fn bucket(&self, key: u64) -> usize {
        // key > last here, so the xor is nonzero
        63 - (key ^ self.last).leading_zeros() as usize
    }

    #[inline]
    pub(crate) fn push(&mut self, key: u64, id: usize) {
        debug_assert!(key >= self.last, "radix heap keys must be monotone");
        self.len += 1;
        if key == self.last {
            self.current.push(Reverse(id as u32));
        } else {
            let b = self.bucket(key);
            self.buckets[b].push((key, id as u32));
        }
    }

    /// Smallest key, ties by smallest id.
    pub(crate) fn pop(&mut self) -> Option<(u64, usize)> {
        if self.current.is_empty() {
            if self.len == 0 {
                return None;
            }
            let b = self
                .buckets
                .iter()
                .position(|v| !v.is_empty())
                .expect("len > 0");
            let entries = std::mem::take(&mut self.buckets[b]);
            self.last = entries
                .iter()
                .map(|&(k, _)| k)
                .min()
                .expect("nonempty bucket");
            for &(k, id) in &entries {
                if k == self.last {
                    self.current.push(Reverse(id));
                } else {
                    let nb = self.bucket(k);
                    self.buckets[nb].push((k, id));
                }
            }
            // keep the allocation for later refills
            let mut entries = entries;
            entries.clear();
            if self.buckets[b].is_empty() {
                self.buckets[b] = entries;
            }
        }
        let Reverse(id) = self.current.pop().expect("refilled above");
        self.len -= 1;
        Some((self.last, id as usize))
    }
}
