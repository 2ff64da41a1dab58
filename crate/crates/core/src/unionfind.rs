//! Disjoint-set forest with union by size and path compression.
//!
//! Besides the usual operations it tracks the number of components and the
//! sizes of the three largest components, updated at every merge.

use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: usize,
    /// Three largest component sizes, descending; 0 where fewer exist.
    top: [u32; 3],
    /// `histogram[s]` = number of components of size `s`.
    histogram: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        assert!(n < u32::MAX as usize, "too many elements");
        let mut uf = UnionFind {
            parent: Vec::new(),
            size: Vec::new(),
            components: 0,
            top: [0; 3],
            histogram: Vec::new(),
        };
        uf.reset(n);
        uf
    }

    /// Back to `n` singletons, reusing the allocations.
    pub fn reset(&mut self, n: usize) {
        self.parent.clear();
        self.parent.extend(0..n as u32);
        self.size.clear();
        self.size.resize(n, 1);
        self.components = n;
        self.histogram.clear();
        self.histogram.resize(n + 1, 0);
        if n > 0 {
            self.histogram[1] = n as u32;
        }
        self.top = [0; 3];
        for slot in self.top.iter_mut().take(n) {
            *slot = 1;
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// Sizes of the three largest components, descending (0 if absent).
    pub fn top3(&self) -> [u32; 3] {
        self.top
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    pub fn component_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r] as usize
    }

    /// Merges the sets of `a` and `b`; returns `false` if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        let (sa, sb) = (self.size[ra], self.size[rb]);
        let merged = sa + sb;
        self.parent[rb] = ra as u32;
        self.size[ra] = merged;
        self.components -= 1;
        self.histogram[sa as usize] -= 1;
        self.histogram[sb as usize] -= 1;
        self.histogram[merged as usize] += 1;
        self.update_top(sa, sb, merged);
        true
    }

    fn update_top(&mut self, sa: u32, sb: u32, merged: u32) {
        let old_min = self.top[2];
        let mut kept = [0u32; 4];
        let mut len = 0;
        let mut pending = [sa, sb];
        for &t in self.top.iter().filter(|&&t| t > 0) {
            if let Some(slot) = pending.iter_mut().find(|p| **p == t) {
                *slot = 0;
            } else {
                kept[len] = t;
                len += 1;
            }
        }
        kept[len] = merged;
        len += 1;
        if len < 3 && old_min > 0 {
            // Both merged components were among the top three: the next
            // largest remaining size is at most the old third.
            let mut v = old_min as usize;
            while v > 0 && len < 3 {
                let mut available = self.histogram[v];
                available -= kept[..len].iter().filter(|&&t| t as usize == v).count() as u32;
                while available > 0 && len < 3 {
                    kept[len] = v as u32;
                    len += 1;
                    available -= 1;
                }
                v -= 1;
            }
        }
        let slice = &mut kept[..len];
        slice.sort_unstable_by(|a, b| b.cmp(a));
        self.top = [0; 3];
        for (dst, &src) in self.top.iter_mut().zip(slice.iter()) {
            *dst = src;
        }
    }
}
