//! Minimal union-find over `usize` indices.

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` if `a` and `b` were already connected.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        self.components -= 1;
        true
    }

    #[cfg(test)]
    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// Union-find without path compression so unions can be undone in reverse
/// order. Backbone of the backtracking selection scans, where each kept edge
/// merges two vertices and must be unmerged when the scan backtracks.
#[derive(Debug, Clone)]
pub(crate) struct RollbackUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
    /// Roots attached by each successful union, in order.
    trail: Vec<usize>,
}

impl RollbackUnionFind {
    pub fn new(n: usize) -> Self {
        RollbackUnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
            trail: Vec::new(),
        }
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` (and records nothing) if already connected.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        self.components -= 1;
        self.trail.push(small);
        true
    }

    /// A checkpoint for [`RollbackUnionFind::rollback_to`].
    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    /// Undoes every union performed since the checkpoint.
    pub fn rollback_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let small = self.trail.pop().expect("trail is non-empty");
            let big = self.parent[small];
            self.parent[small] = small;
            self.size[big] -= self.size[small];
            self.components += 1;
        }
    }

    pub fn components(&self) -> usize {
        self.components
    }
}
