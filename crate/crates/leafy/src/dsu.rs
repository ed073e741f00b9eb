//! Minimal union-find, used for cycle detection and contraction, plus a
//! rollback variant for backtracking searches.

pub(crate) struct Dsu {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl Dsu {
    pub fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    /// Merges the classes of `a` and `b`; false if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Union-find whose successful unions can be undone in LIFO order, for
/// depth-first searches that would otherwise clone the structure per
/// branch. No path compression (it would break undo); union by size
/// keeps `find` at O(log n).
pub(crate) struct RollbackDsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    /// Root absorbed by each successful union, in order.
    log: Vec<usize>,
}

impl RollbackDsu {
    pub fn new(n: usize) -> RollbackDsu {
        RollbackDsu { parent: (0..n).collect(), size: vec![1; n], log: Vec::new() }
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false (and nothing logged) if
    /// already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.log.push(rb);
        true
    }

    /// Undoes the most recent successful union.
    pub fn undo(&mut self) {
        let rb = self.log.pop().expect("undo without a matching union");
        let ra = self.parent[rb];
        self.parent[rb] = rb;
        self.size[ra] -= self.size[rb];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rollback_restores_exact_state() {
        let mut d = RollbackDsu::new(5);
        assert!(d.union(0, 1));
        assert!(d.union(2, 3));
        assert!(d.union(1, 2));
        assert!(!d.union(0, 3)); // already joined: no log entry
        assert_eq!(d.find(0), d.find(3));
        d.undo(); // split {0,1} from {2,3}
        assert_ne!(d.find(0), d.find(3));
        assert_eq!(d.find(2), d.find(3));
        d.undo();
        d.undo();
        for v in 0..5 {
            assert_eq!(d.find(v), v);
        }
        // The structure is reusable after a full rollback.
        assert!(d.union(3, 4));
        assert_eq!(d.find(4), d.find(3));
    }
}
