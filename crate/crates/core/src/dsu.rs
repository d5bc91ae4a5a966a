use alloc::vec::Vec;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: alloc::vec![1; len],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }

    /// Dense class ids, numbered in order of each class's smallest member.
    pub(crate) fn labels(&mut self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let n = self.parent.len();
        let mut id_of_root = alloc::vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = alloc::vec![0; n];
        for x in 0..n {
            let r = self.find(x);
            if id_of_root[r] == usize::MAX {
                id_of_root[r] = classes.len();
                classes.push(Vec::new());
            }
            class_of[x] = id_of_root[r];
            classes[id_of_root[r]].push(x);
        }
        (classes, class_of)
    }
}
