use super::Poset;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_EXTENSION_SIZE: usize = 12;

/// Streams every linear extension of a poset exactly once.
///
/// Each item is the position map `L` with `L[x] ∈ {1, …, n}`. Extensions are
/// produced by backtracking over the currently minimal elements, always trying
/// the smallest available element first, so the order is deterministic.
pub struct LinearExtensions<'a> {
    poset: &'a Poset,
    successors: Vec<Vec<usize>>,
    /// Unplaced predecessors of each element.
    pending: Vec<usize>,
    placed: Vec<usize>,
    used: Vec<bool>,
    /// Next candidate to try at each depth.
    cursor: Vec<usize>,
    done: bool,
}

impl Poset {
    pub fn linear_extensions(&self) -> Result<LinearExtensions<'_>> {
        self.linear_extensions_guarded(DEFAULT_MAX_EXTENSION_SIZE)
    }

    pub fn linear_extensions_guarded(&self, guard: usize) -> Result<LinearExtensions<'_>> {
        if self.len() > guard {
            return Err(Error::TooLarge {
                what: "poset size",
                value: self.len(),
                guard,
            });
        }
        let n = self.len();
        let successors = (0..n)
            .map(|i| (0..n).filter(|&j| self.less(i, j)).collect())
            .collect();
        let pending = (0..n).map(|j| self.predecessors(j).count()).collect();
        Ok(LinearExtensions {
            poset: self,
            successors,
            pending,
            placed: Vec::with_capacity(n),
            used: vec![false; n],
            cursor: vec![0; n + 1],
            done: false,
        })
    }

    /// `|E(P)|`.
    pub fn count_linear_extensions(&self) -> Result<u64> {
        Ok(self.linear_extensions()?.count() as u64)
    }
}

impl LinearExtensions<'_> {
    fn place(&mut self, x: usize) {
        self.used[x] = true;
        for &y in &self.successors[x] {
            self.pending[y] -= 1;
        }
        self.placed.push(x);
    }

    fn unplace(&mut self) {
        let x = self.placed.pop().expect("non-empty");
        self.used[x] = false;
        for &y in &self.successors[x] {
            self.pending[y] += 1;
        }
    }

    fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.placed.len()];
        for (i, &x) in self.placed.iter().enumerate() {
            pos[x] = i + 1;
        }
        pos
    }
}

impl Iterator for LinearExtensions<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let n = self.poset.len();
        if n == 0 {
            self.done = true;
            return Some(Vec::new());
        }
        loop {
            let depth = self.placed.len();
            let start = self.cursor[depth];
            let candidate = (start..n).find(|&x| !self.used[x] && self.pending[x] == 0);
            match candidate {
                Some(x) => {
                    self.cursor[depth] = x + 1;
                    self.place(x);
                    if depth + 1 == n {
                        let out = self.positions();
                        self.unplace();
                        return Some(out);
                    }
                    self.cursor[depth + 1] = 0;
                }
                None => {
                    if depth == 0 {
                        self.done = true;
                        return None;
                    }
                    self.unplace();
                }
            }
        }
    }
}
