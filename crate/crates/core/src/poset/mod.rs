//! Finite posets on `{0, …, n−1}` and the chain statistics built from their
//! linear extensions.

mod extensions;
mod stats;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use extensions::{LinearExtensions, DEFAULT_MAX_EXTENSION_SIZE};
pub use stats::{
    gap_statistics, kahn_saks_poly, kahn_saks_variable_names, position_statistics, stanley_poly,
    stanley_variable_names, GapTable, PositionTable,
};

use crate::error::{Error, Result};

/// A strict partial order stored as its full (transitively closed) relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    less: Vec<bool>,
}

/// Wire form: `{"n": 3, "covers": [[0, 1]]}` with `i < j` in the order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
}

impl Poset {
    pub fn antichain(n: usize) -> Self {
        Poset {
            n,
            less: vec![false; n * n],
        }
    }

    /// The total order `0 < 1 < … < n−1`.
    pub fn chain(n: usize) -> Self {
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_relations(n, &covers).expect("a chain is acyclic")
    }

    /// Builds the transitive closure of the given relations `i < j`.
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        let mut less = vec![false; n * n];
        for &(i, j) in relations {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j),
                    limit: n,
                });
            }
            less[i * n + j] = true;
        }
        warshall(n, &mut less);
        if let Some(i) = (0..n).find(|&i| less[i * n + i]) {
            return Err(Error::NotAPartialOrder(format!(
                "element {i} lies on a cycle"
            )));
        }
        Ok(Poset { n, less })
    }

    /// Accepts an explicit relation matrix and checks that it is irreflexive,
    /// antisymmetric and transitive.
    pub fn from_matrix(matrix: &[Vec<bool>]) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch("relation matrix is not square".into()));
        }
        let less: Vec<bool> = matrix.iter().flatten().copied().collect();
        for i in 0..n {
            if less[i * n + i] {
                return Err(Error::NotAPartialOrder(format!("{i} < {i}")));
            }
            for j in 0..n {
                if less[i * n + j] && less[j * n + i] {
                    return Err(Error::NotAPartialOrder(format!("{i} < {j} and {j} < {i}")));
                }
                for k in 0..n {
                    if less[i * n + j] && less[j * n + k] && !less[i * n + k] {
                        return Err(Error::NotAPartialOrder(format!(
                            "{i} < {j} < {k} but not {i} < {k}"
                        )));
                    }
                }
            }
        }
        Ok(Poset { n, less })
    }

    /// Random poset: a uniformly random labelling, each pair related with
    /// probability `edge_prob` in labelling order, then transitive closure.
    pub fn random<R: Rng + ?Sized>(n: usize, edge_prob: f64, rng: &mut R) -> Result<Self> {
        if !(0.0..=1.0).contains(&edge_prob) {
            return Err(Error::InvalidArgument(format!(
                "edge probability {edge_prob} outside [0, 1]"
            )));
        }
        let mut labels: Vec<usize> = (0..n).collect();
        labels.shuffle(rng);
        let mut relations = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.random_bool(edge_prob) {
                    relations.push((labels[a], labels[b]));
                }
            }
        }
        Poset::from_relations(n, &relations)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `i < j` in the order.
    pub fn less(&self, i: usize, j: usize) -> bool {
        self.less[i * self.n + j]
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.less(i, j) || self.less(j, i)
    }

    pub fn relation_count(&self) -> usize {
        self.less.iter().filter(|&&b| b).count()
    }

    /// Elements strictly below `j`.
    pub fn predecessors(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.less(i, j))
    }

    /// Cover relations `i ⋖ j`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.less(i, j) && !(0..n).any(|k| self.less(i, k) && self.less(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// `P ⊕ Q`: disjoint union with every element of `self` below every
    /// element of `other`. Elements of `other` are renumbered from `self.len()`.
    pub fn ordinal_sum(&self, other: &Poset) -> Poset {
        let n = self.n + other.n;
        let mut less = vec![false; n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                less[i * n + j] = self.less(i, j);
            }
            for j in self.n..n {
                less[i * n + j] = true;
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                less[(self.n + i) * n + self.n + j] = other.less(i, j);
            }
        }
        Poset { n, less }
    }

    /// `P ⊕ [ℓ]`.
    pub fn ordinal_sum_with_chain(&self, ell: usize) -> Poset {
        self.ordinal_sum(&Poset::chain(ell))
    }

    /// Every chain of exactly `k` elements, listed in lexicographic order of
    /// their (increasing) element sequences.
    pub fn chains_of_length(&self, k: usize) -> Vec<Chain> {
        fn rec(p: &Poset, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Chain>) {
            if cur.len() == k {
                out.push(Chain(cur.clone()));
                return;
            }
            for x in 0..p.n {
                if cur.last().is_none_or(|&last| p.less(last, x)) {
                    cur.push(x);
                    rec(p, k, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        if k > 0 {
            rec(self, k, &mut Vec::with_capacity(k), &mut out);
        }
        out
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            n: self.n,
            covers: self.covers().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json(j: &PosetJson) -> Result<Poset> {
        let rel: Vec<(usize, usize)> = j.covers.iter().map(|c| (c[0], c[1])).collect();
        Poset::from_relations(j.n, &rel)
    }

    pub fn from_json_str(s: &str) -> Result<Poset> {
        let j: PosetJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Poset::from_json(&j)
    }
}

fn warshall(n: usize, less: &mut [bool]) {
    for k in 0..n {
        for i in 0..n {
            if less[i * n + k] {
                for j in 0..n {
                    if less[k * n + j] {
                        less[i * n + j] = true;
                    }
                }
            }
        }
    }
}

/// A chain `x_1 < x_2 < … < x_k` of a poset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chain(Vec<usize>);

impl Chain {
    pub fn new(poset: &Poset, elements: Vec<usize>) -> Result<Chain> {
        let chain = Chain(elements);
        chain.validate(poset)?;
        Ok(chain)
    }

    pub fn validate(&self, poset: &Poset) -> Result<()> {
        let ok = !self.0.is_empty()
            && self.0.iter().all(|&x| x < poset.len())
            && self.0.windows(2).all(|w| poset.less(w[0], w[1]));
        if ok {
            Ok(())
        } else {
            Err(Error::NotAChain(self.0.clone()))
        }
    }

    /// Parses `i1,i2,…,ik`.
    pub fn parse(poset: &Poset, s: &str) -> Result<Chain> {
        let elements = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad chain element {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Chain::new(poset, elements)
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
