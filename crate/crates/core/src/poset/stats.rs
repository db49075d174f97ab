use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::json;

use super::{Chain, Poset};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::poly::SparsePoly;
use crate::rational::Rational;

/// `F(ι)`: the number of linear extensions with `L(x_{m+1}) − L(x_m) = ι_m`.
///
/// Stored sparsely; any query outside the support (including vectors with
/// non-positive entries) returns 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapTable {
    n: usize,
    k: usize,
    counts: BTreeMap<Vec<i64>, u64>,
}

/// `N(i_1, …, i_k)`: the number of linear extensions with `L(x_j) = i_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionTable {
    n: usize,
    k: usize,
    counts: BTreeMap<Vec<usize>, u64>,
}

impl GapTable {
    pub fn from_extensions<'a, I>(n: usize, chain: &Chain, extensions: I) -> GapTable
    where
        I: IntoIterator<Item = &'a Vec<usize>>,
    {
        let xs = chain.elements();
        let mut counts = BTreeMap::new();
        for l in extensions {
            let gaps: Vec<i64> = xs
                .windows(2)
                .map(|w| l[w[1]] as i64 - l[w[0]] as i64)
                .collect();
            *counts.entry(gaps).or_insert(0) += 1;
        }
        GapTable {
            n,
            k: xs.len(),
            counts,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Chain length; keys have `k − 1` entries.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, iota: &[i64]) -> u64 {
        self.counts.get(iota).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Vec<i64>, u64)> {
        self.counts.iter().map(|(k, &v)| (k, v))
    }

    /// `P_KS(u, v_1, …, v_{k−1}) = Σ F(ι + 1) v^ι u^j` over `|ι| + j = n − k`.
    /// Variable 0 is `u`, variables `1..k` are the `v_m`.
    pub fn kahn_saks_poly(&self) -> Result<SparsePoly> {
        if self.k < 2 {
            return Err(Error::ChainTooShort { len: self.k, min: 2 });
        }
        let degree = (self.n - self.k) as u32;
        let terms = self.counts.iter().map(|(gaps, &count)| {
            let iota: Vec<u32> = gaps.iter().map(|&g| (g - 1) as u32).collect();
            let j = degree - iota.iter().sum::<u32>();
            let mut exp = Vec::with_capacity(self.k);
            exp.push(j);
            exp.extend(iota);
            (Exponent::new(exp), Rational::from_integer(BigInt::from(count)))
        });
        SparsePoly::from_terms(self.k, degree, terms)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "k": self.k,
            "counts": self.counts.iter().map(|(g, c)| json!({"gaps": g, "count": c})).collect::<Vec<_>>(),
        })
    }
}

impl PositionTable {
    pub fn from_extensions<'a, I>(n: usize, chain: &Chain, extensions: I) -> PositionTable
    where
        I: IntoIterator<Item = &'a Vec<usize>>,
    {
        let xs = chain.elements();
        let mut counts = BTreeMap::new();
        for l in extensions {
            let pos: Vec<usize> = xs.iter().map(|&x| l[x]).collect();
            *counts.entry(pos).or_insert(0) += 1;
        }
        PositionTable {
            n,
            k: xs.len(),
            counts,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, positions: &[usize]) -> u64 {
        self.counts.get(positions).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Vec<usize>, u64)> {
        self.counts.iter().map(|(k, &v)| (k, v))
    }

    /// Stanley's polynomial in `(v_1, …, v_{k−1}, u_1, u_2)`.
    ///
    /// Positions `p_1 < … < p_k` map to `a = p_1 − 1`, `ι_m = p_{m+1} − p_m − 1`
    /// and `b = n − p_k`, so `a + |ι| + b = n − k`.
    pub fn stanley_poly(&self) -> Result<SparsePoly> {
        if self.k < 1 {
            return Err(Error::ChainTooShort { len: self.k, min: 1 });
        }
        let degree = (self.n - self.k) as u32;
        let terms = self.counts.iter().map(|(pos, &count)| {
            let mut exp: Vec<u32> = pos.windows(2).map(|w| (w[1] - w[0] - 1) as u32).collect();
            exp.push((pos[0] - 1) as u32);
            exp.push((self.n - pos[self.k - 1]) as u32);
            (Exponent::new(exp), Rational::from_integer(BigInt::from(count)))
        });
        SparsePoly::from_terms(self.k + 1, degree, terms)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "k": self.k,
            "counts": self.counts.iter().map(|(p, c)| json!({"positions": p, "count": c})).collect::<Vec<_>>(),
        })
    }
}

fn collect_extensions(poset: &Poset, chain: &Chain) -> Result<Vec<Vec<usize>>> {
    chain.validate(poset)?;
    Ok(poset.linear_extensions()?.collect())
}

pub fn gap_statistics(poset: &Poset, chain: &Chain) -> Result<GapTable> {
    let exts = collect_extensions(poset, chain)?;
    Ok(GapTable::from_extensions(poset.len(), chain, &exts))
}

pub fn position_statistics(poset: &Poset, chain: &Chain) -> Result<PositionTable> {
    let exts = collect_extensions(poset, chain)?;
    Ok(PositionTable::from_extensions(poset.len(), chain, &exts))
}

pub fn kahn_saks_poly(poset: &Poset, chain: &Chain) -> Result<SparsePoly> {
    chain.validate(poset)?;
    if chain.len() < 2 {
        return Err(Error::ChainTooShort {
            len: chain.len(),
            min: 2,
        });
    }
    gap_statistics(poset, chain)?.kahn_saks_poly()
}

pub fn stanley_poly(poset: &Poset, chain: &Chain) -> Result<SparsePoly> {
    position_statistics(poset, chain)?.stanley_poly()
}

/// `["u", "v1", …, "v{k-1}"]`
pub fn kahn_saks_variable_names(k: usize) -> Vec<String> {
    std::iter::once("u".to_string())
        .chain((1..k).map(|m| format!("v{m}")))
        .collect()
}

/// `["v1", …, "v{k-1}", "u1", "u2"]`
pub fn stanley_variable_names(k: usize) -> Vec<String> {
    (1..k)
        .map(|m| format!("v{m}"))
        .chain(["u1".to_string(), "u2".to_string()])
        .collect()
}
