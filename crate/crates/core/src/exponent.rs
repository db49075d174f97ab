//! Exponent vectors `α ∈ ℕⁿ`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::rational::{binomial, factorial};

/// A fixed-length vector of non-negative integers.
///
/// Ordering is lexicographic on the entries, which is the canonical term
/// order for [`SparsePoly`](crate::SparsePoly).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        Exponent(entries)
    }

    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    /// The canonical basis vector `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Exponent(e)
    }

    /// `(d, …, d)`.
    pub fn constant(n: usize, d: u32) -> Self {
        Exponent(vec![d; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// `|α|`
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α! = Π α_i!`
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    /// `binom(α, β) = Π C(α_i, β_i)`, zero unless `β ≤ α`.
    pub fn binom(&self, beta: &Exponent) -> BigInt {
        debug_assert_eq!(self.len(), beta.len());
        let mut acc = BigInt::one();
        for (&a, &b) in self.0.iter().zip(&beta.0) {
            if b > a {
                return BigInt::from(0);
            }
            acc *= binomial(a, b);
        }
        acc
    }

    /// The multinomial `|α|! / α!`.
    pub fn multinomial(&self) -> BigInt {
        factorial(self.total()) / self.factorial()
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other`, or `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    /// Adds `delta` to entry `i`; `None` if the result is negative.
    pub fn shifted(&self, i: usize, delta: i64) -> Option<Exponent> {
        let v = self.0[i] as i64 + delta;
        if v < 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] = v as u32;
        Some(Exponent(e))
    }

    /// All exponents of length `n` with total `d`, in lexicographic order.
    pub fn all_of_total(n: usize, d: u32) -> Vec<Exponent> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
            if prefix.len() + 1 == n {
                prefix.push(d);
                out.push(Exponent(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in 0..=d {
                prefix.push(a);
                rec(n, d - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(Exponent(Vec::new()));
            }
            return out;
        }
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// All `β ≤ self` componentwise, in lexicographic order.
    pub fn sub_exponents(&self) -> Vec<Exponent> {
        let mut out = vec![Vec::with_capacity(self.len())];
        for &a in &self.0 {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..=a).map(move |b| {
                        let mut q = p.clone();
                        q.push(b);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(Exponent).collect()
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent(v)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}
