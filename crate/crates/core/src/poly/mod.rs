//! Sparse homogeneous multivariate polynomials with exact rational coefficients.
//!
//! A [`SparsePoly`] always carries its variable count and degree, even when it
//! is zero, so homogeneity can be checked on every result. Terms live in a
//! `BTreeMap` keyed by [`Exponent`], which fixes a lexicographic iteration order
//! and makes every serialization byte-stable.

mod json;
mod ops;
mod text;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

pub use json::{PolyJson, TermJson};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, Rational>,
}

pub(crate) fn accumulate(terms: &mut BTreeMap<Exponent, Rational>, exp: Exponent, coeff: Rational) {
    if coeff.is_zero() {
        return;
    }
    match terms.entry(exp) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl SparsePoly {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        SparsePoly {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The degree-0 unit.
    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(Exponent::zero(nvars), c)
    }

    pub fn monomial(exp: Exponent, coeff: Rational) -> Self {
        let mut p = Self::zero(exp.len(), exp.total());
        accumulate(&mut p.terms, exp, coeff);
        p
    }

    /// The linear form `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Exponent::unit(nvars, i), Rational::one())
    }

    /// Builds a polynomial from arbitrary terms, summing repeats and dropping zeros.
    pub fn from_terms<I>(nvars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let mut p = Self::zero(nvars, degree);
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent {exp} has length {} but polynomial has {nvars} variables",
                    exp.len()
                )));
            }
            if exp.total() != degree {
                return Err(Error::NotHomogeneous(exp.to_string()));
            }
            accumulate(&mut p.terms, exp, c);
        }
        Ok(p)
    }

    /// Internal constructor for results whose homogeneity follows from the
    /// operation; still verified in debug builds.
    pub(crate) fn from_map(nvars: usize, degree: u32, terms: BTreeMap<Exponent, Rational>) -> Self {
        let p = SparsePoly {
            nvars,
            degree,
            terms,
        };
        debug_assert!(p.is_homogeneous(), "non-homogeneous result");
        debug_assert!(p.terms.values().all(|c| !c.is_zero()));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn term_map(&self) -> &BTreeMap<Exponent, Rational> {
        &self.terms
    }

    /// `c_α`, zero when `α` is outside the support.
    pub fn coeff(&self, exp: &Exponent) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff_ref(&self, exp: &Exponent) -> Option<&Rational> {
        self.terms.get(exp)
    }

    /// Every key has total equal to the declared degree and the declared length.
    pub fn is_homogeneous(&self) -> bool {
        self.terms
            .keys()
            .all(|e| e.len() == self.nvars && e.total() == self.degree)
    }

    /// The sum of all coefficients, i.e. the value at `(1, …, 1)`.
    pub fn coefficient_sum(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    fn same_shape(&self, other: &SparsePoly, what: &str) -> Result<()> {
        if self.nvars != other.nvars || self.degree != other.degree {
            return Err(Error::DimensionMismatch(format!(
                "{what}: ({} vars, degree {}) vs ({} vars, degree {})",
                self.nvars, self.degree, other.nvars, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.same_shape(other, "add")?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            accumulate(&mut terms, e.clone(), c.clone());
        }
        Ok(Self::from_map(self.nvars, self.degree, terms))
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparsePoly {
        self.map_coeffs(|_, c| -c)
    }

    pub fn scale(&self, k: &Rational) -> SparsePoly {
        self.map_coeffs(|_, c| c * k)
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(format!(
                "mul: {} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                accumulate(&mut terms, ea.add(eb), ca * cb);
            }
        }
        Ok(Self::from_map(
            self.nvars,
            self.degree + other.degree,
            terms,
        ))
    }

    pub fn pow(&self, k: u32) -> SparsePoly {
        let mut acc = SparsePoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same nvars");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same nvars");
            }
        }
        acc
    }

    /// Applies `f(exponent, coefficient)` to every coefficient, dropping zeros.
    pub(crate) fn map_coeffs<F>(&self, mut f: F) -> SparsePoly
    where
        F: FnMut(&Exponent, &Rational) -> Rational,
    {
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let v = f(e, c);
                (!v.is_zero()).then(|| (e.clone(), v))
            })
            .collect();
        Self::from_map(self.nvars, self.degree, terms)
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub(crate) fn filter_terms<F>(&self, mut keep: F) -> SparsePoly
    where
        F: FnMut(&Exponent) -> bool,
    {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| keep(e))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Self::from_map(self.nvars, self.degree, terms)
    }

    /// Sets the listed variables to zero and removes them, keeping the others in
    /// their original relative order. The degree is unchanged because only terms
    /// free of those variables survive.
    pub fn restrict_to_zero(&self, vars: &[usize]) -> Result<SparsePoly> {
        if let Some(&bad) = vars.iter().find(|&&v| v >= self.nvars) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                limit: self.nvars,
            });
        }
        let kept: Vec<usize> = (0..self.nvars).filter(|i| !vars.contains(i)).collect();
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| vars.iter().all(|&v| e.get(v) == 0))
            .map(|(e, c)| (Exponent::new(kept.iter().map(|&i| e.get(i)).collect()), c.clone()))
            .collect();
        Ok(Self::from_map(kept.len(), self.degree, terms))
    }

    /// Places this polynomial into a ring with `total` variables, sending
    /// variable `i` to `positions[i]`.
    pub fn embed(&self, total: usize, positions: &[usize]) -> Result<SparsePoly> {
        if positions.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "embed: {} positions for {} variables",
                positions.len(),
                self.nvars
            )));
        }
        if let Some(&bad) = positions.iter().find(|&&p| p >= total) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                limit: total,
            });
        }
        let mut seen = vec![false; total];
        for &p in positions {
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!("position {p} used twice")));
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut v = vec![0; total];
                for (i, &p) in positions.iter().enumerate() {
                    v[p] = e.get(i);
                }
                (Exponent::new(v), c.clone())
            })
            .collect();
        Ok(Self::from_map(total, self.degree, terms))
    }

    /// Groups terms by the exponent of the first `k` variables, returning
    /// `ι ↦ p_ι` with `p = Σ p_ι(x) v^ι`. Each `p_ι` lives in the remaining
    /// `nvars − k` variables and has degree `degree − |ι|`.
    pub fn split_leading(&self, k: usize) -> Result<BTreeMap<Exponent, SparsePoly>> {
        if k > self.nvars {
            return Err(Error::IndexOutOfRange {
                index: k,
                limit: self.nvars,
            });
        }
        let m = self.nvars - k;
        let mut out: BTreeMap<Exponent, SparsePoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let iota = Exponent::new(e.entries()[..k].to_vec());
            let rest = Exponent::new(e.entries()[k..].to_vec());
            let d = self.degree - iota.total();
            let part = out
                .entry(iota)
                .or_insert_with(|| SparsePoly::zero(m, d));
            accumulate(&mut part.terms, rest, c.clone());
        }
        Ok(out)
    }
}
