//! Complete homogeneous symmetric polynomials and Schur polynomials.
//!
//! Schur coefficients (Kostka numbers) are counted by backtracking over
//! semistandard Young tableaux, which is slow but transparent and plenty for
//! shapes with at most [`MAX_SCHUR_SIZE`] boxes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::poly::SparsePoly;
use crate::rational::{binomial, Rational};

pub const MAX_SCHUR_SIZE: u32 = 12;

/// A weakly decreasing sequence of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of(n: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                prefix.push(p);
                rec(rest - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Comma-separated parts, e.g. `3,2,1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Partition::new(Vec::new());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `s_{d,m} = Σ_{|δ| = d} x^δ` in `m` variables.
pub fn complete_homogeneous(d: u32, m: usize) -> SparsePoly {
    assert!(m >= 1, "complete_homogeneous needs at least one variable");
    let terms = Exponent::all_of_total(m, d)
        .into_iter()
        .map(|e| (e, Rational::one()));
    SparsePoly::from_terms(m, d, terms).expect("homogeneous by construction")
}

/// `s_λ(x_1, …, x_m) = Σ_μ K_{λμ} x^μ`.
pub fn schur(lambda: &Partition, m: usize) -> Result<SparsePoly> {
    let identity: Vec<usize> = (0..m).collect();
    schur_with_alphabet_order(lambda, m, &identity)
}

/// Kostka numbers `K_{λμ}` for every content `μ` with at least one tableau.
pub fn kostka_table(lambda: &Partition, m: usize) -> Result<BTreeMap<Exponent, BigInt>> {
    let identity: Vec<usize> = (0..m).collect();
    kostka_with_alphabet_order(lambda, m, &identity)
}

/// Schur polynomial computed from tableaux that are semistandard with respect
/// to the letter order `order[0] < order[1] < …`. Because Schur polynomials are
/// symmetric, every order must give the same polynomial.
pub fn schur_with_alphabet_order(lambda: &Partition, m: usize, order: &[usize]) -> Result<SparsePoly> {
    let table = kostka_with_alphabet_order(lambda, m, order)?;
    SparsePoly::from_terms(
        m,
        lambda.size(),
        table.into_iter().map(|(e, k)| (e, Rational::from_integer(k))),
    )
}

fn kostka_with_alphabet_order(
    lambda: &Partition,
    m: usize,
    order: &[usize],
) -> Result<BTreeMap<Exponent, BigInt>> {
    if lambda.len() > m {
        return Err(Error::TooManyParts {
            parts: lambda.len(),
            vars: m,
        });
    }
    if lambda.size() > MAX_SCHUR_SIZE {
        return Err(Error::TooLarge {
            what: "|λ|",
            value: lambda.size() as usize,
            guard: MAX_SCHUR_SIZE as usize,
        });
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if order.len() != m || sorted != (0..m).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument(format!(
            "alphabet order {order:?} is not a permutation of 0..{m}"
        )));
    }

    let cells: Vec<(usize, usize)> = lambda
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    let mut search = TableauSearch {
        shape: lambda.parts(),
        cells: &cells,
        m,
        // ranks in the chosen alphabet order
        grid: lambda.parts().iter().map(|&l| vec![0usize; l as usize]).collect(),
        content: vec![0u32; m],
        order,
        table: BTreeMap::new(),
    };
    search.fill(0);
    Ok(search.table)
}

struct TableauSearch<'a> {
    shape: &'a [u32],
    cells: &'a [(usize, usize)],
    m: usize,
    grid: Vec<Vec<usize>>,
    content: Vec<u32>,
    order: &'a [usize],
    table: BTreeMap<Exponent, BigInt>,
}

impl TableauSearch<'_> {
    /// Cells are filled in row-major order, so the left and upper neighbours
    /// are always already placed.
    fn fill(&mut self, idx: usize) {
        if idx == self.cells.len() {
            let key = Exponent::new(self.content.clone());
            *self.table.entry(key).or_insert_with(BigInt::zero) += 1;
            return;
        }
        let (r, c) = self.cells[idx];
        let mut lo = 0;
        if c > 0 {
            lo = lo.max(self.grid[r][c - 1]);
        }
        if r > 0 {
            lo = lo.max(self.grid[r - 1][c] + 1);
        }
        // Entries below in the same column need room: rows r+1.. must still
        // fit strictly larger ranks.
        let below = self.shape[r + 1..].iter().filter(|&&l| l as usize > c).count();
        if lo + below >= self.m {
            return;
        }
        for rank in lo..self.m - below {
            self.grid[r][c] = rank;
            let letter = self.order[rank];
            self.content[letter] += 1;
            self.fill(idx + 1);
            self.content[letter] -= 1;
        }
    }
}

/// Checks `s_{d,m}^{(i)} = C(d+m−1, i) · s_{d−i,m}` for every `0 ≤ i ≤ d`.
pub fn verify_ch_derived_identity(d: u32, m: usize) -> Vec<bool> {
    let s = complete_homogeneous(d, m);
    (0..=d)
        .map(|i| {
            let lhs = s.derived(i).expect("i ≤ d");
            let k = Rational::from_integer(binomial(d + m as u32 - 1, i));
            let rhs = complete_homogeneous(d - i, m).scale(&k);
            lhs == rhs
        })
        .collect()
}

/// Checks `∂_{s_d} f = N⁻¹(f)(1, …, 1)` for a homogeneous `f` of degree `d`.
pub fn verify_ch_evaluation(f: &SparsePoly) -> bool {
    if f.nvars() == 0 {
        return true;
    }
    let s = complete_homogeneous(f.degree(), f.nvars());
    let lhs = f.apply_diffop(&s).expect("equal degree and nvars");
    let ones = vec![Rational::one(); f.nvars()];
    let rhs = f.denormalize().evaluate(&ones).expect("matching length");
    lhs.coeff(&Exponent::zero(f.nvars())) == rhs
}
