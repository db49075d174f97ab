use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{accumulate, SparsePoly};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::rational::Rational;

fn ratio_of(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

/// `β!/(β−α)!`, the scalar produced by `∂^α x^β`, or `None` if `α ≰ β`.
fn falling_factor(beta: &Exponent, alpha: &Exponent) -> Option<(Exponent, BigInt)> {
    let rest = beta.checked_sub(alpha)?;
    let mut k = BigInt::one();
    for (&b, &a) in beta.entries().iter().zip(alpha.entries()) {
        for t in (b - a + 1)..=b {
            k *= t;
        }
    }
    Some((rest, k))
}

impl SparsePoly {
    fn check_len(&self, exp: &Exponent, what: &str) -> Result<()> {
        if exp.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{what}: exponent of length {} for {} variables",
                exp.len(),
                self.nvars
            )));
        }
        Ok(())
    }

    /// `N(f)`: `c_α ↦ c_α / α!`.
    pub fn normalize(&self) -> SparsePoly {
        self.map_coeffs(|e, c| c / Rational::from_integer(e.factorial()))
    }

    /// `N⁻¹(f)`: `c_α ↦ c_α · α!`.
    pub fn denormalize(&self) -> SparsePoly {
        self.map_coeffs(|e, c| c * Rational::from_integer(e.factorial()))
    }

    /// `f(A·y)` where `A` has one row per variable of `f` and one column per
    /// new variable. Entries must be non-negative.
    pub fn substitute_linear(&self, matrix: &[Vec<Rational>]) -> Result<SparsePoly> {
        if matrix.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "substitute_linear: matrix has {} rows, polynomial has {} variables",
                matrix.len(),
                self.nvars
            )));
        }
        let cols = matrix.first().map_or(0, Vec::len);
        if let Some(r) = matrix.iter().position(|row| row.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "substitute_linear: row {r} has {} columns, expected {cols}",
                matrix[r].len()
            )));
        }
        if self.nvars == 0 {
            return Err(Error::DimensionMismatch(
                "substitute_linear needs at least one variable".into(),
            ));
        }
        for (r, row) in matrix.iter().enumerate() {
            if let Some(c) = row.iter().position(|a| a.is_negative()) {
                return Err(Error::NegativeEntry { row: r, col: c });
            }
        }

        let forms: Vec<SparsePoly> = matrix
            .iter()
            .map(|row| {
                let terms = row
                    .iter()
                    .enumerate()
                    .map(|(j, a)| (Exponent::unit(cols, j), a.clone()));
                SparsePoly::from_terms(cols, 1, terms).expect("linear form")
            })
            .collect();
        // powers[i][k] = forms[i]^k
        let mut powers: Vec<Vec<SparsePoly>> = forms
            .iter()
            .map(|_| vec![SparsePoly::one(cols)])
            .collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut acc = SparsePoly::constant(cols, c.clone());
            for (i, &a) in e.entries().iter().enumerate() {
                while powers[i].len() <= a as usize {
                    let next = powers[i].last().unwrap().mul(&forms[i])?;
                    powers[i].push(next);
                }
                if a > 0 {
                    acc = acc.mul(&powers[i][a as usize])?;
                }
            }
            for (e2, c2) in acc.terms {
                accumulate(&mut terms, e2, c2);
            }
        }
        Ok(SparsePoly::from_map(cols, self.degree, terms))
    }

    /// `p(v_1, …, v_keep, u, …, u)`: the trailing `nvars − keep` variables are
    /// merged into one fresh variable, which becomes the last of `keep + 1`.
    pub fn diagonalize(&self, keep: usize) -> Result<SparsePoly> {
        if keep > self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "diagonalize: keep = {keep} exceeds {} variables",
                self.nvars
            )));
        }
        let cols = keep + 1;
        let matrix: Vec<Vec<Rational>> = (0..self.nvars)
            .map(|i| {
                let mut row = vec![Rational::zero(); cols];
                row[i.min(keep)] = Rational::one();
                row
            })
            .collect();
        if self.nvars == 0 {
            // No variables to substitute into; only the appended one exists.
            return Ok(SparsePoly::from_map(
                1,
                self.degree,
                self.terms
                    .iter()
                    .map(|(_, c)| (Exponent::zero(1), c.clone()))
                    .collect(),
            ));
        }
        self.substitute_linear(&matrix)
    }

    /// Relabels variables: variable `i` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<SparsePoly> {
        self.embed(self.nvars, perm)
    }

    /// `∂f/∂x_i`.
    pub fn partial_derivative(&self, i: usize) -> Result<SparsePoly> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.nvars,
            });
        }
        if self.degree == 0 {
            return Ok(SparsePoly::zero(self.nvars, 0));
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let a = e.get(i);
            if a > 0 {
                let lowered = e.shifted(i, -1).expect("a > 0");
                accumulate(&mut terms, lowered, c * Rational::from_integer(BigInt::from(a)));
            }
        }
        Ok(SparsePoly::from_map(self.nvars, self.degree - 1, terms))
    }

    /// `∂^γ f`.
    pub fn partial_power(&self, gamma: &Exponent) -> Result<SparsePoly> {
        self.apply_diffop(&SparsePoly::monomial(gamma.clone(), Rational::one()))
    }

    /// `∂_s f` where `∂_s = s(∂_1, …, ∂_n)`. The result has degree
    /// `deg f − deg s`; when the degrees agree it is a degree-0 polynomial.
    pub fn apply_diffop(&self, s: &SparsePoly) -> Result<SparsePoly> {
        if s.nvars != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "apply_diffop: operator in {} variables, polynomial in {}",
                s.nvars, self.nvars
            )));
        }
        if s.degree > self.degree {
            return Err(Error::DegreeTooHigh {
                op: s.degree,
                poly: self.degree,
            });
        }
        let mut terms = BTreeMap::new();
        for (alpha, cs) in &s.terms {
            for (beta, cf) in &self.terms {
                if let Some((rest, k)) = falling_factor(beta, alpha) {
                    accumulate(&mut terms, rest, cs * cf * Rational::from_integer(k));
                }
            }
        }
        Ok(SparsePoly::from_map(
            self.nvars,
            self.degree - s.degree,
            terms,
        ))
    }

    /// The `j`-th derived polynomial: the coefficient of `u^j` in
    /// `s(x_1 + u, …, x_n + u)`.
    ///
    /// Computed term by term from `Π (x_i + u)^{α_i} = Σ_β binom(α, β) x^β u^{|α|−|β|}`.
    pub fn derived(&self, j: u32) -> Result<SparsePoly> {
        if j > self.degree {
            return Err(Error::IndexOutOfRange {
                index: j as usize,
                limit: self.degree as usize + 1,
            });
        }
        let target = self.degree - j;
        let mut terms = BTreeMap::new();
        for (alpha, c) in &self.terms {
            for beta in alpha.sub_exponents() {
                if beta.total() == target {
                    let k = alpha.binom(&beta);
                    accumulate(&mut terms, beta, c * Rational::from_integer(k));
                }
            }
        }
        Ok(SparsePoly::from_map(self.nvars, target, terms))
    }

    /// `f_{≥γ}`: terms with `α ≥ γ` componentwise.
    pub fn truncate_lower(&self, gamma: &Exponent) -> Result<SparsePoly> {
        self.check_len(gamma, "truncate_lower")?;
        Ok(self.filter_terms(|e| gamma.le(e)))
    }

    /// `f_{≤α}`: terms with `β ≤ α` componentwise. With `α = (1, …, 1)` this is
    /// the multiaffine part.
    pub fn truncate_upper(&self, alpha: &Exponent) -> Result<SparsePoly> {
        self.check_len(alpha, "truncate_upper")?;
        Ok(self.filter_terms(|e| e.le(alpha)))
    }

    /// `c_β ↦ binom(α, β) · c_β`.
    pub fn weighted_truncate(&self, alpha: &Exponent) -> Result<SparsePoly> {
        self.check_len(alpha, "weighted_truncate")?;
        Ok(self.map_coeffs(|e, c| c * Rational::from_integer(alpha.binom(e))))
    }

    /// `∫^γ f = Σ α!/(α+γ)! c_α x^{α+γ}`.
    ///
    /// The result is checked against `N(x^γ · N⁻¹(f))` on every call.
    pub fn antiderivative(&self, gamma: &Exponent) -> Result<SparsePoly> {
        self.check_len(gamma, "antiderivative")?;
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| {
                let raised = a.add(gamma);
                let k = ratio_of(a.factorial(), raised.factorial());
                (raised, c * k)
            })
            .collect();
        let direct = SparsePoly::from_map(self.nvars, self.degree + gamma.total(), terms);

        let via_normalization = SparsePoly::monomial(gamma.clone(), Rational::one())
            .mul(&self.denormalize())?
            .normalize();
        assert_eq!(
            direct, via_normalization,
            "antiderivative disagrees with N(x^γ N⁻¹(f))"
        );
        Ok(direct)
    }

    /// The exact value at `point`.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "evaluate: point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut powers: Vec<Vec<Rational>> = point.iter().map(|_| vec![Rational::one()]).collect();
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &a) in e.entries().iter().enumerate() {
                if a == 0 {
                    continue;
                }
                while powers[i].len() <= a as usize {
                    let next = powers[i].last().unwrap() * &point[i];
                    powers[i].push(next);
                }
                t *= &powers[i][a as usize];
            }
            acc += t;
        }
        Ok(acc)
    }

    /// `N⁻¹(f)(u, …, u) = (Σ_α α! c_α) u^d`, returned as its scalar factor.
    pub fn denormalized_diagonal_value(&self) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (e, c)| {
                acc + c * Rational::from_integer(e.factorial())
            })
    }
}
