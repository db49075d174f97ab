//! Exact identities behind the Kahn-Saks construction.
//!
//! Each verifier computes one side operationally (products, differential
//! operators, evaluation at zero) and the other from a closed formula.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::poly::SparsePoly;
use crate::rational::{binomial, factorial, Rational};
use crate::symmetric::complete_homogeneous;

fn fact(n: u32) -> Rational {
    Rational::from_integer(factorial(n))
}

/// `(u + Σ_{i ∈ vars} y_i)^a` in `total` variables, `u` being variable `u`.
fn power_of_sum(total: usize, u: usize, vars: std::ops::Range<usize>, a: u32) -> SparsePoly {
    let mut terms = vec![(Exponent::unit(total, u), Rational::one())];
    terms.extend(vars.map(|i| (Exponent::unit(total, i), Rational::one())));
    SparsePoly::from_terms(total, 1, terms)
        .expect("linear form")
        .pow(a)
}

fn split_dims(p: &SparsePoly, m: usize) -> Result<usize> {
    if m == 0 || m > p.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "need 1 ≤ m ≤ nvars, got m = {m} with {} variables",
            p.nvars()
        )));
    }
    Ok(p.nvars() - m)
}

/// `∂_s|_{x=0}(p · (u + Σ x_i)^a)` where `p` lives in `(v_1..v_k, x_1..x_m)`
/// and `s` in `(x_1..x_m)`. The result lives in `(v_1..v_k, u)`.
pub fn operational_diffop_at_zero(p: &SparsePoly, s: &SparsePoly, a: u32) -> Result<SparsePoly> {
    let m = s.nvars();
    let k = split_dims(p, m)?;
    let total = k + m + 1;
    let lifted = p.embed(total, &(0..k + m).collect::<Vec<_>>())?;
    let product = lifted.mul(&power_of_sum(total, k + m, k..k + m, a))?;
    let op = s.embed(total, &(k..k + m).collect::<Vec<_>>())?;
    product
        .apply_diffop(&op)?
        .restrict_to_zero(&(k..k + m).collect::<Vec<_>>())
}

/// The right side of the technical identity:
/// `Σ_ι a!/(d−|ι|)! · ∂_{s^{(|ι|+a−d)}} p_ι · v^ι u^{d−|ι|}`.
/// Terms with a negative derived index vanish.
fn technical_closed_form(p: &SparsePoly, s: &SparsePoly, a: u32) -> Result<SparsePoly> {
    let m = s.nvars();
    let k = split_dims(p, m)?;
    let d = p.degree();
    let mut terms = BTreeMap::new();
    for (iota, p_iota) in p.split_leading(k)? {
        let rest = d - iota.total();
        let j = iota.total() as i64 + a as i64 - d as i64;
        if j < 0 {
            continue;
        }
        let derived = s.derived(j as u32)?;
        let value = p_iota.apply_diffop(&derived)?.coeff(&Exponent::zero(m));
        let coeff = fact(a) / fact(rest) * value;
        let mut e = iota.into_entries();
        e.push(rest);
        terms.insert(Exponent::new(e), coeff);
    }
    SparsePoly::from_terms(k + 1, d, terms)
}

/// `∂_s|_{x=0}(p·(u+Σx_i)^a) = Σ_ι a!/(d−|ι|)! · ∂_{s^{(|ι|+a−d)}} p_ι · v^ι u^{d−|ι|}`.
///
/// `p` is in `(v_1..v_k, x_1..x_m)` with `m = s.nvars()`, and `a = deg s`.
pub fn verify_technical_derived(p: &SparsePoly, s: &SparsePoly, a: u32) -> Result<bool> {
    let (lhs, rhs) = technical_derived_sides(p, s, a)?;
    Ok(lhs == rhs)
}

/// `(operational, closed form)` for [`verify_technical_derived`].
pub fn technical_derived_sides(p: &SparsePoly, s: &SparsePoly, a: u32) -> Result<(SparsePoly, SparsePoly)> {
    if s.degree() != a {
        return Err(Error::DimensionMismatch(format!(
            "operator has degree {}, expected a = {a}",
            s.degree()
        )));
    }
    Ok((operational_diffop_at_zero(p, s, a)?, technical_closed_form(p, s, a)?))
}

/// `(1/a!)·∂_{v_n^a}|_{v_n=0}(p·(u+v_n)^a) = Σ C(a, b)·c_{ι,b}·v^ι u^b`
/// where `b` is the exponent of the last variable.
pub fn verify_weighted_truncation(p: &SparsePoly, a: u32) -> Result<bool> {
    let (lhs, rhs) = weighted_truncation_sides(p, a)?;
    Ok(lhs == rhs)
}

/// `(operational, closed form)` for [`verify_weighted_truncation`].
pub fn weighted_truncation_sides(p: &SparsePoly, a: u32) -> Result<(SparsePoly, SparsePoly)> {
    let n = p.nvars();
    if n == 0 {
        return Err(Error::DimensionMismatch("need a last variable".into()));
    }
    let s = SparsePoly::monomial(Exponent::new(vec![a]), Rational::one());
    let lhs = operational_diffop_at_zero(p, &s, a)?.scale(&(Rational::one() / fact(a)));

    // Same exponents with the last variable read as u.
    let rhs = SparsePoly::from_terms(
        n,
        p.degree(),
        p.terms().map(|(e, c)| {
            let b = e.get(n - 1);
            (e.clone(), c * Rational::from_integer(binomial(a, b)))
        }),
    )?;
    Ok((lhs, rhs))
}

/// `q_{ℓ,m}` by the closed formula
/// `Σ_ι (d+ℓ)!/(d−|ι|)! · C(d+ℓ+m−1, |ι|+ℓ) · N⁻¹(p_ι)(u,…,u) · v^ι`.
pub fn q_ell(p: &SparsePoly, m: usize, ell: u32) -> Result<SparsePoly> {
    let k = split_dims(p, m)?;
    let d = p.degree();
    let mut terms = BTreeMap::new();
    for (iota, p_iota) in p.split_leading(k)? {
        let t = iota.total();
        let coeff = fact(d + ell) / fact(d - t)
            * Rational::from_integer(binomial(d + ell + m as u32 - 1, t + ell))
            * p_iota.denormalized_diagonal_value();
        let mut e = iota.into_entries();
        e.push(d - t);
        terms.insert(Exponent::new(e), coeff);
    }
    SparsePoly::from_terms(k + 1, d, terms)
}

/// `q_{ℓ,m} = ∂_{s_{d+ℓ}}|_{x=0}(p·(u+Σx_i)^{d+ℓ})` computed operationally.
pub fn operational_q_ell(p: &SparsePoly, m: usize, ell: u32) -> Result<SparsePoly> {
    split_dims(p, m)?;
    let a = p.degree() + ell;
    operational_diffop_at_zero(p, &complete_homogeneous(a, m), a)
}

pub fn verify_qell_identity(p: &SparsePoly, ell: u32, m: usize) -> Result<bool> {
    Ok(q_ell(p, m, ell)? == operational_q_ell(p, m, ell)?)
}

/// `q_{ℓ,m}(v, u/ℓ) / (ℓ^{m−1}·(d+ℓ)!)`.
pub fn scaled_q_ell(p: &SparsePoly, m: usize, ell: u32) -> Result<SparsePoly> {
    if ell == 0 {
        return Err(Error::InvalidArgument("ℓ must be positive".into()));
    }
    let q = q_ell(p, m, ell)?;
    let n = q.nvars();
    let ell_q = Rational::from_integer(ell.into());
    let matrix: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i == j, i == n - 1) {
                    (false, _) => Rational::zero(),
                    (true, false) => Rational::one(),
                    (true, true) => Rational::one() / &ell_q,
                })
                .collect()
        })
        .collect();
    let denom = num_traits::pow(ell_q, m - 1) * fact(p.degree() + ell);
    Ok(q.substitute_linear(&matrix)?.scale(&(Rational::one() / denom)))
}

/// `q_m = Σ_ι N⁻¹(p_ι)(u,…,u) / ((d−|ι|)!·(d+m−|ι|−1)!) · v^ι`.
pub fn q_m(p: &SparsePoly, m: usize) -> Result<SparsePoly> {
    let k = split_dims(p, m)?;
    let d = p.degree();
    let mut terms = BTreeMap::new();
    for (iota, p_iota) in p.split_leading(k)? {
        let t = iota.total();
        let coeff = p_iota.denormalized_diagonal_value() / (fact(d - t) * fact(d + m as u32 - t - 1));
        let mut e = iota.into_entries();
        e.push(d - t);
        terms.insert(Exponent::new(e), coeff);
    }
    SparsePoly::from_terms(k + 1, d, terms)
}

/// `q = Σ_ι N⁻¹(p_ι)(u,…,u) / (d−|ι|)! · v^ι`, the limit of `(m−1)!·q_m(v, m·u)`.
pub fn q_limit(p: &SparsePoly, k: usize) -> Result<SparsePoly> {
    if k > p.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "k = {k} exceeds {} variables",
            p.nvars()
        )));
    }
    let d = p.degree();
    let mut terms = BTreeMap::new();
    for (iota, p_iota) in p.split_leading(k)? {
        let t = iota.total();
        let coeff = p_iota.denormalized_diagonal_value() / fact(d - t);
        let mut e = iota.into_entries();
        e.push(d - t);
        terms.insert(Exponent::new(e), coeff);
    }
    SparsePoly::from_terms(k + 1, d, terms)
}

/// `q(N(p)) = N(p(v, u, …, u))`: the limit construction applied to `N(p)`
/// is the normalized diagonalization of `p` in its last `nvars − k` variables.
pub fn verify_diagonalization_identity(p: &SparsePoly, k: usize) -> Result<bool> {
    let (lhs, rhs) = diagonalization_identity_sides(p, k)?;
    Ok(lhs == rhs)
}

/// `(q(N(p)), N(diag p))` for [`verify_diagonalization_identity`].
pub fn diagonalization_identity_sides(p: &SparsePoly, k: usize) -> Result<(SparsePoly, SparsePoly)> {
    if k >= p.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "need k < nvars, got k = {k} with {} variables",
            p.nvars()
        )));
    }
    Ok((q_limit(&p.normalize(), k)?, p.diagonalize(k)?.normalize()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn p(s: &str) -> SparsePoly {
        s.parse().unwrap()
    }

    #[test]
    fn technical_monomials() {
        // p = v^ι x^β, s = x^α with |α| = a.
        // p: (v0, x1, x2) = v0 x1^2 x2, s = x1^2 x2^2 (a = 4, d = 4).
        let poly = p("x0 x1^2 x2");
        let s = SparsePoly::parse("x0^2 x1^2", Some(2)).unwrap();
        assert!(verify_technical_derived(&poly, &s, 4).unwrap());
        // Both sides: a!/(d−|ι|)! · β! · binom(α, β) · v u^3 = 24/6 · 2 · 2 = 16.
        let lhs = operational_diffop_at_zero(&poly, &s, 4).unwrap();
        assert_eq!(lhs, p("16 x0 x1^3"));
    }

    #[test]
    fn technical_v_only() {
        // p = v0^2 (as a polynomial in v0, x1), s = x1^3.
        let poly = SparsePoly::parse("x0^2", Some(2)).unwrap();
        let s = p("x0^3");
        assert!(verify_technical_derived(&poly, &s, 3).unwrap());
        // ∂_x^3 (v^2 (u+x)^3) at x = 0 is 6 v^2, and |ι| + a − d = 3.
        assert_eq!(
            operational_diffop_at_zero(&poly, &s, 3).unwrap(),
            SparsePoly::parse("6x0^2", Some(2)).unwrap()
        );
    }

    #[test]
    fn technical_rejects_bad_degree() {
        assert!(verify_technical_derived(&p("x0 x1"), &p("x0^2"), 3).is_err());
    }

    #[test]
    fn weighted_truncation_examples() {
        // p = v^3 (single variable), a = 5 → C(5,3) u^3.
        let poly = p("x0^3");
        assert!(verify_weighted_truncation(&poly, 5).unwrap());
        let s = SparsePoly::monomial(Exponent::new(vec![5]), Rational::one());
        let lhs = operational_diffop_at_zero(&poly, &s, 5)
            .unwrap()
            .scale(&(Rational::one() / fact(5)));
        assert_eq!(lhs, p("10 x0^3"));
        // Independent of the last variable: only b = 0 survives, result = p.
        let q = SparsePoly::parse("x0^2 + 3x0 x1", Some(3)).unwrap();
        assert!(verify_weighted_truncation(&q, 2).unwrap());
        // a < b drops the term.
        assert!(verify_weighted_truncation(&p("x0 x1^2"), 1).unwrap());
    }

    #[test]
    fn qell_small() {
        // ℓ = 0, m = 1, p = v^{d−1} x with d = 3.
        let poly = p("x0^2 x1");
        assert!(verify_qell_identity(&poly, 0, 1).unwrap());
        for ell in 0..4 {
            assert!(verify_qell_identity(&poly, ell, 1).unwrap());
            assert!(verify_qell_identity(&p("x0 x1 + 2x1 x2"), ell, 2).unwrap());
        }
    }

    #[test]
    fn qm_and_limit_shapes() {
        let poly = p("x0 x1 + x1^2");
        let qm = q_m(&poly, 1).unwrap();
        // ι = 1: p_ι = x, N⁻¹ = 1, 1/(1!·1!) ; ι = 0: p_ι = x^2, N⁻¹ → 2, 2/(2!·2!).
        assert_eq!(qm, p("x0 x1 + 1/2 x1^2"));
        assert_eq!(q_limit(&poly, 1).unwrap(), p("x0 x1 + x1^2"));
    }

    #[test]
    fn diagonalization_identity() {
        assert!(verify_diagonalization_identity(&p("x0 x1 + 3x1 x2 + x2^2"), 1).unwrap());
        assert!(verify_diagonalization_identity(&p("x0^2 x1 + x0 x2^2 + 2x1 x2 x3"), 2).unwrap());
        assert!(verify_diagonalization_identity(&p("x0"), 1).is_err());
    }

    #[test]
    fn scaled_qell_at_one_matches_closed_form() {
        let poly = p("x0 x1 + x1^2");
        let s = scaled_q_ell(&poly, 1, 1).unwrap();
        let q = q_ell(&poly, 1, 1).unwrap();
        assert_eq!(s, q.scale(&(Rational::one() / fact(3))));
        assert_eq!(q.coeff(&Exponent::new(vec![0, 2])), int(6 / 2 * 3 * 2));
    }
}
