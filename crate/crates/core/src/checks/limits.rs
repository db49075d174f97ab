//! Finite-parameter checks of limiting arguments.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::identities::{q_limit, q_m, scaled_q_ell};
use super::inequalities::Tally;
use super::posets::first_table_difference;
use super::{CheckReport, Severity, Witness};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::poly::SparsePoly;
use crate::poset::{gap_statistics, Chain, Poset, DEFAULT_MAX_EXTENSION_SIZE};
use crate::rational::{factorial, to_fraction_string, Rational};

fn int(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

fn strictly_increasing(values: &[u32], what: &str) -> Result<()> {
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!("{what} must be strictly increasing")));
    }
    if values.first() == Some(&0) {
        return Err(Error::InvalidArgument(format!("{what} must be positive")));
    }
    Ok(())
}

/// `scaled q_{ℓ,m} / q_m` for each nonzero coefficient of `q_m`.
pub fn qell_ratios(p: &SparsePoly, m: usize, ell: u32) -> Result<Vec<(Exponent, Rational)>> {
    let target = q_m(p, m)?;
    let scaled = scaled_q_ell(p, m, ell)?;
    Ok(target
        .terms()
        .map(|(e, c)| (e.clone(), scaled.coeff(e) / c))
        .collect())
}

/// Coefficientwise convergence of `q_{ℓ,m}(v, u/ℓ)/(ℓ^{m−1}(d+ℓ)!)` to `q_m`.
///
/// Passes when every ratio is at least 1, does not increase along
/// `ells`, and satisfies `|ratio − 1| ≤ (d+m)²/ℓ` whenever `ℓ ≥ 4(d+m)²`.
pub fn verify_qell_convergence(p: &SparsePoly, ells: &[u32], m: usize) -> Result<CheckReport> {
    strictly_increasing(ells, "ℓ values")?;
    let dm = (p.degree() as u64) + m as u64;
    let mut tally = Tally::default();
    let mut previous: Option<Vec<(Exponent, Rational)>> = None;
    let mut deviations = Vec::new();
    for &ell in ells {
        let ratios = qell_ratios(p, m, ell)?;
        let bound = int(dm * dm) / int(ell as u64);
        let in_regime = ell as u64 >= 4 * dm * dm;
        let mut worst = Rational::zero();
        for (idx, (e, r)) in ratios.iter().enumerate() {
            let dev = (r - Rational::one()).abs();
            if dev > worst {
                worst = dev.clone();
            }
            tally.record_ge(r.clone(), Rational::one(), || json!([e.entries(), ell, "ratio ≥ 1"]));
            if in_regime {
                tally.record_le(dev, bound.clone(), || json!([e.entries(), ell, "bound"]));
            }
            if let Some(prev) = &previous {
                tally.record_le(r.clone(), prev[idx].1.clone(), || json!([e.entries(), ell, "monotone"]));
            }
        }
        deviations.push(json!({ "ell": ell, "max_deviation": to_fraction_string(&worst) }));
        previous = Some(ratios);
    }
    let instance = json!({
        "poly": p.to_string(),
        "m": m,
        "degree": p.degree(),
        "deviations": deviations,
    });
    Ok(tally.finish("qell_convergence", Severity::Theorem, instance))
}

/// `(m−1)!·q_m(v, m·u) / q` coefficientwise, with `p` padded by unused
/// variables to `m` trailing ones.
pub fn qm_ratios(p: &SparsePoly, k: usize, m: usize) -> Result<Vec<(Exponent, Rational)>> {
    let have = p.nvars().checked_sub(k).ok_or_else(|| {
        Error::DimensionMismatch(format!("k = {k} exceeds {} variables", p.nvars()))
    })?;
    if m < have.max(1) {
        return Err(Error::InvalidArgument(format!(
            "m = {m} is smaller than the {have} trailing variables"
        )));
    }
    let padded = p.embed(k + m, &(0..p.nvars()).collect::<Vec<_>>())?;
    let qm = q_m(&padded, m)?;
    let limit = q_limit(p, k)?;
    let scale = Rational::from_integer(factorial(m as u32 - 1));
    Ok(limit
        .terms()
        .map(|(e, c)| {
            let u_power = e.get(k) as usize;
            let value = qm.coeff(e) * &scale * num_traits::pow(int(m as u64), u_power);
            (e.clone(), value / c)
        })
        .collect())
}

/// `(m−1)!·q_m(v, m·u) → q`: every ratio lies in `(0, 1]`, does not decrease
/// along `ms`, and satisfies `1 − ratio ≤ d²/m`.
pub fn verify_qm_convergence(p: &SparsePoly, k: usize, ms: &[u32]) -> Result<CheckReport> {
    strictly_increasing(ms, "m values")?;
    let d = p.degree() as u64;
    let mut tally = Tally::default();
    let mut previous: Option<Vec<(Exponent, Rational)>> = None;
    for &m in ms {
        let ratios = qm_ratios(p, k, m as usize)?;
        let bound = int(d * d) / int(m as u64);
        for (idx, (e, r)) in ratios.iter().enumerate() {
            tally.record_le(r.clone(), Rational::one(), || json!([e.entries(), m, "ratio ≤ 1"]));
            tally.record_le(Rational::one() - r, bound.clone(), || json!([e.entries(), m, "bound"]));
            if let Some(prev) = &previous {
                tally.record_ge(r.clone(), prev[idx].1.clone(), || json!([e.entries(), m, "monotone"]));
            }
        }
        previous = Some(ratios);
    }
    let instance = json!({ "poly": p.to_string(), "k": k, "ms": ms });
    Ok(tally.finish("qm_convergence", Severity::Theorem, instance))
}

/// `Π_{i=1}^{|β|} (n+ℓ−k−|α|−|β|+i) / (n+ℓ−k−|α|−|β|−|γ|+i)`, or `None` when a
/// denominator is not positive.
pub fn crossproduct_limit_factor(n: usize, k: usize, a: u32, b: u32, c: u32, ell: u32) -> Option<Rational> {
    let base = n as i64 + ell as i64 - k as i64 - a as i64 - b as i64;
    let mut acc = Rational::one();
    for i in 1..=b as i64 {
        let num = base + i;
        let den = base - c as i64 + i;
        if den <= 0 {
            return None;
        }
        acc *= Rational::new(num.into(), den.into());
    }
    Some(acc)
}

fn shifted_arg(parts: &[&Exponent]) -> Vec<i64> {
    let len = parts[0].len();
    (0..len)
        .map(|i| 1 + parts.iter().map(|e| e.get(i) as i64).sum::<i64>())
        .collect()
}

/// The factor from the ordinal-sum limit argument for the cross-product
/// inequality, at each `ℓ`.
///
/// `α, β, γ` are exponents of the `v` variables of the Kahn-Saks polynomial,
/// so the gap statistics are read at `α + 1`, `α + β + 1` and so on. Passes
/// when the factors are at least 1, strictly decrease (constant 1 when `β` or
/// `γ` is zero), stay within `1 + |β|(|γ|+1)/ℓ` once `ℓ ≥ (|β|+1)(|γ|+1)²`,
/// and `F_{P⊕[ℓ]} = F_P` for every listed `ℓ` small enough to enumerate.
pub fn verify_crossproduct_limit(
    poset: &Poset,
    chain: &Chain,
    alpha: &Exponent,
    beta: &Exponent,
    gamma: &Exponent,
    ells: &[u32],
) -> Result<CheckReport> {
    strictly_increasing(ells, "ℓ values")?;
    let n = poset.len();
    let k = chain.len();
    if k < 2 {
        return Err(Error::ChainTooShort { len: k, min: 2 });
    }
    for e in [alpha, beta, gamma] {
        if e.len() != k - 1 {
            return Err(Error::DimensionMismatch(format!(
                "exponent {e} should have {} entries",
                k - 1
            )));
        }
    }
    let (a, b, c) = (alpha.total(), beta.total(), gamma.total());
    if (a + b + c) as usize > n - k {
        return Err(Error::InvalidArgument(format!(
            "|α| + |β| + |γ| = {} exceeds n − k = {}",
            a + b + c,
            n - k
        )));
    }
    let f = gap_statistics(poset, chain)?;
    let values = json!({
        "alpha": f.get(&shifted_arg(&[alpha])),
        "alpha_beta": f.get(&shifted_arg(&[alpha, beta])),
        "alpha_gamma": f.get(&shifted_arg(&[alpha, gamma])),
        "alpha_beta_gamma": f.get(&shifted_arg(&[alpha, beta, gamma])),
    });

    let mut tally = Tally::default();
    let mut factors: Vec<Value> = Vec::new();
    let mut previous: Option<Rational> = None;
    let trivial = b == 0 || c == 0;
    let mut ordinal_checked = Vec::new();
    for &ell in ells {
        let factor = crossproduct_limit_factor(n, k, a, b, c, ell).expect("range checked above");
        factors.push(json!(to_fraction_string(&factor)));
        tally.record_ge(factor.clone(), Rational::one(), || json!([ell, "factor ≥ 1"]));
        if trivial {
            tally.record_le(factor.clone(), Rational::one(), || json!([ell, "factor = 1"]));
        } else if let Some(prev) = &previous {
            // Strict decrease: factor < prev.
            tally.evaluated += 1;
            if factor >= *prev {
                tally.violations += 1;
                tally.first.get_or_insert_with(|| {
                    Witness::new(json!([ell, "strictly decreasing"]), factor.clone(), prev.clone())
                });
            }
        }
        if ell as u64 >= (b as u64 + 1) * (c as u64 + 1) * (c as u64 + 1) {
            let bound = Rational::one() + int(b as u64 * (c as u64 + 1)) / int(ell as u64);
            tally.record_le(factor.clone(), bound, || json!([ell, "bound"]));
        }
        previous = Some(factor);

        if n + ell as usize <= DEFAULT_MAX_EXTENSION_SIZE {
            let augmented = gap_statistics(&poset.ordinal_sum_with_chain(ell as usize), chain)?;
            tally.evaluated += 1;
            if let Some(w) = first_table_difference(&f, &augmented, ell as usize) {
                tally.violations += 1;
                tally.first.get_or_insert(w);
            }
            ordinal_checked.push(ell);
        }
    }
    let instance = json!({
        "poset": poset.to_json(),
        "chain": chain,
        "alpha": alpha.entries(),
        "beta": beta.entries(),
        "gamma": gamma.entries(),
        "ells": ells,
        "factors": factors,
        "values": values,
        "ordinal_sum_checked": ordinal_checked,
    });
    Ok(tally.finish("crossproduct_limit", Severity::Theorem, instance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn p(s: &str) -> SparsePoly {
        s.parse().unwrap()
    }

    #[test]
    fn qell_ratio_matches_product_formula() {
        // d = 2, m = 1, k = 1: ratio for ι is Π_{i=|ι|+1}^{d+m−1} (ℓ+i) / ℓ^{d+m−1−|ι|}.
        let poly = p("x0 x1 + x1^2");
        for ell in [1u32, 5, 10] {
            for (e, r) in qell_ratios(&poly, 1, ell).unwrap() {
                let t = e.get(0);
                let mut expected = Rational::one();
                for i in t + 1..=2 {
                    expected *= ratio((ell + i) as i64, ell as i64);
                }
                assert_eq!(r, expected, "ι = {t}, ℓ = {ell}");
            }
        }
    }

    #[test]
    fn qell_convergence_passes() {
        let poly = p("x0 x1 + 2x1 x2 + x2^2");
        let r = verify_qell_convergence(&poly, &[10, 100, 1000], 2).unwrap();
        assert!(r.passed, "{}", r.to_json_line());
        assert!(verify_qell_convergence(&poly, &[10, 10], 2).is_err());
    }

    #[test]
    fn qm_convergence_passes() {
        let poly = p("x0 x1 + x1^2 + 3x0^2");
        let r = verify_qm_convergence(&poly, 1, &[1, 2, 5, 50]).unwrap();
        assert!(r.passed, "{}", r.to_json_line());
        let ratios = qm_ratios(&poly, 1, 1).unwrap();
        // ι = 2 (u-power 0) is exact at every m.
        assert!(ratios.iter().any(|(e, r)| e.get(1) == 0 && r.is_one()));
    }

    #[test]
    fn factor_examples() {
        assert_eq!(crossproduct_limit_factor(6, 2, 1, 0, 2, 7), Some(Rational::one()));
        // |β| = |γ| = 1: (n+ℓ−k−|α|)/(n+ℓ−k−|α|−1).
        assert_eq!(crossproduct_limit_factor(6, 2, 1, 1, 1, 3), Some(ratio(6, 5)));
        assert_eq!(crossproduct_limit_factor(2, 2, 0, 1, 3, 0), None);
    }

    #[test]
    fn crossproduct_limit_on_small_poset() {
        let poset = Poset::from_relations(5, &[(0, 1)]).unwrap();
        let chain = Chain::new(&poset, vec![0, 1]).unwrap();
        let e = |x: u32| Exponent::new(vec![x]);
        let r = verify_crossproduct_limit(&poset, &chain, &e(0), &e(1), &e(1), &[1, 2, 3, 100, 1000]).unwrap();
        assert!(r.passed, "{}", r.to_json_line());
        assert_eq!(r.instance["ordinal_sum_checked"], json!([1, 2, 3]));
        let r = verify_crossproduct_limit(&poset, &chain, &e(1), &e(0), &e(2), &[1, 10]).unwrap();
        assert!(r.passed);
        assert_eq!(r.instance["factors"], json!(["1/1", "1/1"]));
        assert!(verify_crossproduct_limit(&poset, &chain, &e(2), &e(1), &e(1), &[1]).is_err());
    }
}
