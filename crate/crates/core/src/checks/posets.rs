//! Inequalities and identities for linear-extension statistics.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::inequalities::{Budget, Tally};
use super::{CheckReport, Severity};
use crate::error::Result;
use crate::poset::{Chain, GapTable, Poset, PositionTable};
use crate::rational::{binomial, Rational};

fn q(n: u128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn table_instance(f: &GapTable) -> Value {
    json!({ "n": f.n(), "k": f.k() })
}

fn shift(iota: &[i64], i: usize, delta: i64) -> Vec<i64> {
    let mut out = iota.to_vec();
    out[i] += delta;
    out
}

/// `F(ι)² ≥ F(ι−e_i)F(ι+e_i)` and `F(ι)² ≥ F(ι−e_i+e_j)F(ι+e_i−e_j)`.
///
/// Candidates are the support and its one-step neighbours: any violation has
/// both outer values positive, so `ι` is one step from the support.
pub fn check_af_type(f: &GapTable) -> CheckReport {
    let dim = f.k().saturating_sub(1);
    let mut candidates: BTreeSet<Vec<i64>> = BTreeSet::new();
    for (iota, _) in f.support() {
        candidates.insert(iota.clone());
        for i in 0..dim {
            candidates.insert(shift(iota, i, 1));
            candidates.insert(shift(iota, i, -1));
            for j in (0..dim).filter(|&j| j != i) {
                candidates.insert(shift(&shift(iota, i, 1), j, -1));
            }
        }
    }
    let mut tally = Tally::default();
    for iota in &candidates {
        let mid = f.get(iota) as u128;
        let sq = q(mid * mid);
        for i in 0..dim {
            let lo = f.get(&shift(iota, i, -1)) as u128;
            let hi = f.get(&shift(iota, i, 1)) as u128;
            tally.record_ge(sq.clone(), q(lo * hi), || json!([iota, "step", i]));
            for j in i + 1..dim {
                let a = f.get(&shift(&shift(iota, i, -1), j, 1)) as u128;
                let b = f.get(&shift(&shift(iota, i, 1), j, -1)) as u128;
                tally.record_ge(sq.clone(), q(a * b), || json!([iota, "exchange", i, j]));
            }
        }
    }
    tally.finish("af_type", Severity::Theorem, table_instance(f))
}

/// `G(i)² ≥ G(i−1)G(i+1)` where `G` is the distance distribution of each pair
/// of chain elements. For a two-element chain `G = F`; for longer chains `G`
/// is the marginal of `F` over the gaps between the two chosen elements.
pub fn check_kahn_saks_inequality(f: &GapTable) -> CheckReport {
    let k = f.k();
    let mut tally = Tally::default();
    for a in 0..k {
        for b in a + 1..k {
            let mut marginal: std::collections::BTreeMap<i64, u128> = Default::default();
            for (iota, count) in f.support() {
                let dist: i64 = iota[a..b].iter().sum();
                *marginal.entry(dist).or_insert(0) += count as u128;
            }
            let g = |i: i64| marginal.get(&i).copied().unwrap_or(0);
            let lo = marginal.keys().next().copied().unwrap_or(0) - 1;
            let hi = marginal.keys().last().copied().unwrap_or(0) + 1;
            for i in lo..=hi {
                tally.record_ge(q(g(i) * g(i)), q(g(i - 1) * g(i + 1)), || json!([a, b, i]));
            }
        }
    }
    tally.finish("kahn_saks", Severity::Theorem, table_instance(f))
}

/// `F(α)F(α+β+γ) ≤ C(|β|+|γ|, |β|)·F(α+β)F(α+γ)` (weak) or without the
/// binomial factor (strong, conjectural).
///
/// Both `α` and `α+β+γ` range over the support since a violation needs a
/// positive left side; `β, γ ≠ 0` split the difference within `budget`.
pub fn check_cross_product(f: &GapTable, strong: bool, budget: Budget) -> CheckReport {
    let support: Vec<(&Vec<i64>, u64)> = f.support().collect();
    let mut tally = Tally::default();
    for &(alpha, fa) in &support {
        for &(tau, ft) in &support {
            let delta: Vec<i64> = tau.iter().zip(alpha).map(|(t, a)| t - a).collect();
            if delta.iter().any(|&x| x < 0) {
                continue;
            }
            let total: i64 = delta.iter().sum();
            if total < 2 || total > (budget.beta + budget.gamma) as i64 {
                continue;
            }
            let lhs = q(fa as u128 * ft as u128);
            for_each_split(&delta, &mut |beta, gamma| {
                let b: i64 = beta.iter().sum();
                let c: i64 = gamma.iter().sum();
                if b == 0 || c == 0 || b > budget.beta as i64 || c > budget.gamma as i64 {
                    return;
                }
                let ab: Vec<i64> = alpha.iter().zip(beta).map(|(x, y)| x + y).collect();
                let ag: Vec<i64> = alpha.iter().zip(gamma).map(|(x, y)| x + y).collect();
                let mut rhs = q(f.get(&ab) as u128 * f.get(&ag) as u128);
                if !strong {
                    rhs *= Rational::from_integer(binomial((b + c) as u32, b as u32));
                }
                tally.record_le(lhs.clone(), rhs, || json!([alpha, beta, gamma]));
            });
        }
    }
    let (name, severity) = if strong {
        ("cross_product_strong", Severity::Conjecture)
    } else {
        ("cross_product_weak", Severity::Theorem)
    };
    let mut instance = table_instance(f);
    instance["budget"] = json!([budget.beta, budget.gamma]);
    tally.finish(name, severity, instance)
}

/// Calls `visit(β, γ)` for every `β + γ = δ` with `β, γ ≥ 0`.
fn for_each_split(delta: &[i64], visit: &mut dyn FnMut(&[i64], &[i64])) {
    fn rec(delta: &[i64], i: usize, beta: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64], &[i64])) {
        if i == delta.len() {
            let gamma: Vec<i64> = delta.iter().zip(beta.iter()).map(|(d, b)| d - b).collect();
            visit(beta, &gamma);
            return;
        }
        for x in 0..=delta[i] {
            beta.push(x);
            rec(delta, i + 1, beta, visit);
            beta.pop();
        }
    }
    rec(delta, 0, &mut Vec::with_capacity(delta.len()), visit);
}

/// `Σ_a N(a+1, a+1+g_1, a+1+g_1+g_2, …) = F(g)` for every gap vector `g`.
///
/// The right side comes from gaps of each extension, the left from the
/// position table by explicit summation over the first position.
pub fn check_ks_sum_identity(f: &GapTable, positions: &PositionTable) -> CheckReport {
    let n = positions.n();
    let mut gaps: BTreeSet<Vec<i64>> = f.support().map(|(g, _)| g.clone()).collect();
    for (pos, _) in positions.support() {
        gaps.insert(pos.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect());
    }
    let mut tally = Tally::default();
    for g in &gaps {
        let span: i64 = g.iter().sum();
        let mut sum: u128 = 0;
        if g.iter().all(|&x| x > 0) {
            for a in 0..(n as i64 - span).max(0) {
                let mut pos = vec![(a + 1) as usize];
                for &x in g {
                    let next = *pos.last().unwrap() as i64 + x;
                    pos.push(next as usize);
                }
                sum += positions.get(&pos) as u128;
            }
        }
        let lhs = q(sum);
        let rhs = q(f.get(g) as u128);
        tally.evaluated += 1;
        if lhs != rhs {
            tally.violations += 1;
            if tally.first.is_none() {
                tally.first = Some(super::Witness::new(json!([g]), lhs, rhs));
            }
        }
    }
    tally.finish("ks_sum_identity", Severity::Theorem, table_instance(f))
}

/// The Kahn-Saks polynomial equals the `u`-diagonalization of the Stanley
/// polynomial, with the merged variable moved to the front.
pub fn check_diagonalization_consistency(f: &GapTable, positions: &PositionTable) -> Result<CheckReport> {
    let k = f.k();
    let instance = table_instance(f);
    if k < 2 {
        return Ok(CheckReport::skipped(
            "diagonalization",
            Severity::Theorem,
            instance,
            "chain shorter than 2",
        ));
    }
    let ks = f.kahn_saks_poly()?;
    let stanley = positions.stanley_poly()?;
    // diagonalize(k−1) gives (v_1, …, v_{k−1}, u); move u to position 0.
    let perm: Vec<usize> = (1..k).chain([0]).collect();
    let diag = stanley.diagonalize(k - 1)?.permute(&perm)?;
    let mut tally = Tally::default();
    tally.evaluated = 1;
    if diag != ks {
        let diff = diag.sub(&ks)?;
        let (e, _) = diff.terms().next().expect("nonzero difference");
        tally.violations = 1;
        tally.first = Some(super::Witness::new(json!([e.entries()]), diag.coeff(e), ks.coeff(e)));
    }
    Ok(tally.finish("diagonalization", Severity::Theorem, instance))
}

/// `F_{P ⊕ [ℓ]} = F_P` for each `ℓ` in `ells`.
pub fn check_ordinal_sum_invariance(poset: &Poset, chain: &Chain, ells: &[usize]) -> Result<CheckReport> {
    let base = crate::poset::gap_statistics(poset, chain)?;
    let augmented = ells
        .iter()
        .map(|&ell| Ok((ell, crate::poset::gap_statistics(&poset.ordinal_sum_with_chain(ell), chain)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(check_ordinal_sum_tables(&base, &augmented))
}

/// [`check_ordinal_sum_invariance`] on precomputed tables `(ℓ, F_{P⊕[ℓ]})`.
pub fn check_ordinal_sum_tables(base: &GapTable, augmented: &[(usize, GapTable)]) -> CheckReport {
    let mut tally = Tally::default();
    for (ell, other) in augmented {
        if let Some(w) = first_table_difference(base, other, *ell) {
            tally.violations += 1;
            tally.first.get_or_insert(w);
        }
        tally.evaluated += 1;
    }
    let mut instance = table_instance(base);
    instance["ells"] = json!(augmented.iter().map(|(l, _)| l).collect::<Vec<_>>());
    tally.finish("ordinal_sum_invariance", Severity::Theorem, instance)
}

/// The first gap vector where two tables disagree, as a witness.
pub(crate) fn first_table_difference(a: &GapTable, b: &GapTable, ell: usize) -> Option<super::Witness> {
    let keys: BTreeSet<&Vec<i64>> = a.support().chain(b.support()).map(|(g, _)| g).collect();
    keys.into_iter().find(|g| a.get(g) != b.get(g)).map(|g| {
        super::Witness::new(json!([g, ell]), q(a.get(g) as u128), q(b.get(g) as u128))
    })
}
