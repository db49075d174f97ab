//! Coefficient inequalities on polynomials: Khovanskii-Teissier, its reverse
//! form, and sampled 1-Rayleigh inequalities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::{CheckReport, Severity, Witness};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::poly::SparsePoly;
use crate::rational::{binomial, to_fraction_string, Rational};

/// Upper bounds on `|β|` and `|γ|` in decomposition searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub beta: u32,
    pub gamma: u32,
}

pub const DEFAULT_BUDGET: Budget = Budget { beta: 3, gamma: 3 };

impl Default for Budget {
    fn default() -> Self {
        DEFAULT_BUDGET
    }
}

/// Collects the first violation and counts the rest.
#[derive(Default)]
pub(crate) struct Tally {
    pub evaluated: u64,
    pub violations: u64,
    pub first: Option<Witness>,
}

impl Tally {
    /// Records `lhs ≤ rhs`; returns whether it held.
    pub fn record_le(&mut self, lhs: Rational, rhs: Rational, indices: impl FnOnce() -> Value) -> bool {
        self.evaluated += 1;
        if lhs <= rhs {
            return true;
        }
        self.violations += 1;
        if self.first.is_none() {
            self.first = Some(Witness::new(indices(), lhs, rhs));
        }
        false
    }

    /// Records `lhs ≥ rhs`; returns whether it held.
    pub fn record_ge(&mut self, lhs: Rational, rhs: Rational, indices: impl FnOnce() -> Value) -> bool {
        self.evaluated += 1;
        if lhs >= rhs {
            return true;
        }
        self.violations += 1;
        if self.first.is_none() {
            self.first = Some(Witness::new(indices(), lhs, rhs));
        }
        false
    }

    pub fn finish(self, check: &str, severity: Severity, mut instance: Value) -> CheckReport {
        if let Some(obj) = instance.as_object_mut() {
            obj.insert("evaluated".into(), json!(self.evaluated));
            obj.insert("violations".into(), json!(self.violations));
        }
        CheckReport::from_witness(check, severity, instance, self.first)
    }
}

fn poly_instance(f: &SparsePoly) -> Value {
    json!({ "poly": f.to_string(), "nvars": f.nvars(), "degree": f.degree() })
}

fn exp_json(e: &Exponent) -> Value {
    json!(e.entries())
}

/// `c_α² ≥ c_{α−e_i+e_j} · c_{α+e_i−e_j}` for every `α` and `i ≠ j`.
///
/// A violation needs both outer coefficients nonzero, so it is enough to walk
/// pairs `(β, γ = β + 2e_i − 2e_j)` of support elements and look up the
/// midpoint `α`, which may itself lie outside the support.
pub fn check_kt(f: &SparsePoly) -> CheckReport {
    let n = f.nvars();
    let mut tally = Tally::default();
    for (beta, cb) in f.terms() {
        for j in 0..n {
            if beta.get(j) < 2 {
                continue;
            }
            for i in (0..n).filter(|&i| i != j) {
                let gamma = beta.shifted(i, 2).and_then(|e| e.shifted(j, -2)).expect("β_j ≥ 2");
                if gamma < *beta {
                    continue;
                }
                let Some(cg) = f.coeff_ref(&gamma) else { continue };
                let alpha = beta.shifted(i, 1).and_then(|e| e.shifted(j, -1)).expect("β_j ≥ 2");
                let ca = f.coeff(&alpha);
                tally.record_ge(&ca * &ca, cb * cg, || json!([exp_json(&alpha), i, j]));
            }
        }
    }
    tally.finish("kt", Severity::Theorem, poly_instance(f))
}

/// Reverse Khovanskii-Teissier with distinguished variable `pivot`:
/// `c_{α+β+γ} · c_{α+(b+c)e_p} ≤ C(b+c, b) · c_{α+c·e_p+β} · c_{α+b·e_p+γ}`
/// with `b = |β|`, `c = |γ|` bounded by `budget`.
pub fn check_rkt(f: &SparsePoly, pivot: usize, budget: Budget) -> Result<CheckReport> {
    if pivot >= f.nvars() {
        return Err(Error::IndexOutOfRange {
            index: pivot,
            limit: f.nvars(),
        });
    }
    let mut tally = Tally::default();
    rkt_into(f, pivot, budget, &mut tally);
    let mut instance = poly_instance(f);
    instance["pivot"] = json!(pivot);
    instance["budget"] = json!([budget.beta, budget.gamma]);
    Ok(tally.finish("rkt", Severity::Theorem, instance))
}

/// [`check_rkt`] for every pivot.
pub fn check_rkt_all_pivots(f: &SparsePoly, budget: Budget) -> CheckReport {
    let mut tally = Tally::default();
    for pivot in 0..f.nvars() {
        rkt_into(f, pivot, budget, &mut tally);
    }
    let mut instance = poly_instance(f);
    instance["pivot"] = json!("all");
    instance["budget"] = json!([budget.beta, budget.gamma]);
    tally.finish("rkt", Severity::Theorem, instance)
}

fn rkt_into(f: &SparsePoly, pivot: usize, budget: Budget, tally: &mut Tally) {
    let n = f.nvars();
    let d = f.degree();
    let mut visit = |alpha: &Exponent, beta: &Exponent, gamma: &Exponent| {
        let (b, c) = (beta.total(), gamma.total());
        let tau = alpha.add(beta).add(gamma);
        let ep = |t: u32| {
            let mut e = vec![0; n];
            e[pivot] = t;
            Exponent::new(e)
        };
        let lhs = f.coeff(&tau) * f.coeff(&alpha.add(&ep(b + c)));
        let rhs = Rational::from_integer(binomial(b + c, b))
            * f.coeff(&alpha.add(&ep(c)).add(beta))
            * f.coeff(&alpha.add(&ep(b)).add(gamma));
        tally.record_le(lhs, rhs, || {
            json!([exp_json(alpha), exp_json(beta), exp_json(gamma), pivot])
        });
    };

    if f.terms().all(|(_, c)| !c.is_negative()) {
        // With non-negative coefficients a violation forces c_{α+β+γ} > 0,
        // so decompositions of support elements are enough.
        for (tau, _) in f.terms() {
            for beta in tau.sub_exponents() {
                let b = beta.total();
                if b == 0 || b > budget.beta {
                    continue;
                }
                let rest = tau.checked_sub(&beta).expect("β ≤ τ");
                for gamma in rest.sub_exponents() {
                    let c = gamma.total();
                    if c == 0 || c > budget.gamma {
                        continue;
                    }
                    let alpha = rest.checked_sub(&gamma).expect("γ ≤ τ − β");
                    visit(&alpha, &beta, &gamma);
                }
            }
        }
    } else {
        for b in 1..=budget.beta.min(d) {
            for c in 1..=budget.gamma.min(d - b) {
                let alphas = Exponent::all_of_total(n, d - b - c);
                let betas = Exponent::all_of_total(n, b);
                let gammas = Exponent::all_of_total(n, c);
                for alpha in &alphas {
                    for beta in &betas {
                        for gamma in &gammas {
                            visit(alpha, beta, gamma);
                        }
                    }
                }
            }
        }
    }
}

/// Derivatives `∂^α G` of an integer polynomial `G`, indexed by `α`.
struct DerivativeTable {
    index: BTreeMap<Exponent, usize>,
    polys: Vec<Vec<(Vec<u32>, BigInt)>>,
    /// `(α, i, j, idx α, idx α+e_i, idx α+e_j, idx α+e_i+e_j)`
    quads: Vec<(Exponent, usize, usize, [usize; 4])>,
    /// Degree of `∂^α G` for each table entry.
    degrees: Vec<u32>,
}

impl DerivativeTable {
    fn build(g: &SparsePoly) -> DerivativeTable {
        let n = g.nvars();
        let d = g.degree();
        let mut index: BTreeMap<Exponent, usize> = BTreeMap::new();
        let mut derivs: Vec<SparsePoly> = Vec::new();
        let mut degrees = Vec::new();
        for t in 0..=d {
            for alpha in Exponent::all_of_total(n, t) {
                let poly = match (0..n).find(|&i| alpha.get(i) > 0) {
                    None => g.clone(),
                    Some(i) => {
                        let parent = alpha.shifted(i, -1).expect("α_i > 0");
                        derivs[index[&parent]].partial_derivative(i).expect("i < n")
                    }
                };
                index.insert(alpha, derivs.len());
                derivs.push(poly);
                degrees.push(d - t);
            }
        }
        let polys = derivs
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(e, c)| {
                        debug_assert!(c.is_integer());
                        (e.entries().to_vec(), c.to_integer())
                    })
                    .collect()
            })
            .collect();
        let mut quads = Vec::new();
        if d >= 2 {
            for t in 0..=d - 2 {
                for alpha in Exponent::all_of_total(n, t) {
                    for i in 0..n {
                        for j in i..n {
                            let ai = alpha.shifted(i, 1).expect("increment");
                            let aj = alpha.shifted(j, 1).expect("increment");
                            let aij = ai.shifted(j, 1).expect("increment");
                            let ids = [index[&alpha], index[&ai], index[&aj], index[&aij]];
                            quads.push((alpha.clone(), i, j, ids));
                        }
                    }
                }
            }
        }
        DerivativeTable {
            index,
            polys,
            quads,
            degrees,
        }
    }
}

/// Checked arithmetic shared by the `i128` fast path and the `BigInt` fallback.
trait Exact: Clone + Ord {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn exact_zero() -> Self;
    fn exact_one() -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
}

impl Exact for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn exact_zero() -> Self {
        0
    }
    fn exact_one() -> Self {
        1
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
}

impl Exact for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn exact_zero() -> Self {
        Zero::zero()
    }
    fn exact_one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
}

/// Violations at one integer point as `(quad index, lhs, rhs)`, or `None` on overflow.
fn rayleigh_at<T: Exact>(table: &DerivativeTable, point: &[BigInt]) -> Option<Vec<(usize, BigInt, BigInt)>> {
    let max_deg = table.degrees.first().copied().unwrap_or(0) as usize;
    let mut powers: Vec<Vec<T>> = Vec::with_capacity(point.len());
    for x in point {
        let x = T::from_big(x)?;
        let mut row = vec![T::exact_one()];
        for _ in 0..max_deg {
            let next = row.last().unwrap().mul(&x)?;
            row.push(next);
        }
        powers.push(row);
    }
    let mut values = Vec::with_capacity(table.polys.len());
    for poly in &table.polys {
        let mut acc = T::exact_zero();
        for (e, c) in poly {
            let mut t = T::from_big(c)?;
            for (i, &a) in e.iter().enumerate() {
                if a > 0 {
                    t = t.mul(&powers[i][a as usize])?;
                }
            }
            acc = acc.add(&t)?;
        }
        values.push(acc);
    }
    let mut bad = Vec::new();
    for (q, (_, _, _, ids)) in table.quads.iter().enumerate() {
        let lhs = values[ids[0]].mul(&values[ids[3]])?;
        let rhs = values[ids[1]].mul(&values[ids[2]])?;
        if lhs > rhs {
            bad.push((q, lhs.to_big(), rhs.to_big()));
        }
    }
    Some(bad)
}

/// Sampled 1-Rayleigh inequalities
/// `∂^α g · ∂^{α+e_i+e_j} g ≤ ∂^{α+e_i} g · ∂^{α+e_j} g`
/// for `|α| ≤ deg g − 2`, `i ≤ j`, at every sample point.
///
/// `g` is scaled to integer coefficients and each point to integer
/// coordinates. Both sides scale by the same positive factor, so the
/// comparison runs in `i128` and falls back to `BigInt` on overflow.
pub fn check_rayleigh(g: &SparsePoly, samples: &[Vec<Rational>]) -> Result<CheckReport> {
    let n = g.nvars();
    for (idx, pt) in samples.iter().enumerate() {
        if pt.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "sample point {idx} has length {}, polynomial has {n} variables",
                pt.len()
            )));
        }
        if pt.iter().any(Signed::is_negative) {
            return Err(Error::NegativeSamplePoint(idx));
        }
    }
    let lcm = g
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let lcm_q = Rational::from_integer(lcm);
    let scaled = g.scale(&lcm_q);
    let table = DerivativeTable::build(&scaled);
    debug_assert_eq!(table.index.len(), table.polys.len());

    let mut tally = Tally::default();
    for pt in samples {
        let den = pt.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = pt
            .iter()
            .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let bad = match rayleigh_at::<i128>(&table, &ints) {
            Some(b) => b,
            None => rayleigh_at::<BigInt>(&table, &ints).expect("BigInt never overflows"),
        };
        tally.evaluated += table.quads.len() as u64;
        for (q, lhs, rhs) in bad {
            let (alpha, i, j, ids) = &table.quads[q];
            // Undo the scaling: both sides carry lcm² · den^(2e−2).
            let e = table.degrees[ids[0]];
            let mut unscale = Rational::from_integer(&lcm_q.numer().clone() * lcm_q.numer());
            unscale *= Rational::from_integer(num_traits::pow(den.clone(), (2 * e - 2) as usize));
            tally.violations += 1;
            if tally.first.is_none() {
                let point: Vec<String> = pt.iter().map(to_fraction_string).collect();
                tally.first = Some(Witness::new(
                    json!([exp_json(alpha), i, j, point]),
                    Rational::from_integer(lhs) / &unscale,
                    Rational::from_integer(rhs) / &unscale,
                ));
            }
        }
    }
    let mut instance = poly_instance(g);
    instance["samples"] = json!(samples.len());
    Ok(tally.finish("rayleigh", Severity::Conjecture, instance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(s: &str) -> SparsePoly {
        s.parse().unwrap()
    }

    #[test]
    fn kt_examples() {
        assert!(check_kt(&p("2x0^2 + 2x0 x1 + 2x1^2")).passed);
        assert!(check_kt(&SparsePoly::parse("x0^3", Some(2)).unwrap()).passed);
        let r = check_kt(&p("x0^2 + x1^2"));
        assert!(!r.passed);
        let w = r.witness.unwrap();
        assert_eq!(w.indices[0], json!([1, 1]));
        assert_eq!((w.lhs, w.rhs), (int(0), int(1)));
    }

    #[test]
    fn rkt_examples() {
        let f = p("2x0^2 + 2x0 x1 + 2x1^2");
        for pivot in 0..2 {
            assert!(check_rkt(&f, pivot, DEFAULT_BUDGET).unwrap().passed);
        }
        assert!(matches!(
            check_rkt(&f, 2, DEFAULT_BUDGET),
            Err(Error::IndexOutOfRange { index: 2, limit: 2 })
        ));
        // c_(0,2) c_(2,0) = 1 > 2 · c_(1,1)² = 0.
        let r = check_rkt(&p("x0^2 + x1^2"), 0, DEFAULT_BUDGET).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn rkt_general_sign_path() {
        // A negative coefficient forces the exhaustive path.
        // β = e0, γ = e1: c_11 · c_20 = −1 > 2 · c_20 · c_11 = −2.
        let f = p("x0^2 - x0 x1 + x1^2");
        let r = check_rkt_all_pivots(&f, DEFAULT_BUDGET);
        assert!(!r.passed);
    }

    #[test]
    fn rayleigh_linear_and_quadratic() {
        let g = p("2x0 + x1");
        let samples = vec![vec![int(1), int(2)], vec![ratio(1, 3), int(0)]];
        assert!(check_rayleigh(&g, &samples).unwrap().passed);
        // x0 x1: α = 0, (0,1): x0 x1 · 1 ≤ x1 · x0 holds with equality.
        assert!(check_rayleigh(&p("x0 x1"), &samples).unwrap().passed);
        // x0² + x1² fails at (0,0) pair (0,1)? ∂0∂1 = 0 so LHS = 0 ≤ 4 x0 x1.
        // Pair (0,0): g · 2 ≤ (2x0)² fails wherever x1 ≠ 0.
        let r = check_rayleigh(&p("x0^2 + x1^2"), &samples).unwrap();
        assert!(!r.passed);
        let w = r.witness.unwrap();
        assert_eq!(w.lhs, int(10));
        assert_eq!(w.rhs, int(4));
    }

    #[test]
    fn rayleigh_unscales_witness() {
        // g = x0²/2 + x1²/2 at (1/2, 1): LHS = g·1 = 5/8, RHS = x0² = 1/4.
        let g = p("1/2 x0^2 + 1/2 x1^2");
        let r = check_rayleigh(&g, &[vec![ratio(1, 2), int(1)]]).unwrap();
        let w = r.witness.unwrap();
        assert_eq!((w.lhs, w.rhs), (ratio(5, 8), ratio(1, 4)));
    }

    #[test]
    fn rayleigh_rejects_bad_points() {
        let g = p("x0 + x1");
        assert!(matches!(
            check_rayleigh(&g, &[vec![int(1), int(-1)]]),
            Err(Error::NegativeSamplePoint(0))
        ));
        assert!(check_rayleigh(&g, &[vec![int(1)]]).is_err());
    }

    #[test]
    fn rayleigh_bigint_fallback_agrees() {
        let g = p("x0^3 + 3x0^2 x1 + x1^3");
        let big = Rational::from_integer(BigInt::from(10u64).pow(14));
        let r = check_rayleigh(&g, &[vec![big.clone(), big]]).unwrap();
        let r_small = check_rayleigh(&g, &[vec![int(1), int(1)]]).unwrap();
        assert_eq!(r.passed, r_small.passed);
    }
}
