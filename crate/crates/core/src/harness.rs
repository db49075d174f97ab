//! Seeded corpora and report streams behind the `volpoly` CLI.
//!
//! Every entry point returns its reports in a canonical order. Parallel
//! sections collect into an indexed `Vec`, so the thread count never changes
//! the output bytes.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::checks::{
    self, check_af_type, check_cross_product, check_diagonalization_consistency,
    check_kahn_saks_inequality, check_ks_sum_identity, check_kt, check_ordinal_sum_tables,
    check_rayleigh, check_rkt_all_pivots, compare_polys, Budget, CheckReport, Severity,
};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::poly::SparsePoly;
use crate::poset::{
    kahn_saks_variable_names, Chain, GapTable, Poset, PositionTable, DEFAULT_MAX_EXTENSION_SIZE,
};
use crate::random::{
    random_exponent_of_total, random_nonneg_matrix, random_poly, rayleigh_samples, seeded,
};
use crate::symmetric::{complete_homogeneous, schur, verify_ch_derived_identity, verify_ch_evaluation, Partition};

pub const EXIT_OK: i32 = 0;
pub const EXIT_THEOREM_VIOLATION: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: usize,
    pub poset_size_max: usize,
    pub chain_len_max: usize,
    /// Fixed poset size; drawn from `2..=poset_size_max` when `None`.
    pub poset_size: Option<usize>,
    /// Fixed edge probability; drawn from `[0.1, 0.7)` when `None`.
    pub edge_prob: Option<f64>,
    pub budget: Budget,
    pub extension_guard: usize,
    pub rayleigh_extra_points: usize,
    pub ordinal_ells: Vec<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            trials: 100,
            poset_size_max: 8,
            chain_len_max: 4,
            poset_size: None,
            edge_prob: None,
            budget: Budget::default(),
            extension_guard: DEFAULT_MAX_EXTENSION_SIZE,
            rayleigh_extra_points: 20,
            ordinal_ells: vec![1, 2, 3],
        }
    }
}

impl RunConfig {
    fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "trials": self.trials,
            "max_n": self.poset_size_max,
            "max_chain": self.chain_len_max,
            "n": self.poset_size,
            "edge_prob": self.edge_prob,
            "budget": [self.budget.beta, self.budget.gamma],
            "guard": self.extension_guard,
        })
    }

    fn validate(&self) -> Result<()> {
        if let Some(p) = self.edge_prob {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("edge probability {p} outside [0, 1]")));
            }
        }
        let largest = self.poset_size.unwrap_or(self.poset_size_max);
        if largest > self.extension_guard {
            return Err(Error::TooLarge {
                what: "poset size",
                value: largest,
                guard: self.extension_guard,
            });
        }
        Ok(())
    }
}

/// The checks `check-poset` can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PosetCheck {
    KahnSaksPoly,
    SumIdentity,
    Diagonalization,
    KahnSaks,
    AfType,
    CrossWeak,
    CrossStrong,
    Rayleigh,
    OrdinalSum,
}

impl PosetCheck {
    pub const ALL: [PosetCheck; 9] = [
        PosetCheck::KahnSaksPoly,
        PosetCheck::SumIdentity,
        PosetCheck::Diagonalization,
        PosetCheck::KahnSaks,
        PosetCheck::AfType,
        PosetCheck::CrossWeak,
        PosetCheck::CrossStrong,
        PosetCheck::Rayleigh,
        PosetCheck::OrdinalSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PosetCheck::KahnSaksPoly => "kahn_saks_poly",
            PosetCheck::SumIdentity => "ks_sum_identity",
            PosetCheck::Diagonalization => "diagonalization",
            PosetCheck::KahnSaks => "kahn_saks",
            PosetCheck::AfType => "af_type",
            PosetCheck::CrossWeak => "cross_product_weak",
            PosetCheck::CrossStrong => "cross_product_strong",
            PosetCheck::Rayleigh => "rayleigh",
            PosetCheck::OrdinalSum => "ordinal_sum_invariance",
        }
    }

    fn severity(self) -> Severity {
        match self {
            PosetCheck::CrossStrong | PosetCheck::Rayleigh => Severity::Conjecture,
            _ => Severity::Theorem,
        }
    }
}

impl FromStr for PosetCheck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PosetCheck::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown check {s:?}")))
    }
}

/// Parses a comma-separated selection; `all` or an empty string selects everything.
pub fn parse_selection(s: &str) -> Result<Vec<PosetCheck>> {
    if s.trim().is_empty() || s.trim() == "all" {
        return Ok(PosetCheck::ALL.to_vec());
    }
    let mut out: Vec<PosetCheck> = s.split(',').map(str::parse).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Linear extensions of `P` and of each `P ⊕ [ℓ]`, shared by all chains.
struct ExtensionCache {
    base: Vec<Vec<usize>>,
    augmented: Vec<(usize, Vec<Vec<usize>>)>,
}

impl ExtensionCache {
    fn build(poset: &Poset, ells: &[usize], guard: usize, with_augmented: bool) -> Result<Self> {
        let base: Vec<Vec<usize>> = poset.linear_extensions_guarded(guard)?.collect();
        let augmented = if with_augmented {
            ells.iter()
                .map(|&ell| {
                    let sum = poset.ordinal_sum_with_chain(ell);
                    Ok((ell, sum.linear_extensions_guarded(guard)?.collect()))
                })
                .collect::<Result<_>>()?
        } else {
            Vec::new()
        };
        Ok(ExtensionCache { base, augmented })
    }
}

fn chain_reports<R: Rng + ?Sized>(
    poset: &Poset,
    chain: &Chain,
    cache: &ExtensionCache,
    selection: &[PosetCheck],
    cfg: &RunConfig,
    rng: &mut R,
) -> Result<Vec<CheckReport>> {
    let n = poset.len();
    let k = chain.len();
    let f = GapTable::from_extensions(n, chain, &cache.base);
    let positions = PositionTable::from_extensions(n, chain, &cache.base);
    let mut out = Vec::new();
    let short = |c: PosetCheck| {
        CheckReport::skipped(c.name(), c.severity(), json!({ "n": n, "k": k }), "chain shorter than 2")
    };
    for &check in selection {
        let report = match check {
            PosetCheck::SumIdentity => check_ks_sum_identity(&f, &positions),
            _ if k < 2 => short(check),
            PosetCheck::KahnSaksPoly => {
                let ks = f.kahn_saks_poly()?;
                let names = kahn_saks_variable_names(k);
                CheckReport::pass(
                    check.name(),
                    Severity::Theorem,
                    json!({
                        "n": n,
                        "k": k,
                        "poly": ks.to_string_with(&names),
                        "extensions": f.total(),
                    }),
                )
            }
            PosetCheck::Diagonalization => check_diagonalization_consistency(&f, &positions)?,
            PosetCheck::KahnSaks => check_kahn_saks_inequality(&f),
            PosetCheck::AfType => check_af_type(&f),
            PosetCheck::CrossWeak => check_cross_product(&f, false, cfg.budget),
            PosetCheck::CrossStrong => check_cross_product(&f, true, cfg.budget),
            PosetCheck::Rayleigh => {
                let g = f.kahn_saks_poly()?.normalize();
                let samples = rayleigh_samples(rng, k, cfg.rayleigh_extra_points);
                check_rayleigh(&g, &samples)?
            }
            PosetCheck::OrdinalSum => {
                let tables: Vec<(usize, GapTable)> = cache
                    .augmented
                    .iter()
                    .map(|(ell, exts)| (*ell, GapTable::from_extensions(n + ell, chain, exts)))
                    .collect();
                check_ordinal_sum_tables(&f, &tables)
            }
        };
        out.push(report.with_context("chain", json!(chain)));
    }
    Ok(out)
}

/// Runs the selected checks on one poset and chain. Rayleigh sample points
/// come from `cfg.seed`.
pub fn check_poset(poset: &Poset, chain: &Chain, selection: &[PosetCheck], cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    chain.validate(poset)?;
    let with_sum = selection.contains(&PosetCheck::OrdinalSum) && chain.len() >= 2;
    let ells: Vec<usize> = cfg
        .ordinal_ells
        .iter()
        .copied()
        .filter(|ell| poset.len() + ell <= cfg.extension_guard)
        .collect();
    let cache = ExtensionCache::build(poset, &ells, cfg.extension_guard, with_sum)?;
    let mut rng = seeded(cfg.seed, 0);
    let reports = chain_reports(poset, chain, &cache, selection, cfg, &mut rng)?;
    let poset_json = json!(poset.to_json());
    Ok(reports
        .into_iter()
        .map(|r| r.with_context("poset", poset_json.clone()))
        .collect())
}

/// The random poset of trial `trial`, with its parameters.
pub fn fuzz_poset(cfg: &RunConfig, trial: usize) -> Result<(Poset, f64, rand_chacha::ChaCha8Rng)> {
    let mut rng = seeded(cfg.seed, trial as u64);
    let n = match cfg.poset_size {
        Some(n) => n,
        None => rng.random_range(2..=cfg.poset_size_max.max(2)),
    };
    let p = match cfg.edge_prob {
        Some(p) => p,
        None => (rng.random_range(10..70) as f64) / 100.0,
    };
    let poset = Poset::random(n, p, &mut rng)?;
    Ok((poset, p, rng))
}

fn fuzz_trial(cfg: &RunConfig, trial: usize) -> Result<Vec<CheckReport>> {
    let (poset, p, mut rng) = fuzz_poset(cfg, trial)?;
    let n = poset.len();
    let ells: Vec<usize> = cfg
        .ordinal_ells
        .iter()
        .copied()
        .filter(|ell| n + ell <= cfg.extension_guard)
        .collect();
    let cache = ExtensionCache::build(&poset, &ells, cfg.extension_guard, true)?;
    let mut out = Vec::new();
    for k in 2..=cfg.chain_len_max.min(n) {
        for chain in poset.chains_of_length(k) {
            out.extend(chain_reports(&poset, &chain, &cache, &PosetCheck::ALL, cfg, &mut rng)?);
        }
    }
    let ctx = json!({ "trial": trial, "edge_prob": p, "poset": poset.to_json() });
    Ok(out
        .into_iter()
        .map(|r| r.with_context("corpus", ctx.clone()))
        .collect())
}

/// Random posets with every chain of length `2..=chain_len_max` and the full
/// check suite on each.
pub fn fuzz(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let per_trial: Vec<Result<Vec<CheckReport>>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| fuzz_trial(cfg, t))
        .collect();
    let mut out = Vec::new();
    for r in per_trial {
        out.extend(r?);
    }
    Ok(out)
}

/// `gen-poset`: a random poset on `n ≥ 1` elements.
pub fn gen_poset(n: usize, edge_prob: f64, seed: u64) -> Result<Poset> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Poset::random(n, edge_prob, &mut seeded(seed, 0))
}

/// `check-schur`: KT and rKT (all pivots) on the Kostka coefficients.
pub fn check_schur(lambda: &Partition, m: usize, budget: Budget) -> Result<Vec<CheckReport>> {
    let s = schur(lambda, m)?;
    let ctx = json!({ "lambda": lambda.parts(), "m": m });
    Ok(vec![
        check_kt(&s).with_context("schur", ctx.clone()),
        check_rkt_all_pivots(&s, budget).with_context("schur", ctx),
    ])
}

fn poly_json(p: &SparsePoly) -> Value {
    json!(p.to_string())
}

/// One randomized instance of every identity. Sizes follow `k, m ≤ 3`,
/// `d ≤ 4`, `a ≤ d + 3`, `ℓ ≤ 4`; the complete homogeneous identity walks
/// the grid `d ≤ 6, m ≤ 6` as `trial` grows.
fn identity_trial(seed: u64, trial: usize) -> Result<Vec<CheckReport>> {
    let mut rng = seeded(seed, trial as u64);
    let mut out = Vec::new();

    // Technical identity with derived polynomials.
    {
        let k = rng.random_range(0..=3usize);
        let m = rng.random_range(1..=3usize);
        let d = rng.random_range(0..=4u32);
        let p = random_poly(&mut rng, k + m, d, 6, false);
        let x_degree = p
            .terms()
            .map(|(e, _)| e.entries()[k..].iter().sum::<u32>())
            .max()
            .unwrap_or(0);
        let a = rng.random_range(x_degree..=d + 3);
        let s = random_poly(&mut rng, m, a, 4, false);
        let (lhs, rhs) = checks::technical_derived_sides(&p, &s, a)?;
        let inst = json!({ "p": poly_json(&p), "s": poly_json(&s), "k": k, "m": m, "a": a });
        out.push(compare_polys("technical_derived", inst, &lhs, &rhs));
    }

    // Weighted truncation.
    {
        let n = rng.random_range(1..=4usize);
        let d = rng.random_range(0..=4u32);
        let a = rng.random_range(0..=6u32);
        let p = random_poly(&mut rng, n, d, 6, false);
        let (lhs, rhs) = checks::weighted_truncation_sides(&p, a)?;
        let inst = json!({ "p": poly_json(&p), "a": a });
        out.push(compare_polys("weighted_truncation", inst, &lhs, &rhs));
    }

    // Closed form of q_{ℓ,m}.
    let (qp, qm) = {
        let k = rng.random_range(0..=3usize);
        let m = rng.random_range(1..=3usize);
        let d = rng.random_range(0..=4u32);
        let ell = rng.random_range(0..=4u32);
        let p = random_poly(&mut rng, k + m, d, 6, true);
        let lhs = checks::q_ell(&p, m, ell)?;
        let rhs = checks::operational_q_ell(&p, m, ell)?;
        let inst = json!({ "p": poly_json(&p), "m": m, "ell": ell });
        out.push(compare_polys("qell_identity", inst, &lhs, &rhs));
        (p, m)
    };

    // Convergence of the scaled q_{ℓ,m} and of (m−1)!·q_m(v, m·u).
    {
        let inst = json!({ "p": poly_json(&qp) });
        let r = checks::verify_qell_convergence(&qp, &[10, 100, 1000], qm)?;
        out.push(r.with_context("source", inst.clone()));
        let k = qp.nvars() - qm;
        let r = checks::verify_qm_convergence(&qp, k, &[qm as u32, qm as u32 + 4, qm as u32 + 40])?;
        out.push(r.with_context("source", inst));
    }

    // Normalized diagonalization identity.
    {
        let n = rng.random_range(2..=4usize);
        let k = rng.random_range(0..n);
        let d = rng.random_range(0..=4u32);
        let p = random_poly(&mut rng, n, d, 6, false);
        let (lhs, rhs) = checks::diagonalization_identity_sides(&p, k)?;
        out.push(compare_polys("diagonalization_identity", json!({ "p": poly_json(&p), "k": k }), &lhs, &rhs));
    }

    // Complete homogeneous identities.
    {
        let d = (trial % 7) as u32;
        let m = 1 + (trial / 7) % 6;
        let results = verify_ch_derived_identity(d, m);
        let inst = json!({ "d": d, "m": m });
        let report = match results.iter().position(|ok| !ok) {
            None => CheckReport::pass("ch_derived", Severity::Theorem, inst),
            Some(i) => {
                let s = complete_homogeneous(d, m);
                let lhs = s.derived(i as u32)?;
                let rhs = complete_homogeneous(d - i as u32, m).scale(&crate::rational::Rational::from_integer(
                    crate::rational::binomial(d + m as u32 - 1, i as u32),
                ));
                compare_polys("ch_derived", inst, &lhs, &rhs)
            }
        };
        out.push(report);

        let m = rng.random_range(1..=4usize);
        let d = rng.random_range(0..=5u32);
        let f = random_poly(&mut rng, m, d, 6, false);
        let inst = json!({ "f": poly_json(&f) });
        out.push(if verify_ch_evaluation(&f) {
            CheckReport::pass("ch_evaluation", Severity::Theorem, inst)
        } else {
            let lhs = f.apply_diffop(&complete_homogeneous(d, m))?;
            let rhs = SparsePoly::constant(m, f.denormalize().evaluate(&vec![crate::rational::int(1); m])?);
            compare_polys("ch_evaluation", inst, &lhs, &rhs)
        });
    }

    // Operator algebra.
    {
        let n = rng.random_range(1..=4usize);
        let d = rng.random_range(0..=5u32);
        let f = random_poly(&mut rng, n, d, 6, false);
        let inst = json!({ "f": poly_json(&f) });
        out.push(compare_polys("normalize_round_trip", inst.clone(), &f.denormalize().normalize(), &f));
        out.push(compare_polys("denormalize_round_trip", inst.clone(), &f.normalize().denormalize(), &f));

        let t = rng.random_range(0..=d);
        let gamma = random_exponent_of_total(&mut rng, n, t);
        let inst_g = json!({ "f": poly_json(&f), "gamma": gamma.entries() });
        let lhs = f.partial_power(&gamma)?.antiderivative(&gamma)?;
        out.push(compare_polys("truncation_identity", inst_g.clone(), &lhs, &f.truncate_lower(&gamma)?));

        let via = SparsePoly::monomial(gamma.clone(), crate::rational::int(1))
            .mul(&f.denormalize())?
            .normalize();
        out.push(compare_polys("antiderivative_identity", inst_g, &f.antiderivative(&gamma)?, &via));

        let mid = rng.random_range(1..=3usize);
        let cols = rng.random_range(1..=3usize);
        let a = random_nonneg_matrix(&mut rng, n, mid);
        let b = random_nonneg_matrix(&mut rng, mid, cols);
        let ab: Vec<Vec<crate::rational::Rational>> = (0..n)
            .map(|i| {
                (0..cols)
                    .map(|j| (0..mid).map(|t| &a[i][t] * &b[t][j]).sum())
                    .collect()
            })
            .collect();
        let lhs = f.substitute_linear(&a)?.substitute_linear(&b)?;
        let rhs = f.substitute_linear(&ab)?;
        out.push(compare_polys("substitution_composition", inst.clone(), &lhs, &rhs));

        // Σ_j s^{(j)} u^j = s(x + u), with u appended as the last variable.
        let mut shift = vec![vec![crate::rational::int(0); n + 1]; n];
        for (i, row) in shift.iter_mut().enumerate() {
            row[i] = crate::rational::int(1);
            row[n] = crate::rational::int(1);
        }
        let expanded = f.substitute_linear(&shift)?;
        let mut assembled = SparsePoly::zero(n + 1, d);
        for j in 0..=d {
            let part = f
                .derived(j)?
                .embed(n + 1, &(0..n).collect::<Vec<_>>())?
                .mul(&SparsePoly::monomial(Exponent::unit(n + 1, n), crate::rational::int(1)).pow(j))?;
            assembled = assembled.add(&part)?;
        }
        out.push(compare_polys("derived_expansion", inst, &assembled, &expanded));
    }

    Ok(out
        .into_iter()
        .map(|r| r.with_context("trial", json!(trial)))
        .collect())
}

/// `verify-identities`: `trials` seeded instances of every identity.
pub fn verify_identities(seed: u64, trials: usize) -> Result<Vec<CheckReport>> {
    let per_trial: Vec<Result<Vec<CheckReport>>> = (0..trials)
        .into_par_iter()
        .map(|t| identity_trial(seed, t))
        .collect();
    let mut out = Vec::new();
    for r in per_trial {
        out.extend(r?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub skipped: usize,
    pub theorem_violations: usize,
    pub conjecture_candidates: usize,
    /// Per check: `(total, failed)`.
    pub by_check: BTreeMap<String, (usize, usize)>,
}

impl Summary {
    pub fn from_reports(reports: &[CheckReport]) -> Summary {
        let mut s = Summary::default();
        for r in reports {
            s.total += 1;
            s.passed += r.passed as usize;
            s.skipped += r.is_skipped() as usize;
            s.theorem_violations += r.is_theorem_violation() as usize;
            s.conjecture_candidates += r.is_conjecture_candidate() as usize;
            let entry = s.by_check.entry(r.check.clone()).or_default();
            entry.0 += 1;
            entry.1 += !r.passed as usize;
        }
        s
    }

    pub fn exit_code(&self) -> i32 {
        if self.theorem_violations > 0 {
            EXIT_THEOREM_VIOLATION
        } else {
            EXIT_OK
        }
    }

    pub fn to_json(&self, command: &str, config: Option<Value>) -> Value {
        let by_check: serde_json::Map<String, Value> = self
            .by_check
            .iter()
            .map(|(k, (t, f))| (k.clone(), json!({ "total": t, "failed": f })))
            .collect();
        json!({
            "summary": {
                "command": command,
                "config": config,
                "total": self.total,
                "passed": self.passed,
                "skipped": self.skipped,
                "theorem_violations": self.theorem_violations,
                "conjecture_candidates": self.conjecture_candidates,
                "by_check": by_check,
                "exit_code": self.exit_code(),
            }
        })
    }
}

/// JSON lines: one per report, then the summary object.
pub fn render(command: &str, config: Option<Value>, reports: &[CheckReport]) -> (String, i32) {
    let summary = Summary::from_reports(reports);
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.to_json_line());
        out.push('\n');
    }
    out.push_str(&summary.to_json(command, config).to_string());
    out.push('\n');
    (out, summary.exit_code())
}

/// The configuration echoed in fuzz summaries.
pub fn config_json(cfg: &RunConfig) -> Value {
    cfg.to_json()
}
