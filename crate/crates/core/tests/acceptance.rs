//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach stdout.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Signed};
use rand::Rng;

use volpoly_core::checks::{
    check_kt, check_rkt_all_pivots, crossproduct_limit_factor, qell_ratios,
    verify_crossproduct_limit, CheckReport, DEFAULT_BUDGET,
};
use volpoly_core::harness::{fuzz, fuzz_poset, verify_identities, RunConfig};
use volpoly_core::random::{random_exponent_of_total, random_poly, seeded};
use volpoly_core::rational::int;
use volpoly_core::symmetric::{
    kostka_table, schur, schur_with_alphabet_order, verify_ch_derived_identity,
    verify_ch_evaluation,
};
use volpoly_core::{Partition, Rational};

type Outcome = Result<String, String>;

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(reports: &[CheckReport], names: &[&str], min_each: usize) -> Result<usize, String> {
    let mut count = 0;
    for name in names {
        let mine: Vec<&CheckReport> = reports.iter().filter(|r| r.check == *name).collect();
        require(mine.len() >= min_each, || {
            format!("{name}: only {} instances (need {min_each})", mine.len())
        })?;
        if let Some(bad) = mine.iter().find(|r| !r.passed) {
            return Err(format!("{name} failed: {}", bad.to_json_line()));
        }
        count += mine.len();
    }
    Ok(count)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let reports = verify_identities(1001, 100).map_err(|e| e.to_string())?;
    let n = all_pass(&reports, &["technical_derived", "weighted_truncation", "qell_identity"], 100)?;
    let elapsed = start.elapsed();
    require(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("{n} identity instances exact in {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut grid = 0;
    for d in 0..=6 {
        for m in 1..=6 {
            let results = verify_ch_derived_identity(d, m);
            require(results.len() == d as usize + 1 && results.iter().all(|&ok| ok), || {
                format!("derived identity fails at d={d} m={m}: {results:?}")
            })?;
            grid += results.len();
        }
    }
    for trial in 0..100 {
        let mut rng = seeded(2002, trial);
        let m = rng.random_range(1..=4usize);
        let d = rng.random_range(0..=5u32);
        let f = random_poly(&mut rng, m, d, 8, false);
        require(verify_ch_evaluation(&f), || format!("evaluation identity fails on {f}"))?;
    }
    Ok(format!("{grid} (d, m, i) cases and 100 evaluation instances"))
}

fn criterion_3() -> Outcome {
    let reports = verify_identities(3003, 200).map_err(|e| e.to_string())?;
    let names = [
        "normalize_round_trip",
        "denormalize_round_trip",
        "truncation_identity",
        "antiderivative_identity",
        "substitution_composition",
    ];
    let n = all_pass(&reports, &names, 200)?;
    Ok(format!("{n} operator-algebra instances exact"))
}

struct Corpus {
    reports: Vec<CheckReport>,
    posets: usize,
    elapsed: Duration,
}

fn corpus_config() -> RunConfig {
    RunConfig {
        seed: 42,
        trials: 200,
        poset_size_max: 8,
        chain_len_max: 4,
        ..RunConfig::default()
    }
}

fn build_corpus() -> Result<Corpus, String> {
    let cfg = corpus_config();
    let start = Instant::now();
    let reports = fuzz(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    // Every trial draws one poset, including those without a 2-chain.
    Ok(Corpus { reports, posets: cfg.trials, elapsed })
}

fn criterion_4(c: &Corpus) -> Outcome {
    require(c.posets >= 200, || format!("only {} posets", c.posets))?;
    let names = [
        "kahn_saks",
        "af_type",
        "cross_product_weak",
        "ks_sum_identity",
        "ordinal_sum_invariance",
    ];
    let n = all_pass(&c.reports, &names, 1)?;
    let chains: BTreeSet<(u64, String)> = c
        .reports
        .iter()
        .map(|r| (r.instance["corpus"]["trial"].as_u64().unwrap_or(0), r.instance["chain"].to_string()))
        .collect();
    let evaluated: u64 = c
        .reports
        .iter()
        .filter(|r| names.contains(&r.check.as_str()))
        .filter_map(|r| r.instance["evaluated"].as_u64())
        .sum();
    require(c.elapsed < Duration::from_secs(300), || format!("took {:?}", c.elapsed))?;
    Ok(format!(
        "{n} theorem checks ({evaluated} inequalities and table entries) on {} posets and {} chains in {:.2}s",
        c.posets,
        chains.len(),
        c.elapsed.as_secs_f64()
    ))
}

fn criterion_5(c: &Corpus) -> Outcome {
    let n = all_pass(&c.reports, &["diagonalization"], 1)?;
    let skipped = c.reports.iter().filter(|r| r.check == "diagonalization" && r.is_skipped()).count();
    require(skipped == 0, || format!("{skipped} diagonalization checks skipped"))?;
    Ok(format!("{n} chains: Kahn-Saks polynomial equals the diagonalized Stanley polynomial"))
}

fn criterion_6(c: &Corpus) -> Outcome {
    let mut candidates = Vec::new();
    let mut total = 0;
    for r in c
        .reports
        .iter()
        .filter(|r| r.check == "cross_product_strong" || r.check == "rayleigh")
    {
        total += 1;
        if !r.passed {
            require(r.witness.is_some(), || format!("candidate without witness: {}", r.to_json_line()))?;
            candidates.push(r.to_json_line());
        }
    }
    require(total > 0, || "no conjecture checks ran".into())?;
    for line in &candidates {
        println!("    candidate: {line}");
    }
    require(candidates.is_empty(), || format!("{} counterexample candidates", candidates.len()))?;
    Ok(format!("{total} strong cross-product and Rayleigh checks, 0 candidates"))
}

fn kostka_by_fillings(lambda: &[u32], m: usize) -> BTreeMap<Vec<u32>, u64> {
    let cells: Vec<(usize, usize)> = lambda
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    let mut out = BTreeMap::new();
    for code in 0..(m as u64).pow(cells.len() as u32) {
        let mut grid: Vec<Vec<usize>> = lambda.iter().map(|&l| vec![0; l as usize]).collect();
        let mut rest = code;
        for &(r, c) in &cells {
            grid[r][c] = (rest % m as u64) as usize;
            rest /= m as u64;
        }
        let semistandard = grid.iter().all(|row| row.windows(2).all(|w| w[0] <= w[1]))
            && cells.iter().all(|&(r, c)| r == 0 || grid[r - 1][c] < grid[r][c]);
        if semistandard {
            let mut content = vec![0u32; m];
            grid.iter().flatten().for_each(|&x| content[x] += 1);
            *out.entry(content).or_insert(0) += 1;
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let mut cases = 0;
    for size in 1..=6 {
        for lambda in Partition::all_of(size) {
            for m in lambda.len()..=4 {
                let s = schur(&lambda, m).map_err(|e| e.to_string())?;
                let kt = check_kt(&s);
                require(kt.passed, || kt.to_json_line())?;
                let rkt = check_rkt_all_pivots(&s, DEFAULT_BUDGET);
                require(rkt.passed, || rkt.to_json_line())?;

                let table: BTreeMap<Vec<u32>, u64> = kostka_table(&lambda, m)
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .map(|(e, k)| (e.into_entries(), u64::try_from(&k).unwrap()))
                    .collect();
                require(table == kostka_by_fillings(lambda.parts(), m), || {
                    format!("Kostka numbers differ from brute force for λ={lambda}, m={m}")
                })?;
                let reversed: Vec<usize> = (0..m).rev().collect();
                let rotated: Vec<usize> = (1..m).chain(0..1).collect();
                for order in [reversed, rotated] {
                    let other = schur_with_alphabet_order(&lambda, m, &order).map_err(|e| e.to_string())?;
                    require(other == s, || format!("alphabet order {order:?} disagrees for λ={lambda}"))?;
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (λ, m) pairs: KT, rKT and two independent Kostka oracles agree"))
}

fn criterion_8() -> Outcome {
    // Convergence of the scaled q_{ℓ,m}.
    let mut ratios = 0;
    for trial in 0..20 {
        let mut rng = seeded(8008, trial);
        let k = rng.random_range(0..=3usize);
        let m = rng.random_range(1..=3usize);
        let d = rng.random_range(0..=4u32);
        let p = random_poly(&mut rng, k + m, d, 6, true);
        let dm = (d as i64) + m as i64;
        for ell in [100u32, 1000] {
            let bound = Rational::new((dm * dm).into(), (ell as i64).into());
            for (e, r) in qell_ratios(&p, m, ell).map_err(|e| e.to_string())? {
                require((&r - Rational::one()).abs() <= bound, || {
                    format!("|ratio − 1| = {} exceeds {bound} at ℓ={ell}, {e}, p = {p}", &r - Rational::one())
                })?;
                ratios += 1;
            }
        }
    }

    // Cross-product limit factors on corpus posets.
    let cfg = corpus_config();
    let ells = [1u32, 2, 3, 4, 10, 100, 1000];
    let mut instances = 0;
    for trial in 0..cfg.trials {
        if instances >= 20 {
            break;
        }
        let (poset, _, _) = fuzz_poset(&cfg, trial).map_err(|e| e.to_string())?;
        let mut rng = seeded(8009, trial as u64);
        for k in 2..=3 {
            let chains = poset.chains_of_length(k);
            if chains.is_empty() || poset.len() < k + 2 {
                continue;
            }
            let chain = &chains[rng.random_range(0..chains.len())];
            let room = (poset.len() - k) as u32;
            let b = rng.random_range(1..room);
            let cc = rng.random_range(1..=room - b);
            let a = rng.random_range(0..=room - b - cc);
            let alpha = random_exponent_of_total(&mut rng, k - 1, a);
            let beta = random_exponent_of_total(&mut rng, k - 1, b);
            let gamma = random_exponent_of_total(&mut rng, k - 1, cc);
            let report = verify_crossproduct_limit(&poset, chain, &alpha, &beta, &gamma, &ells)
                .map_err(|e| e.to_string())?;
            require(report.passed, || report.to_json_line())?;
            let mut prev: Option<Rational> = None;
            for &ell in &ells {
                let f = crossproduct_limit_factor(poset.len(), k, a, b, cc, ell).unwrap();
                let bound = Rational::one() + int((b * (cc + 1)) as i64) / int(ell as i64);
                require(f <= bound, || format!("factor {f} above {bound} at ℓ={ell}"))?;
                if let Some(p) = &prev {
                    require(f < *p, || format!("factor not decreasing at ℓ={ell}"))?;
                }
                prev = Some(f);
            }
            instances += 1;
        }
    }
    require(instances >= 20, || format!("only {instances} cross-product limit instances"))?;
    Ok(format!("{ratios} q-ratios within (d+m)²/ℓ; {instances} cross-product factor sequences decreasing and bounded"))
}

fn criterion_9() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_volpoly"))
            .args(["fuzz", "--seed", "42", "--trials", "50"])
            .env_remove("VOLPOLY_SEED")
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run()?;
    let b = run()?;
    require(a.status.success() && b.status.success(), || {
        format!("exit codes {:?} / {:?}", a.status.code(), b.status.code())
    })?;
    require(a.stdout == b.stdout, || "reports differ between runs".into())?;
    Ok(format!("{} bytes identical across two runs", a.stdout.len()))
}

fn main() {
    let corpus = build_corpus();
    let corpus_outcome = |f: fn(&Corpus) -> Outcome| match &corpus {
        Ok(c) => f(c),
        Err(e) => Err(format!("corpus failed: {e}")),
    };
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "identity suite", criterion_1()),
        (2, "complete homogeneous identities", criterion_2()),
        (3, "operator algebra", criterion_3()),
        (4, "poset theorem suite", corpus_outcome(criterion_4)),
        (5, "diagonalization consistency", corpus_outcome(criterion_5)),
        (6, "conjecture fuzz", corpus_outcome(criterion_6)),
        (7, "Schur and Kostka", criterion_7()),
        (8, "convergence checks", criterion_8()),
        (9, "determinism", criterion_9()),
    ];
    let mut failed = 0;
    for (id, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id} ({name}): {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
