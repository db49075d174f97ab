use num_traits::One;
use serde_json::json;

use volpoly_core::checks::{
    check_af_type, check_cross_product, check_kahn_saks_inequality, check_kt, check_rayleigh,
    check_rkt, check_rkt_all_pivots, crossproduct_limit_factor, operational_diffop_at_zero,
    q_ell, q_limit, q_m, qell_ratios, verify_crossproduct_limit, verify_diagonalization_identity,
    verify_qell_convergence, verify_qell_identity, verify_technical_derived,
    verify_weighted_truncation, weighted_truncation_sides, Budget, DEFAULT_BUDGET,
};
use volpoly_core::poset::gap_statistics;
use volpoly_core::random::{random_poly, random_product_of_linear_forms, rayleigh_samples, seeded};
use volpoly_core::rational::{binomial, factorial, int, ratio};
use volpoly_core::{Chain, Error, Exponent, Poset, Rational, SparsePoly};

fn poly(s: &str, n: usize) -> SparsePoly {
    SparsePoly::parse(s, Some(n)).unwrap()
}

fn exp(v: &[u32]) -> Exponent {
    Exponent::new(v.to_vec())
}

fn big(n: num_bigint::BigInt) -> Rational {
    Rational::from_integer(n)
}

#[test]
fn kt_examples() {
    let square = poly("x0 + x1", 2).pow(2).denormalize();
    assert!(check_kt(&square).passed);
    assert!(check_kt(&poly("x0^4", 2)).passed);

    let bad = check_kt(&poly("x0^2 + x1^2", 2));
    assert!(!bad.passed);
    assert!(bad.is_theorem_violation());
    let w = bad.witness.unwrap();
    assert_eq!(w.indices[0], json!([1, 1]));
    assert_eq!((w.lhs, w.rhs), (int(0), int(1)));
}

#[test]
fn rkt_examples() {
    let square = poly("x0 + x1", 2).pow(2).denormalize();
    // α = 0, β = γ = e_2 at pivot 0: 2 · 2 ≤ C(2,1) · 2².
    assert!(check_rkt(&square, 0, DEFAULT_BUDGET).unwrap().passed);
    assert!(check_rkt(&square, 1, DEFAULT_BUDGET).unwrap().passed);
    assert!(matches!(
        check_rkt(&square, 2, DEFAULT_BUDGET),
        Err(Error::IndexOutOfRange { .. })
    ));
    let tiny = Budget { beta: 0, gamma: 0 };
    assert!(check_rkt_all_pivots(&square, tiny).passed);
}

/// Positive multiples of products of non-negative linear forms are volume
/// polynomials, so their squares denormalize to KT and rKT instances.
#[test]
fn products_of_linear_forms_pass_kt_and_rkt() {
    for trial in 0..60 {
        let mut rng = seeded(2024, trial);
        let nvars = rand::Rng::random_range(&mut rng, 1..=3usize);
        let degree = rand::Rng::random_range(&mut rng, 1..=4u32);
        let g = random_product_of_linear_forms(&mut rng, nvars, degree);
        for f in [g.denormalize(), g.pow(2).denormalize()] {
            let kt = check_kt(&f);
            assert!(kt.passed, "{}", kt.to_json_line());
            let rkt = check_rkt_all_pivots(&f, DEFAULT_BUDGET);
            assert!(rkt.passed, "{}", rkt.to_json_line());
        }
    }
}

/// A sum of products of linear forms need not be a volume polynomial:
/// (x0² + x1²)² denormalizes to a KT violation.
#[test]
fn sums_of_products_can_fail_kt() {
    let g = poly("x0^2 + x1^2", 2).pow(2);
    let report = check_kt(&g.denormalize());
    assert!(!report.passed);
}

#[test]
fn af_type_and_cross_product_examples() {
    let vee = Poset::from_relations(3, &[(0, 1)]).unwrap();
    let f = gap_statistics(&vee, &Chain::new(&vee, vec![0, 1]).unwrap()).unwrap();
    assert!(check_af_type(&f).passed);
    assert!(check_kahn_saks_inequality(&f).passed);

    let total = Poset::chain(3);
    let g = gap_statistics(&total, &Chain::new(&total, vec![0, 2]).unwrap()).unwrap();
    assert!(check_af_type(&g).passed);

    let p = Poset::from_relations(4, &[(0, 1)]).unwrap();
    let h = gap_statistics(&p, &Chain::new(&p, vec![0, 1]).unwrap()).unwrap();
    for strong in [false, true] {
        let r = check_cross_product(&h, strong, DEFAULT_BUDGET);
        assert!(r.passed, "{}", r.to_json_line());
    }
    // F = (6, 4, 2): α = 1, β = γ = 1 gives 6·2 ≤ 2·4·4 (weak) and ≤ 4·4 (strong).
    assert_eq!((h.get(&[1]), h.get(&[2]), h.get(&[3])), (6, 4, 2));
}

#[test]
fn rayleigh_examples() {
    let g = poly("2 x0 + x1", 2);
    let pts = vec![vec![int(0), int(0)], vec![ratio(7, 3), int(5)]];
    let r = check_rayleigh(&g, &pts).unwrap();
    assert!(r.passed);
    assert!(r.severity == volpoly_core::Severity::Conjecture);
    assert!(matches!(
        check_rayleigh(&g, &[vec![int(-1), int(0)]]),
        Err(Error::NegativeSamplePoint(0))
    ));
    assert!(check_rayleigh(&g, &[vec![int(1)]]).is_err());

    // A product of linear forms is Rayleigh everywhere on the orthant.
    let mut rng = seeded(8, 0);
    let q = poly("x0 + x1", 3).mul(&poly("x0 + 2 x2", 3)).unwrap();
    let samples = rayleigh_samples(&mut rng, 3, 20);
    assert_eq!(samples.len(), 27 + 20);
    assert!(check_rayleigh(&q, &samples).unwrap().passed);
}

#[test]
fn technical_identity_on_monomials() {
    // p = v^ι x^β, s = x^α: both sides are a!/(d−|ι|)! · β! · C(α, β) · v^ι u^{d−|ι|}.
    for (iota, beta, alpha) in [
        (vec![1u32], vec![1u32, 2], vec![2u32, 3]),
        (vec![0], vec![2, 0], vec![2, 1]),
        (vec![2], vec![1, 1], vec![0, 3]),
        (vec![1], vec![0, 0], vec![1, 1]),
    ] {
        let mut e = iota.clone();
        e.extend(&beta);
        let p = SparsePoly::monomial(exp(&e), Rational::one());
        let s = SparsePoly::monomial(exp(&alpha), Rational::one());
        let a = alpha.iter().sum::<u32>();
        let d = p.degree();
        let rest = d - iota.iter().sum::<u32>();
        let coeff = big(factorial(a)) / big(factorial(rest))
            * big(exp(&beta).factorial())
            * big(exp(&alpha).binom(&exp(&beta)));
        let mut target = iota.clone();
        target.push(rest);
        let expected = SparsePoly::from_terms(2, d, [(exp(&target), coeff)]).unwrap();
        assert_eq!(operational_diffop_at_zero(&p, &s, a).unwrap(), expected);
        assert!(verify_technical_derived(&p, &s, a).unwrap());
    }
}

#[test]
fn technical_identity_v_only() {
    // p = v0² in (v0, x0, x1) has p_ι constant; both sides reduce to the
    // binomial expansion of (u + x0 + x1)^a.
    let p = poly("x0^2", 3);
    for a in 0..=4 {
        let s = SparsePoly::monomial(Exponent::new(vec![a, 0]), Rational::one());
        assert!(verify_technical_derived(&p, &s, a).unwrap());
        assert!(verify_technical_derived(&p, &volpoly_core::symmetric::complete_homogeneous(a, 2), a).unwrap());
    }
    assert!(verify_technical_derived(&p, &poly("x0", 1), 2).is_err());
}

#[test]
fn weighted_truncation_examples() {
    // p = v_n^d with a ≥ d gives C(a, d) u^d.
    for d in 0..=3u32 {
        for a in d..=5 {
            let p = SparsePoly::monomial(Exponent::new(vec![0, d]), Rational::one());
            let (lhs, _) = weighted_truncation_sides(&p, a).unwrap();
            let expected = SparsePoly::monomial(Exponent::new(vec![0, d]), big(binomial(a, d)));
            assert_eq!(lhs, expected);
        }
    }
    // Independent of v_n: only b = 0 survives.
    let p = poly("x0^2 - 2 x0 x1", 3);
    let (lhs, rhs) = weighted_truncation_sides(&p, 3).unwrap();
    assert_eq!(lhs, p);
    assert_eq!(rhs, p);
    for a in 0..=6 {
        let mut rng = seeded(3, a as u64);
        let q = random_poly(&mut rng, 3, 3, 6, false);
        assert!(verify_weighted_truncation(&q, a).unwrap());
    }
}

#[test]
fn qell_examples() {
    // ℓ = 0, m = 1, p = v1^{d−1} x1.
    for d in 1..=4u32 {
        let p = SparsePoly::monomial(Exponent::new(vec![d - 1, 1]), Rational::one());
        assert!(verify_qell_identity(&p, 0, 1).unwrap());
        let q = q_ell(&p, 1, 0).unwrap();
        // (d)!/(1)! · C(d, d−1) · N⁻¹(x1)(u) = d! · d.
        let expected = big(factorial(d)) * int(d as i64);
        assert_eq!(q.coeff(&Exponent::new(vec![d - 1, 1])), expected);
    }
    let p = poly("x0^2 + 3 x0 x1 + x1 x2", 3);
    for m in 1..=2 {
        for ell in 0..=4 {
            assert!(verify_qell_identity(&p, ell, m).unwrap());
        }
    }
}

#[test]
fn qell_ratio_product_formula() {
    let p = poly("x0^2 x1 + 2 x0 x1 x2 + x1^3", 3);
    let (d, m) = (3u32, 2usize);
    for ell in [1u32, 7, 100, 1000] {
        for (e, r) in qell_ratios(&p, m, ell).unwrap() {
            let iota = e.get(0);
            let mut expected = Rational::one();
            for i in iota + 1..=d + m as u32 - 1 {
                expected *= ratio((ell + i) as i64, ell as i64);
            }
            assert_eq!(r, expected, "ℓ={ell} e={e}");
            assert!(r >= Rational::one());
        }
    }
    let report = verify_qell_convergence(&p, &[10, 100, 1000], m).unwrap();
    assert!(report.passed, "{}", report.to_json_line());
    assert!(verify_qell_convergence(&p, &[100, 10], m).is_err());
}

#[test]
fn q_limit_and_diagonalization() {
    let p = poly("x0^2 + x0 x1 + x2^2", 3);
    assert_eq!(q_m(&p, 2).unwrap().nvars(), 2);
    assert_eq!(q_limit(&p, 1).unwrap().nvars(), 2);
    for k in 0..3 {
        assert!(verify_diagonalization_identity(&p, k).unwrap());
    }
}

#[test]
fn crossproduct_factor_examples() {
    for ell in 1..20u32 {
        assert_eq!(crossproduct_limit_factor(6, 2, 1, 0, 2, ell), Some(int(1)));
        let single = crossproduct_limit_factor(6, 2, 1, 1, 1, ell).unwrap();
        let base = (6 + ell - 2 - 1) as i64;
        assert_eq!(single, ratio(base, base - 1));
    }
    let p = Poset::from_relations(6, &[(0, 1), (1, 2)]).unwrap();
    let c = Chain::new(&p, vec![0, 1, 2]).unwrap();
    let r = verify_crossproduct_limit(&p, &c, &exp(&[1, 0]), &exp(&[0, 1]), &exp(&[1, 0]), &[1, 2, 3, 10, 100, 1000])
        .unwrap();
    assert!(r.passed, "{}", r.to_json_line());
    assert_eq!(r.instance["ordinal_sum_checked"], json!([1, 2, 3]));
    let too_big = verify_crossproduct_limit(&p, &c, &exp(&[2, 0]), &exp(&[0, 1]), &exp(&[1, 0]), &[1]);
    assert!(too_big.is_err());
}
