//! Seeded generators for polynomials, matrices and sample points.
//!
//! Everything is driven by `ChaCha8Rng`, whose output is stable across
//! platforms and crate versions, so a seed pins a corpus exactly.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exponent::Exponent;
use crate::poly::SparsePoly;
use crate::rational::Rational;

/// An independent stream for `(seed, stream)`.
pub fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Numerator in `[-5, 5]` (or `[0, 5]`), denominator in `[1, 4]`.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R, nonneg: bool) -> Rational {
    let lo = if nonneg { 0 } else { -5 };
    let num: i64 = rng.random_range(lo..=5);
    let den: i64 = rng.random_range(1..=4);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn random_exponent<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_entry: u32) -> Exponent {
    Exponent::new((0..nvars).map(|_| rng.random_range(0..=max_entry)).collect())
}

/// A random exponent of the given total.
pub fn random_exponent_of_total<R: Rng + ?Sized>(rng: &mut R, nvars: usize, total: u32) -> Exponent {
    let mut e = vec![0u32; nvars];
    for _ in 0..total {
        e[rng.random_range(0..nvars)] += 1;
    }
    Exponent::new(e)
}

/// Up to `max_terms` random terms of the given degree with small nonzero
/// rational coefficients. May be zero only when `max_terms` is 0.
pub fn random_poly<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    degree: u32,
    max_terms: usize,
    nonneg: bool,
) -> SparsePoly {
    let count = if max_terms == 0 { 0 } else { rng.random_range(1..=max_terms) };
    let mut terms = Vec::with_capacity(count);
    for _ in 0..count {
        let e = random_exponent_of_total(rng, nvars, degree);
        let mut c = small_rational(rng, nonneg);
        if c.is_zero() {
            c = Rational::one();
        }
        terms.push((e, c));
    }
    let p = SparsePoly::from_terms(nvars, degree, terms).expect("homogeneous by construction");
    if p.is_zero() && count > 0 {
        // Coefficients cancelled; fall back to a single monomial.
        return SparsePoly::monomial(random_exponent_of_total(rng, nvars, degree), Rational::one());
    }
    p
}

/// A `rows × cols` matrix with entries in `{0, 1/2, 1, …, 3}`.
pub fn random_nonneg_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Vec<Vec<Rational>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| Rational::new(BigInt::from(rng.random_range(0..=6)), BigInt::from(2)))
                .collect()
        })
        .collect()
}

/// A linear form with non-negative integer coefficients in `[0, 3]`, not identically zero.
pub fn random_nonneg_linear_form<R: Rng + ?Sized>(rng: &mut R, nvars: usize) -> SparsePoly {
    loop {
        let terms: Vec<(Exponent, Rational)> = (0..nvars)
            .map(|i| {
                let c: i64 = rng.random_range(0..=3);
                (Exponent::unit(nvars, i), Rational::from_integer(BigInt::from(c)))
            })
            .collect();
        let f = SparsePoly::from_terms(nvars, 1, terms).expect("degree 1");
        if !f.is_zero() {
            return f;
        }
    }
}

/// A positive multiple of a product of `degree` non-negative linear forms.
/// Such polynomials are volume polynomials: each linear form is a monomial
/// after a non-negative linear substitution, and products preserve the class.
pub fn random_product_of_linear_forms<R: Rng + ?Sized>(rng: &mut R, nvars: usize, degree: u32) -> SparsePoly {
    let mut acc = SparsePoly::one(nvars);
    for _ in 0..degree {
        acc = acc
            .mul(&random_nonneg_linear_form(rng, nvars))
            .expect("same nvars");
    }
    let scale: i64 = rng.random_range(1..=3);
    acc.scale(&Rational::from_integer(BigInt::from(scale)))
}

/// A point of `[0, 5]^k` with a common denominator in `[1, 4]`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<Rational> {
    let den: i64 = rng.random_range(1..=4);
    (0..k)
        .map(|_| Rational::new(BigInt::from(rng.random_range(0..=5 * den)), BigInt::from(den)))
        .collect()
}

/// The grid `{0, 1, 2}^k` followed by `extra` random points of `[0, 5]^k`.
pub fn rayleigh_samples<R: Rng + ?Sized>(rng: &mut R, k: usize, extra: usize) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=2).map(move |v| {
                    let mut q = p.clone();
                    q.push(Rational::from_integer(BigInt::from(v)));
                    q
                })
            })
            .collect();
    }
    out.extend((0..extra).map(|_| random_point(rng, k)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_streams() {
        let a = random_poly(&mut seeded(5, 1), 3, 4, 6, false);
        let b = random_poly(&mut seeded(5, 1), 3, 4, 6, false);
        let c = random_poly(&mut seeded(5, 2), 3, 4, 6, false);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn shapes() {
        let mut rng = seeded(1, 0);
        for _ in 0..20 {
            let p = random_poly(&mut rng, 3, 4, 5, true);
            assert!(!p.is_zero());
            assert_eq!((p.nvars(), p.degree()), (3, 4));
            let q = random_product_of_linear_forms(&mut rng, 3, 3);
            assert_eq!(q.degree(), 3);
            assert!(q.terms().all(|(_, c)| *c > Rational::zero()));
        }
        let pts = rayleigh_samples(&mut rng, 3, 20);
        assert_eq!(pts.len(), 27 + 20);
        let five = Rational::from_integer(BigInt::from(5));
        assert!(pts.iter().flatten().all(|x| *x >= Rational::zero() && *x <= five));
    }
}
