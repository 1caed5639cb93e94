//! Independent oracles for derived values: brute force, dynamic programming
//! and exact rational arithmetic, kept apart from the implementation paths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use mrpgen::analytics::{
    chi_square_residues, p_limb, p_mrp_exact, p_mrp_lower_bound, p_seg, p_seg_exact, Prob,
};
use mrpgen::primes::{enumerate_supported, hw_naf, naf, sample_rejection_prob, BucketConvention, CatalogFilter};
use mrpgen::sampling::{compute_threshold, GenParams};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Distribution of the number of accepted words, built one word at a time.
fn acceptance_distribution(p_r: &BigRational, t: u32) -> Vec<BigRational> {
    let accept = BigRational::one() - p_r;
    let mut dist = vec![BigRational::one()];
    for _ in 0..t {
        let mut next = vec![BigRational::zero(); dist.len() + 1];
        for (k, p) in dist.iter().enumerate() {
            next[k] += p * p_r;
            next[k + 1] += p * &accept;
        }
        dist = next;
    }
    dist
}

#[test]
fn p_seg_matches_word_by_word_dp() {
    for p_r in [ratio(0, 1), ratio(1, 3), ratio(3655, 100000), ratio(25305, 100000), ratio(1, 1)] {
        let dist = acceptance_distribution(&p_r, 42);
        for len in [0u32, 1, 4, 8, 16, 32, 41, 42] {
            let success: BigRational = dist[len as usize..].iter().sum();
            let failure: BigRational = dist[..len as usize].iter().sum();
            let (s, f) = p_seg_exact(&p_r, 42, len).unwrap();
            assert_eq!(s, success, "p_r = {p_r}, len = {len}");
            assert_eq!(f, failure, "p_r = {p_r}, len = {len}");
        }
    }
}

#[test]
fn p_seg_reference_value() {
    // Exact rational sum evaluated to 40 digits outside this crate.
    let p = p_seg(&ratio(3655, 100000), 42, 32).unwrap();
    let expected_failure = 2.323_993_425_038_31e-7;
    assert!((p.failure() / expected_failure - 1.0).abs() < 1e-13, "{}", p.failure());
    assert!((p.success() - 0.999_999_767_600_657_5).abs() < 1e-16);
}

fn exact_complement_of_power(p: &BigRational, n: usize) -> f64 {
    let num = num_traits::pow(p.numer().clone(), n);
    let den = num_traits::pow(p.denom().clone(), n);
    BigRational::new_raw(&den - num, den).to_f64().unwrap()
}

fn rel_err(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn limb_power_keeps_ten_digits_of_the_complement() {
    let cases: [(BigRational, u64); 4] = [
        (BigRational::one() - ratio(1, 1 << 20), 2048),
        (BigRational::one() - ratio(1, 1_000_000_000), 16384),
        (BigRational::one() - ratio(1, 1_000_000_000), 2048),
        (ratio(9, 10), 64),
    ];
    for (p, n) in cases {
        let complement = BigRational::one() - &p;
        let prob = Prob::from_parts(p.to_f64().unwrap(), complement.to_f64().unwrap());
        let fast = p_limb(prob, n).failure();
        let exact = exact_complement_of_power(&p, n as usize);
        assert!(rel_err(fast, exact) < 1e-10, "p = {p}, n = {n}: {fast} vs {exact}");
    }
    // frozen: 1 - (1 - 2^-20)^2048
    let p = Prob::from_parts(1.0 - 2f64.powi(-20), 2f64.powi(-20));
    assert!(rel_err(p_limb(p, 2048).failure(), 0.001_951_219_822_030_478_3) < 1e-12);
}

#[test]
fn mrp_bound_composes_powers() {
    let p = BigRational::one() - ratio(1, 1_000_000_000);
    let prob = Prob::from_parts(p.to_f64().unwrap(), 1e-9);
    let two_step = p_mrp_lower_bound(p_limb(prob, 256), 8).failure();
    let exact = exact_complement_of_power(&p, 2048);
    assert!(rel_err(two_step, exact) < 1e-10);
}

#[test]
fn threshold_matches_brute_force() {
    for w in [8u32, 16] {
        let span = 1u64 << w;
        for q in 2..span {
            // largest multiple of q not exceeding 2^w, found by stepping
            let mut m = 0;
            while m + q <= span {
                m += q;
            }
            assert_eq!(compute_threshold(q, w).unwrap(), m, "q = {q}, w = {w}");
        }
    }
}

#[test]
fn naf_of_786433_by_exhaustive_search() {
    // Enumerate all signed-digit vectors of weight <= 3 over 22 positions and
    // keep those that are non-adjacent and sum to 786433.
    let target = 786433i64;
    let mut hits = Vec::new();
    for a in 0..22 {
        for b in a + 2..22 {
            for c in b + 2..22 {
                for signs in 0..8 {
                    let s = |k: i64| if signs >> k & 1 == 1 { -1 } else { 1 };
                    let v = s(0) * (1i64 << a) + s(1) * (1i64 << b) + s(2) * (1i64 << c);
                    if v == target {
                        hits.push(vec![(a, s(0)), (b, s(1)), (c, s(2))]);
                    }
                }
            }
        }
    }
    assert_eq!(hits, vec![vec![(0, 1), (18, -1), (20, 1)]]);
    let digits = naf(786433);
    for (pos, sign) in &hits[0] {
        assert_eq!(digits[*pos] as i64, *sign);
    }
    assert_eq!(hw_naf(786433), 3);
}

#[test]
fn rejection_prob_is_exact_division() {
    let p = sample_rejection_prob(786433, 32).unwrap();
    let big = BigInt::one() << 32u32;
    let rem = &big - (&big / 786433) * 786433;
    assert_eq!(p.to_ratio(), BigRational::new(rem, big));
}

#[test]
fn catalog_matches_brute_force_on_a_small_range() {
    let filter = CatalogFilter {
        ring_dim: 64,
        w: 16,
        hw_naf_max: 4,
        p_r_max: ratio(1, 5),
        q_min_exclusive: 1000,
        bucket: BucketConvention::Ceil,
    };
    let cat = enumerate_supported(&filter).unwrap();
    let is_prime = |n: u64| n > 1 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    let brute: Vec<u64> = (1001..1 << 16)
        .filter(|&q| q % 128 == 1 && is_prime(q) && hw_naf(q) <= 4)
        .filter(|&q| BigRational::new(((1u64 << 16) % q).into(), (1u64 << 16).into()) <= ratio(1, 5))
        .collect();
    let got: Vec<u64> = cat.records().iter().map(|r| r.q).collect();
    assert_eq!(got, brute);
    for r in cat.records() {
        assert!(r.bucket >= 1 && 1u64 << (r.bucket - 1) < r.q && r.q <= 1 << r.bucket);
    }
}

#[test]
fn chi_square_p_values() {
    // Reference tail probabilities from an independent statistics package.
    let synthetic = |k: usize, bins: usize| -> f64 {
        // residues in bin 0 inflated by k and bin 1 deflated by k over a
        // stratified base of m per bin: stat = 2 k^2 / m
        let m = 1000usize;
        let mut residues = Vec::new();
        for b in 0..bins {
            let count = match b {
                0 => m + k,
                1 => m - k,
                _ => m,
            };
            residues.extend(std::iter::repeat_n(b as u32, count));
        }
        let r = chi_square_residues(&residues, bins as u32, bins).unwrap();
        assert!((r.statistic - 2.0 * (k * k) as f64 / m as f64).abs() < 1e-9);
        r.p_value
    };
    // stat = 2 * 178^2 / 1000 = 63.368 for 64 bins; 2 * 124^2 / 1000 = 30.752 for 11 bins
    let p = synthetic(178, 64);
    assert!((p - 0.4632982644086334).abs() < 1e-9, "{p}");
    let p = synthetic(124, 11);
    assert!((p - 0.0006446796174197487).abs() < 1e-12, "{p}");
}

#[test]
fn contrived_profile_failure_matches_reference() {
    // q = 3693168641, N = 256, len = 32: 1 - p_seg^8 from an exact rational sum.
    let params = GenParams::desk(256, 32, vec![3693168641]);
    let p = p_mrp_exact(&params).unwrap();
    assert!((p.failure() - 0.1957979181991082).abs() < 1e-13, "{}", p.failure());
}
