//! NTT-friendly prime moduli: NAF weight, primality, and the supported set.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{parse_decimal, to_f64};

/// Canonical non-adjacent form of `n`, least significant digit first.
pub fn naf(n: u64) -> Vec<i8> {
    let mut digits = Vec::new();
    // u128 so that the carry out of bit 63 is representable.
    let mut rest = n as u128;
    while rest > 0 {
        let digit = match rest & 3 {
            1 => 1,
            3 => -1,
            _ => 0,
        };
        if digit == 1 {
            rest -= 1;
        } else if digit == -1 {
            rest += 1;
        }
        digits.push(digit);
        rest >>= 1;
    }
    digits
}

/// Number of nonzero digits in the NAF of `n`.
pub fn hw_naf(n: u64) -> u32 {
    naf(n).iter().filter(|&&d| d != 0).count() as u32
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
///
/// The first twelve primes as witnesses are a complete set below 3.3 * 10^24.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `q` is prime and `q = 1 (mod 2N)`.
pub fn is_ntt_friendly(q: u64, ring_dim: u64) -> bool {
    debug_assert!(ring_dim.is_power_of_two());
    q % (2 * ring_dim) == 1 && is_prime(q)
}

/// Per-word rejection probability `(2^w mod q) / 2^w`, kept as the exact
/// numerator over an implicit power-of-two denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RejectionProb {
    pub numer: u64,
    pub w: u32,
}

impl RejectionProb {
    pub fn denom(&self) -> u128 {
        1u128 << self.w
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer), BigInt::from(self.denom()))
    }

    pub fn to_f64(&self) -> f64 {
        self.numer as f64 / self.denom() as f64
    }

    pub fn le(&self, bound: &BigRational) -> bool {
        &self.to_ratio() <= bound
    }
}

pub fn sample_rejection_prob(q: u64, w: u32) -> Result<RejectionProb> {
    if !(1..=63).contains(&w) || q <= 1 || q >= 1u64 << w {
        return Err(Error::invalid(format!(
            "modulus {q} must satisfy 1 < q < 2^{w}"
        )));
    }
    Ok(RejectionProb {
        numer: ((1u128 << w) % q as u128) as u64,
        w,
    })
}

/// How a modulus is assigned to a size bucket.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BucketConvention {
    /// Nearest integer to log2 q: `2^(b - 1/2) < q < 2^(b + 1/2)`.
    #[default]
    Round,
    /// `ceil(log2 q)`: `2^(b-1) < q <= 2^b`.
    Ceil,
    /// Bit length, `floor(log2 q) + 1`.
    BitLength,
}

impl BucketConvention {
    pub const ALL: [BucketConvention; 3] = [
        BucketConvention::Round,
        BucketConvention::Ceil,
        BucketConvention::BitLength,
    ];

    pub fn bucket(self, q: u64) -> u32 {
        assert!(q >= 1);
        match self {
            BucketConvention::Ceil => 64 - (q - 1).leading_zeros(),
            BucketConvention::BitLength => 64 - q.leading_zeros(),
            BucketConvention::Round => {
                // Smallest b with q^2 < 2^(2b+1); q is never an odd power of sqrt 2.
                let sq = q as u128 * q as u128;
                let floor = 63 - q.leading_zeros();
                if sq < 1u128 << (2 * floor + 1) {
                    floor
                } else {
                    floor + 1
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BucketConvention::Round => "round",
            BucketConvention::Ceil => "ceil",
            BucketConvention::BitLength => "bit-length",
        }
    }
}

impl fmt::Display for BucketConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogFilter {
    pub ring_dim: u64,
    pub w: u32,
    pub hw_naf_max: u32,
    pub p_r_max: BigRational,
    pub q_min_exclusive: u64,
    pub bucket: BucketConvention,
}

impl CatalogFilter {
    /// N = 2^16, w = 32, HW_NAF <= 5, q > 2^19.
    pub fn reference(p_r_max: BigRational) -> Self {
        CatalogFilter {
            ring_dim: 1 << 16,
            w: 32,
            hw_naf_max: 5,
            p_r_max,
            q_min_exclusive: 1 << 19,
            bucket: BucketConvention::Round,
        }
    }

    pub fn reference_decimal(p_r_max: &str) -> Result<Self> {
        Ok(Self::reference(parse_decimal(p_r_max)?))
    }

    pub fn validate(&self) -> Result<()> {
        if !self.ring_dim.is_power_of_two() || self.ring_dim < 2 {
            return Err(Error::validation("ring_dim", "must be a power of two >= 2"));
        }
        if !(2..=63).contains(&self.w) {
            return Err(Error::validation("w", "must be in 2..=63"));
        }
        Ok(())
    }

    fn admits(&self, q: u64) -> Option<PrimeRecord> {
        if q <= self.q_min_exclusive || q >= 1u64 << self.w {
            return None;
        }
        let hw = hw_naf(q);
        if hw > self.hw_naf_max {
            return None;
        }
        let p_r = sample_rejection_prob(q, self.w).ok()?;
        if !p_r.le(&self.p_r_max) || !is_ntt_friendly(q, self.ring_dim) {
            return None;
        }
        Some(PrimeRecord {
            q,
            bucket: self.bucket.bucket(q),
            hw_naf: hw,
            p_r,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub q: u64,
    pub bucket: u32,
    pub hw_naf: u32,
    pub p_r: RejectionProb,
}

#[derive(Clone, Debug)]
pub struct ModuliCatalog {
    filter: CatalogFilter,
    records: Vec<PrimeRecord>,
}

impl ModuliCatalog {
    pub fn filter(&self) -> &CatalogFilter {
        &self.filter
    }

    pub fn records(&self) -> &[PrimeRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn contains(&self, q: u64) -> bool {
        self.records.binary_search_by_key(&q, |r| r.q).is_ok()
    }

    /// Record with the largest rejection probability.
    pub fn worst(&self) -> Option<&PrimeRecord> {
        self.records.iter().max_by_key(|r| r.p_r.numer)
    }

    /// Sub-catalog with a tighter rejection-probability bound.
    pub fn restrict(&self, p_r_max: &BigRational) -> ModuliCatalog {
        let mut filter = self.filter.clone();
        filter.p_r_max = p_r_max.clone();
        let records = self
            .records
            .iter()
            .filter(|r| r.p_r.le(p_r_max))
            .copied()
            .collect();
        ModuliCatalog { filter, records }
    }

    pub fn histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for r in &self.records {
            *h.entry(r.bucket).or_insert(0) += 1;
        }
        h
    }

    pub fn histogram_with(&self, convention: BucketConvention) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for r in &self.records {
            *h.entry(convention.bucket(r.q)).or_insert(0) += 1;
        }
        h
    }

    /// `q,bucket,hw_naf,p_r_num,p_r_den` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,bucket,hw_naf,p_r_num,p_r_den\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.q,
                r.bucket,
                r.hw_naf,
                r.p_r.numer,
                r.p_r.denom()
            ));
        }
        out
    }

    pub fn max_p_r(&self) -> f64 {
        self.worst().map_or(0.0, |r| r.p_r.to_f64())
    }
}

fn candidate_range(filter: &CatalogFilter) -> (u64, u64) {
    let step = 2 * filter.ring_dim;
    let upper = 1u64 << filter.w;
    let k_lo = 1.max(filter.q_min_exclusive.saturating_sub(1) / step);
    let k_hi = (upper - 2) / step;
    (k_lo, k_hi)
}

/// All primes `q = k * 2N + 1` with `q_min_exclusive < q < 2^w` that pass the
/// NAF-weight and rejection-probability bounds, ascending.
pub fn enumerate_supported(filter: &CatalogFilter) -> Result<ModuliCatalog> {
    enumerate_supported_threads(filter, 1)
}

pub fn enumerate_supported_threads(filter: &CatalogFilter, threads: usize) -> Result<ModuliCatalog> {
    filter.validate()?;
    let step = 2 * filter.ring_dim;
    let (k_lo, k_hi) = candidate_range(filter);
    let scan = |lo: u64, hi: u64| -> Vec<PrimeRecord> {
        (lo..=hi).filter_map(|k| filter.admits(k * step + 1)).collect()
    };
    let records = if threads <= 1 || k_hi < k_lo {
        if k_hi < k_lo {
            Vec::new()
        } else {
            scan(k_lo, k_hi)
        }
    } else {
        let total = k_hi - k_lo + 1;
        let chunk = total.div_ceil(threads as u64);
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads as u64)
                .map(|i| k_lo + i * chunk)
                .take_while(|&lo| lo <= k_hi)
                .map(|lo| {
                    let hi = (lo + chunk - 1).min(k_hi);
                    s.spawn(move || scan(lo, hi))
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("enumeration worker panicked"))
                .collect()
        })
    };
    Ok(ModuliCatalog {
        filter: filter.clone(),
        records,
    })
}

/// Float view of a catalog's rejection bound, for display.
pub fn p_r_max_f64(filter: &CatalogFilter) -> f64 {
    to_f64(&filter.p_r_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naf_value(d: &[i8]) -> i128 {
        d.iter()
            .enumerate()
            .map(|(i, &x)| x as i128 * (1i128 << i))
            .sum()
    }

    fn naf_is_valid(d: &[i8]) -> bool {
        d.windows(2).all(|w| w[0] == 0 || w[1] == 0) && d.last().is_none_or(|&x| x != 0)
    }

    #[test]
    fn naf_examples() {
        assert!(naf(0).is_empty());
        assert_eq!(naf(7), vec![-1, 0, 0, 1]);
        let d = naf(786433);
        let nz: Vec<(usize, i8)> = d
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (i, x))
            .collect();
        assert_eq!(nz, vec![(0, 1), (18, -1), (20, 1)]);
        assert_eq!(naf_value(&d), 786433);
        assert!(naf_is_valid(&d));
    }

    #[test]
    fn naf_handles_top_bit() {
        let d = naf(u64::MAX);
        assert_eq!(naf_value(&d), u64::MAX as i128);
        assert_eq!(d.len(), 65);
        assert_eq!(hw_naf(u64::MAX), 2);
    }

    #[test]
    fn hw_naf_examples() {
        for k in 0..64 {
            assert_eq!(hw_naf(1 << k), 1);
        }
        assert_eq!(hw_naf(0), 0);
        assert_eq!(hw_naf(7), 2);
        assert_eq!(hw_naf(786433), 3);
    }

    // Minimal signed-binary weight by recursion; NAF is known to attain it.
    fn min_signed_weight(n: u64, memo: &mut std::collections::HashMap<u64, u32>) -> u32 {
        if n <= 1 {
            return n as u32;
        }
        if let Some(&w) = memo.get(&n) {
            return w;
        }
        let w = if n.is_multiple_of(2) {
            min_signed_weight(n / 2, memo)
        } else {
            1 + min_signed_weight((n - 1) / 2, memo).min(min_signed_weight(n.div_ceil(2), memo))
        };
        memo.insert(n, w);
        w
    }

    #[test]
    fn hw_naf_is_minimal_signed_weight() {
        let mut memo = std::collections::HashMap::new();
        for n in 0..5000u64 {
            assert_eq!(hw_naf(n), min_signed_weight(n, &mut memo), "n = {n}");
            let d = naf(n);
            assert_eq!(naf_value(&d), n as i128);
            assert!(naf_is_valid(&d));
        }
    }

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
        for n in [4294967291u64, 4294967295, 2148794369, 2147614721, 3215031751] {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
        // strong pseudoprime to bases 2..=37 would need > 3.3e24; spot-check large known primes.
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(18446744073709551555));
    }

    #[test]
    fn ntt_friendly_examples() {
        assert!(is_ntt_friendly(17, 8));
        assert!(!is_ntt_friendly(41, 8));
        assert!(!is_ntt_friendly(49, 8)); // 49 = 3 * 16 + 1 = 7^2
        assert!(is_ntt_friendly(786433, 1 << 16));
    }

    #[test]
    fn rejection_prob_examples() {
        let p = sample_rejection_prob(3, 32).unwrap();
        assert_eq!((p.numer, p.denom()), (1, 1 << 32));
        let p = sample_rejection_prob(786433, 32).unwrap();
        assert_eq!(p.numer, (1u64 << 32) % 786433);
        let q = (1u64 << 31) + 11;
        let p = sample_rejection_prob(q, 32).unwrap();
        assert_eq!(p.numer, (1 << 31) - 11);
        assert!(p.to_f64() < 0.5);
        assert!(sample_rejection_prob(1, 32).is_err());
        assert!(sample_rejection_prob(1 << 32, 32).is_err());
    }

    #[test]
    fn bucket_conventions() {
        let q = (1u64 << 19) + 1;
        assert_eq!(BucketConvention::Ceil.bucket(q), 20);
        assert_eq!(BucketConvention::BitLength.bucket(q), 20);
        assert_eq!(BucketConvention::Round.bucket(q), 19);
        assert_eq!(BucketConvention::Ceil.bucket(1 << 20), 20);
        assert_eq!(BucketConvention::BitLength.bucket(1 << 20), 21);
        // sqrt(2) * 2^20 ~ 1482910.4
        assert_eq!(BucketConvention::Round.bucket(1482910), 20);
        assert_eq!(BucketConvention::Round.bucket(1482911), 21);
        assert_eq!(BucketConvention::Round.bucket(u32::MAX as u64), 32);
    }

    #[test]
    fn tiny_catalog_matches_brute_force() {
        let filter = CatalogFilter {
            ring_dim: 8,
            w: 7,
            hw_naf_max: 7,
            p_r_max: BigRational::new(1.into(), 2.into()),
            q_min_exclusive: 1,
            bucket: BucketConvention::Ceil,
        };
        let cat = enumerate_supported(&filter).unwrap();
        let brute: Vec<u64> = (2..128u64)
            .filter(|&q| trial_division(q) && q % 16 == 1)
            .collect();
        let got: Vec<u64> = cat.records().iter().map(|r| r.q).collect();
        assert_eq!(got, brute);
        assert_eq!(got, vec![17, 97, 113]);
        assert_eq!(cat.histogram().values().sum::<usize>(), 3);
    }

    #[test]
    fn empty_catalog_has_empty_histogram() {
        let mut filter = CatalogFilter::reference_decimal("0").unwrap();
        filter.w = 20;
        let cat = enumerate_supported(&filter).unwrap();
        assert!(cat.is_empty());
        assert!(cat.histogram().is_empty());
    }

    #[test]
    fn threaded_enumeration_is_identical() {
        let mut filter = CatalogFilter::reference_decimal("0.5").unwrap();
        filter.ring_dim = 1 << 10;
        filter.w = 24;
        filter.q_min_exclusive = 1 << 12;
        let a = enumerate_supported(&filter).unwrap();
        let b = enumerate_supported_threads(&filter, 7).unwrap();
        assert_eq!(a.records(), b.records());
        assert!(!a.is_empty());
    }
}
