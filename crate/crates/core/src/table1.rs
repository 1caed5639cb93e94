//! Reproduction of the reference supported-moduli statistics for
//! N = 2^16, w = 32, HW_NAF <= 5, q > 2^19.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::analytics::{fit_limb_count, mrp_failure_bound, solve_p_r_max, LimbCountFit};
use crate::error::Result;
use crate::primes::{enumerate_supported_threads, BucketConvention, CatalogFilter, ModuliCatalog};
use crate::rational::parse_decimal;

pub const FIRST_BUCKET: u32 = 20;
pub const LAST_BUCKET: u32 = 32;
pub const WORDS_PER_BLOCK: u32 = 42;
pub const RING_DIM: u64 = 1 << 16;
pub const MAX_FAIL: f64 = 0.03;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceRow {
    pub p_r_max: &'static str,
    pub size: usize,
    /// Counts for buckets 20..=32.
    pub histogram: [usize; 13],
    pub len: u32,
    /// Published MRP failure bound, in percent.
    pub failure_pct: f64,
}

pub const REFERENCE_ROWS: [ReferenceRow; 4] = [
    ReferenceRow {
        p_r_max: "0.03655",
        size: 277,
        histogram: [2, 1, 1, 8, 15, 18, 26, 51, 39, 37, 20, 27, 32],
        len: 32,
        failure_pct: 3.00,
    },
    ReferenceRow {
        p_r_max: "0.25305",
        size: 526,
        histogram: [2, 1, 1, 8, 15, 18, 26, 52, 57, 87, 114, 68, 77],
        len: 16,
        failure_pct: 3.00,
    },
    ReferenceRow {
        p_r_max: "0.42359",
        size: 562,
        histogram: [2, 1, 1, 8, 15, 18, 26, 52, 57, 87, 115, 98, 82],
        len: 8,
        failure_pct: 3.00,
    },
    ReferenceRow {
        p_r_max: "0.5",
        size: 625,
        histogram: [2, 1, 1, 8, 15, 18, 26, 52, 57, 87, 115, 161, 82],
        len: 4,
        failure_pct: 0.29,
    },
];

/// Bucket counts over `FIRST_BUCKET..=LAST_BUCKET`, plus anything outside.
pub fn bucket_vector(hist: &BTreeMap<u32, usize>) -> (Vec<usize>, usize) {
    let inside = (FIRST_BUCKET..=LAST_BUCKET)
        .map(|b| hist.get(&b).copied().unwrap_or(0))
        .collect();
    let outside = hist
        .iter()
        .filter(|(b, _)| !(FIRST_BUCKET..=LAST_BUCKET).contains(*b))
        .map(|(_, c)| c)
        .sum();
    (inside, outside)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConventionResult {
    pub convention: BucketConvention,
    pub histogram: Vec<usize>,
    pub outside: usize,
    pub deltas: Vec<i64>,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowReproduction {
    pub reference: ReferenceRow,
    pub size: usize,
    pub size_matches: bool,
    /// Result under the default bucket convention first, then the others.
    pub conventions: Vec<ConventionResult>,
    pub max_p_r: f64,
}

impl RowReproduction {
    pub fn histogram_matches(&self) -> bool {
        self.conventions[0].matches
    }
}

fn row_for(catalog: &ModuliCatalog, reference: ReferenceRow) -> Result<RowReproduction> {
    let bound: BigRational = parse_decimal(reference.p_r_max)?;
    let sub = catalog.restrict(&bound);
    let default = sub.filter().bucket;
    let order = std::iter::once(default).chain(BucketConvention::ALL.into_iter().filter(|&c| c != default));
    let conventions = order
        .map(|convention| {
            let (histogram, outside) = bucket_vector(&sub.histogram_with(convention));
            let deltas: Vec<i64> = histogram
                .iter()
                .zip(reference.histogram)
                .map(|(&got, want)| got as i64 - want as i64)
                .collect();
            let matches = outside == 0 && deltas.iter().all(|&d| d == 0);
            ConventionResult {
                convention,
                histogram,
                outside,
                deltas,
                matches,
            }
        })
        .collect();
    Ok(RowReproduction {
        reference,
        size: sub.len(),
        size_matches: sub.len() == reference.size,
        conventions,
        max_p_r: sub.max_p_r(),
    })
}

/// Enumerates the widest reference catalog once and derives every row.
pub fn reproduce_catalog_rows(threads: usize) -> Result<(ModuliCatalog, Vec<RowReproduction>)> {
    let catalog = enumerate_supported_threads(&CatalogFilter::reference_decimal("0.5")?, threads)?;
    let rows = REFERENCE_ROWS
        .iter()
        .map(|&r| row_for(&catalog, r))
        .collect::<Result<Vec<_>>>()?;
    Ok((catalog, rows))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdReproduction {
    pub fit: LimbCountFit,
    /// `(len, reference, solved)` for the rows that were fitted.
    pub rows: Vec<(u32, f64, f64)>,
    /// MRP failure bound for the last row's `len` at the worst supported p_r.
    pub last_row_failure: f64,
    pub last_row_worst_p_r: f64,
}

/// Fits the limb count to the first three rows' thresholds and checks the
/// last row's failure bound with it.
pub fn reproduce_thresholds(catalog: &ModuliCatalog, max_limbs: u64, tolerance: f64) -> Result<ThresholdReproduction> {
    let fitted: Vec<(u32, f64)> = REFERENCE_ROWS[..3]
        .iter()
        .map(|r| (r.len, r.p_r_max.parse::<f64>().expect("reference decimal")))
        .collect();
    let fit = fit_limb_count(&fitted, WORDS_PER_BLOCK, RING_DIM, MAX_FAIL, max_limbs, tolerance)?;
    let rows = fitted
        .iter()
        .zip(&fit.deviations)
        .map(|(&(len, reference), dev)| (len, reference, reference + dev))
        .collect();
    let last = REFERENCE_ROWS[3];
    let worst = catalog
        .restrict(&parse_decimal(last.p_r_max)?)
        .worst()
        .map(|r| r.p_r)
        .expect("non-empty reference catalog");
    let failure = mrp_failure_bound(
        &worst.to_ratio(),
        WORDS_PER_BLOCK,
        last.len,
        RING_DIM / last.len as u64,
        fit.limbs,
    )?
    .failure();
    Ok(ThresholdReproduction {
        fit,
        rows,
        last_row_failure: failure,
        last_row_worst_p_r: worst.to_f64(),
    })
}

/// Threshold for one row with a given limb count.
pub fn solve_row(len: u32, limbs: u64) -> Result<f64> {
    solve_p_r_max(WORDS_PER_BLOCK, len, RING_DIM / len as u64, limbs, MAX_FAIL)
}
