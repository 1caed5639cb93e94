//! Three operations for the static page in `www/`. Each one returns a JSON
//! string so the page needs no generated TypeScript types. The `*_json`
//! functions hold the logic and are plain Rust so they can be tested natively.

use mrpgen::analytics::{mrp_failure_bound, solve_p_r_max};
use mrpgen::primes::{enumerate_supported, hw_naf, sample_rejection_prob, BucketConvention, CatalogFilter};
use mrpgen::rational::parse_decimal;
use mrpgen::sampling::compute_threshold;
use mrpgen::xof::{encode_domain_input, split_words, xof_expand, Backend, RATE_BITS};
use mrpgen::Seed;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const WORD_BITS: u32 = 32;

fn js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

/// Histogram of supported moduli for `N = 2^log_n`, 32-bit words.
#[wasm_bindgen]
pub fn catalog(log_n: u32, hw_naf_max: u32, p_r_max: &str, qmin_bits: u32) -> Result<String, JsValue> {
    js(catalog_json(log_n, hw_naf_max, p_r_max, qmin_bits))
}

pub fn catalog_json(log_n: u32, hw_naf_max: u32, p_r_max: &str, qmin_bits: u32) -> Result<Value, String> {
    if !(1..=20).contains(&log_n) || qmin_bits >= WORD_BITS {
        return Err("need 1 <= log2 N <= 20 and q_min bits below 32".into());
    }
    let filter = CatalogFilter {
        ring_dim: 1 << log_n,
        w: WORD_BITS,
        hw_naf_max,
        p_r_max: parse_decimal(p_r_max).map_err(|e| e.to_string())?,
        q_min_exclusive: 1 << qmin_bits,
        bucket: BucketConvention::Round,
    };
    let cat = enumerate_supported(&filter).map_err(|e| e.to_string())?;
    let hist: Vec<Value> = cat
        .histogram()
        .into_iter()
        .map(|(b, c)| json!({"bucket": b, "count": c}))
        .collect();
    let sample: Vec<Value> = cat
        .records()
        .iter()
        .rev()
        .take(12)
        .map(|r| json!({"q": r.q, "hw_naf": r.hw_naf, "p_r": r.p_r.to_f64()}))
        .collect();
    Ok(json!({
        "count": cat.len(),
        "max_p_r": cat.max_p_r(),
        "histogram": hist,
        "largest": sample,
    }))
}

/// MRP failure bound as a function of the worst rejection probability.
#[wasm_bindgen]
pub fn failure_curve(len: u32, log_n: u32, limbs: u32, max_fail: f64, points: u32) -> Result<String, JsValue> {
    js(failure_curve_json(len, log_n, limbs, max_fail, points))
}

pub fn failure_curve_json(len: u32, log_n: u32, limbs: u32, max_fail: f64, points: u32) -> Result<Value, String> {
    let t = RATE_BITS / WORD_BITS;
    if len == 0 || len > t || log_n > 20 || !(1u64 << log_n).is_multiple_of(len as u64) || !(2..=400).contains(&points) {
        return Err(format!("need len in 1..={t} dividing N, and 2..=400 points"));
    }
    let n_seg = (1u64 << log_n) / len as u64;
    let curve = (0..points)
        .map(|i| {
            // evenly spaced in p_r over [0, 0.5)
            let num = i as i64;
            let den = 2 * points as i64;
            let p_r = num_ratio(num, den);
            mrp_failure_bound(&p_r, t, len, n_seg, limbs as u64)
                .map(|p| json!([num as f64 / den as f64, p.failure()]))
                .map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let threshold = solve_p_r_max(t, len, n_seg, limbs as u64, max_fail).ok();
    Ok(json!({"t": t, "n_seg": n_seg, "curve": curve, "p_r_max": threshold}))
}

fn num_ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Every word of one XOF block with its accept flag, in scan order.
#[wasm_bindgen]
pub fn segment(seed_hex: &str, q: u32, id_seg: u16, len: u32, k12: bool) -> Result<String, JsValue> {
    js(segment_json(seed_hex, q, id_seg, len, k12))
}

pub fn segment_json(seed_hex: &str, q: u32, id_seg: u16, len: u32, k12: bool) -> Result<Value, String> {
    let seed = Seed::from_hex(seed_hex.trim()).map_err(|e| e.to_string())?;
    let thresh = compute_threshold(q as u64, WORD_BITS).map_err(|e| e.to_string())?;
    let backend = if k12 { Backend::KangarooTwelve } else { Backend::Shake128 };
    let block = xof_expand(backend, &encode_domain_input(&seed, q, id_seg), RATE_BITS).map_err(|e| e.to_string())?;
    let mut taken = 0;
    let words: Vec<Value> = split_words(&block, WORD_BITS)
        .into_iter()
        .map(|w| {
            let accepted = (w as u64) < thresh;
            let used = accepted && taken < len;
            taken += used as u32;
            json!({"word": w, "accepted": accepted, "used": used})
        })
        .collect();
    let p_r = sample_rejection_prob(q as u64, WORD_BITS).map_err(|e| e.to_string())?;
    Ok(json!({
        "threshold": thresh,
        "p_r": p_r.to_f64(),
        "hw_naf": hw_naf(q as u64),
        "required": len,
        "accepted": taken,
        "complete": taken == len,
        "words": words,
    }))
}
