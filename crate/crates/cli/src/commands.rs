use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use mrpgen::analytics::{chi_square_uniformity, p_mrp_exact, seed_space_bits, solve_p_r_max, SuccessModel};
use mrpgen::cost::{cost_report, CostParams, FEMTO, TERA};
use mrpgen::mrp_io::{decode_mrp, encode_mrp};
use mrpgen::params_file;
use mrpgen::primes::{enumerate_supported_threads, BucketConvention, CatalogFilter};
use mrpgen::rational::parse_decimal;
use mrpgen::sampling::{
    client_generate_with_retry, generate_limb, generate_mrp, generate_segment, GenParams, MultiResiduePolynomial,
};
use mrpgen::table1::{self, FIRST_BUCKET, LAST_BUCKET};
use mrpgen::xof::SEED_BYTES;
use mrpgen::Seed;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Value};

use crate::report::{bytes_digest, coeff_digest, Envelope, InputDigest};
use crate::{Command, Failure, GlobalOpts};

/// Coefficients shown in full when a report previews a limb.
const PREVIEW: usize = 8;

pub(crate) struct Done {
    pub envelope: Envelope,
    /// Set when the report is complete but the outcome is a domain failure.
    pub failure: Option<Failure>,
}

fn ok(command: &'static str, digest: InputDigest, payload: Value, text: String) -> Result<Done, Failure> {
    Ok(Done {
        envelope: Envelope { command, input_digest: digest.finish(), payload, text },
        failure: None,
    })
}

fn threads(global: &GlobalOpts) -> usize {
    global
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1)
}

pub(crate) fn execute(command: Command, global: &GlobalOpts) -> Result<Done, Failure> {
    match command {
        Command::GenMrp(a) => gen_mrp(a),
        Command::GenLimb(a) => gen_limb(a),
        Command::GenSeg(a) => gen_seg(a),
        Command::RetryGen(a) => retry_gen(a),
        Command::Verify(a) => verify(a),
        Command::EnumPrimes(a) => enum_primes(a, threads(global)),
        Command::Table1 => table1_report(threads(global)),
        Command::FitTable1(a) => fit_table1(a, threads(global)),
        Command::Analyze(a) => analyze(a),
        Command::Stats(a) => stats(a),
        Command::Cost(a) => cost(a),
    }
}

/// Reads and validates a parameters file, feeding its bytes to the digest.
pub fn load_params(path: &Path, digest: &mut InputDigest) -> Result<GenParams, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))?;
    digest.bytes("params", &bytes);
    let (file, params) = params_file::load_params(path)?;
    if !matches!(file.layout.as_str(), "identity" | "reverse") {
        // a custom layout lives in its own file; its content matters too
        let layout = path.parent().unwrap_or(Path::new(".")).join(&file.layout);
        digest.bytes("layout", &std::fs::read(layout).map_err(mrpgen::Error::from)?);
    }
    Ok(params)
}

fn params_summary(p: &GenParams) -> Value {
    json!({
        "n": p.ring_dim,
        "w": p.w,
        "r": p.r,
        "len": p.len,
        "n_seg": p.n_seg,
        "base": p.base,
        "layout": format!("{:?}", p.layout.kind()).to_lowercase(),
        "backend": p.backend.name(),
    })
}

fn params_text(p: &GenParams) -> String {
    format!(
        "n = {}\nw = {}\nr = {}\nlen = {}\nn_seg = {}\nbase = {:?}\nlayout = {}\nbackend = {}\n",
        p.ring_dim,
        p.w,
        p.r,
        p.len,
        p.n_seg,
        p.base,
        format!("{:?}", p.layout.kind()).to_lowercase(),
        p.backend.name()
    )
}

fn limb_summaries(mrp: &MultiResiduePolynomial) -> Vec<Value> {
    mrp.limbs()
        .iter()
        .map(|l| {
            json!({
                "q": l.q,
                "coeff_digest": format!("sha3-256:{}", coeff_digest(&l.coeffs)),
                "head": &l.coeffs[..PREVIEW.min(l.coeffs.len())],
            })
        })
        .collect()
}

fn limb_lines(mrp: &MultiResiduePolynomial) -> String {
    let mut s = String::new();
    for l in mrp.limbs() {
        let _ = writeln!(
            s,
            "limb q={} digest=sha3-256:{} head={:?}",
            l.q,
            coeff_digest(&l.coeffs),
            &l.coeffs[..PREVIEW.min(l.coeffs.len())]
        );
    }
    s
}

fn write_file(path: &Path, data: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, data).map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))
}

#[derive(Args, Debug)]
pub struct GenMrpArgs {
    /// 72 hex characters.
    #[arg(long)]
    seed: Seed,
    #[arg(long)]
    params: PathBuf,
    /// Where to write the binary MRP.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn gen_mrp(a: GenMrpArgs) -> Result<Done, Failure> {
    let mut digest = InputDigest::new("gen-mrp");
    digest.field("seed", a.seed);
    let params = load_params(&a.params, &mut digest)?;
    let mrp = generate_mrp(&a.seed, &params)?;
    let bytes = encode_mrp(&mrp, &params)?;
    if let Some(out) = &a.out {
        write_file(out, &bytes)?;
    }
    let file_digest = bytes_digest(&bytes);
    let payload = json!({
        "seed": a.seed.to_hex(),
        "params": params_summary(&params),
        "mrp_digest": format!("sha3-256:{file_digest}"),
        "limbs": limb_summaries(&mrp),
    });
    let text = format!(
        "seed = {}\n{}mrp digest = sha3-256:{file_digest}\n{}",
        a.seed,
        params_text(&params),
        limb_lines(&mrp)
    );
    ok("gen-mrp", digest, payload, text)
}

#[derive(Args, Debug)]
pub struct GenLimbArgs {
    #[arg(long)]
    seed: Seed,
    #[arg(long)]
    q: u32,
    /// Parameters file; the default profile (N = 65536, len = 32) otherwise.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Write the coefficients, one decimal per line.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn gen_limb(a: GenLimbArgs) -> Result<Done, Failure> {
    let mut digest = InputDigest::new("gen-limb");
    digest.field("seed", a.seed).field("q", a.q);
    let mut params = match &a.params {
        Some(p) => load_params(p, &mut digest)?,
        None => GenParams::default_profile(vec![]),
    };
    if !params.base.contains(&a.q) {
        params.base.push(a.q);
    }
    params.validate()?;
    let limb = generate_limb(&a.seed, a.q, &params)?;
    if let Some(out) = &a.out {
        let mut s = String::with_capacity(limb.coeffs.len() * 11);
        for c in &limb.coeffs {
            let _ = writeln!(s, "{c}");
        }
        write_file(out, s.as_bytes())?;
    }
    let d = coeff_digest(&limb.coeffs);
    let head = &limb.coeffs[..PREVIEW.min(limb.coeffs.len())];
    let payload = json!({
        "seed": a.seed.to_hex(),
        "q": a.q,
        "n": limb.coeffs.len(),
        "coeff_digest": format!("sha3-256:{d}"),
        "head": head,
    });
    let text = format!(
        "seed = {}\nq = {}\nn = {}\ncoeff digest = sha3-256:{d}\nhead = {head:?}\n",
        a.seed,
        a.q,
        limb.coeffs.len()
    );
    ok("gen-limb", digest, payload, text)
}

#[derive(Args, Debug)]
pub struct GenSegArgs {
    #[arg(long)]
    seed: Seed,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    id: u16,
    #[arg(long)]
    params: Option<PathBuf>,
}

fn gen_seg(a: GenSegArgs) -> Result<Done, Failure> {
    let mut digest = InputDigest::new("gen-seg");
    digest.field("seed", a.seed).field("q", a.q).field("id", a.id);
    let mut params = match &a.params {
        Some(p) => load_params(p, &mut digest)?,
        None => GenParams::default_profile(vec![]),
    };
    if !params.base.contains(&a.q) {
        params.base.push(a.q);
    }
    params.validate()?;
    let seg = generate_segment(&a.seed, a.q, a.id, &params)?;
    let payload = json!({
        "seed": a.seed.to_hex(),
        "q": a.q,
        "id_seg": a.id,
        "required": seg.required,
        "accepted": seg.len(),
        "complete": seg.is_complete(),
        "values": seg.values,
    });
    let text = format!(
        "q = {}\nid_seg = {}\naccepted = {}/{}\nvalues = {:?}\n",
        a.q,
        a.id,
        seg.len(),
        seg.required,
        seg.values
    );
    let failure = (!seg.is_complete()).then(|| {
        Failure::from(mrpgen::Error::Generation(mrpgen::GenerationFailure {
            q: a.q,
            id_seg: a.id,
            accepted: seg.len(),
            required: seg.required,
        }))
    });
    let mut done = ok("gen-seg", digest, payload, text)?;
    done.failure = failure;
    Ok(done)
}

#[derive(Args, Debug)]
pub struct RetryGenArgs {
    #[arg(long)]
    params: PathBuf,
    #[arg(long, default_value_t = 16)]
    max_attempts: usize,
    /// Seeds are drawn from ChaCha20 keyed by this value, so runs replay.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn retry_gen(a: RetryGenArgs) -> Result<Done, Failure> {
    let mut digest = InputDigest::new("retry-gen");
    digest.field("max_attempts", a.max_attempts).field("rng_seed", a.rng_seed);
    let params = load_params(&a.params, &mut digest)?;
    let mut rng = ChaCha20Rng::seed_from_u64(a.rng_seed);
    let valid = client_generate_with_retry(&mut rng, &params, a.max_attempts)?;
    let bytes = encode_mrp(&valid.mrp, &params)?;
    if let Some(out) = &a.out {
        write_file(out, &bytes)?;
    }
    let model = p_mrp_exact(&params)?;
    let payload = json!({
        "rng": "chacha20",
        "rng_seed": a.rng_seed,
        "seed": valid.seed.to_hex(),
        "attempts": valid.attempts,
        "p_mrp": model.success(),
        "expected_attempts": 1.0 / model.success(),
        "mrp_digest": format!("sha3-256:{}", bytes_digest(&bytes)),
    });
    let text = format!(
        "seed = {}\nattempts = {}\np_mrp = {:.6}\nexpected attempts = {:.4}\nmrp digest = sha3-256:{}\n",
        valid.seed,
        valid.attempts,
        model.success(),
        1.0 / model.success(),
        bytes_digest(&bytes)
    );
    ok("retry-gen", digest, payload, text)
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    mrp: PathBuf,
    #[arg(long)]
    seed: Seed,
}

fn verify(a: VerifyArgs) -> Result<Done, Failure> {
    let mut digest = InputDigest::new("verify");
    let bytes = std::fs::read(&a.mrp).map_err(|e| Failure::usage("io", format!("{}: {e}", a.mrp.display())))?;
    digest.field("seed", a.seed).bytes("mrp", &bytes);
    let (params, stored) = decode_mrp(&bytes)?;
    let regenerated = generate_mrp(&a.seed, &params);
    let (mismatched, detail): (Vec<u32>, Option<String>) = match &regenerated {
        Ok(mrp) => (
            stored
                .limbs()
                .iter()
                .zip(mrp.limbs())
                .filter(|(s, r)| s != r)
                .map(|(s, _)| s.q)
                .collect(),
            None,
        ),
        Err(mrpgen::Error::Generation(g)) => (params.base.clone(), Some(g.to_string())),
        Err(_) => return Err(regenerated.expect_err("error arm").into()),
    };
    let matches = mismatched.is_empty();
    let payload = json!({
        "seed": a.seed.to_hex(),
        "params": params_summary(&params),
        "matches": matches,
        "mismatched_limbs": mismatched,
        "regeneration_failure": detail,
    });
    let mut text = format!("seed = {}\n{}", a.seed, params_text(&params));
    let _ = writeln!(text, "matches = {matches}");
    if !matches {
        let _ = writeln!(text, "mismatched limbs = {mismatched:?}");
    }
    let mut done = ok("verify", digest, payload, text)?;
    if !matches {
        done.failure = Some(Failure::domain(
            "verify-mismatch",
            match detail {
                Some(d) => format!("regeneration failed: {d}"),
                None => format!("limbs={mismatched:?}"),
            },
        ));
    }
    Ok(done)
}

#[derive(Args, Debug)]
pub struct EnumPrimesArgs {
    /// log2 of the ring dimension.
    #[arg(long, default_value_t = 16)]
    n: u32,
    #[arg(long, default_value_t = 32)]
    w: u32,
    #[arg(long, default_value_t = 5)]
    hwnaf_max: u32,
    /// Exact decimal upper bound on the rejection probability.
    #[arg(long, default_value = "0.5")]
    pr_max: String,
    /// Only moduli above 2^qmin-bits.
    #[arg(long, default_value_t = 19)]
    qmin_bits: u32,
    #[arg(long, default_value = "round")]
    bucket: String,
}

fn parse_bucket(name: &str) -> Result<BucketConvention, Failure> {
    BucketConvention::ALL
        .into_iter()
        .find(|c| c.name() == name)
        .ok_or_else(|| Failure::usage("invalid-argument", format!("unknown bucket convention `{name}`")))
}

fn enum_primes(a: EnumPrimesArgs, threads: usize) -> Result<Done, Failure> {
    if a.n > 30 || a.qmin_bits >= 64 {
        return Err(Failure::usage("invalid-argument", "n must be at most 30 and qmin-bits below 64"));
    }
    let mut digest = InputDigest::new("enum-primes");
    digest
        .field("n", a.n)
        .field("w", a.w)
        .field("hwnaf_max", a.hwnaf_max)
        .field("pr_max", &a.pr_max)
        .field("qmin_bits", a.qmin_bits)
        .field("bucket", &a.bucket);
    let filter = CatalogFilter {
        ring_dim: 1u64 << a.n,
        w: a.w,
        hw_naf_max: a.hwnaf_max,
        p_r_max: parse_decimal(&a.pr_max)?,
        q_min_exclusive: 1u64 << a.qmin_bits,
        bucket: parse_bucket(&a.bucket)?,
    };
    let catalog = enumerate_supported_threads(&filter, threads)?;
    let hist = catalog.histogram();
    let records: Vec<Value> = catalog
        .records()
        .iter()
        .map(|r| json!({"q": r.q, "bucket": r.bucket, "hw_naf": r.hw_naf, "p_r_num": r.p_r.numer, "p_r_den": r.p_r.denom().to_string()}))
        .collect();
    let payload = json!({
        "filter": {
            "n": 1u64 << a.n, "w": a.w, "hw_naf_max": a.hwnaf_max, "p_r_max": a.pr_max,
            "q_min_exclusive": 1u64 << a.qmin_bits, "bucket": filter.bucket.name(),
        },
        "count": catalog.len(),
        "max_p_r": catalog.max_p_r(),
        "histogram": hist.iter().map(|(b, c)| json!({"bucket": b, "count": c})).collect::<Vec<_>>(),
        "records": records,
    });
    let mut text = catalog.to_csv();
    let _ = writeln!(text, "# count: {}", catalog.len());
    let _ = writeln!(text, "# histogram ({} convention): bucket count", filter.bucket.name());
    for (b, c) in &hist {
        let _ = writeln!(text, "# {b} {c}");
    }
    ok("enum-primes", digest, payload, text)
}

fn table1_report(threads: usize) -> Result<Done, Failure> {
    let digest = InputDigest::new("table1");
    let (_, rows) = table1::reproduce_catalog_rows(threads)?;
    let mut text = format!("buckets {FIRST_BUCKET}..={LAST_BUCKET}\n");
    let mut all_match = true;
    let mut json_rows = Vec::new();
    for row in &rows {
        let good = row.size_matches && row.histogram_matches();
        all_match &= good;
        let _ = writeln!(
            text,
            "p_r_max {}: size {} (reference {}) len {} max p_r {:.5} {}",
            row.reference.p_r_max,
            row.size,
            row.reference.size,
            row.reference.len,
            row.max_p_r,
            if good { "MATCH" } else { "MISMATCH" }
        );
        let _ = writeln!(text, "  reference     {:?}", row.reference.histogram);
        for c in &row.conventions {
            let _ = writeln!(
                text,
                "  {:<13} {:?} outside={} deltas={:?}{}",
                c.convention.name(),
                c.histogram,
                c.outside,
                c.deltas,
                if c.matches { " match" } else { "" }
            );
        }
        json_rows.push(json!({
            "p_r_max": row.reference.p_r_max,
            "size": row.size,
            "reference_size": row.reference.size,
            "size_matches": row.size_matches,
            "len": row.reference.len,
            "max_p_r": row.max_p_r,
            "reference_histogram": row.reference.histogram,
            "conventions": row.conventions.iter().map(|c| json!({
                "convention": c.convention.name(),
                "histogram": c.histogram,
                "outside": c.outside,
                "deltas": c.deltas,
                "matches": c.matches,
            })).collect::<Vec<_>>(),
            "matches": good,
        }));
    }
    let payload = json!({"first_bucket": FIRST_BUCKET, "last_bucket": LAST_BUCKET, "rows": json_rows, "all_match": all_match});
    let mut done = ok("table1", digest, payload, text)?;
    if !all_match {
        done.failure = Some(Failure::domain("table1-mismatch", "see per-bucket deltas in the report"));
    }
    Ok(done)
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Largest limb count tried.
    #[arg(long, default_value_t = 200)]
    max_l: u64,
    #[arg(long, default_value_t = 0.0005)]
    tolerance: f64,
}

fn fit_table1(a: FitArgs, threads: usize) -> Result<Done, Failure> {
    let mut digest = InputDigest::new("fit-table1");
    digest.field("max_l", a.max_l).field("tolerance", a.tolerance);
    let catalog = enumerate_supported_threads(&CatalogFilter::reference_decimal("0.5")?, threads)?;
    let fit = table1::reproduce_thresholds(&catalog, a.max_l, a.tolerance)?;
    let mut text = format!(
        "L* = {}\nmax residual = {:.3e}\nwithin tolerance {} = {}\n",
        fit.fit.limbs, fit.fit.residual, a.tolerance, fit.fit.within_tolerance
    );
    for (len, reference, solved) in &fit.rows {
        let _ = writeln!(
            text,
            "len {len:>2}: reference {reference:.5} solved {solved:.6} residual {:+.3e}",
            solved - reference
        );
    }
    let _ = writeln!(
        text,
        "len {:>2}: worst p_r {:.8} failure bound {:.4}%",
        table1::REFERENCE_ROWS[3].len,
        fit.last_row_worst_p_r,
        100.0 * fit.last_row_failure
    );
    let payload = json!({
        "limbs": fit.fit.limbs,
        "residual": fit.fit.residual,
        "tolerance": a.tolerance,
        "within_tolerance": fit.fit.within_tolerance,
        "rows": fit.rows.iter().map(|(len, p, s)| json!({"len": len, "reference": p, "solved": s, "residual": s - p})).collect::<Vec<_>>(),
        "last_row": {
            "len": table1::REFERENCE_ROWS[3].len,
            "worst_p_r": fit.last_row_worst_p_r,
            "failure_bound": fit.last_row_failure,
        },
    });
    let mut done = ok("fit-table1", digest, payload, text)?;
    if !fit.fit.within_tolerance {
        done.failure = Some(Failure::domain(
            "no-fit",
            format!("best L={} residual={:.3e}", fit.fit.limbs, fit.fit.residual),
        ));
    }
    Ok(done)
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Words per XOF block.
    #[arg(long, default_value_t = 42)]
    t: u32,
    #[arg(long)]
    len: u32,
    #[arg(long)]
    nseg: u64,
    /// Number of limbs.
    #[arg(long = "L")]
    limbs: u64,
    /// Worst rejection probability, as an exact decimal.
    #[arg(long)]
    pr: String,
    /// Also solve for the largest p_r meeting this MRP failure target.
    #[arg(long, default_value_t = 0.03)]
    max_fail: f64,
}

fn analyze(a: AnalyzeArgs) -> Result<Done, Failure> {
    let mut digest = InputDigest::new("analyze");
    digest
        .field("t", a.t)
        .field("len", a.len)
        .field("nseg", a.nseg)
        .field("L", a.limbs)
        .field("pr", &a.pr)
        .field("max_fail", a.max_fail);
    let model = SuccessModel::new(a.t, a.len, a.nseg, a.limbs, parse_decimal(&a.pr)?)?;
    let (seg, limb, mrp) = (model.p_seg(), model.p_limb(), model.p_mrp_bound());
    let solved = solve_p_r_max(a.t, a.len, a.nseg, a.limbs, a.max_fail);
    let seed_bits = (mrp.success() > 0.0)
        .then(|| seed_space_bits((8 * SEED_BYTES) as u32, mrp.success()))
        .transpose()?;
    let payload = json!({
        "t": a.t, "len": a.len, "n_seg": a.nseg, "limbs": a.limbs, "p_r": a.pr,
        "p_seg": {"success": seg.success(), "failure": seg.failure()},
        "p_limb": {"success": limb.success(), "failure": limb.failure()},
        "p_mrp_bound": {"success": mrp.success(), "failure": mrp.failure()},
        "seed_space_bits": seed_bits,
        "max_fail": a.max_fail,
        "p_r_max_for_max_fail": solved.as_ref().ok(),
    });
    let mut text = format!(
        "p_seg       = {:.12e} (failure {:.6e})\np_limb      = {:.12e} (failure {:.6e})\np_mrp bound = {:.12e} (failure {:.6e})\n",
        seg.success(),
        seg.failure(),
        limb.success(),
        limb.failure(),
        mrp.success(),
        mrp.failure()
    );
    if let Some(bits) = seed_bits {
        let _ = writeln!(text, "effective seed space = {bits:.3} bits");
    }
    match &solved {
        Ok(p) => {
            let _ = writeln!(text, "p_r_max for failure <= {} = {p:.6}", a.max_fail);
        }
        Err(e) => {
            let _ = writeln!(text, "p_r_max for failure <= {}: {e}", a.max_fail);
        }
    }
    ok("analyze", digest, payload, text)
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    mrp: PathBuf,
    #[arg(long, default_value_t = 64)]
    bins: usize,
}

fn stats(a: StatsArgs) -> Result<Done, Failure> {
    let mut digest = InputDigest::new("stats");
    let bytes = std::fs::read(&a.mrp).map_err(|e| Failure::usage("io", format!("{}: {e}", a.mrp.display())))?;
    digest.field("bins", a.bins).bytes("mrp", &bytes);
    let (_, mrp) = decode_mrp(&bytes)?;
    let mut text = String::from("q samples chi2 dof p_value\n");
    let mut reports = Vec::new();
    for limb in mrp.limbs() {
        let r = chi_square_uniformity(limb, a.bins)?;
        let _ = writeln!(
            text,
            "{} {} {:.4} {} {:.6}",
            r.q, r.sample_count, r.statistic, r.degrees_of_freedom, r.p_value
        );
        reports.push(json!({
            "q": r.q,
            "sample_count": r.sample_count,
            "statistic": r.statistic,
            "degrees_of_freedom": r.degrees_of_freedom,
            "p_value": r.p_value,
        }));
    }
    ok("stats", digest, json!({"bins": a.bins, "limbs": reports}), text)
}

#[derive(Args, Debug)]
pub struct CostArgs {
    /// Vector lanes.
    #[arg(long = "R", default_value_t = 16384.0)]
    lanes: f64,
    /// Word width in bits.
    #[arg(long, default_value_t = 32.0)]
    w: f64,
    /// Clock in GHz.
    #[arg(long, default_value_t = 1.0)]
    f: f64,
    /// Fraction of cycles that consume fresh random words.
    #[arg(long, default_value_t = 0.125)]
    gamma: f64,
    /// Die side in mm.
    #[arg(long, default_value_t = 15.0)]
    d: f64,
    /// Wire energy in fJ per bit per mm.
    #[arg(long = "E", default_value_t = 40.0)]
    e: f64,
    /// Distance from each distributed engine to its lanes, in mm.
    #[arg(long, default_value_t = 0.0)]
    hop: f64,
}

fn cost(a: CostArgs) -> Result<Done, Failure> {
    let mut digest = InputDigest::new("cost");
    for (k, v) in [("R", a.lanes), ("w", a.w), ("f", a.f), ("gamma", a.gamma), ("d", a.d), ("E", a.e), ("hop", a.hop)] {
        digest.field(k, v);
    }
    let p = CostParams {
        lanes: a.lanes,
        word_bits: a.w,
        freq_hz: a.f * 1e9,
        gamma: a.gamma,
        die_side_mm: a.d,
        wire_energy: a.e * FEMTO,
        local_hop_mm: a.hop,
    };
    let r = cost_report(&p)?;
    let payload = json!({
        "inputs": {"lanes": a.lanes, "word_bits": a.w, "freq_ghz": a.f, "gamma": a.gamma, "die_side_mm": a.d, "wire_fj_per_bit_mm": a.e, "local_hop_mm": a.hop},
        "throughput_bps": r.throughput_bps,
        "throughput_tbps": r.throughput_bps / TERA,
        "central_power_w": r.central_power_w,
        "per_axis_density_bps_per_mm": r.per_axis_density_bps_per_mm,
        "per_axis_density_tbps_per_mm": r.per_axis_density_bps_per_mm / TERA,
        "distributed_power_w": r.distributed_power_w,
        "saving_w": r.saving_w,
    });
    let text = format!(
        "throughput            = {:.6e} bit/s ({:.3} Tbps)\n\
         central wiring power  = {:.4} W\n\
         per-axis density      = {:.6e} bit/s/mm ({:.3} Tbps/mm)\n\
         distributed power     = {:.4} W (engines {} mm from lanes)\n\
         saving                = {:.4} W\n",
        r.throughput_bps,
        r.throughput_bps / TERA,
        r.central_power_w,
        r.per_axis_density_bps_per_mm,
        r.per_axis_density_bps_per_mm / TERA,
        r.distributed_power_w,
        a.hop,
        r.saving_w
    );
    ok("cost", digest, payload, text)
}

