use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::to_f64;

/// A probability carried together with its complement. Both halves are
/// computed directly, so `failure` keeps full relative precision when
/// `success` is within 1e-12 of one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prob {
    success: f64,
    failure: f64,
}

impl Prob {
    pub const CERTAIN: Prob = Prob {
        success: 1.0,
        failure: 0.0,
    };

    pub const IMPOSSIBLE: Prob = Prob {
        success: 0.0,
        failure: 1.0,
    };

    /// Both halves must be supplied independently; they are not re-derived.
    pub fn from_parts(success: f64, failure: f64) -> Self {
        Prob { success, failure }
    }

    /// Only precise while `failure` is not close to one.
    pub fn from_failure(failure: f64) -> Self {
        Prob {
            success: 1.0 - failure,
            failure,
        }
    }

    pub fn success(&self) -> f64 {
        self.success
    }

    pub fn failure(&self) -> f64 {
        self.failure
    }

    fn ln_success(&self) -> f64 {
        if self.failure < 0.5 {
            (-self.failure).ln_1p()
        } else {
            self.success.ln()
        }
    }

    fn from_ln_success(ln: f64) -> Self {
        Prob {
            success: ln.exp(),
            failure: -ln.exp_m1(),
        }
    }

    /// Probability that `n` independent trials all succeed.
    pub fn pow(self, n: u64) -> Prob {
        if n == 0 {
            return Prob::CERTAIN;
        }
        Prob::from_ln_success(self.ln_success() * n as f64)
    }

    /// Probability that every one of a set of independent events succeeds.
    pub fn all<I: IntoIterator<Item = Prob>>(events: I) -> Prob {
        Prob::from_ln_success(events.into_iter().map(|p| p.ln_success()).sum())
    }
}

/// Exact `(success, failure)` of getting at least `len` acceptances among
/// `t` words when each word is rejected with probability `p_r`. Both tails
/// are summed term by term.
pub fn p_seg_exact(p_r: &BigRational, t: u32, len: u32) -> Result<(BigRational, BigRational)> {
    if p_r.is_negative() || p_r > &BigRational::one() {
        return Err(Error::invalid("rejection probability must be in [0, 1]"));
    }
    if len > t {
        return Ok((BigRational::zero(), BigRational::one()));
    }
    let reject = p_r.numer().clone();
    let denom = p_r.denom().clone();
    let accept = &denom - &reject;
    let mut success = BigInt::zero();
    let mut failure = BigInt::zero();
    // term(i) = C(t, i) reject^(t-i) accept^i, i = number of accepted words
    for i in 0..=t {
        let term = binomial(BigInt::from(t), BigInt::from(i))
            * num_traits::pow(reject.clone(), (t - i) as usize)
            * num_traits::pow(accept.clone(), i as usize);
        if i >= len {
            success += term;
        } else {
            failure += term;
        }
    }
    let total = num_traits::pow(denom, t as usize);
    Ok((
        BigRational::new(success, total.clone()),
        BigRational::new(failure, total),
    ))
}

pub fn p_seg(p_r: &BigRational, t: u32, len: u32) -> Result<Prob> {
    let (s, f) = p_seg_exact(p_r, t, len)?;
    Ok(Prob::from_parts(to_f64(&s), to_f64(&f)))
}

/// All `n_seg` segments of a limb succeed.
pub fn p_limb(p_seg: Prob, n_seg: u64) -> Prob {
    p_seg.pow(n_seg)
}

/// `p_limb_worst^L`, a lower bound on the success of a whole MRP.
pub fn p_mrp_lower_bound(p_limb_worst: Prob, limbs: u64) -> Prob {
    p_limb_worst.pow(limbs)
}

/// Segment/limb/MRP success model for a base of `limbs` moduli whose worst
/// rejection probability is `p_r_worst`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuccessModel {
    pub t: u32,
    pub len: u32,
    pub n_seg: u64,
    pub limbs: u64,
    pub p_r_worst: BigRational,
}

impl SuccessModel {
    pub fn new(t: u32, len: u32, n_seg: u64, limbs: u64, p_r_worst: BigRational) -> Result<Self> {
        if t == 0 || len == 0 || n_seg == 0 || limbs == 0 {
            return Err(Error::invalid("t, len, n_seg and L must be positive"));
        }
        if len > t {
            return Err(Error::invalid(format!("len {len} exceeds t = {t}")));
        }
        if p_r_worst.is_negative() || p_r_worst >= BigRational::one() {
            return Err(Error::invalid("p_r_worst must be in [0, 1)"));
        }
        Ok(SuccessModel {
            t,
            len,
            n_seg,
            limbs,
            p_r_worst,
        })
    }

    pub fn p_seg(&self) -> Prob {
        p_seg(&self.p_r_worst, self.t, self.len).expect("validated in new")
    }

    pub fn p_limb(&self) -> Prob {
        p_limb(self.p_seg(), self.n_seg)
    }

    pub fn p_mrp_bound(&self) -> Prob {
        p_mrp_lower_bound(self.p_limb(), self.limbs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn p_seg_boundaries() {
        let (s, f) = p_seg_exact(&ratio(0, 1), 42, 32).unwrap();
        assert_eq!((s, f), (BigRational::one(), BigRational::zero()));

        let p = ratio(1, 10);
        let (s, _) = p_seg_exact(&p, 42, 42).unwrap();
        assert_eq!(s, num_traits::pow(ratio(9, 10), 42));

        let (s, f) = p_seg_exact(&p, 42, 43).unwrap();
        assert_eq!((s, f), (BigRational::zero(), BigRational::one()));

        let (s, f) = p_seg_exact(&p, 42, 0).unwrap();
        assert_eq!((s, f), (BigRational::one(), BigRational::zero()));

        assert!(p_seg_exact(&ratio(-1, 2), 42, 1).is_err());
        assert!(p_seg_exact(&ratio(3, 2), 42, 1).is_err());
    }

    #[test]
    fn tails_sum_to_one() {
        let p = ratio(3655, 100000);
        let (s, f) = p_seg_exact(&p, 42, 32).unwrap();
        assert_eq!(s + f, BigRational::one());
    }

    #[test]
    fn power_edge_cases() {
        let p = Prob::from_parts(0.25, 0.75);
        assert_eq!(p_limb(p, 1).success(), 0.25);
        assert_eq!(p_limb(Prob::CERTAIN, 1000), Prob::CERTAIN);
        assert_eq!(p_mrp_lower_bound(p, 0), Prob::CERTAIN);
        assert_eq!(Prob::IMPOSSIBLE.pow(3).success(), 0.0);
        assert_eq!(Prob::IMPOSSIBLE.pow(3).failure(), 1.0);
        let sq = p.pow(2);
        assert!((sq.success() - 0.0625).abs() < 1e-16);
        assert!((sq.failure() - 0.9375).abs() < 1e-15);
    }

    #[test]
    fn all_of_independent_events() {
        let a = Prob::from_failure(0.1);
        let b = Prob::from_failure(0.2);
        let both = Prob::all([a, b]);
        assert!((both.success() - 0.72).abs() < 1e-15);
        assert!((both.failure() - 0.28).abs() < 1e-15);
        assert_eq!(Prob::all([]), Prob::CERTAIN);
    }

    #[test]
    fn success_model_rejects_bad_inputs() {
        assert!(SuccessModel::new(42, 43, 1, 1, ratio(0, 1)).is_err());
        assert!(SuccessModel::new(42, 32, 0, 1, ratio(0, 1)).is_err());
        assert!(SuccessModel::new(42, 32, 1, 1, ratio(1, 1)).is_err());
        let m = SuccessModel::new(42, 32, 2048, 64, ratio(365, 10000)).unwrap();
        assert!(m.p_mrp_bound().failure() <= 0.03);
        let m = SuccessModel::new(42, 32, 2048, 64, ratio(366, 10000)).unwrap();
        assert!(m.p_mrp_bound().failure() > 0.03);
    }
}
