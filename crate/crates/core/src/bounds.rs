//! Executable forms of the standalone inequalities: the Liouville-type
//! separation bound for non-conjugate algebraic numbers, the exact
//! integer inequality on exponent products, the reciprocal-sum tail
//! bound, and the growth cap on |alpha_{1,n}|.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::algnum::AlgebraicNumber;
use crate::dyadic::{
    interval_log2, interval_pow_rational, Dyadic, DyadicInterval, LogMagnitude,
};
use crate::{Error, Result, MAX_PRECISION_BITS};

/// log2 of the separation bound 1/(2^(d_a d_b) M(a)^(d_b) M(b)^(d_a)) for
/// non-conjugate inputs.
pub fn liouville_lower_bound(
    a: &AlgebraicNumber,
    b: &AlgebraicNumber,
    rel_tol: &Dyadic,
) -> Result<LogMagnitude> {
    if a.is_conjugate(b) {
        return Err(Error::ConjugateInputs);
    }
    let da = BigInt::from(a.degree());
    let db = BigInt::from(b.degree());
    let ma = a.mahler_measure(rel_tol)?;
    let mb = b.mahler_measure(rel_tol)?;
    // log2 bound = -(da*db + db*log2 Ma + da*log2 Mb).
    let dd = Dyadic::from_int(&da * &db);
    let pos = LogMagnitude::exact(dd).mul(&ma.pow_int(&db)).mul(&mb.pow_int(&da));
    Ok(LogMagnitude::new(pos.log2_hi().neg(), pos.log2_lo().neg()))
}

/// Certified margin log2 |a - b| - log2(bound) and the verdict that it is
/// nonnegative; refines until the sign of the margin is determined.
pub fn check_separation(
    a: &AlgebraicNumber,
    b: &AlgebraicNumber,
    rel_tol: &Dyadic,
) -> Result<(LogMagnitude, bool)> {
    if a.is_conjugate(b) {
        return Err(Error::ConjugateInputs);
    }
    let bound = liouville_lower_bound(a, b, rel_tol)?;
    let mut bits: u32 = 32;
    loop {
        let w = Dyadic::pow2(-(bits as i64));
        let diff = a.refined(&w)?.sub(&b.refined(&w)?);
        let dist = diff.modulus(bits + 16);
        if dist.lo().is_positive() {
            let ld = interval_log2(&dist, bits + 8)?;
            let margin = LogMagnitude::new(
                ld.lo().sub(bound.log2_hi()),
                ld.hi().sub(bound.log2_lo()),
            );
            if !margin.log2_lo().is_negative() {
                return Ok((margin, true));
            }
            if margin.log2_hi().is_negative() {
                return Ok((margin, false));
            }
        }
        bits = bits.saturating_mul(2);
        if bits > MAX_PRECISION_BITS {
            return Err(Error::Undetermined { bits: MAX_PRECISION_BITS });
        }
    }
}

/// Exact values of both sides of the exponent-product inequality
/// D^(N+1) prod_{i<=N} (K D_i + d_i) >= K D D_N sum_{n<=N} D^n prod_{i<n} (K D_i + d_i),
/// where D_n is the running product of the d_i. Empty products are 1.
pub fn exponent_inequality_sides(d: u32, k: u32, ds: &[u32]) -> (BigInt, BigInt) {
    assert!(!ds.is_empty(), "need at least one d_i");
    assert!(d >= 1 && k >= 1 && ds.iter().all(|&x| x >= 1));
    let n = ds.len();
    let big_d = BigInt::from(d);
    let big_k = BigInt::from(k);

    // Running products D_i and the mixed factors K*D_i + d_i.
    let mut dprod = BigInt::one();
    let mut factors = Vec::with_capacity(n);
    let mut dn = BigInt::one();
    for &di in ds {
        dn *= BigInt::from(di);
        factors.push(&big_k * &dn + BigInt::from(di));
        dprod = dprod.clone(); // dn tracks D_i already
    }
    let _ = dprod;

    let mut lhs = big_d.pow(n as u32 + 1);
    for f in &factors {
        lhs *= f;
    }

    let mut rhs_sum = BigInt::from(0);
    let mut partial = BigInt::one(); // prod_{i=1}^{n-1} (K D_i + d_i)
    for (idx, f) in factors.iter().enumerate() {
        rhs_sum += big_d.pow(idx as u32 + 1) * &partial;
        partial *= f;
    }
    let rhs = &big_k * &big_d * &dn * rhs_sum;
    (lhs, rhs)
}

/// The tail bound (2 + 1/eps) / a_N^(eps/(1+eps)) on sum_{n>=N} 1/a_n for
/// increasing sequences with a_n > n^(1+eps), returned as a certified
/// upper-bound interval.
pub fn erdos_tail_bound(a_n: &Dyadic, eps: &BigRational, prec: u32) -> Result<DyadicInterval> {
    if !a_n.is_positive() {
        return Err(Error::InvalidInput("a_N must be positive".into()));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    // 2 + 1/eps = (2p + q)/p for eps = p/q.
    let p = eps.numer();
    let q = eps.denom();
    let num = Dyadic::from_int(BigInt::from(2) * p + q);
    let den = DyadicInterval::point(Dyadic::from_int(p.clone()));
    let coeff = DyadicInterval::point(num).div(&den, prec + 8);
    // a_N^(eps/(1+eps)): exponent p/(p+q).
    let expo = BigRational::new(p.clone(), p + q);
    let power = interval_pow_rational(&DyadicInterval::point(a_n.clone()), &expo, prec + 8)?;
    Ok(coeff.div(&power, prec))
}

/// log2 of (2 A2)^(D^n prod_{i<n} (K D_i + d_i)): the growth cap implied
/// by the limsup hypothesis, as an exact-integer exponent times a
/// certified log2(2 A2).
pub fn growth_cap(
    a2: &Dyadic,
    d: u32,
    k: u32,
    ds: &[u32],
    n: usize,
    prec: u32,
) -> Result<LogMagnitude> {
    if n == 0 || n > ds.len() + 1 {
        return Err(Error::InvalidInput(format!(
            "n = {n} out of range 1..={}",
            ds.len() + 1
        )));
    }
    if *a2 <= Dyadic::one() {
        return Err(Error::InvalidInput("A2 must exceed 1".into()));
    }
    let exponent = cap_exponent(d, k, ds, n);
    let two_a2 = DyadicInterval::point(a2.mul_pow2(1));
    let log = LogMagnitude::from_interval(&two_a2, prec)?;
    Ok(log.pow_int(&exponent))
}

/// D^n * prod_{i=1}^{n-1} (K D_i + d_i), exact.
pub fn cap_exponent(d: u32, k: u32, ds: &[u32], n: usize) -> BigInt {
    let big_d = BigInt::from(d);
    let big_k = BigInt::from(k);
    let mut acc = big_d.pow(n as u32);
    let mut dn = BigInt::one();
    for &di in ds.iter().take(n.saturating_sub(1)) {
        dn *= BigInt::from(di);
        acc *= &big_k * &dn + BigInt::from(di);
    }
    acc
}
