//! Generators for the example families: Sylvester-type integer sequences,
//! doubly exponential towers with an oscillating base (engineered so the
//! normalized growth trajectory has distinct liminf and limsup), and
//! quadratic surd sequences a_n + sqrt(r).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::algnum::AlgebraicNumber;
use crate::bounds::cap_exponent;
use crate::dyadic::{ComplexBox, Dyadic, DyadicInterval};
use crate::intpoly::IntPolynomial;
use crate::{Error, Result};

/// Which of the two bases an oscillating tower uses at a given index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TowerStep {
    Lo,
    Hi,
}

/// a_{n+1} = a_n^2 - a_n + 1 from a_1 >= 2: the classic sequence whose
/// reciprocals sum to 1/(a_1 - 1) exactly.
pub fn sylvester(a1: u64, n: usize) -> Result<Vec<BigInt>> {
    if a1 < 2 {
        return Err(Error::InvalidInput("sylvester requires a1 >= 2".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("need at least one term".into()));
    }
    let mut out = Vec::with_capacity(n);
    let mut a = BigInt::from(a1);
    for _ in 0..n {
        out.push(a.clone());
        a = &a * &a - &a + 1;
    }
    Ok(out)
}

/// The exact value of the full reciprocal sum: 1/(a1 - 1).
pub fn sylvester_sum_closed_form(a1: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(a1) - 1)
}

/// Exact partial sum of reciprocals via the telescoping identity:
/// sum_{n<=N} 1/a_n = 1/(a1-1) - 1/(a_{N+1}-1).
pub fn sylvester_partial_sum(a1: u64, n: usize) -> Result<BigRational> {
    let seq = sylvester(a1, n + 1)?;
    let last = &seq[n];
    Ok(
        BigRational::new(BigInt::one(), BigInt::from(a1) - 1)
            - BigRational::new(BigInt::one(), last - 1),
    )
}

/// a_n = ceil(base(n)^E_n) with E_n = D^n prod_{i<n} (K D_i + d_i) and
/// base(n) walking the lo/hi pattern (cycled to length `n_terms`).
/// Validates strict growth and a_n >= n^(1+eps) exactly; fails loudly
/// rather than emitting a sequence that breaks the hypotheses.
#[allow(clippy::too_many_arguments)]
pub fn oscillating_tower(
    base_lo: &Dyadic,
    base_hi: &Dyadic,
    pattern: &[TowerStep],
    eps: &BigRational,
    d: u32,
    k: u32,
    ds: &[u32],
    n_terms: usize,
) -> Result<Vec<BigInt>> {
    if *base_lo <= Dyadic::one() {
        return Err(Error::InvalidInput("base_lo must exceed 1".into()));
    }
    if base_hi <= base_lo {
        return Err(Error::InvalidInput("base_hi must exceed base_lo".into()));
    }
    if pattern.is_empty() || n_terms == 0 {
        return Err(Error::InvalidInput("empty pattern or length".into()));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    if ds.len() + 1 < n_terms {
        return Err(Error::InvalidInput("ds too short for requested length".into()));
    }
    let mut out = Vec::with_capacity(n_terms);
    for n in 1..=n_terms {
        let base = match pattern[(n - 1) % pattern.len()] {
            TowerStep::Lo => base_lo,
            TowerStep::Hi => base_hi,
        };
        let e = cap_exponent(d, k, ds, n);
        let a = ceil_power(base, &e)?;
        out.push(a);
    }
    // Strictly increasing.
    for w in out.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidInput(format!(
                "tower not strictly increasing: {} >= {}",
                w[0], w[1]
            )));
        }
    }
    // a_n >= n^(1+eps) exactly: a_n^q >= n^(q+p) for eps = p/q.
    let p = eps.numer();
    let q = eps.denom();
    let qe = u32::try_from(q).map_err(|_| Error::InvalidInput("epsilon denominator too large".into()))?;
    let pe = u32::try_from(p).map_err(|_| Error::InvalidInput("epsilon numerator too large".into()))?;
    for (idx, a) in out.iter().enumerate() {
        let n = BigInt::from(idx + 1);
        if a.pow(qe) < n.pow(qe + pe) {
            return Err(Error::InvalidInput(format!(
                "tower term a_{} = {} below n^(1+eps)",
                idx + 1,
                a
            )));
        }
    }
    Ok(out)
}

/// ceil(base^e) for a dyadic base > 1 and integer exponent e >= 1, exact.
fn ceil_power(base: &Dyadic, e: &BigInt) -> Result<BigInt> {
    let e: u64 = u64::try_from(e)
        .map_err(|_| Error::InvalidInput("tower exponent out of range".into()))?;
    if e == 0 {
        return Ok(BigInt::one());
    }
    // Guard against absurd mantissa growth.
    let total_bits = base.mant_bits().saturating_mul(e);
    if total_bits > (1 << 26) {
        return Err(Error::InvalidInput("tower term would exceed the size guard".into()));
    }
    let mant = base.mantissa().pow(
        u32::try_from(e).map_err(|_| Error::InvalidInput("tower exponent out of range".into()))?,
    );
    let exp = base
        .exponent()
        .checked_mul(e as i64)
        .ok_or_else(|| Error::InvalidInput("tower exponent overflow".into()))?;
    Ok(Dyadic::new(mant, exp).ceil_int())
}

/// alpha_n = a_n + sqrt(r) for a squarefree r >= 2 and integers
/// a_n > sqrt(r): monic quadratic minimal polynomials whose house is
/// |alpha_n| = a_n + sqrt(r) itself.
pub fn quadratic_surd_family(a_seq: &[BigInt], r: u64) -> Result<Vec<AlgebraicNumber>> {
    if r < 2 || !is_squarefree_u64(r) {
        return Err(Error::InvalidInput(format!("r = {r} is not a squarefree integer >= 2")));
    }
    let rr = BigInt::from(r);
    let sqrt_ceil = BigInt::from(r).sqrt() + 1;
    let mut out = Vec::with_capacity(a_seq.len());
    for a in a_seq {
        if a * a <= rr || !a.is_positive() {
            return Err(Error::InvalidInput(format!("a_n = {a} is not above sqrt({r})")));
        }
        // x^2 - 2 a x + (a^2 - r), roots a +- sqrt(r).
        let minpoly = IntPolynomial::from_coeffs(vec![a * a - &rr, BigInt::from(-2) * a, BigInt::one()]);
        // The larger root lies in (a, a + ceil(sqrt r)]; the smaller is < a.
        let bx = ComplexBox::new(
            DyadicInterval::new(
                Dyadic::from_int(a.clone()),
                Dyadic::from_int(a + &sqrt_ceil),
            ),
            DyadicInterval::point(Dyadic::zero()),
        );
        out.push(AlgebraicNumber::make(minpoly, bx)?);
    }
    Ok(out)
}

fn is_squarefree_u64(r: u64) -> bool {
    let mut m = r;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;

    #[test]
    fn sylvester_examples() {
        assert_eq!(
            sylvester(2, 5).unwrap(),
            [2u32, 3, 7, 43, 1807].map(BigInt::from).to_vec()
        );
        assert_eq!(sylvester(3, 3).unwrap(), [3u32, 7, 43].map(BigInt::from).to_vec());
        assert!(sylvester(1, 3).is_err());
        assert!(sylvester(2, 0).is_err());
    }

    #[test]
    fn sylvester_telescoping_small() {
        // Direct rational sum equals the telescoped form for small cases.
        for a1 in [2u64, 3, 5] {
            let seq = sylvester(a1, 6).unwrap();
            let mut direct = BigRational::zero();
            for a in &seq {
                direct += BigRational::new(BigInt::one(), a.clone());
            }
            assert_eq!(direct, sylvester_partial_sum(a1, 6).unwrap());
        }
    }

    #[test]
    fn tower_alternating_bases() {
        // (2, 3, [lo,hi,lo,hi], D=1, K=1, ds all 1) -> [2, 9, 16, 6561].
        let seq = oscillating_tower(
            &Dyadic::from_int(2),
            &Dyadic::from_int(3),
            &[TowerStep::Lo, TowerStep::Hi, TowerStep::Lo, TowerStep::Hi],
            &BigRational::one(),
            1,
            1,
            &[1; 8],
            4,
        )
        .unwrap();
        assert_eq!(seq, [2u32, 9, 16, 6561].map(BigInt::from).to_vec());
    }

    #[test]
    fn tower_constant_pattern() {
        // Constant lo pattern: a_n = 2^(2^(n-1)) exactly.
        let seq = oscillating_tower(
            &Dyadic::from_int(2),
            &Dyadic::from_int(3),
            &[TowerStep::Lo],
            &BigRational::one(),
            1,
            1,
            &[1; 8],
            5,
        )
        .unwrap();
        assert_eq!(seq, [2u32, 4, 16, 256, 65536].map(BigInt::from).to_vec());
    }

    #[test]
    fn tower_rejects_non_increasing() {
        // Huge first term then a tiny one.
        let err = oscillating_tower(
            &Dyadic::new(BigInt::from(17), -4), // 1.0625
            &Dyadic::from_int(100),
            &[TowerStep::Hi, TowerStep::Lo],
            &BigRational::one(),
            1,
            1,
            &[1; 4],
            2,
        );
        assert!(err.is_err());
    }

    #[test]
    fn tower_fractional_base() {
        // base 3/2 with constant pattern: terms ceil((3/2)^(2^(n-1))).
        let seq = oscillating_tower(
            &Dyadic::new(BigInt::from(3), -1),
            &Dyadic::from_int(2),
            &[TowerStep::Lo],
            &BigRational::new(1.into(), 4.into()),
            1,
            1,
            &[1; 6],
            4,
        );
        // (3/2)^1 = 1.5 -> 2, (3/2)^2 = 2.25 -> 3, (3/2)^4 ~ 5.06 -> 6,
        // (3/2)^8 ~ 25.6 -> 26; growth and n^(1+eps) hold.
        assert_eq!(seq.unwrap(), [2u32, 3, 6, 26].map(BigInt::from).to_vec());
    }

    #[test]
    fn surd_family_minimal_polynomials() {
        let a: Vec<BigInt> = [2u32, 9, 16].map(BigInt::from).to_vec();
        let fam = quadratic_surd_family(&a, 2).unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(fam[0].minpoly(), &IntPolynomial::from_i64(&[2, -4, 1]));
        assert_eq!(fam[1].minpoly(), &IntPolynomial::from_i64(&[79, -18, 1]));
        assert_eq!(fam[2].minpoly(), &IntPolynomial::from_i64(&[254, -32, 1]));
        for f in &fam {
            assert!(f.is_algebraic_integer());
            assert_eq!(f.degree(), 2);
            assert!(f.house_attained_here().unwrap());
        }
        // house(alpha_1) = 2 + sqrt2 = 3.4142...
        let h = fam[0].house(&Dyadic::pow2(-40)).unwrap();
        assert!((h.midpoint().to_f64() - 3.4142135).abs() < 1e-6);
    }

    #[test]
    fn surd_family_guards() {
        // a = 1 < sqrt(2).
        let a = vec![BigInt::one()];
        assert!(quadratic_surd_family(&a, 2).is_err());
        // r = 4 not squarefree.
        let a = vec![BigInt::from(3)];
        assert!(quadratic_surd_family(&a, 4).is_err());
        // r = 12 = 4*3 not squarefree.
        assert!(quadratic_surd_family(&a, 12).is_err());
        // r = 6 squarefree works.
        assert!(quadratic_surd_family(&a, 6).is_ok());
    }
}
