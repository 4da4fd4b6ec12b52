//! The dueling quantities behind the degree lower bound: exact partial
//! sums gamma_N with their Mahler-measure cap, certified tail enclosures
//! |gamma(N)|, and the log-domain trace of
//!
//!   Phi(N) = |gamma(N)| * (2^(D^(cN) prod (K D_i + d_i)^c) prod |alpha_{1,n}|^K)^(D D_N).
//!
//! If the combination had degree at most D, Phi(N) >= 1 would hold for
//! all large N; under the growth hypotheses liminf Phi = 0. A certified
//! Phi(N) < 1 at finite N is therefore *evidence* for degree > D, never
//! proof: the "sufficiently large N" threshold is ineffective.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algnum::AlgebraicNumber;
use crate::bounds::erdos_tail_bound;
use crate::dyadic::{
    interval_exp2, interval_log2, interval_pow_rational, ComplexBox, Dyadic, DyadicInterval,
    LogMagnitude, Round,
};
use crate::hypotheses::{HypothesisConfig, SequenceTable};
use crate::{Error, Result, MAX_PRECISION_BITS};

/// Integer coefficients on the K series; rationals are cleared by the
/// common denominator (degree conclusions are invariant under nonzero
/// rational scaling).
#[derive(Clone, Debug)]
pub struct LinearCombination<'a> {
    betas: Vec<BigInt>,
    table: &'a SequenceTable,
}

impl<'a> LinearCombination<'a> {
    pub fn new(betas: Vec<BigInt>, table: &'a SequenceTable) -> Result<LinearCombination<'a>> {
        if betas.len() != table.k() {
            return Err(Error::InvalidInput(format!(
                "expected {} betas for the table, got {}",
                table.k(),
                betas.len()
            )));
        }
        if betas.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput("betas must not all be zero".into()));
        }
        Ok(LinearCombination { betas, table })
    }

    /// Clear rational coefficients to integers by the LCM of denominators.
    pub fn from_rationals(
        betas: &[BigRational],
        table: &'a SequenceTable,
    ) -> Result<LinearCombination<'a>> {
        let mut lcm = BigInt::one();
        for b in betas {
            lcm = lcm.lcm(b.denom());
        }
        let cleared: Vec<BigInt> =
            betas.iter().map(|b| (b * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        LinearCombination::new(cleared, table)
    }

    pub fn betas(&self) -> &[BigInt] {
        &self.betas
    }

    pub fn table(&self) -> &SequenceTable {
        self.table
    }

    fn beta_abs_sum(&self) -> BigInt {
        self.betas.iter().map(Signed::abs).sum()
    }
}

/// gamma_N = sum_i beta_i sum_{n<=N} b_{i,n}/alpha_{i,n}, exact; the
/// degree stays within the product of the per-row compositum bounds or
/// the construction fails with the factorization-ceiling error.
pub fn partial_sum_exact(lc: &LinearCombination, n_upper: usize) -> Result<AlgebraicNumber> {
    let table = lc.table();
    if n_upper == 0 || n_upper > table.n_max() {
        return Err(Error::InvalidInput(format!(
            "partial sum index {n_upper} out of range 1..={}",
            table.n_max()
        )));
    }
    let mut acc = AlgebraicNumber::zero();
    let mut degree_cap = BigInt::one();
    for n in 1..=n_upper {
        // Inner sum over i stays inside the row's compositum.
        let mut row = AlgebraicNumber::zero();
        let mut row_bound = BigInt::one();
        for i in 1..=table.k() {
            let beta = &lc.betas()[i - 1];
            if beta.is_zero() {
                continue;
            }
            let alpha = table.alpha(n, i);
            let weight = BigRational::new(beta * table.b(n, i), BigInt::one());
            let term = alpha.recip()?.mul(&AlgebraicNumber::from_rational(&weight))?;
            row = row.add(&term)?;
            row_bound *= BigInt::from(alpha.degree());
        }
        acc = acc.add(&row)?;
        degree_cap *= row_bound.max(BigInt::one());
        let got = BigInt::from(acc.degree());
        if got > degree_cap {
            return Err(Error::InvalidInput(format!(
                "partial sum degree {got} exceeds the compositum bound {degree_cap}"
            )));
        }
    }
    Ok(acc)
}

/// Both sides of the Mahler-measure cap on the partial sum:
/// lhs = log2 M(gamma_N), rhs = D_N * (K N + sum_i log2 H(beta_i)
/// + sum_{i,n} (log2 house(alpha_{i,n}) + log2 b_{i,n})), ok = certified
/// lhs <= rhs.
pub fn mahler_chain_check(
    lc: &LinearCombination,
    n_upper: usize,
    rel_tol: &Dyadic,
) -> Result<(LogMagnitude, LogMagnitude, bool)> {
    let table = lc.table();
    let gamma = partial_sum_exact(lc, n_upper)?;
    let lhs = gamma.mahler_measure(rel_tol)?;

    // D_N from the generic compositum bound per row.
    let mut dn = BigInt::one();
    for n in 1..=n_upper {
        let mut row = BigInt::one();
        for i in 1..=table.k() {
            row *= BigInt::from(table.alpha(n, i).degree());
        }
        dn *= row;
    }

    let k = table.k();
    let mut inner = LogMagnitude::exact(Dyadic::from_int((k * n_upper) as i64));
    for beta in lc.betas() {
        inner = inner.mul(&height_of_integer(beta, 96)?);
    }
    for n in 1..=n_upper {
        for i in 1..=k {
            let house = table.alpha(n, i).house(rel_tol)?;
            inner = inner.mul(&LogMagnitude::from_log2_interval(interval_log2(&house, 96)?));
            inner = inner.mul(&log2_of_positive_int(table.b(n, i), 96)?);
        }
    }
    let rhs = inner.pow_int(&dn);
    let ok = lhs.log2_hi() <= rhs.log2_lo();
    Ok((lhs, rhs, ok))
}

/// H(m) = max(1, |m|) for a rational integer.
fn height_of_integer(m: &BigInt, prec: u32) -> Result<LogMagnitude> {
    let a = m.abs();
    if a <= BigInt::one() {
        return Ok(LogMagnitude::one());
    }
    LogMagnitude::from_interval(&DyadicInterval::point(Dyadic::from_int(a)), prec)
}

fn log2_of_positive_int(m: &BigInt, prec: u32) -> Result<LogMagnitude> {
    if m.is_one() {
        return Ok(LogMagnitude::one());
    }
    LogMagnitude::from_interval(&DyadicInterval::point(Dyadic::from_int(m.clone())), prec)
}

/// Certified enclosure of log2 |gamma(N)| where gamma(N) is the tail
/// beyond N: terms up to the table horizon are summed with interval
/// arithmetic; the remainder past the horizon is capped through the
/// reciprocal-sum tail bound applied to the size-adjusted moduli
/// a'_n = |alpha_{1,n}| 2^(-2 T_n), whose growth is verified on the data
/// window and assumed beyond it. The enclosure is upper-biased: the
/// remainder contributes only to the upper endpoint.
pub fn tail_enclosure(
    lc: &LinearCombination,
    cfg: &HypothesisConfig,
    n_from: usize,
    bits: u32,
) -> Result<LogMagnitude> {
    let table = lc.table();
    let n_data = table.n_max();
    if n_from >= n_data {
        return Err(Error::InvalidInput(format!(
            "tail start {n_from} needs data beyond it (table holds {n_data})"
        )));
    }
    // Partial tail terms n in (N, N_data].
    let mut sum = ComplexBox::point(Dyadic::zero(), Dyadic::zero());
    for n in n_from + 1..=n_data {
        for i in 1..=table.k() {
            let beta = &lc.betas()[i - 1];
            if beta.is_zero() {
                continue;
            }
            let alpha = table.alpha(n, i);
            let bx = refined_nonzero(alpha, bits)?;
            let term = bx.recip(bits + 8).mul_int(&(beta * table.b(n, i)));
            sum = sum.add(&term).round_out(bits + 16);
        }
    }
    let partial = sum.modulus(bits + 8);

    // Remainder cap via the tail bound on a'_n = a_n 2^(-2 T_n).
    let cap = remainder_cap(lc, cfg, n_from, bits)?;

    let hi = partial.hi().add(&cap);
    let lo = partial.lo().sub(&cap);
    if !lo.is_positive() {
        return Err(Error::Undetermined { bits });
    }
    let l = interval_log2(&DyadicInterval::new(lo, hi), bits)?;
    Ok(LogMagnitude::from_log2_interval(l))
}

fn refined_nonzero(alpha: &AlgebraicNumber, bits: u32) -> Result<ComplexBox> {
    let mut w = bits;
    loop {
        let bx = alpha.refined(&Dyadic::pow2(-(w as i64)))?;
        if !bx.contains_zero() {
            return Ok(bx);
        }
        w = w.saturating_mul(2);
        if w > MAX_PRECISION_BITS {
            return Err(Error::Undetermined { bits: MAX_PRECISION_BITS });
        }
    }
}

/// Upper bound on |sum_{n > N_data} sum_i beta_i b_{i,n}/alpha_{i,n}|:
/// each term is at most 2^(2 T_n)/a_n by the size hypotheses, so the sum
/// is at most (sum |beta_i|) * tail_bound(a'_{N_data}).
fn remainder_cap(
    lc: &LinearCombination,
    cfg: &HypothesisConfig,
    n_from: usize,
    bits: u32,
) -> Result<Dyadic> {
    let table = lc.table();
    let n_data = table.n_max();
    // a'_n over the data window (N, N_data]: certified lower bounds, and
    // a certified strict-increase check across the window.
    let mut prev: Option<DyadicInterval> = None;
    let mut last = None;
    for n in n_from + 1..=n_data {
        let a = table.alpha(n, 1).modulus(&Dyadic::pow2(-(bits as i64 / 2)))?;
        let t = size_exponent_interval(table.alpha(n, 1), &cfg.a, bits / 2 + 16)?;
        let scale = interval_exp2(&t.mul_int(&BigInt::from(2)), bits / 2 + 16)?;
        let adjusted = a.div(&scale, bits / 2 + 16);
        if let Some(p) = &prev {
            if !p.certainly_lt(&adjusted) {
                return Err(Error::InvalidInput(format!(
                    "adjusted moduli not certified increasing at n = {n}; the tail cap \
                     hypothesis fails on the data window"
                )));
            }
        }
        prev = Some(adjusted.clone());
        last = Some(adjusted);
    }
    let last = last.expect("window nonempty");
    if last.lo() < &Dyadic::one() {
        return Err(Error::InvalidInput(
            "adjusted modulus at the data horizon is below 1; tail cap unusable".into(),
        ));
    }
    let bound = erdos_tail_bound(last.lo(), &cfg.eps, bits)?;
    Ok(bound.hi().mul_int(&lc.beta_abs_sum()))
}

/// T_n = (log2 |alpha|)^a clamped at zero.
fn size_exponent_interval(
    alpha: &AlgebraicNumber,
    a: &BigRational,
    bits: u32,
) -> Result<DyadicInterval> {
    let l = alpha.log2_modulus(bits)?;
    let lo = if l.lo().is_negative() { Dyadic::zero() } else { l.lo().clone() };
    let hi = if l.hi().is_negative() { Dyadic::zero() } else { l.hi().clone() };
    interval_pow_rational(&DyadicInterval::new(lo, hi), a, bits)
}

/// Which published form of the bracket exponent to evaluate. The
/// canonical form is the one in the lemma statements; the others appear
/// mid-proof and are kept for side-by-side comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BracketVariant {
    /// D^(cN) prod_{i<N} (K D_i + d_i)^c.
    Canonical,
    /// (D^N prod_{i<N} (K D_i + d_i))^c.
    ProductPower,
    /// ((K+1) D D_{floor(N/2)})^(cN).
    HalfIndex,
}

impl std::str::FromStr for BracketVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<BracketVariant> {
        match s {
            "canonical" => Ok(BracketVariant::Canonical),
            "product-power" => Ok(BracketVariant::ProductPower),
            "half-index" => Ok(BracketVariant::HalfIndex),
            other => Err(Error::Parse(format!("unknown bracket variant {other:?}"))),
        }
    }
}

/// log2 of the 2-power part of the bracket: the exponent itself, i.e.
/// D^(cN) prod (K D_i + d_i)^c for the canonical form.
fn bracket_exponent(
    cfg: &HypothesisConfig,
    n_upper: usize,
    variant: BracketVariant,
    bits: u32,
) -> Result<DyadicInterval> {
    let c = &cfg.c;
    let kk = BigInt::from(cfg.k as u32);
    match variant {
        BracketVariant::Canonical => {
            // exp2(c N log2 D + c sum_{i<N} log2 (K D_i + d_i)).
            let mut log_sum = DyadicInterval::zero();
            if cfg.d > 1 {
                let ld = interval_log2(
                    &DyadicInterval::point(Dyadic::from_int(cfg.d as i64)),
                    bits + 8,
                )?;
                log_sum = log_sum.add(&ld.mul_int(&BigInt::from(n_upper as u32)));
            }
            let mut dprod = BigInt::one();
            for i in 1..n_upper {
                dprod *= BigInt::from(cfg.d_n(i)?);
                let f = &kk * &dprod + BigInt::from(cfg.d_n(i)?);
                log_sum = log_sum.add(&interval_log2(
                    &DyadicInterval::point(Dyadic::from_int(f)),
                    bits + 8,
                )?);
            }
            let scaled = log_sum.mul_rational(c, bits + 8);
            interval_exp2(&scaled, bits)
        }
        BracketVariant::ProductPower => {
            // (D^N prod (K D_i + d_i))^c.
            let mut product = BigInt::from(cfg.d).pow(n_upper as u32);
            let mut dprod = BigInt::one();
            for i in 1..n_upper {
                dprod *= BigInt::from(cfg.d_n(i)?);
                product *= &kk * &dprod + BigInt::from(cfg.d_n(i)?);
            }
            interval_pow_rational(
                &DyadicInterval::point(Dyadic::from_int(product)),
                c,
                bits,
            )
        }
        BracketVariant::HalfIndex => {
            // ((K+1) D D_{floor(N/2)})^(cN).
            let mut dhalf = BigInt::one();
            for i in 1..=n_upper / 2 {
                dhalf *= BigInt::from(cfg.d_n(i)?);
            }
            let base = (&kk + BigInt::one()) * BigInt::from(cfg.d) * dhalf;
            let exponent = c * BigRational::from_integer(BigInt::from(n_upper as u32));
            interval_pow_rational(
                &DyadicInterval::point(Dyadic::from_int(base)),
                &exponent,
                bits,
            )
        }
    }
}

/// Per-N verdict on Phi(N) against 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiVerdict {
    PhiBelowOne,
    PhiAtLeastOne,
    Undetermined,
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct TraceRow {
    pub n: usize,
    /// Certified enclosure of log2 |gamma(N)|; absent when the tail
    /// enclosure straddled zero at the precision cap.
    pub log2_gamma: Option<LogMagnitude>,
    pub log2_bracket: LogMagnitude,
    /// Interval sum of the two addends above.
    pub log2_phi: Option<LogMagnitude>,
    pub verdict: PhiVerdict,
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct CertifyTrace {
    #[serde(rename = "D")]
    pub d: u32,
    pub variant: BracketVariant,
    pub rows: Vec<TraceRow>,
}

impl CertifyTrace {
    /// CSV with decimal approximations (12 digits, outward-rounded).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "N,log2_gamma_lo,log2_gamma_hi,log2_bracket_lo,log2_bracket_hi,log2_phi_lo,log2_phi_hi,verdict\n",
        );
        for row in &self.rows {
            let fmt_opt = |m: &Option<LogMagnitude>| match m {
                Some(v) => format!(
                    "{},{}",
                    v.log2_lo().to_decimal(12, Round::Down),
                    v.log2_hi().to_decimal(12, Round::Up)
                ),
                None => ",".to_string(),
            };
            let verdict = match row.verdict {
                PhiVerdict::PhiBelowOne => "phi_below_one",
                PhiVerdict::PhiAtLeastOne => "phi_at_least_one",
                PhiVerdict::Undetermined => "undetermined",
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.n,
                fmt_opt(&row.log2_gamma),
                row.log2_bracket.log2_lo().to_decimal(12, Round::Down),
                row.log2_bracket.log2_hi().to_decimal(12, Round::Up),
                fmt_opt(&row.log2_phi),
                verdict
            ));
        }
        out
    }
}

/// Evaluate the trace over an inclusive range of N, escalating precision
/// per row from 128 bits up to `max_bits` (itself capped at 2^14).
pub fn phi_trace(
    lc: &LinearCombination,
    cfg: &HypothesisConfig,
    n_range: std::ops::RangeInclusive<usize>,
    max_bits: u32,
) -> Result<CertifyTrace> {
    phi_trace_variant(lc, cfg, n_range, max_bits, BracketVariant::Canonical)
}

pub fn phi_trace_variant(
    lc: &LinearCombination,
    cfg: &HypothesisConfig,
    n_range: std::ops::RangeInclusive<usize>,
    max_bits: u32,
    variant: BracketVariant,
) -> Result<CertifyTrace> {
    cfg.validate()?;
    let table = lc.table();
    let cap = max_bits.min(MAX_PRECISION_BITS);
    let mut rows = Vec::new();
    for n in n_range {
        if n >= table.n_max() {
            return Err(Error::InvalidInput(format!(
                "trace index {n} needs tail data beyond the table horizon {}",
                table.n_max()
            )));
        }
        let bracket = bracket_log2(lc, cfg, n, cap.min(256), variant)?;
        let mut bits: u32 = 128;
        let row = loop {
            match tail_enclosure(lc, cfg, n, bits) {
                Ok(gamma) => {
                    let phi = gamma.mul(&bracket);
                    let verdict = if phi.log2_hi().is_negative() {
                        PhiVerdict::PhiBelowOne
                    } else if !phi.log2_lo().is_negative() {
                        PhiVerdict::PhiAtLeastOne
                    } else {
                        PhiVerdict::Undetermined
                    };
                    if verdict == PhiVerdict::Undetermined && bits < cap {
                        bits = (bits * 2).min(cap);
                        continue;
                    }
                    break TraceRow {
                        n,
                        log2_gamma: Some(gamma),
                        log2_bracket: bracket.clone(),
                        log2_phi: Some(phi),
                        verdict,
                    };
                }
                Err(Error::Undetermined { .. }) if bits < cap => {
                    bits = (bits * 2).min(cap);
                }
                Err(Error::Undetermined { .. }) => {
                    break TraceRow {
                        n,
                        log2_gamma: None,
                        log2_bracket: bracket.clone(),
                        log2_phi: None,
                        verdict: PhiVerdict::Undetermined,
                    };
                }
                Err(e) => return Err(e),
            }
        };
        rows.push(row);
    }
    Ok(CertifyTrace { d: cfg.d, variant, rows })
}

/// log2 of the full bracket (2^exp prod |alpha_{1,n}|^K)^(D D_N).
fn bracket_log2(
    lc: &LinearCombination,
    cfg: &HypothesisConfig,
    n_upper: usize,
    bits: u32,
    variant: BracketVariant,
) -> Result<LogMagnitude> {
    let table = lc.table();
    let exp_part = bracket_exponent(cfg, n_upper, variant, bits)?;
    let mut inner = DyadicInterval::new(exp_part.lo().clone(), exp_part.hi().clone());
    let kk = BigInt::from(cfg.k as u32);
    for n in 1..=n_upper {
        let l = table.alpha(n, 1).log2_modulus(bits)?;
        inner = inner.add(&l.mul_int(&kk));
    }
    let mut dn = BigInt::one();
    for n in 1..=n_upper {
        dn *= BigInt::from(cfg.d_n(n)?);
    }
    let scale = BigInt::from(cfg.d) * dn;
    let scaled = inner.mul_int(&scale);
    Ok(LogMagnitude::new(scaled.lo().clone(), scaled.hi().clone()))
}

/// Final dispatch on a trace: any certified Phi < 1 row is evidence
/// consistent with deg gamma > D (explicitly evidence, not proof).
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct DegreeEvidence {
    #[serde(rename = "D")]
    pub d: u32,
    pub evidence_found: bool,
    pub witness_ns: Vec<usize>,
    pub message: String,
}

pub fn verdict(trace: &CertifyTrace) -> Result<DegreeEvidence> {
    if trace.rows.is_empty() {
        return Err(Error::InvalidInput("empty trace".into()));
    }
    let witness_ns: Vec<usize> = trace
        .rows
        .iter()
        .filter(|r| r.verdict == PhiVerdict::PhiBelowOne)
        .map(|r| r.n)
        .collect();
    let message = if witness_ns.is_empty() {
        format!("no evidence in range for degree > {}", trace.d)
    } else {
        format!(
            "EVIDENCE consistent with deg gamma > {} at N = {:?} (certified Phi(N) < 1; \
             finite-N values do not constitute proof)",
            trace.d, witness_ns
        )
    };
    Ok(DegreeEvidence {
        d: trace.d,
        evidence_found: !witness_ns.is_empty(),
        witness_ns,
        message,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypotheses::TableEntry;
    use crate::intpoly::IntPolynomial;
    use crate::sequences::{oscillating_tower, sylvester, TowerStep};

    fn k1_cfg(n: usize) -> HypothesisConfig {
        HypothesisConfig::k1_default(1, vec![1; n])
    }

    #[test]
    fn partial_sum_rational_rows() {
        // 1/2 + 1/3 = 5/6 with minpoly 6x - 5.
        let table = SequenceTable::from_integers(&[2.into(), 3.into()]).unwrap();
        let lc = LinearCombination::new(vec![BigInt::one()], &table).unwrap();
        let g = partial_sum_exact(&lc, 2).unwrap();
        assert_eq!(g.minpoly(), &IntPolynomial::from_i64(&[-5, 6]));
    }

    #[test]
    fn partial_sum_surd_example() {
        // gamma_1 = 1/(1+sqrt2) = sqrt2 - 1 with minpoly x^2 + 2x - 1.
        let one_plus = AlgebraicNumber::make(
            IntPolynomial::from_i64(&[-1, -2, 1]),
            ComplexBox::new(
                DyadicInterval::new(Dyadic::from_int(2), Dyadic::from_int(3)),
                DyadicInterval::point(Dyadic::zero()),
            ),
        )
        .unwrap();
        let table = SequenceTable::from_algebraic(vec![one_plus], None).unwrap();
        let lc = LinearCombination::new(vec![BigInt::one()], &table).unwrap();
        let g = partial_sum_exact(&lc, 1).unwrap();
        assert_eq!(g.minpoly(), &IntPolynomial::from_i64(&[-1, 2, 1]));
    }

    #[test]
    fn partial_sum_cancellation() {
        // K = 2 identical rows with betas (1, -1): gamma = 0.
        let a = AlgebraicNumber::from_integer(5);
        let entries = vec![
            TableEntry { n: 1, i: 1, alpha: a.clone(), b: BigInt::one() },
            TableEntry { n: 1, i: 2, alpha: a, b: BigInt::one() },
        ];
        let table = SequenceTable::new(2, 1, entries).unwrap();
        let lc =
            LinearCombination::new(vec![BigInt::one(), BigInt::from(-1)], &table).unwrap();
        let g = partial_sum_exact(&lc, 1).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn betas_cleared_from_rationals() {
        let table = SequenceTable::from_integers(&[2.into(), 3.into()]).unwrap();
        let lc = LinearCombination::from_rationals(
            &[BigRational::new(1.into(), 2.into())],
            &table,
        )
        .unwrap();
        assert_eq!(lc.betas(), &[BigInt::one()]);
        assert!(LinearCombination::new(vec![BigInt::zero()], &table).is_err());
    }

    #[test]
    fn mahler_chain_on_surd() {
        // K=1, b=1, alpha_1 = 1+sqrt2: M(gamma_1) = 1+sqrt2 ~ 2.414,
        // rhs = (2 * house(1+sqrt2))^(D_1=2) ~ 23.3.
        let one_plus = AlgebraicNumber::make(
            IntPolynomial::from_i64(&[-1, -2, 1]),
            ComplexBox::new(
                DyadicInterval::new(Dyadic::from_int(2), Dyadic::from_int(3)),
                DyadicInterval::point(Dyadic::zero()),
            ),
        )
        .unwrap();
        let table = SequenceTable::from_algebraic(vec![one_plus], None).unwrap();
        let lc = LinearCombination::new(vec![BigInt::one()], &table).unwrap();
        let (lhs, rhs, ok) = mahler_chain_check(&lc, 1, &Dyadic::pow2(-40)).unwrap();
        assert!(ok);
        let lhs_v = lhs.to_interval(64).unwrap();
        assert!((lhs_v.midpoint().to_f64() - 2.41421356).abs() < 1e-6);
        let rhs_v = rhs.to_interval(64).unwrap();
        assert!((rhs_v.midpoint().to_f64() - 23.3137).abs() < 1e-2);
    }

    #[test]
    fn mahler_chain_k2_toy() {
        // Rows [2], [3], b = 1, betas (1,1): gamma = 5/6, M = 6;
        // rhs = (2^2 * 2 * 3)^1 = 24.
        let entries = vec![
            TableEntry { n: 1, i: 1, alpha: AlgebraicNumber::from_integer(2), b: BigInt::one() },
            TableEntry { n: 1, i: 2, alpha: AlgebraicNumber::from_integer(3), b: BigInt::one() },
        ];
        let table = SequenceTable::new(2, 1, entries).unwrap();
        let lc = LinearCombination::new(vec![BigInt::one(), BigInt::one()], &table).unwrap();
        let (lhs, rhs, ok) = mahler_chain_check(&lc, 1, &Dyadic::pow2(-40)).unwrap();
        assert!(ok);
        assert!(lhs.to_interval(64).unwrap().contains(&Dyadic::from_int(6)));
        assert!(rhs.to_interval(64).unwrap().contains(&Dyadic::from_int(24)));
    }

    #[test]
    fn mahler_chain_zero_gamma() {
        let a = AlgebraicNumber::from_integer(5);
        let entries = vec![
            TableEntry { n: 1, i: 1, alpha: a.clone(), b: BigInt::one() },
            TableEntry { n: 1, i: 2, alpha: a, b: BigInt::one() },
        ];
        let table = SequenceTable::new(2, 1, entries).unwrap();
        let lc =
            LinearCombination::new(vec![BigInt::one(), BigInt::from(-1)], &table).unwrap();
        let (lhs, _, ok) = mahler_chain_check(&lc, 1, &Dyadic::pow2(-30)).unwrap();
        assert!(ok); // M(0) = 1 <= anything
        assert!(lhs.log2_hi().to_f64() < 1e-6);
    }

    #[test]
    fn sylvester_tail_telescopes() {
        // Enclosure of |gamma(N)| must contain 1/(a_{N+1} - 1).
        let seq = sylvester(2, 8).unwrap();
        let table = SequenceTable::from_integers(&seq).unwrap();
        let lc = LinearCombination::new(vec![BigInt::one()], &table).unwrap();
        let mut cfg = k1_cfg(8);
        cfg.a = BigRational::new(1.into(), 2.into());
        for n in [2usize, 3] {
            let gamma = tail_enclosure(&lc, &cfg, n, 160).unwrap();
            let exact = BigRational::new(BigInt::one(), &seq[n] - BigInt::one());
            let iv = gamma.to_interval(128).unwrap();
            assert!(
                iv.lo().to_rational() <= exact && exact <= iv.hi().to_rational(),
                "telescoped tail 1/(a_{}-1) escaped the enclosure",
                n + 1
            );
        }
    }

    #[test]
    fn phi_trace_tower_alternation() {
        let seq = oscillating_tower(
            &Dyadic::from_int(2),
            &Dyadic::from_int(3),
            &[TowerStep::Lo, TowerStep::Hi],
            &BigRational::one(),
            1,
            1,
            &[1; 10],
            8,
        )
        .unwrap();
        let table = SequenceTable::from_integers(&seq).unwrap();
        let lc = LinearCombination::new(vec![BigInt::one()], &table).unwrap();
        let cfg = k1_cfg(8);
        let trace = phi_trace(&lc, &cfg, 1..=6, 4096).unwrap();
        assert_eq!(trace.rows.len(), 6);
        let verdicts: Vec<PhiVerdict> = trace.rows.iter().map(|r| r.verdict).collect();
        // Phi dips below 1 exactly at the upward base jumps.
        assert_eq!(
            verdicts,
            vec![
                PhiVerdict::PhiBelowOne,
                PhiVerdict::PhiAtLeastOne,
                PhiVerdict::PhiBelowOne,
                PhiVerdict::PhiAtLeastOne,
                PhiVerdict::PhiBelowOne,
                PhiVerdict::PhiAtLeastOne,
            ]
        );
        // The below-one minima strictly decrease across the jumps.
        let his: Vec<f64> = trace
            .rows
            .iter()
            .filter(|r| r.verdict == PhiVerdict::PhiBelowOne)
            .map(|r| r.log2_phi.as_ref().unwrap().log2_hi().to_f64())
            .collect();
        assert!(his.windows(2).all(|w| w[1] < w[0]), "minima not decreasing: {his:?}");
        // Bracket grows strictly in N.
        for w in trace.rows.windows(2) {
            assert!(w[0].log2_bracket.log2_hi() < w[1].log2_bracket.log2_lo());
        }
        // Evidence dispatch.
        let v = verdict(&trace).unwrap();
        assert!(v.evidence_found);
        assert_eq!(v.witness_ns, vec![1, 3, 5]);
        assert!(v.message.contains("EVIDENCE"));
    }

    #[test]
    fn phi_trace_large_d_flips_verdicts() {
        let seq = oscillating_tower(
            &Dyadic::from_int(2),
            &Dyadic::from_int(3),
            &[TowerStep::Lo, TowerStep::Hi],
            &BigRational::one(),
            1,
            1,
            &[1; 10],
            8,
        )
        .unwrap();
        let table = SequenceTable::from_integers(&seq).unwrap();
        let lc = LinearCombination::new(vec![BigInt::one()], &table).unwrap();
        let mut cfg = k1_cfg(8);
        cfg.d = 40;
        let trace = phi_trace(&lc, &cfg, 1..=4, 1024).unwrap();
        assert!(trace.rows.iter().all(|r| r.verdict == PhiVerdict::PhiAtLeastOne));
        let v = verdict(&trace).unwrap();
        assert!(!v.evidence_found);
        assert!(v.message.contains("no evidence"));
    }

    #[test]
    fn bracket_variants_are_comparable() {
        let cfg = k1_cfg(8);
        for variant in
            [BracketVariant::Canonical, BracketVariant::ProductPower, BracketVariant::HalfIndex]
        {
            let e = bracket_exponent(&cfg, 4, variant, 96).unwrap();
            assert!(e.lo().is_positive());
        }
        // With D = 1, K = 1, ds = 1: canonical at N=4 is 2^(0.9*3) = 6.5ish,
        // product-power is (2^3)^0.9 identical here.
        let c = bracket_exponent(&k1_cfg(8), 4, BracketVariant::Canonical, 96).unwrap();
        let p = bracket_exponent(&k1_cfg(8), 4, BracketVariant::ProductPower, 96).unwrap();
        assert!(c.overlaps(&p));
    }

    #[test]
    fn csv_shape() {
        let seq = oscillating_tower(
            &Dyadic::from_int(2),
            &Dyadic::from_int(3),
            &[TowerStep::Lo, TowerStep::Hi],
            &BigRational::one(),
            1,
            1,
            &[1; 9],
            8,
        )
        .unwrap();
        let table = SequenceTable::from_integers(&seq).unwrap();
        let lc = LinearCombination::new(vec![BigInt::one()], &table).unwrap();
        let trace = phi_trace(&lc, &k1_cfg(8), 1..=3, 512).unwrap();
        let csv = trace.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("N,log2_gamma_lo"));
        assert!(lines[1].ends_with("phi_below_one") || lines[1].ends_with("phi_at_least_one"));
        // JSON roundtrip.
        let js = serde_json::to_string(&trace).unwrap();
        let back: CertifyTrace = serde_json::from_str(&js).unwrap();
        assert_eq!(back.rows.len(), trace.rows.len());
    }
}
