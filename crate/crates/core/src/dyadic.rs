//! Dyadic rationals (`m·2^e`), directed rounding, and the interval /
//! complex-box / log-magnitude types built on them.
//!
//! All certified enclosures in this crate bottom out here: `log2_enclosure`
//! and `exp2_enclosure` return dyadic brackets proved to contain the exact
//! real value, so every downstream interval is sound by construction.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Rounding direction for operations that cannot be exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    /// Toward minus infinity.
    Down,
    /// Toward plus infinity.
    Up,
}

/// A dyadic rational `mant · 2^exp`, normalized so that `mant` is odd
/// (or zero, in which case `exp` is 0).
///
/// Addition, subtraction and multiplication are exact; division, square
/// roots, logs and exponentials take an explicit precision and rounding
/// direction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Dyadic {
        Dyadic::new(v.into(), 0)
    }

    /// 2^k as a dyadic.
    pub fn pow2(k: i64) -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: k }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn sign(&self) -> i32 {
        match self.mant.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    /// Exact scaling by 2^k.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.mant.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Number of significant bits of the mantissa.
    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// floor(log2 |self|) for nonzero values: the unique k with
    /// 2^k <= |self| < 2^(k+1).
    pub fn ilog2_floor(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.mant.bits() as i64 - 1
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.mant.is_zero() {
            return other.clone();
        }
        if other.mant.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.mant.is_zero() || other.mant.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: &self.mant * &other.mant, exp: self.exp + other.exp }
    }

    pub fn square(&self) -> Dyadic {
        self.mul(self)
    }

    pub fn mul_int(&self, k: &BigInt) -> Dyadic {
        Dyadic::new(&self.mant * k, self.exp)
    }

    /// Round to at most `prec` significant mantissa bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        // BigInt >> rounds toward minus infinity, which is exactly Down.
        let mut q = &self.mant >> shift;
        if dir == Round::Up {
            let back = &q << shift;
            if back != self.mant {
                q += 1;
            }
        }
        Dyadic::new(q, self.exp + shift as i64)
    }

    /// Largest integer <= self.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    /// Smallest integer >= self.
    pub fn ceil_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            let f = &self.mant >> (-self.exp) as u64;
            if (&f << (-self.exp) as u64) == self.mant {
                f
            } else {
                f + 1
            }
        }
    }

    /// The fractional part `self - floor(self)`, in [0, 1).
    pub fn fract(&self) -> Dyadic {
        self.sub(&Dyadic::from_int(self.floor_int()))
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0 || self.mant.is_zero()
    }

    /// Directed division to roughly `prec` significant bits.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let na = self.mant.bits() as i64;
        let nb = other.mant.bits() as i64;
        let s = (prec as i64 + nb - na + 2).max(0) as u64;
        let num = &self.mant << s;
        let q = match dir {
            Round::Down => num.div_floor(&other.mant),
            Round::Up => num.div_ceil(&other.mant),
        };
        Dyadic::new(q, self.exp - other.exp - s as i64)
    }

    /// Directed square root (self >= 0) with about `prec` significant bits.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let bits = self.mant.bits() as i64;
        // Scale mantissa to >= 2*prec bits with an even net exponent.
        let mut s = (2 * prec as i64 + 4 - bits).max(0);
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let m = &self.mant << s as u64;
        let r = m.sqrt();
        let half = (self.exp - s) / 2;
        match dir {
            Round::Down => Dyadic::new(r, half),
            Round::Up => {
                if &r * &r == m {
                    Dyadic::new(r, half)
                } else {
                    Dyadic::new(r + 1, half)
                }
            }
        }
    }

    pub fn min(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest-ish f64, for display only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(64, Round::Down);
        let mut m = 0f64;
        for b in r.mant.to_bytes_be().1 {
            m = m * 256.0 + b as f64;
        }
        if r.mant.is_negative() {
            m = -m;
        }
        m * (r.exp as f64).exp2()
    }

    /// Decimal string with `digits` fractional digits, rounded in `dir`.
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        let ten = BigInt::from(10u32).pow(digits);
        let scaled = self.mul_int(&ten);
        let int = match dir {
            Round::Down => scaled.floor_int(),
            Round::Up => scaled.ceil_int(),
        };
        let neg = int.is_negative();
        let digits_str = int.abs().to_string();
        let digits_str = if digits_str.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - digits_str.len()), digits_str)
        } else {
            digits_str
        };
        let split = digits_str.len() - digits as usize;
        let (ip, fp) = digits_str.split_at(split);
        let s = if digits == 0 { ip.to_string() } else { format!("{ip}.{fp}") };
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (~{})", self, self.to_f64())
    }
}

/// Canonical text form `m*2^e`; small integers print without the power.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if (0..=64).contains(&self.exp) {
            write!(f, "{}", &self.mant << self.exp as u64)
        } else {
            write!(f, "{}*2^{}", self.mant, self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Dyadic> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            t.trim().parse::<BigInt>().map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}")))
        };
        if let Some((m, e)) = s.split_once("*2^") {
            let mant = parse_int(m)?;
            let exp: i64 =
                e.trim().parse().map_err(|e| Error::Parse(format!("bad exponent: {e}")))?;
            Ok(Dyadic::new(mant, exp))
        } else {
            Ok(Dyadic::new(parse_int(s)?, 0))
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.sign();
        let sb = other.sign();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare magnitudes via ilog2 first so that
        // wildly different exponents never force a giant alignment shift.
        let la = self.ilog2_floor();
        let lb = other.ilog2_floor();
        if la != lb {
            let mag = la.cmp(&lb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl serde::Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Dyadic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Dyadic, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Certified enclosure of log2(x) for x > 0: returns (lo, hi) with
/// lo <= log2(x) <= hi and hi - lo <= 2^-frac_bits.
///
/// Bit extraction by repeated squaring with directed rounding; powers of
/// two come out exact.
pub fn log2_enclosure(x: &Dyadic, frac_bits: u32) -> Result<(Dyadic, Dyadic)> {
    if !x.is_positive() {
        return Err(Error::InvalidInput("log2 of a nonpositive value".into()));
    }
    if x.mant.is_one() {
        // Exactly a power of two.
        let e = Dyadic::from_int(x.exp);
        return Ok((e.clone(), e));
    }
    let int_part = x.ilog2_floor();
    // y = x / 2^int_part lies in [1, 2).
    let y = x.mul_pow2(-int_part);
    let q = frac_bits + 2;
    let p = frac_bits + 16;
    let mut u = y.round(p, Round::Down);
    let mut bits = BigInt::zero();
    let two = Dyadic::from_int(2);
    for _ in 0..q {
        u = u.square().round(p, Round::Down);
        bits <<= 1;
        if u >= two {
            u = u.mul_pow2(-1);
            bits += 1;
        }
    }
    // True value with the same bit decisions stays within relative
    // 2^(q+1-p) of u, and u is in [1,2), so log2 of the residual is in
    // [0, 2): bracket with integer slack 2 at 2^-q.
    let base = Dyadic::from_int(int_part);
    let lo = base.add(&Dyadic::new(bits.clone(), -(q as i64)));
    let hi = base.add(&Dyadic::new(bits + 2, -(q as i64)));
    Ok((lo, hi))
}

/// Certified enclosure of 2^x with relative width about 2^-prec.
///
/// Splits off the integer part and builds the fractional power from
/// repeated certified square roots of two. Errors if the integer part is
/// too large to fit an exponent.
pub fn exp2_enclosure(x: &Dyadic, prec: u32) -> Result<(Dyadic, Dyadic)> {
    let n = x.floor_int();
    let n_i64: i64 = i64::try_from(&n)
        .map_err(|_| Error::InvalidInput(format!("exp2 exponent {n} out of range")))?;
    let f = x.sub(&Dyadic::from_int(n.clone()));
    if f.is_zero() {
        let p = Dyadic::pow2(n_i64);
        return Ok((p.clone(), p));
    }
    let work = prec + 16;
    // Round the fractional part both ways to at most `work` fractional bits.
    let f_lo = round_fraction(&f, work, Round::Down);
    let f_hi = round_fraction(&f, work, Round::Up);
    let lo = exp2_fraction(&f_lo, work, Round::Down);
    let hi = if f_hi >= Dyadic::one() {
        // Rounding up crossed 1; 2^f < 2.
        Dyadic::from_int(2)
    } else {
        exp2_fraction(&f_hi, work, Round::Up)
    };
    Ok((lo.mul_pow2(n_i64), hi.mul_pow2(n_i64)))
}

/// Round a value in [0,1) to at most `frac_bits` fractional bits.
fn round_fraction(f: &Dyadic, frac_bits: u32, dir: Round) -> Dyadic {
    if f.exp >= -(frac_bits as i64) {
        return f.clone();
    }
    let shift = (-(f.exp) - frac_bits as i64) as u64;
    let mut q = &f.mant >> shift;
    if dir == Round::Up && (&q << shift) != f.mant {
        q += 1;
    }
    Dyadic::new(q, f.exp + shift as i64)
}

/// Directed 2^f for f in [0,1) with at most `work` fractional bits,
/// via the chain s_j = 2^(1/2^j) of directed square roots.
fn exp2_fraction(f: &Dyadic, work: u32, dir: Round) -> Dyadic {
    debug_assert!(!f.is_negative() && *f < Dyadic::one());
    if f.is_zero() {
        return Dyadic::one();
    }
    let k = (-f.exp) as u64; // f = mant / 2^k with mant < 2^k
    let mut acc = Dyadic::one();
    let mut s = Dyadic::from_int(2);
    // Walk bits of the mantissa from the top: bit for weight 2^-1 first.
    for j in 1..=k {
        s = s.sqrt(work + 8, dir); // s = 2^(1/2^j), rounded in `dir`
        if f.mant.bit(k - j) {
            acc = acc.mul(&s).round(work + 8, dir);
        }
    }
    // Directed rounding everywhere keeps acc on the `dir` side: sqrt and
    // mul are monotone on positive values.
    acc
}

/// A closed interval [lo, hi] of dyadic rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct DyadicInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> DyadicInterval {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        DyadicInterval { lo, hi }
    }

    pub fn point(v: Dyadic) -> DyadicInterval {
        DyadicInterval { lo: v.clone(), hi: v }
    }

    pub fn from_int<T: Into<BigInt> + Clone>(v: T) -> DyadicInterval {
        DyadicInterval::point(Dyadic::from_int(v))
    }

    pub fn zero() -> DyadicInterval {
        DyadicInterval::point(Dyadic::zero())
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_interval(&self, other: &DyadicInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &DyadicInterval) -> Option<DyadicInterval> {
        let lo = Dyadic::max(&self.lo, &other.lo);
        let hi = Dyadic::min(&self.hi, &other.hi);
        if lo <= hi {
            Some(DyadicInterval::new(lo, hi))
        } else {
            None
        }
    }

    pub fn hull(&self, other: &DyadicInterval) -> DyadicInterval {
        DyadicInterval::new(Dyadic::min(&self.lo, &other.lo), Dyadic::max(&self.hi, &other.hi))
    }

    pub fn add(&self, other: &DyadicInterval) -> DyadicInterval {
        DyadicInterval::new(self.lo.add(&other.lo), self.hi.add(&other.hi))
    }

    pub fn sub(&self, other: &DyadicInterval) -> DyadicInterval {
        DyadicInterval::new(self.lo.sub(&other.hi), self.hi.sub(&other.lo))
    }

    pub fn neg(&self) -> DyadicInterval {
        DyadicInterval::new(self.hi.neg(), self.lo.neg())
    }

    pub fn mul(&self, other: &DyadicInterval) -> DyadicInterval {
        let c = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        DyadicInterval::new(lo, hi)
    }

    pub fn square(&self) -> DyadicInterval {
        if !self.lo.is_negative() {
            DyadicInterval::new(self.lo.square(), self.hi.square())
        } else if !self.hi.is_positive() {
            DyadicInterval::new(self.hi.square(), self.lo.square())
        } else {
            let m = Dyadic::max(&self.lo.abs(), &self.hi.abs());
            DyadicInterval::new(Dyadic::zero(), m.square())
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> DyadicInterval {
        if k.is_negative() {
            DyadicInterval::new(self.hi.mul_int(k), self.lo.mul_int(k))
        } else {
            DyadicInterval::new(self.lo.mul_int(k), self.hi.mul_int(k))
        }
    }

    pub fn mul_pow2(&self, k: i64) -> DyadicInterval {
        DyadicInterval::new(self.lo.mul_pow2(k), self.hi.mul_pow2(k))
    }

    /// Outward rounding to `prec` significant bits per endpoint.
    pub fn round_out(&self, prec: u32) -> DyadicInterval {
        DyadicInterval::new(self.lo.round(prec, Round::Down), self.hi.round(prec, Round::Up))
    }

    /// Reciprocal with outward rounding; the interval must not contain 0.
    pub fn recip(&self, prec: u32) -> DyadicInterval {
        assert!(!self.contains_zero(), "reciprocal of interval containing zero");
        let one = Dyadic::one();
        DyadicInterval::new(
            one.div(&self.hi, prec, Round::Down),
            one.div(&self.lo, prec, Round::Up),
        )
    }

    pub fn div(&self, other: &DyadicInterval, prec: u32) -> DyadicInterval {
        self.mul(&other.recip(prec)).round_out(prec + 4)
    }

    /// Directed scaling by a rational p/q (exact multiply, directed divide).
    pub fn mul_rational(&self, r: &BigRational, prec: u32) -> DyadicInterval {
        let scaled = self.mul_int(r.numer());
        let q = Dyadic::from_int(r.denom().clone());
        let (a, b) = if r.denom().is_negative() { (&scaled.hi, &scaled.lo) } else { (&scaled.lo, &scaled.hi) };
        DyadicInterval::new(a.div(&q, prec, Round::Down), b.div(&q, prec, Round::Up))
    }

    /// Outward square root; requires lo >= 0.
    pub fn sqrt(&self, prec: u32) -> DyadicInterval {
        DyadicInterval::new(self.lo.sqrt(prec, Round::Down), self.hi.sqrt(prec, Round::Up))
    }

    /// abs of all values in the interval.
    pub fn abs(&self) -> DyadicInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            DyadicInterval::new(Dyadic::zero(), Dyadic::max(&self.lo.abs(), &self.hi.abs()))
        }
    }

    pub fn max_with(&self, other: &DyadicInterval) -> DyadicInterval {
        DyadicInterval::new(Dyadic::max(&self.lo, &other.lo), Dyadic::max(&self.hi, &other.hi))
    }

    /// True when every value in self is strictly below every value in other.
    pub fn certainly_lt(&self, other: &DyadicInterval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &DyadicInterval) -> bool {
        self.hi <= other.lo
    }

    pub fn overlaps(&self, other: &DyadicInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Relative width (hi-lo)/|lo| <= tol, certified; lo must be nonzero
    /// for a meaningful answer unless the interval is a point.
    pub fn rel_width_le(&self, tol: &Dyadic) -> bool {
        if self.is_point() {
            return true;
        }
        if self.lo.is_zero() || self.lo.sign() != self.hi.sign() {
            return false;
        }
        // (hi - lo) <= tol * |lo|
        self.width() <= tol.mul(&self.lo.abs())
    }
}

impl fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} , {}] (~[{}, {}])", self.lo, self.hi, self.lo.to_f64(), self.hi.to_f64())
    }
}

impl serde::Serialize for DyadicInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo.to_string(), self.hi.to_string()].serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for DyadicInterval {
    fn deserialize<D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<DyadicInterval, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(d)?;
        let lo: Dyadic = lo.parse().map_err(serde::de::Error::custom)?;
        let hi: Dyadic = hi.parse().map_err(serde::de::Error::custom)?;
        if lo > hi {
            return Err(serde::de::Error::custom("interval endpoints out of order"));
        }
        Ok(DyadicInterval::new(lo, hi))
    }
}

/// Certified log2 of a positive interval.
pub fn interval_log2(x: &DyadicInterval, frac_bits: u32) -> Result<DyadicInterval> {
    let (lo, _) = log2_enclosure(x.lo(), frac_bits)?;
    let (_, hi) = log2_enclosure(x.hi(), frac_bits)?;
    Ok(DyadicInterval::new(lo, hi))
}

/// Certified 2^x over an interval.
pub fn interval_exp2(x: &DyadicInterval, prec: u32) -> Result<DyadicInterval> {
    let (lo, _) = exp2_enclosure(x.lo(), prec)?;
    let (_, hi) = exp2_enclosure(x.hi(), prec)?;
    Ok(DyadicInterval::new(lo, hi))
}

/// Certified x^r for a nonnegative interval x and rational r > 0,
/// computed as 2^(r*log2 x). A lower endpoint of zero maps to zero.
pub fn interval_pow_rational(
    x: &DyadicInterval,
    r: &BigRational,
    prec: u32,
) -> Result<DyadicInterval> {
    assert!(r.is_positive());
    if x.lo().is_negative() {
        return Err(Error::InvalidInput("rational power of a negative interval".into()));
    }
    let hi = if x.hi().is_zero() {
        Dyadic::zero()
    } else {
        let (_, lh) = log2_enclosure(x.hi(), prec + 8)?;
        let e = Dyadic::from_int(r.numer().clone())
            .mul(&lh)
            .div(&Dyadic::from_int(r.denom().clone()), prec + 8, Round::Up);
        exp2_enclosure(&e, prec)?.1
    };
    let lo = if x.lo().is_zero() {
        Dyadic::zero()
    } else {
        let (ll, _) = log2_enclosure(x.lo(), prec + 8)?;
        let e = Dyadic::from_int(r.numer().clone())
            .mul(&ll)
            .div(&Dyadic::from_int(r.denom().clone()), prec + 8, Round::Down);
        exp2_enclosure(&e, prec)?.0
    };
    Ok(DyadicInterval::new(lo, hi))
}

/// An axis-aligned rectangle in the complex plane with dyadic sides.
#[derive(Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ComplexBox {
    pub re: DyadicInterval,
    pub im: DyadicInterval,
}

impl ComplexBox {
    pub fn new(re: DyadicInterval, im: DyadicInterval) -> ComplexBox {
        ComplexBox { re, im }
    }

    pub fn point(re: Dyadic, im: Dyadic) -> ComplexBox {
        ComplexBox { re: DyadicInterval::point(re), im: DyadicInterval::point(im) }
    }

    pub fn real_point(re: Dyadic) -> ComplexBox {
        ComplexBox::point(re, Dyadic::zero())
    }

    pub fn is_real_line(&self) -> bool {
        self.im.is_point() && self.im.lo().is_zero()
    }

    pub fn add(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re.add(&other.re), im: self.im.add(&other.im) }
    }

    pub fn sub(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re.sub(&other.re), im: self.im.sub(&other.im) }
    }

    pub fn neg(&self) -> ComplexBox {
        ComplexBox { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> ComplexBox {
        ComplexBox { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> ComplexBox {
        ComplexBox { re: self.re.mul_int(k), im: self.im.mul_int(k) }
    }

    pub fn modulus_sq(&self) -> DyadicInterval {
        self.re.square().add(&self.im.square())
    }

    /// Certified |z| over the box.
    pub fn modulus(&self, prec: u32) -> DyadicInterval {
        self.modulus_sq().sqrt(prec)
    }

    /// Certified 1/z; the box must exclude the origin.
    pub fn recip(&self, prec: u32) -> ComplexBox {
        let d = self.modulus_sq();
        assert!(d.lo().is_positive(), "reciprocal of a box containing zero");
        let dr = d.recip(prec + 4);
        ComplexBox {
            re: self.re.mul(&dr).round_out(prec),
            im: self.im.neg().mul(&dr).round_out(prec),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains_point(&self, re: &Dyadic, im: &Dyadic) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains_box(&self, other: &ComplexBox) -> bool {
        self.re.contains_interval(&other.re) && self.im.contains_interval(&other.im)
    }

    pub fn intersect(&self, other: &ComplexBox) -> Option<ComplexBox> {
        Some(ComplexBox { re: self.re.intersect(&other.re)?, im: self.im.intersect(&other.im)? })
    }

    pub fn is_disjoint(&self, other: &ComplexBox) -> bool {
        !self.re.overlaps(&other.re) || !self.im.overlaps(&other.im)
    }

    pub fn mid(&self) -> (Dyadic, Dyadic) {
        (self.re.midpoint(), self.im.midpoint())
    }

    pub fn max_side(&self) -> Dyadic {
        Dyadic::max(&self.re.width(), &self.im.width())
    }

    pub fn round_out(&self, prec: u32) -> ComplexBox {
        ComplexBox { re: self.re.round_out(prec), im: self.im.round_out(prec) }
    }

    /// Mirror image across the real axis.
    pub fn conj_box(&self) -> ComplexBox {
        self.conj()
    }
}

impl fmt::Debug for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "re {:?} im {:?}", self.re, self.im)
    }
}

/// A positive real carried as a certified enclosure of its base-2 log:
/// the represented value lies in [2^lo, 2^hi].
#[derive(Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LogMagnitude {
    lo: Dyadic,
    hi: Dyadic,
}

impl LogMagnitude {
    pub fn new(lo: Dyadic, hi: Dyadic) -> LogMagnitude {
        assert!(lo <= hi, "log-magnitude endpoints out of order");
        LogMagnitude { lo, hi }
    }

    pub fn exact(v: Dyadic) -> LogMagnitude {
        LogMagnitude { lo: v.clone(), hi: v }
    }

    /// log2 of 1.
    pub fn one() -> LogMagnitude {
        LogMagnitude::exact(Dyadic::zero())
    }

    pub fn log2_lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn log2_hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn log2_interval(&self) -> DyadicInterval {
        DyadicInterval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Enclose a positive dyadic interval.
    pub fn from_interval(x: &DyadicInterval, frac_bits: u32) -> Result<LogMagnitude> {
        let l = interval_log2(x, frac_bits)?;
        Ok(LogMagnitude { lo: l.lo().clone(), hi: l.hi().clone() })
    }

    pub fn from_log2_interval(x: DyadicInterval) -> LogMagnitude {
        LogMagnitude { lo: x.lo().clone(), hi: x.hi().clone() }
    }

    /// Magnitude product = log sum.
    pub fn mul(&self, other: &LogMagnitude) -> LogMagnitude {
        LogMagnitude { lo: self.lo.add(&other.lo), hi: self.hi.add(&other.hi) }
    }

    pub fn div(&self, other: &LogMagnitude) -> LogMagnitude {
        LogMagnitude { lo: self.lo.sub(&other.hi), hi: self.hi.sub(&other.lo) }
    }

    /// Magnitude power by a nonnegative integer = log scaling.
    pub fn pow_int(&self, k: &BigInt) -> LogMagnitude {
        assert!(!k.is_negative());
        LogMagnitude { lo: self.lo.mul_int(k), hi: self.hi.mul_int(k) }
    }

    /// Magnitude root: divide the log by d > 0 with outward rounding.
    pub fn root_int(&self, d: u64, prec: u32) -> LogMagnitude {
        let dd = Dyadic::from_int(BigInt::from(d));
        LogMagnitude {
            lo: self.lo.div(&dd, prec, Round::Down),
            hi: self.hi.div(&dd, prec, Round::Up),
        }
    }

    /// Back to linear domain.
    pub fn to_interval(&self, prec: u32) -> Result<DyadicInterval> {
        let (lo, _) = exp2_enclosure(&self.lo, prec)?;
        let (_, hi) = exp2_enclosure(&self.hi, prec)?;
        Ok(DyadicInterval::new(lo, hi))
    }

    /// Clamp the lower endpoint at 0 (magnitude at least 1).
    pub fn clamp_at_one(&self) -> LogMagnitude {
        let z = Dyadic::zero();
        LogMagnitude { lo: Dyadic::max(&self.lo, &z), hi: Dyadic::max(&self.hi, &z) }
    }
}

impl fmt::Debug for LogMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "log2 in [{} , {}] (~[{}, {}])", self.lo, self.hi, self.lo.to_f64(), self.hi.to_f64())
    }
}
